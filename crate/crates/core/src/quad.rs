//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature, plus helpers
//! that regularize a power-law endpoint singularity by substitution before
//! handing the integral to the adaptive scheme.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Stopping rule and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadOptions {
    pub fn new(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol: 1e-14,
            max_subdivisions: 4000,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// A quadrature result with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

impl Estimate {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Estimate { value, abs_err }
    }

    pub fn scale(self, factor: f64) -> Self {
        Estimate {
            value: self.value * factor,
            abs_err: self.abs_err * factor.abs(),
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            abs_err: self.abs_err + rhs.abs_err,
        }
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::default(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    // Error estimate sits at the rounding floor; splitting cannot help.
    at_floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> (f64, bool) {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && floor >= err {
        return (floor, true);
    }
    (err, false)
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let (err, at_floor) = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    Panel {
        a,
        b,
        value: res_k * half,
        err,
        at_floor,
    }
}

/// Integrates `f` over consecutive panels delimited by `breaks` (ascending),
/// refining the panel with the largest error estimate until the total error
/// satisfies `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: &QuadOptions) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&f, w[0], w[1]));
        }
    }
    if heap.is_empty() {
        return Ok(Estimate::default());
    }
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    let mut subdivisions = 0;
    // Panels that cannot be refined further (rounding floor or too narrow to
    // split); their contribution is final.
    let mut frozen_err = 0.0;
    let mut frozen_val = 0.0;
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.at_floor || !(mid > worst.a && mid < worst.b) {
            frozen_err += worst.err;
            frozen_val += worst.value;
            continue;
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::NoConvergence {
                subdivisions,
                estimate: total,
                abs_err: err,
                target: opts.abs_tol.max(opts.rel_tol * total.abs()),
            });
        }
        heap.push(gk21(&f, worst.a, mid));
        heap.push(gk21(&f, mid, worst.b));
        subdivisions += 1;
        // Re-sum rather than update incrementally to avoid drift.
        total = frozen_val + heap.iter().map(|p| p.value).sum::<f64>();
        err = frozen_err + heap.iter().map(|p| p.err).sum::<f64>();
    }
    if !total.is_finite() {
        return Err(Error::NoConvergence {
            subdivisions,
            estimate: total,
            abs_err: err,
            target: opts.abs_tol,
        });
    }
    Ok(Estimate::new(total, err))
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate> {
    if b < a {
        return integrate(f, b, a, opts).map(|e| e.scale(-1.0));
    }
    integrate_breaks(f, &[a, b], opts)
}

/// Substitution power that flattens an `x^beta` endpoint behaviour.
///
/// For `beta < 0` the map `x = len * u^p` with `p = 1/(1+beta)` turns
/// `x^beta dx` into a constant times `du`. For `beta >= 0` a quadratic map is
/// used, which smooths the fractional-power and logarithmic corrections that
/// still appear in the kernels of this crate.
pub fn singular_power(beta: f64) -> f64 {
    if beta < 0.0 {
        1.0 / (1.0 + beta)
    } else {
        2.0
    }
}

/// Integrates `g(offset)` over `offset in [0, len]` where `g` may behave like
/// `offset^beta` (`beta > -1`) as `offset -> 0`. The integrand receives the
/// offset from the singular endpoint, never a reconstructed abscissa.
pub fn integrate_from_singular<G: Fn(f64) -> f64>(
    g: G,
    len: f64,
    beta: f64,
    opts: &QuadOptions,
) -> Result<Estimate> {
    if !(len > 0.0) {
        return Ok(Estimate::default());
    }
    let p = singular_power(beta);
    let h = move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let up = u.powf(p - 1.0);
        let x = len * up * u;
        if x <= 0.0 {
            return 0.0;
        }
        g(x) * len * p * up
    };
    integrate(h, 0.0, 1.0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadOptions::new(1e-14)).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_negate() {
        let r = integrate(|x: f64| x.exp(), 1.0, 0.0, &QuadOptions::new(1e-13)).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn substitution_handles_strong_power_singularity() {
        // int_0^1 x^{-0.9} dx = 10
        let r = integrate_from_singular(|x: f64| x.powf(-0.9), 1.0, -0.9, &QuadOptions::new(1e-13)).unwrap();
        assert!((r.value - 10.0).abs() < 1e-11, "{:?}", r);
    }

    #[test]
    fn adaptive_handles_log_singularity() {
        // int_0^1 -ln x dx = 1
        let r = integrate_from_singular(|x: f64| -x.ln(), 1.0, 0.0, &QuadOptions::new(1e-13)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{:?}", r);
    }

    #[test]
    fn budget_exhaustion_reports_no_convergence() {
        let opts = QuadOptions {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_subdivisions: 3,
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &opts);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn breaks_are_respected() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = integrate_breaks(f, &[0.0, 0.3, 1.0], &QuadOptions::new(1e-14)).unwrap();
        assert!((r.value - (0.3 + 1.4)).abs() < 1e-14);
    }
}
