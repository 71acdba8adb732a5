//! Reference quadratures: double-exponential (tanh-sinh) and composite
//! Gauss-Legendre on meshes graded geometrically toward endpoint
//! singularities. Neither shares code with the adaptive Gauss-Kronrod path.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Level-refined tanh-sinh; refinement stops once successive levels agree.
    TanhSinh,
    /// Fixed-order composite Gauss-Legendre on graded panels.
    GradedGaussLegendre,
}

/// Power-law behaviour `|x - location|^exponent` of the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub location: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    /// Cap on tanh-sinh halvings, or on graded panels per endpoint.
    pub max_levels: usize,
    /// Largest panel of the Gauss-Legendre mesh.
    pub max_panel: f64,
    pub singularities: Vec<Singularity>,
}

impl QuadratureSpec {
    pub fn new(scheme: Scheme, abs_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::domain("QuadratureSpec", abs_tol, "tolerance > 0"));
        }
        Ok(QuadratureSpec {
            scheme,
            abs_tol,
            max_levels: match scheme {
                Scheme::TanhSinh => 12,
                Scheme::GradedGaussLegendre => 400,
            },
            max_panel: 0.5,
            singularities: Vec::new(),
        })
    }

    pub fn with_singularity(mut self, location: f64, exponent: f64) -> Self {
        self.singularities.push(Singularity { location, exponent });
        self
    }

    pub fn with_max_panel(mut self, max_panel: f64) -> Self {
        self.max_panel = max_panel;
        self
    }

    /// `int_a^b f`. Annotated singularities inside `(a, b)` become break
    /// points; those at `a` or `b` steer the endpoint treatment. Integrands
    /// with a strong singularity away from zero lose the part within an ulp
    /// of it; pass offsets to [`tanh_sinh`] directly when that matters.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        if b < a {
            return self.integrate(f, b, a).map(|e| e.scale(-1.0));
        }
        if a == b {
            return Ok(Estimate::default());
        }
        if let Some(s) = self.singularities.iter().find(|s| s.exponent <= -1.0) {
            return Err(Error::domain("QuadratureSpec::integrate", s.exponent, "exponent > -1"));
        }
        let mut cuts = vec![a, b];
        cuts.extend(self.singularities.iter().map(|s| s.location).filter(|&x| x > a && x < b));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let exponent_at = |x: f64| {
            self.singularities
                .iter()
                .filter(|s| s.location == x)
                .map(|s| s.exponent)
                .reduce(f64::min)
        };
        let tol = self.abs_tol / (cuts.len() - 1) as f64;
        let mut total = Estimate::default();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            total = total
                + match self.scheme {
                    Scheme::TanhSinh => tanh_sinh(
                        |dl, dr| {
                            // Abscissae that round onto an endpoint are dropped.
                            let x = if dl <= dr { lo + dl } else { hi - dr };
                            if x <= lo || x >= hi {
                                0.0
                            } else {
                                f(x)
                            }
                        },
                        hi - lo,
                        tol,
                        self.max_levels,
                    )?,
                    Scheme::GradedGaussLegendre => {
                        let left = exponent_at(lo).map(Endpoint::singular);
                        let right = exponent_at(hi).map(Endpoint::singular);
                        let mesh = Mesh {
                            max_panel: self.max_panel,
                            tol,
                            max_levels: self.max_levels,
                        };
                        let coarse = mesh.integrate(&f, lo, hi, left, right, gl_rule(20), f64::abs);
                        let fine = mesh.integrate(&f, lo, hi, left, right, gl_rule(30), f64::abs);
                        Estimate::new(fine, (fine - coarse).abs())
                    }
                };
        }
        Ok(total)
    }
}

/// Tanh-sinh quadrature of `g(left_offset, right_offset)` over an interval of
/// length `len`; the two offsets sum to `len` and the smaller one is exact.
pub fn tanh_sinh<G: Fn(f64, f64) -> f64>(g: G, len: f64, tol: f64, max_levels: usize) -> Result<Estimate> {
    if !(len > 0.0) {
        return Ok(Estimate::default());
    }
    const T_MAX: f64 = 6.5;
    let term = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let v = (-2.0 * u.abs()).exp();
        let small = len * v / (1.0 + v);
        // Offsets this small carry no weight for an integrable singularity
        // and would only feed subnormals to the integrand.
        if small < 1e-280 {
            return 0.0;
        }
        let big = len / (1.0 + v);
        let weight = 0.5 * len * FRAC_PI_2 * t.cosh() * 4.0 * v / ((1.0 + v) * (1.0 + v));
        let (dl, dr) = if u < 0.0 { (small, big) } else { (big, small) };
        let y = g(dl, dr);
        if weight == 0.0 {
            0.0
        } else {
            weight * y
        }
    };
    let mut h = 1.0;
    let mut sum = term(0.0);
    let mut j = 1;
    while j as f64 * h <= T_MAX {
        let t = j as f64 * h;
        sum += term(t) + term(-t);
        j += 1;
    }
    let mut prev = sum * h;
    for level in 1..=max_levels {
        h *= 0.5;
        let mut j = 1;
        while j as f64 * h <= T_MAX {
            let t = j as f64 * h;
            sum += term(t) + term(-t);
            j += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).abs();
        if !cur.is_finite() {
            break;
        }
        if level >= 3 && diff <= tol {
            return Ok(Estimate::new(cur, diff));
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        subdivisions: max_levels,
        estimate: prev,
        abs_err: f64::NAN,
        target: tol,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

pub(crate) fn gl_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R20: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R30: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        20 => R20.get_or_init(|| gauss_legendre(20)),
        30 => R30.get_or_init(|| gauss_legendre(30)),
        _ => panic!("no cached rule of order {n}"),
    }
}

pub(crate) trait Value: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {}
impl Value for f64 {}
impl Value for Complex64 {}

/// Behaviour at a panel end: `offset^exponent` with the singular point
/// `distance` beyond the end (`0` means at the end itself).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Endpoint {
    pub exponent: f64,
    pub distance: f64,
}

impl Endpoint {
    pub fn singular(exponent: f64) -> Self {
        Endpoint { exponent, distance: 0.0 }
    }

    pub fn near(exponent: f64, distance: f64) -> Self {
        Endpoint { exponent, distance }
    }
}

const GRADING: f64 = 0.2;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Mesh {
    pub max_panel: f64,
    pub tol: f64,
    pub max_levels: usize,
}

fn gl_panel<T: Value, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> T {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = T::default();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        s = s + f(c + h * x) * *w;
    }
    s * h
}

impl Mesh {
    /// Integral over `[0, len]` of `f(offset)` graded toward offset 0.
    fn graded<T: Value, F: Fn(f64) -> T, N: Fn(T) -> f64>(
        &self,
        f: &F,
        len: f64,
        end: Endpoint,
        rule: &(Vec<f64>, Vec<f64>),
        norm: &N,
    ) -> T {
        let mut total = T::default();
        let mut eps = len;
        for _ in 0..self.max_levels {
            if end.distance > 0.0 && eps <= 0.5 * end.distance {
                return total + gl_panel(f, 0.0, eps, rule);
            }
            let next = eps * GRADING;
            total = total + gl_panel(f, next, eps, rule);
            eps = next;
            if end.distance == 0.0 {
                let fe = f(eps);
                let rest = fe * (eps / (1.0 + end.exponent));
                if norm(rest) <= self.tol || eps < 1e-290 {
                    return total + rest;
                }
            }
        }
        total + gl_panel(f, 0.0, eps, rule)
    }

    pub fn integrate<T: Value, F: Fn(f64) -> T, N: Fn(T) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        left: Option<Endpoint>,
        right: Option<Endpoint>,
        rule: &(Vec<f64>, Vec<f64>),
        norm: N,
    ) -> T {
        let len = b - a;
        if !(len > 0.0) {
            return T::default();
        }
        let n = (len / self.max_panel).ceil().max(1.0) as usize;
        let n = if left.is_some() && right.is_some() { n.max(2) } else { n };
        let h = len / n as f64;
        let mut total = T::default();
        for i in 0..n {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            let part = match (i, left, right) {
                (0, Some(e), _) => self.graded(&|x| f(a + x), hi - a, e, rule, &norm),
                (i, _, Some(e)) if i + 1 == n => self.graded(&|x| f(b - x), b - lo, e, rule, &norm),
                _ => gl_panel(f, lo, hi, rule),
            };
            total = total + part;
        }
        total
    }
}
