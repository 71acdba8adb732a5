//! Gamma and the modified Bessel function of the second kind `K_nu` for real
//! order and positive real argument.
//!
//! `K_nu` follows Temme's method: the order is reduced to `mu = nu - n` with
//! `|mu| <= 1/2`, `K_mu` and `K_{mu+1}` are obtained from Temme's series for
//! `z < 2` or from Steed's continued fraction (CF2) for `z >= 2`, and the
//! result is carried up to `nu` by forward recurrence, which is stable for
//! `K`. Temme's series is uniform in `mu`, so integer orders (including
//! `nu = 0`) need no special branch.
//!
//! The scaled value `e^z K_nu(z)` is what the CF2 branch produces natively;
//! the unscaled [`bessel_k`] multiplies by `e^{-z}` last and therefore
//! underflows gracefully to `0.0` once `z` exceeds roughly [`K_UNDERFLOW_Z`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Above this argument `K_nu(z)` is below the smallest normal `f64` for every
/// order up to a few units, and [`bessel_k`] returns `0.0` (or a subnormal).
pub const K_UNDERFLOW_Z: f64 = 705.0;

/// Largest argument for which `Gamma(x)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const SERIES_EPS: f64 = 1e-17;
const MAX_ITER: usize = 20_000;

/// Taylor coefficients of `1/Gamma(1+x) = sum_k a_k x^k` (Abramowitz & Stegun
/// 6.1.34 shifted by one), rounded to `f64`. The truncation error is far
/// below an ulp for `|x| <= 1/2`.
const RECIP_GAMMA_1P: [f64; 28] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
];

/// `Gamma(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("gamma", x, "x > 0"));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow {
            function: "gamma",
            value: x,
        });
    }
    if x == x.floor() && x <= 171.0 {
        return Ok((2..x as u32).map(f64::from).product());
    }
    if x > 140.0 {
        // The Lanczos form overflows in an intermediate power before Gamma does.
        return Ok(statrs::function::gamma::ln_gamma(x).exp());
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("ln_gamma", x, "x > 0"));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Temme's auxiliary gamma quantities for `|mu| <= 1/2`:
/// `(gamma1, gamma2, 1/Gamma(1+mu), 1/Gamma(1-mu))` with
/// `gamma1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gamma2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    // Horner in mu^2 over the even and odd halves of the series.
    let m2 = mu * mu;
    for (k, &a) in RECIP_GAMMA_1P.iter().enumerate().rev() {
        if k % 2 == 0 {
            even = even * m2 + a;
        } else {
            odd = odd * m2 + a;
        }
    }
    let gamma1 = -odd;
    let gamma2 = even;
    let recip_plus = gamma2 - mu * gamma1;
    let recip_minus = gamma2 + mu * gamma1;
    (gamma1, gamma2, recip_plus, recip_minus)
}

fn x_over_sin(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / x.sin()
    }
}

fn sinh_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// Temme's series for `(K_mu(x), K_{mu+1}(x))`, unscaled, `x < 2`.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let half_x = 0.5 * x;
    let neg_ln = -half_x.ln();
    let e = mu * neg_ln;
    let (gamma1, gamma2, recip_plus, recip_minus) = temme_gammas(mu);

    let mut ff = x_over_sin(PI * mu) * (gamma1 * e.cosh() + gamma2 * sinh_over_x(e) * neg_ln);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / recip_plus;
    let mut q = 0.5 / (ee * recip_minus);
    let mut c = 1.0;
    let quarter_x2 = half_x * half_x;
    let mut sum1 = p;
    let m2 = mu * mu;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - m2);
        c *= quarter_x2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * SERIES_EPS {
            break;
        }
    }
    (sum, sum1 / half_x)
}

/// Steed's continued fraction for `(e^x K_mu(x), e^x K_{mu+1}(x))`, `x >= 2`.
fn steed_cf2_scaled(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < SERIES_EPS {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    (k_mu, k_mu1)
}

/// Returns `(value, scaled)` where `scaled` says whether `value` carries the
/// factor `e^z`.
fn bessel_k_raw(nu: f64, z: f64) -> (f64, bool) {
    let nu = nu.abs();
    let n = (nu + 0.5).floor();
    let mu = nu - n;
    let (mut k_lo, mut k_hi, scaled) = if z < 2.0 {
        let (a, b) = temme_series(mu, z);
        (a, b, false)
    } else {
        let (a, b) = steed_cf2_scaled(mu, z);
        (a, b, true)
    };
    let two_over_z = 2.0 / z;
    for i in 1..=(n as usize) {
        let next = (mu + i as f64) * two_over_z * k_hi + k_lo;
        k_lo = k_hi;
        k_hi = next;
    }
    (k_lo, scaled)
}

fn check_bessel_args(nu: f64, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_k", z, "0 < z < inf"));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", nu, "finite order"));
    }
    Ok(())
}

/// Modified Bessel function of the second kind `K_nu(z)`, real `nu`, `z > 0`.
///
/// Evaluated at `|nu|`, so `bessel_k(nu, z) == bessel_k(-nu, z)` bit for bit.
/// Returns `0.0` (possibly via subnormals) once `e^{-z}` underflows, around
/// `z > K_UNDERFLOW_Z`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    check_bessel_args(nu, z)?;
    let (v, scaled) = bessel_k_raw(nu, z);
    let v = if scaled { v * (-z).exp() } else { v };
    if v.is_infinite() {
        return Err(Error::Overflow {
            function: "bessel_k",
            value: z,
        });
    }
    Ok(v)
}

/// Exponentially scaled `e^z K_nu(z)`.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    check_bessel_args(nu, z)?;
    let (v, scaled) = bessel_k_raw(nu, z);
    let v = if scaled { v } else { v * z.exp() };
    if v.is_infinite() {
        return Err(Error::Overflow {
            function: "bessel_k_scaled",
            value: z,
        });
    }
    Ok(v)
}

/// Closed form of `int_0^inf x^{nu-1} (x+beta)^{nu-1} e^{-mu x} dx`:
/// `(1/sqrt(pi)) (beta/mu)^{nu-1/2} e^{beta mu/2} Gamma(nu) K_{1/2-nu}(beta mu/2)`.
pub fn tempered_product_integral(nu: f64, beta: f64, mu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain("tempered_product_integral", nu, "nu > 0"));
    }
    if !(beta > 0.0) {
        return Err(Error::domain("tempered_product_integral", beta, "beta > 0"));
    }
    if !(mu > 0.0) {
        return Err(Error::domain("tempered_product_integral", mu, "mu > 0"));
    }
    let z = 0.5 * beta * mu;
    let ln_pref = (nu - 0.5) * (beta / mu).ln() + ln_gamma(nu)? - 0.5 * PI.ln();
    let k = bessel_k_scaled(0.5 - nu, z)?;
    Ok(ln_pref.exp() * k)
}
