use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{gl_rule, Endpoint, Mesh};
use crate::error::{Error, Result};
use crate::model::ProcessParams;
use crate::quad::Estimate;
use crate::specfun;

const PANEL: f64 = 1.0;

fn mesh(tol: f64, max_panel: f64) -> Mesh {
    Mesh {
        max_panel,
        tol,
        max_levels: 400,
    }
}

/// Integral comparison bound on `int_y^inf x^beta e^{-c x} dx`.
fn power_exp_tail(y: f64, beta: f64, c: f64) -> f64 {
    let slack = c - beta.max(0.0) / y;
    if !(slack > 0.0) {
        return f64::INFINITY;
    }
    (beta * y.ln() - c * y).exp() / slack
}

/// `h_t` for the coordinates `top - gaps[i]` by graded Gauss-Legendre in
/// `x = s - top`.
pub fn h_t_oracle(top: f64, gaps: &[f64], t: f64, params: &ProcessParams, tol: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("h_t_oracle", t, "t > 0"));
    }
    if gaps.iter().any(|&g| !(g >= 0.0)) {
        return Err(Error::InvalidParams("h_t_oracle gaps must be nonnegative".into()));
    }
    let x0 = (-top).max(0.0);
    let hi = t - top;
    if hi <= x0 {
        return Ok(0.0);
    }
    let dm1 = params.d() - 1.0;
    let lambda = params.lambda();
    let zeros = gaps.iter().filter(|&&g| g == 0.0).count();
    let min_gap = gaps.iter().copied().filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
    let f = |x: f64| -> f64 {
        let mut lp = 0.0;
        let mut sum = 0.0;
        for &g in gaps {
            let u = x + g;
            lp += u.ln();
            sum += u;
        }
        (dm1 * lp - lambda * sum).exp()
    };
    let left = if x0 > 0.0 {
        // Nearest singular point is x = -min(gaps).
        let g0 = if zeros > 0 { 0.0 } else { min_gap };
        Endpoint::near(dm1, x0 + g0)
    } else if zeros > 0 {
        let beta = zeros as f64 * dm1;
        if beta <= -1.0 {
            return Ok(f64::INFINITY);
        }
        Endpoint::singular(beta)
    } else {
        Endpoint::near(dm1, min_gap)
    };
    Ok(mesh(tol, PANEL).integrate(&|o| f(x0 + o), 0.0, hi - x0, Some(left), None, gl_rule(20), f64::abs))
}

fn truncation_radius(params: &ProcessParams, bound: impl Fn(f64) -> f64, target: f64) -> Result<f64> {
    let lambda = params.lambda();
    let mut y = (1.0 + 2.0 * (params.d() - 1.0).max(0.0)) / lambda;
    for _ in 0..200 {
        if bound(y) <= target {
            return Ok(y);
        }
        y *= 1.2;
    }
    Err(Error::NoConvergence {
        subdivisions: 200,
        estimate: bound(y),
        abs_err: f64::NAN,
        target,
    })
}

fn check_order(params: &ProcessParams, what: &str) -> Result<()> {
    if params.k() > 2 {
        return Err(Error::Unsupported(format!("{what} supports k <= 2, got k = {}", params.k())));
    }
    Ok(())
}

/// `int_{R^k} h_t(y)^2 dy` over a truncation box; `abs_err` carries the
/// certified bound on the mass outside the box.
pub fn l2_norm_ht(t: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    check_order(params, "l2_norm_ht")?;
    if !(t >= 0.0) {
        return Err(Error::domain("l2_norm_ht", t, "t >= 0"));
    }
    if t == 0.0 {
        return Ok(Estimate::default());
    }
    let d = params.d();
    let lambda = params.lambda();
    let sq_tail = |y: f64| power_exp_tail(y, 2.0 * d - 2.0, 2.0 * lambda);
    let inner_tol = 1e-2 * tol;
    if params.k() == 1 {
        let bound = |y: f64| t * t * sq_tail(y);
        let y = truncation_radius(params, bound, 0.1 * tol)?;
        let h2 = |top: f64| h_t_oracle(top, &[0.0], t, params, inner_tol).map(|v| v * v).unwrap_or(f64::NAN);
        let m = mesh(inner_tol, PANEL);
        let below = m.integrate(&h2, -y, 0.0, None, Some(Endpoint::singular(0.0)), gl_rule(20), f64::abs);
        let above = m.integrate(&h2, 0.0, t, Some(Endpoint::singular(0.0)), Some(Endpoint::singular(2.0 * d)), gl_rule(20), f64::abs);
        return Ok(Estimate::new(below + above, bound(y)));
    }
    let g2 = specfun::gamma(d)?.powi(2) * lambda.powf(-2.0 * d);
    let bound = |y: f64| t * t * sq_tail(y).powi(2) + 2.0 * (t + y) * g2 * sq_tail(y);
    let y = truncation_radius(params, bound, 0.1 * tol)?;
    let beta = 2.0 * (2.0 * d - 1.0);
    let gap_tol = inner_tol / (t + y);
    let over_gaps = |top: f64| -> f64 {
        let h2 = |g: f64| {
            h_t_oracle(top, &[0.0, g], t, params, gap_tol / y)
                .map(|v| v * v)
                .unwrap_or(f64::NAN)
        };
        let end = if top > 0.0 {
            Endpoint::singular(beta)
        } else {
            Endpoint::near(beta, -top)
        };
        mesh(gap_tol, PANEL).integrate(&h2, 0.0, y, Some(end), None, gl_rule(20), f64::abs)
    };
    let m = mesh(inner_tol, PANEL);
    let below = m.integrate(&over_gaps, -y, 0.0, None, Some(Endpoint::singular(0.0)), gl_rule(20), f64::abs);
    let above = m.integrate(&over_gaps, 0.0, t, Some(Endpoint::singular(0.0)), Some(Endpoint::singular(0.0)), gl_rule(20), f64::abs);
    Ok(Estimate::new(2.0 * (below + above), bound(y)))
}

/// `(2 pi)^{-k/2} int e^{i omega . y} h_t(y) dy` over a truncation box. The
/// returned bound is the certified modulus of the discarded part.
pub fn numeric_fourier(t: f64, omega: &[f64], params: &ProcessParams, tol: f64) -> Result<(Complex64, f64)> {
    check_order(params, "numeric_fourier")?;
    if omega.len() != params.k() as usize {
        return Err(Error::InvalidParams(format!(
            "numeric_fourier needs {} frequencies, got {}",
            params.k(),
            omega.len()
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain("numeric_fourier", t, "t > 0"));
    }
    let d = params.d();
    let lambda = params.lambda();
    let abs_tail = |y: f64| power_exp_tail(y, d - 1.0, lambda);
    let w_max = omega.iter().fold(0.0f64, |a, w| a.max(w.abs())) + omega.iter().sum::<f64>().abs();
    let panel = PANEL.min(2.0 / w_max.max(1e-300));
    let inner_tol = 1e-2 * tol;
    let cnorm = |z: Complex64| z.norm();
    let expi = |x: f64| Complex64::new(x.cos(), x.sin());
    if params.k() == 1 {
        let norm = (2.0 * PI).powf(-0.5);
        let bound = |y: f64| norm * t * abs_tail(y);
        let y = truncation_radius(params, bound, 0.1 * tol)?;
        let w = omega[0];
        let f = |top: f64| expi(w * top) * h_t_oracle(top, &[0.0], t, params, inner_tol).unwrap_or(f64::NAN);
        let m = mesh(inner_tol, panel);
        let below = m.integrate(&f, -y, 0.0, None, Some(Endpoint::singular(0.0)), gl_rule(20), cnorm);
        let above = m.integrate(&f, 0.0, t, Some(Endpoint::singular(0.0)), Some(Endpoint::singular(d)), gl_rule(20), cnorm);
        return Ok(((below + above) * norm, bound(y)));
    }
    let norm = 1.0 / (2.0 * PI);
    let g1 = specfun::gamma(d)? * lambda.powf(-d);
    let bound = |y: f64| norm * (t * abs_tail(y).powi(2) + 2.0 * (t + y) * g1 * abs_tail(y));
    let y = truncation_radius(params, bound, 0.1 * tol)?;
    let (w1, w2) = (omega[0], omega[1]);
    let sigma = w1 + w2;
    let beta = 2.0 * d - 1.0;
    let gap_tol = inner_tol / (t + y);
    let over_gaps = |top: f64| -> Complex64 {
        let f = |g: f64| {
            let h = h_t_oracle(top, &[0.0, g], t, params, gap_tol / y).unwrap_or(f64::NAN);
            (expi(sigma * top - w1 * g) + expi(sigma * top - w2 * g)) * h
        };
        let end = if top > 0.0 {
            Endpoint::singular(beta)
        } else {
            Endpoint::near(beta, -top)
        };
        mesh(gap_tol, panel).integrate(&f, 0.0, y, Some(end), None, gl_rule(20), cnorm)
    };
    let m = mesh(inner_tol, panel);
    let below = m.integrate(&over_gaps, -y, 0.0, None, Some(Endpoint::singular(0.0)), gl_rule(20), cnorm);
    let above = m.integrate(&over_gaps, 0.0, t, Some(Endpoint::singular(0.0)), Some(Endpoint::singular(0.0)), gl_rule(20), cnorm);
    Ok(((below + above) * norm, bound(y)))
}
