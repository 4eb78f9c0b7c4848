//! Modified Bessel functions of purely imaginary order.
//!
//! The working evaluator is the Frobenius series (spectrally accurate for
//! w up to a few hundred); the classical integral representation and the
//! Macdonald function are kept as validation oracles only.

use crate::error::{Error, Result};
use crate::quad;
use crate::special::gamma::gamma_cplx;
use crate::Complex;

/// Largest argument for which the series evaluator is certified.
pub const SERIES_W_MAX: f64 = 600.0;

/// Value and derivative of I_{i nu} at w.
#[derive(Clone, Copy, Debug)]
pub struct BesselImagOrder {
    pub nu: f64,
    pub value: Complex,
    pub derivative: Complex,
}

/// I_{i nu}(w) and I'_{i nu}(w) by the power series.
pub fn bessel_i_imag(nu: f64, w: f64) -> Result<BesselImagOrder> {
    if !(w > 0.0) {
        return Err(Error::Domain(format!("bessel_i_imag needs w > 0, got {w}")));
    }
    if w > SERIES_W_MAX || w + 1.6 * nu.abs() > 690.0 {
        return Err(Error::Domain(format!(
            "bessel_i_imag series out of range at w = {w}, nu = {nu}"
        )));
    }
    let inu = Complex::new(0.0, nu);
    // (w/2)^{i nu} with the principal logarithm of w > 0
    let lead = (inu * (0.5 * w).ln()).exp() / gamma_cplx(inu + 1.0);
    let q = 0.25 * w * w;
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = inu / w * term;
    for k in 1..2000 {
        let kf = k as f64;
        term = term * q / (kf * (inu + kf));
        sum += term;
        dsum += (inu + 2.0 * kf) / w * term;
        if term.norm() < 1e-18 * sum.norm() && kf > 0.5 * w {
            break;
        }
    }
    Ok(BesselImagOrder {
        nu,
        value: lead * sum,
        derivative: lead * dsum,
    })
}

/// Validation oracle: the integral representation
/// I_{i nu}(w) = (w/2)^{i nu} / (sqrt(pi) Gamma(1/2 + i nu)) ∫_{-1}^1 (1-t^2)^{i nu - 1/2} e^{w t} dt.
///
/// Substituting t = cos(theta) gives ∫_0^pi (sin theta)^{2 i nu} e^{w cos theta} dtheta
/// which is integrated on log-graded panels so each panel sees a bounded phase.
pub fn bessel_i_imag_integral(nu: f64, w: f64) -> Result<Complex> {
    if !(w > 0.0) {
        return Err(Error::Domain("integral oracle needs w > 0".into()));
    }
    let f = |theta: f64| -> Complex {
        let s = theta.sin();
        // (sin theta)^{2 i nu} = exp(2 i nu ln sin theta)
        (Complex::new(0.0, 2.0 * nu * s.ln())).exp() * (w * theta.cos()).exp()
    };
    // panels: theta in [eps, pi - eps], log-graded toward both endpoints
    let eps = 1e-13;
    let mut bounds = vec![eps];
    let mut t = eps;
    while t < std::f64::consts::FRAC_PI_2 {
        t = (t * 1.9).min(std::f64::consts::FRAC_PI_2);
        bounds.push(t);
    }
    let half: Vec<f64> = bounds.clone();
    for (i, &b) in half.iter().enumerate().rev() {
        if i + 1 < half.len() {
            bounds.push(std::f64::consts::PI - b);
        }
    }
    let rule = quad::gauss(24);
    let mut total = Complex::new(0.0, 0.0);
    for i in 0..bounds.len() - 1 {
        let (a, b) = (bounds[i], bounds[i + 1]);
        let hw = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = Complex::new(0.0, 0.0);
        for (x, wt) in rule.nodes.iter().zip(rule.weights.iter()) {
            s += wt * f(mid + hw * x);
        }
        total += s * hw;
    }
    let inu = Complex::new(0.0, nu);
    let pref = (inu * (0.5 * w).ln()).exp()
        / (std::f64::consts::PI.sqrt() * gamma_cplx(inu + 0.5));
    Ok(pref * total)
}

/// Validation oracle: Macdonald function K_{i nu}(w) = ∫_0^∞ e^{-w cosh t} cos(nu t) dt.
pub fn macdonald_k(nu: f64, w: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::Domain("macdonald_k needs w > 0".into()));
    }
    // truncate where e^{-w cosh t} is negligible
    let c_max = (760.0 / w).max(2.0);
    let t_max = (c_max + (c_max * c_max - 1.0).max(0.0).sqrt()).ln() + 1.0;
    let width = (0.25f64).min(0.5 * std::f64::consts::PI / (2.0 * nu.abs() + 1.0));
    let f = |t: f64| (-w * t.cosh()).exp() * (nu * t).cos();
    let mut total = 0.0;
    let mut a = 0.0;
    while a < t_max {
        let b = (a + width).min(t_max);
        total += quad::panel(&f, a, b, 16);
        a = b;
    }
    Ok(total)
}

/// Wronskian W(sqrt(.) I_{-i nu}, sqrt(.) I_{i nu}) computed from series values.
pub fn wronskian_sqrt_i(nu: f64, w: f64) -> Result<Complex> {
    let plus = bessel_i_imag(nu, w)?;
    let minus = bessel_i_imag(-nu, w)?;
    let rw = w.sqrt();
    let f = rw * minus.value;
    let fp = 0.5 / rw * minus.value + rw * minus.derivative;
    let g = rw * plus.value;
    let gp = 0.5 / rw * plus.value + rw * plus.derivative;
    Ok(f * gp - fp * g)
}
