//! Independent validation oracles shared by the integration suites.
//! These deliberately avoid the crate's implementation paths.

#![allow(dead_code)]

use semiscat::Complex;

/// Plain bisection root finder.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "bisect needs a bracket");
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) * flo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Adaptive Simpson quadrature (independent of the crate's panels).
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn s<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let l = s(f, a, m);
        let r = s(f, m, b);
        if depth > 22 || (l + r - whole).abs() < 15.0 * tol {
            l + r + (l + r - whole) / 15.0
        } else {
            rec(f, a, m, l, 0.5 * tol, depth + 1) + rec(f, m, b, r, 0.5 * tol, depth + 1)
        }
    }
    let whole = s(f, a, b);
    rec(f, a, b, whole, tol, 0)
}

/// Airy Ai and Bi by quadrature of the defining integrals on the rotated
/// contour t = e^{i pi/6} s (absolutely convergent form of the same
/// integrals).
pub fn airy_integral_oracle(x: f64) -> (f64, f64) {
    let rot = Complex::new(0.0, std::f64::consts::PI / 6.0).exp();
    let ai_term = |s: f64| -> Complex {
        // exp(i((t^3)/3 + x t)) with t = rot * s: t^3 = i s^3
        let t = rot * s;
        let phase = Complex::new(0.0, 1.0) * (Complex::new(0.0, 1.0) * s * s * s / 3.0 + x * t);
        rot * phase.exp()
    };
    let re = |s: f64| ai_term(s).re;
    let im = |s: f64| ai_term(s).im;
    let upper = 12.0;
    let ai = (simpson(&re, 0.0, upper, 3e-13)) / std::f64::consts::PI;
    let _ = im;
    // Bi = (1/pi) ∫ [exp(-t^3/3 + x t) + sin(t^3/3 + x t)] dt; the sin part is
    // the imaginary part of the same rotated integrand
    let bi_exp = |t: f64| (-t * t * t / 3.0 + x * t).exp();
    let t_up = 12.0f64.max(2.0 * x.abs().sqrt() + 6.0);
    let bi1 = simpson(&bi_exp, 0.0, t_up, 3e-13);
    let bi2 = simpson(&im, 0.0, upper, 3e-13);
    let bi = (bi1 + bi2) / std::f64::consts::PI;
    (ai, bi)
}

/// Macdonald function K_{i nu}(w) by direct quadrature (independent panels).
pub fn macdonald_oracle(nu: f64, w: f64) -> f64 {
    let f = |t: f64| (-w * t.cosh()).exp() * (nu * t).cos();
    let t_max = ((760.0 / w).max(2.0) + ((760.0 / w).max(2.0).powi(2) - 1.0).sqrt()).ln() + 1.0;
    simpson(&f, 0.0, t_max, 1e-15)
}
