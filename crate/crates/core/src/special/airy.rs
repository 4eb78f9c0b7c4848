//! Airy functions Ai, Bi with derivatives, in plain and scaled form.
//!
//! For |x| <= 3.5 the Maclaurin series is used. Beyond, the functions are
//! represented as elementary prefactors times slowly varying mantissas
//! (exp-kernel Volterra solutions of the transformed equation
//! psi'' -+ psi = -(5/36) xi^{-2} psi with xi = (2/3)|x|^{3/2}), so values
//! far outside the double range keep full relative accuracy.

use crate::quad;
use crate::scaled::SReal;
use crate::volterra::{self, BasePoint, Homog, VolterraProblem};
use crate::Complex;
use std::sync::OnceLock;

const AI0: f64 = 0.355_028_053_887_817_239_26;
const NEG_AIP0: f64 = 0.258_819_403_792_806_798_41;
const X_SWITCH: f64 = 3.5;
// Exponential side covers actions S/hbar up to ~2400; the oscillatory side
// must reach nu^{2/3}|zeta| arguments of a few hundred.
const XI_MAX_EXP: f64 = 2400.0;
const XI_MAX_OSC: f64 = 6000.0;

/// Plain Airy values at a real argument.
#[derive(Clone, Copy, Debug)]
pub struct AiryValues {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

/// Airy values as mantissa/exponent pairs.
#[derive(Clone, Copy, Debug)]
pub struct AiryScaled {
    pub ai: SReal,
    pub ai_prime: SReal,
    pub bi: SReal,
    pub bi_prime: SReal,
}

fn maclaurin(x: f64) -> AiryValues {
    // f = 1 + x^3/6 + x^6/180 + ... , c_{3n} = c_{3(n-1)} / ((3n)(3n-1))
    // g = x + x^4/12 + x^7/504 + ..., c_{3n+1} = c_{3(n-1)+1} / ((3n+1)(3n))
    let x3 = x * x * x;
    let (mut f, mut fp) = (1.0, 0.0);
    let mut a = 1.0;
    for n in 1..80 {
        let nf = n as f64;
        let an = a * x3 / ((3.0 * nf) * (3.0 * nf - 1.0));
        f += an;
        fp += a * x * x / (3.0 * nf - 1.0);
        a = an;
        if an.abs() < 1e-18 * f.abs() {
            break;
        }
    }
    let (mut g, mut gp) = (x, 1.0);
    let mut b = x;
    for n in 1..80 {
        let nf = n as f64;
        let bn = b * x3 / ((3.0 * nf + 1.0) * (3.0 * nf));
        g += bn;
        gp += b * x * x / (3.0 * nf);
        b = bn;
        if bn.abs() < 1e-18 * (g.abs() + 1e-300) {
            break;
        }
    }
    let s3 = 3.0f64.sqrt();
    AiryValues {
        ai: AI0 * f - NEG_AIP0 * g,
        ai_prime: AI0 * fp - NEG_AIP0 * gp,
        bi: s3 * (AI0 * f + NEG_AIP0 * g),
        bi_prime: s3 * (AI0 * fp + NEG_AIP0 * gp),
    }
}

/// Coefficients of the classical asymptotic series, u_0 = 1.
fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 0..n {
        let kf = k as f64;
        u.push(u[k] * (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0)));
    }
    u
}

struct Tables {
    xi: Vec<f64>,
    m: Vec<f64>,
    dm: Vec<f64>,
    ddm: Vec<f64>,
    n: Vec<f64>,
    dn: Vec<f64>,
    ddn: Vec<f64>,
    xi_osc: Vec<f64>,
    g_re: Vec<f64>,
    g_im: Vec<f64>,
    dg_re: Vec<f64>,
    dg_im: Vec<f64>,
    ddg_re: Vec<f64>,
    ddg_im: Vec<f64>,
}

fn build_tables() -> Tables {
    let xi0 = (2.0 / 3.0) * X_SWITCH.powf(1.5);
    let mesh = quad::graded_mesh(xi0, XI_MAX_EXP, |x| (0.2 * x).clamp(0.05, 4.0));
    let mesh_osc = quad::graded_mesh(xi0, XI_MAX_OSC, |x| (0.2 * x).clamp(0.05, 400.0));
    let u = u_coeffs(10);
    // Exp-side tail: T(x) = (1/2) I0 - (e^{2x}/2) I2 with b = -(5/36) y^{-2}
    // and 1+a given by the asymptotic series sum (-1)^k u_k y^{-k}.
    let (exp_s0, exp_s2) = {
        let mut s0 = 0.0;
        let mut s2 = 0.0;
        let mut sgn = 1.0;
        for (k, uk) in u.iter().enumerate().take(9) {
            s0 += sgn * uk * XI_MAX_EXP.powi(-1 - k as i32) / (k as f64 + 1.0);
            let n = (2 + k) as f64;
            let mut e = 0.0;
            let mut c = 1.0;
            let mut pw = XI_MAX_EXP.powi(-(2 + k as i32));
            let mut esgn = 1.0;
            let mut den = 2.0;
            for m in 0..4 {
                e += esgn * c * pw / den;
                c *= n + m as f64;
                pw /= XI_MAX_EXP;
                esgn = -esgn;
                den *= 2.0;
            }
            s2 += sgn * uk * e;
            sgn = -sgn;
        }
        (s0, s2)
    };
    // Osc-side tail: T(x) = (1/(2i)) [I0 - e^{2ix} I1] with the series
    // coefficients i^k u_k and E_n(Xi) = ∫_Xi^inf e^{-2iy} y^{-n} dy by parts.
    let (osc_i0, osc_i1) = {
        let i_unit = Complex::new(0.0, 1.0);
        let mut i0 = Complex::new(0.0, 0.0);
        let mut i1 = Complex::new(0.0, 0.0);
        let e_fac = (Complex::new(0.0, -2.0 * XI_MAX_OSC)).exp();
        for (k, uk) in u.iter().enumerate().take(9) {
            let ph = i_unit.powi(k as i32) * uk;
            i0 += ph * XI_MAX_OSC.powi(-1 - k as i32) / (k as f64 + 1.0);
            // E_{2+k}(Xi) expanded to four terms
            let n = (2 + k) as f64;
            let two_i = Complex::new(0.0, 2.0);
            let mut e_n = Complex::new(0.0, 0.0);
            let mut coef = Complex::new(1.0, 0.0);
            let mut pw = XI_MAX_OSC.powi(-(2 + k as i32));
            for m in 0..4 {
                e_n += coef * pw / two_i.powi(m + 1) * if m % 2 == 0 { 1.0 } else { -1.0 };
                coef *= n + m as f64;
                pw /= XI_MAX_OSC;
            }
            i1 += ph * e_fac * e_n;
        }
        (-5.0 / 36.0 * i0, -5.0 / 36.0 * i1)
    };

    // Decaying solution on the exponential side: M = 1 + a_-.
    let mut prob = VolterraProblem::new(
        Homog::Exp {
            omega: Complex::new(-1.0, 0.0),
        },
        Box::new(|xi: f64| Complex::new(-5.0 / 36.0 / (xi * xi), 0.0)),
        mesh.clone(),
        BasePoint::End,
    );
    prob.tail = Box::new(move |x: f64| {
        let grow = (2.0 * (x - XI_MAX_EXP)).exp();
        (
            Complex::new(-5.0 / 72.0 * exp_s0 + 5.0 / 72.0 * grow * exp_s2, 0.0),
            Complex::new(5.0 / 36.0 * grow * exp_s2, 0.0),
        )
    });
    prob.tol = 1e-14;
    let sol_m = volterra::solve(&prob).expect("airy exp-side solve");

    // Oscillatory side: G = 1 + a with A+ = pi^{-1/2} e^{i pi/4} x^{-1/4} e^{-i xi} G.
    let mut prob_o = VolterraProblem::new(
        Homog::Exp {
            omega: Complex::new(0.0, -1.0),
        },
        Box::new(|xi: f64| Complex::new(-5.0 / 36.0 / (xi * xi), 0.0)),
        mesh_osc,
        BasePoint::End,
    );
    prob_o.tail = Box::new(move |x: f64| {
        let half_i = Complex::new(0.0, -0.5); // 1/(2i)
        let osc = (Complex::new(0.0, 2.0 * x)).exp();
        (
            half_i * (osc_i0 - osc * osc_i1),
            -osc * osc_i1,
        )
    });
    prob_o.tol = 1e-14;
    let sol_o = volterra::solve(&prob_o).expect("airy osc-side solve");

    let xi: Vec<f64> = sol_m.nodes.clone();
    let m: Vec<f64> = sol_m.phi.iter().map(|z| 1.0 + z.re).collect();
    let dm: Vec<f64> = sol_m.dphi.iter().map(|z| z.re).collect();
    // second derivatives from the transformed equation: M'' = 2M' - (5/36) xi^{-2} M
    let ddm: Vec<f64> = xi
        .iter()
        .zip(m.iter().zip(dm.iter()))
        .map(|(&x, (&mv, &dmv))| 2.0 * dmv - 5.0 / 36.0 / (x * x) * mv)
        .collect();

    // Growing solution by reduction from M: N(xi) = (1/2) e^{-2 xi} M [C0 + 4 J],
    // J = ∫_{xi0}^xi e^{2s} M^{-2} ds, C0 = Bi(x*)/Ai(x*).
    let v0 = maclaurin(X_SWITCH);
    let c0 = v0.bi / ((4.0 * std::f64::consts::PI).powf(-0.5)
        * X_SWITCH.powf(-0.25)
        * (-xi0).exp()
        * m[0]);
    // cumulative of e^{2s} M^{-2} with the exponent factored out per panel
    let rule = quad::gauss(12);
    let m_interp = |x: f64| quad::hermite_eval(&xi, &m, &dm, x);
    let mut n_vals = vec![0.0; xi.len()];
    let mut dn_vals = vec![0.0; xi.len()];
    // scaled accumulator: J = jm * exp(je)
    let (mut jm, mut je) = (0.0f64, 0.0f64);
    n_vals[0] = 0.5 * (-2.0 * xi0).exp() * m[0] * c0;
    dn_vals[0] = -2.0 * n_vals[0] + n_vals[0] * dm[0] / m[0] + 2.0 / m[0];
    for i in 1..xi.len() {
        let (a, b) = (xi[i - 1], xi[i]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        // panel of J with exponent 2b factored out
        let mut s = 0.0;
        for (t, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let x = mid + half * t;
            let mm = m_interp(x);
            s += w * (2.0 * (x - b)).exp() / (mm * mm);
        }
        s *= half;
        // J(b) = J(a) + s * e^{2b}
        let prev = jm * (je - 2.0 * b).exp();
        jm = prev + s;
        je = 2.0 * b;
        // N = 0.5 e^{-2 xi} M C0 + 2 M * (J e^{-2 xi})
        let j_scaled = jm * (je - 2.0 * b).exp();
        n_vals[i] = 0.5 * (-2.0 * b).exp() * m[i] * c0 + 2.0 * m[i] * j_scaled;
        dn_vals[i] = -2.0 * n_vals[i] + n_vals[i] * dm[i] / m[i] + 2.0 / m[i];
    }
    // N'' from differentiating N' = -2N + N M'/M + 2/M
    let ddn_vals: Vec<f64> = (0..xi.len())
        .map(|i| {
            let (x, mv, dmv, nv, dnv) = (xi[i], m[i], dm[i], n_vals[i], dn_vals[i]);
            let mpp = 2.0 * dmv - 5.0 / 36.0 / (x * x) * mv;
            -2.0 * dnv + (dnv * dmv + nv * mpp) / mv - nv * dmv * dmv / (mv * mv)
                - 2.0 * dmv / (mv * mv)
        })
        .collect();

    // G'' = 2i G' - (5/36) xi^{-2} G on the oscillatory side
    let ddg: Vec<Complex> = sol_o
        .nodes
        .iter()
        .zip(sol_o.phi.iter().zip(sol_o.dphi.iter()))
        .map(|(&x, (g, dg))| {
            let gv = 1.0 + g;
            Complex::new(0.0, 2.0) * dg - 5.0 / 36.0 / (x * x) * gv
        })
        .collect();
    Tables {
        xi,
        m,
        dm,
        ddm,
        n: n_vals,
        dn: dn_vals,
        ddn: ddn_vals,
        xi_osc: sol_o.nodes.clone(),
        g_re: sol_o.phi.iter().map(|z| 1.0 + z.re).collect(),
        g_im: sol_o.phi.iter().map(|z| z.im).collect(),
        dg_re: sol_o.dphi.iter().map(|z| z.re).collect(),
        dg_im: sol_o.dphi.iter().map(|z| z.im).collect(),
        ddg_re: ddg.iter().map(|z| z.re).collect(),
        ddg_im: ddg.iter().map(|z| z.im).collect(),
    }
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(build_tables)
}

/// Scaled Airy values; valid for any x with (2/3)|x|^{3/2} <= 400 (|x| <= 71).
pub fn airy_scaled(x: f64) -> AiryScaled {
    if x.abs() <= X_SWITCH {
        let v = maclaurin(x);
        return AiryScaled {
            ai: SReal::from_f64(v.ai),
            ai_prime: SReal::from_f64(v.ai_prime),
            bi: SReal::from_f64(v.bi),
            bi_prime: SReal::from_f64(v.bi_prime),
        };
    }
    let t = tables();
    if x > 0.0 {
        let xi = (2.0 / 3.0) * x.powf(1.5);
        assert!(
            xi <= XI_MAX_EXP,
            "airy_scaled: argument {x} beyond the tabulated range"
        );
        let m = quad::hermite_eval(&t.xi, &t.m, &t.dm, xi);
        let dm = quad::hermite_eval(&t.xi, &t.dm, &t.ddm, xi);
        let n = quad::hermite_eval(&t.xi, &t.n, &t.dn, xi);
        let dn = quad::hermite_eval(&t.xi, &t.dn, &t.ddn, xi);
        let c_ai = (4.0 * std::f64::consts::PI).powf(-0.5) * x.powf(-0.25);
        let c_bi = std::f64::consts::PI.powf(-0.5) * x.powf(-0.25);
        let rx = x.sqrt();
        AiryScaled {
            ai: SReal::new(c_ai * m, -xi),
            ai_prime: SReal::new(c_ai * (-m / (4.0 * x) + rx * (dm - m)), -xi),
            bi: SReal::new(c_bi * n, xi),
            bi_prime: SReal::new(c_bi * (-n / (4.0 * x) + rx * (dn + n)), xi),
        }
    } else {
        let z = -x;
        let xi = (2.0 / 3.0) * z.powf(1.5);
        assert!(
            xi <= XI_MAX_OSC,
            "airy_scaled: argument {x} beyond the tabulated range"
        );
        let g = Complex::new(
            quad::hermite_eval(&t.xi_osc, &t.g_re, &t.dg_re, xi),
            quad::hermite_eval(&t.xi_osc, &t.g_im, &t.dg_im, xi),
        );
        let dg = Complex::new(
            quad::hermite_eval(&t.xi_osc, &t.dg_re, &t.ddg_re, xi),
            quad::hermite_eval(&t.xi_osc, &t.dg_im, &t.ddg_im, xi),
        );
        // A+(z) = Ai(-z) + i Bi(-z) = pi^{-1/2} e^{i pi/4} z^{-1/4} e^{-i xi} G(xi)
        let pref = std::f64::consts::PI.powf(-0.5)
            * z.powf(-0.25)
            * Complex::new(0.0, std::f64::consts::FRAC_PI_4 - xi).exp();
        let a_plus = pref * g;
        // d/dx A+ = -d/dz [...] with dxi/dz = sqrt(z)
        let rz = z.sqrt();
        let dzdir = pref
            * (-g / (4.0 * z) + rz * (dg - Complex::new(0.0, 1.0) * g));
        let a_plus_prime = -dzdir;
        AiryScaled {
            ai: SReal::from_f64(a_plus.re),
            ai_prime: SReal::from_f64(a_plus_prime.re),
            bi: SReal::from_f64(a_plus.im),
            bi_prime: SReal::from_f64(a_plus_prime.im),
        }
    }
}

/// Plain Airy values (saturate to inf/0 outside the double range).
pub fn airy(x: f64) -> AiryValues {
    let s = airy_scaled(x);
    AiryValues {
        ai: s.ai.to_f64(),
        ai_prime: s.ai_prime.to_f64(),
        bi: s.bi.to_f64(),
        bi_prime: s.bi_prime.to_f64(),
    }
}
