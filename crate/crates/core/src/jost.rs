//! Jost boundary data at x = 0 through the perturbed-Bessel constructions:
//! the small-nu exponential/oscillatory Bessel systems and the large-nu
//! Airy systems, each corrected by Volterra solves with the normal-form
//! potential as inhomogeneity and glued by Wronskians.

use crate::error::{Error, Result};
use crate::lg::{LargeNuTransform, LgMap};
use crate::potential::{PotentialSpec, Side};
use crate::quad;
use crate::scaled::Scaled;
use crate::special::bessel::bessel_i_imag;
use crate::special::gamma::gamma_cplx;
use crate::special::systems::{LargeNuSystem, SmallNuSystem, BESSEL_V0};
use crate::volterra::{self, BasePoint, Homog, VolterraProblem, VolterraSolution};
use crate::zeta;
use crate::{Complex, SemiParams};

/// Default regime boundary in nu = 2E/hbar.
pub const NU_SPLIT_DEFAULT: f64 = 5.0;
/// Below this value of v_end = alpha w0 / hbar the single oscillatory
/// representation covers the whole domain (no exponential-system matching).
const V_SINGLE_MAX: f64 = 25.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Volterra corrections switched off (tests the leading-order structure).
    Leading,
    /// Converged Volterra corrections (the default).
    Converged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    SmallNu,
    LargeNu,
}

#[derive(Clone, Copy, Debug)]
pub enum RegimeChoice {
    /// Pick by nu against the given threshold.
    Auto(f64),
    Small,
    Large,
}

/// Value/derivative pair of a Jost solution at x = 0, in scaled form,
/// together with the extracted exponent data.
#[derive(Clone, Copy, Debug)]
pub struct JostBoundary {
    pub f: Scaled,
    pub f_prime: Scaled,
    /// Action exponent S with |f| ~ alpha^{1/2} |gamma| e^{S/hbar}.
    pub s_exp: f64,
    /// Phase exponent T (the proof-level choice for the regime).
    pub t_phase: f64,
    /// Logarithmic-derivative factor hbar f'(0)/f(0).
    pub c_log_deriv: Complex,
    /// ln |gamma| = ln|f| - (1/2) ln alpha - S/hbar.
    pub gamma_ln: f64,
    pub regime: Regime,
}

impl JostBoundary {
    /// Boundary data of the reflected solution f_-: for the potential's
    /// mirror image, f_-(0) = f(0) and f_-'(0) = -f'(0).
    pub fn reflect(&self) -> JostBoundary {
        JostBoundary {
            f_prime: -self.f_prime,
            c_log_deriv: -self.c_log_deriv,
            ..*self
        }
    }
}

/// Jost boundary data at x = 0 on the requested side.
pub fn jost_boundary(
    spec: &PotentialSpec,
    params: &SemiParams,
    side: Side,
    mode: Mode,
    choice: RegimeChoice,
) -> Result<JostBoundary> {
    if side == Side::Minus {
        let refl = spec.reflected();
        return Ok(jost_boundary(&refl, params, Side::Plus, mode, choice)?.reflect());
    }
    let regime = match choice {
        RegimeChoice::Auto(nu0) => {
            if params.nu <= nu0 {
                Regime::SmallNu
            } else {
                Regime::LargeNu
            }
        }
        RegimeChoice::Small => Regime::SmallNu,
        RegimeChoice::Large => Regime::LargeNu,
    };
    match regime {
        Regime::SmallNu => small_nu_boundary(spec, params, mode),
        Regime::LargeNu => large_nu_boundary(spec, params, mode),
    }
}

/// B_-(v) = 2^{-i nu} Gamma(1 - i nu) sqrt(v) I_{-i nu}(v) and derivative.
fn b_minus(nu: f64, v: f64) -> Result<(Complex, Complex)> {
    let i = bessel_i_imag(-nu, v)?;
    let g = gamma_cplx(Complex::new(1.0, -nu));
    let pref = (Complex::new(0.0, -nu) * 2.0f64.ln()).exp() * g;
    let rv = v.sqrt();
    Ok((
        pref * rv * i.value,
        pref * (0.5 / rv * i.value + rv * i.derivative),
    ))
}

struct OscPart {
    /// Correction hbar^2 c_-(w) on (0, w_hi].
    sol: Option<VolterraSolution>,
    h1: f64,
    nu: f64,
}

impl OscPart {
    /// g_-(w) and derivative, scaled.
    fn eval(&self, w: f64) -> Result<(Scaled, Scaled)> {
        let v = w / self.h1;
        let (b, db) = b_minus(self.nu, v)?;
        let (corr, dcorr) = match &self.sol {
            Some(s) => (s.eval(w), s.eval_deriv(w)),
            None => (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)),
        };
        let one = Complex::new(1.0, 0.0);
        let val = Scaled::from_complex(b * (one + corr));
        let der = Scaled::from_complex(db / self.h1 * (one + corr) + b * dcorr);
        Ok((val, der))
    }
}

/// Oscillatory-regime correction solve on (0, w_hi].
fn osc_correction(
    map: &LgMap,
    params: &SemiParams,
    w_hi: f64,
    mode: Mode,
) -> Result<OscPart> {
    let h1 = params.hbar1;
    let nu = params.nu;
    if mode == Mode::Leading || map_eps_zero(map) {
        return Ok(OscPart { sol: None, h1, nu });
    }
    let w_min = 1e-6 * w_hi.min(1.0);
    // resolve both the log-oscillation (rate 2 nu in ln w) and V1's w-scale
    let mesh = quad::graded_mesh(w_min, w_hi, |w| {
        (0.5 * w / (2.0 * nu + 1.0)).min(0.2).max(1e-8)
    });
    let a2 = params.alpha * params.alpha;
    let kernel = Homog::Custom(Box::new(move |w: f64| {
        let v = w / h1;
        let (b, _) = b_minus(nu, v).expect("B_- evaluation");
        Scaled::from_complex(b * b)
    }));
    let mut prob = VolterraProblem::new(
        kernel,
        Box::new(move |w: f64| Complex::new(-a2 * map.v1_at_w(w).expect("V1"), 0.0)),
        mesh,
        BasePoint::Start,
    );
    prob.tol = 1e-13;
    let sol = volterra::solve(&prob)?;
    Ok(OscPart {
        sol: Some(sol),
        h1,
        nu,
    })
}

fn map_eps_zero(map: &LgMap) -> bool {
    // V1 vanishes identically exactly when the tail is zero
    map.v1_at_w(0.5 * map.w0).map(|v| v == 0.0).unwrap_or(false)
}

fn small_nu_boundary(
    spec: &PotentialSpec,
    params: &SemiParams,
    mode: Mode,
) -> Result<JostBoundary> {
    let map = LgMap::build(spec, params, Side::Plus)?;
    let h1 = params.hbar1;
    let nu = params.nu;
    let w0 = map.w0;
    let v_end = w0 / h1;

    let (g_end, dg_end) = if v_end <= V_SINGLE_MAX {
        // single oscillatory representation across the whole domain
        let osc = osc_correction(&map, params, w0, mode)?;
        osc.eval(w0)?
    } else {
        // matched representation: oscillatory on (0, w1], exponential
        // Bessel pair on [w1, w0]
        let w1 = BESSEL_V0 * h1;
        if w1 >= 0.5 * w0 {
            return Err(Error::OutOfRegime(format!(
                "matching point w1 = {w1} too close to w0 = {w0}"
            )));
        }
        let sys = SmallNuSystem::build(nu, v_end + 5.0)?;
        let osc = osc_correction(&map, params, w1, mode)?;

        // growing solution u2 = B2(w/h1)(1 + c2), base at w1,
        // and decaying solution u1 = B1(w/h1)(1 + c1), base at w0
        let a2 = params.alpha * params.alpha;
        let mesh2 = quad::graded_mesh(w1, w0, |_| (0.3 * h1).min(0.2));
        let coeff = |w: f64| Complex::new(-a2 * map.v1_at_w(w).expect("V1"), 0.0);
        let (sol2, sol1) = if mode == Mode::Leading || map_eps_zero(&map) {
            (None, None)
        } else {
            let mut p2 = VolterraProblem::new(
                Homog::Custom(Box::new(|w: f64| sys.b2_sq(w / h1))),
                Box::new(coeff),
                mesh2.clone(),
                BasePoint::Start,
            );
            p2.tol = 1e-13;
            let mut p1 = VolterraProblem::new(
                Homog::Custom(Box::new(|w: f64| sys.b1_sq(w / h1))),
                Box::new(coeff),
                mesh2.clone(),
                BasePoint::End,
            );
            p1.tol = 1e-13;
            (Some(volterra::solve(&p2)?), Some(volterra::solve(&p1)?))
        };
        let one = Complex::new(1.0, 0.0);
        let eval_sol = |w: f64,
                        pair: (Scaled, Scaled),
                        sol: &Option<VolterraSolution>|
         -> (Scaled, Scaled) {
            let (b, db) = pair;
            match sol {
                Some(s) => {
                    let c = one + s.eval(w);
                    let dc = s.eval_deriv(w);
                    (b.mul_complex(c), db.mul_complex(c / h1) + b.mul_complex(dc))
                }
                None => (b, db.scale(1.0 / h1)),
            }
        };
        let g2 = |w: f64| eval_sol(w, sys.b2_pair(w / h1), &sol2);
        let g1 = |w: f64| eval_sol(w, sys.b1_pair(w / h1), &sol1);

        // matching Wronskians at w1 (an exact mesh node); W(u1, u2) is
        // computed numerically and stays ~ 2/h1 (no cancellation: the pair
        // is decaying- vs growing-normalized)
        let (gm_w1, dgm_w1) = osc.eval(w1)?;
        let (g2_w1, dg2_w1) = g2(w1);
        let (g1_w1, dg1_w1) = g1(w1);
        let w12 = g1_w1 * dg2_w1 - dg1_w1 * g2_w1;
        let gamma1 = (gm_w1 * dg2_w1 - dgm_w1 * g2_w1) / w12;
        let gamma2 = -(gm_w1 * dg1_w1 - dgm_w1 * g1_w1) / w12;

        let (g2_w0, dg2_w0) = g2(w0);
        let (g1_w0, dg1_w0) = g1(w0);
        let g_end = gamma1 * g1_w0 + gamma2 * g2_w0;
        let dg_end = gamma1 * dg1_w0 + gamma2 * dg2_w0;
        (g_end, dg_end)
    };

    // assembly: f(0) = kappa^{i nu} 2^{-1/2+i nu} hbar^{1/2 - i nu}
    //           phi'(z_end)^{-1/2} g_-(w0)
    let hbar = params.hbar;
    let alpha = params.alpha;
    let kappa_phase = (Complex::new(0.0, nu) * map.kappa0.ln()).exp();
    let ln2 = 2.0f64.ln();
    let norm = kappa_phase
        * (Complex::new(-0.5 * ln2, nu * ln2)).exp()
        * (Complex::new(0.5 * hbar.ln(), -nu * hbar.ln())).exp();
    let p1 = map.dphi(map.z_end)?;
    let p2 = map.d2phi(map.z_end)?;
    let f = g_end.mul_complex(norm * p1.powf(-0.5));
    let f_prime = (g_end.mul_complex(Complex::new(
        0.25 * p1.powf(-0.5) + 0.5 * p2 * p1.powf(-1.5) / alpha,
        0.0,
    )) - dg_end.mul_complex(Complex::new(p1.sqrt() / alpha, 0.0)))
    .mul_complex(norm);

    let s_exp = alpha * w0;
    let t_phase = -2.0 * params.energy * hbar.ln();
    finish_boundary(params, f, f_prime, s_exp, t_phase, Regime::SmallNu)
}

fn large_nu_boundary(
    spec: &PotentialSpec,
    params: &SemiParams,
    mode: Mode,
) -> Result<JostBoundary> {
    let map = LgMap::build(spec, params, Side::Plus)?;
    let tr = LargeNuTransform::new(&map, params)?;
    let nu = params.nu;
    let zeta0 = tr.zeta0;
    let sys = LargeNuSystem::build(nu, zeta0)?;
    let scale = sys.scale;
    let a2 = params.alpha * params.alpha;
    let eps_zero = map_eps_zero(&map);

    // sigma_2 correction of the growing solution on [0, zeta0]
    let sol2 = if mode == Mode::Leading || eps_zero {
        None
    } else {
        let mesh = quad::graded_mesh(0.0, zeta0, |z| {
            (0.5 / (nu * z.max(0.0).sqrt() + scale)).min(0.1)
        });
        let kernel = Homog::Custom(Box::new(|z: f64| sys.phi2_sq(z)));
        let mut prob = VolterraProblem::new(
            kernel,
            Box::new(|z: f64| Complex::new(-a2 * tr.v3(z).expect("V3"), 0.0)),
            mesh,
            BasePoint::Start,
        );
        prob.tol = 1e-13;
        Some(volterra::solve(&prob)?)
    };
    let one = Complex::new(1.0, 0.0);
    let phi2_big = |z: f64| -> (Scaled, Scaled) {
        let (p, dp) = sys.phi2(z);
        match &sol2 {
            Some(s) => {
                let c = one + s.eval(z);
                let dc = s.eval_deriv(z);
                (p.mul_complex(c), dp.mul_complex(c) + p.mul_complex(dc))
            }
            None => (p, dp),
        }
    };

    // Oscillatory region handled by the Frobenius-exact Bessel
    // representation: g_-(w) = B_-(w/h1, nu)(1 + hbar^2 c_-(w)) on (0, w_m]
    // with the matching point w_m = hbar1 nu (zeta = 0). This pins the
    // normalization without any asymptotic limits.
    let w_m = params.hbar1 * nu;
    let osc = osc_correction(&map, params, w_m, mode)?;
    let (g_m, dg_m) = osc.eval(w_m)?;
    // Phi-data at zeta = 0 from the chain Phi(zeta(v)) = zeta'(v)^{1/2} G(v),
    // G(v) = g_-(h1nu v)
    let h1nu = tr.h1nu;
    let zd1_1 = zeta::zeta_d1(1.0);
    let zd2_1 = zeta::zeta_d2(1.0);
    let phim_0 = g_m.scale(zd1_1.sqrt());
    let dphim_0 = (g_m.scale(0.5 * zd1_1.powf(-0.5) * zd2_1)
        + dg_m.scale(zd1_1.sqrt() * h1nu))
    .scale(1.0 / zd1_1);

    // decaying partner Phi_1 = phi_1 (1 + sigma_1), base at zeta0
    let sol1 = if mode == Mode::Leading || eps_zero {
        None
    } else {
        let mesh = quad::graded_mesh(0.0, zeta0, |z| {
            (0.5 / (nu * z.max(0.0).sqrt() + scale)).min(0.1)
        });
        let kernel = Homog::Custom(Box::new(|z: f64| {
            let (p, _) = sys.phi1(z);
            p * p
        }));
        let mut prob = VolterraProblem::new(
            kernel,
            Box::new(|z: f64| Complex::new(-a2 * tr.v3(z).expect("V3"), 0.0)),
            mesh,
            BasePoint::End,
        );
        prob.tol = 1e-13;
        Some(volterra::solve(&prob)?)
    };
    let phi1_big = |z: f64| -> (Scaled, Scaled) {
        let (p, dp) = sys.phi1(z);
        match &sol1 {
            Some(s) => {
                let c = one + s.eval(z);
                let dc = s.eval_deriv(z);
                (p.mul_complex(c), dp.mul_complex(c) + p.mul_complex(dc))
            }
            None => (p, dp),
        }
    };
    let (phi1_0, dphi1_0) = phi1_big(0.0);
    let (phi2_0, dphi2_0) = phi2_big(0.0);

    // matching at zeta = 0: Phi_- = A Phi_1 + B Phi_2 with the numerically
    // computed W(Phi_1, Phi_2)
    let wc = phi1_0 * dphi2_0 - dphi1_0 * phi2_0;
    let coeff_a = (phim_0 * dphi2_0 - dphim_0 * phi2_0) / wc;
    let coeff_b = -(phim_0 * dphi1_0 - dphim_0 * phi1_0) / wc;

    let (phi2_z0, dphi2_z0) = phi2_big(zeta0);
    let (phi1_z0, dphi1_z0) = phi1_big(zeta0);
    let phi_m_z0 = coeff_a * phi1_z0 + coeff_b * phi2_z0;
    let dphi_m_z0 = coeff_a * dphi1_z0 + coeff_b * dphi2_z0;

    // assembly with the Frobenius normalization (as in the small-nu route)
    let hbar = params.hbar;
    let alpha = params.alpha;
    let v_end = tr.v_end;
    let kappa_phase = (Complex::new(0.0, nu) * map.kappa0.ln()).exp();
    let ln2 = 2.0f64.ln();
    let norm = kappa_phase
        * (Complex::new(-0.5 * ln2, nu * ln2)).exp()
        * (Complex::new(0.5 * hbar.ln(), -nu * hbar.ln())).exp();
    let p1 = map.dphi(map.z_end)?;
    let p2 = map.d2phi(map.z_end)?;
    let zd1 = zeta::zeta_d1(v_end);
    let zd2 = zeta::zeta_d2(v_end);
    let pfac = p1.powf(-0.5);
    let zfac = zd1.powf(-0.5);
    let vp0 = -p1 / (hbar * nu); // dv/dx at x = 0
    let f = phi_m_z0.mul_complex(norm * pfac * zfac);
    // d/dx of e^{x/4} phi'^{-1/2} zeta'(v)^{-1/2} Phi_-(zeta(v)) at x = 0
    let term_quarter = phi_m_z0.scale(0.25 * pfac * zfac);
    let term_p = phi_m_z0.scale(0.5 * p2 * p1.powf(-1.5) / alpha * zfac);
    let term_z = phi_m_z0.scale(pfac * (-0.5) * zd1.powf(-1.5) * zd2 * vp0);
    let term_phi = dphi_m_z0.scale(pfac * zfac * zd1 * vp0);
    let f_prime = (term_quarter + term_p + term_z + term_phi).mul_complex(norm);

    let s_exp = hbar * nu * zeta::action(v_end);
    let t_phase = -2.0 * params.energy * alpha.ln();
    finish_boundary(params, f, f_prime, s_exp, t_phase, Regime::LargeNu)
}

fn finish_boundary(
    params: &SemiParams,
    f: Scaled,
    f_prime: Scaled,
    s_exp: f64,
    t_phase: f64,
    regime: Regime,
) -> Result<JostBoundary> {
    if f.is_zero() {
        return Err(Error::Assembly("vanishing Jost boundary value".into()));
    }
    let c_log_deriv = (f_prime / f).to_complex() * params.hbar;
    let gamma_ln = f.ln_abs() - 0.5 * params.alpha.ln() - s_exp / params.hbar;
    Ok(JostBoundary {
        f,
        f_prime,
        s_exp,
        t_phase,
        c_log_deriv,
        gamma_ln,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive_params;
    use approx::assert_relative_eq;

    fn closed_form_exp(params: &SemiParams) -> (Complex, Complex) {
        // f_+(0) = hbar^{-i nu} Gamma(1 - i nu) I_{-i nu}(2/hbar), and the
        // derivative from the chain rule of e^{x/4} f~(2 e^{-x/2})
        let nu = params.nu;
        let h = params.hbar;
        let i = bessel_i_imag(-nu, 2.0 / h).unwrap();
        let pref = (Complex::new(0.0, -nu) * h.ln()).exp() * gamma_cplx(Complex::new(1.0, -nu));
        let f = pref * i.value;
        // f'(0)/f(0) = -(1/h) I'(2/h)/I(2/h)
        let fp = -pref * i.derivative / h;
        (f, fp)
    }

    #[test]
    fn small_nu_single_path_matches_closed_form() {
        // nu = 2, 2/hbar = 10 -> single representation
        let spec = PotentialSpec::exponential();
        let par = derive_params(0.2, 0.2).unwrap();
        let jb = jost_boundary(&spec, &par, Side::Plus, Mode::Converged, RegimeChoice::Small)
            .unwrap();
        let (f_ref, fp_ref) = closed_form_exp(&par);
        let f = jb.f.to_complex();
        let fp = jb.f_prime.to_complex();
        assert!((f - f_ref).norm() <= 1e-9 * f_ref.norm(), "{f} vs {f_ref}");
        assert!((fp - fp_ref).norm() <= 1e-8 * fp_ref.norm(), "{fp} vs {fp_ref}");
    }

    #[test]
    fn small_nu_matched_path_matches_closed_form() {
        // 2/hbar = 40 -> matched representation
        let spec = PotentialSpec::exponential();
        let par = derive_params(0.05, 0.05).unwrap();
        let jb = jost_boundary(&spec, &par, Side::Plus, Mode::Converged, RegimeChoice::Small)
            .unwrap();
        let (f_ref, fp_ref) = closed_form_exp(&par);
        let f = jb.f.to_complex();
        let fp = jb.f_prime.to_complex();
        assert!((f - f_ref).norm() <= 1e-8 * f_ref.norm(), "{f} vs {f_ref}");
        assert!((fp - fp_ref).norm() <= 1e-8 * fp_ref.norm(), "{fp} vs {fp_ref}");
    }

    #[test]
    fn large_nu_matches_closed_form() {
        // nu = 8: Airy route against the Bessel closed form
        let spec = PotentialSpec::exponential();
        let par = derive_params(0.2, 0.05).unwrap();
        let jb = jost_boundary(&spec, &par, Side::Plus, Mode::Converged, RegimeChoice::Large)
            .unwrap();
        let (f_ref, fp_ref) = closed_form_exp(&par);
        let f = jb.f.to_complex();
        let fp = jb.f_prime.to_complex();
        assert!(
            (f - f_ref).norm() <= 1e-6 * f_ref.norm(),
            "rel err {}",
            (f - f_ref).norm() / f_ref.norm()
        );
        assert!(
            (fp - fp_ref).norm() <= 1e-6 * fp_ref.norm(),
            "rel err {}",
            (fp - fp_ref).norm() / fp_ref.norm()
        );
    }

    #[test]
    fn s_exponent_for_pure_exponential() {
        // small nu: S = alpha w0 = alpha (2/alpha) = 2 exactly for eps = 0
        let spec = PotentialSpec::exponential();
        let par = derive_params(0.1, 0.1).unwrap();
        let jb = jost_boundary(&spec, &par, Side::Plus, Mode::Converged, RegimeChoice::Small)
            .unwrap();
        assert_relative_eq!(jb.s_exp, 2.0, epsilon = 1e-10);
        assert!(jb.gamma_ln.abs() < 4.0);
        assert!(jb.c_log_deriv.re < 0.0);
        assert!(jb.c_log_deriv.norm() > 0.5);
    }

    #[test]
    fn reflection_symmetry() {
        let spec = PotentialSpec::exp_tail(vec![0.5]).unwrap();
        let par = derive_params(0.1, 0.2).unwrap();
        let plus = jost_boundary(&spec, &par, Side::Plus, Mode::Converged, RegimeChoice::Small)
            .unwrap();
        let minus = jost_boundary(&spec, &par, Side::Minus, Mode::Converged, RegimeChoice::Small)
            .unwrap();
        assert_eq!(plus.f.to_complex(), minus.f.to_complex());
        assert_eq!(plus.f_prime.to_complex(), (-minus.f_prime).to_complex());
    }
}
