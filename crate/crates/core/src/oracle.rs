//! Independent ground truth: direct integration of -hbar^2 f'' + V f = E^2 f
//! from asymptotic data by an adaptive Runge-Kutta-Fehlberg 7(8) scheme with
//! mantissa/exponent renormalization, plus the closed Bessel form for the
//! pure exponential potential.

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, Side, Tail};
use crate::scaled::Scaled;
use crate::special::bessel::bessel_i_imag;
use crate::special::gamma::gamma_cplx;
use crate::{Complex, SemiParams};

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Cap on the starting abscissa.
    pub x_inf_cap: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Number of tail terms in the asymptotic starting correction.
    pub correction_order: usize,
    /// Fixed step size (disables adaptivity; used by order-verification tests).
    pub fixed_step: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            x_inf_cap: 80.0,
            rtol: 1e-12,
            atol: 1e-14,
            correction_order: 2,
            fixed_step: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleJost {
    pub f: Scaled,
    pub f_prime: Scaled,
    /// Max relative drift of the monitored conserved Wronskian W(f, conj f).
    pub wronskian_drift: f64,
}

// Fehlberg 7(8) coefficients (13 stages).
const A: [f64; 13] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

fn b_matrix() -> [[f64; 12]; 13] {
    let mut b = [[0.0; 12]; 13];
    b[1][0] = 2.0 / 27.0;
    b[2][0] = 1.0 / 36.0;
    b[2][1] = 1.0 / 12.0;
    b[3][0] = 1.0 / 24.0;
    b[3][2] = 1.0 / 8.0;
    b[4][0] = 5.0 / 12.0;
    b[4][2] = -25.0 / 16.0;
    b[4][3] = 25.0 / 16.0;
    b[5][0] = 1.0 / 20.0;
    b[5][3] = 0.25;
    b[5][4] = 0.2;
    b[6][0] = -25.0 / 108.0;
    b[6][3] = 125.0 / 108.0;
    b[6][4] = -65.0 / 27.0;
    b[6][5] = 125.0 / 54.0;
    b[7][0] = 31.0 / 300.0;
    b[7][4] = 61.0 / 225.0;
    b[7][5] = -2.0 / 9.0;
    b[7][6] = 13.0 / 900.0;
    b[8][0] = 2.0;
    b[8][3] = -53.0 / 6.0;
    b[8][4] = 704.0 / 45.0;
    b[8][5] = -107.0 / 9.0;
    b[8][6] = 67.0 / 90.0;
    b[8][7] = 3.0;
    b[9][0] = -91.0 / 108.0;
    b[9][3] = 23.0 / 108.0;
    b[9][4] = -976.0 / 135.0;
    b[9][5] = 311.0 / 54.0;
    b[9][6] = -19.0 / 60.0;
    b[9][7] = 17.0 / 6.0;
    b[9][8] = -1.0 / 12.0;
    b[10][0] = 2383.0 / 4100.0;
    b[10][3] = -341.0 / 164.0;
    b[10][4] = 4496.0 / 1025.0;
    b[10][5] = -301.0 / 82.0;
    b[10][6] = 2133.0 / 4100.0;
    b[10][7] = 45.0 / 82.0;
    b[10][8] = 45.0 / 164.0;
    b[10][9] = 18.0 / 41.0;
    b[11][0] = 3.0 / 205.0;
    b[11][5] = -6.0 / 41.0;
    b[11][6] = -3.0 / 205.0;
    b[11][7] = -3.0 / 41.0;
    b[11][8] = 3.0 / 41.0;
    b[11][9] = 6.0 / 41.0;
    b[12][0] = -1777.0 / 4100.0;
    b[12][3] = -341.0 / 164.0;
    b[12][4] = 4496.0 / 1025.0;
    b[12][5] = -289.0 / 82.0;
    b[12][6] = 2193.0 / 4100.0;
    b[12][7] = 51.0 / 82.0;
    b[12][8] = 33.0 / 164.0;
    b[12][9] = 12.0 / 41.0;
    b[12][11] = 1.0;
    b
}

// 8th-order weights (local extrapolation).
const C8: [f64; 13] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

type State = [f64; 4];

fn rhs(spec: &PotentialSpec, params: &SemiParams, x: f64, y: &State) -> Result<State> {
    let v = spec.eval(x, 0)?;
    let c = (v - params.energy * params.energy) / (params.hbar * params.hbar);
    Ok([y[2], y[3], c * y[0], c * y[1]])
}

/// One RKF78 step; returns (new state, embedded error estimate).
fn step(
    spec: &PotentialSpec,
    params: &SemiParams,
    x: f64,
    y: &State,
    h: f64,
    b: &[[f64; 12]; 13],
) -> Result<(State, f64)> {
    let mut k = [[0.0f64; 4]; 13];
    k[0] = rhs(spec, params, x, y)?;
    for s in 1..13 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let w = b[s][j];
            if w != 0.0 {
                for c in 0..4 {
                    ys[c] += h * w * kj[c];
                }
            }
        }
        k[s] = rhs(spec, params, x + A[s] * h, &ys)?;
    }
    let mut out = *y;
    for (s, ks) in k.iter().enumerate() {
        let w = C8[s];
        if w != 0.0 {
            for c in 0..4 {
                out[c] += h * w * ks[c];
            }
        }
    }
    // error estimate: (41/840)(k0 + k10 - k11 - k12) h
    let mut err: f64 = 0.0;
    for c in 0..4 {
        let e = 41.0 / 840.0 * (k[0][c] + k[10][c] - k[11][c] - k[12][c]) * h;
        err = err.max(e.abs());
    }
    Ok((out, err))
}

/// Starting abscissa: smallest x with V(x) <= 1e-14 E^2, capped.
pub fn default_x_inf(spec: &PotentialSpec, params: &SemiParams, cfg: &OracleConfig) -> Result<f64> {
    if spec.is_free() {
        return Ok(0.0);
    }
    let target = 1e-14 * params.energy * params.energy;
    let mut x = 1.0;
    while x < cfg.x_inf_cap && spec.eval(x, 0)? > target {
        x += 1.0;
    }
    Ok(x.min(cfg.x_inf_cap))
}

/// Asymptotic starting data from the first Volterra iteration of the Jost
/// integral equation with the tail series V = sum_k c_k e^{-k x}.
fn starting_data(
    spec: &PotentialSpec,
    params: &SemiParams,
    x: f64,
    order: usize,
) -> Result<(Complex, Complex)> {
    let kappa = params.energy / params.hbar;
    let phase = Complex::new(0.0, kappa * x).exp();
    if spec.is_free() {
        return Ok((phase, Complex::new(0.0, kappa) * phase));
    }
    // c_1 = 1; c_{j+1} = eps_j (tail series coefficients of eps)
    let mut delta = Complex::new(0.0, 0.0);
    let mut ddelta = Complex::new(0.0, 0.0);
    for j in 0..order.max(1) {
        let kk = (j + 1) as f64;
        let c = if j == 0 {
            1.0
        } else {
            match spec.tail(Side::Plus) {
                Tail::Series(v) => v.get(j - 1).copied().unwrap_or(0.0),
                t => {
                    // leading series coefficients probed at u -> 0
                    let mut f = 1.0;
                    for i in 1..j {
                        f *= i as f64;
                    }
                    t.eps(1e-30, j - 1)? / f
                }
            }
        };
        if c == 0.0 {
            continue;
        }
        let den = Complex::new(params.hbar * params.hbar * kk * kk, 0.0)
            - Complex::new(0.0, 2.0 * params.energy * params.hbar * kk);
        let term = c * (-kk * x).exp() / den;
        delta += term;
        ddelta += -kk * term;
    }
    let f = phase * (1.0 + delta);
    let fp = Complex::new(0.0, kappa) * f + phase * ddelta;
    Ok((f, fp))
}

/// Integrate the Jost solution from the asymptotic region down to x_target
/// (on the plus side; the minus side reflects the potential).
pub fn integrate_jost(
    spec: &PotentialSpec,
    params: &SemiParams,
    side: Side,
    x_target: f64,
    cfg: &OracleConfig,
) -> Result<OracleJost> {
    if side == Side::Minus {
        let refl = spec.reflected();
        let r = integrate_jost(&refl, params, Side::Plus, -x_target, cfg)?;
        return Ok(OracleJost {
            f: r.f,
            f_prime: -r.f_prime,
            wronskian_drift: r.wronskian_drift,
        });
    }
    let x_inf = default_x_inf(spec, params, cfg)?.max(x_target);
    let (f0, fp0) = starting_data(spec, params, x_inf, cfg.correction_order)?;
    let mut y: State = [f0.re, f0.im, fp0.re, fp0.im];
    let mut exp_acc = 0.0f64;
    let w_ref = f0.re * fp0.im - f0.im * fp0.re; // Im(conj f * f')
    let mut drift: f64 = 0.0;
    let b = b_matrix();

    let span = x_inf - x_target;
    if span <= 0.0 {
        return Ok(OracleJost {
            f: Scaled::from_complex(f0),
            f_prime: Scaled::from_complex(fp0),
            wronskian_drift: 0.0,
        });
    }
    let mut x = x_inf;
    let mut h = -cfg
        .fixed_step
        .unwrap_or((0.05 * params.hbar / params.energy.max(params.hbar)).min(0.05 * span + 1e-9));
    let mut steps = 0usize;
    while x > x_target {
        if x + h < x_target {
            h = x_target - x;
        }
        let (ynew, err) = step(spec, params, x, &y, h, &b)?;
        let scale = cfg.atol
            + cfg.rtol
                * ynew
                    .iter()
                    .chain(y.iter())
                    .fold(0.0f64, |m, v| m.max(v.abs()));
        let ok = cfg.fixed_step.is_some() || err <= scale;
        if ok {
            x += h;
            y = ynew;
            // renormalize the linear system to keep exponents in range
            let m = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m > 1e30 {
                let d = m.ln();
                let s = (-d).exp();
                for c in y.iter_mut() {
                    *c *= s;
                }
                exp_acc += d;
            }
            // the conserved Wronskian is monitorable only while the product
            // |f||f'| does not swamp 2E/hbar at machine precision
            let mag = (y[0] * y[0] + y[1] * y[1]).sqrt() * (y[2] * y[2] + y[3] * y[3]).sqrt();
            let meaningful = (1e-16 * mag).ln()
                <= (0.3 * cfg.rtol.max(1e-13) * w_ref.abs()).ln() - 2.0 * exp_acc;
            if meaningful {
                let w = y[0] * y[3] - y[1] * y[2];
                let rel = (w * (2.0 * exp_acc).exp() - w_ref).abs() / w_ref.abs();
                drift = drift.max(rel);
            }
            steps += 1;
            if steps > 50_000_000 {
                return Err(Error::StepCollapse { x, h });
            }
        }
        if cfg.fixed_step.is_none() {
            let fac = if err > 0.0 {
                (0.9 * (scale / err).powf(1.0 / 8.0)).clamp(0.2, 4.0)
            } else {
                4.0
            };
            h *= fac;
            if h.abs() < 1e-13 * span {
                return Err(Error::StepCollapse { x, h });
            }
            if x + h < x_target {
                h = x_target - x;
            }
        }
    }
    Ok(OracleJost {
        f: Scaled::new(Complex::new(y[0], y[1]), exp_acc),
        f_prime: Scaled::new(Complex::new(y[2], y[3]), exp_acc),
        wronskian_drift: drift,
    })
}

/// Closed Bessel form of the Jost solution for V = e^{-|x|}, x >= 0:
/// f_+(x) = e^{x/4} 2^{-1/2} hbar^{-i nu} Gamma(1 - i nu) sqrt(y) I_{-i nu}(y/hbar)
/// at y = 2 e^{-x/2}.
pub fn closed_form_exponential(params: &SemiParams, x: f64) -> Result<(Complex, Complex)> {
    if x < 0.0 {
        return Err(Error::Domain("closed form defined for x >= 0".into()));
    }
    let nu = params.nu;
    let h = params.hbar;
    let y = 2.0 * (-0.5 * x).exp();
    let i = bessel_i_imag(-nu, y / h)?;
    let pref = 0.5f64.sqrt()
        * (Complex::new(0.0, -nu) * h.ln()).exp()
        * gamma_cplx(Complex::new(1.0, -nu));
    let ft = |yv: f64, iv: Complex| pref * yv.sqrt() * iv;
    let f_tilde = ft(y, i.value);
    // d f~/dy = pref [ I/(2 sqrt y) + sqrt y I'/hbar ]
    let df_tilde = pref * (0.5 / y.sqrt() * i.value + y.sqrt() * i.derivative / h);
    let e4 = (0.25 * x).exp();
    let f = e4 * f_tilde;
    // f' = (1/4) e^{x/4} f~ + e^{x/4} f~'(y) * dy/dx, dy/dx = -y/2
    let fp = 0.25 * e4 * f_tilde + e4 * df_tilde * (-0.5 * y);
    Ok((f, fp))
}
