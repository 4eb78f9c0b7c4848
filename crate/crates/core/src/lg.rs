//! The Liouville-Green normal-form map for the rescaled Bessel form of the
//! scattering equation.
//!
//! With R(z) = 1 - 1/z^2 + eps(alpha^2 z^2 / 4) the normalizing
//! diffeomorphism phi solves phi'(z)^2 (1 - 1/phi^2) = R(z), built as
//! phi = zeta^{-1}(tau) with tau the phase integral through the turning
//! point; the normal-form potential is
//! V1(w) = (1/alpha^2) [ 3/4 phi''^2/phi'^4 - 1/2 phi'''/phi'^3 ] at
//! z = phi^{-1}(w).

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, Side};
use crate::quad::{self, gauss};
use crate::series;
use crate::zeta;
use crate::SemiParams;

/// Largest alpha accepted by the construction; validated rather than derived.
pub const ALPHA_MAX_DEFAULT: f64 = 0.75;

const SERIES_ORDER: usize = 10;
const WINDOW: f64 = 0.08;

pub struct LgMap {
    pub alpha: f64,
    pub hbar: f64,
    pub z_t: f64,
    /// Right domain endpoint 2/alpha (image of x = 0).
    pub z_end: f64,
    /// Image endpoint w0 = phi(z_end).
    pub w0: f64,
    /// kappa = lim_{z->0} phi(z)/z. The separable solution normalized by
    /// phi(z_t) = 1 has kappa = 1 + O(alpha^2) (not exactly 1); the factor
    /// kappa^{i nu} enters the Jost normalization as a phase.
    pub kappa0: f64,
    /// Turning-point series phi(z) = 1 + sum p[k] (z - z_t)^k.
    p_series: Vec<f64>,
    /// R-series around z_t.
    r_series: Vec<f64>,
    nodes: Vec<f64>,
    phi_nodes: Vec<f64>,
    dphi_nodes: Vec<f64>,
    eps_zero: bool,
    side: Side,
    spec: PotentialSpec,
}

fn eps_all_zero(spec: &PotentialSpec, side: Side) -> bool {
    match spec.tail(side) {
        crate::potential::Tail::Series(c) => c.iter().all(|&x| x == 0.0),
        _ => false,
    }
}

impl LgMap {
    pub fn build(spec: &PotentialSpec, params: &SemiParams, side: Side) -> Result<LgMap> {
        Self::build_with_alpha_max(spec, params, side, ALPHA_MAX_DEFAULT)
    }

    pub fn build_with_alpha_max(
        spec: &PotentialSpec,
        params: &SemiParams,
        side: Side,
        alpha_max: f64,
    ) -> Result<LgMap> {
        if spec.is_free() {
            return Err(Error::SpecValidation(
                "the normal-form construction needs a positive potential".into(),
            ));
        }
        let alpha = params.alpha;
        if alpha > alpha_max {
            return Err(Error::OutOfRegime(format!(
                "alpha = {alpha} exceeds alpha_max = {alpha_max}"
            )));
        }
        let z_end = 2.0 / alpha;
        let eps_zero = eps_all_zero(spec, side);

        // R(z) and its turning point.
        let a2q = 0.25 * alpha * alpha;
        let eps0 = |u: f64| spec.tail(side).eps(u, 0);
        let r_of = |z: f64| -> Result<f64> { Ok(1.0 - 1.0 / (z * z) + eps0(a2q * z * z)?) };

        let z_t = if eps_zero {
            1.0
        } else {
            // R is increasing through its unique root near 1
            let mut lo = 0.2;
            let mut hi = (0.5 * z_end).min(4.0);
            if !(r_of(lo)? < 0.0 && r_of(hi)? > 0.0) {
                return Err(Error::SpecValidation(
                    "no sign change of the normal-form coefficient near z = 1".into(),
                ));
            }
            let mut z = 1.0;
            for _ in 0..200 {
                let f = r_of(z)?;
                if f > 0.0 {
                    hi = z;
                } else {
                    lo = z;
                }
                let d = 2.0 / (z * z * z)
                    + spec.tail(side).eps(a2q * z * z, 1)? * 2.0 * a2q * z;
                let mut nz = z - f / d;
                if !(nz > lo && nz < hi) {
                    nz = 0.5 * (lo + hi);
                }
                if (nz - z).abs() <= 1e-15 * z {
                    z = nz;
                    break;
                }
                z = nz;
            }
            z
        };
        if z_end < z_t + 4.0 * WINDOW {
            return Err(Error::OutOfRegime(format!(
                "barrier margin too small: z_end = {z_end}, z_t = {z_t}"
            )));
        }
        // R(z_end) > 0: the boundary x = 0 must stay inside the barrier.
        if r_of(z_end)? <= 0.0 {
            return Err(Error::OutOfRegime(
                "normal-form coefficient not positive at the boundary".into(),
            ));
        }

        // Series of R around z_t (composition through u = a2q z^2).
        let n = SERIES_ORDER;
        let r_series = {
            let u_t = a2q * z_t * z_t;
            // eps(u_t + du) series in du
            let mut eps_u = vec![0.0; n];
            let mut fact = 1.0;
            for (j, e) in eps_u.iter_mut().enumerate() {
                if j > 0 {
                    fact *= j as f64;
                }
                *e = spec.tail(side).eps(u_t, j)? / fact;
            }
            // du(d) = a2q (2 z_t d + d^2)
            let du = {
                let mut v = vec![0.0; n];
                v[1] = 2.0 * a2q * z_t;
                v[2] = a2q;
                v
            };
            // compose: eps_series(d) = sum eps_u[j] du(d)^j
            let mut eps_series = vec![0.0; n];
            let mut du_pow = {
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v
            };
            for j in 0..n {
                for (k, &c) in du_pow.iter().enumerate() {
                    eps_series[k] += eps_u[j] * c;
                }
                du_pow = series::ps_mul(&du_pow, &du, n);
            }
            // 1 - 1/(z_t + d)^2 = 1 - z_t^{-2} (1 + d/z_t)^{-2}
            let shift = {
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v[1] = 1.0 / z_t;
                let inv = series::ps_recip(&series::ps_mul(&v, &v, n), n);
                let mut out = vec![0.0; n];
                for (k, &c) in inv.iter().enumerate() {
                    out[k] = -c / (z_t * z_t);
                }
                out[0] += 1.0;
                out
            };
            let mut r = vec![0.0; n];
            for k in 0..n {
                r[k] = shift[k] + eps_series[k];
            }
            // the constant term vanishes at the turning point
            r[0] = 0.0;
            r
        };

        // phi-series: (phi')^2 (1 - phi^{-2}) = R, phi(z_t) = 1.
        let p_series = if eps_zero {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v[1] = 1.0;
            v
        } else {
            let d_of = |u: &[f64]| {
                let u2 = series::ps_mul(u, u, n);
                let inv = series::ps_recip(&u2, n);
                let mut d = vec![0.0; n];
                for k in 0..n {
                    d[k] = if k == 0 { 1.0 - inv[0] } else { -inv[k] };
                }
                d
            };
            series::solve_lg_series(&r_series, 1.0, 2.0, d_of, n)
        };

        // Mesh with z_t and z_t ± WINDOW as nodes.
        let z_min = 1e-6_f64.min(0.1 * z_t);
        let mut nodes: Vec<f64> = Vec::new();
        // log region z_min .. 0.5 z_t
        let mut v = quad::log_mesh(z_min, 0.5 * z_t, 30);
        nodes.append(&mut v);
        // linear up to z_t - WINDOW, graded toward the turning point
        let mut v = quad::graded_mesh(0.5 * z_t, z_t - WINDOW, |z| {
            (0.3 * (z_t - z).abs()).clamp(0.01, 0.05)
        });
        nodes.append(&mut v);
        nodes.push(z_t);
        nodes.push(z_t + WINDOW);
        let mut v = quad::graded_mesh(z_t + WINDOW, z_end, |z| {
            (0.3 * (z - z_t).abs()).clamp(0.01, 0.03)
        });
        nodes.append(&mut v);
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

        let map = LgMap {
            alpha,
            hbar: params.hbar,
            z_t,
            z_end,
            w0: 0.0,
            kappa0: 1.0,
            p_series,
            r_series,
            nodes: nodes.clone(),
            phi_nodes: vec![],
            dphi_nodes: vec![],
            eps_zero,
            side,
            spec: spec.clone(),
        };

        // Action cumulative and phi at nodes.
        let idx_t = nodes
            .iter()
            .position(|&z| (z - z_t).abs() < 1e-12)
            .expect("turning point node");
        let mut action = vec![0.0; nodes.len()];
        // rightward from z_t
        for i in idx_t..nodes.len() - 1 {
            action[i + 1] = action[i] + map.action_panel(nodes[i], nodes[i + 1])?;
        }
        // leftward from z_t (negative action)
        for i in (0..idx_t).rev() {
            action[i] = action[i + 1] - map.action_panel(nodes[i], nodes[i + 1])?;
        }

        let mut phi_nodes = vec![0.0; nodes.len()];
        let mut dphi_nodes = vec![0.0; nodes.len()];
        for i in 0..nodes.len() {
            let z = nodes[i];
            if (z - z_t).abs() <= WINDOW * (1.0 + 1e-12) {
                phi_nodes[i] = series::ps_eval(&map.p_series, z - z_t);
                dphi_nodes[i] = series::ps_eval_deriv(&map.p_series, z - z_t, 1);
            } else {
                let tau = action[i].signum() * (1.5 * action[i].abs()).powf(2.0 / 3.0);
                let w = zeta::zeta_inv(tau);
                phi_nodes[i] = w;
                let d = 1.0 - 1.0 / (w * w);
                dphi_nodes[i] = (map.r_checked(z)? / d).sqrt();
            }
        }
        // monotonicity check
        for i in 0..nodes.len() - 1 {
            if phi_nodes[i + 1] <= phi_nodes[i] {
                return Err(Error::SpecValidation(format!(
                    "phi tabulation not increasing near z = {}",
                    nodes[i]
                )));
            }
        }
        let w0 = *phi_nodes.last().unwrap();
        let kappa0 = if eps_zero {
            1.0
        } else {
            phi_nodes[0] / nodes[0]
        };
        Ok(LgMap {
            w0,
            kappa0,
            phi_nodes,
            dphi_nodes,
            ..map
        })
    }

    fn r_checked(&self, z: f64) -> Result<f64> {
        let a2q = 0.25 * self.alpha * self.alpha;
        Ok(1.0 - 1.0 / (z * z) + self.spec.tail(self.side).eps(a2q * z * z, 0)?)
    }

    fn r_deriv(&self, z: f64, k: usize) -> Result<f64> {
        // derivatives of R(z) = 1 - z^{-2} + eps(a2q z^2)
        let a2q = 0.25 * self.alpha * self.alpha;
        let u = a2q * z * z;
        let t = self.spec.tail(self.side);
        match k {
            0 => self.r_checked(z),
            1 => Ok(2.0 / (z * z * z) + t.eps(u, 1)? * 2.0 * a2q * z),
            2 => Ok(-6.0 / (z * z * z * z)
                + t.eps(u, 2)? * (2.0 * a2q * z) * (2.0 * a2q * z)
                + t.eps(u, 1)? * 2.0 * a2q),
            _ => Err(Error::UnsupportedOrder { got: k, max: 2 }),
        }
    }

    /// sign(z - z_t) * sqrt(|R|) factored as sqrt(|u - z_t| * g): g(u).
    fn g_factor(&self, u: f64) -> Result<f64> {
        // the direct ratio only loses accuracy immediately at the root
        let d = u - self.z_t;
        if d.abs() <= 0.01 {
            // series R/d
            let mut s = 0.0;
            for (k, &c) in self.r_series.iter().enumerate().skip(1) {
                s += c * d.powi(k as i32 - 1);
            }
            Ok(s)
        } else {
            Ok(self.r_checked(u)? / d)
        }
    }

    /// ∫_a^b sqrt(|R|) du with the endpoint square root handled by the
    /// substitution u = z_t ± s^2 when a or b is the turning point.
    fn action_panel(&self, a: f64, b: f64) -> Result<f64> {
        let rule = gauss(16);
        let zt = self.z_t;
        if (a - zt).abs() < 1e-12 {
            // u = z_t + s^2, s in [0, sqrt(b - z_t)]
            let smax = (b - zt).sqrt();
            let mut total = 0.0;
            for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let s = 0.5 * smax * (x + 1.0);
                let u = zt + s * s;
                total += w * 2.0 * s * s * self.g_factor(u)?.max(0.0).sqrt();
            }
            return Ok(total * 0.5 * smax);
        }
        if (b - zt).abs() < 1e-12 {
            // g = R/(u - z_t) stays positive on both sides of the root
            let smax = (zt - a).sqrt();
            let mut total = 0.0;
            for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let s = 0.5 * smax * (x + 1.0);
                let u = zt - s * s;
                total += w * 2.0 * s * s * self.g_factor(u)?.max(0.0).sqrt();
            }
            return Ok(total * 0.5 * smax);
        }
        let mut total = 0.0;
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let u = mid + half * x;
            total += w * self.r_checked(u)?.abs().sqrt();
        }
        Ok(total * half)
    }

    /// Tabulation nodes (ascending; z_t is a node).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Tabulated phi values at the nodes.
    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }

    /// The signed phase integral tau(z).
    pub fn tau(&self, z: f64) -> Result<f64> {
        if (z - self.z_t).abs() <= WINDOW {
            let w = series::ps_eval(&self.p_series, z - self.z_t);
            return Ok(zeta::zeta(w));
        }
        let a = self.action_direct(z)?;
        Ok(a.signum() * (1.5 * a.abs()).powf(2.0 / 3.0))
    }

    /// Direct (non-tabulated) action integral from z_t to z.
    fn action_direct(&self, z: f64) -> Result<f64> {
        let zt = self.z_t;
        if (z - zt).abs() < 1e-14 {
            return Ok(0.0);
        }
        let (sgn, lo, hi) = if z > zt { (1.0, zt, z) } else { (-1.0, z, zt) };
        // split: substitution panel near z_t, then graded panels
        let split = if z > zt {
            (zt + WINDOW).min(hi)
        } else {
            (zt - WINDOW).max(lo)
        };
        let mut total = if z > zt {
            self.action_panel(zt, split)?
        } else {
            self.action_panel(split, zt)?
        };
        let (ra, rb) = if z > zt { (split, hi) } else { (lo, split) };
        if rb > ra + 1e-14 {
            let mesh = quad::graded_mesh(ra, rb, |u| (0.3 * (u - zt).abs()).clamp(0.005, 0.2));
            for i in 0..mesh.len() - 1 {
                total += self.action_panel(mesh[i], mesh[i + 1])?;
            }
        }
        Ok(sgn * total)
    }

    /// phi(z) (tabulated; series near the turning point).
    pub fn phi(&self, z: f64) -> f64 {
        if (z - self.z_t).abs() <= WINDOW {
            series::ps_eval(&self.p_series, z - self.z_t)
        } else {
            quad::hermite_eval(&self.nodes, &self.phi_nodes, &self.dphi_nodes, z)
        }
    }

    /// Slow path: phi by direct quadrature and inversion (no tables).
    pub fn phi_direct(&self, z: f64) -> Result<f64> {
        if (z - self.z_t).abs() <= WINDOW {
            return Ok(series::ps_eval(&self.p_series, z - self.z_t));
        }
        Ok(zeta::zeta_inv(self.tau(z)?))
    }

    pub fn dphi(&self, z: f64) -> Result<f64> {
        if (z - self.z_t).abs() <= WINDOW {
            return Ok(series::ps_eval_deriv(&self.p_series, z - self.z_t, 1));
        }
        let w = self.phi(z);
        let d = 1.0 - 1.0 / (w * w);
        Ok((self.r_checked(z)? / d).sqrt())
    }

    pub fn d2phi(&self, z: f64) -> Result<f64> {
        if (z - self.z_t).abs() <= WINDOW {
            return Ok(series::ps_eval_deriv(&self.p_series, z - self.z_t, 2));
        }
        let w = self.phi(z);
        let p1 = self.dphi(z)?;
        let d = 1.0 - 1.0 / (w * w);
        let dp = 2.0 / (w * w * w);
        Ok((self.r_deriv(z, 1)? - p1 * p1 * p1 * dp) / (2.0 * p1 * d))
    }

    pub fn d3phi(&self, z: f64) -> Result<f64> {
        if (z - self.z_t).abs() <= WINDOW {
            return Ok(series::ps_eval_deriv(&self.p_series, z - self.z_t, 3));
        }
        let w = self.phi(z);
        let p1 = self.dphi(z)?;
        let p2 = self.d2phi(z)?;
        let d = 1.0 - 1.0 / (w * w);
        let dp = 2.0 / (w * w * w);
        let dpp = -6.0 / (w * w * w * w);
        Ok(
            (self.r_deriv(z, 2)? - 2.0 * p2 * p2 * d - 5.0 * p1 * p1 * p2 * dp
                - p1 * p1 * p1 * p1 * dpp)
                / (2.0 * p1 * d),
        )
    }

    /// Normal-form potential V1 at z.
    pub fn v1_at_z(&self, z: f64) -> Result<f64> {
        if self.eps_zero {
            return Ok(0.0);
        }
        let p1 = self.dphi(z)?;
        let p2 = self.d2phi(z)?;
        let p3 = self.d3phi(z)?;
        Ok((0.75 * p2 * p2 / (p1 * p1 * p1 * p1) - 0.5 * p3 / (p1 * p1 * p1))
            / (self.alpha * self.alpha))
    }

    /// Inverse map z(w) by table + Newton polish.
    pub fn z_of_w(&self, w: f64) -> Result<f64> {
        if !(w > 0.0 && w <= self.w0 * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "w = {w} outside (0, w0 = {}]",
                self.w0
            )));
        }
        // inverse Hermite on the swapped table
        let dz: Vec<f64> = self.dphi_nodes.iter().map(|d| 1.0 / d).collect();
        let mut z = quad::hermite_eval(&self.phi_nodes, &self.nodes, &dz, w);
        z = z.clamp(self.nodes[0], self.z_end);
        for _ in 0..50 {
            let f = self.phi(z) - w;
            let d = self.dphi(z)?;
            let step = f / d;
            z -= step;
            z = z.clamp(self.nodes[0] * 0.5, self.z_end);
            if step.abs() <= 1e-14 * (1.0 + z.abs()) {
                break;
            }
        }
        Ok(z)
    }

    /// V1 as a function of w in (0, w0).
    pub fn v1_at_w(&self, w: f64) -> Result<f64> {
        if self.eps_zero {
            return Ok(0.0);
        }
        let z = self.z_of_w(w)?;
        self.v1_at_z(z)
    }

    /// The proof-level action exponent S = alpha * w0.
    pub fn s_exponent(&self) -> f64 {
        self.alpha * self.w0
    }

    /// eps2 of the normalized form phi = kappa z (1 + alpha^2 z^2 eps2(z)).
    pub fn eps2(&self, z: f64) -> f64 {
        (self.phi(z) / (self.kappa0 * z) - 1.0) / (self.alpha * self.alpha * z * z)
    }

    /// Sup of the change-of-variables identity residual over the mesh,
    /// scaled by the local coefficient size.
    pub fn identity_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, &z) in self.nodes.iter().enumerate() {
            if (z - self.z_t).abs() < 2.0 * WINDOW {
                continue;
            }
            let w = self.phi_nodes[i];
            let p1 = self.dphi_nodes[i];
            let lhs = self.r_checked(z)? / (p1 * p1);
            let rhs = 1.0 - 1.0 / (w * w);
            worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        }
        Ok(worst)
    }
}

/// The large-nu data: V3 (the transformed normal-form perturbation), the
/// right endpoint zeta0, and the rescaled endpoint v_end.
pub struct LargeNuTransform<'a> {
    pub map: &'a LgMap,
    /// hbar1 * nu = alpha-normalized rescale factor.
    pub h1nu: f64,
    pub v_end: f64,
    pub zeta0: f64,
}

impl<'a> LargeNuTransform<'a> {
    pub fn new(map: &'a LgMap, params: &SemiParams) -> Result<Self> {
        let h1nu = params.hbar1 * params.nu;
        let v_end = map.w0 / h1nu;
        if v_end <= 1.0 {
            return Err(Error::OutOfRegime(
                "rescaled boundary inside the oscillatory region".into(),
            ));
        }
        Ok(LargeNuTransform {
            map,
            h1nu,
            v_end,
            zeta0: zeta::zeta(v_end),
        })
    }

    /// V3(zeta) = zeta'(v)^{-2} (h1nu)^2 V1(h1nu v); vanishing for eps == 0.
    pub fn v3(&self, z: f64) -> Result<f64> {
        if self.map.eps_zero {
            return Ok(0.0);
        }
        let v = zeta::zeta_inv(z);
        let w = self.h1nu * v;
        if w >= self.map.w0 {
            return Ok(self.map.v1_at_w(self.map.w0 * (1.0 - 1e-12))?
                * self.h1nu
                * self.h1nu
                / (zeta::zeta_d1(v).powi(2)));
        }
        let d1 = zeta::zeta_d1(v);
        Ok(self.map.v1_at_w(w)? * self.h1nu * self.h1nu / (d1 * d1))
    }
}
