//! Potential models: two-sided exponentially decaying positive potentials
//! with tail decomposition V(x) = e^{-|x|} [1 + eps(e^{-|x|})], including the
//! Regge-Wheeler family in the tortoise coordinate.

use crate::error::{Error, Result};
use crate::SemiParams;
use serde::Deserialize;
use std::sync::Arc;

/// Highest derivative order the evaluators support.
pub const MAX_DERIV: usize = 10;

/// Which side of the real line a tail describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Tail model for eps(u) with V = e^{-|x|} (1 + eps(e^{-|x|})), u = e^{-|x|}.
#[derive(Clone)]
pub enum Tail {
    /// eps(u) = sum_k c[k] u^{k+1} (truncated power series; c[0] multiplies u).
    Series(Vec<f64>),
    /// Exact evaluator: (u, derivative order) -> d^k eps / du^k.
    Analytic(Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>),
}

impl Tail {
    /// d^k/du^k eps at u.
    pub fn eps(&self, u: f64, k: usize) -> Result<f64> {
        if k > MAX_DERIV {
            return Err(Error::UnsupportedOrder {
                got: k,
                max: MAX_DERIV,
            });
        }
        match self {
            Tail::Series(c) => {
                let mut s = 0.0;
                // eps = sum c_j u^{j+1}; k-th derivative term:
                // c_j (j+1)!/(j+1-k)! u^{j+1-k}
                for (j, &cj) in c.iter().enumerate() {
                    let p = j + 1;
                    if p < k {
                        continue;
                    }
                    let mut f = 1.0;
                    for i in 0..k {
                        f *= (p - i) as f64;
                    }
                    s += cj * f * u.powi((p - k) as i32);
                }
                Ok(s)
            }
            Tail::Analytic(f) => Ok(f(u, k)),
        }
    }
}

/// Built-in potential families.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// V = 0 (oracle pipeline only).
    Free,
    /// V = e^{-|x|}.
    Exponential,
    /// V = e^{-|x|} (1 + eps(e^{-|x|})) with series tails.
    ExpTail,
    /// Symmetrized Regge-Wheeler potential (see `ReggeWheelerSpec`).
    ReggeWheeler { ell: u32, sigma: i32 },
}

/// A two-sided exponentially decaying positive potential.
#[derive(Clone)]
pub struct PotentialSpec {
    pub family: Family,
    /// Tail cutoff: the tail decomposition is certified for |x| >= cutoff.
    pub cutoff: f64,
    pub deriv_order: usize,
    pub symmetric: bool,
    tail_plus: Tail,
    tail_minus: Tail,
    /// hbar carried by mildly hbar-dependent families (sigma term of
    /// Regge-Wheeler); None when the potential is hbar-independent.
    pub hbar: Option<f64>,
}

impl PotentialSpec {
    /// The pure exponential potential V = e^{-|x|}.
    pub fn exponential() -> Self {
        PotentialSpec {
            family: Family::Exponential,
            cutoff: 1.0,
            deriv_order: MAX_DERIV,
            symmetric: true,
            tail_plus: Tail::Series(vec![]),
            tail_minus: Tail::Series(vec![]),
            hbar: None,
        }
    }

    /// The free potential V = 0 (only the direct-integration pipeline
    /// accepts it; it anchors the scattering conventions).
    pub fn free() -> Self {
        PotentialSpec {
            family: Family::Free,
            cutoff: 1.0,
            deriv_order: MAX_DERIV,
            symmetric: true,
            tail_plus: Tail::Series(vec![]),
            tail_minus: Tail::Series(vec![]),
            hbar: None,
        }
    }

    /// V = e^{-|x|}(1 + eps(e^{-|x|})) with the same series tail on both sides.
    pub fn exp_tail(coeffs: Vec<f64>) -> Result<Self> {
        let spec = PotentialSpec {
            family: Family::ExpTail,
            cutoff: 1.0,
            deriv_order: MAX_DERIV,
            symmetric: true,
            tail_plus: Tail::Series(coeffs.clone()),
            tail_minus: Tail::Series(coeffs),
            hbar: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Asymmetric series tails.
    pub fn exp_tail_two_sided(plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        let symmetric = plus == minus;
        let spec = PotentialSpec {
            family: Family::ExpTail,
            cutoff: 1.0,
            deriv_order: MAX_DERIV,
            symmetric,
            tail_plus: Tail::Series(plus),
            tail_minus: Tail::Series(minus),
            hbar: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_free(&self) -> bool {
        self.family == Family::Free
    }

    pub fn tail(&self, side: Side) -> &Tail {
        match side {
            Side::Plus => &self.tail_plus,
            Side::Minus => &self.tail_minus,
        }
    }

    /// The potential with x -> -x (used to compute f_- by reflection).
    pub fn reflected(&self) -> Self {
        let mut s = self.clone();
        std::mem::swap(&mut s.tail_plus, &mut s.tail_minus);
        s
    }

    /// tail_epsilon: d^k/du^k eps(u) on the requested side, u in (0, 1].
    pub fn tail_epsilon(&self, side: Side, u: f64, k: usize) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain(format!(
                "tail_epsilon needs u in (0,1], got {u}"
            )));
        }
        self.tail(side).eps(u, k)
    }

    /// d^k/dx^k V(x). Uses the tail decomposition of the matching side;
    /// the core region of the built-in families is the same analytic formula.
    pub fn eval(&self, x: f64, k: usize) -> Result<f64> {
        if k > self.deriv_order {
            return Err(Error::UnsupportedOrder {
                got: k,
                max: self.deriv_order,
            });
        }
        if self.is_free() {
            return Ok(0.0);
        }
        let side = if x >= 0.0 { Side::Plus } else { Side::Minus };
        let u = (-x.abs()).exp();
        // F(u) = u (1 + eps(u)), V(x) = F(e^{-|x|});
        // with u' = -sgn(x) u, apply the operator (-sgn u d/du)^k via the
        // coefficient recurrence c_j u^j F^{(j)} -> expansion in u^j F^{(j)}.
        let tail = self.tail(side);
        // F^{(j)}(u): F = u + u*eps: F' = 1 + eps + u eps', ...
        // F^{(j)} = j eps^{(j-1)} + u eps^{(j)} for j >= 1 (+ delta_{j,1})
        let f_deriv = |j: usize| -> Result<f64> {
            if j == 0 {
                Ok(u * (1.0 + tail.eps(u, 0)?))
            } else {
                let mut v = j as f64 * tail.eps(u, j - 1)?;
                if j == 1 {
                    v += 1.0;
                }
                v += u * tail.eps(u, j)?;
                Ok(v)
            }
        };
        // (u d/du)^k F = sum_j S(k,j) u^j F^{(j)} with Stirling-like weights,
        // built by the recurrence on coefficient vectors.
        let mut coeff = vec![0.0; k + 1];
        coeff[0] = 1.0; // represents F itself at k = 0
        for _ in 0..k {
            let mut next = vec![0.0; k + 1];
            for (j, &c) in coeff.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                // u d/du [u^j F^{(j)}] = j u^j F^{(j)} + u^{j+1} F^{(j+1)}
                next[j] += c * j as f64;
                if j + 1 <= k {
                    next[j + 1] += c;
                }
            }
            coeff = next;
        }
        let mut val = 0.0;
        for (j, &c) in coeff.iter().enumerate() {
            if c != 0.0 {
                val += c * u.powi(j as i32) * f_deriv(j)?;
            }
        }
        // d/dx = -sgn(x) u d/du: sign (-sgn(x))^k
        let sgn: f64 = if x >= 0.0 { -1.0 } else { 1.0 };
        Ok(sgn.powi(k as i32) * val)
    }

    /// Both turning points V(x) = E^2 (x_{t,-} < 0 < x_{t,+}).
    pub fn turning_points(&self, params: &SemiParams) -> Result<(f64, f64)> {
        let e2 = params.energy * params.energy;
        let plus = self.turning_point_side(Side::Plus, e2)?;
        let minus = if self.symmetric {
            -plus
        } else {
            -self.reflected().turning_point_side(Side::Plus, e2)?
        };
        Ok((minus, plus))
    }

    fn turning_point_side(&self, side: Side, e2: f64) -> Result<f64> {
        // looking for x >= 0 with V(sgn * x) = E^2
        let refl = if side == Side::Minus {
            Some(self.reflected())
        } else {
            None
        };
        let spec = refl.as_ref().unwrap_or(self);
        let v0 = spec.eval(0.0, 0)?;
        if e2 > v0 {
            return Err(Error::NoTurningPoint(format!(
                "E^2 = {e2} exceeds V(0) = {v0}"
            )));
        }
        if e2 == v0 {
            return Ok(0.0);
        }
        // bracket by doubling
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..200 {
            if spec.eval(hi, 0)? < e2 {
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        if spec.eval(hi, 0)? >= e2 {
            return Err(Error::NoTurningPoint(
                "no sign change found on the sampled ray".into(),
            ));
        }
        // safeguarded Newton
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = spec.eval(x, 0)? - e2;
            if f > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = spec.eval(x, 1)?;
            let mut nx = x - f / d;
            if !(nx > lo && nx < hi) {
                nx = 0.5 * (lo + hi);
            }
            if (nx - x).abs() <= 4e-14 * (1.0 + x.abs()) {
                x = nx;
                break;
            }
            x = nx;
        }
        // nondegeneracy: |V'| >= 1e-3 V(x_t) / <x_t>
        let slope = spec.eval(x, 1)?.abs();
        let scale = 1e-3 * e2 / x.abs().max(1.0);
        if slope < scale {
            return Err(Error::DegenerateTurningPoint {
                x,
                slope,
                threshold: scale,
            });
        }
        Ok(x)
    }

    /// Construction-time validation: positivity, tail sanity, cutoff range.
    pub fn validate(&self) -> Result<()> {
        if self.is_free() {
            return Ok(());
        }
        if !(0.5..=10.0).contains(&self.cutoff) {
            return Err(Error::SpecValidation(format!(
                "tail cutoff a = {} outside the supported range [0.5, 10]",
                self.cutoff
            )));
        }
        // positivity and eps > -1 on a 1000-point grid over [-50, 50]
        for i in 0..=1000 {
            let x = -50.0 + 0.1 * i as f64;
            let v = self.eval(x, 0)?;
            if !(v > 0.0) {
                return Err(Error::SpecValidation(format!(
                    "potential not positive at x = {x}: V = {v}"
                )));
            }
        }
        for side in [Side::Plus, Side::Minus] {
            for i in 1..=40 {
                let u = i as f64 / 40.0;
                let e = self.tail(side).eps(u, 0)?;
                if !(e > -1.0) {
                    return Err(Error::SpecValidation(format!(
                        "tail eps({u}) = {e} <= -1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Regge-Wheeler: V_l(x) = (1 - 1/r)(l(l+1)/r^2 + sigma/r^3) with
/// x = r + log(r - 1). After the semiclassical rescaling by
/// hbar^2 = 1/(l(l+1)) and the shift that normalizes the horizon-side tail,
/// the symmetrized two-sided potential is used for scattering.
#[derive(Clone, Copy, Debug)]
pub struct ReggeWheelerSpec {
    pub ell: u32,
    pub sigma: i32,
    /// The physical semiclassical parameter (l(l+1))^{-1/2}.
    pub hbar: f64,
}

impl ReggeWheelerSpec {
    pub fn new(ell: u32, sigma: i32) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Domain("Regge-Wheeler needs ell >= 1".into()));
        }
        if !matches!(sigma, -3 | 0 | 1) {
            return Err(Error::Domain(format!(
                "Regge-Wheeler sigma must be -3, 0 or 1, got {sigma}"
            )));
        }
        let ll = (ell * (ell + 1)) as f64;
        Ok(ReggeWheelerSpec {
            ell,
            sigma,
            hbar: ll.powf(-0.5),
        })
    }

    /// The raw (unshifted, unsymmetrized) rescaled potential
    /// hbar^2 V_l at tortoise coordinate x.
    pub fn potential_raw(&self, x: f64, hbar: f64) -> f64 {
        let r = solve_tortoise_r(x);
        let q = 1.0 / r;
        (1.0 - q) * (q * q + hbar * hbar * self.sigma as f64 * q * q * q)
    }

    /// The symmetric scattering potential with normalized tails:
    /// V(x) = W(1 + log u shift ...) evaluated via r(1 + log u), u = e^{-|x|}.
    pub fn scattering_spec(&self, hbar: f64) -> Result<PotentialSpec> {
        let sigma = self.sigma;
        let c_shift = 1.0 + hbar * hbar * sigma as f64;
        if c_shift <= 0.0 {
            return Err(Error::SpecValidation(
                "Regge-Wheeler sigma term makes the tail negative".into(),
            ));
        }
        let tail = rw_tail(sigma, hbar)?;
        let spec = PotentialSpec {
            family: Family::ReggeWheeler {
                ell: self.ell,
                sigma,
            },
            cutoff: 1.0,
            deriv_order: MAX_DERIV,
            symmetric: true,
            tail_plus: tail.clone(),
            tail_minus: tail,
            hbar: Some(hbar),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Solve x = r + log(r - 1) for r > 1 (safeguarded Newton with a bracket).
pub fn solve_tortoise_r(x: f64) -> f64 {
    1.0 + solve_tortoise_s(x)
}

/// s = r - 1 with full relative accuracy (x = 1 + s + log s).
pub fn solve_tortoise_s(x: f64) -> f64 {
    if x <= 1.5 {
        // Newton in t = log s: g(t) = 1 + e^t + t - x, convex and monotone
        let mut t = x - 1.0;
        for _ in 0..100 {
            let et = t.exp();
            let g = 1.0 + et + t - x;
            let dt = g / (et + 1.0);
            t -= dt;
            if dt.abs() <= 1e-16 * (1.0 + t.abs()) {
                break;
            }
        }
        t.exp()
    } else {
        // Newton in r with a bracket
        let mut lo = 1.0;
        let mut hi = x + 2.0;
        let mut r: f64 = x.max(2.0);
        for _ in 0..200 {
            let f = r + (r - 1.0).ln() - x;
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let d = r / (r - 1.0);
            let mut nr = r - f / d;
            if !(nr > lo && nr < hi) {
                nr = 0.5 * (lo + hi);
            }
            if (nr - r).abs() <= 1e-16 * r {
                return nr - 1.0;
            }
            r = nr;
        }
        r - 1.0
    }
}

/// The Regge-Wheeler tail: eps(u) = h(s)/u - 1 with s = W_0(u) = r(1+log u) - 1
/// and h(s) = s (1+s)^{-3} [1 + hbar^2 sigma / (1+s)] / (1 + hbar^2 sigma).
/// Derivatives in u come from exact polynomial recurrences in 1/r.
fn rw_tail(sigma: i32, hbar: f64) -> Result<Tail> {
    let h2s = hbar * hbar * sigma as f64;
    let norm = 1.0 + h2s;
    // Power series of eps(u) through the Lambert series of s(u): used for
    // small u where 1/r loses the s-information to rounding.
    let n = 16;
    let s_ser: Vec<f64> = {
        // s = W_0(u/norm) = sum (-k)^{k-1}/k! (u/norm)^k
        let mut c = vec![0.0; n];
        let mut fact = 1.0;
        for k in 1..n {
            fact *= k as f64;
            c[k] = (-(k as f64)).powi(k as i32 - 1) / (fact * norm.powi(k as i32));
        }
        c
    };
    let one_plus_s: Vec<f64> = {
        let mut v = s_ser.clone();
        v[0] = 1.0;
        v
    };
    let inv = crate::series::ps_recip(&one_plus_s, n);
    let inv2 = crate::series::ps_mul(&inv, &inv, n);
    let inv3 = crate::series::ps_mul(&inv2, &inv, n);
    // V(u) = s (1+s)^{-3} (1 + h2s (1+s)^{-1}) / norm
    let mut bracket = inv.iter().map(|c| c * h2s).collect::<Vec<_>>();
    bracket[0] += 1.0;
    let v_ser = crate::series::ps_mul(
        &crate::series::ps_mul(&s_ser, &inv3, n),
        &bracket,
        n,
    );
    // eps = V/u - 1: coefficients of u^k are v_ser[k+1] (v_ser[1] should be 1)
    let eps_coeffs: Vec<f64> = (1..n).map(|k| v_ser[k]).collect();
    debug_assert!((eps_coeffs[0] - 1.0).abs() < 1e-12);
    let eps_series: Vec<f64> = eps_coeffs[1..].to_vec();
    let series_tail = Tail::Series(eps_series);
    const U_SWITCH: f64 = 0.05;

    Ok(Tail::Analytic(Arc::new(move |u: f64, k: usize| {
        if u <= U_SWITCH {
            return series_tail.eps(u, k).expect("series tail order");
        }
        // xi-derivatives of V_scaled at xi = shift + log(u):
        // d/dxi maps q^n -> -n (q^{n+1} - q^{n+2}), q = 1/r.
        let shift = 1.0 - norm.ln();
        let xi = shift + u.ln();
        let s = solve_tortoise_s(xi);
        let q = 1.0 / (1.0 + s);
        // polynomial in q: V = (1-q)(q^2 + h2s q^3)
        // coefficients by power: q^2 + (h2s - 1) q^3 - h2s q^4
        let mut poly = vec![0.0; 5 + k + 2];
        poly[2] = 1.0;
        poly[3] = h2s - 1.0;
        poly[4] = -h2s;
        // g_j = d^j/dxi^j V as polynomials in q
        let mut g = Vec::with_capacity(k + 1);
        g.push(poly.clone());
        for _ in 0..k {
            let prev: &Vec<f64> = g.last().unwrap();
            let mut next = vec![0.0; prev.len() + 2];
            for (n, &c) in prev.iter().enumerate() {
                if c != 0.0 {
                    next[n + 1] -= c * n as f64;
                    next[n + 2] += c * n as f64;
                }
            }
            g.push(next);
        }
        let eval_poly = |p: &[f64]| -> f64 {
            let mut s = 0.0;
            for &c in p.iter().rev() {
                s = s * q + c;
            }
            s
        };
        let gv: Vec<f64> = g.iter().map(|p| eval_poly(p)).collect();
        // eps = V(xi(u))/u - 1; derivatives via
        // d^k eps/du^k = u^{-(k+1)} sum_j c_{k,j} g_j  (recurrence below)
        let mut c = vec![0.0; k + 1];
        c[0] = 1.0;
        for m in 0..k {
            // d/du [u^{-(m+1)} sum c_j g_j]
            //  = u^{-(m+2)} sum [c_j g_{j+1} - (m+1) c_j g_j]
            let mut next = vec![0.0; k + 1];
            for (j, &cj) in c.iter().enumerate() {
                if cj != 0.0 {
                    if j + 1 <= k {
                        next[j + 1] += cj;
                    }
                    next[j] -= cj * (m as f64 + 1.0);
                }
            }
            c = next;
        }
        let mut s = 0.0;
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0.0 {
                s += cj * gv[j];
            }
        }
        let val = s * u.powi(-(k as i32 + 1));
        if k == 0 {
            val - 1.0
        } else {
            val
        }
    })))
}

/// Configuration schema for potentials (key-value text config).
#[derive(Debug, Clone, Deserialize)]
pub struct PotentialConfig {
    pub family: String,
    #[serde(default)]
    pub eps_plus: Vec<f64>,
    #[serde(default)]
    pub eps_minus: Vec<f64>,
    #[serde(default)]
    pub ell: Option<u32>,
    #[serde(default)]
    pub sigma: Option<i32>,
    #[serde(default)]
    pub cutoff: Option<f64>,
    #[serde(default)]
    pub deriv_order: Option<usize>,
}

impl PotentialConfig {
    /// Build the spec; `hbar` is needed by hbar-dependent families.
    pub fn build(&self, hbar: f64) -> Result<PotentialSpec> {
        let mut spec = match self.family.as_str() {
            "free" => PotentialSpec::free(),
            "exponential" => PotentialSpec::exponential(),
            "exp_tail" => {
                if self.eps_minus.is_empty() && !self.eps_plus.is_empty() {
                    PotentialSpec::exp_tail(self.eps_plus.clone())?
                } else {
                    PotentialSpec::exp_tail_two_sided(
                        self.eps_plus.clone(),
                        self.eps_minus.clone(),
                    )?
                }
            }
            "regge_wheeler" => {
                let ell = self
                    .ell
                    .ok_or_else(|| Error::Config("regge_wheeler needs ell".into()))?;
                let sigma = self.sigma.unwrap_or(0);
                ReggeWheelerSpec::new(ell, sigma)?.scattering_spec(hbar)?
            }
            other => {
                return Err(Error::Config(format!("unknown potential family '{other}'")));
            }
        };
        if let Some(a) = self.cutoff {
            spec.cutoff = a;
        }
        if let Some(k) = self.deriv_order {
            spec.deriv_order = k.min(MAX_DERIV);
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive_params;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn pure_exponential_values() {
        let p = PotentialSpec::exponential();
        assert_relative_eq!(p.eval(0.0, 0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(p.eval(2.0, 1).unwrap(), -(-2.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(p.eval(-3.0, 0).unwrap(), (-3.0f64).exp(), epsilon = 1e-15);
        // eps identically zero
        assert_eq!(p.tail_epsilon(Side::Plus, 0.5, 0).unwrap(), 0.0);
    }

    #[test]
    fn series_tail_values() {
        // V = e^{-x}(1 + e^{-x}/2): eps(u) = u/2, eps' = 1/2
        let p = PotentialSpec::exp_tail(vec![0.5]).unwrap();
        assert_relative_eq!(p.tail_epsilon(Side::Plus, 0.3, 0).unwrap(), 0.15);
        assert_relative_eq!(p.tail_epsilon(Side::Plus, 0.3, 1).unwrap(), 0.5);
        let x: f64 = 1.7;
        let u = (-x).exp();
        assert_relative_eq!(
            p.eval(x, 0).unwrap(),
            u * (1.0 + 0.5 * u),
            epsilon = 1e-15
        );
        // d/dx [e^{-x} + e^{-2x}/2] = -e^{-x} - e^{-2x}
        assert_relative_eq!(p.eval(x, 1).unwrap(), -u - u * u, epsilon = 1e-14);
        // second derivative: e^{-x} + 2 e^{-2x}
        assert_relative_eq!(p.eval(x, 2).unwrap(), u + 2.0 * u * u, epsilon = 1e-14);
    }

    #[test]
    fn turning_points_pure_exponential() {
        let p = PotentialSpec::exponential();
        let par = derive_params(0.1, 0.1).unwrap();
        let (m, pl) = p.turning_points(&par).unwrap();
        assert_relative_eq!(pl, 4.6051702, epsilon = 1e-7);
        assert_relative_eq!(m, -4.6051702, epsilon = 1e-7);
        let par = derive_params((-1.0f64).exp(), 0.1).unwrap();
        let (_, pl) = p.turning_points(&par).unwrap();
        assert_relative_eq!(pl, 2.0, epsilon = 1e-12);
        let par = derive_params(1.0, 0.1).unwrap();
        let (_, pl) = p.turning_points(&par).unwrap();
        assert_relative_eq!(pl, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn tortoise_solve() {
        assert_relative_eq!(solve_tortoise_r(2.0), 2.0, epsilon = 1e-13);
        // frozen from the bisection oracle: r + log(r-1) = 100
        assert_relative_eq!(solve_tortoise_r(100.0), 95.451909192466764, epsilon = 1e-11);
        // r -> 1+ as x -> -inf
        assert!(solve_tortoise_r(-20.0) - 1.0 < 1e-8);
        assert!(solve_tortoise_r(-20.0) > 1.0);
    }

    #[test]
    fn tortoise_monotone_roundtrip() {
        // below x ~ -35 the difference r - 1 = e^{x-1} falls under the ulp of
        // 1.0, so strict monotonicity of r itself is tested from -30 up
        let mut prev = solve_tortoise_r(-31.0);
        let mut x = -30.0;
        while x <= 60.0 {
            let r = solve_tortoise_r(x);
            assert!(r > prev);
            // roundtrip through s = r - 1 keeps full relative accuracy
            let s = solve_tortoise_s(x);
            assert_relative_eq!(1.0 + s + s.ln(), x, epsilon = 1e-13);
            prev = r;
            x += 0.73;
        }
    }

    #[test]
    fn regge_wheeler_raw_value() {
        // ell=2, sigma=0 at x=2 (r=2): V = (1-1/2) * 6/4 = 0.75, rescaled by
        // hbar^2 = 1/6 gives 0.125
        let rw = ReggeWheelerSpec::new(2, 0).unwrap();
        assert_relative_eq!(rw.hbar, 6f64.powf(-0.5), epsilon = 1e-15);
        assert_relative_eq!(rw.potential_raw(2.0, rw.hbar), 0.125, epsilon = 1e-13);
    }

    #[test]
    fn regge_wheeler_scattering_tail() {
        let rw = ReggeWheelerSpec::new(10, 0).unwrap();
        let spec = rw.scattering_spec(rw.hbar).unwrap();
        // eps(0) = 0 and the leading coefficient matches the exact series of
        // s/(1+s)^3 with s = W_0(u): eps(u) = -4u + O(u^2)
        let e = spec.tail_epsilon(Side::Plus, 1e-7, 0).unwrap();
        assert_relative_eq!(e, -4.0 * 1e-7, max_relative = 1e-4);
        assert_relative_eq!(
            spec.tail_epsilon(Side::Plus, 1e-7, 1).unwrap(),
            -4.0,
            max_relative = 1e-4
        );
        // V(0) = Omega/(1+Omega)^3 with Omega = W_0(1)
        let omega = 0.5671432904097838f64;
        assert_relative_eq!(
            spec.eval(0.0, 0).unwrap(),
            omega / (1.0 + omega).powi(3),
            epsilon = 1e-12
        );
        // derivative consistency against finite differences
        for &x in &[0.7, 2.5, -4.0] {
            let h = 1e-4;
            for k in 0..=2 {
                let fd = (spec.eval(x + h, k).unwrap() - spec.eval(x - h, k).unwrap()) / (2.0 * h);
                assert_relative_eq!(spec.eval(x, k + 1).unwrap(), fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        // cutoff too small
        let mut p = PotentialSpec::exponential();
        p.cutoff = 0.01;
        assert!(matches!(p.validate(), Err(Error::SpecValidation(_))));
        // eps <= -1 kills positivity
        assert!(PotentialSpec::exp_tail(vec![-1.2]).is_err());
        // unsupported derivative order
        let p = PotentialSpec::exponential();
        assert!(matches!(
            p.eval(1.0, MAX_DERIV + 5),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn tail_core_consistency_on_grid() {
        // |V(x) - e^{-x}(1+eps(e^{-x}))| <= 1e-12 for x >= cutoff
        let rw = ReggeWheelerSpec::new(10, 0).unwrap();
        for spec in [
            PotentialSpec::exponential(),
            PotentialSpec::exp_tail(vec![0.5, -0.1]).unwrap(),
            rw.scattering_spec(0.1).unwrap(),
        ] {
            let mut x = spec.cutoff;
            while x <= 50.0 {
                let u = (-x).exp();
                let direct = u * (1.0 + spec.tail_epsilon(Side::Plus, u, 0).unwrap());
                let v = spec.eval(x, 0).unwrap();
                assert!((v - direct).abs() <= 1e-12, "mismatch at {x}");
                x += 0.37;
            }
        }
    }

    proptest! {
        #[test]
        fn tortoise_is_strictly_increasing(x1 in -30.0f64..50.0, dx in 1e-4f64..10.0) {
            let r1 = solve_tortoise_r(x1);
            let r2 = solve_tortoise_r(x1 + dx);
            prop_assert!(r2 > r1);
        }
    }
}
