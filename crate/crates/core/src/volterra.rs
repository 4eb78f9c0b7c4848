//! Successive-approximation solver for Volterra equations
//! `phi(x) = tail + ∫ K(x,y) [1 + phi(y)] dy` whose kernels are built from a
//! nonvanishing homogeneous solution `h`:
//!
//! `K(x,y) = [∫_x^y h(u)^{-2} w(u) du] h(y)^2 b(y)`.
//!
//! The base point sits at either end of the mesh (a finite base or a
//! truncated point at infinity with an analytic tail constant). All
//! exponentially large factors are carried in mantissa/exponent form and the
//! exponents cancel inside each kernel evaluation.

use crate::error::{Error, Result};
use crate::quad::{self, gauss};
use crate::scaled::Scaled;
use crate::special::airy::airy_scaled;
use crate::Complex;

/// The homogeneous solution defining the kernel.
pub enum Homog<'a> {
    /// h(u) = exp(omega * u); oscillatory for purely imaginary omega.
    Exp { omega: Complex },
    /// h(u) = Ai(scale * u)  (decaying kernel).
    AiryAi { scale: f64 },
    /// h(u) = Bi(scale * u)  (growing kernel).
    AiryBi { scale: f64 },
    /// h(u) = Ai(scale*u) + i*sign*Bi(scale*u)  (oscillatory kernel, u <= 0).
    AiryAiBi { scale: f64, sign: f64 },
    /// Caller-supplied h(u)^2 in scaled form.
    Custom(Box<dyn Fn(f64) -> Scaled + Sync + 'a>),
}

impl Homog<'_> {
    /// h(u)^2 in scaled form.
    pub fn h_sq(&self, u: f64) -> Scaled {
        match self {
            Homog::Exp { omega } => {
                let z = 2.0 * omega * u;
                Scaled::new(Complex::new(0.0, z.im).exp(), z.re)
            }
            Homog::AiryAi { scale } => {
                let a = airy_scaled(scale * u).ai;
                (a * a).to_scaled()
            }
            Homog::AiryBi { scale } => {
                let b = airy_scaled(scale * u).bi;
                (b * b).to_scaled()
            }
            Homog::AiryAiBi { scale, sign } => {
                let v = airy_scaled(scale * u);
                // combine on a common exponent
                let e = v.ai.e.max(v.bi.e);
                let m = Complex::new(
                    v.ai.m * (v.ai.e - e).exp(),
                    sign * v.bi.m * (v.bi.e - e).exp(),
                );
                let h = Scaled::new(m, e);
                h * h
            }
            Homog::Custom(f) => f(u),
        }
    }

    /// Rough local oscillation rate of h^2, used for mesh refinement.
    fn phase_rate(&self, u: f64) -> f64 {
        match self {
            Homog::Exp { omega } => 2.0 * omega.im.abs(),
            Homog::AiryAiBi { scale, .. } => 2.0 * scale.abs().powf(1.5) * u.abs().sqrt(),
            _ => 0.0,
        }
    }
}

/// Where the integration starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasePoint {
    /// Base at mesh[0] (finite base point, integrate upward).
    Start,
    /// Base at the last mesh node (truncation of a base at infinity,
    /// or a finite base on the right); integrate downward.
    End,
}

pub struct VolterraProblem<'a> {
    pub homog: Homog<'a>,
    /// b(y): the perturbation coefficient on the right-hand side.
    pub coeff: Box<dyn Fn(f64) -> Complex + Sync + 'a>,
    /// w(u): optional factor inside the inner integral (defaults to 1).
    pub weight: Option<Box<dyn Fn(f64) -> Complex + Sync + 'a>>,
    /// Ascending panel boundaries.
    pub mesh: Vec<f64>,
    pub base: BasePoint,
    /// Analytic value and x-derivative of the neglected tail beyond the
    /// base-side truncation (constant for nonoscillatory kernels).
    pub tail: Box<dyn Fn(f64) -> (Complex, Complex) + Sync + 'a>,
    pub tol: f64,
    pub max_iter: usize,
    pub rule_n: usize,
    pub initial: Complex,
}

impl<'a> VolterraProblem<'a> {
    pub fn new(
        homog: Homog<'a>,
        coeff: Box<dyn Fn(f64) -> Complex + Sync + 'a>,
        mesh: Vec<f64>,
        base: BasePoint,
    ) -> Self {
        VolterraProblem {
            homog,
            coeff,
            weight: None,
            mesh,
            base,
            tail: Box::new(|_| (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))),
            tol: 1e-12,
            max_iter: 200,
            rule_n: 16,
            initial: Complex::new(0.0, 0.0),
        }
    }
}

pub struct VolterraSolution {
    /// Fine node abscissae (panel boundaries plus Gauss points).
    pub nodes: Vec<f64>,
    pub phi: Vec<Complex>,
    pub dphi: Vec<Complex>,
    pub iterations: usize,
    /// sup |phi - RHS(phi)| measured with one extra application.
    pub residual: f64,
    pub sup_phi: f64,
    /// Numerical estimate of ∫ sup_x |K(x,y)| dy.
    pub kernel_l1: f64,
}

impl VolterraSolution {
    pub fn eval(&self, x: f64) -> Complex {
        let re: Vec<f64> = self.phi.iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.phi.iter().map(|z| z.im).collect();
        let dre: Vec<f64> = self.dphi.iter().map(|z| z.re).collect();
        let dim: Vec<f64> = self.dphi.iter().map(|z| z.im).collect();
        Complex::new(
            quad::hermite_eval(&self.nodes, &re, &dre, x),
            quad::hermite_eval(&self.nodes, &im, &dim, x),
        )
    }

    pub fn eval_deriv(&self, x: f64) -> Complex {
        let re: Vec<f64> = self.phi.iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.phi.iter().map(|z| z.im).collect();
        let dre: Vec<f64> = self.dphi.iter().map(|z| z.re).collect();
        let dim: Vec<f64> = self.dphi.iter().map(|z| z.im).collect();
        Complex::new(
            quad::hermite_eval_deriv(&self.nodes, &re, &dre, x),
            quad::hermite_eval_deriv(&self.nodes, &im, &dim, x),
        )
    }

    /// Value at the non-base end of the domain.
    pub fn at_far_end(&self, base: BasePoint) -> Complex {
        match base {
            BasePoint::Start => *self.phi.last().unwrap(),
            BasePoint::End => self.phi[0],
        }
    }
}

struct Discretization {
    /// Panel boundaries, ascending (possibly refined).
    bounds: Vec<f64>,
    /// All fine nodes, ascending.
    nodes: Vec<f64>,
    /// For each panel: index of its left boundary node in `nodes`.
    panel_start: Vec<usize>,
    n: usize,
}

fn refine_mesh(p: &VolterraProblem<'_>) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.mesh.len());
    for i in 0..p.mesh.len() - 1 {
        let (a, b) = (p.mesh[i], p.mesh[i + 1]);
        out.push(a);
        // Split panels across which h^2 swings too many e-folds or radians.
        let ea = p.homog.h_sq(a).e;
        let eb = p.homog.h_sq(b).e;
        let rate = p.homog.phase_rate(a).max(p.homog.phase_rate(b));
        let swing = (eb - ea).abs().max(rate * (b - a));
        let parts = ((swing / 1.2).ceil() as usize).clamp(1, 4096);
        for k in 1..parts {
            out.push(a + (b - a) * k as f64 / parts as f64);
        }
    }
    out.push(*p.mesh.last().unwrap());
    out
}

fn discretize(p: &VolterraProblem<'_>) -> Discretization {
    let bounds = refine_mesh(p);
    let rule = gauss(p.rule_n);
    let mut nodes = Vec::new();
    let mut panel_start = Vec::new();
    for i in 0..bounds.len() - 1 {
        panel_start.push(nodes.len());
        nodes.push(bounds[i]);
        let half = 0.5 * (bounds[i + 1] - bounds[i]);
        let mid = 0.5 * (bounds[i + 1] + bounds[i]);
        for &t in &rule.nodes {
            nodes.push(mid + half * t);
        }
    }
    nodes.push(*bounds.last().unwrap());
    Discretization {
        bounds,
        nodes,
        panel_start,
        n: p.rule_n,
    }
}

/// One application of the integral operator: given phi values at the fine
/// nodes, return RHS(phi) and its derivative at the fine nodes.
fn apply(
    p: &VolterraProblem<'_>,
    d: &Discretization,
    h2: &[Scaled],
    h2inv: &[Scaled],
    bv: &[Complex],
    wv: &[Complex],
    tv: &[(Complex, Complex)],
    phi: &[Complex],
    linear_source: bool,
) -> (Vec<Complex>, Vec<Complex>) {
    let rule = gauss(d.n);
    let npanel = d.bounds.len() - 1;
    let nn = d.nodes.len();
    let mut p_cum = vec![Scaled::ZERO; nn]; // P at fine nodes
    let one = Complex::new(1.0, 0.0);

    // First sweep: P(t) = ∫_base^t h^2 b (1 + phi)  (oriented away from base).
    let g_at = |k: usize, phi: &[Complex]| -> Scaled {
        let f = if linear_source { bv[k] } else { bv[k] * (one + phi[k]) };
        h2[k].mul_complex(f)
    };
    match p.base {
        BasePoint::Start => {
            let mut acc = Scaled::ZERO;
            for j in 0..npanel {
                let s = d.panel_start[j];
                let half = 0.5 * (d.bounds[j + 1] - d.bounds[j]);
                p_cum[s] = acc;
                // values at Gauss points
                let gv: Vec<Scaled> = (0..d.n).map(|l| g_at(s + 1 + l, phi)).collect();
                let emax = gv
                    .iter()
                    .map(|v| if v.is_zero() { f64::NEG_INFINITY } else { v.e })
                    .fold(f64::NEG_INFINITY, f64::max);
                if emax == f64::NEG_INFINITY {
                    for l in 0..d.n {
                        p_cum[s + 1 + l] = acc;
                    }
                    continue;
                }
                let mv: Vec<Complex> = gv
                    .iter()
                    .map(|v| if v.is_zero() { Complex::new(0.0, 0.0) } else { v.m * (v.e - emax).exp() })
                    .collect();
                for l in 0..d.n {
                    let mut s_part = Complex::new(0.0, 0.0);
                    for (jj, m) in mv.iter().enumerate() {
                        s_part += rule.partial[l][jj] * m;
                    }
                    p_cum[s + 1 + l] = acc + Scaled::new(s_part * half, emax);
                }
                let mut s_full = Complex::new(0.0, 0.0);
                for (jj, m) in mv.iter().enumerate() {
                    s_full += rule.weights[jj] * m;
                }
                acc = acc + Scaled::new(s_full * half, emax);
            }
            p_cum[nn - 1] = acc;
        }
        BasePoint::End => {
            let mut acc = Scaled::ZERO;
            p_cum[nn - 1] = acc;
            for j in (0..npanel).rev() {
                let s = d.panel_start[j];
                let half = 0.5 * (d.bounds[j + 1] - d.bounds[j]);
                let gv: Vec<Scaled> = (0..d.n).map(|l| g_at(s + 1 + l, phi)).collect();
                let emax = gv
                    .iter()
                    .map(|v| if v.is_zero() { f64::NEG_INFINITY } else { v.e })
                    .fold(f64::NEG_INFINITY, f64::max);
                if emax == f64::NEG_INFINITY {
                    for l in 0..d.n {
                        p_cum[s + 1 + l] = acc;
                    }
                    p_cum[s] = acc;
                    acc = p_cum[s];
                    continue;
                }
                let mv: Vec<Complex> = gv
                    .iter()
                    .map(|v| if v.is_zero() { Complex::new(0.0, 0.0) } else { v.m * (v.e - emax).exp() })
                    .collect();
                let mut s_full = Complex::new(0.0, 0.0);
                for (jj, m) in mv.iter().enumerate() {
                    s_full += rule.weights[jj] * m;
                }
                for l in 0..d.n {
                    // ∫_{t_l}^{right boundary} = full - ∫_{-1}^{x_l}
                    let mut s_part = Complex::new(0.0, 0.0);
                    for (jj, m) in mv.iter().enumerate() {
                        s_part += (rule.weights[jj] - rule.partial[l][jj]) * m;
                    }
                    p_cum[s + 1 + l] = acc + Scaled::new(s_part * half, emax);
                }
                p_cum[s] = acc + Scaled::new(s_full * half, emax);
                acc = p_cum[s];
            }
        }
    }

    // Second sweep: phi(t) = tail + ∫_base^t h^{-2} w P  and its derivative.
    let mut out = vec![Complex::new(0.0, 0.0); nn];
    let mut dout = vec![Complex::new(0.0, 0.0); nn];
    let q_at = |k: usize| -> Scaled { (h2inv[k] * p_cum[k]).mul_complex(wv[k]) };
    for k in 0..nn {
        let q = q_at(k);
        let (_, dtail) = tv[k];
        dout[k] = dtail
            + match p.base {
                BasePoint::Start => q.to_complex(),
                BasePoint::End => -q.to_complex(),
            };
    }
    match p.base {
        BasePoint::Start => {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 0..npanel {
                let s = d.panel_start[j];
                let half = 0.5 * (d.bounds[j + 1] - d.bounds[j]);
                out[s] = tv[s].0 + acc;
                let qv: Vec<Complex> = (0..d.n).map(|l| q_at(s + 1 + l).to_complex()).collect();
                for l in 0..d.n {
                    let mut s_part = Complex::new(0.0, 0.0);
                    for (jj, m) in qv.iter().enumerate() {
                        s_part += rule.partial[l][jj] * m;
                    }
                    out[s + 1 + l] = tv[s + 1 + l].0 + acc + s_part * half;
                }
                let mut s_full = Complex::new(0.0, 0.0);
                for (jj, m) in qv.iter().enumerate() {
                    s_full += rule.weights[jj] * m;
                }
                acc += s_full * half;
            }
            out[nn - 1] = tv[nn - 1].0 + acc;
        }
        BasePoint::End => {
            let mut acc = Complex::new(0.0, 0.0);
            out[nn - 1] = tv[nn - 1].0;
            for j in (0..npanel).rev() {
                let s = d.panel_start[j];
                let half = 0.5 * (d.bounds[j + 1] - d.bounds[j]);
                let qv: Vec<Complex> = (0..d.n).map(|l| q_at(s + 1 + l).to_complex()).collect();
                let mut s_full = Complex::new(0.0, 0.0);
                for (jj, m) in qv.iter().enumerate() {
                    s_full += rule.weights[jj] * m;
                }
                for l in 0..d.n {
                    let mut s_part = Complex::new(0.0, 0.0);
                    for (jj, m) in qv.iter().enumerate() {
                        s_part += (rule.weights[jj] - rule.partial[l][jj]) * m;
                    }
                    out[s + 1 + l] = tv[s + 1 + l].0 + acc + s_part * half;
                }
                acc += s_full * half;
                out[s] = tv[s].0 + acc;
            }
        }
    }
    (out, dout)
}

/// Solve by successive approximation phi_0 = initial, phi_{n+1} = RHS(phi_n).
pub fn solve(p: &VolterraProblem<'_>) -> Result<VolterraSolution> {
    let d = discretize(p);
    let nn = d.nodes.len();
    let h2: Vec<Scaled> = d.nodes.iter().map(|&u| p.homog.h_sq(u)).collect();
    let h2inv: Vec<Scaled> = h2.iter().map(|s| s.recip()).collect();
    let bv: Vec<Complex> = d.nodes.iter().map(|&u| (p.coeff)(u)).collect();
    let one = Complex::new(1.0, 0.0);
    let wv: Vec<Complex> = d
        .nodes
        .iter()
        .map(|&u| p.weight.as_ref().map_or(one, |w| w(u)))
        .collect();
    let tv: Vec<(Complex, Complex)> = d.nodes.iter().map(|&u| (p.tail)(u)).collect();

    // Kernel L1 estimate: |K(x,y)| <= |b(y)| * C with C ~ 1 the localized
    // inner-integral bound; use the trapezoid of |b| over the domain.
    let mut l1 = 0.0;
    for k in 0..nn - 1 {
        l1 += 0.5 * (bv[k].norm() + bv[k + 1].norm()) * (d.nodes[k + 1] - d.nodes[k]);
    }

    let mut phi = vec![p.initial; nn];
    let mut prev_change = f64::INFINITY;
    let mut bad_ratio_streak = 0usize;
    let mut iterations = 0usize;
    loop {
        let (next, _d) = apply(p, &d, &h2, &h2inv, &bv, &wv, &tv, &phi, false);
        let change = phi
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let sup: f64 = next.iter().map(|z| z.norm()).fold(0.0, f64::max);
        phi = next;
        iterations += 1;
        let ratio = change / prev_change;
        if change <= p.tol * (1.0 + sup) {
            break;
        }
        if iterations > 1 && ratio >= 1.0 && change > 10.0 * p.tol * (1.0 + sup) {
            bad_ratio_streak += 1;
            if bad_ratio_streak >= 5 {
                return Err(Error::NonContraction { ratio, iterations });
            }
        } else {
            bad_ratio_streak = 0;
        }
        if iterations >= p.max_iter {
            return Err(Error::IterationLimit {
                limit: p.max_iter,
                change,
            });
        }
        prev_change = change;
    }
    // One extra application to report the defect and the derivative.
    let (fin, dfin) = apply(p, &d, &h2, &h2inv, &bv, &wv, &tv, &phi, false);
    let residual = phi
        .iter()
        .zip(fin.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let sup_phi = fin.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(VolterraSolution {
        nodes: d.nodes,
        phi: fin,
        dphi: dfin,
        iterations,
        residual,
        sup_phi,
        kernel_l1: l1,
    })
}

/// Lemma-perturb construction: for a given inhomogeneity f, the function
/// a(x) = ∫_base^x [∫_{x'}^x h^{-2}] h f  so that u = h (1 + a) solves
/// u'' + V u = f. `f_over_h` supplies f/h.
pub fn perturbed_solution<'a>(
    homog: Homog<'a>,
    f_over_h: Box<dyn Fn(f64) -> Complex + Sync + 'a>,
    mesh: Vec<f64>,
    base: BasePoint,
) -> Result<VolterraSolution> {
    let p = VolterraProblem::new(homog, f_over_h, mesh, base);
    let d = discretize(&p);
    let nn = d.nodes.len();
    let h2: Vec<Scaled> = d.nodes.iter().map(|&u| p.homog.h_sq(u)).collect();
    // Nonvanishing check by sampling.
    for (k, s) in h2.iter().enumerate() {
        if s.is_zero() || !s.m.norm().is_finite() {
            return Err(Error::Nonvanishing(format!(
                "homogeneous solution vanishes near x = {}",
                d.nodes[k]
            )));
        }
    }
    let h2inv: Vec<Scaled> = h2.iter().map(|s| s.recip()).collect();
    let bv: Vec<Complex> = d.nodes.iter().map(|&u| (p.coeff)(u)).collect();
    let one = Complex::new(1.0, 0.0);
    let wv: Vec<Complex> = vec![one; nn];
    let tv: Vec<(Complex, Complex)> = vec![(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)); nn];
    let phi0 = vec![Complex::new(0.0, 0.0); nn];
    let (phi, dphi) = apply(&p, &d, &h2, &h2inv, &bv, &wv, &tv, &phi0, true);
    let sup_phi = phi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut l1 = 0.0;
    for k in 0..nn - 1 {
        l1 += 0.5 * (bv[k].norm() + bv[k + 1].norm()) * (d.nodes[k + 1] - d.nodes[k]);
    }
    Ok(VolterraSolution {
        nodes: d.nodes,
        phi,
        dphi,
        iterations: 1,
        residual: 0.0,
        sup_phi,
        kernel_l1: l1,
    })
}

/// Fitted decay/parameter exponents of a solution family (finite differences
/// across lambda, log-log regressions in x and lambda).
pub struct ProbeReport {
    /// (k, fitted slope of log sup_x-window |∂_x^k phi| against log x).
    pub x_slopes: Vec<(usize, f64)>,
    /// (l, fitted slope of log sup |∂_lambda^l phi| against log lambda).
    pub lambda_slopes: Vec<(usize, f64)>,
    /// True when the finite-difference noise floor was hit.
    pub inconclusive: bool,
}

pub fn derivative_scaling_probe<'a, F>(
    family: F,
    lambdas: &[f64],
    k_max: usize,
    l_max: usize,
) -> Result<ProbeReport>
where
    F: Fn(f64) -> VolterraProblem<'a>,
{
    assert!(lambdas.len() >= l_max + 3);
    let sols: Vec<VolterraSolution> = lambdas
        .iter()
        .map(|&l| solve(&family(l)))
        .collect::<Result<_>>()?;
    let nodes = &sols[0].nodes;
    for s in &sols {
        if s.nodes.len() != nodes.len() {
            return Err(Error::Usage(
                "probe family must share a common mesh".into(),
            ));
        }
    }
    let mut inconclusive = false;

    // x-slopes at the middle lambda.
    let mid = lambdas.len() / 2;
    let sol = &sols[mid];
    let mut x_slopes = Vec::new();
    for k in 0..=k_max {
        // window sup of the k-th derivative on dyadic x-windows
        let xs_pos: Vec<f64> = nodes.iter().cloned().filter(|&x| x > 0.0).collect();
        let lo = xs_pos.first().copied().unwrap_or(1.0).max(1e-6);
        let hi = xs_pos.last().copied().unwrap_or(1.0);
        if hi / lo < 4.0 {
            return Err(Error::FitFailure("probe needs at least two x decades".into()));
        }
        let mut log_x = Vec::new();
        let mut log_v = Vec::new();
        let mut w = lo;
        while w * 2.0 <= hi {
            let mut sup: f64 = 0.0;
            for (i, &x) in nodes.iter().enumerate() {
                if x < w || x > 2.0 * w {
                    continue;
                }
                let v = match k {
                    0 => sol.phi[i].norm(),
                    1 => sol.dphi[i].norm(),
                    _ => {
                        // local polynomial derivative on neighbouring nodes
                        let i0 = i.saturating_sub(3).min(nodes.len() - 7);
                        let xs = &nodes[i0..i0 + 7];
                        let re: Vec<f64> = sol.phi[i0..i0 + 7].iter().map(|z| z.re).collect();
                        let im: Vec<f64> = sol.phi[i0..i0 + 7].iter().map(|z| z.im).collect();
                        let dr = crate::fit::poly_derivative(xs, &re, x, k);
                        let di = crate::fit::poly_derivative(xs, &im, x, k);
                        (dr * dr + di * di).sqrt()
                    }
                };
                sup = sup.max(v);
            }
            if sup > 0.0 {
                log_x.push((w * 1.5).ln());
                log_v.push(sup.ln());
            }
            w *= 2.0;
        }
        if log_x.len() < 3 {
            inconclusive = true;
            x_slopes.push((k, f64::NAN));
            continue;
        }
        let (slope, _, _) = crate::fit::linear_fit(&log_x, &log_v);
        x_slopes.push((k, slope));
    }

    // lambda-slopes of sup-norms.
    let mut lambda_slopes = Vec::new();
    for l in 0..=l_max {
        let mut log_l = Vec::new();
        let mut log_v = Vec::new();
        for c in l..lambdas.len().saturating_sub(l) {
            let i0 = c.saturating_sub(l_max.max(1)).min(lambdas.len() - (2 * l_max.max(1) + 1));
            let span = 2 * l_max.max(1) + 1;
            let ls = &lambdas[i0..i0 + span];
            let mut sup: f64 = 0.0;
            for node_i in 0..nodes.len() {
                let re: Vec<f64> = (i0..i0 + span).map(|j| sols[j].phi[node_i].re).collect();
                let im: Vec<f64> = (i0..i0 + span).map(|j| sols[j].phi[node_i].im).collect();
                let dr = crate::fit::poly_derivative(ls, &re, lambdas[c], l);
                let di = crate::fit::poly_derivative(ls, &im, lambdas[c], l);
                sup = sup.max((dr * dr + di * di).sqrt());
            }
            if sup > 1e-300 {
                log_l.push(lambdas[c].ln());
                log_v.push(sup.ln());
            }
        }
        if log_l.len() < 3 {
            inconclusive = true;
            lambda_slopes.push((l, f64::NAN));
            continue;
        }
        let (slope, _, _) = crate::fit::linear_fit(&log_l, &log_v);
        lambda_slopes.push((l, slope));
    }

    Ok(ProbeReport {
        x_slopes,
        lambda_slopes,
        inconclusive,
    })
}
