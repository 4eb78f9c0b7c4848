//! Gauss–Legendre panel quadrature, graded meshes and Hermite interpolation.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// A Gauss–Legendre rule on [-1, 1] together with the partial-integration
/// matrix `partial[k][j] = ∫_{-1}^{x_k} ℓ_j(t) dt` used for cumulative
/// integrals at interior nodes.
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub partial: Vec<Vec<f64>>,
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess, refined by Newton's method.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Barycentric weights for the Lagrange basis on the nodes.
    let mut bary = vec![1.0; n];
    for j in 0..n {
        for i in 0..n {
            if i != j {
                bary[j] *= nodes[j] - nodes[i];
            }
        }
        bary[j] = 1.0 / bary[j];
    }
    // partial[k][j] = ∫_{-1}^{x_k} ℓ_j, by a finer auxiliary rule per subinterval.
    let aux = {
        let m = n + 10;
        let mut an = vec![0.0; m];
        let mut aw = vec![0.0; m];
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_deriv(m, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_and_deriv(m, x);
            an[m - 1 - i] = x;
            aw[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (an, aw)
    };
    let lagrange = |j: usize, t: f64| -> f64 {
        // On aux points t never coincides with a node.
        let mut num = bary[j] / (t - nodes[j]);
        let mut den = 0.0;
        for i in 0..n {
            den += bary[i] / (t - nodes[i]);
        }
        num /= den;
        num
    };
    let mut partial = vec![vec![0.0; n]; n];
    for k in 0..n {
        let a = -1.0;
        let b = nodes[k];
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for j in 0..n {
            let mut s = 0.0;
            for (t, w) in aux.0.iter().zip(aux.1.iter()) {
                s += w * lagrange(j, mid + half * t);
            }
            partial[k][j] = s * half;
        }
    }
    GaussRule {
        nodes,
        weights,
        partial,
    }
}

/// Shared cache of Gauss rules by size.
pub fn gauss(n: usize) -> &'static GaussRule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Box::leak(Box::new(build_rule(n))))
}

/// ∫_a^b f over one panel.
pub fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        s += w * f(mid + half * x);
    }
    s * half
}

/// Composite rule over `panels` equal panels.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize, panels: usize) -> f64 {
    let mut s = 0.0;
    let h = (b - a) / panels as f64;
    for i in 0..panels {
        s += panel(f, a + i as f64 * h, a + (i + 1) as f64 * h, n);
    }
    s
}

/// Adaptive bisection quadrature (used by validation oracles).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m, 15);
        let right = panel(f, m, b, 15);
        if depth > 48 || (left + right - whole).abs() <= tol {
            left + right
        } else {
            rec(f, a, m, left, 0.5 * tol, depth + 1) + rec(f, m, b, right, 0.5 * tol, depth + 1)
        }
    }
    let whole = panel(f, a, b, 15);
    rec(f, a, b, whole, tol, 0)
}

/// Graded mesh from `lo` to `hi`: local panel width given by `width(x)`.
pub fn graded_mesh<W: Fn(f64) -> f64>(lo: f64, hi: f64, width: W) -> Vec<f64> {
    assert!(hi > lo);
    let mut xs = vec![lo];
    let mut x = lo;
    while x < hi {
        let w = width(x).max(1e-12 * (hi - lo));
        x = (x + w).min(hi);
        xs.push(x);
        if xs.len() > 4_000_000 {
            panic!("graded_mesh: too many panels");
        }
    }
    // Merge a trailing sliver into the previous panel.
    let n = xs.len();
    if n >= 3 && xs[n - 1] - xs[n - 2] < 0.2 * (xs[n - 2] - xs[n - 3]) {
        xs.remove(n - 2);
    }
    xs
}

/// Log-spaced mesh (lo > 0).
pub fn log_mesh(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo);
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

/// Locate `x` in a sorted node list: returns an index `i` with nodes[i] <= x <= nodes[i+1].
pub fn bracket(nodes: &[f64], x: f64) -> usize {
    let n = nodes.len();
    if x <= nodes[0] {
        return 0;
    }
    if x >= nodes[n - 1] {
        return n - 2;
    }
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (hi + lo) / 2;
        if nodes[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Cubic Hermite interpolation on tabulated values with derivatives.
pub fn hermite_eval(xs: &[f64], ys: &[f64], dys: &[f64], x: f64) -> f64 {
    let i = bracket(xs, x);
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * ys[i] + h10 * h * dys[i] + h01 * ys[i + 1] + h11 * h * dys[i + 1]
}

/// Tabulated complex function with derivative data (cubic Hermite between nodes).
pub struct HermiteC {
    pub xs: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    dre: Vec<f64>,
    dim: Vec<f64>,
}

impl HermiteC {
    pub fn new(xs: Vec<f64>, vals: &[crate::Complex], dvals: &[crate::Complex]) -> Self {
        HermiteC {
            xs,
            re: vals.iter().map(|z| z.re).collect(),
            im: vals.iter().map(|z| z.im).collect(),
            dre: dvals.iter().map(|z| z.re).collect(),
            dim: dvals.iter().map(|z| z.im).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> crate::Complex {
        crate::Complex::new(
            hermite_eval(&self.xs, &self.re, &self.dre, x),
            hermite_eval(&self.xs, &self.im, &self.dim, x),
        )
    }

    pub fn eval_deriv(&self, x: f64) -> crate::Complex {
        crate::Complex::new(
            hermite_eval_deriv(&self.xs, &self.re, &self.dre, x),
            hermite_eval_deriv(&self.xs, &self.im, &self.dim, x),
        )
    }
}

/// Cumulative scaled integral of `f` along the (dense) node list: returns
/// J(node_i) = ∫_{nodes[0]}^{nodes[i]} f, with exponentially large integrands
/// handled through mantissa/exponent pairs.
pub fn cumulative_fine(
    nodes: &[f64],
    f: &dyn Fn(f64) -> crate::scaled::Scaled,
    rule_n: usize,
) -> Vec<crate::scaled::Scaled> {
    use crate::scaled::Scaled;
    let rule = gauss(rule_n);
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = Scaled::ZERO;
    out.push(acc);
    for i in 0..nodes.len() - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let vals: Vec<Scaled> = rule.nodes.iter().map(|&t| f(mid + half * t)).collect();
        let emax = vals
            .iter()
            .map(|v| if v.is_zero() { f64::NEG_INFINITY } else { v.e })
            .fold(f64::NEG_INFINITY, f64::max);
        if emax > f64::NEG_INFINITY {
            let mut s = crate::Complex::new(0.0, 0.0);
            for (v, w) in vals.iter().zip(rule.weights.iter()) {
                if !v.is_zero() {
                    s += w * v.m * (v.e - emax).exp();
                }
            }
            acc = acc + Scaled::new(s * half, emax);
        }
        out.push(acc);
    }
    out
}

/// Right-anchored cumulative: J(node_i) = ∫_{nodes[i]}^{nodes.last()} f.
pub fn cumulative_fine_from_end(
    nodes: &[f64],
    f: &dyn Fn(f64) -> crate::scaled::Scaled,
    rule_n: usize,
) -> Vec<crate::scaled::Scaled> {
    use crate::scaled::Scaled;
    let rule = gauss(rule_n);
    let n = nodes.len();
    let mut out = vec![Scaled::ZERO; n];
    let mut acc = Scaled::ZERO;
    for i in (0..n - 1).rev() {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let vals: Vec<Scaled> = rule.nodes.iter().map(|&t| f(mid + half * t)).collect();
        let emax = vals
            .iter()
            .map(|v| if v.is_zero() { f64::NEG_INFINITY } else { v.e })
            .fold(f64::NEG_INFINITY, f64::max);
        if emax > f64::NEG_INFINITY {
            let mut s = crate::Complex::new(0.0, 0.0);
            for (v, w) in vals.iter().zip(rule.weights.iter()) {
                if !v.is_zero() {
                    s += w * v.m * (v.e - emax).exp();
                }
            }
            acc = acc + Scaled::new(s * half, emax);
        }
        out[i] = acc;
    }
    out
}

/// Derivative of the cubic Hermite interpolant.
pub fn hermite_eval_deriv(xs: &[f64], ys: &[f64], dys: &[f64], x: f64) -> f64 {
    let i = bracket(xs, x);
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let d00 = (6.0 * t2 - 6.0 * t) / h;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = (-6.0 * t2 + 6.0 * t) / h;
    let d11 = 3.0 * t2 - 2.0 * t;
    d00 * ys[i] + d10 * dys[i] + d01 * ys[i + 1] + d11 * dys[i + 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        let r = gauss(8);
        // degree 15 polynomial
        let mut s = 0.0;
        for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
            s += w * x.powi(14);
        }
        assert_relative_eq!(s, 2.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_matrix_matches_cumulative() {
        let r = gauss(12);
        // f(t) = exp(t); cumulative at node k should be e^{x_k} - e^{-1}
        let f: Vec<f64> = r.nodes.iter().map(|x| x.exp()).collect();
        for k in 0..12 {
            let mut s = 0.0;
            for j in 0..12 {
                s += r.partial[k][j] * f[j];
            }
            assert_relative_eq!(s, r.nodes[k].exp() - (-1.0f64).exp(), epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = adaptive(&|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-13);
        assert_relative_eq!(v, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let f = |x: f64| 1.0 + x + 0.5 * x * x - 0.25 * x * x * x;
        let df = |x: f64| 1.0 + x - 0.75 * x * x;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let dys: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        for i in 0..50 {
            let x = 0.06 * i as f64;
            assert_relative_eq!(hermite_eval(&xs, &ys, &dys, x), f(x), epsilon = 1e-13);
            assert_relative_eq!(hermite_eval_deriv(&xs, &ys, &dys, x), df(x), epsilon = 1e-12);
        }
    }
}
