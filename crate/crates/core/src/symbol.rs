//! Empirical symbol-class checker: fits |f^{(k)}(x)| <= C_k |x|^{alpha - k}
//! by finite differences and log-log regression.

use crate::fit;

#[derive(Clone, Debug)]
pub struct SymbolOrder {
    pub k: usize,
    /// sup over the sample of |f^{(k)}(x)| |x|^{k - alpha}.
    pub constant: f64,
    /// log-log regression slope of |f^{(k)}| against x.
    pub slope: f64,
    /// expected slope alpha - k.
    pub expected: f64,
    pub pass: bool,
    pub inconclusive: bool,
}

#[derive(Clone, Debug)]
pub struct SymbolReport {
    pub alpha: f64,
    pub orders: Vec<SymbolOrder>,
}

impl SymbolReport {
    pub fn all_pass(&self) -> bool {
        self.orders.iter().all(|o| o.pass || o.inconclusive)
    }

    pub fn conclusive_pass(&self) -> bool {
        self.orders.iter().all(|o| o.pass)
    }
}

/// Check f against the symbol class S_alpha on [lo, hi] for orders k <= k_max.
///
/// Derivatives are 6th-order central differences with step
/// h = max(1e-3 |x|, 1e-5); the slope check flags failure when the fitted
/// slope exceeds alpha - k by more than 0.25, and reports `inconclusive`
/// when the finite-difference noise floor swamps the estimate.
pub fn symbol_class_check<F: Fn(f64) -> f64>(
    f: &F,
    alpha: f64,
    lo: f64,
    hi: f64,
    k_max: usize,
) -> SymbolReport {
    assert!(hi > lo && lo > 0.0);
    let n_samples = 24usize;
    let xs: Vec<f64> = (0..n_samples)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n_samples - 1) as f64))
        .collect();
    let mut orders = Vec::new();
    for k in 0..=k_max {
        let mut log_x = Vec::new();
        let mut log_v = Vec::new();
        let mut constant: f64 = 0.0;
        let mut noise_hits = 0usize;
        for &x in &xs {
            let h = (1e-3 * x.abs()).max(1e-5);
            let d = if k == 0 {
                f(x)
            } else {
                fit::central_derivative(f, x, k, h, 3.max(k))
            };
            // noise floor: eps * |f| / h^k
            let floor = 1e-14 * f(x).abs().max(1e-300) / h.powi(k as i32) + 1e-290;
            if d.abs() < 10.0 * floor {
                noise_hits += 1;
                continue;
            }
            constant = constant.max(d.abs() * x.abs().powf(k as f64 - alpha));
            // fit the decay exponent where the power behavior dominates
            // (interior zeros distort the lower decades)
            if x >= (lo * hi).sqrt() * 0.999 {
                log_x.push(x.ln());
                log_v.push(d.abs().ln());
            }
        }
        let expected = alpha - k as f64;
        if log_x.len() < 4 {
            orders.push(SymbolOrder {
                k,
                constant,
                slope: f64::NAN,
                expected,
                pass: false,
                inconclusive: true,
            });
            continue;
        }
        let (slope, _, _) = fit::linear_fit(&log_x, &log_v);
        let pass = slope <= expected + 0.25;
        orders.push(SymbolOrder {
            k,
            constant,
            slope,
            expected,
            pass,
            inconclusive: noise_hits > n_samples / 2,
        });
    }
    SymbolReport { alpha, orders }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        // f = x^{2/3}: slopes 2/3, -1/3, -4/3, -7/3
        let rep = symbol_class_check(&|x: f64| x.powf(2.0 / 3.0), 2.0 / 3.0, 1.0, 100.0, 3);
        for o in &rep.orders {
            assert!(
                (o.slope - o.expected).abs() < 0.05,
                "k={}: slope {} expected {}",
                o.k,
                o.slope,
                o.expected
            );
            assert!(o.pass);
        }
    }

    #[test]
    fn zeta_is_a_symbol() {
        let rep = symbol_class_check(&crate::zeta::zeta, 2.0 / 3.0, 0.5, 100.0, 4);
        assert!(rep.all_pass(), "{:?}", rep.orders);
    }

    #[test]
    fn sine_fails_for_derivatives() {
        // sin(x) on [1,100] with alpha = 0: no decay gain per derivative
        let rep = symbol_class_check(&f64::sin, 0.0, 1.0, 100.0, 2);
        assert!(rep.orders[0].pass);
        assert!(
            rep.orders[1..].iter().any(|o| !o.pass && !o.inconclusive),
            "{:?}",
            rep.orders
        );
    }
}
