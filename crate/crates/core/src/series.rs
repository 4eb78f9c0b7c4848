//! Truncated power-series arithmetic for the local turning-point expansions.

/// c = a * b truncated to length n.
pub fn ps_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            c[i + j] += ai * bj;
        }
    }
    c
}

/// 1/a truncated to length n (a[0] != 0).
pub fn ps_recip(a: &[f64], n: usize) -> Vec<f64> {
    assert!(a[0] != 0.0);
    let mut c = vec![0.0; n];
    c[0] = 1.0 / a[0];
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k.min(a.len() - 1) {
            s += a[j] * c[k - j];
        }
        c[k] = -s / a[0];
    }
    c
}

/// Term-by-term derivative.
pub fn ps_deriv(a: &[f64]) -> Vec<f64> {
    if a.len() <= 1 {
        return vec![0.0];
    }
    (1..a.len()).map(|k| k as f64 * a[k]).collect()
}

/// Evaluate at t (Horner).
pub fn ps_eval(a: &[f64], t: f64) -> f64 {
    let mut s = 0.0;
    for &c in a.iter().rev() {
        s = s * t + c;
    }
    s
}

/// Evaluate the k-th derivative at t.
pub fn ps_eval_deriv(a: &[f64], t: f64, k: usize) -> f64 {
    let mut d = a.to_vec();
    for _ in 0..k {
        d = ps_deriv(&d);
    }
    ps_eval(&d, t)
}

/// Solve (u')^2 * D(u) = Q order by order around t = 0.
///
/// `q` is the series of Q (q[0] = 0, q[1] != 0), `u0` the value u(0) and
/// `d_of` maps the u-series to the series of D(u(t)); D must vanish at u0
/// with nonzero slope `d1` there. Returns the series of u.
pub fn solve_lg_series<F: Fn(&[f64]) -> Vec<f64>>(
    q: &[f64],
    u0: f64,
    d1: f64,
    d_of: F,
    n: usize,
) -> Vec<f64> {
    assert!(q.len() >= n && q[0].abs() < 1e-13 && q[1] != 0.0);
    let mut u = vec![0.0; n];
    u[0] = u0;
    u[1] = (q[1] / d1).cbrt();
    let coeff = |u: &[f64], k: usize| -> f64 {
        // delta^k coefficient of (u')^2 D(u) - Q
        let du = ps_deriv(u);
        let du2 = ps_mul(&du, &du, n);
        let d = d_of(u);
        let f = ps_mul(&du2, &d, n);
        f[k] - q[k]
    };
    for k in 2..n {
        // The residual coefficient is affine in u[k]; solve by two evaluations.
        let mut ua = u.clone();
        ua[k] = 0.0;
        let c0 = coeff(&ua, k);
        ua[k] = 1.0;
        let c1 = coeff(&ua, k);
        let slope = c1 - c0;
        assert!(slope.abs() > 1e-14, "singular series solve at order {k}");
        u[k] = -c0 / slope;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recip_of_geometric() {
        // 1/(1 - t) = 1 + t + t^2 + ...
        let a = {
            let mut v = vec![0.0; 8];
            v[0] = 1.0;
            v[1] = -1.0;
            v
        };
        let r = ps_recip(&a, 8);
        for c in &r {
            assert_relative_eq!(*c, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn lg_series_for_exact_model() {
        // (u')^2 (1 - 1/u^2) = 1 - 1/(1+t)^2 has the solution u = 1 + t.
        let n = 10;
        let mut q = vec![0.0; n];
        // 1 - (1+t)^{-2} = 2t - 3t^2 + 4t^3 - ...
        for k in 1..n {
            q[k] = (k as f64 + 1.0) * if k % 2 == 1 { 1.0 } else { -1.0 };
        }
        let d_of = |u: &[f64]| {
            let u2 = ps_mul(u, u, n);
            let inv = ps_recip(&u2, n);
            let mut d = vec![0.0; n];
            for k in 0..n {
                d[k] = if k == 0 { 1.0 - inv[0] } else { -inv[k] };
            }
            d
        };
        let u = solve_lg_series(&q, 1.0, 2.0, d_of, n);
        assert_relative_eq!(u[1], 1.0, epsilon = 1e-12);
        for k in 2..n {
            assert!(u[k].abs() < 1e-10, "u[{k}] = {}", u[k]);
        }
    }
}
