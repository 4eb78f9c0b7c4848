//! Least-squares fits and finite-difference helpers for the property suites.

/// Ordinary least squares y = slope*x + intercept; returns (slope, intercept, r2).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert!(x.len() == y.len() && x.len() >= 2);
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// k-th derivative at x0 of the polynomial through (xs, ys).
///
/// Solves the scaled Vandermonde system; intended for <= 10 points.
pub fn poly_derivative(xs: &[f64], ys: &[f64], x0: f64, k: usize) -> f64 {
    let n = xs.len();
    assert!(n <= 12 && k < n);
    let h: f64 = xs
        .iter()
        .map(|&x| (x - x0).abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    // columns: ((x - x0)/h)^j
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        let t = (xs[i] - x0) / h;
        let mut p = 1.0;
        for j in 0..n {
            a[i][j] = p;
            p *= t;
        }
        a[i][n] = ys[i];
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        let d = a[col][col];
        assert!(d.abs() > 1e-300, "singular FD system");
        for r in 0..n {
            if r != col {
                let f = a[r][col] / d;
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let ck = a[k][n] / a[k][k];
    let mut fact = 1.0;
    for j in 1..=k {
        fact *= j as f64;
    }
    ck * fact / h.powi(k as i32)
}

/// Central finite-difference estimate of f^{(k)}(x) with a (2m+1)-point stencil.
pub fn central_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, k: usize, h: f64, m: usize) -> f64 {
    assert!(2 * m >= k);
    let xs: Vec<f64> = (0..=2 * m).map(|i| x + (i as f64 - m as f64) * h).collect();
    let ys: Vec<f64> = xs.iter().map(|&t| f(t)).collect();
    poly_derivative(&xs, &ys, x, k)
}

/// Median of a slice (not in place).
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&t| 3.0 * t - 2.0).collect();
        let (s, b, r2) = linear_fit(&x, &y);
        assert_relative_eq!(s, 3.0, epsilon = 1e-12);
        assert_relative_eq!(b, -2.0, epsilon = 1e-10);
        assert_relative_eq!(r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn derivatives_of_exp() {
        for k in 0..=4 {
            let d = central_derivative(&|x: f64| x.exp(), 0.3, k, 0.02, 4);
            assert_relative_eq!(d, 0.3f64.exp(), epsilon = 1e-8);
        }
    }
}
