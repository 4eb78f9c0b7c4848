//! Complex Gamma function (Lanczos approximation).

use crate::Complex;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma(z) for Re z > 0 (reflection applied otherwise).
pub fn gamma_cplx(z: Complex) -> Complex {
    if z.re < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        let s = (pi * z).sin();
        return pi / (s * gamma_cplx(Complex::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    let sqrt2pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt2pi * t.powc(z + 0.5) * (-t).exp() * x
}

/// Gamma(1 + i*nu), the normalization entering the Bessel series.
pub fn gamma_one_plus_i_nu(nu: f64) -> Complex {
    gamma_cplx(Complex::new(1.0, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn real_values() {
        assert_relative_eq!(gamma_one_plus_i_nu(0.0).re, 1.0, epsilon = 1e-13);
        assert_relative_eq!(gamma_cplx(Complex::new(5.0, 0.0)).re, 24.0, epsilon = 1e-12);
        assert_relative_eq!(
            gamma_cplx(Complex::new(0.5, 0.0)).re,
            std::f64::consts::PI.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn modulus_identity() {
        // |Gamma(1 + i nu)|^2 = pi nu / sinh(pi nu)
        for &nu in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let g = gamma_one_plus_i_nu(nu);
            let expect = std::f64::consts::PI * nu / (std::f64::consts::PI * nu).sinh();
            assert_relative_eq!(g.norm_sqr(), expect, epsilon = 1e-12);
        }
        // |Gamma(1+i)|^2 = pi / sinh(pi)
        let g = gamma_one_plus_i_nu(1.0);
        assert_relative_eq!(g.norm_sqr(), 0.2720290550, epsilon = 1e-9);
    }

    #[test]
    fn conjugation_symmetry() {
        for &nu in &[0.3, 1.7, 4.2] {
            let a = gamma_one_plus_i_nu(nu);
            let b = gamma_cplx(Complex::new(1.0, -nu));
            assert_relative_eq!(a.re, b.re, epsilon = 1e-13);
            assert_relative_eq!(a.im, -b.im, epsilon = 1e-13);
        }
    }
}
