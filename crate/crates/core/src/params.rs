//! Coupled semiclassical parameters (E, hbar, alpha, hbar1, nu).

use crate::error::{Error, Result};

/// The parameter bundle: E is the square root of the energy, and
/// alpha^2 = hbar^2/4 + 4 E^2, hbar1 = hbar/alpha, nu = 2E/hbar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiParams {
    pub energy: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub hbar1: f64,
    pub nu: f64,
}

/// Populate the derived fields from (E, hbar).
pub fn derive_params(energy: f64, hbar: f64) -> Result<SemiParams> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::Domain(format!("E must be positive, got {energy}")));
    }
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let alpha = (0.25 * hbar * hbar + 4.0 * energy * energy).sqrt();
    Ok(SemiParams {
        energy,
        hbar,
        alpha,
        hbar1: hbar / alpha,
        nu: 2.0 * energy / hbar,
    })
}

impl SemiParams {
    pub fn new(energy: f64, hbar: f64) -> Result<Self> {
        derive_params(energy, hbar)
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha * self.alpha
    }
}
