//! Special functions: Airy, modified Bessel of imaginary order, complex
//! Gamma, and the explicit small-nu / large-nu Bessel fundamental systems.

pub mod airy;
pub mod bessel;
pub mod gamma;
pub mod systems;

pub use airy::{airy, airy_scaled, AiryScaled, AiryValues};
pub use bessel::{bessel_i_imag, bessel_i_imag_integral, macdonald_k, BesselImagOrder};
pub use gamma::{gamma_cplx, gamma_one_plus_i_nu};
