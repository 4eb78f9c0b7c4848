//! Semiclassical scattering for one-dimensional Schrödinger operators
//! -hbar^2 f'' + V f = E^2 f with positive, exponentially decaying potentials.
//!
//! The crate computes Jost boundary data, transmission/reflection amplitudes
//! and the semiclassical spectral measure along three independent routes: a
//! perturbed-Bessel construction built on a Liouville–Green normal form
//! (converged or leading-order), direct high-order ODE integration from
//! asymptotic data, and, for the pure exponential potential, a closed
//! Bessel-function form. Exponentially large factors are carried as
//! mantissa/exponent pairs throughout, so sweeps deep into the
//! semiclassical regime stay inside double precision.

pub type Complex = num_complex::Complex<f64>;

pub mod error;
pub mod fit;
pub mod jost;
pub mod lg;
pub mod oracle;
pub mod params;
pub mod potential;
pub mod quad;
pub mod scaled;
pub mod scattering;
pub mod series;
pub mod special;
pub mod sweep;
pub mod symbol;
pub mod volterra;
pub mod zeta;

pub use error::{Error, Result};
pub use params::{derive_params, SemiParams};
pub use potential::{PotentialSpec, ReggeWheelerSpec};
pub use scaled::{SReal, Scaled};
