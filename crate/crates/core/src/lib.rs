//! Spectral calculus, Brownian simulation and law-of-the-iterated-logarithm
//! diagnostics on the circle, flat tori and the round 2-sphere.
//!
//! The spectral layer is generic over [`Scalar`] (`f32` or `f64`); the
//! simulator and the harness work in `f64`.

pub mod characterize;
pub mod error;
pub mod green;
pub mod harness;
pub mod manifold;
pub mod quadrature;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Spectrum64 = manifold::Spectrum<f64>;
pub type Spectrum32 = manifold::Spectrum<f32>;
pub type SpectralFunction64 = green::SpectralFunction<f64>;
pub type SpectralFunction32 = green::SpectralFunction<f32>;
pub type Point64 = manifold::Point<f64>;
