//! Channel and hardware models for simultaneously transmitting and
//! reflecting intelligent surfaces (STAR surfaces).
//!
//! The crate is organised in layers:
//!
//! * [`geometry`], [`grid`], [`source`]: positions, element grids, sampled
//!   fields and transmitters.
//! * [`hardware`]: three descriptions of an element (phase shifts, sheet
//!   impedances, surface susceptibilities) reduced to per-element
//!   reflection and transmission coefficients.
//! * [`channel`]: ray tracing, Fresnel-Kirchhoff, Rayleigh-Sommerfeld,
//!   angular-spectrum and equivalent-circuit channel models.
//! * [`analysis`]: field regions, radiation patterns, beam steering checks
//!   and cross-model comparison.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! crate-root aliases fix it to `f64`.

pub mod analysis;
pub mod channel;
mod error;
pub mod geometry;
pub mod grid;
pub mod hardware;
pub mod numeric;
mod scalar;
pub mod source;

pub use error::{Error, ErrorClass, Result};
pub use num_complex::Complex64;
pub use scalar::{amplitude_db, cis, wrap_phase, wrap_signed, Scalar};

pub type Position3D = geometry::Position3D<f64>;
pub type Wavelength = geometry::Wavelength<f64>;
pub type SurfaceGeometry = geometry::SurfaceGeometry<f64>;
pub type FieldGrid = grid::FieldGrid<f64>;
pub type ElementCoefficients = hardware::ElementCoefficients<f64>;
pub type PhaseShiftProfile = hardware::PhaseShiftProfile<f64>;
pub type ImpedanceProfile = hardware::ImpedanceProfile<f64>;
pub type SusceptibilityProfile = hardware::SusceptibilityProfile<f64>;
pub type Source = source::Source<f64>;
pub type ChannelGain = channel::ChannelGain<f64>;
pub type PortNetwork = channel::PortNetwork<f64>;
