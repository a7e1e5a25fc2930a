//! Hardware models of the surface.
//!
//! Three abstractions of increasing fidelity, all reducing to per-element
//! complex reflection and transmission coefficients:
//!
//! * [`PhaseShiftProfile`]: amplitude and phase applied to each ray.
//! * [`ImpedanceProfile`]: surface-averaged electric sheet admittance and
//!   magnetic sheet impedance per element.
//! * [`SusceptibilityProfile`]: continuous electric and magnetic surface
//!   susceptibilities, averaged over each element footprint.
//!
//! [`CoefficientTable`] restricts the reachable `(r, t)` pairs for
//! implementations that cannot tune reflection and transmission
//! independently.

mod coefficients;
mod coupled;
mod gstc;
mod impedance;
mod phase_shift;

pub use coefficients::ElementCoefficients;
pub use coupled::{CoefficientTable, ControlMode};
pub use gstc::{
    coefficients_from_gstc, impedance_from_susceptibility, surface_average_susceptibility,
    SurfaceAverages, SusceptibilityProfile, MIN_SAMPLES_PER_ELEMENT,
};
pub use impedance::{
    coefficients_from_impedance, sheet_coefficients, ImpedanceProfile, FREE_SPACE_IMPEDANCE,
};
pub use phase_shift::{
    coefficients_from_phase_shift, linear_phase_gradient_profile, phase_profile_from_coefficients,
    PhaseShiftProfile,
};
