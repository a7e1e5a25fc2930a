//! End-to-end channel models.
//!
//! Every wave model returns the received field per unit source amplitude at
//! one receiver. Reflection-side receivers sit at `z < 0`, transmission-side
//! receivers at `z > 0`.
//!
//! | model | input | discretization |
//! |-------|-------|----------------|
//! | [`ray_tracing_gain`] | element coefficients | one ray per element, obliquity at the element center |
//! | [`fresnel_kirchhoff_gain`] | aperture distribution | midpoint quadrature, obliquity per sample |
//! | [`rayleigh_sommerfeld_gain`] | aperture distribution | midpoint quadrature, Dirichlet or Neumann data |
//! | [`angular_spectrum_gain`] | aperture distribution | plane-wave superposition including evanescent modes |
//! | [`equivalent_circuit_power`] | port network | dense linear solve |

mod circuit;
mod diffraction;
mod ray_tracing;
mod spectrum;
mod surface;

pub use circuit::{
    build_port_network, coupling_impedance, equivalent_circuit_power, CircuitSolution, PortNetwork,
};
pub use diffraction::{fresnel_kirchhoff_gain, rayleigh_sommerfeld_gain, ApertureIntegrator, DiffractionKernel, RsBoundary};
pub use ray_tracing::{ray_tracing_gain, RayTracer};
pub use spectrum::{
    angular_spectrum_gain, angular_spectrum_of, angular_spectrum_propagate, plane_wave_kernel, spectrum_at,
    AngularSpectrum, Padding,
};
pub use surface::{apply_surface, illuminated_aperture, quarter_wave_samples};

use num_complex::Complex;

use crate::geometry::{Position3D, Wavelength};
use crate::scalar::amplitude_db;
use crate::{Error, Result, Scalar};

/// Half-space served by the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `z < 0`, uses the reflection coefficients.
    Reflect,
    /// `z > 0`, uses the transmission coefficients.
    Transmit,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Reflect, Side::Transmit];

    pub fn name(self) -> &'static str {
        match self {
            Side::Reflect => "reflect",
            Side::Transmit => "transmit",
        }
    }

    /// Side a point belongs to; `None` on the surface plane.
    pub fn of<T: Scalar>(p: &Position3D<T>) -> Option<Side> {
        if p.z < T::zero() {
            Some(Side::Reflect)
        } else if p.z > T::zero() {
            Some(Side::Transmit)
        } else {
            None
        }
    }

    /// Unit normal pointing into this half-space.
    pub fn normal_sign<T: Scalar>(self) -> T {
        match self {
            Side::Reflect => -T::one(),
            Side::Transmit => T::one(),
        }
    }

    pub(crate) fn check<T: Scalar>(self, rx: &Position3D<T>) -> Result<()> {
        match Side::of(rx) {
            None => Err(Error::OnSurfacePlane),
            Some(s) if s == self => Ok(()),
            Some(_) => Err(Error::WrongSide { side: self.name(), z: rx.z.to_f64_lossy() }),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reflect" | "reflection" => Ok(Side::Reflect),
            "transmit" | "transmission" => Ok(Side::Transmit),
            other => Err(Error::InvalidArgument(format!("unknown side '{other}'"))),
        }
    }
}

/// Received field per unit source amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGain<T> {
    pub h: Complex<T>,
    /// `20·log10|h|`.
    pub power_gain_db: T,
}

impl<T: Scalar> ChannelGain<T> {
    pub fn from_h(h: Complex<T>) -> Self {
        ChannelGain { h, power_gain_db: amplitude_db(h.norm()) }
    }

    pub fn magnitude(&self) -> T {
        self.h.norm()
    }

    pub fn phase(&self) -> T {
        self.h.arg()
    }
}

fn check_receiver<T: Scalar>(rx: &Position3D<T>) -> Result<()> {
    if !rx.is_finite() {
        return Err(Error::InvalidArgument("receiver position must be finite".into()));
    }
    if rx.z == T::zero() {
        return Err(Error::OnSurfacePlane);
    }
    Ok(())
}

fn check_pitch<T: Scalar>(dx: T, dy: T, wavelength: Wavelength<T>) -> Result<()> {
    let limit = wavelength.meters() / T::lit(2.0);
    let pitch = dx.max(dy);
    if pitch > limit * (T::one() + T::lit(1e-9)) {
        return Err(Error::Aliasing { pitch: pitch.to_f64_lossy(), limit: limit.to_f64_lossy() });
    }
    Ok(())
}
