//! Transmitters illuminating the surface from the reflection side.
//!
//! Time dependence is `e^{+jωt}`: outgoing waves carry `e^{-jkr}`.

use num_complex::Complex;

use crate::geometry::{Position3D, SurfaceGeometry, Wavelength};
use crate::grid::FieldGrid;
use crate::scalar::cis;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSource<T> {
    pub amplitude: Complex<T>,
    /// Unit propagation direction, pointing toward the surface (`z > 0`).
    pub direction: Position3D<T>,
    pub wavelength: Wavelength<T>,
}

impl<T: Scalar> PlaneWaveSource<T> {
    pub fn new(amplitude: Complex<T>, direction: Position3D<T>, wavelength: Wavelength<T>) -> Result<Self> {
        let n = direction.norm();
        if !direction.is_finite() || (n - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(4.0)) {
            return Err(Error::InvalidArgument(format!(
                "plane-wave direction must be a unit vector, |d| = {n}"
            )));
        }
        if !(direction.z > T::zero()) {
            return Err(Error::SourceSide { z: -direction.z.to_f64_lossy() });
        }
        Ok(PlaneWaveSource { amplitude, direction, wavelength })
    }

    /// Plane wave arriving at polar angle `theta` (from the surface normal)
    /// and azimuth `phi`; `theta = 0` is broadside.
    pub fn from_angles(amplitude: Complex<T>, theta: T, phi: T, wavelength: Wavelength<T>) -> Result<Self> {
        if !(theta.abs() < T::FRAC_PI_2()) {
            return Err(Error::InvalidArgument(format!(
                "incidence angle must be below 90°, got {theta} rad"
            )));
        }
        Self::new(amplitude, Position3D::from_spherical(theta, phi), wavelength)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource<T> {
    pub position: Position3D<T>,
    pub amplitude: Complex<T>,
    pub wavelength: Wavelength<T>,
}

impl<T: Scalar> PointSource<T> {
    pub fn new(position: Position3D<T>, amplitude: Complex<T>, wavelength: Wavelength<T>) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::InvalidArgument("source position must be finite".into()));
        }
        if !(position.z < T::zero()) {
            return Err(Error::SourceSide { z: position.z.to_f64_lossy() });
        }
        Ok(PointSource { position, amplitude, wavelength })
    }
}

/// Either kind of transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source<T> {
    PlaneWave(PlaneWaveSource<T>),
    Point(PointSource<T>),
}

impl<T: Scalar> From<PlaneWaveSource<T>> for Source<T> {
    fn from(s: PlaneWaveSource<T>) -> Self {
        Source::PlaneWave(s)
    }
}

impl<T: Scalar> From<PointSource<T>> for Source<T> {
    fn from(s: PointSource<T>) -> Self {
        Source::Point(s)
    }
}

impl<T: Scalar> Source<T> {
    pub fn wavelength(&self) -> Wavelength<T> {
        match self {
            Source::PlaneWave(s) => s.wavelength,
            Source::Point(s) => s.wavelength,
        }
    }

    pub fn amplitude(&self) -> Complex<T> {
        match self {
            Source::PlaneWave(s) => s.amplitude,
            Source::Point(s) => s.amplitude,
        }
    }

    /// Field per unit amplitude at `p`: `e^{-jk d·p}` for a plane wave,
    /// `e^{-jk|p-s|}/|p-s|` for a point source.
    pub fn unit_field_at(&self, p: &Position3D<T>) -> Complex<T> {
        let k = self.wavelength().k();
        match self {
            Source::PlaneWave(s) => cis(-k * s.direction.dot(p)),
            Source::Point(s) => {
                let d = s.position.distance(p);
                cis(-k * d) / d
            }
        }
    }

    pub fn field_at(&self, p: &Position3D<T>) -> Complex<T> {
        self.amplitude() * self.unit_field_at(p)
    }

    /// Cosine of the angle between the incident ray at `p` and the surface
    /// normal.
    pub fn cos_incidence(&self, p: &Position3D<T>) -> T {
        match self {
            Source::PlaneWave(s) => s.direction.z,
            Source::Point(s) => (p.z - s.position.z).abs() / s.position.distance(p),
        }
    }
}

/// Samples the source field on every point of `grid`.
pub fn incident_field<T: Scalar>(source: &Source<T>, grid: &FieldGrid<T>) -> Result<FieldGrid<T>> {
    if let Source::Point(s) = source {
        if !(s.position.z < grid.origin.z) {
            return Err(Error::SourceSide { z: s.position.z.to_f64_lossy() });
        }
    }
    let mut out = grid.clone();
    for ((iy, ix), v) in out.values.indexed_iter_mut() {
        *v = source.field_at(&grid.position(ix, iy));
    }
    Ok(out)
}

/// Source field at each element center.
pub fn incident_on_elements<T: Scalar>(source: &Source<T>, geometry: &SurfaceGeometry<T>) -> Vec<Complex<T>> {
    geometry.centers().iter().map(|p| source.field_at(p)).collect()
}
