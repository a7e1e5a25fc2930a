use crate::geometry::{SurfaceGeometry, Wavelength};
use crate::{Error, Result, Scalar};

/// Coefficient of the reactive near-field boundary `c·√(D³/λ)`.
pub const REACTIVE_COEFFICIENT: f64 = 0.62;
/// Coefficient of the Fraunhofer distance `c·D²/λ`.
pub const FRAUNHOFER_COEFFICIENT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    ReactiveNearField,
    RadiatingNearField,
    FarField,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::ReactiveNearField => "ReactiveNearField",
            RegionKind::RadiatingNearField => "RadiatingNearField",
            RegionKind::FarField => "FarField",
        }
    }
}

/// Region boundaries of an aperture, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBoundaries<T> {
    pub reactive: T,
    pub fraunhofer: T,
}

impl<T: Scalar> RegionBoundaries<T> {
    pub fn new(geometry: &SurfaceGeometry<T>, wavelength: Wavelength<T>) -> Self {
        Self::with_coefficients(geometry, wavelength, T::lit(REACTIVE_COEFFICIENT), T::lit(FRAUNHOFER_COEFFICIENT))
    }

    pub fn with_coefficients(geometry: &SurfaceGeometry<T>, wavelength: Wavelength<T>, reactive: T, fraunhofer: T) -> Self {
        let d = geometry.diagonal();
        let l = wavelength.meters();
        RegionBoundaries { reactive: reactive * (d * d * d / l).sqrt(), fraunhofer: fraunhofer * d * d / l }
    }

    /// Reactive below `min(reactive, fraunhofer)`, far field from the
    /// Fraunhofer distance on (closed), radiating near field in between.
    pub fn classify(&self, distance: T) -> Result<FieldRegion<T>> {
        if !(distance > T::zero()) || !distance.is_finite() {
            return Err(Error::InvalidArgument(format!("distance must be positive, got {distance}")));
        }
        let kind = if distance >= self.fraunhofer {
            RegionKind::FarField
        } else if distance < self.reactive.min(self.fraunhofer) {
            RegionKind::ReactiveNearField
        } else {
            RegionKind::RadiatingNearField
        };
        Ok(FieldRegion { kind, reactive_boundary: self.reactive, fraunhofer_boundary: self.fraunhofer })
    }
}

/// Region a distance falls in, together with the boundaries used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRegion<T> {
    pub kind: RegionKind,
    pub reactive_boundary: T,
    pub fraunhofer_boundary: T,
}

/// `2D²/λ` with `D` the aperture diagonal.
pub fn fraunhofer_distance<T: Scalar>(geometry: &SurfaceGeometry<T>, wavelength: Wavelength<T>) -> T {
    RegionBoundaries::new(geometry, wavelength).fraunhofer
}

/// `0.62·√(D³/λ)`.
pub fn reactive_near_field_boundary<T: Scalar>(geometry: &SurfaceGeometry<T>, wavelength: Wavelength<T>) -> T {
    RegionBoundaries::new(geometry, wavelength).reactive
}

pub fn classify_field_region<T: Scalar>(
    distance: T,
    geometry: &SurfaceGeometry<T>,
    wavelength: Wavelength<T>,
) -> Result<FieldRegion<T>> {
    RegionBoundaries::new(geometry, wavelength).classify(distance)
}
