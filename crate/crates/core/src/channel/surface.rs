use num_complex::Complex;

use super::Side;
use crate::geometry::{SurfaceGeometry, Wavelength};
use crate::grid::{ApertureDistribution, FieldGrid};
use crate::hardware::ElementCoefficients;
use crate::source::{incident_field, Source};
use crate::{Error, Result, Scalar};

/// Samples per element needed for a quadrature pitch of at most `λ/4`.
pub fn quarter_wave_samples<T: Scalar>(geometry: &SurfaceGeometry<T>, wavelength: Wavelength<T>) -> usize {
    let ratio = geometry.dx.max(geometry.dy) / (wavelength.meters() / T::lit(4.0));
    (ratio - T::lit(1e-9)).ceil().to_usize().unwrap_or(1).max(1)
}

/// Incident field sampled over the surface footprint and multiplied by the
/// surface response of `side`.
pub fn illuminated_aperture<T: Scalar>(
    source: &Source<T>,
    geometry: &SurfaceGeometry<T>,
    coeffs: &ElementCoefficients<T>,
    side: Side,
    samples_per_element: usize,
) -> Result<ApertureDistribution<T>> {
    let grid = FieldGrid::over_surface(geometry, samples_per_element, 0)?;
    apply_surface(&incident_field(source, &grid)?, geometry, coeffs, side)
}

/// Multiplies each sample by its element's reflection (or transmission)
/// coefficient. Samples outside the aperture are opaque and set to zero.
pub fn apply_surface<T: Scalar>(
    incident: &ApertureDistribution<T>,
    geometry: &SurfaceGeometry<T>,
    coeffs: &ElementCoefficients<T>,
    side: Side,
) -> Result<ApertureDistribution<T>> {
    if coeffs.len() != geometry.element_count() {
        return Err(Error::LengthMismatch {
            what: "element coefficients",
            expected: geometry.element_count(),
            got: coeffs.len(),
        });
    }
    incident.alignment(geometry)?;
    let c = coeffs.for_side(side);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = incident.clone();
    for ((iy, ix), v) in out.values.indexed_iter_mut() {
        let p = incident.position(ix, iy);
        *v = match geometry.element_at(p.x, p.y) {
            Some(m) => *v * c[m],
            None => zero,
        };
    }
    Ok(out)
}
