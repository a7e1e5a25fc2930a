use ndarray::Array2;
use num_complex::Complex;

use super::impedance::{coefficients_from_impedance, ImpedanceProfile, FREE_SPACE_IMPEDANCE};
use super::ElementCoefficients;
use crate::geometry::{Position3D, SurfaceGeometry, Wavelength};
use crate::grid::FieldGrid;
use crate::scalar::j;
use crate::{Error, Result, Scalar};

/// Minimum number of fine-grid samples per element along each axis.
pub const MIN_SAMPLES_PER_ELEMENT: usize = 4;

/// Scalar electric and magnetic surface susceptibilities (m) sampled on a
/// fine grid in the surface plane. Indexed `[iy, ix]` with the centering
/// convention of [`FieldGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityProfile<T> {
    pub chi_ee: Array2<Complex<T>>,
    pub chi_mm: Array2<Complex<T>>,
    pub dx: T,
    pub dy: T,
    pub origin: Position3D<T>,
}

impl<T: Scalar> SusceptibilityProfile<T> {
    /// Profile on the fine grid that subdivides every element of `geometry`
    /// into `samples × samples` cells, filled by evaluating the two
    /// susceptibility functions at the cell centers.
    pub fn sample<F, G>(geometry: &SurfaceGeometry<T>, samples: usize, chi_ee: F, chi_mm: G) -> Result<Self>
    where
        F: Fn(Position3D<T>) -> Complex<T>,
        G: Fn(Position3D<T>) -> Complex<T>,
    {
        let grid = FieldGrid::over_surface(geometry, samples, 0)?;
        let mut ee = grid.values.clone();
        let mut mm = grid.values.clone();
        for ((iy, ix), v) in ee.indexed_iter_mut() {
            *v = chi_ee(grid.position(ix, iy));
        }
        for ((iy, ix), v) in mm.indexed_iter_mut() {
            *v = chi_mm(grid.position(ix, iy));
        }
        Ok(SusceptibilityProfile { chi_ee: ee, chi_mm: mm, dx: grid.dx, dy: grid.dy, origin: grid.origin })
    }

    fn sampling(&self) -> Result<FieldGrid<T>> {
        if self.chi_ee.dim() != self.chi_mm.dim() {
            return Err(Error::InvalidArgument(format!(
                "χ_ee is {:?} but χ_mm is {:?}",
                self.chi_ee.dim(),
                self.chi_mm.dim()
            )));
        }
        FieldGrid::new(self.chi_ee.clone(), self.dx, self.dy, self.origin)
    }
}

/// Per-element mean susceptibilities.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceAverages<T> {
    pub chi_ee: Vec<Complex<T>>,
    pub chi_mm: Vec<Complex<T>>,
}

/// Arithmetic mean of the samples whose centers fall inside each element's
/// footprint.
pub fn surface_average_susceptibility<T: Scalar>(
    profile: &SusceptibilityProfile<T>,
    geometry: &SurfaceGeometry<T>,
) -> Result<SurfaceAverages<T>> {
    let grid = profile.sampling()?;
    let n = geometry.element_count();
    let mut ee = vec![Vec::new(); n];
    let mut mm = vec![Vec::new(); n];
    for ((iy, ix), v) in profile.chi_ee.indexed_iter() {
        let p = grid.position(ix, iy);
        if let Some(m) = geometry.element_at(p.x, p.y) {
            ee[m].push(*v);
            mm[m].push(profile.chi_mm[[iy, ix]]);
        }
    }
    let mut chi_ee = Vec::with_capacity(n);
    let mut chi_mm = Vec::with_capacity(n);
    for m in 0..n {
        if ee[m].is_empty() {
            return Err(Error::Coverage { element: m });
        }
        let count = T::from_usize_lossy(ee[m].len());
        chi_ee.push(crate::numeric::pairwise_sum(&ee[m]) / count);
        chi_mm.push(crate::numeric::pairwise_sum(&mm[m]) / count);
    }
    Ok(SurfaceAverages { chi_ee, chi_mm })
}

/// Sheet parameters equivalent to the averaged susceptibilities:
/// `Ye = jkχ̄_ee/η0`, `Zm = jkη0χ̄_mm`, so that the normalized values are
/// `ye = jkχ̄_ee/2` and `zm = jkχ̄_mm/2`.
pub fn impedance_from_susceptibility<T: Scalar>(
    averages: &SurfaceAverages<T>,
    wavelength: Wavelength<T>,
) -> Result<ImpedanceProfile<T>> {
    let jk = j::<T>() * wavelength.k();
    let eta = T::lit(FREE_SPACE_IMPEDANCE);
    ImpedanceProfile::new(
        averages.chi_ee.iter().map(|&c| jk * c / eta).collect(),
        averages.chi_mm.iter().map(|&c| jk * c * eta).collect(),
    )
}

/// Coefficients of a surface described by continuous susceptibilities:
/// element-wise averaging followed by the sheet-impedance map.
pub fn coefficients_from_gstc<T: Scalar>(
    profile: &SusceptibilityProfile<T>,
    geometry: &SurfaceGeometry<T>,
    wavelength: Wavelength<T>,
) -> Result<ElementCoefficients<T>> {
    let (sx, sy) = profile.sampling()?.alignment(geometry)?;
    if sx < MIN_SAMPLES_PER_ELEMENT || sy < MIN_SAMPLES_PER_ELEMENT {
        return Err(Error::InvalidArgument(format!(
            "susceptibility grid resolves each element with {sx}×{sy} samples, \
             at least {MIN_SAMPLES_PER_ELEMENT}×{MIN_SAMPLES_PER_ELEMENT} required"
        )));
    }
    let averages = surface_average_susceptibility(profile, geometry)?;
    coefficients_from_impedance(&impedance_from_susceptibility(&averages, wavelength)?)
}
