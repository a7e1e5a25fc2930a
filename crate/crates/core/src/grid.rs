//! Sampled complex fields on planes parallel to the surface.

use ndarray::Array2;
use num_complex::Complex;

use crate::geometry::{Position3D, SurfaceGeometry};
use crate::{Error, Result, Scalar};

/// Complex field sampled on a regular grid in a plane of constant `z`.
///
/// `values` is indexed `[iy, ix]`; sample `(ix, iy)` sits at
/// `origin + ((ix - (nx-1)/2)·dx, (iy - (ny-1)/2)·dy, 0)`, the same centering
/// rule used for surface elements.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    pub values: Array2<Complex<T>>,
    pub dx: T,
    pub dy: T,
    pub origin: Position3D<T>,
}

/// Field on the surface plane after (or before) the surface response.
pub type ApertureDistribution<T> = FieldGrid<T>;

impl<T: Scalar> FieldGrid<T> {
    pub fn new(values: Array2<Complex<T>>, dx: T, dy: T, origin: Position3D<T>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::InvalidGeometry("field grid must be at least 1×1".into()));
        }
        if !(dx > T::zero() && dy > T::zero()) {
            return Err(Error::InvalidGeometry(format!(
                "sampling pitch must be positive, got dx={dx}, dy={dy}"
            )));
        }
        Ok(FieldGrid { values, dx, dy, origin })
    }

    pub fn zeros(nx: usize, ny: usize, dx: T, dy: T, origin: Position3D<T>) -> Result<Self> {
        Self::new(Array2::zeros((ny, nx)), dx, dy, origin)
    }

    /// Grid over the surface footprint with `samples_per_element` samples per
    /// element along each axis, plus `guard` empty elements on every side.
    pub fn over_surface(
        geometry: &SurfaceGeometry<T>,
        samples_per_element: usize,
        guard: usize,
    ) -> Result<Self> {
        if samples_per_element == 0 {
            return Err(Error::InvalidArgument("samples_per_element must be ≥ 1".into()));
        }
        let s = T::from_usize_lossy(samples_per_element);
        let nx = (geometry.nx + 2 * guard) * samples_per_element;
        let ny = (geometry.ny + 2 * guard) * samples_per_element;
        Self::zeros(nx, ny, geometry.dx / s, geometry.dy / s, geometry.origin)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.values.ncols()
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.values.nrows()
    }

    #[inline]
    pub fn sample_area(&self) -> T {
        self.dx * self.dy
    }

    pub fn max_pitch(&self) -> T {
        self.dx.max(self.dy)
    }

    pub fn position(&self, ix: usize, iy: usize) -> Position3D<T> {
        let two = T::lit(2.0);
        let ox = T::from_usize_lossy(ix) - T::from_usize_lossy(self.nx() - 1) / two;
        let oy = T::from_usize_lossy(iy) - T::from_usize_lossy(self.ny() - 1) / two;
        Position3D::new(
            self.origin.x + ox * self.dx,
            self.origin.y + oy * self.dy,
            self.origin.z,
        )
    }

    /// Position of the first sample, `(ix, iy) = (0, 0)`.
    pub fn first_sample(&self) -> Position3D<T> {
        self.position(0, 0)
    }

    /// `Σ|U|²·dx·dy`.
    pub fn energy(&self) -> T {
        let terms: Vec<T> = self.values.iter().map(|v| v.norm_sqr()).collect();
        crate::numeric::pairwise_sum(&terms) * self.sample_area()
    }

    /// Samples with their positions, row-major.
    pub fn samples(&self) -> impl Iterator<Item = (Position3D<T>, Complex<T>)> + '_ {
        self.values
            .indexed_iter()
            .map(move |((iy, ix), v)| (self.position(ix, iy), *v))
    }

    /// Samples per element along each axis when this grid is aligned to
    /// `geometry`: integer pitch ratio and sample centers at the midpoints of
    /// equal sub-cells of every element.
    pub fn alignment(&self, geometry: &SurfaceGeometry<T>) -> Result<(usize, usize)> {
        let tol = T::lit(1e-6);
        let ratio = |coarse: T, fine: T, axis: &str| -> Result<usize> {
            let r = coarse / fine;
            let n = r.round();
            if n < T::one() || (r - n).abs() > tol * r {
                return Err(Error::Alignment(format!(
                    "{axis}: element pitch / sample pitch = {r} is not a positive integer"
                )));
            }
            n.to_usize()
                .ok_or_else(|| Error::Alignment(format!("{axis}: ratio {r} out of range")))
        };
        let sx = ratio(geometry.dx, self.dx, "x")?;
        let sy = ratio(geometry.dy, self.dy, "y")?;
        let (cx, cy) = geometry.corner();
        let p0 = self.first_sample();
        let offset = |p: T, c: T, pitch: T, axis: &str| -> Result<()> {
            let f = (p - c) / pitch - T::lit(0.5);
            if (f - f.round()).abs() > tol {
                return Err(Error::Alignment(format!(
                    "{axis}: sample centers are offset by {f} samples from the element edges"
                )));
            }
            Ok(())
        };
        offset(p0.x, cx, self.dx, "x")?;
        offset(p0.y, cy, self.dy, "y")?;
        Ok((sx, sy))
    }
}
