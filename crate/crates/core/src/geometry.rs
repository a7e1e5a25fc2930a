//! Positions, wavelengths and the planar element grid.
//!
//! The surface always lies in the `z = 0` plane. The reflection half-space is
//! `z < 0` (the side sources live on) and the transmission half-space is
//! `z > 0`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result, Scalar};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point or free vector in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position3D<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Position3D<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Position3D { x, y, z }
    }

    pub fn origin() -> Self {
        Position3D::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Mirror image across the surface plane.
    pub fn mirrored(&self) -> Self {
        Position3D::new(self.x, self.y, -self.z)
    }

    /// Unit vector from spherical angles; `theta` from `+z`, `phi` from `+x`.
    pub fn from_spherical(theta: T, phi: T) -> Self {
        let s = theta.sin();
        Position3D::new(s * phi.cos(), s * phi.sin(), theta.cos())
    }
}

impl<T: Scalar> Add for Position3D<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Position3D::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Position3D<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Position3D::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Mul<T> for Position3D<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Position3D::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Scalar> Neg for Position3D<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Position3D::new(-self.x, -self.y, -self.z)
    }
}

/// Free-space wavelength of the carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavelength<T> {
    lambda_m: T,
}

impl<T: Scalar> Wavelength<T> {
    pub fn new(lambda_m: T) -> Result<Self> {
        if !(lambda_m > T::zero()) || !lambda_m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "wavelength must be positive and finite, got {lambda_m}"
            )));
        }
        Ok(Wavelength { lambda_m })
    }

    pub fn from_frequency(hz: T) -> Result<Self> {
        if !(hz > T::zero()) || !hz.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "frequency must be positive and finite, got {hz}"
            )));
        }
        Self::new(T::lit(SPEED_OF_LIGHT) / hz)
    }

    #[inline]
    pub fn meters(&self) -> T {
        self.lambda_m
    }

    /// Wavenumber `2π/λ`, rad/m.
    #[inline]
    pub fn k(&self) -> T {
        T::TAU() / self.lambda_m
    }

    pub fn frequency(&self) -> T {
        T::lit(SPEED_OF_LIGHT) / self.lambda_m
    }
}

/// Rectangular `nx × ny` grid of elements centered on `origin`.
///
/// Element `m` sits at column `m % nx`, row `m / nx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceGeometry<T> {
    pub nx: usize,
    pub ny: usize,
    pub dx: T,
    pub dy: T,
    pub origin: Position3D<T>,
}

impl<T: Scalar> SurfaceGeometry<T> {
    pub fn new(nx: usize, ny: usize, dx: T, dy: T, origin: Position3D<T>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGeometry(format!(
                "element counts must be positive, got {nx}×{ny}"
            )));
        }
        if !(dx > T::zero() && dy > T::zero()) || !dx.is_finite() || !dy.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "element pitch must be positive, got dx={dx}, dy={dy}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGeometry("origin must be finite".into()));
        }
        if origin.z != T::zero() {
            return Err(Error::InvalidGeometry(format!(
                "surface must lie in the z = 0 plane, origin.z = {}",
                origin.z
            )));
        }
        Ok(SurfaceGeometry { nx, ny, dx, dy, origin })
    }

    /// 10×10 elements at half-wavelength pitch, centered at the origin.
    pub fn default_for(wavelength: Wavelength<T>) -> Self {
        let half = wavelength.meters() / T::lit(2.0);
        SurfaceGeometry {
            nx: 10,
            ny: 10,
            dx: half,
            dy: half,
            origin: Position3D::origin(),
        }
    }

    #[inline]
    pub fn element_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn element_area(&self) -> T {
        self.dx * self.dy
    }

    pub fn extent_x(&self) -> T {
        T::from_usize_lossy(self.nx) * self.dx
    }

    pub fn extent_y(&self) -> T {
        T::from_usize_lossy(self.ny) * self.dy
    }

    /// Aperture diagonal `D = √(Dx² + Dy²)`.
    pub fn diagonal(&self) -> T {
        self.extent_x().hypot(self.extent_y())
    }

    /// Lower-left corner of the aperture footprint.
    pub fn corner(&self) -> (T, T) {
        let two = T::lit(2.0);
        (
            self.origin.x - self.extent_x() / two,
            self.origin.y - self.extent_y() / two,
        )
    }

    pub fn element_center(&self, m: usize) -> Result<Position3D<T>> {
        let count = self.element_count();
        if m >= count {
            return Err(Error::InvalidElement { index: m, count });
        }
        Ok(self.center_unchecked(m % self.nx, m / self.nx))
    }

    pub(crate) fn center_unchecked(&self, ix: usize, iy: usize) -> Position3D<T> {
        let two = T::lit(2.0);
        let ox = T::from_usize_lossy(ix) - T::from_usize_lossy(self.nx - 1) / two;
        let oy = T::from_usize_lossy(iy) - T::from_usize_lossy(self.ny - 1) / two;
        Position3D::new(
            self.origin.x + ox * self.dx,
            self.origin.y + oy * self.dy,
            self.origin.z,
        )
    }

    /// All element centers in index order.
    pub fn centers(&self) -> Vec<Position3D<T>> {
        (0..self.ny)
            .flat_map(|iy| (0..self.nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| self.center_unchecked(ix, iy))
            .collect()
    }

    /// Element whose half-open footprint `[left, right) × [bottom, top)`
    /// contains `(x, y)`.
    pub fn element_at(&self, x: T, y: T) -> Option<usize> {
        let (x0, y0) = self.corner();
        let fx = ((x - x0) / self.dx).floor();
        let fy = ((y - y0) / self.dy).floor();
        if fx < T::zero() || fy < T::zero() {
            return None;
        }
        let ix = fx.to_usize()?;
        let iy = fy.to_usize()?;
        (ix < self.nx && iy < self.ny).then(|| iy * self.nx + ix)
    }
}
