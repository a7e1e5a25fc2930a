use std::collections::HashMap;

use ndarray::Array2;
use num_complex::Complex;
use rustfft::FftPlanner;

use super::{check_pitch, check_receiver, ChannelGain};
use crate::geometry::{Position3D, Wavelength};
use crate::grid::{ApertureDistribution, FieldGrid};
use crate::numeric::bessel::j0;
use crate::numeric::pairwise_sum;
use crate::numeric::quadrature::GaussLegendre;
use crate::scalar::cis;
use crate::source::Source;
use crate::{Error, Result, Scalar};

/// Zero padding applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    None,
    /// At least twice the aperture extent along each axis, rounded up to a
    /// size with no prime factor above 5.
    #[default]
    Double,
}

fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Signed frequency index of FFT bin `p` out of `n`.
fn signed_bin(p: usize, n: usize) -> i64 {
    if p <= n / 2 {
        p as i64
    } else {
        p as i64 - n as i64
    }
}

/// Plane-wave spectrum `A(kx, ky) = ∬ U(x, y)·e^{+j(kx·x + ky·y)} dx dy`.
///
/// `values` is indexed `[q, p]` in FFT bin order; see [`AngularSpectrum::kx`].
/// The spectrum remembers the sample grid it came from so that the inverse
/// returns to the same positions.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum<T> {
    pub values: Array2<Complex<T>>,
    pub dx: T,
    pub dy: T,
    /// Center of the (padded) sample grid.
    pub origin: Position3D<T>,
    pub wavelength: Wavelength<T>,
}

fn fft2<T: Scalar>(values: &mut Array2<Complex<T>>, inverse: bool) {
    let (ny, nx) = values.dim();
    let mut planner = FftPlanner::<T>::new();
    let row = if inverse { planner.plan_fft_inverse(nx) } else { planner.plan_fft_forward(nx) };
    let col = if inverse { planner.plan_fft_inverse(ny) } else { planner.plan_fft_forward(ny) };
    let mut buf: Vec<Complex<T>> = values.iter().copied().collect();
    row.process(&mut buf);
    let mut t = vec![Complex::new(T::zero(), T::zero()); nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            t[ix * ny + iy] = buf[iy * nx + ix];
        }
    }
    col.process(&mut t);
    for ((iy, ix), v) in values.indexed_iter_mut() {
        *v = t[ix * ny + iy];
    }
}

impl<T: Scalar> AngularSpectrum<T> {
    pub fn nx(&self) -> usize {
        self.values.ncols()
    }

    pub fn ny(&self) -> usize {
        self.values.nrows()
    }

    pub fn dkx(&self) -> T {
        T::TAU() / (T::from_usize_lossy(self.nx()) * self.dx)
    }

    pub fn dky(&self) -> T {
        T::TAU() / (T::from_usize_lossy(self.ny()) * self.dy)
    }

    /// Transverse wavenumber of column `p`, rad/m.
    pub fn kx(&self, p: usize) -> T {
        T::lit(signed_bin(p, self.nx()) as f64) * self.dkx()
    }

    pub fn ky(&self, q: usize) -> T {
        T::lit(signed_bin(q, self.ny()) as f64) * self.dky()
    }

    fn grid(&self) -> FieldGrid<T> {
        FieldGrid { values: Array2::zeros(self.values.dim()), dx: self.dx, dy: self.dy, origin: self.origin }
    }

    /// `Σ|A|²·dkx·dky/(2π)²`; equals the aperture energy.
    pub fn energy(&self) -> T {
        let terms: Vec<T> = self.values.iter().map(|v| v.norm_sqr()).collect();
        pairwise_sum(&terms) * self.dkx() * self.dky() / (T::TAU() * T::TAU())
    }

    /// Energy carried by the modes with `kx² + ky² ≤ k²`.
    pub fn propagating_power(&self) -> T {
        let k2 = self.wavelength.k().powi(2);
        let terms: Vec<T> = self
            .values
            .indexed_iter()
            .filter(|((q, p), _)| self.kx(*p).powi(2) + self.ky(*q).powi(2) <= k2)
            .map(|(_, v)| v.norm_sqr())
            .collect();
        pairwise_sum(&terms) * self.dkx() * self.dky() / (T::TAU() * T::TAU())
    }

    /// Axial wavenumber; negative imaginary for evanescent modes.
    pub fn kz(&self, kx: T, ky: T) -> Complex<T> {
        let d = self.wavelength.k().powi(2) - kx * kx - ky * ky;
        if d >= T::zero() {
            Complex::new(d.sqrt(), T::zero())
        } else {
            Complex::new(T::zero(), -(-d).sqrt())
        }
    }

    /// Spectrum of the field after propagating a distance `|z|` away from
    /// the plane: every mode is multiplied by `e^{-j·kz·|z|}`.
    pub fn propagated(&self, z: T) -> Self {
        let dist = z.abs();
        let mut out = self.clone();
        for ((q, p), v) in out.values.indexed_iter_mut() {
            let kz = self.kz(self.kx(p), self.ky(q));
            // e^{-j(a - jb)d} = e^{-b·d}·e^{-j·a·d}
            *v = *v * cis(-kz.re * dist) * (kz.im * dist).exp();
        }
        out.origin.z = self.origin.z + z;
        out
    }

    /// Field samples on the (padded) grid.
    pub fn inverse(&self) -> FieldGrid<T> {
        let mut g = self.grid();
        let p0 = g.first_sample();
        let mut vals = self.values.clone();
        for ((q, p), v) in vals.indexed_iter_mut() {
            *v = *v * cis(-(self.kx(p) * p0.x + self.ky(q) * p0.y));
        }
        fft2(&mut vals, false);
        let scale = T::one() / (T::from_usize_lossy(self.nx() * self.ny()) * self.dx * self.dy);
        vals.mapv_inplace(|v| v * scale);
        g.values = vals;
        g
    }
}

/// Discrete angular spectrum of `aperture`.
pub fn angular_spectrum_of<T: Scalar>(
    aperture: &ApertureDistribution<T>,
    wavelength: Wavelength<T>,
    padding: Padding,
) -> Result<AngularSpectrum<T>> {
    check_pitch(aperture.dx, aperture.dy, wavelength)?;
    let (ny, nx) = aperture.values.dim();
    let (px, py) = match padding {
        Padding::None => (nx, ny),
        Padding::Double => (smooth_size(2 * nx), smooth_size(2 * ny)),
    };
    let (ox, oy) = ((px - nx) / 2, (py - ny) / 2);
    let mut values = Array2::zeros((py, px));
    values.slice_mut(ndarray::s![oy..oy + ny, ox..ox + nx]).assign(&aperture.values);
    // keep the original samples at their positions
    let two = T::lit(2.0);
    let shift = |n: usize, pn: usize, o: usize| {
        T::from_usize_lossy(pn - 1) / two - T::from_usize_lossy(o) - T::from_usize_lossy(n - 1) / two
    };
    let origin = Position3D::new(
        aperture.origin.x + shift(nx, px, ox) * aperture.dx,
        aperture.origin.y + shift(ny, py, oy) * aperture.dy,
        aperture.origin.z,
    );
    let mut s = AngularSpectrum { values, dx: aperture.dx, dy: aperture.dy, origin, wavelength };
    let p0 = s.grid().first_sample();
    fft2(&mut s.values, true);
    let area = s.dx * s.dy;
    let (kxs, kys): (Vec<T>, Vec<T>) = ((0..px).map(|p| s.kx(p)).collect(), (0..py).map(|q| s.ky(q)).collect());
    for ((q, p), v) in s.values.indexed_iter_mut() {
        *v = *v * cis(kxs[p] * p0.x + kys[q] * p0.y) * area;
    }
    Ok(s)
}

/// Field on the plane `z = z_offset`, on the padded sample grid.
pub fn angular_spectrum_propagate<T: Scalar>(
    aperture: &ApertureDistribution<T>,
    wavelength: Wavelength<T>,
    z_offset: T,
    padding: Padding,
) -> Result<FieldGrid<T>> {
    if !z_offset.is_finite() {
        return Err(Error::InvalidArgument("propagation distance must be finite".into()));
    }
    Ok(angular_spectrum_of(aperture, wavelength, padding)?.propagated(z_offset).inverse())
}

/// Continuous spectrum of the sampled aperture at one `(kx, ky)`:
/// `dx·dy·Σ U·e^{+j(kx·x + ky·y)}`.
pub fn spectrum_at<T: Scalar>(aperture: &ApertureDistribution<T>, kx: T, ky: T) -> Complex<T> {
    let terms: Vec<Complex<T>> = aperture
        .samples()
        .map(|(p, v)| v * cis(kx * p.x + ky * p.y))
        .collect();
    pairwise_sum(&terms) * aperture.sample_area()
}

/// Panels are sized so the integrand phase turns by at most this much.
const PANEL_PHASE: f64 = 1.5;
/// Evanescent tail cut where `e^{-k·|z|·sinh β}` drops below `e^{-40}`.
const EVANESCENT_CUTOFF: f64 = 40.0;
const MAX_PANELS: usize = 200_000;

/// Field at lateral distance `r` and height `|z|` radiated by a unit point
/// value on the aperture plane, as a superposition of plane waves:
///
/// `G = (1/2π) ∫₀^∞ kt·J0(kt·r)·e^{-j·kz·|z|} dkt`,
///
/// split into the propagating band (`kt = k sin α`) and the evanescent band
/// (`kt = k cosh β`). Analytically equal to the first Rayleigh-Sommerfeld
/// kernel.
pub fn plane_wave_kernel<T: Scalar>(r: T, z: T, k: T) -> Complex<T> {
    let gl = GaussLegendre::<T>::new(8);
    let z = z.abs();
    let k2 = k * k;
    let panels = |variation: T| {
        (variation / T::lit(PANEL_PHASE)).ceil().to_usize().unwrap_or(MAX_PANELS).min(MAX_PANELS) + 4
    };
    let prop = gl.integrate_panels(T::zero(), T::FRAC_PI_2(), panels(k * (z + r) * T::FRAC_PI_2()), |a: T| {
        let (s, c) = a.sin_cos();
        cis(-k * z * c) * (k2 * s * c * j0(k * r * s))
    });
    let beta_max = (T::lit(EVANESCENT_CUTOFF) / (k * z)).asinh();
    let var = k * r * (beta_max.cosh() - T::one()) + beta_max * T::lit(10.0);
    let evan = gl.integrate_panels(T::zero(), beta_max, panels(var), |b: T| {
        let (sh, ch) = (b.sinh(), b.cosh());
        Complex::new(k2 * ch * sh * j0(k * r * ch) * (-k * z * sh).exp(), T::zero())
    });
    (prop + evan) / T::TAU()
}

/// Received field evaluated by propagating the aperture's full plane-wave
/// spectrum, evanescent part included, to the receiver.
pub fn angular_spectrum_gain<T: Scalar>(
    source: &Source<T>,
    rx: &Position3D<T>,
    aperture: &ApertureDistribution<T>,
) -> Result<ChannelGain<T>> {
    let w = source.wavelength();
    check_pitch(aperture.dx, aperture.dy, w)?;
    check_receiver(rx)?;
    let a = source.amplitude();
    if a.norm() == T::zero() {
        return Err(Error::InvalidArgument("source amplitude is zero".into()));
    }
    let k = w.k();
    let mut cache: HashMap<u64, Complex<T>> = HashMap::new();
    let terms: Vec<Complex<T>> = aperture
        .samples()
        .map(|(p, v)| {
            if v.norm_sqr() == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            let (ddx, ddy) = (p.x - rx.x, p.y - rx.y);
            let r = (ddx * ddx + ddy * ddy).sqrt();
            let key = r.to_f64_lossy().to_bits();
            let g = *cache.entry(key).or_insert_with(|| plane_wave_kernel(r, rx.z, k));
            v * g
        })
        .collect();
    Ok(ChannelGain::from_h(pairwise_sum(&terms) * aperture.sample_area() / a))
}
