use ndarray::Array2;
use num_complex::Complex;
use rayon::prelude::*;

use super::regions::fraunhofer_distance;
use crate::channel::{
    illuminated_aperture, quarter_wave_samples, spectrum_at, ApertureIntegrator, DiffractionKernel,
    RayTracer, RsBoundary, Side,
};
use crate::geometry::{Position3D, SurfaceGeometry};
use crate::grid::ApertureDistribution;
use crate::hardware::ElementCoefficients;
use crate::scalar::cis;
use crate::source::Source;
use crate::{Error, Result, Scalar};

/// Far-field distance, in Fraunhofer distances, at which patterns are taken.
pub const PATTERN_RADIUS_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternMethod {
    RayTracing,
    FresnelKirchhoff,
    RayleighSommerfeld,
    AngularSpectrum,
}

impl PatternMethod {
    pub const ALL: [PatternMethod; 4] = [
        PatternMethod::RayTracing,
        PatternMethod::FresnelKirchhoff,
        PatternMethod::RayleighSommerfeld,
        PatternMethod::AngularSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternMethod::RayTracing => "ray_tracing",
            PatternMethod::FresnelKirchhoff => "fresnel_kirchhoff",
            PatternMethod::RayleighSommerfeld => "rayleigh_sommerfeld",
            PatternMethod::AngularSpectrum => "angular_spectrum",
        }
    }
}

impl std::str::FromStr for PatternMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PatternMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Power pattern over one half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct HemispherePattern<T> {
    pub side: Side,
    /// Polar angles from the hemisphere's outward normal, `[0, π/2)`.
    pub thetas: Vec<T>,
    /// Azimuths, `[0, 2π)`.
    pub phis: Vec<T>,
    /// Normalized power, dB, indexed `[iθ, iφ]`.
    pub power_db: Array2<T>,
    /// No power reaches this half-space.
    pub empty: bool,
}

impl<T: Scalar> HemispherePattern<T> {
    /// Unit vector of grid direction `(iθ, iφ)`.
    pub fn direction(&self, it: usize, ip: usize) -> Position3D<T> {
        let d = Position3D::from_spherical(self.thetas[it], self.phis[ip]);
        Position3D::new(d.x, d.y, d.z * self.side.normal_sign())
    }

    /// Grid index of the maximum; ties go to the lowest θ, then φ.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_v = T::neg_infinity();
        for ((it, ip), &v) in self.power_db.indexed_iter() {
            if v > best_v {
                best_v = v;
                best = (it, ip);
            }
        }
        best
    }

    fn nearest_phi(&self, phi: T) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (i, &p) in self.phis.iter().enumerate() {
            let d = crate::scalar::wrap_signed(p - phi).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Principal-plane cut through azimuth `phi`, as `(signed θ, dB)` from
    /// `-π/2` to `π/2`; negative angles lie at azimuth `phi + π`.
    pub fn cut(&self, phi: T) -> Vec<(T, T)> {
        let pos = self.nearest_phi(phi);
        let neg = self.nearest_phi(phi + T::PI());
        let mut out: Vec<(T, T)> = (1..self.thetas.len())
            .rev()
            .map(|it| (-self.thetas[it], self.power_db[[it, neg]]))
            .collect();
        out.extend((0..self.thetas.len()).map(|it| (self.thetas[it], self.power_db[[it, pos]])));
        out
    }
}

/// Normalized far-field power pattern over both half-spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationPattern<T> {
    pub reflect: HemispherePattern<T>,
    pub transmit: HemispherePattern<T>,
    pub resolution: T,
    pub radius: T,
    pub method: PatternMethod,
}

impl<T: Scalar> RadiationPattern<T> {
    pub fn side(&self, side: Side) -> &HemispherePattern<T> {
        match side {
            Side::Reflect => &self.reflect,
            Side::Transmit => &self.transmit,
        }
    }
}

fn angle_grid<T: Scalar>(resolution: T) -> (Vec<T>, Vec<T>) {
    let half_pi = T::FRAC_PI_2();
    let thetas: Vec<T> = (0..)
        .map(|i| T::from_usize_lossy(i) * resolution)
        .take_while(|&t| t < half_pi - resolution * T::lit(1e-6))
        .collect();
    let n_phi = (T::TAU() / resolution - T::lit(1e-6)).ceil().to_usize().unwrap_or(1).max(1);
    let step = T::TAU() / T::from_usize_lossy(n_phi);
    let phis = (0..n_phi).map(|i| T::from_usize_lossy(i) * step).collect();
    (thetas, phis)
}

enum Evaluator<T> {
    Rays(RayTracer<T>),
    Integral(ApertureIntegrator<T>),
    Spectrum { aperture: ApertureDistribution<T>, amplitude: Complex<T>, k: T },
}

impl<T: Scalar> Evaluator<T> {
    fn h(&self, dir: &Position3D<T>, radius: T) -> Result<Complex<T>> {
        match self {
            Evaluator::Rays(r) => Ok(r.gain_at(&(*dir * radius))?.h),
            Evaluator::Integral(i) => Ok(i.gain_at(&(*dir * radius))?.h),
            Evaluator::Spectrum { aperture, amplitude, k } => {
                // far field of the plane-wave spectrum:
                // U = (jk·cosθ/2π)·A(k·sinθ·cosφ, k·sinθ·sinφ)·e^{-jkr}/r
                let a = spectrum_at(aperture, *k * dir.x, *k * dir.y);
                let f = Complex::new(T::zero(), *k * dir.z.abs() / T::TAU()) * cis(-*k * radius) / radius;
                Ok(f * a / *amplitude)
            }
        }
    }
}

/// Far-field power pattern of the illuminated surface on a sphere of radius
/// `100·(2D²/λ)`, normalized to the peak over both half-spaces.
///
/// `resolution` (rad) is the θ and φ step; it must not exceed 1°. Aperture
/// methods sample the surface at a pitch of at most `λ/4`.
pub fn radiation_pattern<T: Scalar>(
    geometry: &SurfaceGeometry<T>,
    coeffs: &ElementCoefficients<T>,
    source: &Source<T>,
    resolution: T,
    method: PatternMethod,
) -> Result<RadiationPattern<T>> {
    let max_res = T::lit(1.0_f64.to_radians()) * (T::one() + T::lit(1e-9));
    if !(resolution > T::zero() && resolution <= max_res) {
        return Err(Error::InvalidArgument(format!(
            "angular resolution must be in (0°, 1°], got {}°",
            resolution.to_degrees()
        )));
    }
    let w = source.wavelength();
    let radius = T::lit(PATTERN_RADIUS_FACTOR) * fraunhofer_distance(geometry, w);
    let (thetas, phis) = angle_grid(resolution);
    let samples = quarter_wave_samples(geometry, w);

    let mut raw = Vec::with_capacity(2);
    for side in Side::BOTH {
        let eval = match method {
            PatternMethod::RayTracing => Evaluator::Rays(RayTracer::new(source, geometry, coeffs, side)?),
            PatternMethod::FresnelKirchhoff | PatternMethod::RayleighSommerfeld => {
                let kernel = if method == PatternMethod::FresnelKirchhoff {
                    DiffractionKernel::FresnelKirchhoff
                } else {
                    DiffractionKernel::RayleighSommerfeld(RsBoundary::Dirichlet)
                };
                let ap = illuminated_aperture(source, geometry, coeffs, side, samples)?;
                Evaluator::Integral(ApertureIntegrator::new(source, &ap, kernel)?)
            }
            PatternMethod::AngularSpectrum => Evaluator::Spectrum {
                aperture: illuminated_aperture(source, geometry, coeffs, side, samples)?,
                amplitude: source.amplitude(),
                k: w.k(),
            },
        };
        let sign = side.normal_sign::<T>();
        let rows: Vec<Vec<T>> = thetas
            .par_iter()
            .map(|&th| {
                phis.iter()
                    .map(|&ph| {
                        let d = Position3D::from_spherical(th, ph);
                        let dir = Position3D::new(d.x, d.y, d.z * sign);
                        eval.h(&dir, radius).map(|h| h.norm_sqr())
                    })
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        raw.push((side, rows));
    }

    let peak = raw
        .iter()
        .flat_map(|(_, rows)| rows.iter().flatten())
        .fold(T::zero(), |m, &v| m.max(v));
    let ten = T::lit(10.0);
    let mut halves = raw.into_iter().map(|(side, rows)| {
        let empty = rows.iter().flatten().all(|&v| v == T::zero());
        let power_db = Array2::from_shape_fn((thetas.len(), phis.len()), |(it, ip)| {
            let v = rows[it][ip];
            if v == T::zero() || peak == T::zero() {
                T::neg_infinity()
            } else {
                ten * (v / peak).log10()
            }
        });
        HemispherePattern { side, thetas: thetas.clone(), phis: phis.clone(), power_db, empty }
    });
    let reflect = halves.next().expect("reflection half");
    let transmit = halves.next().expect("transmission half");
    Ok(RadiationPattern { reflect, transmit, resolution, radius, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Wavelength;
    use crate::source::PlaneWaveSource;
    use num_complex::Complex64 as C;

    fn setup(n: usize) -> (SurfaceGeometry<f64>, Source<f64>) {
        let w = Wavelength::new(1.0).unwrap();
        let g = SurfaceGeometry::new(n, n, 0.5, 0.5, Position3D::origin()).unwrap();
        (g, PlaneWaveSource::from_angles(C::new(1.0, 0.0), 0.0, 0.0, w).unwrap().into())
    }

    #[test]
    fn method_names_round_trip() {
        for m in PatternMethod::ALL {
            assert_eq!(m.name().parse::<PatternMethod>().unwrap(), m);
        }
        assert!(matches!("ray_trace".parse::<PatternMethod>(), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn grid_excludes_grazing() {
        let (t, p) = angle_grid(1.0_f64.to_radians());
        assert_eq!(t.len(), 90);
        assert_eq!(p.len(), 360);
        assert!(t.last().unwrap().to_degrees() < 89.5);
    }

    #[test]
    fn rejects_coarse_resolution() {
        let (g, s) = setup(2);
        let c = ElementCoefficients::uniform(4, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        assert!(radiation_pattern(&g, &c, &s, 2.0_f64.to_radians(), PatternMethod::RayTracing).is_err());
    }

    #[test]
    fn normalized_and_empty_transmission() {
        let (g, s) = setup(4);
        let c = ElementCoefficients::uniform(16, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        for m in PatternMethod::ALL {
            let p = radiation_pattern(&g, &c, &s, 1.0_f64.to_radians(), m).unwrap();
            assert!(p.transmit.empty);
            assert!(p.transmit.power_db.iter().all(|v| *v == f64::NEG_INFINITY));
            assert!(!p.reflect.empty);
            let peak = p.reflect.power_db.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            assert_eq!(peak, 0.0);
            assert_eq!(p.reflect.argmax(), (0, 0), "{m:?}");
        }
    }

    #[test]
    fn amplitude_scaling_keeps_argmax() {
        let (g, s) = setup(4);
        let r: Vec<C> = (0..16).map(|m| C::from_polar(0.9, 0.7 * m as f64)).collect();
        let c = ElementCoefficients::new(r.clone(), vec![C::new(0.0, 0.0); 16]).unwrap();
        let c2 = ElementCoefficients::new(r.iter().map(|v| v * 0.3).collect(), vec![C::new(0.0, 0.0); 16]).unwrap();
        let a = radiation_pattern(&g, &c, &s, 1.0_f64.to_radians(), PatternMethod::RayTracing).unwrap();
        let b = radiation_pattern(&g, &c2, &s, 1.0_f64.to_radians(), PatternMethod::RayTracing).unwrap();
        assert_eq!(a.reflect.argmax(), b.reflect.argmax());
    }

    #[test]
    fn cut_is_symmetric_for_uniform_surface() {
        let (g, s) = setup(4);
        let c = ElementCoefficients::uniform(16, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let p = radiation_pattern(&g, &c, &s, 1.0_f64.to_radians(), PatternMethod::RayTracing).unwrap();
        let cut = p.reflect.cut(0.0);
        assert_eq!(cut.len(), 2 * 90 - 1);
        let n = cut.len();
        for i in 0..n / 2 {
            assert!((cut[i].0 + cut[n - 1 - i].0).abs() < 1e-12);
            assert!((cut[i].1 - cut[n - 1 - i].1).abs() < 1e-9);
        }
    }
}
