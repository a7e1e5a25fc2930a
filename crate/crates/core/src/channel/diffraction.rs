use num_complex::Complex;

use super::{check_pitch, check_receiver, ChannelGain};
use crate::geometry::Position3D;
use crate::grid::ApertureDistribution;
use crate::numeric::pairwise_sum;
use crate::scalar::{cis, j};
use crate::source::Source;
use crate::{Error, Result, Scalar};

/// Sub-cells per axis used for samples close to a receiver near the plane.
const REFINE: usize = 8;

/// Boundary data assumed on the surface plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RsBoundary {
    /// First Rayleigh-Sommerfeld solution, driven by `U`.
    Dirichlet,
    /// Second solution, driven by `∂U/∂n ≈ jk·cos θ1·U`.
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffractionKernel {
    FresnelKirchhoff,
    RayleighSommerfeld(RsBoundary),
}

#[derive(Debug, Clone, Copy)]
struct Sample<T> {
    p: Position3D<T>,
    /// Aperture value per unit source amplitude.
    u: Complex<T>,
    cos1: T,
}

/// Midpoint quadrature of a diffraction integral over an aperture grid.
#[derive(Debug, Clone)]
pub struct ApertureIntegrator<T> {
    samples: Vec<Sample<T>>,
    source: Source<T>,
    kernel: DiffractionKernel,
    dx: T,
    dy: T,
    k: T,
    lambda: T,
}

impl<T: Scalar> ApertureIntegrator<T> {
    pub fn new(source: &Source<T>, aperture: &ApertureDistribution<T>, kernel: DiffractionKernel) -> Result<Self> {
        let w = source.wavelength();
        check_pitch(aperture.dx, aperture.dy, w)?;
        if aperture.origin.z != T::zero() {
            return Err(Error::InvalidGeometry(format!(
                "aperture must lie in the z = 0 plane, got z = {}",
                aperture.origin.z
            )));
        }
        let a = source.amplitude();
        if a.norm() == T::zero() {
            return Err(Error::InvalidArgument("source amplitude is zero".into()));
        }
        let samples = aperture
            .samples()
            .map(|(p, v)| Sample { p, u: v / a, cos1: source.cos_incidence(&p) })
            .collect();
        Ok(ApertureIntegrator {
            samples,
            source: *source,
            kernel,
            dx: aperture.dx,
            dy: aperture.dy,
            k: w.k(),
            lambda: w.meters(),
        })
    }

    /// Kernel value per unit area for the sample at `q` seen from `rx`.
    fn term(&self, q: &Position3D<T>, u: Complex<T>, cos1: T, rx: &Position3D<T>) -> Complex<T> {
        let s = q.distance(rx);
        let spherical = cis(-self.k * s) / s;
        let cos2 = rx.z.abs() / s;
        match self.kernel {
            DiffractionKernel::FresnelKirchhoff => u * ((cos1 + cos2) * T::lit(0.5)) * spherical,
            DiffractionKernel::RayleighSommerfeld(RsBoundary::Dirichlet) => {
                u * cos2 * Complex::new(T::one() / s, self.k) * spherical / T::TAU()
            }
            DiffractionKernel::RayleighSommerfeld(RsBoundary::Neumann) => {
                u * Complex::new(T::zero(), self.k * cos1) * spherical / T::TAU()
            }
        }
    }

    fn refined(&self, s: &Sample<T>, rx: &Position3D<T>) -> Complex<T> {
        let n = T::from_usize_lossy(REFINE);
        let (hx, hy) = (self.dx / n, self.dy / n);
        let half = T::lit(0.5);
        let mut terms = Vec::with_capacity(REFINE * REFINE);
        for iy in 0..REFINE {
            for ix in 0..REFINE {
                let q = Position3D::new(
                    s.p.x - self.dx * half + hx * (T::from_usize_lossy(ix) + half),
                    s.p.y - self.dy * half + hy * (T::from_usize_lossy(iy) + half),
                    s.p.z,
                );
                terms.push(self.term(&q, s.u, self.source.cos_incidence(&q), rx));
            }
        }
        pairwise_sum(&terms) * (hx * hy)
    }

    pub fn gain_at(&self, rx: &Position3D<T>) -> Result<ChannelGain<T>> {
        check_receiver(rx)?;
        let area = self.dx * self.dy;
        let near = rx.z.abs() < self.dx.max(self.dy);
        if near {
            log::warn!(
                "receiver at z = {} is within one sample pitch of the aperture; refining nearby cells",
                rx.z
            );
        }
        let two = T::lit(2.0);
        let terms: Vec<Complex<T>> = self
            .samples
            .iter()
            .map(|s| {
                if near && (s.p.x - rx.x).abs() <= two * self.dx && (s.p.y - rx.y).abs() <= two * self.dy {
                    self.refined(s, rx)
                } else {
                    self.term(&s.p, s.u, s.cos1, rx) * area
                }
            })
            .collect();
        let sum = pairwise_sum(&terms);
        let h = match self.kernel {
            DiffractionKernel::FresnelKirchhoff => j::<T>() / self.lambda * sum,
            DiffractionKernel::RayleighSommerfeld(_) => sum,
        };
        Ok(ChannelGain::from_h(h))
    }
}

/// `U(rx) = (j/λ) ∬ U(P)·K(P)·e^{-jks}/s dS`, `K = (cos θ1 + cos θ2)/2`.
pub fn fresnel_kirchhoff_gain<T: Scalar>(
    source: &Source<T>,
    rx: &Position3D<T>,
    aperture: &ApertureDistribution<T>,
) -> Result<ChannelGain<T>> {
    ApertureIntegrator::new(source, aperture, DiffractionKernel::FresnelKirchhoff)?.gain_at(rx)
}

pub fn rayleigh_sommerfeld_gain<T: Scalar>(
    source: &Source<T>,
    rx: &Position3D<T>,
    aperture: &ApertureDistribution<T>,
    boundary: RsBoundary,
) -> Result<ChannelGain<T>> {
    ApertureIntegrator::new(source, aperture, DiffractionKernel::RayleighSommerfeld(boundary))?.gain_at(rx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_surface, ray_tracing_gain, Side};
    use crate::geometry::{SurfaceGeometry, Wavelength};
    use crate::grid::FieldGrid;
    use crate::hardware::ElementCoefficients;
    use crate::source::{incident_field, PlaneWaveSource, PointSource};
    use crate::scalar::wrap_signed;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w() -> Wavelength<f64> {
        Wavelength::new(0.01).unwrap()
    }

    fn broadside() -> Source<f64> {
        PlaneWaveSource::from_angles(C::new(1.0, 0.0), 0.0, 0.0, w()).unwrap().into()
    }

    fn uniform_aperture(samples: usize) -> FieldGrid<f64> {
        let g = SurfaceGeometry::default_for(w());
        let mut a = FieldGrid::over_surface(&g, samples, 0).unwrap();
        a.values.fill(C::new(1.0, 0.0));
        a
    }

    #[test]
    fn zero_aperture() {
        let mut a = uniform_aperture(2);
        a.values.fill(C::new(0.0, 0.0));
        let rx = Position3D::new(0.0, 0.0, -1.0);
        assert_eq!(fresnel_kirchhoff_gain(&broadside(), &rx, &a).unwrap().h, C::new(0.0, 0.0));
        for b in [RsBoundary::Dirichlet, RsBoundary::Neumann] {
            assert_eq!(rayleigh_sommerfeld_gain(&broadside(), &rx, &a, b).unwrap().h, C::new(0.0, 0.0));
        }
    }

    #[test]
    fn matches_ray_tracing_at_element_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = SurfaceGeometry::new(5, 4, 0.004, 0.005, Position3D::new(0.01, -0.02, 0.0)).unwrap();
        for _ in 0..10 {
            let r: Vec<C> = (0..20).map(|_| C::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..6.3))).collect();
            let t: Vec<C> = (0..20).map(|_| C::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..6.3))).collect();
            let c = ElementCoefficients::new(r, t).unwrap();
            let sp = Position3D::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-1.0..-0.1));
            let src: Source<f64> = PointSource::new(sp, C::new(2.0, -1.0), w()).unwrap().into();
            let grid = FieldGrid::over_surface(&g, 1, 0).unwrap();
            let inc = incident_field(&src, &grid).unwrap();
            for side in Side::BOTH {
                let rx = Position3D::new(rng.gen_range(-0.5..0.5), 0.1, side.normal_sign::<f64>() * rng.gen_range(0.05..2.0));
                let ap = apply_surface(&inc, &g, &c, side).unwrap();
                let fk = fresnel_kirchhoff_gain(&src, &rx, &ap).unwrap().h;
                let rt = ray_tracing_gain(&src, &rx, &g, &c, side).unwrap().h;
                assert!((fk - rt).norm() <= 1e-12 * rt.norm(), "{fk} vs {rt}");
            }
        }
    }

    #[test]
    fn on_axis_fraunhofer_value() {
        let a = uniform_aperture(2);
        let z = 1000.0 * w().meters();
        let h = fresnel_kirchhoff_gain(&broadside(), &Position3D::new(0.0, 0.0, -z), &a).unwrap();
        let area = 25.0 * w().meters().powi(2);
        let oracle = area / (w().meters() * z);
        assert!((h.magnitude() - oracle).abs() < 0.01 * oracle);
    }

    #[test]
    fn rayleigh_sommerfeld_agrees_on_axis() {
        let a = uniform_aperture(2);
        let rx = Position3D::new(0.0, 0.0, -100.0 * w().meters());
        let fk = fresnel_kirchhoff_gain(&broadside(), &rx, &a).unwrap().h;
        for b in [RsBoundary::Dirichlet, RsBoundary::Neumann] {
            let rs = rayleigh_sommerfeld_gain(&broadside(), &rx, &a, b).unwrap().h;
            assert!((rs.norm() - fk.norm()).abs() < 0.005 * fk.norm());
            assert!(wrap_signed(rs.arg() - fk.arg()).abs() < 0.01);
        }
    }

    #[test]
    fn symmetric_aperture_mirror_receivers() {
        let a = uniform_aperture(2);
        let p = Position3D::new(0.13, 0.07, -0.4);
        let q = Position3D::new(-0.13, -0.07, -0.4);
        let hp = rayleigh_sommerfeld_gain(&broadside(), &p, &a, RsBoundary::Dirichlet).unwrap();
        let hq = rayleigh_sommerfeld_gain(&broadside(), &q, &a, RsBoundary::Dirichlet).unwrap();
        assert!((hp.magnitude() - hq.magnitude()).abs() < 1e-12 * hp.magnitude());
    }

    #[test]
    fn coarse_sampling_rejected() {
        let g = SurfaceGeometry::new(4, 4, 0.008, 0.008, Position3D::origin()).unwrap();
        let a = FieldGrid::over_surface(&g, 1, 0).unwrap();
        assert!(matches!(
            fresnel_kirchhoff_gain(&broadside(), &Position3D::new(0.0, 0.0, -1.0), &a),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn near_plane_receiver_is_refined_and_finite() {
        let a = uniform_aperture(4);
        // 1/4 of a sample pitch above the plane, over the aperture center
        let rx = Position3D::new(0.0003, 0.0, -a.dx / 4.0);
        let h = rayleigh_sommerfeld_gain(&broadside(), &rx, &a, RsBoundary::Dirichlet).unwrap();
        assert!(h.h.re.is_finite() && h.h.im.is_finite());
        // deep inside a uniform aperture the Dirichlet field approaches the
        // boundary value
        assert!((h.magnitude() - 1.0).abs() < 0.2, "{}", h.magnitude());
    }
}
