use num_complex::Complex;

use super::{check_receiver, ChannelGain, Side};
use crate::geometry::{Position3D, SurfaceGeometry};
use crate::hardware::ElementCoefficients;
use crate::numeric::pairwise_sum;
use crate::scalar::{cis, j};
use crate::source::Source;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy)]
struct Ray<T> {
    center: Position3D<T>,
    /// `c_m · g_m · dx·dy`, with `g_m` the unit incident field at the center.
    weight: Complex<T>,
    cos1: T,
}

/// One ray per element, prepared for repeated evaluation at many receivers.
#[derive(Debug, Clone)]
pub struct RayTracer<T> {
    rays: Vec<Ray<T>>,
    side: Side,
    k: T,
    prefactor: Complex<T>,
}

impl<T: Scalar> RayTracer<T> {
    pub fn new(
        source: &Source<T>,
        geometry: &SurfaceGeometry<T>,
        coeffs: &ElementCoefficients<T>,
        side: Side,
    ) -> Result<Self> {
        if coeffs.len() != geometry.element_count() {
            return Err(Error::LengthMismatch {
                what: "element coefficients",
                expected: geometry.element_count(),
                got: coeffs.len(),
            });
        }
        let area = geometry.element_area();
        let rays = geometry
            .centers()
            .into_iter()
            .zip(coeffs.for_side(side))
            .map(|(p, &c)| Ray { center: p, weight: c * source.unit_field_at(&p) * area, cos1: source.cos_incidence(&p) })
            .collect();
        let w = source.wavelength();
        Ok(RayTracer { rays, side, k: w.k(), prefactor: j::<T>() / w.meters() })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn gain_at(&self, rx: &Position3D<T>) -> Result<ChannelGain<T>> {
        if rx.z == T::zero() {
            if let Some(m) = self.rays.iter().position(|r| r.center.distance(rx) == T::zero()) {
                return Err(Error::SingularDistance { element: m });
            }
        }
        check_receiver(rx)?;
        self.side.check(rx)?;
        let half = T::lit(0.5);
        let terms: Vec<Complex<T>> = self
            .rays
            .iter()
            .map(|r| {
                let d2 = r.center.distance(rx);
                let cos2 = rx.z.abs() / d2;
                r.weight * ((r.cos1 + cos2) * half / d2) * cis(-self.k * d2)
            })
            .collect();
        Ok(ChannelGain::from_h(self.prefactor * pairwise_sum(&terms)))
    }
}

/// Channel gain with every element treated as a single ray:
///
/// `h = (j/λ) Σ_m c_m·g_m·dx·dy·K_m·e^{-jk d2_m}/d2_m`,
///
/// where `g_m` is the incident field per unit amplitude at the element center
/// and `K_m = (cos θ1 + cos θ2)/2` is evaluated there.
pub fn ray_tracing_gain<T: Scalar>(
    source: &Source<T>,
    rx: &Position3D<T>,
    geometry: &SurfaceGeometry<T>,
    coeffs: &ElementCoefficients<T>,
    side: Side,
) -> Result<ChannelGain<T>> {
    RayTracer::new(source, geometry, coeffs, side)?.gain_at(rx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Wavelength;
    use crate::scalar::wrap_signed;
    use crate::source::{PlaneWaveSource, PointSource};
    use num_complex::Complex64 as C;
    use std::f64::consts::PI;

    fn w() -> Wavelength<f64> {
        Wavelength::new(0.01).unwrap()
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let g = SurfaceGeometry::default_for(w());
        let c = ElementCoefficients::uniform(100, C::new(0.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let src: Source<f64> = PlaneWaveSource::from_angles(C::new(1.0, 0.0), 0.0, 0.0, w()).unwrap().into();
        let h = ray_tracing_gain(&src, &Position3D::new(0.0, 0.0, -1.0), &g, &c, Side::Reflect).unwrap();
        assert_eq!(h.h, C::new(0.0, 0.0));
    }

    #[test]
    fn single_element_closed_form() {
        let (d1, d2) = (0.37, 0.81);
        let g = SurfaceGeometry::new(1, 1, 0.005, 0.005, Position3D::origin()).unwrap();
        let c = ElementCoefficients::uniform(1, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let src: Source<f64> = PointSource::new(Position3D::new(0.0, 0.0, -d1), C::new(1.0, 0.0), w()).unwrap().into();
        let h = ray_tracing_gain(&src, &Position3D::new(0.0, 0.0, -d2), &g, &c, Side::Reflect).unwrap();
        let lambda = w().meters();
        let mag = 0.005 * 0.005 / (lambda * d1 * d2);
        assert!((h.magnitude() - mag).abs() < 1e-12 * mag);
        let k = w().k();
        assert!(wrap_signed(h.phase() - (-k * (d1 + d2) + PI / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn conjugate_phases_add_coherently() {
        let wl = w();
        let g = SurfaceGeometry::new(4, 3, 0.005, 0.005, Position3D::origin()).unwrap();
        let sp = Position3D::new(0.1, 0.0, -0.5);
        let rx = Position3D::new(-0.2, 0.05, -0.7);
        let src: Source<f64> = PointSource::new(sp, C::new(1.0, 0.0), wl).unwrap().into();
        let k = wl.k();
        let r: Vec<C> = g
            .centers()
            .iter()
            .map(|p| C::from_polar(1.0, k * (sp.distance(p) + rx.distance(p))))
            .collect();
        let c = ElementCoefficients::new(r, vec![C::new(0.0, 0.0); 12]).unwrap();
        let h = ray_tracing_gain(&src, &rx, &g, &c, Side::Reflect).unwrap();
        // triangle equality: |Σ a_m| = Σ |a_m| when every term shares one phase
        let a: f64 = g
            .centers()
            .iter()
            .map(|p| {
                let (d1, d2) = (sp.distance(p), rx.distance(p));
                let kf = ((0.5 / d1) + (0.7 / d2)) / 2.0;
                0.005 * 0.005 * kf / (wl.meters() * d1 * d2)
            })
            .sum();
        assert!((h.magnitude() - a).abs() < 1e-12 * a);
    }

    #[test]
    fn receiver_errors() {
        let g = SurfaceGeometry::default_for(w());
        let c = ElementCoefficients::uniform(100, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let src: Source<f64> = PlaneWaveSource::from_angles(C::new(1.0, 0.0), 0.0, 0.0, w()).unwrap().into();
        let center = g.element_center(7).unwrap();
        assert!(matches!(
            ray_tracing_gain(&src, &center, &g, &c, Side::Reflect),
            Err(Error::SingularDistance { element: 7 })
        ));
        assert!(matches!(
            ray_tracing_gain(&src, &Position3D::new(0.3, 0.3, 0.0), &g, &c, Side::Reflect),
            Err(Error::OnSurfacePlane)
        ));
        assert!(matches!(
            ray_tracing_gain(&src, &Position3D::new(0.0, 0.0, 1.0), &g, &c, Side::Reflect),
            Err(Error::WrongSide { .. })
        ));
    }
}
