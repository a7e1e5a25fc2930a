use num_complex::Complex;

use super::pattern::{radiation_pattern, PatternMethod};
use crate::channel::Side;
use crate::geometry::{Position3D, SurfaceGeometry, Wavelength};
use crate::hardware::{coefficients_from_phase_shift, linear_phase_gradient_profile};
use crate::source::PlaneWaveSource;
use crate::{Error, Result, Scalar};

/// Generalized Snell's law in the x–z plane:
/// `sin θ_out = sin θ_in + (1/k)·dτ/dx`.
///
/// `delay_gradient` is the gradient of the phase delay `τ = -arg(c)`
/// imposed by the surface (rad/m); a coefficient phase `φ = -k·sin θ·x`
/// has `dτ/dx = k·sin θ`. Angles are measured from the normal of the
/// output half-space and are positive toward `+x`.
pub fn predicted_steering_angle<T: Scalar>(incident_angle: T, delay_gradient: T, wavelength: Wavelength<T>) -> Result<T> {
    let s = incident_angle.sin() + delay_gradient / wavelength.k();
    if s.abs() > T::one() {
        return Err(Error::EvanescentSteering { sin_theta: s.to_f64_lossy() });
    }
    Ok(s.asin())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringReport<T> {
    pub side: Side,
    pub predicted: T,
    /// Pattern maximum on `side`, as polar angle and azimuth.
    pub argmax_theta: T,
    pub argmax_phi: T,
    /// Angle between the maximum and the predicted direction.
    pub deviation: T,
    pub resolution: T,
}

impl<T: Scalar> SteeringReport<T> {
    /// Maximum within one angular bin of the prediction.
    pub fn within_one_bin(&self) -> bool {
        self.deviation <= self.resolution * (T::one() + T::lit(1e-9))
    }

    /// Signed angle of the maximum in the x–z plane.
    pub fn argmax_signed(&self) -> T {
        if self.argmax_phi.cos() < T::zero() {
            -self.argmax_theta
        } else {
            self.argmax_theta
        }
    }
}

fn direction<T: Scalar>(theta: T, phi: T) -> Position3D<T> {
    Position3D::from_spherical(theta, phi)
}

/// Steers the surface with a linear phase gradient toward `target_angle` on
/// `side` (the other side is switched off), illuminates it with a plane wave
/// at `incident_angle` in the x–z plane and compares the pattern maximum with
/// the generalized-Snell prediction.
pub fn verify_steering<T: Scalar>(
    geometry: &SurfaceGeometry<T>,
    wavelength: Wavelength<T>,
    incident_angle: T,
    target_angle: T,
    side: Side,
    method: PatternMethod,
    resolution: T,
) -> Result<SteeringReport<T>> {
    let (tr, tt, br, bt) = match side {
        Side::Reflect => (target_angle, T::zero(), T::one(), T::zero()),
        Side::Transmit => (T::zero(), target_angle, T::zero(), T::one()),
    };
    let profile = linear_phase_gradient_profile(geometry, wavelength, tr, tt, br, bt)?;
    let coeffs = coefficients_from_phase_shift(&profile)?;
    let predicted = predicted_steering_angle(incident_angle, wavelength.k() * target_angle.sin(), wavelength)?;
    let source = PlaneWaveSource::from_angles(Complex::new(T::one(), T::zero()), incident_angle, T::zero(), wavelength)?;
    let pattern = radiation_pattern(geometry, &coeffs, &source.into(), resolution, method)?;
    let half = pattern.side(side);
    let (it, ip) = half.argmax();
    let (theta, phi) = (half.thetas[it], half.phis[ip]);
    let want = direction(predicted.abs(), if predicted < T::zero() { T::PI() } else { T::zero() });
    let cos = direction(theta, phi).dot(&want).max(-T::one()).min(T::one());
    Ok(SteeringReport { side, predicted, argmax_theta: theta, argmax_phi: phi, deviation: cos.acos(), resolution })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Wavelength<f64> {
        Wavelength::new(1.0).unwrap()
    }

    #[test]
    fn specular_without_gradient() {
        let t = predicted_steering_angle(20f64.to_radians(), 0.0, w()).unwrap();
        assert!((t - 20f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn half_k_gradient() {
        let k = w().k();
        let t = predicted_steering_angle(0.0, -k / 2.0, w()).unwrap();
        assert!((t.to_degrees() + 30.0).abs() < 1e-9);
    }

    #[test]
    fn evanescent_beam() {
        let k = w().k();
        assert!(matches!(
            predicted_steering_angle(45f64.to_radians(), k, w()),
            Err(Error::EvanescentSteering { .. })
        ));
    }

    #[test]
    fn broadside_target() {
        let g = SurfaceGeometry::default_for(w());
        let res = 1f64.to_radians();
        for side in Side::BOTH {
            let r = verify_steering(&g, w(), 0.0, 0.0, side, PatternMethod::RayTracing, res).unwrap();
            assert_eq!(r.argmax_theta, 0.0);
            assert!(r.within_one_bin());
        }
    }

    #[test]
    fn thirty_degrees_fresnel_kirchhoff() {
        let g = SurfaceGeometry::default_for(w());
        let res = 1f64.to_radians();
        for side in Side::BOTH {
            let r = verify_steering(&g, w(), 0.0, 30f64.to_radians(), side, PatternMethod::FresnelKirchhoff, res)
                .unwrap();
            assert!(r.within_one_bin(), "{side:?}: {:?}", r);
            assert!(r.argmax_signed() > 0.0);
        }
    }

    #[test]
    fn specular_law_for_oblique_incidence() {
        let g = SurfaceGeometry::default_for(w());
        let res = 1f64.to_radians();
        for deg in [10.0f64, 30.0, 45.0] {
            let r = verify_steering(&g, w(), deg.to_radians(), 0.0, Side::Reflect, PatternMethod::RayTracing, res)
                .unwrap();
            assert!((r.predicted.to_degrees() - deg).abs() < 1e-9);
            assert!(r.within_one_bin(), "{deg}: {:?}", r);
        }
    }
}
