use num_complex::Complex;

use super::ElementCoefficients;
use crate::geometry::{SurfaceGeometry, Wavelength};
use crate::scalar::{cis, wrap_phase};
use crate::{Error, Result, Scalar};

/// Amplitude and phase applied to the reflected and transmitted rays of each
/// element. Phases are kept reduced to `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftProfile<T> {
    pub beta_r: Vec<T>,
    pub beta_t: Vec<T>,
    pub phi_r: Vec<T>,
    pub phi_t: Vec<T>,
}

impl<T: Scalar> PhaseShiftProfile<T> {
    /// Builds a profile, reducing the phases and validating it.
    pub fn new(beta_r: Vec<T>, beta_t: Vec<T>, phi_r: Vec<T>, phi_t: Vec<T>) -> Result<Self> {
        let p = PhaseShiftProfile {
            beta_r,
            beta_t,
            phi_r: phi_r.into_iter().map(wrap_phase).collect(),
            phi_t: phi_t.into_iter().map(wrap_phase).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn uniform(count: usize, beta_r: T, phi_r: T, beta_t: T, phi_t: T) -> Result<Self> {
        Self::new(
            vec![beta_r; count],
            vec![beta_t; count],
            vec![phi_r; count],
            vec![phi_t; count],
        )
    }

    pub fn len(&self) -> usize {
        self.beta_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta_r.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.beta_r.len();
        for (what, len) in [
            ("beta_t", self.beta_t.len()),
            ("phi_r", self.phi_r.len()),
            ("phi_t", self.phi_t.len()),
        ] {
            if len != n {
                return Err(Error::LengthMismatch { what, expected: n, got: len });
            }
        }
        let tol = T::validation_tol();
        for m in 0..n {
            let (br, bt) = (self.beta_r[m], self.beta_t[m]);
            for (name, b) in [("beta_r", br), ("beta_t", bt)] {
                if !(b >= T::zero() && b <= T::one() + tol) {
                    return Err(Error::InvalidArgument(format!(
                        "element {m}: {name} = {b} outside [0, 1]"
                    )));
                }
            }
            for (name, phi) in [("phi_r", self.phi_r[m]), ("phi_t", self.phi_t[m])] {
                if !phi.is_finite() {
                    return Err(Error::InvalidArgument(format!("element {m}: {name} is not finite")));
                }
            }
            let p = br * br + bt * bt;
            if p > T::one() + tol {
                return Err(Error::PassivityViolation { element: m, value: p.to_f64_lossy() });
            }
        }
        Ok(())
    }
}

/// `r = β_r·e^{jφ_r}`, `t = β_t·e^{jφ_t}` per element.
pub fn coefficients_from_phase_shift<T: Scalar>(profile: &PhaseShiftProfile<T>) -> Result<ElementCoefficients<T>> {
    profile.validate()?;
    let r = profile
        .beta_r
        .iter()
        .zip(&profile.phi_r)
        .map(|(&b, &p)| cis(p) * b)
        .collect();
    let t = profile
        .beta_t
        .iter()
        .zip(&profile.phi_t)
        .map(|(&b, &p)| cis(p) * b)
        .collect();
    ElementCoefficients::new(r, t)
}

fn polar<T: Scalar>(c: Complex<T>) -> (T, T) {
    let beta = c.norm();
    if beta == T::zero() {
        (T::zero(), T::zero())
    } else {
        (beta, wrap_phase(c.arg()))
    }
}

/// Amplitude/phase view of a coefficient set; a zero coefficient maps to
/// `β = 0, φ = 0`.
pub fn phase_profile_from_coefficients<T: Scalar>(coeffs: &ElementCoefficients<T>) -> PhaseShiftProfile<T> {
    let (beta_r, phi_r) = coeffs.reflection().iter().map(|&c| polar(c)).unzip();
    let (beta_t, phi_t) = coeffs.transmission().iter().map(|&c| polar(c)).unzip();
    PhaseShiftProfile { beta_r, beta_t, phi_r, phi_t }
}

/// Linear phase gradient steering a normally incident wave toward
/// `target_r` on the reflection side and `target_t` on the transmission
/// side: `φ(m) = -k·sin(target)·x_m` (mod 2π), where `x_m` is measured from
/// the surface origin.
pub fn linear_phase_gradient_profile<T: Scalar>(
    geometry: &SurfaceGeometry<T>,
    wavelength: Wavelength<T>,
    target_r: T,
    target_t: T,
    beta_r: T,
    beta_t: T,
) -> Result<PhaseShiftProfile<T>> {
    for (name, a) in [("reflection", target_r), ("transmission", target_t)] {
        if !(a.abs() < T::FRAC_PI_2()) {
            return Err(Error::InvalidArgument(format!(
                "{name} target angle must satisfy |θ| < π/2, got {a}"
            )));
        }
    }
    let k = wavelength.k();
    let n = geometry.element_count();
    let xs: Vec<T> = geometry.centers().iter().map(|p| p.x - geometry.origin.x).collect();
    let phi_r = xs.iter().map(|&x| -k * target_r.sin() * x).collect();
    let phi_t = xs.iter().map(|&x| -k * target_t.sin() * x).collect();
    PhaseShiftProfile::new(vec![beta_r; n], vec![beta_t; n], phi_r, phi_t)
}
