use num_complex::Complex;

use crate::channel::Side;
use crate::{Error, Result, Scalar};

/// Per-element complex reflection `r` and transmission `t` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementCoefficients<T> {
    r: Vec<Complex<T>>,
    t: Vec<Complex<T>>,
}

impl<T: Scalar> ElementCoefficients<T> {
    /// Validates equal lengths and passivity `|r|² + |t|² ≤ 1` per element.
    pub fn new(r: Vec<Complex<T>>, t: Vec<Complex<T>>) -> Result<Self> {
        if r.len() != t.len() {
            return Err(Error::LengthMismatch {
                what: "transmission coefficients",
                expected: r.len(),
                got: t.len(),
            });
        }
        let limit = T::one() + T::validation_tol();
        for (m, (a, b)) in r.iter().zip(&t).enumerate() {
            let p = a.norm_sqr() + b.norm_sqr();
            if !p.is_finite() || p > limit {
                return Err(Error::PassivityViolation { element: m, value: p.to_f64_lossy() });
            }
        }
        Ok(ElementCoefficients { r, t })
    }

    pub fn uniform(count: usize, r: Complex<T>, t: Complex<T>) -> Result<Self> {
        Self::new(vec![r; count], vec![t; count])
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn reflection(&self) -> &[Complex<T>] {
        &self.r
    }

    pub fn transmission(&self) -> &[Complex<T>] {
        &self.t
    }

    pub fn for_side(&self, side: Side) -> &[Complex<T>] {
        match side {
            Side::Reflect => &self.r,
            Side::Transmit => &self.t,
        }
    }

    /// `|r_m|² + |t_m|²`.
    pub fn power_sum(&self, m: usize) -> T {
        self.r[m].norm_sqr() + self.t[m].norm_sqr()
    }

    /// Every element conserves power within the validation tolerance.
    pub fn is_lossless(&self) -> bool {
        (0..self.len()).all(|m| (self.power_sum(m) - T::one()).abs() <= T::validation_tol())
    }

    pub fn into_parts(self) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        (self.r, self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn passivity_enforced() {
        let bad = ElementCoefficients::new(vec![C::new(0.9, 0.0)], vec![C::new(0.0, 0.9)]);
        match bad {
            Err(Error::PassivityViolation { element, value }) => {
                assert_eq!(element, 0);
                assert!((value - 1.62).abs() < 1e-12);
            }
            other => panic!("expected passivity violation, got {other:?}"),
        }
    }

    #[test]
    fn lossless_flag() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = ElementCoefficients::uniform(3, C::new(h, 0.0), C::new(0.0, -h)).unwrap();
        assert!(c.is_lossless());
        let lossy = ElementCoefficients::uniform(3, C::new(0.5, 0.0), C::new(0.5, 0.0)).unwrap();
        assert!(!lossy.is_lossless());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            ElementCoefficients::new(vec![C::new(0.0, 0.0)], vec![]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
