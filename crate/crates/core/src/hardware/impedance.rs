use num_complex::Complex;

use super::ElementCoefficients;
use crate::{Error, Result, Scalar};

/// Wave impedance of free space, Ω.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730313668;

/// Surface-averaged electric sheet admittance `Ye` (S) and magnetic sheet
/// impedance `Zm` (Ω) of each element.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceProfile<T> {
    pub ye: Vec<Complex<T>>,
    pub zm: Vec<Complex<T>>,
}

impl<T: Scalar> ImpedanceProfile<T> {
    pub fn new(ye: Vec<Complex<T>>, zm: Vec<Complex<T>>) -> Result<Self> {
        let p = ImpedanceProfile { ye, zm };
        p.validate()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.ye.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ye.is_empty()
    }

    /// Equal lengths and passivity (`Re Ye ≥ 0`, `Re Zm ≥ 0`).
    pub fn validate(&self) -> Result<()> {
        if self.zm.len() != self.ye.len() {
            return Err(Error::LengthMismatch {
                what: "magnetic sheet impedances",
                expected: self.ye.len(),
                got: self.zm.len(),
            });
        }
        for (m, (y, z)) in self.ye.iter().zip(&self.zm).enumerate() {
            if !(y.re.is_finite() && y.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("element {m}: non-finite sheet parameter")));
            }
            if y.re < T::zero() {
                return Err(Error::ActiveElement { element: m, reason: format!("Re(Ye) = {} < 0", y.re) });
            }
            if z.re < T::zero() {
                return Err(Error::ActiveElement { element: m, reason: format!("Re(Zm) = {} < 0", z.re) });
            }
        }
        Ok(())
    }

    /// Every element purely reactive.
    pub fn is_lossless(&self) -> bool {
        self.ye.iter().chain(&self.zm).all(|v| v.re == T::zero())
    }
}

fn half_reflection<T: Scalar>(x: Complex<T>, element: usize, which: &'static str) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let den = one + x;
    if den.norm() <= T::lit(T::SINGULAR_TOL) * (T::one() + x.norm()) {
        return Err(Error::SingularSheet { element, which });
    }
    Ok((one - x) / den)
}

/// Reflection and transmission of a sheet with normalized electric
/// admittance `ye = η0·Ye/2` and normalized magnetic impedance
/// `zm = Zm/(2η0)` under normal incidence.
///
/// The even and odd excitations see `u = (1-ye)/(1+ye)` and
/// `v = (1-zm)/(1+zm)`; `t = (u+v)/2`, `r = (u-v)/2`.
pub fn sheet_coefficients<T: Scalar>(
    ye: Complex<T>,
    zm: Complex<T>,
    element: usize,
) -> Result<(Complex<T>, Complex<T>)> {
    let u = half_reflection(ye, element, "ye")?;
    let v = half_reflection(zm, element, "zm")?;
    let half = T::lit(0.5);
    Ok(((u - v) * half, (u + v) * half))
}

pub fn coefficients_from_impedance<T: Scalar>(profile: &ImpedanceProfile<T>) -> Result<ElementCoefficients<T>> {
    profile.validate()?;
    let eta = T::lit(FREE_SPACE_IMPEDANCE);
    let two = T::lit(2.0);
    let mut r = Vec::with_capacity(profile.len());
    let mut t = Vec::with_capacity(profile.len());
    for (m, (y, z)) in profile.ye.iter().zip(&profile.zm).enumerate() {
        let (rm, tm) = sheet_coefficients(*y * eta / two, *z / (two * eta), m)?;
        r.push(rm);
        t.push(tm);
    }
    ElementCoefficients::new(r, t)
}
