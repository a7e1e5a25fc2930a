use num_complex::Complex;

use super::ElementCoefficients;
use crate::{Error, Result, Scalar};

/// Finite set of reachable `(r, t)` pairs for implementations whose
/// reflection and transmission responses are coupled (e.g. one bank of
/// PIN-diode states drives both).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    entries: Vec<(Complex<T>, Complex<T>)>,
    bits: u32,
}

impl<T: Scalar> CoefficientTable<T> {
    /// At most `2^bits` passive entries.
    pub fn new(entries: Vec<(Complex<T>, Complex<T>)>, bits: u32) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("coefficient table is empty".into()));
        }
        if bits >= usize::BITS || entries.len() > 1usize << bits {
            return Err(Error::InvalidArgument(format!(
                "{} table entries do not fit in {bits} control bits",
                entries.len()
            )));
        }
        // reuse the passivity check; the error's element index is the entry
        let (r, t): (Vec<_>, Vec<_>) = entries.iter().copied().unzip();
        ElementCoefficients::new(r, t)?;
        Ok(CoefficientTable { entries, bits })
    }

    pub fn entries(&self) -> &[(Complex<T>, Complex<T>)] {
        &self.entries
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Entry minimizing `|r - r_i|² + |t - t_i|²`; lowest index on ties.
    pub fn nearest(&self, r: Complex<T>, t: Complex<T>) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (i, (ri, ti)) in self.entries.iter().enumerate() {
            let d = (r - ri).norm_sqr() + (t - ti).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    pub fn coefficients_from_indices(&self, indices: &[usize]) -> Result<ElementCoefficients<T>> {
        let mut r = Vec::with_capacity(indices.len());
        let mut t = Vec::with_capacity(indices.len());
        for (m, &i) in indices.iter().enumerate() {
            let (ri, ti) = self.entries.get(i).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "element {m}: table index {i} out of range ({} entries)",
                    self.entries.len()
                ))
            })?;
            r.push(*ri);
            t.push(*ti);
        }
        ElementCoefficients::new(r, t)
    }

    /// Snaps every element to its nearest reachable state.
    pub fn quantize(&self, coeffs: &ElementCoefficients<T>) -> (Vec<usize>, ElementCoefficients<T>) {
        let idx: Vec<usize> = coeffs
            .reflection()
            .iter()
            .zip(coeffs.transmission())
            .map(|(&r, &t)| self.nearest(r, t))
            .collect();
        let snapped = self
            .coefficients_from_indices(&idx)
            .expect("indices come from the table and entries are passive");
        (idx, snapped)
    }
}

/// Whether elements tune `r` and `t` independently or pick from a table.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ControlMode<T> {
    #[default]
    Independent,
    CoupledPin(CoefficientTable<T>),
}

impl<T: Scalar> ControlMode<T> {
    pub fn apply(&self, coeffs: ElementCoefficients<T>) -> ElementCoefficients<T> {
        match self {
            ControlMode::Independent => coeffs,
            ControlMode::CoupledPin(table) => table.quantize(&coeffs).1,
        }
    }
}
