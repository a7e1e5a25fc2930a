//! Small dense complex linear algebra for the port-network solver.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use crate::Scalar;

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Array2<Complex<T>>,
    perm: Vec<usize>,
    singular: bool,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(a: &Array2<Complex<T>>) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[[k, k]].norm();
            for i in k + 1..n {
                let v = lu[[i, k]].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == T::zero() {
                singular = true;
                continue;
            }
            if piv != k {
                for c in 0..n {
                    lu.swap([k, c], [piv, c]);
                }
                perm.swap(k, piv);
            }
            let d = lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] / d;
                lu[[i, k]] = f;
                for c in k + 1..n {
                    let u = lu[[k, c]];
                    lu[[i, c]] = lu[[i, c]] - f * u;
                }
            }
        }
        Lu { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solves `A·x = b`. Meaningless when [`Lu::is_singular`].
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.lu.nrows();
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for c in 0..i {
                s = s - self.lu[[i, c]] * x[c];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for c in i + 1..n {
                s = s - self.lu[[i, c]] * x[c];
            }
            x[i] = s / self.lu[[i, i]];
        }
        x
    }

    pub fn inverse(&self) -> Array2<Complex<T>> {
        let n = self.lu.nrows();
        let mut inv = Array2::zeros((n, n));
        let mut e = vec![Complex::zero(); n];
        for c in 0..n {
            e.iter_mut().for_each(|v| *v = Complex::zero());
            e[c] = Complex::new(T::one(), T::zero());
            for (r, v) in self.solve(&e).into_iter().enumerate() {
                inv[[r, c]] = v;
            }
        }
        inv
    }
}

/// Maximum absolute column sum.
pub fn norm1<T: Scalar>(a: &Array2<Complex<T>>) -> T {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|v| v.norm()).fold(T::zero(), |s, x| s + x))
        .fold(T::zero(), T::max)
}

/// One-norm condition number; infinite for a singular matrix.
pub fn condition_number<T: Scalar>(a: &Array2<Complex<T>>, lu: &Lu<T>) -> T {
    if lu.is_singular() {
        return T::infinity();
    }
    let inv = lu.inverse();
    let c = norm1(a) * norm1(&inv);
    if c.is_finite() {
        c
    } else {
        T::infinity()
    }
}

/// True when the Hermitian matrix `h` has no eigenvalue below `-shift`,
/// tested by attempting a Cholesky factorization of `h + shift·I`.
pub fn hermitian_is_psd<T: Scalar>(h: &Array2<Complex<T>>, shift: T) -> bool {
    let n = h.nrows();
    let mut l: Array2<Complex<T>> = Array2::zeros((n, n));
    for i in 0..n {
        for c in 0..=i {
            let mut s = h[[i, c]];
            if i == c {
                s = s + Complex::new(shift, T::zero());
            }
            for k in 0..c {
                s = s - l[[i, k]] * l[[c, k]].conj();
            }
            if i == c {
                if !(s.re > T::zero()) {
                    return false;
                }
                l[[i, i]] = Complex::new(s.re.sqrt(), T::zero());
            } else {
                l[[i, c]] = s / l[[c, c]];
            }
        }
    }
    true
}
