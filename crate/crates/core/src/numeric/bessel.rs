//! Bessel function of the first kind, order zero.

use crate::Scalar;

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J0(x)` to roughly 1e-14 absolute accuracy.
///
/// Power series below 8, Miller's normalized backward recurrence up to 25
/// and the Hankel asymptotic expansion beyond that. Evaluated in `f64`.
pub fn j0<T: Scalar>(x: T) -> T {
    T::lit(j0_f64(x.to_f64_lossy()))
}

pub fn j0_f64(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_LIMIT {
        series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> f64 {
    // start well above x so the seed error has decayed by J0's order
    let mut n = (x as usize + 40) & !1;
    if n < 2 {
        n = 2;
    }
    let mut next = 0.0; // J_{n+1}
    let mut cur = 1e-300; // J_n
    let mut norm = 0.0;
    let mut j0 = 0.0;
    while n > 0 {
        let prev = (2.0 * n as f64 / x) * cur - next; // J_{n-1}
        next = cur;
        cur = prev;
        n -= 1;
        if n % 2 == 0 && n > 0 {
            norm += 2.0 * cur;
        }
        if n == 0 {
            j0 = cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j0;
    j0 / norm
}

fn asymptotic(x: f64) -> f64 {
    let z8 = 8.0 * x;
    let mut term = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for n in 1..200 {
        let m = (2 * n - 1) as f64;
        term *= -(m * m) / (n as f64 * z8);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // sign alternates every second term within each of P and Q
        let k = n / 2;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        if n % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if last < 1e-18 {
            break;
        }
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
