use crate::Scalar;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses; the
    /// nodes are computed in `f64` and converted.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0_f64; n];
        let mut weights = vec![0.0_f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    /// Integrates `f` over `[a, b]` with the rule mapped onto `n_panels`
    /// equal panels.
    pub fn integrate_panels<V, F>(&self, a: T, b: T, n_panels: usize, mut f: F) -> V
    where
        V: Copy + std::ops::Add<Output = V> + std::ops::Mul<T, Output = V> + num_traits::Zero,
        F: FnMut(T) -> V,
    {
        let n_panels = n_panels.max(1);
        let h = (b - a) / T::from_usize_lossy(n_panels);
        let half = h / T::lit(2.0);
        let mut panel_sums = Vec::with_capacity(n_panels);
        for p in 0..n_panels {
            let mid = a + h * (T::from_usize_lossy(p) + T::lit(0.5));
            let mut s = V::zero();
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s = s + f(mid + half * *x) * *w;
            }
            panel_sums.push(s * half);
        }
        super::pairwise_sum(&panel_sums)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 8, 16] {
            let gl = GaussLegendre::<f64>::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // an n-point rule integrates degree 2n-1 exactly
        let gl = GaussLegendre::<f64>::new(4);
        let v: f64 = gl.integrate_panels(0.0, 2.0, 1, |x| x.powi(7));
        assert!((v - 2f64.powi(8) / 8.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integral_with_panels() {
        let gl = GaussLegendre::<f64>::new(8);
        let v: f64 = gl.integrate_panels(0.0, 100.0, 60, |x| x.cos());
        assert!((v - 100f64.sin()).abs() < 1e-12);
    }
}
