use ndarray::Array2;
use num_complex::Complex;

use crate::geometry::{Position3D, SurfaceGeometry, Wavelength};
use crate::hardware::FREE_SPACE_IMPEDANCE;
use crate::numeric::linalg::{condition_number, hermitian_is_psd, Lu};
use crate::numeric::pairwise_sum;
use crate::scalar::cis;
use crate::{Error, Result, Scalar};

/// Linear port model of the surface and the receivers.
///
/// Ports `0..N` are surface elements, ports `N..N+M` are receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct PortNetwork<T> {
    z: Array2<Complex<T>>,
    source_voltages: Vec<Complex<T>>,
    element_loads: Vec<Complex<T>>,
    receiver_loads: Vec<Complex<T>>,
}

fn check_load<T: Scalar>(what: &str, loads: &[Complex<T>], offset: usize) -> Result<()> {
    for (i, l) in loads.iter().enumerate() {
        if !(l.re.is_finite() && l.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("{what} {i}: non-finite load")));
        }
        if l.re < T::zero() {
            return Err(Error::ActiveElement { element: offset + i, reason: format!("load resistance {} < 0", l.re) });
        }
    }
    Ok(())
}

impl<T: Scalar> PortNetwork<T> {
    pub fn new(
        z: Array2<Complex<T>>,
        source_voltages: Vec<Complex<T>>,
        element_loads: Vec<Complex<T>>,
        receiver_loads: Vec<Complex<T>>,
    ) -> Result<Self> {
        let n = element_loads.len() + receiver_loads.len();
        if z.dim() != (n, n) {
            return Err(Error::LengthMismatch { what: "impedance matrix rows and columns", expected: n, got: z.nrows().max(z.ncols()) });
        }
        if source_voltages.len() != n {
            return Err(Error::LengthMismatch { what: "source voltages", expected: n, got: source_voltages.len() });
        }
        if z.iter().chain(&source_voltages).any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("impedance matrix and voltages must be finite".into()));
        }
        check_load("element", &element_loads, 0)?;
        check_load("receiver", &receiver_loads, element_loads.len())?;

        let tol = T::validation_tol();
        let scale = z.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        for p in 0..n {
            for q in p + 1..n {
                let dev = (z[[p, q]] - z[[q, p]]).norm();
                if dev > tol * scale {
                    return Err(Error::NonReciprocal { p, q, deviation: dev.to_f64_lossy() });
                }
            }
        }
        let herm = Array2::from_shape_fn((n, n), |(p, q)| (z[[p, q]] + z[[q, p]].conj()) * T::lit(0.5));
        let shift = tol * scale.max(T::one());
        if !hermitian_is_psd(&herm, shift) {
            return Err(Error::NonPassiveNetwork { threshold: -shift.to_f64_lossy() });
        }
        Ok(PortNetwork { z, source_voltages, element_loads, receiver_loads })
    }

    pub fn z(&self) -> &Array2<Complex<T>> {
        &self.z
    }

    pub fn source_voltages(&self) -> &[Complex<T>] {
        &self.source_voltages
    }

    pub fn element_loads(&self) -> &[Complex<T>] {
        &self.element_loads
    }

    pub fn receiver_loads(&self) -> &[Complex<T>] {
        &self.receiver_loads
    }

    pub fn element_count(&self) -> usize {
        self.element_loads.len()
    }

    pub fn receiver_count(&self) -> usize {
        self.receiver_loads.len()
    }

    pub fn with_source_voltages(self, v: Vec<Complex<T>>) -> Result<Self> {
        Self::new(self.z, v, self.element_loads, self.receiver_loads)
    }

    pub fn with_element_loads(self, loads: Vec<Complex<T>>) -> Result<Self> {
        Self::new(self.z, self.source_voltages, loads, self.receiver_loads)
    }

    pub fn with_receiver_loads(self, loads: Vec<Complex<T>>) -> Result<Self> {
        Self::new(self.z, self.source_voltages, self.element_loads, loads)
    }
}

/// Mutual impedance of two Hertzian dipoles of length `ell` at distance `d`:
/// `j·η0·k·ℓ²/(4π)·e^{-jkd}/d`.
pub fn coupling_impedance<T: Scalar>(d: T, wavelength: Wavelength<T>, ell: T) -> Complex<T> {
    let k = wavelength.k();
    let eta = T::lit(FREE_SPACE_IMPEDANCE);
    Complex::new(T::zero(), eta * k * ell * ell / (T::lit(4.0) * T::PI())) * cis(-k * d) / d
}

/// Network over the element centers and the receiver positions with the
/// dipole coupling kernel.
///
/// `self_impedance` defaults to the radiation resistance `η0(kℓ)²/(4π)` of
/// the same dipole, `dipole_length` to `λ/8`. Source voltages start at zero,
/// element loads as short circuits and receiver loads conjugate-matched to
/// the self impedance.
pub fn build_port_network<T: Scalar>(
    geometry: &SurfaceGeometry<T>,
    rx_positions: &[Position3D<T>],
    wavelength: Wavelength<T>,
    self_impedance: Option<Complex<T>>,
    dipole_length: Option<T>,
) -> Result<PortNetwork<T>> {
    let ell = dipole_length.unwrap_or(wavelength.meters() / T::lit(8.0));
    if !(ell > T::zero()) || !ell.is_finite() {
        return Err(Error::InvalidArgument(format!("dipole length must be positive, got {ell}")));
    }
    let k = wavelength.k();
    let zs = self_impedance.unwrap_or_else(|| {
        Complex::new(T::lit(FREE_SPACE_IMPEDANCE) * (k * ell).powi(2) / (T::lit(4.0) * T::PI()), T::zero())
    });
    let ports: Vec<Position3D<T>> = geometry.centers().into_iter().chain(rx_positions.iter().copied()).collect();
    let n = ports.len();
    let mut z = Array2::from_elem((n, n), zs);
    for p in 0..n {
        for q in p + 1..n {
            let d = ports[p].distance(&ports[q]);
            if d == T::zero() {
                return Err(Error::SingularCoupling { p, q });
            }
            let zpq = coupling_impedance(d, wavelength, ell);
            z[[p, q]] = zpq;
            z[[q, p]] = zpq;
        }
    }
    let zero = Complex::new(T::zero(), T::zero());
    PortNetwork::new(
        z,
        vec![zero; n],
        vec![zero; geometry.element_count()],
        vec![zs.conj(); rx_positions.len()],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSolution<T> {
    pub currents: Vec<Complex<T>>,
    /// Time-averaged power in each receiver load, W.
    pub received_power: Vec<T>,
    /// `½·Re Σ V·I*`, W.
    pub source_power: T,
    pub condition: T,
}

/// Solves `(Z + diag(loads))·I = V` and reports the power delivered to each
/// receiver load, `½|I|²·Re Z_L`.
pub fn equivalent_circuit_power<T: Scalar>(net: &PortNetwork<T>) -> Result<CircuitSolution<T>> {
    let mut a = net.z.clone();
    for (i, l) in net.element_loads.iter().chain(&net.receiver_loads).enumerate() {
        a[[i, i]] = a[[i, i]] + *l;
    }
    let lu = Lu::factor(&a);
    let condition = condition_number(&a, &lu);
    if !(condition <= T::lit(T::MAX_CONDITION)) {
        return Err(Error::Resonance { condition: condition.to_f64_lossy() });
    }
    let currents = lu.solve(&net.source_voltages);
    let half = T::lit(0.5);
    let ne = net.element_count();
    let received_power = net
        .receiver_loads
        .iter()
        .enumerate()
        .map(|(i, l)| half * currents[ne + i].norm_sqr() * l.re)
        .collect();
    let vi: Vec<T> = net.source_voltages.iter().zip(&currents).map(|(v, i)| (v * i.conj()).re).collect();
    let source_power = half * pairwise_sum(&vi);
    Ok(CircuitSolution { currents, received_power, source_power, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w() -> Wavelength<f64> {
        Wavelength::new(0.01).unwrap()
    }

    #[test]
    fn kernel_is_reciprocal_and_decays() {
        let g = SurfaceGeometry::new(1, 1, 0.005, 0.005, Position3D::origin()).unwrap();
        let rx = [Position3D::new(0.3, 0.1, -0.2)];
        let a = build_port_network(&g, &rx, w(), None, None).unwrap();
        assert_eq!(a.z()[[0, 1]], a.z()[[1, 0]]);
        let far = build_port_network(&g, &[Position3D::new(1e9, 0.0, -1.0)], w(), None, None).unwrap();
        assert!(far.z()[[0, 1]].norm() < 1e-9);
    }

    #[test]
    fn kernel_at_one_wavelength() {
        let lambda = w().meters();
        let ell = lambda / 8.0;
        let z = coupling_impedance(lambda, w(), ell);
        let oracle = FREE_SPACE_IMPEDANCE * w().k() * ell * ell / (4.0 * std::f64::consts::PI * lambda);
        assert!((z.norm() - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn coincident_ports() {
        let g = SurfaceGeometry::new(1, 1, 0.005, 0.005, Position3D::origin()).unwrap();
        assert!(matches!(
            build_port_network(&g, &[Position3D::origin()], w(), None, None),
            Err(Error::SingularCoupling { p: 0, q: 1 })
        ));
    }

    #[test]
    fn uncoupled_receiver_gets_nothing() {
        let zs = C::new(50.0, 10.0);
        let z = Array2::from_shape_vec((2, 2), vec![zs, C::new(0.0, 0.0), C::new(0.0, 0.0), zs]).unwrap();
        let net = PortNetwork::new(z, vec![C::new(1.0, 0.0), C::new(0.0, 0.0)], vec![C::new(0.0, 0.0)], vec![zs.conj()])
            .unwrap();
        assert_eq!(equivalent_circuit_power(&net).unwrap().received_power, vec![0.0]);
    }

    #[test]
    fn conjugate_match_delivers_maximum_power() {
        // T-network: source impedance Zs in series, then a shunt arm Zs
        let zs = C::new(73.0, 42.5);
        let v = C::new(3.0, -1.0);
        let z = Array2::from_shape_vec((2, 2), vec![zs, zs, zs, zs * 2.0]).unwrap();
        let net = PortNetwork::new(z, vec![v, C::new(0.0, 0.0)], vec![C::new(0.0, 0.0)], vec![zs.conj()]).unwrap();
        let p = equivalent_circuit_power(&net).unwrap().received_power[0];
        let oracle = v.norm_sqr() / (8.0 * zs.re);
        assert!((p - oracle).abs() < 1e-10 * oracle);
    }

    #[test]
    fn three_port_matches_dense_oracle() {
        let z = Array2::from_shape_vec(
            (3, 3),
            vec![
                C::new(50.0, 5.0), C::new(10.0, -3.0), C::new(0.0, 0.0),
                C::new(10.0, -3.0), C::new(60.0, 0.0), C::new(8.0, 2.0),
                C::new(0.0, 0.0), C::new(8.0, 2.0), C::new(40.0, -7.0),
            ],
        )
        .unwrap();
        let v = vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
        let loads = [C::new(0.0, 12.0), C::new(5.0, 0.0), C::new(40.0, 7.0)];
        let net = PortNetwork::new(z.clone(), v.clone(), loads[..2].to_vec(), loads[2..].to_vec()).unwrap();
        let sol = equivalent_circuit_power(&net).unwrap();
        let a = DMatrix::from_fn(3, 3, |i, j| z[[i, j]] + if i == j { loads[i] } else { C::new(0.0, 0.0) });
        let x = a.lu().solve(&DVector::from_vec(v)).unwrap();
        for i in 0..3 {
            assert!((sol.currents[i] - x[i]).norm() < 1e-10 * x[i].norm().max(1e-12));
        }
        let p = 0.5 * x[2].norm_sqr() * 40.0;
        assert!((sol.received_power[0] - p).abs() < 1e-10 * p);
    }

    #[test]
    fn validation() {
        let zs = C::new(50.0, 0.0);
        let asym = Array2::from_shape_vec((2, 2), vec![zs, C::new(1.0, 0.0), C::new(2.0, 0.0), zs]).unwrap();
        let zero = C::new(0.0, 0.0);
        assert!(matches!(
            PortNetwork::new(asym, vec![zero; 2], vec![zero], vec![zero]),
            Err(Error::NonReciprocal { p: 0, q: 1, .. })
        ));
        let active = Array2::from_shape_vec((2, 2), vec![zs, C::new(80.0, 0.0), C::new(80.0, 0.0), zs]).unwrap();
        assert!(matches!(
            PortNetwork::new(active, vec![zero; 2], vec![zero], vec![zero]),
            Err(Error::NonPassiveNetwork { .. })
        ));
    }

    #[test]
    fn resonance_reported() {
        let z = Array2::from_shape_vec((2, 2), vec![C::new(0.0, 5.0), C::new(0.0, 5.0), C::new(0.0, 5.0), C::new(0.0, 5.0)])
            .unwrap();
        let zero = C::new(0.0, 0.0);
        let net = PortNetwork::new(z, vec![C::new(1.0, 0.0), zero], vec![zero], vec![zero]).unwrap();
        assert!(matches!(equivalent_circuit_power(&net), Err(Error::Resonance { .. })));
    }

    #[test]
    fn random_passive_networks_conserve_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let (ne, nr) = (rng.gen_range(1..6), rng.gen_range(1..4));
            let n = ne + nr;
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-5.0..5.0));
            let r = &a * a.transpose();
            let x = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-20.0..20.0));
            let x = (&x + x.transpose()) * 0.5;
            let z = Array2::from_shape_fn((n, n), |(i, j)| C::new(r[(i, j)], x[(i, j)]));
            let v = (0..n).map(|i| if i < ne { C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { C::new(0.0, 0.0) }).collect();
            let el = (0..ne).map(|_| C::new(rng.gen_range(0.0..10.0), rng.gen_range(-30.0..30.0))).collect();
            let rl = (0..nr).map(|_| C::new(rng.gen_range(0.1..100.0), rng.gen_range(-30.0..30.0))).collect();
            let sol = equivalent_circuit_power(&PortNetwork::new(z, v, el, rl).unwrap()).unwrap();
            let total: f64 = sol.received_power.iter().sum();
            assert!(total <= sol.source_power * (1.0 + 1e-9) + 1e-15);
        }
    }
}
