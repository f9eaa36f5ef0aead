//! Pure-state ensembles: two qubit states, symmetric qubit states, and
//! symmetric coherent states in a truncated Fock basis.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{inner, norm_sqr, CMatrix};
use crate::poisson::{truncation_level, PoissonPmf};

pub const NORM_TOL: f64 = 1e-9;
pub const PRIOR_SUM_TOL: f64 = 1e-12;
/// States whose overlap modulus reaches `1 - DISTINGUISHABILITY_TOL` are treated as identical.
pub const DISTINGUISHABILITY_TOL: f64 = 1e-13;

pub const DEFAULT_TAIL_EPS: f64 = 1e-12;
pub const DEFAULT_TRUNCATION_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Qubit,
    /// Fock levels `0..=n_max`.
    Fock {
        n_max: usize,
    },
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Qubit => 2,
            Basis::Fock { n_max } => n_max + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    basis: Basis,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimMismatch(basis.dim(), amplitudes.len()));
        }
        let norm = norm_sqr(&amplitudes);
        if norm.is_nan() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidEnsemble(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self { amplitudes, basis })
    }

    pub fn qubit(a0: f64, a1: f64) -> Result<Self> {
        Self::new(
            vec![Complex64::new(a0, 0.0), Complex64::new(a1, 0.0)],
            Basis::Qubit,
        )
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn overlap(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|psi><psi|`
    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes)
    }

    /// `<n>` in the Fock basis, `<1|psi>` weight for qubits.
    pub fn mean_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(m, a)| m as f64 * a.norm_sqr())
            .sum()
    }
}

/// Prepared states with their prior probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<PureState>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<PureState>, priors: Vec<f64>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidEnsemble(format!(
                "need at least two states, got {}",
                states.len()
            )));
        }
        if priors.len() != states.len() {
            return Err(Error::DimMismatch(states.len(), priors.len()));
        }
        if priors.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidEnsemble("negative prior".into()));
        }
        let total: f64 = priors.iter().sum();
        if total.is_nan() || (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        let basis = states[0].basis;
        if let Some(bad) = states.iter().find(|s| s.basis != basis) {
            return Err(Error::InvalidEnsemble(format!(
                "mixed bases {basis:?} and {:?}",
                bad.basis
            )));
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                let ov = states[i].overlap(&states[j]).norm();
                if ov >= 1.0 - DISTINGUISHABILITY_TOL {
                    return Err(Error::Indistinguishable(i, j, ov));
                }
            }
        }
        Ok(Self { states, priors })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn basis(&self) -> Basis {
        self.states[0].basis
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn is_equiprobable(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.priors.iter().all(|p| (p - u).abs() <= PRIOR_SUM_TOL)
    }
}

/// `cos(theta)|0> + sin(theta)|1>` and `sin(theta)|0> + cos(theta)|1>` with priors `(p0, 1 - p0)`.
pub fn two_qubit_pair(theta: f64, p0: f64) -> Result<Ensemble> {
    if !(0.0..=FRAC_PI_4).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
        });
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::OutOfRange {
            name: "p0",
            value: p0,
        });
    }
    let (s, c) = theta.sin_cos();
    Ensemble::new(
        vec![PureState::qubit(c, s)?, PureState::qubit(s, c)?],
        vec![p0, 1.0 - p0],
    )
}

/// `N` equiprobable states `cos(i pi/N)|0> + sin(i pi/N)|1>`.
pub fn symmetric_qubits(n: usize) -> Result<Ensemble> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let states = (0..n)
        .map(|i| {
            let (s, c) = (i as f64 * PI / n as f64).sin_cos();
            PureState::qubit(c, s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(states, vec![1.0 / n as f64; n])
}

/// The rotation `exp(-i (2 pi / N) Y / 2)` that steps symmetric qubit state `i` to `i + 1`.
///
/// Its `N`-th power is `-I`: the family closes up to a global phase.
pub fn qubit_rotation(n: usize) -> CMatrix {
    let (s, c) = (PI / n as f64).sin_cos();
    let mut u = CMatrix::identity(2).scaled(c);
    u[(0, 1)] = Complex64::new(-s, 0.0);
    u[(1, 0)] = Complex64::new(s, 0.0);
    u
}

/// Fock-space truncation settings for coherent states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Poisson mass allowed to fall outside the retained levels.
    pub tail_eps: f64,
    /// Largest admissible `n_max`.
    pub cap: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            tail_eps: DEFAULT_TAIL_EPS,
            cap: DEFAULT_TRUNCATION_CAP,
        }
    }
}

impl Truncation {
    pub fn with_tail(tail_eps: f64) -> Self {
        Self {
            tail_eps,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tail_eps > 0.0 && self.tail_eps <= 1e-6) {
            return Err(Error::OutOfRange {
                name: "tail_eps",
                value: self.tail_eps,
            });
        }
        Ok(())
    }

    /// Common `n_max` for mean photon number `mu`.
    pub fn level(&self, mu: f64) -> Result<usize> {
        self.validate()?;
        let level = truncation_level(mu, self.tail_eps)?;
        if level > self.cap {
            return Err(Error::TruncationOverflow {
                level,
                cap: self.cap,
            });
        }
        Ok(level)
    }
}

/// `N` equiprobable coherent states `|sqrt(mu) e^{2 pi i k / N}>`, truncated and renormalized.
pub fn symmetric_coherent(n: usize, mu: f64, tail_eps: f64) -> Result<Ensemble> {
    symmetric_coherent_with(n, mu, &Truncation::with_tail(tail_eps))
}

pub fn symmetric_coherent_with(n: usize, mu: f64, trunc: &Truncation) -> Result<Ensemble> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let n_max = trunc.level(mu)?;
    // |a_m| = sqrt(P(mu, m)); renormalize over the retained levels.
    let moduli: Vec<f64> = PoissonPmf::new(mu)?
        .take(n_max + 1)
        .map(|(_, ln_p)| (0.5 * ln_p).exp())
        .collect();
    let norm = moduli.iter().map(|a| a * a).sum::<f64>().sqrt();
    let basis = Basis::Fock { n_max };
    let step = 2.0 * PI / n as f64;
    let states = (0..n)
        .map(|i| {
            let amps = moduli
                .iter()
                .enumerate()
                .map(|(m, a)| {
                    // reduce the phase index mod N to keep the angle small
                    let k = (i * m) % n;
                    Complex64::from_polar(a / norm, step * k as f64)
                })
                .collect();
            PureState::new(amps, basis)
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(states, vec![1.0 / n as f64; n])
}

/// The phase shift `exp(i 2 pi a^dag a / N)` on Fock levels `0..=n_max`.
pub fn phase_shift(n: usize, n_max: usize) -> CMatrix {
    let step = 2.0 * PI / n as f64;
    let diag: Vec<Complex64> = (0..=n_max)
        .map(|m| Complex64::from_polar(1.0, step * (m % n) as f64))
        .collect();
    let mut u = CMatrix::zeros(n_max + 1);
    for (m, d) in diag.into_iter().enumerate() {
        u[(m, m)] = d;
    }
    u
}

/// `sum_i p_i |psi_i><psi_i|`
pub fn average_density(e: &Ensemble) -> CMatrix {
    let mut rho = CMatrix::zeros(e.dim());
    for (state, &p) in e.states.iter().zip(&e.priors) {
        rho.add_scaled(&state.projector(), p)
            .expect("ensemble states share one dimension");
    }
    rho.hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::herm_eig;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn orthogonal_pair_at_zero_angle() {
        let e = two_qubit_pair(0.0, 0.5).unwrap();
        assert_eq!(e.states()[0].amplitudes()[1].norm(), 0.0);
        assert_eq!(e.states()[0].overlap(&e.states()[1]).norm(), 0.0);
        let rho = average_density(&e);
        assert!(
            rho.max_abs_diff(&CMatrix::from_real_diag(&[0.5, 0.5]))
                .unwrap()
                < 1e-16
        );
    }

    #[test]
    fn identical_pair_is_rejected() {
        let err = two_qubit_pair(FRAC_PI_4, 0.5).unwrap_err();
        assert!(matches!(err, Error::Indistinguishable(0, 1, _)));
    }

    #[test]
    fn two_qubit_overlap_is_sin_two_theta() {
        let e = two_qubit_pair(FRAC_PI_6, 0.5).unwrap();
        let ov = e.states()[0].overlap(&e.states()[1]);
        assert!((ov.re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((ov.re - (2.0 * FRAC_PI_6).sin()).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_parameter_checks() {
        assert!(two_qubit_pair(-0.1, 0.5).is_err());
        assert!(two_qubit_pair(1.0, 0.5).is_err());
        assert!(two_qubit_pair(0.1, 0.0).is_err());
        assert!(two_qubit_pair(0.1, 1.0).is_err());
        assert!(two_qubit_pair(0.1, 0.3).is_ok());
    }

    #[test]
    fn two_qubit_density_spectrum() {
        for k in 0..20 {
            let theta = k as f64 * FRAC_PI_4 / 20.0;
            let e = two_qubit_pair(theta, 0.5).unwrap();
            let lam = (2.0 * theta).sin();
            let eig = herm_eig(&average_density(&e)).unwrap();
            assert!((eig.values[0] - (1.0 - lam) / 2.0).abs() < 1e-10);
            assert!((eig.values[1] - (1.0 + lam) / 2.0).abs() < 1e-10);
        }
        let eig = herm_eig(&average_density(&two_qubit_pair(FRAC_PI_6, 0.5).unwrap())).unwrap();
        assert!((eig.values[1] - (1.0 + FRAC_PI_3.sin()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_qubit_states() {
        let e = symmetric_qubits(2).unwrap();
        assert!(e.states()[1].amplitudes()[0].norm() < 1e-16);
        let e = symmetric_qubits(4).unwrap();
        let h = 0.5f64.sqrt();
        assert!((e.states()[1].amplitudes()[0].re - h).abs() < 1e-15);
        assert!((e.states()[1].amplitudes()[1].re - h).abs() < 1e-15);
        assert!(symmetric_qubits(1).is_err());
    }

    #[test]
    fn symmetric_qubits_are_maximally_mixed() {
        for n in 3..12 {
            let rho = average_density(&symmetric_qubits(n).unwrap());
            assert!(rho.max_abs_diff(&CMatrix::identity(2).scaled(0.5)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn qubit_rotation_steps_states_up_to_phase() {
        for n in 2..10 {
            let e = symmetric_qubits(n).unwrap();
            let u = qubit_rotation(n);
            for i in 0..n {
                let next = u.apply(e.states()[i].amplitudes()).unwrap();
                let target = e.states()[(i + 1) % n].amplitudes();
                let ov = inner(&next, target).norm();
                assert!((ov - 1.0).abs() < 1e-12, "n={n} i={i}");
                if i + 1 < n {
                    for (a, b) in next.iter().zip(target) {
                        assert!((a - b).norm() < 1e-12);
                    }
                }
            }
            let mut power = CMatrix::identity(2);
            for _ in 0..n {
                power = power.matmul(&u).unwrap();
            }
            assert!(
                power
                    .max_abs_diff(&CMatrix::identity(2).scaled(-1.0))
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn coherent_pair_overlap() {
        let e = symmetric_coherent(2, 0.5, 1e-12).unwrap();
        let ov = e.states()[0].overlap(&e.states()[1]);
        assert!((ov.re - (-1.0f64).exp()).abs() < 1e-11);
        assert!(ov.im.abs() < 1e-14);
    }

    #[test]
    fn coherent_mean_photon_number() {
        let e = symmetric_coherent(4, 1.0, 1e-12).unwrap();
        for s in e.states() {
            assert!((s.mean_number() - 1.0).abs() < 1e-6);
            assert!((norm_sqr(s.amplitudes()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_limit_is_rejected() {
        let err = symmetric_coherent(2, 1e-14, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Indistinguishable(..)));
    }

    #[test]
    fn coherent_parameter_checks() {
        assert!(symmetric_coherent(1, 0.5, 1e-12).is_err());
        assert!(symmetric_coherent(2, 0.0, 1e-12).is_err());
        assert!(symmetric_coherent(2, -1.0, 1e-12).is_err());
        assert!(symmetric_coherent(2, 0.5, 1e-3).is_err());
        assert!(symmetric_coherent(2, 0.5, 0.0).is_err());
        let tight = Truncation {
            tail_eps: 1e-12,
            cap: 10,
        };
        assert!(matches!(
            symmetric_coherent_with(2, 5.0, &tight),
            Err(Error::TruncationOverflow { cap: 10, .. })
        ));
    }

    #[test]
    fn odd_coherent_families_are_accepted() {
        for n in [3, 5, 7] {
            assert_eq!(symmetric_coherent(n, 0.3, 1e-12).unwrap().len(), n);
        }
    }

    #[test]
    fn phase_shift_steps_coherent_states() {
        for (n, mu) in [(2, 0.5), (3, 1.0), (8, 0.2), (5, 3.0)] {
            let e = symmetric_coherent(n, mu, 1e-12).unwrap();
            let n_max = e.dim() - 1;
            let u = phase_shift(n, n_max);
            for i in 0..n {
                let next = u.apply(e.states()[i].amplitudes()).unwrap();
                for (a, b) in next.iter().zip(e.states()[(i + 1) % n].amplitudes()) {
                    assert!((a - b).norm() < 1e-8);
                }
            }
            let mut power = CMatrix::identity(n_max + 1);
            for _ in 0..n {
                power = power.matmul(&u).unwrap();
            }
            assert!(power.max_abs_diff(&CMatrix::identity(n_max + 1)).unwrap() < 1e-8);
        }
    }

    #[test]
    fn coherent_density_has_mod_n_block_structure() {
        let n = 8;
        let rho = average_density(&symmetric_coherent(n, 0.5, 1e-12).unwrap());
        for r in 0..rho.dim() {
            for c in 0..rho.dim() {
                if r.abs_diff(c) % n != 0 {
                    assert!(rho[(r, c)].norm() < 1e-9, "({r},{c})");
                }
            }
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
        let eig = herm_eig(&rho).unwrap();
        assert!(eig.min_value() >= -1e-12);
    }

    #[test]
    fn ensemble_validation() {
        let a = PureState::qubit(1.0, 0.0).unwrap();
        let b = PureState::qubit(0.0, 1.0).unwrap();
        assert!(Ensemble::new(vec![a.clone()], vec![1.0]).is_err());
        assert!(Ensemble::new(vec![a.clone(), b.clone()], vec![0.5, 0.6]).is_err());
        assert!(Ensemble::new(vec![a.clone(), b.clone()], vec![1.5, -0.5]).is_err());
        assert!(Ensemble::new(vec![a.clone(), b.clone()], vec![0.5]).is_err());
        assert!(PureState::qubit(1.0, 1.0).is_err());
        let fock =
            PureState::new(vec![Complex64::new(1.0, 0.0)], Basis::Fock { n_max: 0 }).unwrap();
        assert!(Ensemble::new(vec![a, fock], vec![0.5, 0.5]).is_err());
        let e = Ensemble::new(
            vec![PureState::qubit(1.0, 0.0).unwrap(), b],
            vec![0.25, 0.75],
        )
        .unwrap();
        assert!(!e.is_equiprobable());
    }
}
