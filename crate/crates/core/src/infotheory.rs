//! Shannon and von Neumann entropies in bits.

use crate::ensembles::{average_density, Ensemble};
use crate::error::{Error, Result};
use crate::measurement::CondTable;
use crate::numerics::{herm_eig, CMatrix};
use crate::poisson::PoissonPmf;

/// Probabilities below this are exact zeros inside entropy sums.
pub const ZERO_PROB: f64 = 1e-15;

const SUM_TOL: f64 = 1e-12;

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidTable(format!(
                "not a distribution: {probs:?}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidTable(format!("distribution sums to {total}")));
        }
        Ok(Self(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
fn surprisal_term(p: f64) -> f64 {
    if p < ZERO_PROB {
        0.0
    } else {
        -p * p.log2()
    }
}

pub fn shannon_entropy(p: &ProbVector) -> f64 {
    p.0.iter().copied().map(surprisal_term).sum()
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
        });
    }
    Ok(surprisal_term(p) + surprisal_term(1.0 - p))
}

/// `H(i|j) = -sum_{i,j} p_i P(j|i) log2[p_i P(j|i) / q_j]`
pub fn conditional_entropy(t: &CondTable) -> f64 {
    let q = t.marginals();
    let mut h = 0.0;
    for i in 0..t.n_states() {
        for (j, &qj) in q.iter().enumerate() {
            let joint = t.joint(i, j);
            if joint >= ZERO_PROB {
                h -= joint * (joint / qj).log2();
            }
        }
    }
    h.max(0.0)
}

/// `I(i:j)` from the joint distribution, `sum p(i,j) log2[p(i,j) / (p_i q_j)]`.
///
/// Evaluated directly rather than as `H(i) - H(i|j)` so that the identity
/// between the two is a real check.
pub fn mutual_information(t: &CondTable) -> f64 {
    let q = t.marginals();
    let p = t.priors();
    let mut info = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            let joint = t.joint(i, j);
            if joint >= ZERO_PROB {
                info += joint * (joint / (pi * qj)).log2();
            }
        }
    }
    info
}

/// Entropy of the prior distribution `H(i)`.
pub fn prior_entropy(t: &CondTable) -> f64 {
    t.priors().iter().copied().map(surprisal_term).sum()
}

/// `S(rho) = -Tr[rho log2 rho]`.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    let eig = herm_eig(rho).map_err(|e| Error::NotDensityOperator(e.to_string()))?;
    if eig.min_value() < -1e-10 {
        return Err(Error::NotDensityOperator(format!(
            "negative eigenvalue {:e}",
            eig.min_value()
        )));
    }
    let tr: f64 = eig.values.iter().sum();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::NotDensityOperator(format!("trace {tr}")));
    }
    Ok(eig.values.iter().copied().map(surprisal_term).sum())
}

/// Holevo information `chi = S(rho) - sum_i p_i S(rho_i)`.
///
/// Every ensemble in this crate is made of pure states, so the second term is zero.
pub fn holevo_chi(e: &Ensemble) -> Result<f64> {
    von_neumann_entropy(&average_density(e))
}

/// Entropy of the Poisson distribution with mean `mu`, summed until the
/// cumulative mass reaches `1 - tail_eps`.
pub fn poisson_entropy(mu: f64, tail_eps: f64) -> Result<f64> {
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "tail_eps",
            value: tail_eps,
        });
    }
    let mut cumulative = 0.0;
    let mut h = 0.0;
    for (n, ln_p) in PoissonPmf::new(mu)? {
        let p = ln_p.exp();
        cumulative += p;
        h -= p * ln_p / std::f64::consts::LN_2;
        if cumulative >= 1.0 - tail_eps || (n as f64 > mu && p < tail_eps * 1e-6) {
            break;
        }
    }
    Ok(h)
}

/// Large-mean approximation `log2 sqrt(2 pi e mu)`.
pub fn poisson_entropy_asymptotic(mu: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * mu).log2()
}
