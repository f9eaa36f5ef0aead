//! Probability-operator measures and the conditional-probability tables they induce.

use crate::ensembles::{average_density, Basis, Ensemble, PRIOR_SUM_TOL};
use crate::error::{Error, Result};
use crate::numerics::{herm_eig, trace_product_real, CMatrix, HermEigen};

pub const POSITIVITY_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const ROW_SUM_TOL: f64 = 1e-9;
const ENTRY_SLACK: f64 = 1e-12;

/// Measurement elements `Pi_j`, one per outcome, with the projector onto the
/// ensemble's support that they resolve.
#[derive(Debug, Clone)]
pub struct Pom {
    elements: Vec<CMatrix>,
    support: CMatrix,
}

/// Diagnostics from [`Pom::check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PomCheck {
    pub min_eigenvalue: f64,
    pub completeness_defect: f64,
}

impl PomCheck {
    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOL && self.completeness_defect <= COMPLETENESS_TOL
    }
}

impl Pom {
    /// Validates positivity and completeness on `support` before accepting.
    pub fn new(elements: Vec<CMatrix>, support: CMatrix) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidMatrix(
                "a POM needs at least one element".into(),
            ));
        }
        if let Some(bad) = elements.iter().find(|e| e.dim() != support.dim()) {
            return Err(Error::DimMismatch(support.dim(), bad.dim()));
        }
        let pom = Self { elements, support };
        let check = pom.check()?;
        if !check.passes() {
            return Err(Error::InvariantViolation(format!(
                "POM min eigenvalue {:e}, completeness defect {:e}",
                check.min_eigenvalue, check.completeness_defect
            )));
        }
        Ok(pom)
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn support(&self) -> &CMatrix {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn check(&self) -> Result<PomCheck> {
        let mut min_eigenvalue = f64::INFINITY;
        let mut total = CMatrix::zeros(self.dim());
        for el in &self.elements {
            min_eigenvalue = min_eigenvalue.min(herm_eig(el)?.min_value());
            total.add_scaled(el, 1.0)?;
        }
        Ok(PomCheck {
            min_eigenvalue,
            completeness_defect: total.max_abs_diff(&self.support)?,
        })
    }
}

fn support_of(rho: &CMatrix) -> Result<(HermEigen, CMatrix)> {
    let eig = herm_eig(rho)?;
    let support = eig.support_projector(eig.default_cutoff());
    Ok((eig, support))
}

/// The optimal von Neumann measurement for two equiprobable qubit states.
///
/// The projectors are the eigenprojectors of `p0 rho_0 - p1 rho_1`: outcome 0
/// on its positive eigenvector, outcome 1 on its negative one. For
/// `cos t|0> + sin t|1>` versus `sin t|0> + cos t|1>` these are `|0><0|` and `|1><1|`.
pub fn helstrom_projective(e: &Ensemble) -> Result<Pom> {
    if e.len() != 2 {
        return Err(Error::UnsupportedEnsemble(format!(
            "projective Helstrom measurement needs 2 states, got {}",
            e.len()
        )));
    }
    if (e.priors()[0] - 0.5).abs() > PRIOR_SUM_TOL {
        return Err(Error::UnsupportedEnsemble(format!(
            "projective Helstrom measurement needs equal priors, got {:?}",
            e.priors()
        )));
    }
    if e.basis() != Basis::Qubit {
        return Err(Error::UnsupportedEnsemble(
            "projective Helstrom measurement is defined on qubits".into(),
        ));
    }
    let mut gamma = e.states()[0].projector().scaled(e.priors()[0]);
    gamma.add_scaled(&e.states()[1].projector(), -e.priors()[1])?;
    let eig = herm_eig(&gamma)?;
    let pi0 = CMatrix::outer(&eig.vector(1));
    let pi1 = CMatrix::outer(&eig.vector(0));
    let (_, support) = support_of(&average_density(e))?;
    Pom::new(vec![pi0, pi1], support)
}

/// `Pi_j = (1/N) rho^{-1/2} |psi_j><psi_j| rho^{-1/2}` using the pseudo-inverse
/// square root of the average density operator.
pub fn square_root_measurement(e: &Ensemble) -> Result<Pom> {
    if !e.is_equiprobable() {
        return Err(Error::UnsupportedEnsemble(format!(
            "square-root measurement needs equal priors, got {:?}",
            e.priors()
        )));
    }
    let rho = average_density(e);
    let (eig, support) = support_of(&rho)?;
    let inv_sqrt = eig.apply_fn(|x| x.powf(-0.5), eig.default_cutoff())?;
    let weight = (1.0 / e.len() as f64).sqrt();
    let elements = e
        .states()
        .iter()
        .map(|s| {
            let v: Vec<_> = inv_sqrt
                .apply(s.amplitudes())?
                .into_iter()
                .map(|z| z * weight)
                .collect();
            Ok(CMatrix::outer(&v))
        })
        .collect::<Result<Vec<_>>>()?;
    Pom::new(elements, support)
}

/// Conditional probabilities `P(j|i)` with priors and outcome marginals `q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondTable {
    p_given: Vec<Vec<f64>>,
    priors: Vec<f64>,
    marginals: Vec<f64>,
}

impl CondTable {
    /// Entries within `1e-12` of `[0, 1]` are clamped; rows must sum to one within `1e-9`.
    pub fn new(p_given: Vec<Vec<f64>>, priors: Vec<f64>) -> Result<Self> {
        if p_given.len() != priors.len() || p_given.is_empty() {
            return Err(Error::InvalidTable(format!(
                "{} rows for {} priors",
                p_given.len(),
                priors.len()
            )));
        }
        let n_out = p_given[0].len();
        let mut rows = Vec::with_capacity(p_given.len());
        for (i, row) in p_given.into_iter().enumerate() {
            if row.len() != n_out {
                return Err(Error::InvalidTable(format!("ragged row {i}")));
            }
            let mut clamped = Vec::with_capacity(n_out);
            for (j, p) in row.into_iter().enumerate() {
                if !(-ENTRY_SLACK..=1.0 + ENTRY_SLACK).contains(&p) {
                    return Err(Error::InvalidTable(format!("P({j}|{i}) = {p}")));
                }
                clamped.push(p.clamp(0.0, 1.0));
            }
            let sum: f64 = clamped.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidTable(format!("row {i} sums to {sum}")));
            }
            rows.push(clamped);
        }
        let total: f64 = priors.iter().sum();
        if priors.iter().any(|p| p.is_nan() || *p < 0.0) || (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidTable(format!("invalid priors {priors:?}")));
        }
        let marginals = (0..n_out)
            .map(|j| rows.iter().zip(&priors).map(|(r, p)| r[j] * p).sum())
            .collect();
        Ok(Self {
            p_given: rows,
            priors,
            marginals,
        })
    }

    pub fn n_states(&self) -> usize {
        self.p_given.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.p_given[0].len()
    }

    /// `P(j|i)`
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p_given[i][j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.p_given[i]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `q_j = sum_i P(j|i) p_i`
    pub fn marginals(&self) -> &[f64] {
        &self.marginals
    }

    /// Joint probability `p_i P(j|i)`.
    pub fn joint(&self, i: usize, j: usize) -> f64 {
        self.priors[i] * self.p_given[i][j]
    }

    /// Relabels outcome `j` as `j + shift (mod n_outcomes)`.
    ///
    /// Exists as a negative control for the Monte-Carlo checks: the shifted
    /// table no longer matches the analytic error probability.
    pub fn with_shifted_outcomes(&self, shift: usize) -> Self {
        let n = self.n_outcomes();
        let rows: Vec<Vec<f64>> = self
            .p_given
            .iter()
            .map(|r| (0..n).map(|j| r[(j + n - shift % n) % n]).collect())
            .collect();
        Self::new(rows, self.priors.clone()).expect("permuting outcomes keeps the table valid")
    }
}

/// `P(j|i) = Tr(Pi_j rho_i)` for every preparation and outcome.
pub fn cond_table(e: &Ensemble, m: &Pom) -> Result<CondTable> {
    if e.dim() != m.dim() {
        return Err(Error::DimMismatch(e.dim(), m.dim()));
    }
    let rows = e
        .states()
        .iter()
        .map(|s| {
            let rho = s.projector();
            m.elements()
                .iter()
                .map(|pi| trace_product_real(pi, &rho))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CondTable::new(rows, e.priors().to_vec())
}
