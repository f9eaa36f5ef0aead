//! Minimum-error probabilities, Fano-inequality lower bounds, and per-scenario reports.
//!
//! Fano's inequality reads `f(p) >= rhs` with `f(p) = H_bin(p) + p log2(N - 1)`.
//! `f` is concave on `[0, 1]`, rises from 0 to its maximum `log2 N` at
//! `p = (N - 1)/N`, then falls to `log2(N - 1)` at `p = 1`, so the admissible
//! error probabilities form an interval whose lower end is found by bisection
//! on the rising branch.

use num_complex::Complex64;

use crate::ensembles::{
    symmetric_coherent_with, symmetric_qubits, two_qubit_pair, Ensemble, Truncation,
};
use crate::error::{Error, Result};
use crate::infotheory::{
    binary_entropy, conditional_entropy, holevo_chi, prior_entropy, ZERO_PROB,
};
use crate::measurement::{
    cond_table, helstrom_projective, square_root_measurement, CondTable, Pom,
};
use crate::poisson::{spread, PoissonPmf};

pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_BISECTIONS: usize = 200;
/// Slack allowed when comparing computed bounds against each other.
pub const ORDER_TOL: f64 = 1e-9;
/// Allowed gap between the numerical and closed-form diagonal-regime error probabilities.
pub const DIAGONAL_REGIME_TOL: f64 = 1e-4;

const FEASIBILITY_SLACK: f64 = 1e-12;

/// `H_bin(p) + p log2(n - 1)`.
pub fn fano_function(p: f64, n: usize) -> f64 {
    let h = binary_entropy(p.clamp(0.0, 1.0)).unwrap_or(0.0);
    if n > 2 {
        h + p * ((n - 1) as f64).log2()
    } else {
        h
    }
}

/// Solutions of `fano_function(p, n) = rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoSolution {
    /// Smallest admissible error probability, in `[0, (n-1)/n]`.
    pub lower_root: f64,
    /// Largest admissible error probability, when it is below one.
    pub upper_root: Option<f64>,
    pub rhs: f64,
    pub n: usize,
    /// `false` when `rhs` exceeds `log2 n` and no error probability satisfies the bound.
    pub feasible: bool,
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let below = g(mid) < 0.0;
        if below == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_TOL && g(lo).abs().min(g(hi).abs()) <= ROOT_TOL {
            break;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Solves `H_bin(p) + p log2(n - 1) = rhs` for the lower (and, if present, upper) root.
pub fn fano_lower_root(rhs: f64, n: usize) -> Result<FanoSolution> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    if !rhs.is_finite() {
        return Err(Error::OutOfRange {
            name: "rhs",
            value: rhs,
        });
    }
    let peak = (n - 1) as f64 / n as f64;
    let f_max = (n as f64).log2();
    let f_one = if n > 2 { ((n - 1) as f64).log2() } else { 0.0 };
    let mut sol = FanoSolution {
        lower_root: 0.0,
        upper_root: None,
        rhs,
        n,
        feasible: true,
    };
    // Non-positive rhs (including round-off just below zero) admits every p.
    if rhs <= 0.0 {
        return Ok(sol);
    }
    if rhs > f_max + FEASIBILITY_SLACK {
        sol.lower_root = peak;
        sol.feasible = false;
        return Ok(sol);
    }
    if rhs >= f_max {
        sol.lower_root = peak;
        sol.upper_root = Some(peak);
        return Ok(sol);
    }
    let g = |p: f64| fano_function(p, n) - rhs;
    sol.lower_root = bisect(g, 0.0, peak, true);
    if rhs > f_one {
        sol.upper_root = Some(bisect(g, peak, 1.0, false));
    }
    Ok(sol)
}

/// `(1 - sqrt(1 - 4 p0 p1 |overlap|^2)) / 2`
pub fn helstrom_bound(p0: f64, overlap: impl Into<Complex64>) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::OutOfRange {
            name: "p0",
            value: p0,
        });
    }
    let ov = overlap.into().norm();
    if ov.is_nan() || ov > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            name: "overlap",
            value: ov,
        });
    }
    let x = (4.0 * p0 * (1.0 - p0) * ov.min(1.0).powi(2)).min(1.0);
    // (1 - s)/2 == x / (2 (1 + s)) without the cancellation for small x
    Ok(x / (2.0 * (1.0 + (1.0 - x).sqrt())))
}

/// `1 - sum_i p_i P(i|i)` when outcome `j` is read as the guess "state `j`".
pub fn error_probability(t: &CondTable) -> Result<f64> {
    if t.n_states() != t.n_outcomes() {
        return Err(Error::ShapeMismatch(t.n_states(), t.n_outcomes()));
    }
    let correct: f64 = (0..t.n_states()).map(|i| t.joint(i, i)).sum();
    Ok((1.0 - correct).clamp(0.0, 1.0))
}

/// Fano bound with `H(i|j)` evaluated for the given measurement.
pub fn fano_bound_from_measurement(e: &Ensemble, m: &Pom) -> Result<FanoSolution> {
    let table = cond_table(e, m)?;
    fano_lower_root(conditional_entropy(&table), e.len())
}

/// Measurement-independent Fano bound with `H(i|j)` replaced by `H(i) - chi`.
pub fn fano_holevo_bound(e: &Ensemble) -> Result<FanoSolution> {
    let h_prior: f64 = e
        .priors()
        .iter()
        .filter(|p| **p >= ZERO_PROB)
        .map(|p| -p * p.log2())
        .sum();
    fano_lower_root(h_prior - holevo_chi(e)?, e.len())
}

/// Bounds obtained by replacing `H_bin(p)` with its maximum 1:
/// `p >= (rhs - 1) / log2(n - 1)`, clamped below at zero.
pub fn weak_fano_bounds(rhs1: f64, rhs2: f64, n: usize) -> Result<(f64, f64)> {
    if n <= 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let denom = ((n - 1) as f64).log2();
    let weak = |rhs: f64| ((rhs - 1.0) / denom).max(0.0);
    Ok((weak(rhs1), weak(rhs2)))
}

/// `|p_bound - p_min| / p_min`, undefined when the minimum error is zero.
pub fn relative_difference(p_bound: f64, p_min: f64) -> Option<f64> {
    (p_min >= ZERO_PROB).then(|| (p_bound - p_min).abs() / p_min)
}

/// Whether the average coherent-state density operator is effectively diagonal:
/// `N` at least the number of Fock levels carrying non-negligible Poisson weight.
pub fn in_diagonal_regime(n: usize, mu: f64, tail_eps: f64) -> Result<bool> {
    Ok(n >= spread(mu, tail_eps)?)
}

/// Minimum error probability of `N` symmetric coherent states when their average
/// density operator is diagonal: `1 - (sum_m sqrt(P(mu, m)))^2 / N` over the
/// retained (renormalized) Fock levels.
pub fn diagonal_regime_error_probability(n: usize, mu: f64, trunc: &Truncation) -> Result<f64> {
    let n_max = trunc.level(mu)?;
    let (mut root_sum, mut mass) = (0.0, 0.0);
    for (_, ln_p) in PoissonPmf::new(mu)?.take(n_max + 1) {
        root_sum += (0.5 * ln_p).exp();
        mass += ln_p.exp();
    }
    Ok(1.0 - root_sum * root_sum / mass / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    TwoQubit,
    SymQubit,
    SymCoherent,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TwoQubit => "two-qubit",
            Self::SymQubit => "sym-qubit",
            Self::SymCoherent => "sym-coherent",
        }
    }
}

/// One parameter point of one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioParams {
    /// Two equiprobable qubit states at angle `theta`.
    TwoQubit {
        theta: f64,
    },
    SymQubit {
        n: usize,
    },
    SymCoherent {
        n: usize,
        mu: f64,
        trunc: Truncation,
    },
}

/// Ensemble and its minimum-error measurement.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub ensemble: Ensemble,
    pub pom: Pom,
}

impl ScenarioParams {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Self::TwoQubit { .. } => ScenarioKind::TwoQubit,
            Self::SymQubit { .. } => ScenarioKind::SymQubit,
            Self::SymCoherent { .. } => ScenarioKind::SymCoherent,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::TwoQubit { .. } => 2,
            Self::SymQubit { n } | Self::SymCoherent { n, .. } => n,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Self::TwoQubit { theta } => Some(theta),
            _ => None,
        }
    }

    pub fn mu(&self) -> Option<f64> {
        match *self {
            Self::SymCoherent { mu, .. } => Some(mu),
            _ => None,
        }
    }

    /// Builds the ensemble and the measurement that minimizes its error probability.
    pub fn prepare(&self) -> Result<Prepared> {
        let ensemble = match *self {
            Self::TwoQubit { theta } => two_qubit_pair(theta, 0.5)?,
            Self::SymQubit { n } => symmetric_qubits(n)?,
            Self::SymCoherent { n, mu, trunc } => symmetric_coherent_with(n, mu, &trunc)?,
        };
        let pom = match self {
            Self::TwoQubit { .. } => helstrom_projective(&ensemble)?,
            _ => square_root_measurement(&ensemble)?,
        };
        Ok(Prepared { ensemble, pom })
    }
}

/// Everything computed for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub scenario: ScenarioKind,
    pub n: usize,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    pub n_max: Option<usize>,
    pub p_err_min: f64,
    /// Fano lower root with `H(i|j)` of the minimum-error measurement.
    pub p_fano1: f64,
    /// Fano lower root with `H(i) - chi`.
    pub p_fano2: f64,
    pub p_weak1: Option<f64>,
    pub p_weak2: Option<f64>,
    pub chi: f64,
    pub h_cond: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub diag_regime: Option<bool>,
    pub p_err_diag: Option<f64>,
}

pub fn build_report(params: &ScenarioParams) -> Result<BoundReport> {
    let Prepared { ensemble, pom } = params.prepare()?;
    let table = cond_table(&ensemble, &pom)?;
    let n = ensemble.len();
    let p_err_min = error_probability(&table)?;
    let h_cond = conditional_entropy(&table);
    let chi = holevo_chi(&ensemble)?;
    let fano1 = fano_lower_root(h_cond, n)?;
    let fano2 = fano_lower_root(prior_entropy(&table) - chi, n)?;
    if !fano1.feasible || !fano2.feasible {
        return Err(Error::InvariantViolation(format!(
            "Fano inequality infeasible (rhs {} / {})",
            fano1.rhs, fano2.rhs
        )));
    }
    let (p_weak1, p_weak2) = match weak_fano_bounds(fano1.rhs, fano2.rhs, n) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };
    let (n_max, diag_regime, p_err_diag) = match *params {
        ScenarioParams::SymCoherent { n, mu, trunc } => {
            let regime = in_diagonal_regime(n, mu, trunc.tail_eps)?;
            let closed = if regime {
                Some(diagonal_regime_error_probability(n, mu, &trunc)?)
            } else {
                None
            };
            (Some(ensemble.dim() - 1), Some(regime), closed)
        }
        _ => (None, None, None),
    };
    Ok(BoundReport {
        scenario: params.kind(),
        n,
        theta: params.theta(),
        mu: params.mu(),
        n_max,
        p_err_min,
        p_fano1: fano1.lower_root,
        p_fano2: fano2.lower_root,
        p_weak1,
        p_weak2,
        chi,
        h_cond,
        d1: relative_difference(fano1.lower_root, p_err_min),
        d2: relative_difference(fano2.lower_root, p_err_min),
        diag_regime,
        p_err_diag,
    })
}

impl BoundReport {
    /// Re-checks the ordering invariants between the computed quantities.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        let probs = [
            Some(self.p_err_min),
            Some(self.p_fano1),
            Some(self.p_fano2),
            self.p_weak1,
            self.p_weak2,
        ];
        if probs.iter().flatten().any(|p| !(0.0..=1.0).contains(p)) {
            return fail(format!("probability outside [0, 1] in {self:?}"));
        }
        if self.p_fano1 > self.p_err_min + ORDER_TOL {
            return fail(format!(
                "p_fano1 {} exceeds p_err_min {}",
                self.p_fano1, self.p_err_min
            ));
        }
        if self.p_fano2 > self.p_err_min + ORDER_TOL {
            return fail(format!(
                "p_fano2 {} exceeds p_err_min {}",
                self.p_fano2, self.p_err_min
            ));
        }
        if self.p_fano2 > self.p_fano1 + ORDER_TOL {
            return fail(format!(
                "p_fano2 {} exceeds p_fano1 {}",
                self.p_fano2, self.p_fano1
            ));
        }
        if let (Some(w1), Some(w2)) = (self.p_weak1, self.p_weak2) {
            if w1 > self.p_fano1 + ORDER_TOL || w2 > self.p_fano2 + ORDER_TOL {
                return fail(format!("weak bounds ({w1}, {w2}) exceed Fano roots"));
            }
        }
        if let (Some(d1), Some(d2)) = (self.d1, self.d2) {
            if d2 < d1 - ORDER_TOL {
                return fail(format!("d2 {d2} below d1 {d1}"));
            }
        }
        if let (Some(true), Some(closed)) = (self.diag_regime, self.p_err_diag) {
            if (self.p_err_min - closed).abs() > DIAGONAL_REGIME_TOL {
                return fail(format!(
                    "diagonal-regime p_err {} differs from closed form {closed}",
                    self.p_err_min
                ));
            }
        }
        Ok(())
    }
}
