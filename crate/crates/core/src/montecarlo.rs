//! Empirical error rates from simulated preparation and measurement.
//!
//! Each trial draws a label `i` from the priors and an outcome `j` from
//! `P(.|i)` by inverse-CDF sampling, and counts `j != i`. The generator is
//! ChaCha8 (counter-based); split runs give every worker its own stream of the
//! same seed, so merged counts are reproducible for a fixed worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::error_probability;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::measurement::{cond_table, CondTable, Pom};

pub const RNG_NAME: &str = "chacha8";
/// Empirical and analytic error rates must agree within this many standard errors.
pub const MC_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trials: u64,
    pub errors: u64,
    pub empirical_p_err: f64,
    pub std_err: f64,
}

impl TrialRecord {
    fn from_counts(trials: u64, errors: u64) -> Self {
        let p = errors as f64 / trials as f64;
        Self {
            trials,
            errors,
            empirical_p_err: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `|empirical - analytic| <= MC_SIGMAS * std_err`.
    pub fn agrees_with(&self, analytic: f64) -> bool {
        (self.empirical_p_err - analytic).abs() <= MC_SIGMAS * self.std_err
    }
}

/// Cumulative distributions for the priors and every row of the table.
struct Sampler {
    prior_cdf: Vec<f64>,
    row_cdfs: Vec<Vec<f64>>,
}

fn cdf(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let mut acc = 0.0;
    let mut out: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w.max(0.0) / total;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

impl Sampler {
    fn new(t: &CondTable) -> Self {
        Self {
            prior_cdf: cdf(t.priors()),
            row_cdfs: (0..t.n_states()).map(|i| cdf(t.row(i))).collect(),
        }
    }

    fn count_errors(&self, rng: &mut ChaCha8Rng, trials: u64) -> u64 {
        let mut errors = 0;
        for _ in 0..trials {
            let i = draw(&self.prior_cdf, rng.gen::<f64>());
            let j = draw(&self.row_cdfs[i], rng.gen::<f64>());
            if j != i {
                errors += 1;
            }
        }
        errors
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    Ok(())
}

/// Single-stream simulation from a conditional table.
pub fn simulate_table(t: &CondTable, trials: u64, seed: u64) -> Result<TrialRecord> {
    check_trials(trials)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let errors = Sampler::new(t).count_errors(&mut rng, trials);
    Ok(TrialRecord::from_counts(trials, errors))
}

/// Single-stream simulation of measuring `e` with `m`.
pub fn simulate(e: &Ensemble, m: &Pom, trials: u64, seed: u64) -> Result<TrialRecord> {
    simulate_table(&cond_table(e, m)?, trials, seed)
}

/// Splits the trials over `workers` streams derived from `seed` and runs them in parallel.
pub fn simulate_parallel(
    t: &CondTable,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<TrialRecord> {
    check_trials(trials)?;
    let workers = workers.max(1) as u64;
    let sampler = Sampler::new(t);
    let errors = (0..workers)
        .into_par_iter()
        .map(|w| {
            let share = trials / workers + u64::from(w < trials % workers);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w + 1);
            sampler.count_errors(&mut rng, share)
        })
        .sum();
    Ok(TrialRecord::from_counts(trials, errors))
}

/// Analytic versus simulated error probability for one scenario point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCheck {
    pub analytic: f64,
    pub record: TrialRecord,
    pub pass: bool,
}

/// Compares the analytic error probability of `analytic_table` with a simulation of `sampled_table`.
///
/// The two tables are the same in normal use; passing a different one is how
/// negative controls are run.
pub fn check_tables(
    analytic_table: &CondTable,
    sampled_table: &CondTable,
    trials: u64,
    seed: u64,
) -> Result<McCheck> {
    let analytic = error_probability(analytic_table)?;
    let record = simulate_table(sampled_table, trials, seed)?;
    Ok(McCheck {
        analytic,
        record,
        pass: record.agrees_with(analytic),
    })
}
