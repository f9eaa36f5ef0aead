//! Evaluation of a [`RunConfig`] into output rows.

use rayon::prelude::*;

use crate::bounds::{build_report, BoundReport, ScenarioParams};
use crate::error::{Error, Result};
use crate::measurement::cond_table;
use crate::montecarlo::{check_tables, McCheck, RNG_NAME};

use super::config::{McSettings, RunConfig};
use super::output::{Cell, Row};

pub const REPORT_COLUMNS: [&str; 17] = [
    "scenario",
    "n",
    "theta",
    "mu",
    "n_max",
    "p_err_min",
    "p_fano1",
    "p_fano2",
    "p_weak1",
    "p_weak2",
    "chi",
    "h_cond",
    "d1",
    "d2",
    "diag_regime",
    "p_err_diag",
    "error",
];

pub const MC_COLUMNS: [&str; 13] = [
    "scenario",
    "n",
    "theta",
    "mu",
    "trials",
    "seed",
    "rng",
    "analytic_p_err",
    "empirical_p_err",
    "std_err",
    "errors",
    "pass",
    "error",
];

/// A computed point, or the error it raised.
pub type PointResult<T> = std::result::Result<T, Error>;

/// Builds and re-checks the report for one point.
pub fn evaluate(p: &ScenarioParams) -> Result<BoundReport> {
    let r = build_report(p)?;
    r.check()?;
    Ok(r)
}

/// Every grid point of the run, evaluated in parallel and returned in grid order.
pub fn run_bounds(cfg: &RunConfig) -> Vec<PointResult<BoundReport>> {
    cfg.points.par_iter().map(evaluate).collect()
}

pub fn run_two_qubit(cfg: &RunConfig) -> Vec<PointResult<BoundReport>> {
    run_bounds(cfg)
}

pub fn run_sym_qubit(cfg: &RunConfig) -> Vec<PointResult<BoundReport>> {
    run_bounds(cfg)
}

pub fn run_sym_coherent(cfg: &RunConfig) -> Vec<PointResult<BoundReport>> {
    run_bounds(cfg)
}

/// Analytic against simulated error probability for one point.
pub fn mc_point(p: &ScenarioParams, mc: McSettings) -> Result<McCheck> {
    let prepared = p.prepare()?;
    let table = cond_table(&prepared.ensemble, &prepared.pom)?;
    let sampled = if mc.corrupt {
        table.with_shifted_outcomes(1)
    } else {
        table.clone()
    };
    check_tables(&table, &sampled, mc.trials, mc.seed)
}

/// Monte-Carlo check of every grid point, each with the configured seed on a single stream.
pub fn run_montecarlo_check(cfg: &RunConfig, mc: McSettings) -> Vec<PointResult<McCheck>> {
    cfg.points.par_iter().map(|p| mc_point(p, mc)).collect()
}

fn identity_cells(p: &ScenarioParams) -> [(&'static str, Cell); 4] {
    [
        ("scenario", Cell::Text(Some(p.kind().as_str().to_string()))),
        ("n", Cell::Int(Some(p.n() as u64))),
        ("theta", Cell::Num(p.theta())),
        ("mu", Cell::Num(p.mu())),
    ]
}

pub fn report_row(p: &ScenarioParams, r: &PointResult<BoundReport>) -> Row {
    let mut row: Row = identity_cells(p).into();
    let none = || Cell::Num(None);
    match r {
        Ok(r) => row.extend([
            ("n_max", Cell::Int(r.n_max.map(|v| v as u64))),
            ("p_err_min", Cell::Num(Some(r.p_err_min))),
            ("p_fano1", Cell::Num(Some(r.p_fano1))),
            ("p_fano2", Cell::Num(Some(r.p_fano2))),
            ("p_weak1", Cell::Num(r.p_weak1)),
            ("p_weak2", Cell::Num(r.p_weak2)),
            ("chi", Cell::Num(Some(r.chi))),
            ("h_cond", Cell::Num(Some(r.h_cond))),
            ("d1", Cell::Num(r.d1)),
            ("d2", Cell::Num(r.d2)),
            ("diag_regime", Cell::Flag(r.diag_regime)),
            ("p_err_diag", Cell::Num(r.p_err_diag)),
            ("error", Cell::Text(None)),
        ]),
        Err(e) => {
            row.push(("n_max", Cell::Int(None)));
            for name in &REPORT_COLUMNS[5..14] {
                row.push((name, none()));
            }
            row.push(("diag_regime", Cell::Flag(None)));
            row.push(("p_err_diag", none()));
            row.push(("error", Cell::Text(Some(e.to_string()))));
        }
    }
    row
}

pub fn mc_row(p: &ScenarioParams, mc: McSettings, r: &PointResult<McCheck>) -> Row {
    let mut row: Row = identity_cells(p).into();
    row.extend([
        ("trials", Cell::Int(Some(mc.trials))),
        ("seed", Cell::Int(Some(mc.seed))),
        ("rng", Cell::Text(Some(RNG_NAME.to_string()))),
    ]);
    match r {
        Ok(c) => row.extend([
            ("analytic_p_err", Cell::Num(Some(c.analytic))),
            ("empirical_p_err", Cell::Num(Some(c.record.empirical_p_err))),
            ("std_err", Cell::Num(Some(c.record.std_err))),
            ("errors", Cell::Int(Some(c.record.errors))),
            ("pass", Cell::Flag(Some(c.pass))),
            ("error", Cell::Text(None)),
        ]),
        Err(e) => row.extend([
            ("analytic_p_err", Cell::Num(None)),
            ("empirical_p_err", Cell::Num(None)),
            ("std_err", Cell::Num(None)),
            ("errors", Cell::Int(None)),
            ("pass", Cell::Flag(Some(false))),
            ("error", Cell::Text(Some(e.to_string()))),
        ]),
    }
    row
}
