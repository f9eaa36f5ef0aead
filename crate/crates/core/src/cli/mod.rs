//! The `qdiscrim` command line: parameter sweeps written as CSV or JSON.
//!
//! Exit codes: 0 when every row succeeds, 2 when any row carries an error or a
//! Monte-Carlo check fails, 1 for invalid arguments or unwritable output.

pub mod config;
pub mod output;
pub mod runner;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;

use crate::error::{Error, Result};

pub use config::{Cli, Format, McSettings, RunConfig};
pub use output::{format_sig, round_sig, Cell, Row};
pub use runner::{
    run_bounds, run_montecarlo_check, run_sym_coherent, run_sym_qubit, run_two_qubit, MC_COLUMNS,
    REPORT_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ROW_FAILURE: i32 = 2;

/// Rows for a validated config and whether all of them succeeded.
pub fn execute(cfg: &RunConfig) -> (Vec<Row>, &'static [&'static str], bool) {
    match cfg.mc {
        Some(mc) => {
            let results = run_montecarlo_check(cfg, mc);
            let ok = results.iter().all(|r| matches!(r, Ok(c) if c.pass));
            let rows = cfg
                .points
                .iter()
                .zip(&results)
                .map(|(p, r)| runner::mc_row(p, mc, r))
                .collect();
            (rows, &MC_COLUMNS, ok)
        }
        None => {
            let results = run_bounds(cfg);
            let ok = results.iter().all(|r| r.is_ok());
            let rows = cfg
                .points
                .iter()
                .zip(&results)
                .map(|(p, r)| runner::report_row(p, r))
                .collect();
            (rows, &REPORT_COLUMNS, ok)
        }
    }
}

fn emit(cfg: &RunConfig, rows: &[Row], header: &[&'static str]) -> Result<()> {
    let sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cfg.format {
        Format::Csv => output::write_csv(rows, header, &mut sink)?,
        Format::Json => output::write_json(rows, &mut sink)?,
    }
    sink.flush()
        .map_err(|e| Error::Config(format!("output: {e}")))
}

/// Parses `args` (program name first), runs, writes the output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("qdiscrim: {e}");
            return EXIT_CONFIG;
        }
    };
    let (rows, header, ok) = execute(&cfg);
    if let Err(e) = emit(&cfg, &rows, header) {
        eprintln!("qdiscrim: {e}");
        return EXIT_CONFIG;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_ROW_FAILURE
    }
}
