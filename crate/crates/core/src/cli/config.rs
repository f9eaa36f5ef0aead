//! Command-line arguments and their validation into a [`RunConfig`].

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{ScenarioKind, ScenarioParams};
use crate::ensembles::{Truncation, DEFAULT_TAIL_EPS};
use crate::error::{Error, Result};

pub const DEFAULT_THETA_STEPS: usize = 50;
pub const DEFAULT_MU: [f64; 3] = [0.05, 0.1, 0.2];
pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "qdiscrim",
    version,
    about = "Error probabilities and Fano bounds for pure-state discrimination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    TwoQubit,
    SymQubit,
    SymCoherent,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::TwoQubit => ScenarioKind::TwoQubit,
            ScenarioArg::SymQubit => ScenarioKind::SymQubit,
            ScenarioArg::SymCoherent => ScenarioKind::SymCoherent,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two equiprobable qubit states tilted by theta from the computational basis.
    TwoQubit(GridArgs),
    /// N symmetric qubit states with the square-root measurement.
    SymQubit(GridArgs),
    /// N symmetric coherent states with the square-root measurement.
    SymCoherent(GridArgs),
    /// Compare analytic error probabilities with simulated trials.
    McCheck(McArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Lower end of the half-open theta range.
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Upper end of the half-open theta range.
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Number of theta points.
    #[arg(long)]
    pub theta_steps: Option<usize>,
    /// Explicit theta values; overrides the range.
    #[arg(long)]
    pub theta: Vec<f64>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Mean photon number (repeatable).
    #[arg(long)]
    pub mu: Vec<f64>,
    /// Poisson mass allowed outside the Fock truncation.
    #[arg(long)]
    pub tail_eps: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sample from a table with permuted outcomes (negative control).
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
    pub corrupt: bool,
}

/// A validated run: the scenario points in emission order plus output settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub points: Vec<ScenarioParams>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub mc: Option<McSettings>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(format!("{name} must be finite, got {x}")))
    }
}

fn theta_grid(g: &GridArgs) -> Result<Vec<f64>> {
    let check = |t: f64| -> Result<f64> {
        let t = finite("theta", t)?;
        if !(0.0..=FRAC_PI_4).contains(&t) {
            return Err(config_err(format!("theta {t} outside [0, pi/4]")));
        }
        Ok(t)
    };
    if !g.theta.is_empty() {
        if g.theta_min.is_some() || g.theta_max.is_some() || g.theta_steps.is_some() {
            return Err(config_err("--theta cannot be combined with a theta range"));
        }
        return g.theta.iter().map(|&t| check(t)).collect();
    }
    let lo = check(g.theta_min.unwrap_or(0.0))?;
    let hi = check(g.theta_max.unwrap_or(FRAC_PI_4))?;
    let steps = g.theta_steps.unwrap_or(DEFAULT_THETA_STEPS);
    if steps == 0 {
        return Err(config_err("--theta-steps must be at least 1"));
    }
    if hi < lo {
        return Err(config_err(format!("theta range [{lo}, {hi}) is empty")));
    }
    let h = (hi - lo) / steps as f64;
    Ok((0..steps).map(|k| lo + k as f64 * h).collect())
}

fn n_range(g: &GridArgs, least: usize, default_max: usize) -> Result<Vec<usize>> {
    let lo = g.n_min.unwrap_or(least);
    let hi = g.n_max.unwrap_or(default_max.max(lo));
    if lo < least {
        return Err(config_err(format!(
            "--n-min must be at least {least}, got {lo}"
        )));
    }
    if hi < lo {
        return Err(config_err(format!("N range {lo}..={hi} is empty")));
    }
    Ok((lo..=hi).collect())
}

fn reject_unused(g: &GridArgs, kind: ScenarioKind) -> Result<()> {
    let theta = !g.theta.is_empty()
        || g.theta_min.is_some()
        || g.theta_max.is_some()
        || g.theta_steps.is_some();
    let n = g.n_min.is_some() || g.n_max.is_some();
    let coherent = !g.mu.is_empty() || g.tail_eps.is_some();
    let unused = match kind {
        ScenarioKind::TwoQubit => n || coherent,
        ScenarioKind::SymQubit => theta || coherent,
        ScenarioKind::SymCoherent => theta,
    };
    if unused {
        return Err(config_err(format!(
            "flag not applicable to {}",
            kind.as_str()
        )));
    }
    Ok(())
}

/// Expands the grid flags of one scenario into parameter points.
pub fn grid_points(kind: ScenarioKind, g: &GridArgs) -> Result<Vec<ScenarioParams>> {
    reject_unused(g, kind)?;
    match kind {
        ScenarioKind::TwoQubit => Ok(theta_grid(g)?
            .into_iter()
            .map(|theta| ScenarioParams::TwoQubit { theta })
            .collect()),
        ScenarioKind::SymQubit => Ok(n_range(g, 3, 10)?
            .into_iter()
            .map(|n| ScenarioParams::SymQubit { n })
            .collect()),
        ScenarioKind::SymCoherent => {
            let tail_eps = finite("tail-eps", g.tail_eps.unwrap_or(DEFAULT_TAIL_EPS))?;
            if !(tail_eps > 0.0 && tail_eps <= 1e-6) {
                return Err(config_err(format!(
                    "--tail-eps must lie in (0, 1e-6], got {tail_eps}"
                )));
            }
            let trunc = Truncation::with_tail(tail_eps);
            let mus = if g.mu.is_empty() {
                DEFAULT_MU.to_vec()
            } else {
                g.mu.clone()
            };
            for &mu in &mus {
                if finite("mu", mu)? < 0.0 {
                    return Err(config_err(format!("mu must be non-negative, got {mu}")));
                }
            }
            let ns = n_range(g, 2, 16)?;
            Ok(mus
                .iter()
                .flat_map(|&mu| {
                    ns.iter()
                        .map(move |&n| ScenarioParams::SymCoherent { n, mu, trunc })
                })
                .collect())
        }
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let (scenario, grid, mc) = match &cli.command {
            Command::TwoQubit(g) => (ScenarioKind::TwoQubit, g, None),
            Command::SymQubit(g) => (ScenarioKind::SymQubit, g, None),
            Command::SymCoherent(g) => (ScenarioKind::SymCoherent, g, None),
            Command::McCheck(m) => {
                if m.trials == 0 {
                    return Err(config_err("--trials must be at least 1"));
                }
                let mc = McSettings {
                    trials: m.trials,
                    seed: m.seed,
                    corrupt: m.corrupt,
                };
                (m.scenario.into(), &m.grid, Some(mc))
            }
        };
        Ok(Self {
            scenario,
            points: grid_points(scenario, grid)?,
            format: cli.format,
            out: cli.out.clone(),
            mc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("qdiscrim").chain(args.iter().copied()))
            .map_err(|e| Error::Config(e.to_string()))?;
        RunConfig::from_cli(&cli)
    }

    #[test]
    fn default_theta_grid_is_half_open() {
        let cfg = parse(&["two-qubit"]).unwrap();
        assert_eq!(cfg.points.len(), DEFAULT_THETA_STEPS);
        assert_eq!(cfg.points[0].theta(), Some(0.0));
        assert!(cfg.points.iter().all(|p| p.theta().unwrap() < FRAC_PI_4));
    }

    #[test]
    fn explicit_values_and_ranges() {
        let cfg = parse(&["two-qubit", "--theta", "0.1", "--theta", "0.2"]).unwrap();
        assert_eq!(cfg.points.len(), 2);
        let cfg = parse(&["sym-qubit", "--n-min", "4", "--n-max", "6"]).unwrap();
        assert_eq!(
            cfg.points.iter().map(|p| p.n()).collect::<Vec<_>>(),
            vec![4, 5, 6]
        );
        let cfg = parse(&[
            "sym-coherent",
            "--n-min",
            "2",
            "--n-max",
            "3",
            "--mu",
            "0.5",
        ])
        .unwrap();
        assert_eq!(cfg.points.len(), 2);
        let cfg = parse(&["sym-coherent", "--n-max", "3"]).unwrap();
        assert_eq!(cfg.points.len(), 6);
    }

    #[test]
    fn boundary_points_are_not_config_errors() {
        assert!(parse(&["two-qubit", "--theta", "0.7853981633974483"]).is_ok());
        assert!(parse(&["sym-coherent", "--mu", "0"]).is_ok());
    }

    #[test]
    fn invalid_configs() {
        assert!(parse(&["sym-qubit", "--n-min", "2"]).is_err());
        assert!(parse(&["sym-qubit", "--n-min", "5", "--n-max", "4"]).is_err());
        assert!(parse(&["two-qubit", "--theta", "1.0"]).is_err());
        assert!(parse(&["two-qubit", "--theta-steps", "0"]).is_err());
        assert!(parse(&["two-qubit", "--theta", "0.1", "--theta-min", "0"]).is_err());
        assert!(parse(&["two-qubit", "--mu", "0.1"]).is_err());
        assert!(parse(&["sym-coherent", "--mu", "-0.1"]).is_err());
        assert!(parse(&["sym-coherent", "--tail-eps", "0.1"]).is_err());
        assert!(parse(&["sym-coherent", "--n-min", "1"]).is_err());
        assert!(parse(&["mc-check", "--scenario", "sym-qubit", "--trials", "0"]).is_err());
        assert!(parse(&["two-qubit", "--format", "xml"]).is_err());
    }

    #[test]
    fn mc_settings() {
        let cfg = parse(&[
            "mc-check",
            "--scenario",
            "two-qubit",
            "--theta",
            "0.5",
            "--seed",
            "7",
            "--format",
            "json",
        ])
        .unwrap();
        assert_eq!(
            cfg.mc,
            Some(McSettings {
                trials: DEFAULT_TRIALS,
                seed: 7,
                corrupt: false
            })
        );
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.scenario, ScenarioKind::TwoQubit);
    }
}
