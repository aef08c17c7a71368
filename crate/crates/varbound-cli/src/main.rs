//! Command-line front end: single-point bound evaluation (`compute`),
//! (theta, phi) sweeps to CSV (`sweep`), randomized verification (`fuzz`),
//! and multi-observable queries (`multi`).
//!
//! Exit codes: 0 ok, 1 fuzz failures, 2 configuration error, 3 degenerate
//! variance, 4 orthogonality violation, 5 internal numerical error.

mod config;
mod point;
mod row;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use varbound::error::Error;
use varbound::harness::{run_fuzz, FuzzConfig};
use varbound::hilbert::{self, Observable, PureState, UnitCoeff};
use varbound::multi::{
    multi_bounds, multi_bounds_orthogonal, tightest_coefficients, MultiBoundResult, MultiObsSpec,
    SearchGoal, UpperVariant,
};
use varbound::systems::{build, spin1_jz, su11_kz, SystemName};

use config::{BaselineFlags, MultiConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "varbound", version, about = "Variance-sum uncertainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound at a single (theta, phi) point; JSON to stdout.
    Compute {
        #[arg(long)]
        system: String,
        /// Angle in radians.
        #[arg(long)]
        theta: f64,
        /// Angle in radians.
        #[arg(long)]
        phi: f64,
        /// Gram-Schmidt-repair the companion state when it is not orthogonal.
        #[arg(long)]
        orthogonalize: bool,
        /// Per-mode Fock cutoff for the truncated systems.
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a (theta, phi) grid sweep from a JSON config; CSV out.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's outputPath; stdout if neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized verification harness; JSON report out.
    Fuzz {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the multi-observable bounds from a JSON spec; JSON out.
    Multi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::DegenerateVariance { .. } => 3,
            Error::NotOrthogonal { .. } => 4,
            Error::DimensionMismatch { .. }
            | Error::DimTooSmall { .. }
            | Error::TooFewVectors { .. }
            | Error::CutoffTooSmall { .. }
            | Error::EmptyInput => 2,
            _ => 5,
        };
        Self { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self { code: 2, message: format!("io error: {err}") }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let obj = json!({ "error": e.message, "code": e.code });
            eprintln!("{obj}");
            ExitCode::from(e.code)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid JSON in {}: {e}", path.display())))
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Compute { system, theta, phi, orthogonalize, cutoff, out } => {
            let name = SystemName::parse(&system)
                .ok_or_else(|| CliError::config(format!("unknown system {system:?}")))?;
            let built = build(name, cutoff)?;
            let row = point::evaluate_point(
                &built,
                theta,
                phi,
                &[1, 2, 3, 4],
                &BaselineFlags::default(),
                orthogonalize,
                true,
            )?;
            let mut text = serde_json::to_string_pretty(&row::row_to_json(&row))
                .expect("row serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Sweep { config, out } => {
            let cfg: SweepConfig = read_json(&config)?;
            let name = cfg.validate().map_err(CliError::config)?;
            let built = build(name, cfg.cutoff)?;
            let families = cfg.family_list();

            let mut output = String::new();
            output.push_str(&row::csv_header(&families, &cfg.baselines));
            output.push('\n');
            for theta in cfg.theta_grid.values() {
                for phi in cfg.phi_grid.values() {
                    let r = point::evaluate_point(
                        &built,
                        theta,
                        phi,
                        &families,
                        &cfg.baselines,
                        cfg.orthogonalize,
                        false,
                    )?;
                    output.push_str(&row::csv_row(&r, &families, &cfg.baselines));
                    output.push('\n');
                }
            }
            let target = out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
            emit(&target, &output)?;
            Ok(0)
        }
        Command::Fuzz { config, seed, out } => {
            let mut cfg: FuzzConfig = match config {
                Some(path) => read_json(&path)?,
                None => FuzzConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_fuzz(&cfg)?;
            let mut text =
                serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(if report.total_failures() > 0 { 1 } else { 0 })
        }
        Command::Multi { config, out } => {
            let cfg: MultiConfig = read_json(&config)?;
            let result = run_multi(&cfg)?;
            let mut text = serde_json::to_string_pretty(&result).expect("serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(0)
        }
    }
}

fn parse_goal(cfg: &MultiConfig) -> Result<SearchGoal, CliError> {
    match cfg.goal.as_deref() {
        None | Some("max_lower") => Ok(SearchGoal::MaxLower),
        Some("min_upper") => Ok(SearchGoal::MinUpper),
        Some(other) => Err(CliError::config(format!("goal: unknown value {other:?}"))),
    }
}

fn parse_variant(cfg: &MultiConfig) -> Result<UpperVariant, CliError> {
    match cfg.upper_variant.as_deref() {
        None | Some("max_std") => Ok(UpperVariant::MaxStd),
        Some("min_std") => Ok(UpperVariant::MinStd),
        Some(other) => Err(CliError::config(format!("upperVariant: unknown value {other:?}"))),
    }
}

fn run_multi(cfg: &MultiConfig) -> Result<serde_json::Value, CliError> {
    let name = SystemName::parse(&cfg.system)
        .ok_or_else(|| CliError::config(format!("unknown system {:?}", cfg.system)))?;
    let built = build(name, cfg.cutoff)?;
    let (psi, printed_perp) = built.state_pair(cfg.theta, cfg.phi);

    let observables: Vec<Observable> = cfg
        .observables
        .iter()
        .map(|token| match token.as_str() {
            "a" => Ok(built.a.clone()),
            "b" => Ok(built.b.clone()),
            "aux" => match name {
                SystemName::Spin1 => Ok(spin1_jz()),
                SystemName::Su11 => su11_kz(built.cutoff.unwrap_or(4)).map_err(CliError::from),
                SystemName::NumberQuadrature => {
                    Err(CliError::config("observables: no aux operator for number_quadrature"))
                }
            },
            other => Err(CliError::config(format!("observables: unknown token {other:?}"))),
        })
        .collect::<Result<_, _>>()?;

    let perp: Option<PureState> = if cfg.use_orthogonal {
        if cfg.orthogonalize {
            Some(hilbert::gram_schmidt_orthogonalize(&printed_perp, &psi)?)
        } else {
            let overlap = hilbert::orthogonality_check(&psi, &printed_perp)?;
            if overlap > 1e-10 {
                return Err(Error::NotOrthogonal { overlap }.into());
            }
            Some(printed_perp)
        }
    } else {
        None
    };

    let variant = parse_variant(cfg)?;
    let (spec, result): (MultiObsSpec, MultiBoundResult) = if cfg.search {
        tightest_coefficients(&observables, &psi, perp.as_ref(), parse_goal(cfg)?)?
    } else {
        let labels = cfg.coefficients.as_ref().ok_or_else(|| {
            CliError::config("coefficients is required unless search is true")
        })?;
        if labels.len() != observables.len() {
            return Err(CliError::config(format!(
                "coefficients: expected {} entries, got {}",
                observables.len(),
                labels.len()
            )));
        }
        let coeffs: Vec<UnitCoeff> = labels
            .iter()
            .map(|l| {
                UnitCoeff::parse(l)
                    .ok_or_else(|| CliError::config(format!("coefficients: bad value {l:?}")))
            })
            .collect::<Result<_, _>>()?;
        let spec = MultiObsSpec::new(observables, coeffs)?;
        let result = match &perp {
            Some(p) => multi_bounds_orthogonal(&spec, &psi, p, variant)?,
            None => multi_bounds(&spec, &psi)?,
        };
        (spec, result)
    };

    Ok(json!({
        "system": built.name.label(),
        "theta": cfg.theta,
        "phi": cfg.phi,
        "coefficients": spec.coefficients().iter().map(|c| c.label()).collect::<Vec<_>>(),
        "lower": result.lower,
        "upper": result.upper,
        "usedOrthogonal": result.used_orthogonal,
        "fPerp": result.f_perp,
        "gPerp": result.g_perp,
        "stds": result.moments.stds,
        "combinedDev": result.moments.combined_dev,
        "gParam": result.moments.g_param,
        "crossSum": result.moments.cross_sum,
        "varianceSum": result.variance_sum(),
    }))
}
