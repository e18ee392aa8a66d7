//! Command-line front end: `run`, `iterate`, `table` and `hypotheses`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::iteration::{direct_solution, iterate_with, run_grid};
use crate::models::{check_hypotheses, model_by_name, ModelSpec, RunDefaults, MODEL_NAMES};
use crate::report::{convergence_table_with, emit_csv, format_significant, write_profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INSTABILITY: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "scaling-fv",
    about = "Scalar balance-law solver: direct first-order scheme and frozen-source scaling iteration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Direct solve; writes the final profile as `x,q`
    Run(RunArgs),
    /// Scaling iteration; prints the trace and optionally writes the final profile
    Iterate(RunArgs),
    /// Iteration + direct solve + reference; writes the convergence table
    Table(RunArgs),
    /// Sampled check of flux convexity and source regularity
    Hypotheses(HypothesisArgs),
}

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Overrides {
    /// Number of cells on the model domain.
    #[arg(long = "cells")]
    pub n_cells: Option<usize>,
    /// Courant number used to size the time step.
    #[arg(long)]
    pub cfl: Option<f64>,
    /// FORCE-alpha stretching factor (>= 1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Final time.
    #[arg(long = "tfinal")]
    pub t_final: Option<f64>,
    /// Stopping tolerance on successive beta values.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap.
    #[arg(long = "max-iters")]
    pub max_iters: Option<usize>,
    /// Cells of the fine MUSCL-Hancock reference.
    #[arg(long = "ref-cells")]
    pub reference_cells: Option<usize>,
    /// Output file for the profile or table.
    #[arg(long = "out")]
    pub output_path: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, defaults: RunDefaults) -> RunDefaults {
        RunDefaults {
            n_cells: self.n_cells.unwrap_or(defaults.n_cells),
            cfl: self.cfl.unwrap_or(defaults.cfl),
            alpha: self.alpha.unwrap_or(defaults.alpha),
            t_final: self.t_final.unwrap_or(defaults.t_final),
            tol: self.tol.unwrap_or(defaults.tol),
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
            reference_cells: self.reference_cells.unwrap_or(defaults.reference_cells),
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Registered model name.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MODEL_NAMES))]
    model: String,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args)]
struct HypothesisArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MODEL_NAMES))]
    model: String,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    qmin: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    qmax: f64,
    #[arg(long, default_value_t = 401)]
    samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliCommand {
    Run {
        model: String,
        overrides: Overrides,
    },
    Iterate {
        model: String,
        overrides: Overrides,
    },
    Table {
        model: String,
        overrides: Overrides,
    },
    Hypotheses {
        model: String,
        range: (f64, f64),
        samples: usize,
    },
}

/// A rejected command line; the message names the offending token.
#[derive(Debug)]
pub struct UsageError {
    pub message: String,
    /// `--help` / `--version` requests are reported through this type too.
    pub is_help: bool,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for UsageError {}

/// `argv` excludes the program name.
pub fn parse_args<I, S>(argv: I) -> Result<CliCommand, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("scaling-fv"))
        .chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| UsageError {
        is_help: matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ),
        message: e.render().to_string(),
    })?;
    Ok(match cli.command {
        Command::Run(a) => CliCommand::Run {
            model: a.model,
            overrides: a.overrides,
        },
        Command::Iterate(a) => CliCommand::Iterate {
            model: a.model,
            overrides: a.overrides,
        },
        Command::Table(a) => CliCommand::Table {
            model: a.model,
            overrides: a.overrides,
        },
        Command::Hypotheses(a) => CliCommand::Hypotheses {
            model: a.model,
            range: (a.qmin, a.qmax),
            samples: a.samples,
        },
    })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownModel(_) | Error::InvalidParameter(_) | Error::Io(_) => EXIT_USAGE,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_INSTABILITY,
    }
}

fn prepare(model: &str, overrides: &Overrides) -> Result<(ModelSpec, RunDefaults), Error> {
    let spec = model_by_name(model)?;
    let cfg = overrides.apply(spec.defaults);
    cfg.validate()?;
    Ok((spec, cfg))
}

fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> crate::Result<()>,
) -> crate::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)
        }
        None => body(stdout),
    }
}

fn run_command(cmd: &CliCommand, out: &mut dyn Write, diag: &mut dyn Write) -> crate::Result<()> {
    match cmd {
        CliCommand::Run { model, overrides } => {
            let (spec, cfg) = prepare(model, overrides)?;
            let direct = direct_solution(&spec, &cfg)?;
            let grid = run_grid(&spec, &cfg)?;
            with_output(overrides.output_path.as_deref(), out, |w| {
                write_profile(&grid, direct.final_level(), w)
            })
        }
        CliCommand::Iterate { model, overrides } => {
            let (spec, cfg) = prepare(model, overrides)?;
            writeln!(out, "n,beta,change")?;
            let mut io_result = Ok(());
            let trace = iterate_with(&spec, &cfg, |row| {
                let change = row
                    .change
                    .map_or_else(|| "-".to_string(), |e| format_significant(e, 9));
                if io_result.is_ok() {
                    io_result = writeln!(
                        out,
                        "{},{},{}",
                        row.n,
                        format_significant(row.beta, 9),
                        change
                    );
                }
            })?;
            io_result?;
            if let Some(path) = overrides.output_path.as_deref() {
                let grid = run_grid(&spec, &cfg)?;
                with_output(Some(path), out, |w| {
                    write_profile(&grid, trace.final_field.final_level(), w)
                })?;
            }
            trace.ensure_converged()?;
            Ok(())
        }
        CliCommand::Table { model, overrides } => {
            let (spec, cfg) = prepare(model, overrides)?;
            let run = convergence_table_with(&spec, &cfg, |_| {})?;
            with_output(overrides.output_path.as_deref(), out, |w| {
                emit_csv(&run.table, w)
            })?;
            writeln!(
                diag,
                "{}: {} iterations, direct L1 error {}",
                spec.name,
                run.trace.iterations_used,
                format_significant(run.table.err_direct, 9)
            )?;
            run.trace.ensure_converged()?;
            Ok(())
        }
        CliCommand::Hypotheses {
            model,
            range,
            samples,
        } => {
            let spec = model_by_name(model)?;
            let r = check_hypotheses(&spec, *range, *samples)?;
            writeln!(out, "model={}", spec.name)?;
            writeln!(out, "q_range={},{}", range.0, range.1)?;
            writeln!(out, "source_vanishes_at_zero={}", r.source_vanishes_at_zero)?;
            writeln!(
                out,
                "lipschitz_estimate={}",
                format_significant(r.lipschitz_estimate, 9)
            )?;
            writeln!(out, "flux_convexity={:?}", r.flux_convexity)?;
            writeln!(out, "flux_origin_conditions={}", r.flux_origin_conditions)?;
            Ok(())
        }
    }
}

/// Runs `cmd`, writing results to `out` and diagnostics to `diag`, and
/// returns the process exit status.
pub fn execute(cmd: &CliCommand, out: &mut dyn Write, diag: &mut dyn Write) -> i32 {
    match run_command(cmd, out, diag) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_defaults_path() {
        let cmd = parse_args(["table", "--model", "burgers"]).unwrap();
        assert_eq!(
            cmd,
            CliCommand::Table {
                model: "burgers".into(),
                overrides: Overrides::default()
            }
        );
    }

    #[test]
    fn parse_overrides() {
        let cmd = parse_args([
            "iterate", "--model", "traffic", "--cfl", "0.5", "--alpha", "2.0",
        ])
        .unwrap();
        let CliCommand::Iterate { model, overrides } = cmd else {
            panic!("wrong command")
        };
        assert_eq!(model, "traffic");
        assert_eq!(overrides.cfl, Some(0.5));
        assert_eq!(overrides.alpha, Some(2.0));
        assert_eq!(overrides.n_cells, None);
    }

    #[test]
    fn parse_all_flags() {
        let cmd = parse_args([
            "run",
            "--model",
            "advection-reaction",
            "--cells",
            "200",
            "--cfl",
            "0.1",
            "--alpha",
            "3",
            "--tfinal",
            "0.1",
            "--tol",
            "1e-9",
            "--max-iters",
            "50",
            "--ref-cells",
            "2000",
            "--out",
            "p.csv",
        ])
        .unwrap();
        let CliCommand::Run { overrides, .. } = cmd else {
            panic!("wrong command")
        };
        let cfg = overrides.apply(model_by_name("advection-reaction").unwrap().defaults);
        assert_eq!(cfg.n_cells, 200);
        assert_eq!(cfg.max_iters, 50);
        assert_eq!(cfg.reference_cells, 2000);
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(overrides.output_path, Some(PathBuf::from("p.csv")));
    }

    #[test]
    fn parse_errors_name_token() {
        let e = parse_args(["run", "--model", "nosuch"]).unwrap_err();
        assert!(e.message.contains("nosuch"), "{}", e.message);
        let e = parse_args(["run", "--model", "burgers", "--bogus", "1"]).unwrap_err();
        assert!(e.message.contains("--bogus"), "{}", e.message);
        let e = parse_args(["run"]).unwrap_err();
        assert!(e.message.contains("--model"), "{}", e.message);
        assert!(parse_args(["frobnicate"]).is_err());
    }

    #[test]
    fn hypotheses_command() {
        let cmd = parse_args([
            "hypotheses",
            "--model",
            "burgers",
            "--qmin",
            "-2",
            "--qmax",
            "2",
        ])
        .unwrap();
        let mut out = Vec::new();
        let mut diag = Vec::new();
        assert_eq!(execute(&cmd, &mut out, &mut diag), EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("flux_convexity=Convex"));
        assert!(text.contains("source_vanishes_at_zero=true"));
    }

    #[test]
    fn out_of_bounds_cfl_rejected() {
        let cmd = parse_args(["run", "--model", "burgers", "--cfl", "5.0"]).unwrap();
        let mut out = Vec::new();
        let mut diag = Vec::new();
        assert_eq!(execute(&cmd, &mut out, &mut diag), EXIT_USAGE);
        assert!(out.is_empty());
    }

    #[test]
    fn exit_codes_are_distinct() {
        assert_eq!(exit_code(&Error::UnknownModel("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::NonfiniteState { step: 3 }),
            EXIT_INSTABILITY
        );
        assert_eq!(
            exit_code(&Error::NoConvergence {
                iterations: 3,
                last_change: 1.0
            }),
            EXIT_NO_CONVERGENCE
        );
    }
}
