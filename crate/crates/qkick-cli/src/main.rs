use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use qkick::channel::KrausChannel;
use qkick::classify::{classify_decomposition, cycle_structure};
use qkick::error::{Error, Result};
use qkick::harness::{self, FigureId, FigureOptions, SweepConfig};
use qkick::io::{resolve_channel, resolve_hamiltonian};
use qkick::spectral::{analyze_peripheral, spectral_gap_radius, DEFAULT_PERIPHERAL_TOL};
use qkick::zeno::{dd_check, ZenoAnalysis, DEFAULT_DECISION_TOL};

/// Spectral analysis of quantum channels, bath decoupling and Zeno suppression.
#[derive(Debug, Parser)]
#[command(name = "qkick", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the classification record of a channel.
    Classify {
        /// Channel JSON file or `zoo:NAME(params)`.
        channel: String,
        /// Peripheral tolerance.
        #[arg(long, default_value_t = DEFAULT_PERIPHERAL_TOL)]
        tol: f64,
    },
    /// Print the eigenvalues and peripheral data of a channel.
    Spectrum {
        channel: String,
        #[arg(long, default_value_t = DEFAULT_PERIPHERAL_TOL)]
        tol: f64,
    },
    /// Decide whether kicking the bath with the channel decouples `H`.
    DdCheck {
        channel: String,
        /// Hamiltonian file, `pauli:EXPR` or `random:SEED`.
        #[arg(long)]
        hamiltonian: String,
        /// Dimension of the system factor.
        #[arg(long)]
        d1: usize,
        #[arg(long, default_value_t = DEFAULT_DECISION_TOL)]
        tol: f64,
    },
    /// Decide whether kicking with the channel suppresses `H`.
    ZenoCheck {
        channel: String,
        #[arg(long)]
        hamiltonian: String,
        #[arg(long, default_value_t = DEFAULT_DECISION_TOL)]
        tol: f64,
    },
    /// Run a sweep described by a JSON config and write CSVs.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the data behind one of the figures.
    Reproduce {
        figure: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Evaluate every n in 1..=100 instead of the default grid.
        #[arg(long)]
        dense: bool,
    },
}

#[derive(Serialize)]
struct SpectrumReport {
    dim: usize,
    eigenvalues: Vec<[f64; 2]>,
    peripheral: Vec<PeripheralEntry>,
    dim_fixed: usize,
    dim_recurrent: usize,
    gap_radius: f64,
    cycle_lengths: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct PeripheralEntry {
    value: [f64; 2],
    phase: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ZenoReport {
    suppressed: bool,
    zeno_norm: f64,
    tol: f64,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn load_channel(spec: &str) -> Result<KrausChannel> {
    let ch = resolve_channel(spec)?;
    let report = ch.validate()?;
    if !report.passed {
        return Err(Error::NotCptp {
            trace_residual: report.trace_residual,
            min_choi_eigenvalue: report.min_choi_eigenvalue,
        });
    }
    Ok(ch)
}

fn print_line(text: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    print_line(&serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { channel, tol } => {
            let ch = load_channel(&channel)?;
            let dec = analyze_peripheral(ch.superoperator(), tol)?;
            let mut record = classify_decomposition(&dec)?;
            record.name = ch.name().map(str::to_owned);
            print_json(&record)
        }
        Command::Spectrum { channel, tol } => {
            let ch = load_channel(&channel)?;
            let dec = analyze_peripheral(ch.superoperator(), tol)?;
            let cycle_lengths = cycle_structure(ch.superoperator()).ok();
            print_json(&SpectrumReport {
                dim: dec.dim(),
                eigenvalues: dec.spectrum().iter().copied().map(pair).collect(),
                peripheral: dec
                    .clusters()
                    .iter()
                    .map(|c| PeripheralEntry {
                        value: pair(c.value),
                        phase: c.value.arg(),
                        multiplicity: c.multiplicity,
                    })
                    .collect(),
                dim_fixed: dec.dim_fixed(),
                dim_recurrent: dec.dim_recurrent(),
                gap_radius: spectral_gap_radius(&dec),
                cycle_lengths,
            })
        }
        Command::DdCheck {
            channel,
            hamiltonian,
            d1,
            tol,
        } => {
            let ch = load_channel(&channel)?;
            let h = resolve_hamiltonian(&hamiltonian, d1 * ch.dim())?;
            print_json(&dd_check(ch.superoperator(), &h, tol)?)
        }
        Command::ZenoCheck {
            channel,
            hamiltonian,
            tol,
        } => {
            let ch = load_channel(&channel)?;
            let h = resolve_hamiltonian(&hamiltonian, ch.dim())?;
            let analysis = ZenoAnalysis::new(ch.superoperator(), &h, tol)?;
            print_json(&ZenoReport {
                suppressed: analysis.suppression(),
                zeno_norm: analysis.zeno_norm(),
                tol,
            })
        }
        Command::Sweep { config, out } => {
            let config = SweepConfig::from_json(&std::fs::read_to_string(&config)?)?;
            let output = harness::sweep(&config)?;
            output.write(&out)?;
            eprintln!("wrote {} records to {}", output.records.len(), out.display());
            Ok(())
        }
        Command::Reproduce {
            figure,
            out,
            seed,
            samples,
            dense,
        } => {
            let figure: FigureId = figure.parse()?;
            let mut opts = FigureOptions {
                seed,
                samples,
                ..FigureOptions::default()
            };
            if dense {
                opts.n = (1..=100).collect();
            }
            for path in harness::reproduce(figure, &out, &opts)? {
                print_line(&path.display().to_string())?;
            }
            Ok(())
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NotCptp { .. } => 1,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
