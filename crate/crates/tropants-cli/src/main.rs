//! `tropants`: batch verification front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input error.

mod commands;
mod fixtures;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "tropants", version, about = "Exact checks for tropical pants decompositions, toric degenerations and their mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine-readable aggregate output for `regress`.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing in the report (non-canonical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a lifted-polytope fixture: saturation, unimodularity,
    /// regularity, creases, genus/ends/pants.
    Validate { fixture: PathBuf },
    /// Legendre transform of a fixture: dual cells with labels and rays.
    Legendre { fixture: PathBuf },
    /// Degeneration data: fan, smoothness, chart superpotential, ring slice.
    Degenerate {
        fixture: PathBuf,
        /// Base-coordinate window half-width for the ring slice.
        #[arg(long)]
        window: Option<i64>,
        /// Ring slice degree.
        #[arg(long, default_value_t = 1)]
        degree: i64,
    },
    /// Central fibre components of the dual decomposition.
    #[command(name = "central-fiber")]
    CentralFiber { fixture: PathBuf },
    /// Periodic fixture: subdivision check, ring presentation, components.
    Periodic {
        fixture: PathBuf,
        #[arg(long = "max-degree", default_value_t = 6)]
        max_degree: i64,
    },
    /// Theta functional-equation exponent check over a window.
    #[command(name = "theta-check")]
    ThetaCheck {
        fixture: PathBuf,
        #[arg(long, default_value_t = 5)]
        window: i64,
    },
    /// Section membership for a valuation profile over a region.
    #[command(name = "novikov-check")]
    NovikovCheck { fixture: PathBuf },
    /// Hamiltonian chords with actions and indices.
    Chords {
        fixture: PathBuf,
        /// Override the fixture's lattice window.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Matrix factorization suite at the given caps.
    #[command(name = "mf-verify")]
    MfVerify {
        #[arg(long = "D", default_value_t = 4)]
        d: i64,
        #[arg(long = "N", default_value_t = 6)]
        n: i64,
        /// Also run the q-adic coefficient mode, truncated at this order.
        #[arg(long = "novikov-trunc")]
        novikov_trunc: Option<String>,
    },
    /// Trivalent graph and double-cover checks.
    Graph { fixture: PathBuf },
    /// Build and validate the gluing atlas of a graph fixture.
    Atlas { fixture: PathBuf },
    /// Run the bundled regression suite.
    Regress,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn dispatch(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::Validate { fixture } => {
            let fx = fixtures::load_lift(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_validate(&fx)
        }
        Command::Legendre { fixture } => {
            let fx = fixtures::load_lift(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_legendre(&fx)
        }
        Command::Degenerate {
            fixture,
            window,
            degree,
        } => {
            let fx = fixtures::load_lift(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_degenerate(&fx, *window, *degree)
        }
        Command::CentralFiber { fixture } => {
            let fx = fixtures::load_lift(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_central_fiber(&fx)
        }
        Command::Periodic {
            fixture,
            max_degree,
        } => {
            let fx = fixtures::parse_json(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_periodic(&fx, *max_degree)
        }
        Command::ThetaCheck { fixture, window } => {
            let fx = fixtures::parse_json(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_theta(&fx, *window)
        }
        Command::NovikovCheck { fixture } => {
            let fx = fixtures::parse_json(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_novikov(&fx)
        }
        Command::Chords { fixture, window } => {
            let mut fx: fixtures::HamiltonianFixture =
                fixtures::parse_json(&fixture.display().to_string(), &read(fixture)?)?;
            if let Some(w) = window {
                fx.window = *w;
            }
            commands::run_chords(&fx)
        }
        Command::MfVerify {
            d,
            n,
            novikov_trunc,
        } => commands::run_mf_verify(*d, *n, novikov_trunc.as_deref()),
        Command::Graph { fixture } => {
            let fx = fixtures::load_graph(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_graph(&fx)
        }
        Command::Atlas { fixture } => {
            let fx = fixtures::load_graph(&fixture.display().to_string(), &read(fixture)?)?;
            commands::run_atlas(&fx)
        }
        Command::Regress => commands::run_regress(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(&cli) {
        Ok((mut value, ok)) => {
            if cli.timing {
                value["timing_ms"] = json!(started.elapsed().as_millis() as u64);
            }
            let is_regress = matches!(cli.command, Command::Regress);
            let rendered = if is_regress && !cli.json {
                // human-readable per-check lines plus a summary
                let mut out = String::new();
                for check in value["checks"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "{:<45} {}\n",
                        check["name"].as_str().unwrap_or("?"),
                        check["status"].as_str().unwrap_or("?")
                    ));
                }
                out.push_str(&format!(
                    "{} checks, {} failed\n",
                    value["total"], value["failed"]
                ));
                out
            } else {
                format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
            };
            match &cli.out {
                Some(path) => {
                    if std::fs::write(path, rendered).is_err() {
                        eprintln!("error: cannot write {}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
