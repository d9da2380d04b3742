//! Command-line front end: `verify`, `sweep` and `demo`.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
//! configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mvtto_harness::scenario::Scenario;
use mvtto_harness::sweep::{run_sweep, SweepParam};
use mvtto_harness::{demo, run_scenario, HarnessError};

#[derive(Parser)]
#[command(
    name = "mvtto",
    version,
    about = "Machine-verify model-space and truncated-Toeplitz operator identities on finite Fourier windows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity-check catalogue for one scenario.
    Verify {
        /// Scenario file (flat key = value text); flags below override it.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Coefficient dimension d (1..=8).
        #[arg(long)]
        dim: Option<usize>,
        /// Window radius or `auto`.
        #[arg(long)]
        window: Option<String>,
        /// Pair strategy: scalar-times-identity | powers-of-common-factor |
        /// simultaneously-diagonal.
        #[arg(long)]
        strategy: Option<String>,
        /// Scenario tolerance (default 1e-9) rescaling the pinned bounds.
        #[arg(long)]
        tol: Option<f64>,
        /// Report format.
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        report: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a scenario over a parameter grid and write defects as CSV.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// symbol-scale | factor-zero-radius | degree
        #[arg(long)]
        param: String,
        /// Comma-separated grid values.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the explicit matrices of the scalar model space θ = z^n.
    Demo {
        #[arg(long, default_value_t = 3)]
        scalar_degree: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn load_scenario(path: &Option<PathBuf>) -> anyhow::Result<Scenario> {
    match path {
        None => Ok(Scenario::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(Scenario::parse(&text)?)
        }
    }
}

fn usage_error(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            scenario,
            seed,
            dim,
            window,
            strategy,
            tol,
            report,
            out,
        } => {
            let mut s = match load_scenario(&scenario) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let overrides: [(&str, Option<String>); 5] = [
                ("seed", seed.map(|v| v.to_string())),
                ("dim", dim.map(|v| v.to_string())),
                ("window", window),
                ("strategy", strategy),
                ("tol", tol.map(|v| v.to_string())),
            ];
            for (key, value) in overrides {
                if let Some(v) = value {
                    if let Err(e) = s.set(key, &v) {
                        return usage_error(e);
                    }
                }
            }
            if let Err(e) = s.validate() {
                return usage_error(e);
            }
            let rep = match run_scenario(&s) {
                Ok(r) => r,
                Err(HarnessError::Config(e)) => return usage_error(e),
                Err(e) => return usage_error(e),
            };
            let rendered = match report.as_str() {
                "json" => format!("{:#}\n", rep.to_json()),
                _ => rep.render_text(),
            };
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &rendered) {
                    return usage_error(e);
                }
            } else {
                print!("{rendered}");
            }
            if rep.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Sweep {
            scenario,
            param,
            grid,
            out,
        } => {
            let s = match load_scenario(&Some(scenario)) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let param: SweepParam = match param.parse() {
                Ok(p) => p,
                Err(e) => return usage_error(e),
            };
            let grid: Vec<f64> = match grid
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
            {
                Ok(g) => g,
                Err(e) => return usage_error(format!("bad grid value: {e}")),
            };
            let table = match run_sweep(&s, param, &grid) {
                Ok(t) => t,
                Err(HarnessError::Config(e)) => return usage_error(e),
                Err(e) => return usage_error(e),
            };
            if let Err(e) = std::fs::write(&out, table.to_csv()) {
                return usage_error(e);
            }
            println!("wrote {} rows to {}", table.rows.len(), out.display());
            ExitCode::SUCCESS
        }
        Command::Demo { scalar_degree, seed } => {
            if scalar_degree == 0 || scalar_degree > 12 {
                return usage_error("scalar degree must be 1..=12");
            }
            match demo::run_demo(scalar_degree, seed) {
                Ok((report, text)) => {
                    print!("{text}\n{}", report.render_text());
                    if report.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => usage_error(e),
            }
        }
    }
}
