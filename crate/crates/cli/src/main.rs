//! `chemobound` command-line tool.
//!
//! Exit codes: 0 success, 1 negative verdict (outside the theorem region,
//! failed or impossible certificate, failed run), 2 usage or configuration
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chemobound::certificate::{certify, verify_certificate, Certificate, DEFAULT_SEARCH_BUDGET};
use chemobound::config::SimConfig;
use chemobound::diagnostics::Termination;
use chemobound::exact::{format_rational, parse_rational, Rational};
use chemobound::model::{classify, Mode, RegionTag};
use chemobound::output::write_run;
use chemobound::region::{region_table, write_csv};
use chemobound::solver::run;
use chemobound::sweep::{run_sweep, SweepSpec, AGGREGATE_FILE};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chemobound",
    version,
    about = "Boundedness regions, exponent certificates and simulations for power-law chemotaxis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place (n, alpha, l) in the boundedness regions; prints JSON.
    Classify {
        /// Space dimension, at least 2.
        #[arg(long)]
        n: u32,
        /// Sensitivity exponent: integer, decimal or fraction such as 5/4.
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        /// Production exponent, same formats as --alpha.
        #[arg(long, value_parser = rational_arg)]
        l: Rational,
        /// pp (parabolic-parabolic) or pe (parabolic-elliptic).
        #[arg(long, default_value = "pp")]
        mode: Mode,
    },
    /// Build and verify an exponent certificate, or verify an existing one.
    Certificate {
        /// Space dimension, at least 2.
        #[arg(long, required_unless_present = "verify_only")]
        n: Option<u32>,
        /// Sensitivity exponent: integer, decimal or fraction such as 5/4.
        #[arg(long, value_parser = rational_arg, required_unless_present = "verify_only")]
        alpha: Option<Rational>,
        /// Production exponent, same formats as --alpha.
        #[arg(long, value_parser = rational_arg, required_unless_present = "verify_only")]
        l: Option<Rational>,
        /// Number of (theta, mu) candidates tried.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        /// Write the document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Verify a certificate document instead of searching.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "alpha", "l"])]
        verify_only: Option<PathBuf>,
    },
    /// Tabulate the region boundaries at midpoint samples of l in (0, 1).
    Region {
        /// Space dimension, at least 2.
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one simulation from a TOML config.
    Simulate {
        config: PathBuf,
        /// Overrides `output.path` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a parameter sweep from a TOML spec.
    Sweep {
        spec: PathBuf,
        /// Overrides `output.path` from the sweep spec.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides `sweep.workers`.
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

enum Failure {
    /// A well-formed request with a negative answer.
    Negative(String),
    /// Bad input or an environment problem.
    Usage(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Self::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(Failure::usage),
    }
}

fn cmd_classify(n: u32, alpha: &Rational, l: &Rational, mode: Mode) -> Outcome {
    let verdict = classify(n, alpha, l, mode).map_err(Failure::usage)?;
    let json = serde_json::json!({
        "n": n,
        "alpha": format_rational(alpha),
        "l": format_rational(l),
        "mode": mode.as_str(),
        "verdict": verdict.tag,
        "detail": verdict.detail,
    });
    println!("{}", serde_json::to_string_pretty(&json).map_err(Failure::usage)?);
    if verdict.tag == RegionTag::TheoremRegion {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{}", verdict.tag)))
    }
}

fn cmd_certificate(n: u32, alpha: &Rational, l: &Rational, budget: usize, output: Option<&Path>) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage(format!("unsupported dimension n = {n} (need n >= 2)")));
    }
    let cert = certify::<Rational>(n, alpha, l, budget).map_err(|e| Failure::Negative(e.to_string()))?;
    let report = verify_certificate(&cert);
    emit(output, &cert.to_document(&report))?;
    eprint!("{report}");
    let failed = report.failures().count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{failed} checks failed")))
    }
}

fn cmd_verify(path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let cert = Certificate::from_document(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let report = verify_certificate(&cert);
    print!("{report}");
    let failed: Vec<&str> = report.failures().map(|c| c.label).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Negative(format!("failed: {}", failed.join("; "))))
    }
}

fn cmd_region(n: u32, samples: usize, output: Option<&Path>) -> Outcome {
    let rows = region_table(n, samples).map_err(Failure::usage)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).map_err(Failure::usage)?;
    emit(output, &String::from_utf8(buf).expect("CSV is ASCII"))
}

fn cmd_simulate(config_path: &Path, output: Option<PathBuf>) -> Outcome {
    let mut config = SimConfig::load(config_path).map_err(Failure::usage)?;
    if let Some(dir) = output {
        config.output.path = dir;
    }
    let result = run(&config).map_err(|e| Failure::Negative(e.to_string()))?;
    let summary = write_run(&config.output.path, &config, &result)
        .map_err(|e| Failure::Usage(format!("{}: {e}", config.output.path.display())))?;
    println!("{}", summary.to_json());
    match result.termination {
        Termination::NumericalFailure => Err(Failure::Negative(
            result.failure.unwrap_or_else(|| "numerical failure".into()),
        )),
        _ => Ok(()),
    }
}

fn cmd_sweep(spec_path: &Path, output: Option<PathBuf>, workers: Option<usize>) -> Outcome {
    if workers == Some(0) {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let spec = SweepSpec::load(spec_path).map_err(Failure::usage)?;
    let dir = output.unwrap_or_else(|| spec.base.output.path.clone());
    let outcome = run_sweep(&spec, Some(&dir), workers).map_err(|e| Failure::Negative(e.to_string()))?;
    eprintln!(
        "{} points written to {}",
        outcome.points.len(),
        dir.join(AGGREGATE_FILE).display()
    );
    print!("{}", outcome.aggregate_csv());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify { n, alpha, l, mode } => cmd_classify(n, &alpha, &l, mode),
        Command::Certificate {
            verify_only: Some(path),
            ..
        } => cmd_verify(&path),
        Command::Certificate {
            n: Some(n),
            alpha: Some(alpha),
            l: Some(l),
            budget,
            output,
            verify_only: None,
        } => cmd_certificate(n, &alpha, &l, budget, output.as_deref()),
        Command::Certificate { .. } => Err(Failure::Usage("--n, --alpha and --l are required".into())),
        Command::Region { n, samples, output } => cmd_region(n, samples, output.as_deref()),
        Command::Simulate { config, output } => cmd_simulate(&config, output),
        Command::Sweep { spec, output, workers } => cmd_sweep(&spec, output, workers),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            eprintln!("chemobound: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("chemobound: {msg}");
            ExitCode::from(2)
        }
    }
}
