//! `polykern`: convergence studies, Christoffel studies and property suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polykern::harness::{
    max_error_at, run_christoffel_study, run_circle_study, run_lemniscate_study, run_oracle_checks,
    run_property_suites, write_christoffel_csv, write_csv, Setting, StudyConfig, SuiteReport,
};

#[derive(Parser)]
#[command(name = "polykern", version, about = "Reproducing kernels of orthogonal polynomials and their scaling limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel ratios on the unit circle against the limiting kernel.
    CircleStudy(StudyArgs),
    /// Kernel ratios on the lemniscate against H(A).
    LemniscateStudy(StudyArgs),
    /// Scaled Christoffel functions against their limits.
    ChristoffelStudy(StudyArgs),
    /// Property suites; exits nonzero if any fails.
    Props {
        /// Comma-separated suite names (default: all).
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        quiet: bool,
    },
    /// Closed forms against the brute-force oracles; exits nonzero on mismatch.
    OracleCheck {
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Args)]
struct StudyArgs {
    /// TOML study configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (default: `output_path` from the config, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Degrees, e.g. `200,500,1000`.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Suppress the summary on stderr.
    #[arg(long)]
    quiet: bool,
}

impl StudyArgs {
    fn config(&self, default: Setting) -> Result<StudyConfig> {
        let mut cfg = match &self.config {
            Some(p) => StudyConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => StudyConfig::for_setting(default),
        };
        if let Some(b) = self.precision_bits {
            cfg.precision_bits = Some(b);
        }
        if let Some(n) = &self.n {
            cfg.n_list = n.clone();
        }
        if let Some(o) = &self.out {
            cfg.output_path = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sink(cfg: &StudyConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output_path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn study(args: &StudyArgs, setting: Setting) -> Result<()> {
    let cfg = args.config(setting)?;
    let rows = match (setting, cfg.setting) {
        (Setting::Lemniscate, Setting::Lemniscate) => run_lemniscate_study(&cfg)?,
        (Setting::Lemniscate, _) => bail!("lemniscate-study needs setting = \"lemniscate\""),
        (_, Setting::Lemniscate) => bail!("circle-study needs a circle setting"),
        _ => run_circle_study(&cfg)?,
    };
    let mut out = sink(&cfg)?;
    write_csv(&rows, &mut out)?;
    out.flush()?;
    if !args.quiet {
        for n in cfg.n_values() {
            eprintln!("n = {n}: max |ratio - limit| = {:.3e}", max_error_at(&rows, n).unwrap_or(f64::NAN));
        }
    }
    Ok(())
}

fn christoffel(args: &StudyArgs) -> Result<()> {
    let cfg = args.config(Setting::CircleModel)?;
    let rows = run_christoffel_study(&cfg)?;
    let mut out = sink(&cfg)?;
    write_christoffel_csv(&rows, &mut out)?;
    out.flush()?;
    if !args.quiet {
        for r in &rows {
            eprintln!("n = {} a = {}: scaled {:.6e} target {:.6e} (rel dev {:.3e})", r.n, r.a, r.scaled, r.target, r.rel_dev);
        }
    }
    Ok(())
}

fn report(reports: &[SuiteReport], quiet: bool) -> bool {
    let ok = reports.iter().all(|r| r.passed);
    for r in reports {
        if !quiet || !r.passed {
            println!("{}", r.summary());
        }
    }
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::CircleStudy(a) => study(a, Setting::CircleModel).map(|_| true),
        Command::LemniscateStudy(a) => study(a, Setting::Lemniscate).map(|_| true),
        Command::ChristoffelStudy(a) => christoffel(a).map(|_| true),
        Command::Props { suite, quiet } => run_property_suites(suite.as_deref()).map(|r| report(&r, *quiet)).map_err(Into::into),
        Command::OracleCheck { quiet } => run_oracle_checks().map(|r| report(&r, *quiet)).map_err(Into::into),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
