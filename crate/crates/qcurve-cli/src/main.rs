use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcurve::par::Exec;
use qcurve_cli::run::{emit_plotdata, run_analyze, run_toprec, run_verify, run_wkb, Options};
use qcurve_cli::spec::load_curve;

/// Exact analysis, quantization and topological recursion for rank-2
/// spectral curves on the projective line.
#[derive(Parser)]
#[command(name = "qcurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Table1,
    Cross,
    Oracles,
    All,
}

#[derive(clap::Args)]
struct Common {
    /// Built-in name (airy, hermite, gauss, row4, row5, airy-param,
    /// catalan-param) or path to a JSON curve spec.
    #[arg(long)]
    curve: Option<String>,
    /// Truncation order in the local uniformizer.
    #[arg(long)]
    order: Option<i64>,
    /// Highest WKB index, or the largest 2g-2+n for toprec.
    #[arg(long)]
    depth: Option<usize>,
    /// Branch of the semiclassical root: plus or minus.
    #[arg(long)]
    branch: Option<String>,
    /// Expansion point: a rational x0 or inf.
    #[arg(long)]
    place: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate independent items sequentially.
    #[arg(long)]
    sequential: bool,
    /// Record wall times in the report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Curve invariants, pole profiles and the lattice cross-check.
    Analyze(Common),
    /// WKB series S_0 … S_M and the assembled wavefunction.
    Wkb(Common),
    /// Topological recursion tables W_{g,n} and F_{g,n}.
    Toprec(Common),
    /// Run a verification suite; exits nonzero on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// CSV of real points of the affine spectral curve (display only).
    Plotdata {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
        xmin: f64,
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        xmax: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
}

fn options(c: &Common) -> Options {
    Options {
        order: c.order,
        depth: c.depth,
        branch: c.branch.clone(),
        place: c.place.clone(),
        exec: if c.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn required_curve(c: &Common) -> Result<qcurve_cli::spec::Curve> {
    load_curve(c.curve.as_deref().context("--curve is required")?)
}

fn run(cli: Cli) -> Result<bool> {
    let start = Instant::now();
    let (common, mut report) = match &cli.command {
        Command::Analyze(c) => (c, run_analyze(&required_curve(c)?)?),
        Command::Wkb(c) => (c, run_wkb(&required_curve(c)?, &options(c))?),
        Command::Toprec(c) => (c, run_toprec(&required_curve(c)?, &options(c))?),
        Command::Verify { common, suite } => {
            let curve = common.curve.as_deref().map(load_curve).transpose()?;
            let name = match suite {
                Suite::Table1 => "table1",
                Suite::Cross => "cross",
                Suite::Oracles => "oracles",
                Suite::All => "all",
            };
            (
                common,
                run_verify(name, curve.as_ref(), &options(common), common.timing)?,
            )
        }
        Command::Plotdata {
            common,
            xmin,
            xmax,
            samples,
        } => {
            let csv = emit_plotdata(&required_curve(common)?, *xmin, *xmax, *samples)?;
            emit(&common.out, &csv)?;
            return Ok(true);
        }
    };
    if common.timing {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&common.out, &text)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
