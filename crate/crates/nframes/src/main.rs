use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nframes::cli_report::{list_surfaces, report_path, run, Pipeline, RunConfig};

#[derive(Parser)]
#[command(name = "nframes", version, about = "Normal frames, total torsion and Coulomb gauges over the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forms, curvatures and the Euler frame's torsion.
    Analyze(RunArgs),
    /// Normal Coulomb frame construction.
    Gauge(RunArgs),
    /// Integral functions and torsion bounds of the Coulomb frame.
    Bounds(RunArgs),
    /// Riemann-Hilbert representation of the Coulomb torsions (codimension two).
    Rh(RunArgs),
    /// Integrability residuals on the analytic and finite-difference paths.
    Residuals(RunArgs),
    /// Catalog surfaces and their parameters.
    ListSurfaces,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("NFRAMES_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        format!("NFRAMES_THREADS: expected a positive integer, got `{v}`")
    })?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (pipeline, args) = match cli.command {
        Command::ListSurfaces => {
            print!("{}", list_surfaces());
            return ExitCode::SUCCESS;
        }
        Command::Analyze(a) => (Pipeline::Analyze, a),
        Command::Gauge(a) => (Pipeline::Gauge, a),
        Command::Bounds(a) => (Pipeline::Bounds, a),
        Command::Rh(a) => (Pipeline::Rh, a),
        Command::Residuals(a) => (Pipeline::Residuals, a),
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(p) = cfg.pipeline.filter(|p| *p != pipeline) {
        eprintln!("note: config names pipeline `{}`, running `{}`", p.name(), pipeline.name());
    }
    cfg.pipeline = Some(pipeline);
    if let Some(o) = args.out {
        cfg.out = o;
    }
    if let Some(n) = args.nr {
        cfg.grid.nr = n;
    }
    if let Some(n) = args.ntheta {
        cfg.grid.ntheta = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e @ nframes::Error::Config(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for c in &report.checks {
        let rel = match c.relation {
            nframes::cli_report::Relation::AtMost => "<=",
            nframes::cli_report::Relation::AtLeast => ">=",
        };
        println!("{} {} = {:e} {rel} {:e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    println!(
        "{} {} {}x{}: {} -> {}",
        pipeline.name(),
        report.surface.name,
        cfg.grid.nr,
        cfg.grid.ntheta,
        if report.passed { "passed" } else { "failed" },
        report_path(&cfg.out).display()
    );
    ExitCode::from(report.exit_code() as u8)
}
