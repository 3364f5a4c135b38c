use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fibercap_cli::config::{ConfigFile, SweepConfig, DEFAULT_MODELS};
use fibercap_cli::curve::{read_csv, write_csv};
use fibercap_cli::model::parse_models;
use fibercap_cli::verify::{verify, Suite};
use fibercap_cli::{run_sweep, svg, Cache};
use fibercap_core::mnc::{conditional_pdf, simulate_ssf, MncPdfParams};
use fibercap_core::params::dbm_to_watt;
use fibercap_core::{derive_discrete, lpc, par, rpc};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "fibercap",
    version,
    about = "Capacity bounds for zero-dispersion fiber channel models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep bounds over a power grid and write CSV.
    Bounds(BoundsArgs),
    /// Dump the MNC conditional density on an (r, θ) grid.
    Pdf(PdfArgs),
    /// Pass symbols through one of the channel simulators.
    Simulate(SimulateArgs),
    /// Run the invariant and cross-validation checks.
    Verify(VerifyArgs),
    /// Render a bounds CSV as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// TOML file with the physical parameters and optional [sweep]/[tolerances].
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lowest power in dBm.
    #[arg(long, allow_hyphen_values = true)]
    pmin: Option<f64>,
    /// Highest power in dBm.
    #[arg(long, allow_hyphen_values = true)]
    pmax: Option<f64>,
    /// Grid step in dB.
    #[arg(long)]
    step: Option<f64>,
    /// Comma-separated models, e.g. `rpc-lb,rpc-ub,mnc-chi:1.5`.
    #[arg(long)]
    models: Option<String>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON cache for MNC cells.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Power points evaluated concurrently.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also render the curve as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PdfArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input amplitude as r₀²/P_N.
    #[arg(long, default_value_t = 1.0)]
    r0_sq: f64,
    /// Input phase in rad.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta0: f64,
    #[arg(long, default_value_t = 64)]
    r_points: usize,
    #[arg(long, default_value_t = 64)]
    theta_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Channel {
    Rpc,
    Lpc,
    /// Split-step simulation of the memoryless NLS channel.
    Mnc,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputLaw {
    /// Circular Gaussian with the given power.
    Gaussian,
    /// Fixed real symbol with the given power.
    Constant,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    channel: Channel,
    /// Input power in dBm.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    power: f64,
    #[arg(long, value_enum, default_value_t = InputLaw::Gaussian)]
    input: InputLaw,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Split-step segments for the MNC channel.
    #[arg(long, default_value_t = 2000)]
    segments: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Include the split-step oracle, Monte Carlo checks and the MNC grid.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV written by `fibercap bounds`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn load_config(path: Option<&Path>) -> anyhow::Result<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn bounds(a: BoundsArgs) -> anyhow::Result<()> {
    let file = load_config(a.config.as_deref())?;
    let base = SweepConfig::default();
    let s = &file.sweep;
    let threads = a.threads.or(s.threads).unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let cfg = SweepConfig {
        p_min_dbm: a.pmin.or(s.pmin).unwrap_or(base.p_min_dbm),
        p_max_dbm: a.pmax.or(s.pmax).unwrap_or(base.p_max_dbm),
        step_db: a.step.or(s.step).unwrap_or(base.step_db),
        models: parse_models(
            a.models
                .as_deref()
                .or(s.models.as_deref())
                .unwrap_or(DEFAULT_MODELS),
        )?,
        threads,
        seed: a.seed.or(s.seed).unwrap_or(base.seed),
        physical: file.physical,
        tolerances: file.tolerances.apply(base.tolerances)?,
    };
    let cache = match &a.cache {
        Some(p) => Cache::open(p)?,
        None => Cache::disabled(),
    };
    let curve = run_sweep(&cfg, &cache)?;
    let flagged = curve.rows.iter().filter(|r| !r.flags.is_empty()).count();
    if flagged > 0 {
        eprintln!("{flagged} of {} rows carry flags", curve.rows.len());
    }
    let mut out = output(a.out.as_deref())?;
    write_csv(&curve, &mut out)?;
    out.flush()?;
    if let (Some(path), Some(meta)) = (&a.out, &curve.meta) {
        let side = path.with_extension("meta.json");
        std::fs::write(&side, serde_json::to_vec_pretty(meta)?)
            .with_context(|| format!("writing {}", side.display()))?;
    }
    if let Some(path) = &a.svg {
        std::fs::write(path, svg::render(&curve)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn pdf(a: PdfArgs) -> anyhow::Result<()> {
    if a.r_points == 0 || a.theta_points == 0 {
        bail!("grid sizes must be positive");
    }
    let d = derive_discrete(&load_config(a.config.as_deref())?.physical)?;
    let pn = d.noise_power_w;
    let r0 = (a.r0_sq * pn).sqrt();
    let p = MncPdfParams::new(r0, &d)?;
    let r_hi = r0 + 7.0 * (0.5 * pn).sqrt();
    let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
    w.write_record(["r_sqrt_w", "theta_rad", "density", "terms", "capped"])?;
    for i in 0..a.r_points {
        let r = r_hi * (i as f64 + 0.5) / a.r_points as f64;
        for j in 0..a.theta_points {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / a.theta_points as f64;
            let v = conditional_pdf(r, theta, r0, a.theta0, &p)?;
            w.write_record([
                format!("{r:.8e}"),
                format!("{theta:.8e}"),
                format!("{:.8e}", v.value),
                v.terms.to_string(),
                v.capped.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> anyhow::Result<()> {
    let d = derive_discrete(&load_config(a.config.as_deref())?.physical)?;
    let p = dbm_to_watt(a.power);
    let x: Vec<Complex64> = match a.input {
        InputLaw::Gaussian => par::draw(a.samples, a.seed ^ 0x5eed, |rng| {
            par::complex_gaussian(rng, p)
        }),
        InputLaw::Constant => vec![Complex64::new(p.sqrt(), 0.0); a.samples],
    };
    let y = match a.channel {
        Channel::Rpc => rpc::simulate(&x, &d, a.seed),
        Channel::Lpc => lpc::simulate(&x, &d, a.seed),
        Channel::Mnc => simulate_ssf(&x, a.segments, &d, a.seed)?,
    };
    let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
    w.write_record(["x_re", "x_im", "y_re", "y_im"])?;
    for (xi, yi) in x.iter().zip(&y) {
        w.write_record([xi.re, xi.im, yi.re, yi.im].map(|v| format!("{v:.8e}")))?;
    }
    w.flush()?;
    Ok(())
}

fn run_verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let phys = load_config(a.config.as_deref())?.physical;
    let suite = if a.full { Suite::Full } else { Suite::Fast };
    let report = verify(suite, &phys, |c| println!("{}", c.line()));
    let total: f64 = report.checks.iter().map(|c| c.seconds).sum();
    println!(
        "{} checks, {} failed, {total:.1} s",
        report.checks.len(),
        report.failures()
    );
    Ok(report.passed())
}

fn plot(a: PlotArgs) -> anyhow::Result<()> {
    let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let curve = read_csv(f)?;
    std::fs::write(&a.out, svg::render(&curve)?)
        .with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => bounds(a).map(|_| true),
        Command::Pdf(a) => pdf(a).map(|_| true),
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
        Command::Plot(a) => plot(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
