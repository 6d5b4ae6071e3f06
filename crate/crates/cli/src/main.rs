//! `kennedy`: batch front end writing CSV or JSON tables.

mod table;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use kennedy_core::closed_forms::{
    kappa_squeezed_approx, kappa_squeezed_exact, phi_min_bright, phi_min_coherent,
    phi_min_squeezed_closed, phi_min_squeezed_vacuum, PhiMinResult, ProbeSpec,
};
use kennedy_core::detection::{
    dark_probability_from_rate, geometric_grid, kennedy_receiver, np_detection_probability,
    DetectorModel,
};
use kennedy_core::fock::{
    displacement_operator, overlap, phase_shift_operator, squeeze_operator, FockVector,
    TruncationConfig,
};
use kennedy_core::optimizer::{
    optimize_ratio, phi_min_numeric, sweep_ratio, sweep_total, KappaMode, PowerBudget,
};
use kennedy_core::verify::run_oracle_suite;
use kennedy_core::Error;

use table::{Cell, Table};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "kennedy",
    version,
    about = "Precision bounds for Kennedy-type phase detection"
)]
struct Cli {
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Overlap between the probe and its phase-shifted copy.
    Kappa(KappaArgs),
    /// Detection probability at a given false-alarm rate.
    Bound(BoundArgs),
    /// Minimum detectable phase for one probe.
    Phimin(PhiminArgs),
    /// Minimum detectable phase across squeezing ratios at fixed power.
    SweepRatio(SweepRatioArgs),
    /// Minimum detectable phase across total power for fixed ratios.
    SweepN(SweepNArgs),
    /// Best squeezing ratio across total power.
    Optimize(OptimizeArgs),
    /// Compare closed forms with the Fock-space simulation.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OverlapMode {
    Exact,
    Approx,
    /// Truncated Fock-space overlap.
    Fock,
}

#[derive(Args, Debug)]
struct KappaArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, value_enum, default_value_t = OverlapMode::Exact)]
    mode: OverlapMode,
    /// Fock dimension for `--mode fock`.
    #[arg(long, default_value_t = 64)]
    dim: usize,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, conflicts_with_all = ["alpha", "r", "phi"], required_unless_present = "alpha")]
    kappa: Option<f64>,
    #[arg(long, requires = "kappa")]
    p01: Option<f64>,

    /// Simulate the receiver for this probe instead.
    #[arg(long, requires_all = ["r", "phi"])]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Dark counts per second.
    #[arg(long, default_value_t = 0.0)]
    dark_rate: f64,
    /// Gate length in seconds.
    #[arg(long)]
    gate: Option<f64>,
    #[arg(long, default_value_t = 64)]
    dim: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhiminMode {
    /// Closed form picked by probe type.
    Closed,
    Exact,
    Approx,
    /// Bright-coherent asymptote.
    Bright,
}

#[derive(Args, Debug)]
struct PhiminArgs {
    #[arg(long, requires = "r", conflicts_with_all = ["n_total", "ratio"], required_unless_present = "n_total")]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, requires = "ratio")]
    n_total: Option<f64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long, value_enum, default_value_t = PhiminMode::Closed)]
    mode: PhiminMode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMode {
    Exact,
    Approx,
}

impl From<SolveMode> for KappaMode {
    fn from(m: SolveMode) -> Self {
        match m {
            SolveMode::Exact => KappaMode::Exact,
            SolveMode::Approx => KappaMode::Approx,
        }
    }
}

#[derive(Args, Debug)]
struct SweepRatioArgs {
    #[arg(long)]
    n_total: f64,
    #[arg(long)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
    mode: SolveMode,
}

#[derive(Args, Debug)]
struct SweepNArgs {
    #[arg(long)]
    n_min: f64,
    #[arg(long)]
    n_max: f64,
    #[arg(long)]
    points: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    ratios: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
    mode: SolveMode,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long)]
    n_min: f64,
    #[arg(long)]
    n_max: f64,
    #[arg(long)]
    points: usize,
    #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
    mode: SolveMode,
    /// Ratio tolerance of the line search.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = kennedy_core::verify::VERIFY_TOLERANCE)]
    tol: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Config(_) | Error::DimensionMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::Truncation { .. }
            | Error::NoCrossing { .. }
            | Error::DegenerateThreshold { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(Table, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let (table, ok) = match run(&cli.command) {
        Ok(done) => done,
        Err(f) => return report(f),
    };
    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        return report(Failure::Io(msg));
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: some oracle checks failed");
        ExitCode::from(EXIT_NUMERIC)
    }
}

fn report(f: Failure) -> ExitCode {
    let (msg, code) = match f {
        Failure::Usage(m) => (m, EXIT_USAGE),
        Failure::Numeric(m) => (m, EXIT_NUMERIC),
        Failure::Io(m) => (m, 1),
    };
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Kappa(a) => kappa(a),
        Command::Bound(a) => bound(a),
        Command::Phimin(a) => phimin(a),
        Command::SweepRatio(a) => sweep_ratio_cmd(a),
        Command::SweepN(a) => sweep_n(a),
        Command::Optimize(a) => optimize(a),
        Command::Verify(a) => verify(a),
    }
}

fn kappa(a: &KappaArgs) -> Outcome {
    let probe = ProbeSpec::new(a.alpha, a.r)?;
    let (label, value) = match a.mode {
        OverlapMode::Exact => ("exact", kappa_squeezed_exact(&probe, a.phi)),
        OverlapMode::Approx => ("approx", kappa_squeezed_approx(&probe, a.phi)),
        OverlapMode::Fock => ("fock", fock_kappa(&probe, a.phi, a.dim)?),
    };
    let mut t = Table::new(&["alpha", "r", "phi", "mode", "kappa"]);
    t.push(vec![
        a.alpha.into(),
        a.r.into(),
        a.phi.into(),
        label.into(),
        value.into(),
    ]);
    Ok((t, true))
}

fn fock_kappa(probe: &ProbeSpec, phi: f64, dim: usize) -> Result<f64, Failure> {
    let cfg = TruncationConfig::new(dim);
    cfg.validate()?;
    let prep = displacement_operator(Complex64::new(probe.alpha, 0.0), &cfg)?
        .compose(&squeeze_operator(-probe.r, &cfg)?)?;
    let psi0 = prep.apply(&FockVector::vacuum(dim)?)?;
    let shift = phase_shift_operator(phi, &cfg)?;
    let psi1 = shift.apply(&psi0)?;
    Ok(overlap(&psi0, &psi1)?.norm_sqr())
}

fn bound(a: &BoundArgs) -> Outcome {
    let mut t = Table::new(&["p01", "kappa", "p11"]);
    if let Some(kappa) = a.kappa {
        let p01 = a
            .p01
            .ok_or_else(|| Failure::Usage("--kappa needs --p01".into()))?;
        t.push(vec![
            p01.into(),
            kappa.into(),
            np_detection_probability(p01, kappa)?.into(),
        ]);
        return Ok((t, true));
    }
    let (alpha, r, phi) = match (a.alpha, a.r, a.phi) {
        (Some(alpha), Some(r), Some(phi)) => (alpha, r, phi),
        _ => {
            return Err(Failure::Usage(
                "give either --kappa and --p01 or --alpha, --r and --phi".into(),
            ))
        }
    };
    let p_dark = match (a.dark_rate, a.gate) {
        (0.0, _) => 0.0,
        (rate, Some(gate)) => dark_probability_from_rate(rate, gate)?,
        (_, None) => return Err(Failure::Usage("--dark-rate needs --gate".into())),
    };
    let det = DetectorModel::new(a.eta, p_dark)?;
    let probe = ProbeSpec::new(alpha, r)?;
    let res = kennedy_receiver(&probe, phi, &det, &TruncationConfig::new(a.dim))?;
    t.push(vec![res.p01.into(), res.kappa.into(), res.p11.into()]);
    Ok((t, true))
}

fn phimin(a: &PhiminArgs) -> Outcome {
    let (probe, budget) = match (a.alpha, a.r, a.n_total, a.ratio) {
        (Some(alpha), Some(r), None, None) => {
            let probe = ProbeSpec::new(alpha, r)?;
            let n = probe.n_total();
            let ratio = if n > 0.0 { probe.n_squeeze() / n } else { 0.0 };
            (probe, (n, ratio))
        }
        (None, None, Some(n), Some(ratio)) => (PowerBudget::new(n, ratio)?.probe(), (n, ratio)),
        _ => {
            return Err(Failure::Usage(
                "give either --alpha and --r or --n-total and --ratio".into(),
            ))
        }
    };
    let res: PhiMinResult = match a.mode {
        PhiminMode::Closed if probe.r == 0.0 => phi_min_coherent(probe.n_coherent())?,
        PhiminMode::Closed if probe.alpha == 0.0 => phi_min_squeezed_vacuum(probe.n_squeeze())?,
        PhiminMode::Closed => phi_min_squeezed_closed(&probe)?,
        PhiminMode::Bright => phi_min_bright(&probe)?,
        PhiminMode::Exact => phi_min_numeric(&probe, KappaMode::Exact)?,
        PhiminMode::Approx => phi_min_numeric(&probe, KappaMode::Approx)?,
    };
    let mut t = Table::new(&["alpha", "r", "n_total", "ratio", "method", "phi_m"]);
    t.push(vec![
        probe.alpha.into(),
        probe.r.into(),
        budget.0.into(),
        budget.1.into(),
        res.method.as_str().into(),
        res.phi_m.into(),
    ]);
    Ok((t, true))
}

fn sweep_ratio_cmd(a: &SweepRatioArgs) -> Outcome {
    let curve = sweep_ratio(a.n_total, a.grid, a.mode.into())?;
    let mut t = Table::new(&["ratio", "phi_m"]);
    for p in &curve.points {
        t.push(vec![p.x.into(), p.phi_m.into()]);
    }
    Ok((t, true))
}

fn log_grid(n_min: f64, n_max: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if !(n_min > 0.0 && n_max >= n_min && n_max.is_finite()) {
        return Err(Failure::Usage(format!(
            "need 0 < --n-min <= --n-max, got {n_min} and {n_max}"
        )));
    }
    match points {
        0 => Err(Failure::Usage("--points must be at least 1".into())),
        _ => Ok(geometric_grid(n_min, n_max, points)),
    }
}

fn sweep_n(a: &SweepNArgs) -> Outcome {
    let ns = log_grid(a.n_min, a.n_max, a.points)?;
    let curves = sweep_total(&ns, &a.ratios, a.mode.into())?;
    let mut t = Table::new(&["n_total", "ratio", "phi_m"]);
    for (curve, &ratio) in curves.iter().zip(&a.ratios) {
        for p in &curve.points {
            t.push(vec![p.x.into(), ratio.into(), p.phi_m.into()]);
        }
    }
    Ok((t, true))
}

fn optimize(a: &OptimizeArgs) -> Outcome {
    let ns = log_grid(a.n_min, a.n_max, a.points)?;
    let mut t = Table::new(&["n_total", "ratio_opt", "phi_opt", "phi_sv", "relative"]);
    for n in ns {
        let o = optimize_ratio(n, a.tol, a.mode.into())?;
        t.push(vec![
            o.n_total.into(),
            o.ratio_opt.into(),
            o.phi_opt.into(),
            o.phi_sv.into(),
            o.relative.into(),
        ]);
    }
    Ok((t, true))
}

fn verify(a: &VerifyArgs) -> Outcome {
    let rows = run_oracle_suite(&TruncationConfig::new(a.dim), a.tol)?;
    let mut t = Table::new(&[
        "test", "alpha", "r", "phi", "analytic", "oracle", "abs_err", "pass",
    ]);
    for row in &rows {
        t.push(vec![
            row.check.as_str().into(),
            row.alpha.into(),
            row.r.into(),
            row.phi.into(),
            row.analytic.into(),
            row.oracle.into(),
            row.abs_err().into(),
            Cell::Bool(row.pass),
        ]);
    }
    Ok((t, rows.iter().all(|r| r.pass)))
}
