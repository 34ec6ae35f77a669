//! Command-line front door: deformed products, Gaussian smoothing, the
//! verification suite, and state/norm curves, emitted as CSV or JSON with
//! decimal-exact floats so identical inputs give byte-identical outputs.
//!
//! Exit codes: 0 success, 1 property violation or non-convergence, 2 input
//! or schema error, 3 dimension or structure error.

mod verify;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use torusdq::io::{
    element_to_json, fmt_f64_17, parse_element, parse_structure,
    to_json_string, ElementJson,
};
use torusdq::oracle::{oracle_star, DampingSchedule};
use torusdq::smoothing::{smooth, sos_cutoff_for, sos_series};
use torusdq::states::{positivity_scan, state_curve, ClassicalState, HbarGrid};
use torusdq::{DeformationContext, Error, FourierElement, Result, SymplecticStructure};

#[derive(Parser)]
#[command(
    name = "torusdq",
    about = "Deformation quantization laboratory for Fourier-lattice algebras on the 2n-torus",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deformed product of two elements, optionally cross-checked against
    /// the oscillatory-integral oracle.
    Star(StarArgs),
    /// Gaussian smoothing S_hbar of an element.
    Smooth(SmoothArgs),
    /// Run the seeded property suite and write a JSON report.
    Verify(VerifyArgs),
    /// Sample hbar -> omega_hbar(a) over a grid (CSV).
    StateCurve(StateCurveArgs),
    /// Sandwich the deformed norm over a grid (CSV).
    NormCurve(NormCurveArgs),
    /// Scan random squares for positivity of a deformed state (JSON).
    PositivityScan(ScanArgs),
    /// Rebuild smooth(a* * a) from the sum-of-squares expansion and report
    /// the discrepancy (JSON).
    SosCheck(SosArgs),
}

#[derive(Args)]
struct StarArgs {
    /// Left factor (element JSON file).
    #[arg(long)]
    a: PathBuf,
    /// Right factor (element JSON file).
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// Deformation parameter.
    #[arg(long)]
    hbar: f64,
    /// Also compute the product through the oscillatory oracle and report
    /// the l1 discrepancy.
    #[arg(long)]
    oracle: bool,
    /// Damping schedule for the oracle: comma-separated epsilons,
    /// strictly decreasing (default: an hbar-scaled ladder).
    #[arg(long)]
    epsilons: Option<String>,
    /// Extrapolation order for the oracle schedule.
    #[arg(long, default_value_t = 3)]
    order: usize,
}

#[derive(Args)]
struct SmoothArgs {
    /// Input element (JSON file).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// Deformation parameter.
    #[arg(long)]
    hbar: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override a check threshold as name=value (repeatable).
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
    /// Report destination (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StateCurveArgs {
    /// State: "trace", "point:x1,...,x2n", or "density:FILE".
    #[arg(long)]
    state: String,
    /// Input element (JSON file).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// Grid as start:stop:count:spacing with spacing linear|log-with-0;
    /// linear grids must start at 0.
    #[arg(long)]
    grid: String,
}

#[derive(Args)]
struct NormCurveArgs {
    /// Input element (JSON file).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// Grid as start:stop:count:spacing (see state-curve).
    #[arg(long)]
    grid: String,
    /// Half-width of the representation box.
    #[arg(long = "box-n")]
    box_n: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// State: "trace", "point:x1,...,x2n", or "density:FILE".
    #[arg(long)]
    state: String,
    #[command(flatten)]
    common: CommonArgs,
    /// Deformation parameter.
    #[arg(long)]
    hbar: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Modes per random trial element.
    #[arg(long, default_value_t = 5)]
    modes: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Absolute violation tolerance; default scales 1e-9 by the largest
    /// squared l1 norm seen in the scan.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct SosArgs {
    /// Input element (JSON file).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// Deformation parameter.
    #[arg(long)]
    hbar: f64,
    /// Target tail bound used to choose the cutoff.
    #[arg(long = "tail-tol", default_value_t = 1e-9)]
    tail_tol: f64,
    /// Largest acceptable l1 defect against smooth(a* * a).
    #[arg(long = "defect-tol", default_value_t = 1e-8)]
    defect_tol: f64,
}

#[derive(Args)]
struct CommonArgs {
    /// Symplectic structure: "standard:n" or a JSON file path.
    #[arg(long, default_value = "standard:1")]
    structure: String,
    /// Output destination (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct StarReport {
    product: ElementJson,
    oracle: ElementJson,
    l1_discrepancy: f64,
}

#[derive(Serialize)]
struct ScanReport {
    min_found: f64,
    worst_case: ElementJson,
    trials: usize,
    seed: u64,
    hbar: f64,
    max_imag_ratio: f64,
    threshold: f64,
}

#[derive(Serialize)]
struct SosReport {
    cutoff: usize,
    tail_bound: f64,
    l1_defect: f64,
    defect_tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Maps library errors onto the exit-code contract.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema(_) | Error::InvalidArgument(_) => 2,
        Error::DimensionMismatch { .. } | Error::InvalidStructure(_) => 3,
        Error::NonConvergence(_) => 1,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Star(args) => cmd_star(args),
        Command::Smooth(args) => cmd_smooth(args),
        Command::Verify(args) => verify::cmd_verify(args),
        Command::StateCurve(args) => cmd_state_curve(args),
        Command::NormCurve(args) => cmd_norm_curve(args),
        Command::PositivityScan(args) => cmd_positivity_scan(args),
        Command::SosCheck(args) => cmd_sos_check(args),
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn load_element(path: &PathBuf) -> Result<FourierElement> {
    parse_element(&read_file(path)?)
}

fn load_structure(spec: &str) -> Result<SymplecticStructure> {
    if let Some(n) = spec.strip_prefix("standard:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Schema(format!("bad structure spec {spec:?}")))?;
        return SymplecticStructure::standard(n);
    }
    parse_structure(&read_file(&PathBuf::from(spec))?)
}

fn parse_state(spec: &str) -> Result<ClassicalState> {
    if spec == "trace" {
        return Ok(ClassicalState::trace());
    }
    if let Some(coords) = spec.strip_prefix("point:") {
        let x: std::result::Result<Vec<f64>, _> =
            coords.split(',').map(str::parse::<f64>).collect();
        let x = x.map_err(|_| Error::Schema(format!("bad point spec {spec:?}")))?;
        return ClassicalState::point(x);
    }
    if let Some(path) = spec.strip_prefix("density:") {
        return ClassicalState::density(load_element(&PathBuf::from(path))?);
    }
    Err(Error::Schema(format!(
        "unknown state {spec:?}; use trace, point:..., or density:FILE"
    )))
}

/// Parses "start:stop:count:spacing" with spacing linear|log-with-0.
fn parse_grid(spec: &str) -> Result<HbarGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Schema(format!("bad grid spec {spec:?}"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    match parts[3] {
        "linear" => {
            if start != 0.0 {
                return Err(Error::Schema(format!(
                    "linear grids must start at 0, got {start}"
                )));
            }
            HbarGrid::linear(stop, count)
        }
        "log-with-0" => HbarGrid::log_with_zero(start, stop, count),
        _ => Err(bad()),
    }
}

/// Writes the payload (with a trailing newline) to the file or stdout.
fn emit(output: &Option<PathBuf>, payload: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{payload}\n"))
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{payload}")
                .map_err(|e| Error::Schema(format!("cannot write stdout: {e}")))
        }
    }
}

fn cmd_star(args: StarArgs) -> Result<ExitCode> {
    let a = load_element(&args.a)?;
    let b = load_element(&args.b)?;
    let structure = load_structure(&args.common.structure)?;
    let ctx = DeformationContext::new(structure, args.hbar)?;
    let product = ctx.star_product(&a, &b)?;
    if !args.oracle {
        emit(&args.common.output, &to_json_string(&element_to_json(&product))?)?;
        return Ok(ExitCode::SUCCESS);
    }
    let schedule = match &args.epsilons {
        Some(list) => {
            let eps: std::result::Result<Vec<f64>, _> =
                list.split(',').map(str::parse::<f64>).collect();
            let eps = eps.map_err(|_| Error::Schema(format!("bad epsilon list {list:?}")))?;
            DampingSchedule::new(eps, args.order)?
        }
        None => DampingSchedule::default_for_hbar(args.hbar)?,
    };
    let via_oracle = oracle_star(&ctx, &a, &b, &schedule)?;
    let report = StarReport {
        l1_discrepancy: via_oracle.sub(&product)?.l1_norm(),
        product: element_to_json(&product),
        oracle: element_to_json(&via_oracle),
    };
    emit(&args.common.output, &to_json_string(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_smooth(args: SmoothArgs) -> Result<ExitCode> {
    let a = load_element(&args.input)?;
    let structure = load_structure(&args.common.structure)?;
    let ctx = DeformationContext::new(structure, args.hbar)?;
    let smoothed = smooth(&ctx, &a)?;
    emit(&args.common.output, &to_json_string(&element_to_json(&smoothed))?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_state_curve(args: StateCurveArgs) -> Result<ExitCode> {
    let a = load_element(&args.input)?;
    let structure = load_structure(&args.common.structure)?;
    let state = parse_state(&args.state)?;
    let grid = parse_grid(&args.grid)?;
    let curve = state_curve(&state, &structure, &a, &grid)?;
    let mut csv = String::from("hbar,value_re,value_im");
    for (hbar, value) in &curve {
        csv.push_str(&format!(
            "\n{},{},{}",
            fmt_f64_17(*hbar),
            fmt_f64_17(value.re),
            fmt_f64_17(value.im)
        ));
    }
    emit(&args.common.output, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_norm_curve(args: NormCurveArgs) -> Result<ExitCode> {
    let a = load_element(&args.input)?;
    let structure = load_structure(&args.common.structure)?;
    let grid = parse_grid(&args.grid)?;
    let curve = torusdq::norm_curve(&a, &structure, &grid, args.box_n)?;
    let mut csv = String::from("hbar,lower,upper,box_N,max_adjacent_jump");
    for (hbar, est) in &curve.points {
        csv.push_str(&format!(
            "\n{},{},{},{},{}",
            fmt_f64_17(*hbar),
            fmt_f64_17(est.lower),
            fmt_f64_17(est.upper),
            est.rep_size,
            fmt_f64_17(curve.max_adjacent_jump)
        ));
    }
    emit(&args.common.output, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_positivity_scan(args: ScanArgs) -> Result<ExitCode> {
    let structure = load_structure(&args.common.structure)?;
    let state = parse_state(&args.state)?;
    let ctx = DeformationContext::new(structure, args.hbar)?;
    let scan = positivity_scan(&state, &ctx, args.trials, args.modes, args.seed)?;
    let threshold = args.tolerance.unwrap_or(1e-9 * scan.max_sq_l1.max(1.0));
    let report = ScanReport {
        min_found: scan.min_found,
        worst_case: element_to_json(&scan.worst_case),
        trials: args.trials,
        seed: args.seed,
        hbar: args.hbar,
        max_imag_ratio: scan.max_imag_ratio,
        threshold,
    };
    emit(&args.common.output, &to_json_string(&report)?)?;
    if scan.min_found >= -threshold {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_sos_check(args: SosArgs) -> Result<ExitCode> {
    let a = load_element(&args.input)?;
    let structure = load_structure(&args.common.structure)?;
    let ctx = DeformationContext::new(structure, args.hbar)?;
    let cutoff = sos_cutoff_for(&ctx, &a, args.tail_tol)?;
    let (series, tail_bound) = sos_series(&ctx, &a, cutoff)?;
    let square = ctx.star_product(&a.involution(), &a)?;
    let direct = smooth(&ctx, &square)?;
    let l1_defect = series.sub(&direct)?.l1_norm();
    let report = SosReport {
        cutoff,
        tail_bound,
        l1_defect,
        defect_tol: args.defect_tol,
    };
    emit(&args.common.output, &to_json_string(&report)?)?;
    if l1_defect <= args.defect_tol {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
