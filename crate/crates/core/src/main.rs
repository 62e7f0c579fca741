//! Command-line entry point: `calibrate`, `simulate`, `preprocess`.
//!
//! Exit codes: 0 success, 2 degenerate configuration, 3 parse/validation
//! error or bad flags. Log verbosity is controlled by `RUST_LOG`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use plk_calib::io::{
    format_segments, parse_segments, CalibrationInputFile, ReportFile,
};
use plk_calib::method1;
use plk_calib::method2;
use plk_calib::preprocess;
use plk_calib::sim::{Method, Scenario, ScenarioKind, TrialConfig};
use plk_calib::{sim, Error, SolverConfig};

const EXIT_OK: u8 = 0;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(
    name = "plk-calib",
    about = "Target-less LiDAR-camera extrinsic refinement from matched line features",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine an extrinsic pose from a calibration input file.
    Calibrate(CalibrateArgs),
    /// Run seeded Monte Carlo trials on a synthetic scenario.
    Simulate(SimulateArgs),
    /// Merge fragmented 2D segments and drop short ones.
    Preprocess(PreprocessArgs),
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    cost_tolerance: Option<f64>,
    #[arg(long)]
    step_tolerance: Option<f64>,
    #[arg(long)]
    initial_lambda: Option<f64>,
    #[arg(long)]
    lambda_up: Option<f64>,
    #[arg(long)]
    lambda_down: Option<f64>,
}

impl SolverFlags {
    fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        if let Some(v) = self.max_iters {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.cost_tolerance {
            cfg.cost_tolerance = v;
        }
        if let Some(v) = self.step_tolerance {
            cfg.step_tolerance = v;
        }
        if let Some(v) = self.initial_lambda {
            cfg.initial_lambda = v;
        }
        if let Some(v) = self.lambda_up {
            cfg.lambda_up = v;
        }
        if let Some(v) = self.lambda_down {
            cfg.lambda_down = v;
        }
        cfg
    }
}

#[derive(Args)]
struct CalibrateArgs {
    /// Calibration input file (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Solver: method1 (joint projection-error LM) or plk (decoupled).
    #[arg(long)]
    method: Method,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario: a (general), b (coplanar), c (parallel), d (both).
    #[arg(long)]
    scenario: ScenarioKind,
    #[arg(long)]
    method: Method,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Endpoint pixel noise, one sigma.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    lines: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PreprocessArgs {
    /// Segment list, one "u_s v_s u_e v_e" record per line.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Endpoint-gap merge threshold (px).
    #[arg(long, default_value_t = 5.0)]
    merge_dist: f64,
    /// Direction merge threshold (deg).
    #[arg(long, default_value_t = 2.0)]
    merge_angle: f64,
    /// Minimum surviving length (px).
    #[arg(long, default_value_t = 20.0)]
    min_length: f64,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Calibrate(args) => cmd_calibrate(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Preprocess(args) => cmd_preprocess(&args),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<u8, Error> {
    let input = CalibrationInputFile::load(&args.input)?;
    let resolved = input.resolve()?;
    let k = resolved.intrinsics.line_projection_matrix();
    let cfg = args.solver.apply(SolverConfig::default());

    let start = Instant::now();
    let result = match args.method {
        Method::Method1 => {
            method1::solve(&resolved.correspondences, &resolved.initial_pose, &k, &cfg)?
        }
        Method::PlkCalib => method2::solve_plk_calib(
            &resolved.correspondences,
            &resolved.initial_pose,
            &k,
            &cfg,
        )?,
    };
    let wall = start.elapsed().as_secs_f64();

    let report = ReportFile::from_result(
        args.method.tag(),
        &result,
        resolved.ground_truth.as_ref(),
        wall,
    );
    let text = report.to_toml()?;
    match &args.out {
        Some(path) => fs::write(path, &text)?,
        None => print!("{text}"),
    }

    if result.degeneracy.degenerate {
        eprintln!(
            "degenerate configuration: jacobian_sv_ratio={:?} direction_sv_ratio={:?} translation_sv_ratio={:?}",
            result.degeneracy.jacobian_sv_ratio,
            result.degeneracy.direction_sv_ratio,
            result.degeneracy.translation_sv_ratio
        );
        return Ok(EXIT_DEGENERATE);
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8, Error> {
    if args.trials == 0 {
        return Err(Error::parse("--trials must be at least 1"));
    }
    if args.sigma < 0.0 {
        return Err(Error::parse("--sigma must be nonnegative"));
    }
    if args.lines < 3 {
        return Err(Error::parse("--lines must be at least 3"));
    }
    let mut scenario = Scenario::new(args.scenario);
    scenario.line_count = args.lines;
    let cfg = TrialConfig {
        pixel_noise_sigma: args.sigma,
        trials: args.trials,
        seed: args.seed,
        ..TrialConfig::default()
    };
    let report = sim::run_monte_carlo(&scenario, &cfg, args.method);

    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    match &args.out {
        Some(path) => fs::write(path, &csv)?,
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    eprintln!("{}", report.summary_line());
    Ok(EXIT_OK)
}

fn cmd_preprocess(args: &PreprocessArgs) -> Result<u8, Error> {
    if args.merge_dist <= 0.0 || args.merge_angle <= 0.0 || args.min_length <= 0.0 {
        return Err(Error::parse("thresholds must be positive"));
    }
    let text = fs::read_to_string(&args.input)?;
    let segments = parse_segments(&text)?;
    let before = segments.len();
    let set = preprocess::SegmentSet::new(segments).with_thresholds(
        args.merge_dist,
        args.merge_angle,
        args.min_length,
    );
    let merged = preprocess::merge_all(&set);
    fs::write(&args.out, format_segments(&merged.segments))?;
    eprintln!("segments: {before} in, {} out", merged.segments.len());
    Ok(EXIT_OK)
}
