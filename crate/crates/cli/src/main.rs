//! `trajectoid`: build period-n trajectoids from the command line.
//!
//! Exit codes: 0 success, 1 usage/input/IO error or failed residual gates,
//! 2 `x` exceeds `X`, 3 bracket failure, 4 mesh invariant failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trajectoid::mesh::MeshFormat;

#[derive(Parser, Debug)]
#[command(name = "trajectoid", version, about = "Construct trajectoids that roll along periodic planar paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the path comes from: a spec file or a built-in preset.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Path spec JSON (`{"type": "curvature", "L": .., "samples": [[s, κ], ..]}` or a polyline).
    #[arg(long, env = "TRAJ_PATH")]
    pub path: Option<PathBuf>,
    /// Built-in preset: straight, sine, zigzag, serpentine or fourier.
    #[arg(long, env = "TRAJ_PRESET")]
    pub preset: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Roll a sphere of inverse radius K along one period; write the trace CSV.
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long = "K", env = "TRAJ_K", value_parser = positive)]
        k: f64,
        /// RK4 steps per period.
        #[arg(long, env = "TRAJ_SAMPLES")]
        samples: Option<usize>,
        /// CSV output; stdout when omitted.
        #[arg(long, env = "TRAJ_OUT")]
        out: Option<PathBuf>,
        /// SVG of the planar path next to the azimuthal projection of the trace.
        #[arg(long, env = "TRAJ_SVG")]
        svg: Option<PathBuf>,
    },
    /// Find Q_x for period n and check it with both oracles; write the report JSON.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, env = "TRAJ_N", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// RK4 steps per period.
        #[arg(long, env = "TRAJ_SAMPLES")]
        samples: Option<usize>,
        #[arg(long, env = "TRAJ_AREA_GATE", default_value_t = 1e-8, value_parser = positive)]
        area_gate: f64,
        #[arg(long, env = "TRAJ_ROTATION_GATE", default_value_t = 1e-6, value_parser = positive)]
        rotation_gate: f64,
        /// Report JSON; stdout when omitted.
        #[arg(long, env = "TRAJ_OUT")]
        out: Option<PathBuf>,
    },
    /// Solve, assemble the closed contact curve and write the convex body.
    Mesh {
        #[command(flatten)]
        input: Input,
        #[arg(long, env = "TRAJ_N", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Use this K instead of solving. Requires --force.
        #[arg(long = "K", env = "TRAJ_K", value_parser = positive, requires = "force")]
        k: Option<f64>,
        /// Accept an explicit K and write the mesh even when invariants fail.
        #[arg(long, env = "TRAJ_FORCE")]
        force: bool,
        /// Contact samples per copy of the trace.
        #[arg(long, env = "TRAJ_SAMPLES", default_value_t = trajectoid::mesh::DEFAULT_SAMPLES_PER_COPY)]
        samples: usize,
        #[arg(long, env = "TRAJ_OUT")]
        out: PathBuf,
        #[arg(long, env = "TRAJ_FORMAT", default_value = "stl")]
        format: MeshFormat,
    },
    /// Measure every closure residual at an explicit (K, n). Never fails on bad residuals.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long = "K", env = "TRAJ_K", value_parser = positive)]
        k: f64,
        #[arg(long, env = "TRAJ_N")]
        n: u32,
        /// Contact samples per copy of the trace.
        #[arg(long, env = "TRAJ_SAMPLES", default_value_t = trajectoid::mesh::DEFAULT_SAMPLES_PER_COPY)]
        samples: usize,
        #[arg(long, env = "TRAJ_OUT")]
        out: Option<PathBuf>,
    },
    /// Tabulate K·d_T(K). Without a K range, the solver's own scan is used.
    Scan {
        #[command(flatten)]
        input: Input,
        /// Grid points when a K range is given.
        #[arg(long, env = "TRAJ_SAMPLES", default_value_t = 200)]
        samples: usize,
        #[arg(long = "k-min", env = "TRAJ_K_MIN", value_parser = positive, requires = "k_max")]
        k_min: Option<f64>,
        #[arg(long = "k-max", env = "TRAJ_K_MAX", value_parser = positive, requires = "k_min")]
        k_max: Option<f64>,
        #[arg(long, env = "TRAJ_OUT")]
        out: Option<PathBuf>,
        #[arg(long, env = "TRAJ_SVG")]
        svg: Option<PathBuf>,
    },
    /// Write a preset path as a spec JSON.
    Example {
        name: String,
        /// Curvature samples over the period.
        #[arg(long, env = "TRAJ_SAMPLES", default_value_t = trajectoid::corpus::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, env = "TRAJ_OUT")]
        out: Option<PathBuf>,
    },
    /// Solve and verify random smooth paths, including a perturbed negative control.
    Selftest {
        #[arg(long, env = "TRAJ_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, env = "TRAJ_CASES", default_value_t = 5)]
        cases: u32,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("TRAJ_LOG", "warn")).init();
    // usage errors exit 1 so that 2 keeps its meaning
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
