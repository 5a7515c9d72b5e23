use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::info;
use trajectoid::corpus;
use trajectoid::mesh::{
    assemble_unchecked, build_mesh, export_mesh, ClosedSphericalCurve, MeshReport, AREA_TOLERANCE,
    JUNCTION_GAP_TOLERANCE, TANGENT_KINK_TOLERANCE,
};
use trajectoid::path::{PathOptions, PathSpec, PlanarPath};
use trajectoid::solver::{
    compute_bounds, geometric_grid, min_period, scan_dtk, solve, solve_with_bounds, write_scan_csv, SolveError,
    SolverConfig,
};
use trajectoid::sphere::trace_loop_area;
use trajectoid::svg;
use trajectoid::trace::{trace, TraceOptions};
use trajectoid::verify::{verify, VerifyOptions};

use crate::{Command, Input};

pub const EXIT_GATES: u8 = 1;
pub const EXIT_X_RANGE: u8 = 2;
pub const EXIT_BRACKET: u8 = 3;
pub const EXIT_MESH: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::new(1, e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::XOutOfRange { .. } => EXIT_X_RANGE,
            SolveError::BracketFailure { .. } => EXIT_BRACKET,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

struct Loaded {
    id: String,
    path: PlanarPath,
}

fn load(input: &Input) -> CliResult<Loaded> {
    let (id, spec) = match (&input.path, &input.preset) {
        (Some(file), _) => {
            let text = fs::read_to_string(file).map_err(|e| CliError::new(1, format!("{}: {e}", file.display())))?;
            let spec = PathSpec::from_json(&text).map_err(|e| CliError::new(1, format!("{}: {e}", file.display())))?;
            let id = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (id, spec)
        }
        (None, Some(name)) => {
            let spec = corpus::by_name(name, corpus::DEFAULT_SAMPLES).ok_or_else(|| {
                CliError::new(1, format!("unknown preset `{name}`; expected one of {}", corpus::NAMES.join(", ")))
            })?;
            (name.clone(), spec)
        }
        (None, None) => return Err(CliError::new(1, "no input: pass --path or --preset")),
    };
    let path = spec.build(&PathOptions::default()).map_err(|e| CliError::new(1, format!("{id}: {e}")))?;
    Ok(Loaded { id, path })
}

/// Writes to `out`, or stdout when `None`.
fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| CliError::new(1, format!("{}: {e}", p.display())))?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
        }
    }
    Ok(())
}

fn write_text(out: Option<&Path>, text: &str) -> CliResult<()> {
    emit(out, |w| w.write_all(text.as_bytes()))
}

fn trace_options(samples: Option<usize>) -> TraceOptions {
    TraceOptions { steps: samples }
}

pub fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Trace { input, k, samples, out, svg } => cmd_trace(&input, k, samples, out, svg),
        Command::Solve { input, n, samples, area_gate, rotation_gate, out } => {
            let cfg = SolverConfig { trace: trace_options(samples), area_gate, rotation_gate, ..SolverConfig::default() };
            cmd_solve(&input, n, &cfg, out.as_deref())
        }
        Command::Mesh { input, n, k, force, samples, out, format } => {
            cmd_mesh(&input, n, k, force, samples, &out, format)
        }
        Command::Verify { input, k, n, samples, out } => cmd_verify(&input, k, n, samples, out.as_deref()),
        Command::Scan { input, samples, k_min, k_max, out, svg } => {
            cmd_scan(&input, samples, k_min.zip(k_max), out.as_deref(), svg.as_deref())
        }
        Command::Example { name, samples, out } => {
            let spec = corpus::by_name(&name, samples).ok_or_else(|| {
                CliError::new(1, format!("unknown preset `{name}`; expected one of {}", corpus::NAMES.join(", ")))
            })?;
            write_text(out.as_deref(), &(spec.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Selftest { seed, cases } => cmd_selftest(seed, cases),
    }
}

fn cmd_trace(input: &Input, k: f64, samples: Option<usize>, out: Option<PathBuf>, svg_out: Option<PathBuf>) -> CliResult<u8> {
    let loaded = load(input)?;
    let tr = trace(&loaded.path, k, &trace_options(samples)).map_err(|e| CliError::new(1, e.to_string()))?;
    emit(out.as_deref(), |w| tr.write_csv(w))?;
    if let Some(p) = svg_out {
        write_text(Some(&p), &svg::plan_and_projection(&loaded.path, &tr, 400))?;
    }
    Ok(0)
}

fn cmd_solve(input: &Input, n: u32, cfg: &SolverConfig, out: Option<&Path>) -> CliResult<u8> {
    let loaded = load(input)?;
    let r = solve(&loaded.path, n, cfg)?;
    let report = r.report(cfg);
    write_text(out, &(report.to_json() + "\n"))?;
    if report.gates_passed {
        info!("{}: n = {n}, Q_x = {}", loaded.id, r.q_x);
        Ok(0)
    } else {
        eprintln!(
            "residual gates failed: area {:e} (limit {:e}), rotation {:e} (limit {:e})",
            r.area_residual, cfg.area_gate, r.rotation_residual, cfg.rotation_gate
        );
        Ok(EXIT_GATES)
    }
}

/// One line of the mesh summary.
struct Check {
    name: &'static str,
    value: String,
    pass: bool,
}

fn mesh_checks(curve: &ClosedSphericalCurve, rep: &MeshReport) -> Vec<Check> {
    let d = &curve.diagnostics;
    let within = |v: f64, limit: f64| v <= limit;
    vec![
        Check {
            name: "watertight",
            value: format!(
                "V {} E {} F {} (V-E+F = {})",
                rep.vertices, rep.edges, rep.triangles, rep.euler_characteristic
            ),
            pass: rep.watertight && rep.euler_characteristic == 2 && rep.degenerate_triangles == 0,
        },
        Check { name: "convex", value: format!("{:.3e}·r", rep.convexity_violation), pass: !rep.failures().contains(&"convexity") },
        Check {
            name: "inscribed radius",
            value: format!("{} (relative residual {:.3e})", rep.inscribed_radius, rep.inscribed_residual),
            pass: !rep.failures().contains(&"inscribed radius"),
        },
        Check { name: "support", value: format!("{:.3e}·r", rep.support_residual), pass: !rep.failures().contains(&"support") },
        Check {
            name: "junction gap",
            value: format!("{:.3e}", d.junction_gap),
            pass: within(d.junction_gap, JUNCTION_GAP_TOLERANCE),
        },
        Check {
            name: "tangent kink",
            value: format!("{:.3e} rad", d.tangent_kink),
            pass: within(d.tangent_kink, TANGENT_KINK_TOLERANCE),
        },
        Check {
            name: "area halving",
            value: format!("{:.3e}", d.halving_residual),
            pass: within(d.halving_residual, AREA_TOLERANCE),
        },
    ]
}

fn cmd_mesh(
    input: &Input,
    n: u32,
    k: Option<f64>,
    force: bool,
    samples: usize,
    out: &Path,
    format: trajectoid::mesh::MeshFormat,
) -> CliResult<u8> {
    let loaded = load(input)?;
    let cfg = SolverConfig::default();
    let (tr, apex) = match k {
        Some(k) => {
            let tr = trace(&loaded.path, k, &cfg.trace).map_err(|e| CliError::new(1, e.to_string()))?;
            let d = trace_loop_area(&tr).map_err(|e| {
                CliError::new(EXIT_MESH, format!("mesh invariant failed: junction gap (no closing region: {e})"))
            })?;
            let apex = trajectoid::solver::choose_apex(if d.abs() < 1e-15 { 0.0 } else { d });
            (tr, apex)
        }
        None => {
            let r = solve(&loaded.path, n, &cfg)?;
            (r.trace, r.apex)
        }
    };
    let curve = assemble_unchecked(&tr, n, apex, samples).map_err(|e| {
        CliError::new(EXIT_MESH, format!("mesh invariant failed: junction gap (the copies cannot be joined: {e})"))
    })?;
    let mut mesh = build_mesh(&curve).map_err(|e| CliError::new(EXIT_MESH, e.to_string()))?;
    mesh.provenance.path_id = loaded.id.clone();
    let rep = mesh.check(&curve.points);
    let checks = mesh_checks(&curve, &rep);
    for c in &checks {
        println!("{:<17} {:<4} {}", c.name, if c.pass { "ok" } else { "FAIL" }, c.value);
    }
    println!("volume            {}", rep.volume);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() || force {
        export_mesh(&mesh, format, out).map_err(|e| CliError::new(1, format!("{}: {e}", out.display())))?;
        println!("wrote {} ({} triangles)", out.display(), mesh.triangles.len());
    }
    if failed.is_empty() {
        Ok(0)
    } else {
        Err(CliError::new(EXIT_MESH, format!("mesh invariant failed: {}", failed.join(", "))))
    }
}

fn cmd_verify(input: &Input, k: f64, n: u32, samples: usize, out: Option<&Path>) -> CliResult<u8> {
    let loaded = load(input)?;
    let rep = verify(&loaded.path, k, n, &VerifyOptions { samples_per_copy: samples, ..VerifyOptions::default() });
    write_text(out, &(rep.to_json() + "\n"))?;
    if !rep.all_pass {
        eprintln!("gates above limit: {}", rep.failed_gates().join(", "));
    }
    Ok(0)
}

fn cmd_scan(input: &Input, samples: usize, range: Option<(f64, f64)>, out: Option<&Path>, svg_out: Option<&Path>) -> CliResult<u8> {
    let loaded = load(input)?;
    let cfg = SolverConfig::default();
    let table = match range {
        Some((lo, hi)) => {
            if !(lo < hi) || samples < 2 {
                return Err(CliError::new(1, format!("need k-min < k-max and at least 2 samples, got [{lo}, {hi}] with {samples}")));
            }
            scan_dtk(&loaded.path, &geometric_grid(lo, hi, samples), &cfg.trace).map_err(|e| CliError::new(1, e.to_string()))?
        }
        None => {
            let b = compute_bounds(&loaded.path, &cfg)?;
            eprintln!("X = {}, N = {}, K1 = {}, K2 = {}, K0 = {}", b.x_max, min_period(&b), b.k1, b.k2, b.k0);
            b.scan
        }
    };
    emit(out, |w| write_scan_csv(&table, w))?;
    if let Some(p) = svg_out {
        let x_max = table.iter().map(|r| r.1).fold(0.0, f64::max);
        write_text(Some(p), &svg::scan_plot(&table, x_max))?;
    }
    Ok(0)
}

fn cmd_selftest(seed: u64, cases: u32) -> CliResult<u8> {
    let cfg = SolverConfig::default();
    let mut failures = 0;
    for i in 0..cases {
        let case_seed = seed.wrapping_add(i as u64);
        let scale = 1.0 + (case_seed % 4) as f64;
        let spec = corpus::fourier(case_seed, scale, 513);
        let line = (|| -> Result<String, String> {
            let p = spec.build(&PathOptions::default()).map_err(|e| e.to_string())?;
            let b = compute_bounds(&p, &cfg).map_err(|e| e.to_string())?;
            let n = min_period(&b).max(2);
            let r = solve_with_bounds(&p, n, &b, &cfg).map_err(|e| e.to_string())?;
            let good = verify(&p, r.q_x, n, &VerifyOptions::default());
            let bad = verify(&p, r.q_x * 1.01, n, &VerifyOptions::default());
            let msg = format!(
                "X {:.4} N {} Q_x {:.6} area {:.1e} rotation {:.1e}",
                b.x_max, n, r.q_x, r.area_residual, r.rotation_residual
            );
            if !r.passes_gates(&cfg) || !good.all_pass {
                Err(format!("{msg}; gates failed: {:?}", good.failed_gates()))
            } else if bad.all_pass {
                Err(format!("{msg}; 1% perturbation passed every gate"))
            } else {
                Ok(msg)
            }
        })();
        match line {
            Ok(m) => println!("ok   seed {case_seed} scale {scale}: {m}"),
            Err(m) => {
                failures += 1;
                println!("FAIL seed {case_seed} scale {scale}: {m}");
            }
        }
    }
    println!("{}/{} cases passed", cases - failures, cases);
    Ok(if failures == 0 { 0 } else { EXIT_GATES })
}
