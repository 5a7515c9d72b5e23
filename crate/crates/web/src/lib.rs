//! Browser demo: preview a rolling trace, solve for a period, and view the
//! resulting body. Every export takes a preset name or a path spec JSON.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use trajectoid::corpus;
use trajectoid::mesh::{assemble_closed_curve, build_mesh};
use trajectoid::path::{PathOptions, PathSpec, PlanarPath};
use trajectoid::solver::{compute_bounds, min_period, solve_with_bounds, SolverConfig};
use trajectoid::svg;
use trajectoid::trace::{trace, TraceOptions};

/// Curvature samples for presets; coarser than the CLI default to keep the
/// page responsive.
const PRESET_SAMPLES: usize = 513;

fn load(source: &str) -> Result<PlanarPath, String> {
    let spec = if source.trim_start().starts_with('{') {
        PathSpec::from_json(source).map_err(|e| e.to_string())?
    } else {
        corpus::by_name(source.trim(), PRESET_SAMPLES).ok_or_else(|| format!("unknown preset `{source}`"))?
    };
    spec.build(&PathOptions::default()).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Preview {
    svg: String,
    displacement: f64,
    base_angle: f64,
}

#[derive(Serialize)]
struct Solved {
    report: trajectoid::solver::SolveReport,
    curve_svg: String,
}

#[derive(Serialize)]
struct MeshView {
    svg: String,
    vertices: usize,
    triangles: usize,
    volume: f64,
    failures: Vec<&'static str>,
}

/// JSON list of preset names.
pub fn preset_names() -> String {
    serde_json::to_string(&corpus::NAMES).unwrap()
}

/// Plan view and trace projection at `k`.
pub fn preview_json(source: &str, k: f64) -> Result<String, String> {
    let p = load(source)?;
    let tr = trace(&p, k, &TraceOptions::default()).map_err(|e| e.to_string())?;
    let out = Preview { svg: svg::plan_and_projection(&p, &tr, 300), displacement: p.displacement(), base_angle: tr.endpoint_angle() };
    Ok(serde_json::to_string(&out).unwrap())
}

/// Solve for period `n`; `n = 0` picks the smallest guaranteed period.
pub fn solve_json(source: &str, n: u32) -> Result<String, String> {
    let p = load(source)?;
    let cfg = SolverConfig { scan_resolution: 300, ..SolverConfig::default() };
    let bounds = compute_bounds(&p, &cfg).map_err(|e| e.to_string())?;
    let n = if n == 0 { min_period(&bounds) } else { n };
    let r = solve_with_bounds(&p, n, &bounds, &cfg).map_err(|e| e.to_string())?;
    let curve = assemble_closed_curve(&r.trace, n, r.apex, 256).map_err(|e| e.to_string())?;
    let out = Solved { report: r.report(&cfg), curve_svg: svg::closed_curve(&curve.points, &curve.axis) };
    Ok(serde_json::to_string(&out).unwrap())
}

/// Shaded view of the body for period `n` at scale `k` (a solved `Q_x`).
pub fn mesh_json(source: &str, n: u32, k: f64, samples: usize, yaw: f64, pitch: f64) -> Result<String, String> {
    let p = load(source)?;
    let tr = trace(&p, k, &TraceOptions::default()).map_err(|e| e.to_string())?;
    let d = trajectoid::sphere::trace_loop_area(&tr).map_err(|e| e.to_string())?;
    let apex = trajectoid::solver::choose_apex(if d.abs() < 1e-15 { 0.0 } else { d });
    let curve = assemble_closed_curve(&tr, n, apex, samples.max(64)).map_err(|e| e.to_string())?;
    let mesh = build_mesh(&curve).map_err(|e| e.to_string())?;
    let rep = mesh.check(&curve.points);
    let out = MeshView {
        svg: svg::mesh_view(&mesh, yaw, pitch, 360.0),
        vertices: rep.vertices,
        triangles: rep.triangles,
        volume: rep.volume,
        failures: rep.failures(),
    };
    Ok(serde_json::to_string(&out).unwrap())
}

#[wasm_bindgen]
pub fn presets() -> String {
    preset_names()
}

#[wasm_bindgen]
pub fn preview(source: &str, k: f64) -> Result<String, JsError> {
    preview_json(source, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve(source: &str, n: u32) -> Result<String, JsError> {
    solve_json(source, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mesh(source: &str, n: u32, k: f64, samples: usize, yaw: f64, pitch: f64) -> Result<String, JsError> {
    mesh_json(source, n, k, samples, yaw, pitch).map_err(|e| JsError::new(&e))
}
