//! Finding a sphere scale `Q_x` with Property `x = 2π/n`.
//!
//! The search follows the existence argument step by step:
//!
//! 1. `g(K) = K·d_T(K)` starts at 0 with slope `d0 > 0`; scan it for the
//!    first loss of monotonicity to get `K⁽²⁾`, then `K⁽⁰⁾ = min(π/L, K⁽²⁾)` and
//!    `X = g(K⁽⁰⁾)`.
//! 2. For `x ≤ X`, bisect `g(K_x) = x` on `(0, K⁽⁰⁾]`.
//! 3. Pick the apex whose triangle area has the sign of `S^D(K_x)`. Then
//!    `|S^R_x(K_x)| ≥ K_x⁻²·x`, while `K²·S^R_x(K) → 0` as `K → 0`; scan down
//!    from `K_x` for the first sign change and bisect it.
//!
//! Only bracketing bisection is used: the argument guarantees continuity and
//! a sign change, nothing more.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::PlanarPath;
use crate::sphere::{delta_area_formula, region_areas_with, trace_loop_area, Apex, GeometryError, RegionAreas};
use crate::trace::{angle_between, net_rotation, trace, trace_end_frame, SphericalTrace, TraceError, TraceOptions, Vec3};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const PERIOD_ONE_NOTE: &str = "Property 2π/1 is not guaranteed: a period-1 trajectoid needs the net \
rolling rotation to be the identity (three conditions on one unknown K), which most paths never satisfy; \
try n ≥ N";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("x = {x} exceeds X = {max_x}; guaranteed for n ≥ {n_min}")]
    XOutOfRange { x: f64, max_x: f64, n_min: u32 },
    #[error("bracket failure: {reason}")]
    BracketFailure { reason: String },
    #[error("K·d_T(K) decreases at the smallest scanned K = {0:e}; the path is not smooth enough to scan")]
    NonSmoothPath(f64),
    #[error("period count must be at least 1")]
    InvalidPeriod,
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Tunables of the solve pipeline. Serialised into reports.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SolverConfig {
    #[serde(flatten)]
    pub trace: TraceOptions,
    /// Points in the geometric `K` grid used for `K⁽²⁾`.
    pub scan_resolution: usize,
    /// Smallest scanned `K`, relative to `K⁽¹⁾`.
    pub scan_floor: f64,
    /// Relative bracket width for `K_x`; 0 bisects to adjacent floats. The
    /// closure defect grows like the square root of `x − K_x·d_T(K_x)`, so
    /// symmetric paths (where `Q_x = K_x`) need the tightest bracket.
    pub kx_rel_tol: f64,
    pub qx_rel_tol: f64,
    /// Geometric steps in the downward scan from `K_x`.
    pub qx_scan_steps: usize,
    /// Smallest `K` of the downward scan, relative to `K_x`.
    pub qx_scan_floor: f64,
    pub area_gate: f64,
    pub rotation_gate: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            trace: TraceOptions::default(),
            scan_resolution: 1000,
            scan_floor: 1e-4,
            kx_rel_tol: 0.0,
            qx_rel_tol: 1e-10,
            qx_scan_steps: 512,
            qx_scan_floor: 1e-4,
            area_gate: 1e-8,
            rotation_gate: 1e-6,
        }
    }
}

/// `K⁽¹⁾`, `K⁽²⁾`, `K⁽⁰⁾` and `X`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolverBounds {
    pub k1: f64,
    pub k2: f64,
    pub k0: f64,
    pub x_max: f64,
    /// The `(K, K·d_T(K))` scan behind `K⁽²⁾`.
    #[serde(skip)]
    pub scan: Vec<(f64, f64)>,
}

pub(crate) fn par_map<T, F>(ks: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ks.par_iter().map(|&k| f(k)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ks.iter().map(|&k| f(k)).collect()
    }
}

/// Largest `f(item)`, `-∞` for an empty slice.
pub(crate) fn par_chunks_max<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(&f).reduce(|| f64::NEG_INFINITY, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(&f).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `count` points from `lo` to `hi` in geometric progression, both ends exact.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let ratio = (hi / lo).ln();
    (0..count)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == count => hi,
            _ => lo * (ratio * i as f64 / (count - 1) as f64).exp(),
        })
        .collect()
}

/// `K·d_T(K)`: the angle between the trace endpoints.
pub fn dtk(path: &PlanarPath, k: f64, opts: &TraceOptions) -> Result<f64, TraceError> {
    let end = trace_end_frame(path, k, opts)?;
    Ok(angle_between(&Vec3::z(), &end.p))
}

/// Tabulates `(K, K·d_T(K))` over `grid`.
pub fn scan_dtk(path: &PlanarPath, grid: &[f64], opts: &TraceOptions) -> Result<Vec<(f64, f64)>, TraceError> {
    par_map(grid, |k| dtk(path, k, opts).map(|g| (k, g))).into_iter().collect()
}

pub fn write_scan_csv<W: Write>(table: &[(f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "K,dTK")?;
    for (k, g) in table {
        writeln!(out, "{k},{g}")?;
    }
    Ok(())
}

pub fn compute_bounds(path: &PlanarPath, cfg: &SolverConfig) -> Result<SolverBounds, SolveError> {
    let k1 = PI / path.length();
    let mut floor = cfg.scan_floor;
    for _attempt in 0..2 {
        let grid = geometric_grid(k1 * floor, k1, cfg.scan_resolution);
        let scan = scan_dtk(path, &grid, &cfg.trace)?;
        let Some(i) = scan.windows(2).position(|w| w[1].1 <= w[0].1) else {
            let x_max = scan.last().unwrap().1;
            return Ok(SolverBounds { k1, k2: k1, k0: k1, x_max, scan });
        };
        if i == 0 {
            floor *= 1e-3;
            continue;
        }
        // the maximum of g lies in [K_{i-1}, K_{i+1}]; bisect on the sign of g'
        let (mut lo, mut hi) = (scan[i - 1].0, scan[i + 1].0);
        let slope = |k: f64| -> Result<f64, TraceError> {
            let d = 1e-6 * k;
            Ok(dtk(path, k + d, &cfg.trace)? - dtk(path, k - d, &cfg.trace)?)
        };
        while hi - lo > 1e-10 * hi {
            let mid = 0.5 * (lo + hi);
            if slope(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k2 = lo;
        let k0 = k1.min(k2);
        let x_max = dtk(path, k0, &cfg.trace)?;
        let scan = scan.into_iter().filter(|&(k, _)| k <= k0).collect();
        return Ok(SolverBounds { k1, k2, k0, x_max, scan });
    }
    Err(SolveError::NonSmoothPath(k1 * floor))
}

/// Relative slack on `X` when comparing it with `2π/n`, so that the straight
/// path's `X = π` is not lost to round-off.
pub const X_TOLERANCE: f64 = 1e-12;

fn within_x(x: f64, x_max: f64) -> bool {
    x <= x_max * (1.0 + X_TOLERANCE)
}

/// `N = ⌈2π/X⌉`, adjusted so that `2π/N ≤ X < 2π/(N−1)` holds in floating
/// point (up to [`X_TOLERANCE`]).
pub fn min_period(bounds: &SolverBounds) -> u32 {
    let x = bounds.x_max * (1.0 + X_TOLERANCE);
    let mut n = (TAU / x).ceil().max(1.0) as u32;
    while TAU / n as f64 > x {
        n += 1;
    }
    while n > 1 && TAU / (n - 1) as f64 <= x {
        n -= 1;
    }
    n
}

/// Root of `K·d_T(K) = x` on `(0, K⁽⁰⁾]`. The returned `K` satisfies
/// `K·d_T(K) ≤ x`, so the triangle over `AB` stays constructible.
pub fn find_kx(path: &PlanarPath, x: f64, bounds: &SolverBounds, cfg: &SolverConfig) -> Result<f64, SolveError> {
    if !(x > 0.0) || !within_x(x, bounds.x_max) {
        return Err(SolveError::XOutOfRange { x, max_x: bounds.x_max, n_min: min_period(bounds) });
    }
    if x >= bounds.x_max {
        return Ok(bounds.k0);
    }
    let (mut lo, mut hi) = (0.0, bounds.k0);
    while hi - lo > cfg.kx_rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dtk(path, mid, &cfg.trace)? <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One evaluation of `f(K) = sign·K²·S^R_x(K) − x`.
#[derive(Debug, Clone)]
pub struct AreaSample {
    pub k: f64,
    pub f: f64,
    pub areas: RegionAreas,
    pub trace: SphericalTrace,
}

fn area_sample(path: &PlanarPath, k: f64, x: f64, apex: Apex, opts: &TraceOptions) -> Result<AreaSample, SolveError> {
    let tr = trace(path, k, opts)?;
    let unit_d = trace_loop_area(&tr)?;
    let areas = region_areas_with(&tr, unit_d, x, apex, tr.endpoint_angle())?;
    let f = apex.sign() * areas.unit_s_r() - x;
    Ok(AreaSample { k, f, areas, trace: tr })
}

/// Apex choice by the sign rule: `sign(S^Δ) = sign(S^D)`, `C1` on a tie.
pub fn choose_apex(unit_s_d: f64) -> Apex {
    Apex::from_sign(unit_s_d)
}

#[derive(Debug, Clone)]
pub struct QxSolution {
    pub k_x: f64,
    pub q_x: f64,
    pub apex: Apex,
    /// `f(K_x) = |S^D(K_x)|·K_x² + |S^Δ|·K_x² − x`, non-negative in theory.
    pub f_at_kx: f64,
    pub at_root: AreaSample,
}

/// `Q_x`: the largest `K < K_x` with `|S^R_x(K)| = K⁻²·x`.
///
/// With the apex fixed by the sign rule, `S^R` keeps the apex sign on
/// `[Q_x, K_x]`, so the signed function `sign·K²·S^R − x` has the same first
/// root as `K²·|S^R| − x` and is continuous across it.
pub fn find_qx(path: &PlanarPath, x: f64, bounds: &SolverBounds, cfg: &SolverConfig) -> Result<QxSolution, SolveError> {
    let k_x = find_kx(path, x, bounds, cfg)?;
    let tr = trace(path, k_x, &cfg.trace)?;
    let unit_d = trace_loop_area(&tr)?;
    let apex = choose_apex(if unit_d.abs() < 1e-15 { 0.0 } else { unit_d });
    // |S^Δ(K_x)| = K_x⁻²·x exactly
    let areas = region_areas_with(&tr, unit_d, x, apex, x)?;
    let f_at_kx = apex.sign() * areas.unit_s_r() - x;
    let top = AreaSample { k: k_x, f: f_at_kx, areas, trace: tr };
    if f_at_kx < -1e-9 {
        return Err(SolveError::BracketFailure {
            reason: format!("f(K_x) = {f_at_kx:e} < 0 at K_x = {k_x}; |S^R(K_x)| should be at least K_x⁻²·x"),
        });
    }
    if f_at_kx < 0.1 * cfg.area_gate {
        return Ok(QxSolution { k_x, q_x: k_x, apex, f_at_kx, at_root: top });
    }

    let grid = geometric_grid(k_x * cfg.qx_scan_floor, k_x, cfg.qx_scan_steps + 1);
    let mut upper = top;
    let mut lower = None;
    // scan downward in chunks so the serial build can stop early
    'scan: for chunk in grid[..grid.len() - 1].rchunks(32) {
        let mut ks: Vec<f64> = chunk.to_vec();
        ks.reverse();
        let evals = par_map(&ks, |k| area_sample(path, k, x, apex, &cfg.trace));
        for e in evals {
            let e = e?;
            if e.f < 0.0 {
                lower = Some(e);
                break 'scan;
            }
            upper = e;
        }
    }
    let Some(mut lower) = lower else {
        return Err(SolveError::BracketFailure {
            reason: format!("no sign change of f on [{:e}, {k_x}]", k_x * cfg.qx_scan_floor),
        });
    };
    // stop once the bracket is tight and the residual is well under the gate,
    // or the bracket cannot shrink further
    loop {
        let tight = upper.k - lower.k <= cfg.qx_rel_tol * upper.k;
        let small = lower.f.abs().min(upper.f.abs()) < 0.1 * cfg.area_gate;
        let mid = 0.5 * (lower.k + upper.k);
        if (tight && small) || mid <= lower.k || mid >= upper.k {
            break;
        }
        let e = area_sample(path, mid, x, apex, &cfg.trace)?;
        if e.f < 0.0 {
            lower = e;
        } else if e.f > 0.0 {
            upper = e;
        } else {
            upper = e;
            break;
        }
    }
    let at_root = if lower.f.abs() < upper.f.abs() { lower } else { upper };
    Ok(QxSolution { k_x, q_x: at_root.k, apex, f_at_kx, at_root })
}

/// Everything a solve produces.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub n: u32,
    pub x: f64,
    pub bounds: SolverBounds,
    pub n_min: u32,
    pub k_x: f64,
    pub q_x: f64,
    pub apex: Apex,
    pub areas: RegionAreas,
    /// `| |S^R|·Q_x² − x |`
    pub area_residual: f64,
    /// `‖M(Q_x)ⁿ − I‖_F`
    pub rotation_residual: f64,
    /// Angle of the net one-period rotation `M(Q_x)`; equals `x` at a true root.
    pub rotation_angle: f64,
    pub trace: SphericalTrace,
}

impl SolveResult {
    pub fn passes_gates(&self, cfg: &SolverConfig) -> bool {
        self.area_residual < cfg.area_gate && self.rotation_residual < cfg.rotation_gate
    }

    pub fn report(&self, cfg: &SolverConfig) -> SolveReport {
        SolveReport {
            schema_version: REPORT_SCHEMA_VERSION,
            n: self.n,
            x: self.x,
            k1: self.bounds.k1,
            k2: self.bounds.k2,
            k0: self.bounds.k0,
            x_max: self.bounds.x_max,
            n_min: self.n_min,
            k_x: self.k_x,
            q_x: self.q_x,
            apex_choice: self.apex,
            area_residual: self.area_residual,
            rotation_residual: self.rotation_residual,
            rotation_angle: self.rotation_angle,
            s_d: self.areas.s_d,
            s_delta: self.areas.s_delta,
            s_r: self.areas.s_r,
            gates_passed: self.passes_gates(cfg),
            config: *cfg,
        }
    }
}

/// Solve report JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolveReport {
    pub schema_version: u32,
    pub n: u32,
    pub x: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    #[serde(rename = "X")]
    pub x_max: f64,
    #[serde(rename = "N")]
    pub n_min: u32,
    #[serde(rename = "K_x")]
    pub k_x: f64,
    #[serde(rename = "Q_x")]
    pub q_x: f64,
    pub apex_choice: Apex,
    pub area_residual: f64,
    pub rotation_residual: f64,
    pub rotation_angle: f64,
    #[serde(rename = "S_D")]
    pub s_d: f64,
    #[serde(rename = "S_Delta")]
    pub s_delta: f64,
    #[serde(rename = "S_R")]
    pub s_r: f64,
    pub gates_passed: bool,
    pub config: SolverConfig,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs bounds → `K_x` → `Q_x` → dual-oracle residuals for period `n`.
pub fn solve(path: &PlanarPath, n: u32, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    check_period(n)?;
    let bounds = compute_bounds(path, cfg)?;
    solve_with_bounds(path, n, &bounds, cfg)
}

fn check_period(n: u32) -> Result<(), SolveError> {
    match n {
        0 => Err(SolveError::InvalidPeriod),
        1 => Err(SolveError::BracketFailure { reason: PERIOD_ONE_NOTE.to_string() }),
        _ => Ok(()),
    }
}

/// [`solve`] with precomputed bounds, for sweeps over `n`.
pub fn solve_with_bounds(
    path: &PlanarPath,
    n: u32,
    bounds: &SolverBounds,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    check_period(n)?;
    let x = TAU / n as f64;
    let n_min = min_period(bounds);
    if !within_x(x, bounds.x_max) {
        return Err(SolveError::XOutOfRange { x, max_x: bounds.x_max, n_min });
    }
    let sol = find_qx(path, x, bounds, cfg)?;
    let areas = sol.at_root.areas;
    let area_residual = (areas.unit_s_r().abs() - x).abs();
    let rot = net_rotation(path, sol.q_x, &cfg.trace)?;
    Ok(SolveResult {
        n,
        x,
        bounds: bounds.clone(),
        n_min,
        k_x: sol.k_x,
        q_x: sol.q_x,
        apex: sol.apex,
        areas,
        area_residual,
        rotation_residual: rot.closure_residual(n),
        rotation_angle: rot.angle,
        trace: sol.at_root.trace,
    })
}

/// Area of the isosceles triangle at `K` for the current trace, exposed for
/// diagnostics.
pub fn delta_area_at(trace: &SphericalTrace, x: f64) -> Result<f64, GeometryError> {
    delta_area_formula(x, trace.endpoint_angle(), trace.inv_radius())
}
