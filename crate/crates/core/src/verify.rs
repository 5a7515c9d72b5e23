//! Independent checks of a candidate `(K, n)`: does the trace close into a
//! smooth curve that halves the sphere, and does rolling `n` periods bring
//! the ball back to its starting orientation?
//!
//! Verification never aborts. Quantities that cannot be measured (no apex
//! exists at this `K`, say) are reported as missing and fail their gate.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::mesh::{
    assemble_unchecked, AREA_TOLERANCE, DEFAULT_SAMPLES_PER_COPY, JUNCTION_GAP_TOLERANCE, TANGENT_KINK_TOLERANCE,
};
use crate::path::PlanarPath;
use crate::solver::{choose_apex, REPORT_SCHEMA_VERSION};
use crate::sphere::{region_area_r, trace_loop_area, Apex};
use crate::trace::{net_rotation, trace, TraceOptions};

pub const ROTATION_TOLERANCE: f64 = 1e-6;
pub const AREA_RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trace: TraceOptions,
    pub samples_per_copy: usize,
    /// Apex to close through; `None` picks it by the sign of `S^D`.
    pub apex: Option<Apex>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trace: TraceOptions::default(), samples_per_copy: DEFAULT_SAMPLES_PER_COPY, apex: None }
    }
}

/// One named check against its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub value: Option<f64>,
    pub limit: f64,
    pub pass: bool,
}

impl Gate {
    fn new(name: &str, value: Option<f64>, limit: f64) -> Self {
        let pass = value.is_some_and(|v| v.abs() < limit);
        Self { name: name.to_string(), value, limit, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub n: u32,
    pub x: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub apex_choice: Option<Apex>,
    /// `K·d_T(K)`.
    pub base_angle: f64,
    pub junction_gap: Option<f64>,
    pub tangent_kink: Option<f64>,
    pub symmetry_residual: Option<f64>,
    /// Area enclosed by the closed curve on the radius-`K⁻¹` sphere.
    pub enclosed_area: Option<f64>,
    /// `2π·K⁻²`.
    pub enclosed_area_expected: f64,
    pub halving_residual: Option<f64>,
    /// `| K²·|S^R_x(K)| − x |`.
    pub area_residual: Option<f64>,
    pub rotation_residual: Option<f64>,
    pub rotation_angle: Option<f64>,
    pub gates: Vec<Gate>,
    pub all_pass: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_gates(&self) -> Vec<&str> {
        self.gates.iter().filter(|g| !g.pass).map(|g| g.name.as_str()).collect()
    }
}

/// Measures every closure residual of `path` rolled on the sphere of
/// inverse radius `k` for period `n`.
pub fn verify(path: &PlanarPath, k: f64, n: u32, opts: &VerifyOptions) -> VerificationReport {
    let x = if n > 0 { TAU / n as f64 } else { f64::NAN };
    let mut notes = Vec::new();
    let mut rep = VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n,
        x,
        k,
        apex_choice: None,
        base_angle: f64::NAN,
        junction_gap: None,
        tangent_kink: None,
        symmetry_residual: None,
        enclosed_area: None,
        enclosed_area_expected: TAU / (k * k),
        halving_residual: None,
        area_residual: None,
        rotation_residual: None,
        rotation_angle: None,
        gates: Vec::new(),
        all_pass: false,
        notes: Vec::new(),
    };

    if n == 0 {
        notes.push("period count must be at least 1".to_string());
    } else {
        match net_rotation(path, k, &opts.trace) {
            Ok(rot) => {
                rep.rotation_residual = Some(rot.closure_residual(n));
                rep.rotation_angle = Some(rot.angle);
            }
            Err(e) => notes.push(format!("rotation: {e}")),
        }
        match trace(path, k, &opts.trace) {
            Ok(tr) => {
                rep.base_angle = tr.endpoint_angle();
                let apex = match opts.apex {
                    Some(a) => Some(a),
                    None => match trace_loop_area(&tr) {
                        Ok(d) => Some(choose_apex(if d.abs() < 1e-15 { 0.0 } else { d })),
                        Err(e) => {
                            notes.push(format!("S^D: {e}"));
                            None
                        }
                    },
                };
                rep.apex_choice = apex;
                if let Some(apex) = apex {
                    match region_area_r(&tr, x, apex) {
                        Ok(a) => rep.area_residual = Some((a.unit_s_r().abs() - x).abs()),
                        Err(e) => notes.push(format!("S^R: {e}")),
                    }
                    match assemble_unchecked(&tr, n, apex, opts.samples_per_copy) {
                        Ok(curve) => {
                            let d = curve.diagnostics;
                            rep.junction_gap = Some(d.junction_gap);
                            rep.tangent_kink = Some(d.tangent_kink);
                            rep.symmetry_residual = Some(d.symmetry_residual);
                            rep.enclosed_area = Some(d.enclosed_area.abs() / (k * k));
                            rep.halving_residual = Some(d.halving_residual);
                            notes.extend(curve.warnings);
                        }
                        Err(e) => notes.push(format!("closed curve: {e}")),
                    }
                }
            }
            Err(e) => notes.push(format!("trace: {e}")),
        }
    }

    rep.gates = vec![
        Gate::new("junction_gap", rep.junction_gap, JUNCTION_GAP_TOLERANCE),
        Gate::new("tangent_kink", rep.tangent_kink, TANGENT_KINK_TOLERANCE),
        Gate::new("enclosed_area", rep.halving_residual, AREA_TOLERANCE),
        Gate::new("area_residual", rep.area_residual, AREA_RESIDUAL_TOLERANCE),
        Gate::new("rotation_residual", rep.rotation_residual, ROTATION_TOLERANCE),
    ];
    rep.all_pass = rep.gates.iter().all(|g| g.pass);
    rep.notes = notes;
    rep
}
