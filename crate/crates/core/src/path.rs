//! One period of a periodic planar path, stored as a curvature–arclength table.
//!
//! The canonical representation is a list of `(s, κ)` samples with `κ`
//! linearly interpolated between them. Tangent angle and position are
//! reconstructed by integrating the planar Frenet equations; with piecewise
//! linear curvature the tangent angle is exactly piecewise quadratic, so only
//! the position needs quadrature.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point2 = Vector2<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
    #[error("net displacement {displacement:e} is below tolerance {tolerance:e}")]
    ZeroDisplacement { displacement: f64, tolerance: f64 },
    #[error(
        "start and end tangents differ by {mismatch:e} rad (total turning {turning} rad); \
         pass allow_open to accept non-periodic tangents"
    )]
    TangentMismatch { turning: f64, mismatch: f64 },
    #[error("arclength samples are not strictly increasing at index {index}")]
    NonMonotoneSamples { index: usize },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("path spec: {0}")]
    Spec(String),
}

/// One `(s, κ)` sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub s: f64,
    pub kappa: f64,
}

/// Validation knobs shared by the path constructors.
#[derive(Debug, Clone, Copy)]
pub struct PathOptions {
    /// Accept paths whose total turning is not a multiple of 2π.
    pub allow_open: bool,
    /// Tangent periodicity tolerance in radians.
    pub tangent_tolerance: f64,
    /// Minimum displacement relative to the period length.
    pub displacement_tolerance: f64,
    /// Warn when `|Δκ|·L` between consecutive samples exceeds this.
    pub jump_warning: f64,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            allow_open: false,
            tangent_tolerance: 1e-6,
            displacement_tolerance: 1e-9,
            jump_warning: 1.0,
        }
    }
}

impl PathOptions {
    pub fn open() -> Self {
        Self { allow_open: true, ..Self::default() }
    }
}

/// A curvature jump that violates the smoothness heuristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureJump {
    pub s: f64,
    pub jump: f64,
}

/// One period `T*` of a planar path.
#[derive(Debug, Clone)]
pub struct PlanarPath {
    samples: Vec<CurvatureSample>,
    length: f64,
    start_point: Point2,
    start_angle: f64,
    // tangent angle and position at every sample
    angles: Vec<f64>,
    positions: Vec<Point2>,
    jumps: Vec<CurvatureJump>,
}

// 5-point Gauss–Legendre nodes/weights on [0, 1].
const GL_NODES: [f64; 5] = [
    0.046_910_077_030_668_0,
    0.230_765_344_947_158_5,
    0.5,
    0.769_234_655_052_841_5,
    0.953_089_922_969_332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_5,
    0.239_314_335_249_683_2,
    0.284_444_444_444_444_4,
    0.239_314_335_249_683_2,
    0.118_463_442_528_094_5,
];

impl PlanarPath {
    fn build(
        samples: Vec<CurvatureSample>,
        start_point: Point2,
        start_angle: f64,
        opts: &PathOptions,
    ) -> Result<Self, PathError> {
        if samples.len() < 2 {
            return Err(PathError::InvalidSamples(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].s > w[0].s) {
                return Err(PathError::NonMonotoneSamples { index: i + 1 });
            }
        }
        if let Some(bad) = samples.iter().position(|c| !c.s.is_finite() || !c.kappa.is_finite()) {
            return Err(PathError::InvalidSamples(format!("non-finite value at index {bad}")));
        }
        if samples[0].s.abs() > 1e-12 * samples.last().unwrap().s {
            return Err(PathError::InvalidSamples(format!(
                "arclength must start at 0, got {}",
                samples[0].s
            )));
        }
        let length = samples.last().unwrap().s;

        let mut angles = Vec::with_capacity(samples.len());
        let mut positions = Vec::with_capacity(samples.len());
        let mut angle = start_angle;
        let mut pos = start_point;
        angles.push(angle);
        positions.push(pos);
        for w in samples.windows(2) {
            let h = w[1].s - w[0].s;
            pos += chord_integral(angle, w[0].kappa, w[1].kappa, h);
            angle += 0.5 * (w[0].kappa + w[1].kappa) * h;
            angles.push(angle);
            positions.push(pos);
        }

        let jumps = samples
            .windows(2)
            .filter_map(|w| {
                let jump = (w[1].kappa - w[0].kappa).abs() * length;
                (jump > opts.jump_warning).then_some(CurvatureJump { s: w[0].s, jump })
            })
            .collect::<Vec<_>>();
        if !jumps.is_empty() {
            log::warn!(
                "path curvature has {} jump(s) above {} (first at s = {}); \
                 the path is treated as smooth after resampling",
                jumps.len(),
                opts.jump_warning,
                jumps[0].s
            );
        }

        let path = Self { samples, length, start_point, start_angle, angles, positions, jumps };

        let d0 = path.displacement();
        let tol = opts.displacement_tolerance * length;
        if d0 < tol {
            return Err(PathError::ZeroDisplacement { displacement: d0, tolerance: tol });
        }
        if !opts.allow_open {
            let turning = path.total_turning();
            let mismatch = (turning - TAU * (turning / TAU).round()).abs();
            if mismatch > opts.tangent_tolerance {
                return Err(PathError::TangentMismatch { turning, mismatch });
            }
        }
        Ok(path)
    }

    pub fn samples(&self) -> &[CurvatureSample] {
        &self.samples
    }

    /// Period length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start_point(&self) -> Point2 {
        self.start_point
    }

    pub fn end_point(&self) -> Point2 {
        *self.positions.last().unwrap()
    }

    /// Tangent angle at `s = 0`.
    pub fn start_angle(&self) -> f64 {
        self.start_angle
    }

    pub fn start_tangent(&self) -> Point2 {
        Point2::new(self.start_angle.cos(), self.start_angle.sin())
    }

    pub fn end_tangent(&self) -> Point2 {
        let a = *self.angles.last().unwrap();
        Point2::new(a.cos(), a.sin())
    }

    /// Euclidean distance `d0` between the endpoints of one period.
    pub fn displacement(&self) -> f64 {
        (self.end_point() - self.start_point).norm()
    }

    /// `∫₀ᴸ κ ds`.
    pub fn total_turning(&self) -> f64 {
        self.angles.last().unwrap() - self.start_angle
    }

    pub fn curvature_jumps(&self) -> &[CurvatureJump] {
        &self.jumps
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.kappa.abs()))
    }

    /// Index `i` of the sample interval `[s_i, s_{i+1}]` containing `s`.
    pub fn interval(&self, s: f64) -> usize {
        let n = self.samples.len();
        match self.samples.binary_search_by(|c| c.s.total_cmp(&s)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    pub fn kappa_at(&self, s: f64) -> f64 {
        let i = self.interval(s);
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let t = (s - a.s) / (b.s - a.s);
        a.kappa + t * (b.kappa - a.kappa)
    }

    /// Tangent angle θ(s), exact for the piecewise linear curvature.
    pub fn angle_at(&self, s: f64) -> f64 {
        let i = self.interval(s);
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let tau = s - a.s;
        let slope = (b.kappa - a.kappa) / (b.s - a.s);
        self.angles[i] + a.kappa * tau + 0.5 * slope * tau * tau
    }

    pub fn tangent_at(&self, s: f64) -> Point2 {
        let a = self.angle_at(s);
        Point2::new(a.cos(), a.sin())
    }

    pub fn position_at(&self, s: f64) -> Point2 {
        let i = self.interval(s);
        let a = self.samples[i];
        let tau = s - a.s;
        if tau <= 0.0 {
            return self.positions[i];
        }
        self.positions[i] + chord_integral(self.angles[i], a.kappa, self.kappa_at(s), tau)
    }

    /// Reconstructed positions at the sample arclengths.
    pub fn sample_positions(&self) -> &[Point2] {
        &self.positions
    }

    /// `count` points evenly spaced in arclength, endpoints included.
    pub fn polyline(&self, count: usize) -> Vec<Point2> {
        let count = count.max(2);
        (0..count)
            .map(|i| self.position_at(self.length * i as f64 / (count - 1) as f64))
            .collect()
    }

    /// Same curve with a different start point and start angle.
    pub fn with_start(&self, start_point: Point2, start_angle: f64) -> Self {
        Self::build(self.samples.clone(), start_point, start_angle, &PathOptions {
            allow_open: true,
            displacement_tolerance: 0.0,
            jump_warning: f64::INFINITY,
            ..PathOptions::default()
        })
        .expect("validated path stays valid under rigid motion")
    }
}

/// `∫₀ʰ (cos θ, sin θ) dτ` with `θ(τ) = θ0 + k0·τ + (k1 − k0)·τ²/(2h)`.
fn chord_integral(theta0: f64, k0: f64, k1: f64, h: f64) -> Point2 {
    let slope = (k1 - k0) / h;
    let mut acc = Point2::zeros();
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let tau = x * h;
        let th = theta0 + k0 * tau + 0.5 * slope * tau * tau;
        acc += w * Point2::new(th.cos(), th.sin());
    }
    acc * h
}

/// Builds a path from `(s, κ)` samples covering `[0, L]`, starting at the
/// origin heading along +x.
pub fn path_from_curvature(
    samples: &[CurvatureSample],
    length: f64,
    opts: &PathOptions,
) -> Result<PlanarPath, PathError> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(PathError::InvalidSamples(format!("period length must be positive, got {length}")));
    }
    let Some(last) = samples.last() else {
        return Err(PathError::InvalidSamples("no samples".into()));
    };
    if (last.s - length).abs() > 1e-9 * length {
        return Err(PathError::InvalidSamples(format!(
            "samples end at s = {} but L = {length}",
            last.s
        )));
    }
    let mut samples = samples.to_vec();
    samples.last_mut().unwrap().s = length;
    PlanarPath::build(samples, Point2::zeros(), 0.0, opts)
}

/// Builds a path from a polyline of one period.
///
/// With `closed_period` the polyline is read as exactly one period: the
/// segment after the last vertex is the first segment translated, so the
/// turning at the period junction contributes the curvature at `s = 0` and
/// `s = L`. Otherwise the end curvatures are copied from their neighbours.
pub fn path_from_polyline(
    vertices: &[Point2],
    closed_period: bool,
    opts: &PathOptions,
) -> Result<PlanarPath, PathError> {
    if vertices.len() < 3 {
        return Err(PathError::DegeneratePath(format!(
            "need at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let segments: Vec<Point2> = vertices.windows(2).map(|w| w[1] - w[0]).collect();
    let lengths: Vec<f64> = segments.iter().map(|d| d.norm()).collect();
    let total: f64 = lengths.iter().sum();
    if let Some(i) = lengths.iter().position(|&h| !(h > 1e-12 * total.max(f64::MIN_POSITIVE))) {
        return Err(PathError::DegeneratePath(format!(
            "vertices {i} and {} coincide",
            i + 1
        )));
    }
    let turn = |a: &Point2, b: &Point2| (a.x * b.y - a.y * b.x).atan2(a.dot(b));

    let m = segments.len();
    let mut kappa = vec![0.0; m + 1];
    for i in 1..m {
        kappa[i] = turn(&segments[i - 1], &segments[i]) / (0.5 * (lengths[i - 1] + lengths[i]));
    }
    if closed_period {
        let wrap = turn(&segments[m - 1], &segments[0]) / (0.5 * (lengths[m - 1] + lengths[0]));
        kappa[0] = wrap;
        kappa[m] = wrap;
    } else {
        kappa[0] = kappa[1];
        kappa[m] = kappa[m - 1];
    }

    let mut s = 0.0;
    let mut samples = Vec::with_capacity(m + 1);
    samples.push(CurvatureSample { s: 0.0, kappa: kappa[0] });
    for i in 0..m {
        s += lengths[i];
        samples.push(CurvatureSample { s, kappa: kappa[i + 1] });
    }
    let start_angle = segments[0].y.atan2(segments[0].x) - 0.5 * kappa[0] * lengths[0];
    PlanarPath::build(samples, vertices[0], start_angle, opts)
}

/// Resamples onto a uniform arclength grid of `n_samples` points.
pub fn resample(path: &PlanarPath, n_samples: usize) -> Result<PlanarPath, PathError> {
    if n_samples < 16 {
        return Err(PathError::InvalidSamples(format!("resample needs at least 16 samples, got {n_samples}")));
    }
    let l = path.length();
    let samples: Vec<CurvatureSample> = (0..n_samples)
        .map(|i| {
            let s = if i + 1 == n_samples { l } else { l * i as f64 / (n_samples - 1) as f64 };
            CurvatureSample { s, kappa: path.kappa_at(s) }
        })
        .collect();
    PlanarPath::build(samples, path.start_point(), path.start_angle(), &PathOptions {
        allow_open: true,
        displacement_tolerance: 0.0,
        jump_warning: f64::INFINITY,
        ..PathOptions::default()
    })
}

/// Path-spec file contents.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PathSpec {
    Polyline {
        vertices: Vec<[f64; 2]>,
        #[serde(default = "default_true", skip_serializing_if = "is_true")]
        closed_period: bool,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_open: bool,
    },
    Curvature {
        #[serde(rename = "L")]
        length: f64,
        samples: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_open: bool,
    },
}

/// Flat mirror of [`PathSpec`] for parsing, so errors keep their key path
/// and position.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "type")]
    kind: String,
    #[serde(rename = "L")]
    length: Option<f64>,
    samples: Option<Vec<[f64; 2]>>,
    vertices: Option<Vec<[f64; 2]>>,
    closed_period: Option<bool>,
    allow_open: Option<bool>,
}

impl RawSpec {
    fn into_spec(self) -> Result<PathSpec, PathError> {
        let misplaced = |key: &str| PathError::Spec(format!("key `{key}` is not allowed for type `{}`", self.kind));
        let missing = |key: &str| PathError::Spec(format!("missing key `{key}` for type `{}`", self.kind));
        match self.kind.as_str() {
            "polyline" => {
                if self.length.is_some() {
                    return Err(misplaced("L"));
                }
                if self.samples.is_some() {
                    return Err(misplaced("samples"));
                }
                Ok(PathSpec::Polyline {
                    vertices: self.vertices.clone().ok_or_else(|| missing("vertices"))?,
                    closed_period: self.closed_period.unwrap_or(true),
                    allow_open: self.allow_open.unwrap_or(false),
                })
            }
            "curvature" => {
                if self.vertices.is_some() {
                    return Err(misplaced("vertices"));
                }
                if self.closed_period.is_some() {
                    return Err(misplaced("closed_period"));
                }
                Ok(PathSpec::Curvature {
                    length: self.length.ok_or_else(|| missing("L"))?,
                    samples: self.samples.clone().ok_or_else(|| missing("samples"))?,
                    allow_open: self.allow_open.unwrap_or(false),
                })
            }
            other => Err(PathError::Spec(format!("key `type`: unknown path type `{other}`, expected `polyline` or `curvature`"))),
        }
    }
}

fn default_true() -> bool {
    true
}
fn is_true(b: &bool) -> bool {
    *b
}
fn is_false(b: &bool) -> bool {
    !*b
}

impl PathSpec {
    /// Parses a spec file. Errors name the offending key and, for syntax and
    /// type errors, the line and column.
    pub fn from_json(text: &str) -> Result<Self, PathError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let key = e.path().to_string();
            if key == "." || key == "?" {
                PathError::Spec(e.inner().to_string())
            } else {
                PathError::Spec(format!("key `{key}`: {}", e.inner()))
            }
        })?;
        de.end().map_err(|e| PathError::Spec(e.to_string()))?;
        raw.into_spec()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path spec serializes")
    }

    /// Curvature spec of an existing path.
    pub fn from_path(path: &PlanarPath) -> Self {
        PathSpec::Curvature {
            length: path.length(),
            samples: path.samples().iter().map(|c| [c.s, c.kappa]).collect(),
            allow_open: false,
        }
    }

    pub fn build(&self, base: &PathOptions) -> Result<PlanarPath, PathError> {
        match self {
            PathSpec::Polyline { vertices, closed_period, allow_open } => {
                let pts: Vec<Point2> = vertices.iter().map(|v| Point2::new(v[0], v[1])).collect();
                path_from_polyline(&pts, *closed_period, &PathOptions {
                    allow_open: *allow_open || base.allow_open,
                    ..*base
                })
            }
            PathSpec::Curvature { length, samples, allow_open } => {
                let samples: Vec<CurvatureSample> =
                    samples.iter().map(|v| CurvatureSample { s: v[0], kappa: v[1] }).collect();
                path_from_curvature(&samples, *length, &PathOptions {
                    allow_open: *allow_open || base.allow_open,
                    ..*base
                })
            }
        }
    }
}

/// Uniform samples of an analytic curvature function on `[0, L]`.
pub fn sample_curvature(length: f64, count: usize, kappa: impl Fn(f64) -> f64) -> Vec<CurvatureSample> {
    (0..count)
        .map(|i| {
            let s = if i + 1 == count { length } else { length * i as f64 / (count - 1) as f64 };
            CurvatureSample { s, kappa: kappa(s) }
        })
        .collect()
}

/// Signed angle from `a` to `b`, in `(−π, π]`.
pub fn signed_angle(a: &Point2, b: &Point2) -> f64 {
    let x = (a.x * b.y - a.y * b.x).atan2(a.dot(b));
    if x <= -PI { x + TAU } else { x }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn collinear_polyline_is_straight() {
        let p = path_from_polyline(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), true, &PathOptions::default())
            .unwrap();
        assert!(p.samples().iter().all(|c| c.kappa == 0.0));
        assert_eq!(p.length(), 2.0);
        assert!((p.displacement() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn duplicate_vertex_is_degenerate() {
        let err = path_from_polyline(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), true, &PathOptions::default())
            .unwrap_err();
        assert!(matches!(err, PathError::DegeneratePath(_)));
    }

    #[test]
    fn too_few_vertices() {
        let err = path_from_polyline(&pts(&[(0.0, 0.0), (1.0, 0.0)]), true, &PathOptions::default()).unwrap_err();
        assert!(matches!(err, PathError::DegeneratePath(_)));
    }

    fn half_circle(rho: f64, segments: usize) -> Vec<Point2> {
        (0..=segments)
            .map(|i| {
                let phi = PI * i as f64 / segments as f64;
                // start at the bottom heading +x, turn left
                Point2::new(rho * phi.sin(), rho * (1.0 - phi.cos()))
            })
            .collect()
    }

    #[test]
    fn half_circle_curvature_converges_quadratically() {
        let rho = 0.7;
        let err = |n: usize| {
            let p = path_from_polyline(&half_circle(rho, n), false, &PathOptions::open()).unwrap();
            let kerr = p.samples().iter().map(|c| (c.kappa - 1.0 / rho).abs()).fold(0.0, f64::max);
            (kerr, (p.displacement() - 2.0 * rho).abs())
        };
        let (k1, d1) = err(100);
        let (k2, d2) = err(200);
        assert!(k1 < 1e-3 / rho && d1 < 1e-3 * rho, "{k1} {d1}");
        // O(h²): halving h divides the error by ~4
        assert!((k1 / k2 - 4.0).abs() < 0.1, "ratio {}", k1 / k2);
        assert!((d1 / d2 - 4.0).abs() < 0.1, "ratio {}", d1 / d2);
    }

    #[test]
    fn half_circle_is_not_tangent_periodic() {
        let err = path_from_polyline(&half_circle(1.0, 64), false, &PathOptions::default()).unwrap_err();
        assert!(matches!(err, PathError::TangentMismatch { .. }));
    }

    #[test]
    fn straight_curvature_path() {
        let p = path_from_curvature(&sample_curvature(1.0, 3, |_| 0.0), 1.0, &PathOptions::default()).unwrap();
        assert!((p.displacement() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_turn_requires_allow_open() {
        let s = sample_curvature(1.0, 65, |_| PI);
        assert!(matches!(
            path_from_curvature(&s, 1.0, &PathOptions::default()),
            Err(PathError::TangentMismatch { .. })
        ));
        let p = path_from_curvature(&s, 1.0, &PathOptions::open()).unwrap();
        // semicircle of radius 1/π
        assert!((p.displacement() - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn full_loop_has_zero_displacement() {
        let s = sample_curvature(1.0, 65, |_| TAU);
        assert!(matches!(
            path_from_curvature(&s, 1.0, &PathOptions::default()),
            Err(PathError::ZeroDisplacement { .. })
        ));
    }

    #[test]
    fn non_monotone_samples() {
        let s = vec![
            CurvatureSample { s: 0.0, kappa: 0.0 },
            CurvatureSample { s: 0.6, kappa: 0.0 },
            CurvatureSample { s: 0.5, kappa: 0.0 },
            CurvatureSample { s: 1.0, kappa: 0.0 },
        ];
        assert_eq!(
            path_from_curvature(&s, 1.0, &PathOptions::default()).unwrap_err(),
            PathError::NonMonotoneSamples { index: 2 }
        );
    }

    #[test]
    fn resample_precondition() {
        let p = path_from_curvature(&sample_curvature(1.0, 17, |_| 0.0), 1.0, &PathOptions::default()).unwrap();
        assert!(resample(&p, 8).is_err());
        let r = resample(&p, 16).unwrap();
        assert!(r.samples().iter().all(|c| c.kappa == 0.0));
        assert_eq!(r.samples().len(), 16);
    }

    #[test]
    fn curvature_jump_is_flagged_not_rejected() {
        let s = vec![
            CurvatureSample { s: 0.0, kappa: 0.0 },
            CurvatureSample { s: 0.25, kappa: 0.0 },
            CurvatureSample { s: 0.2500001, kappa: 5.0 },
            CurvatureSample { s: 0.5, kappa: 5.0 },
            CurvatureSample { s: 0.5000001, kappa: -5.0 },
            CurvatureSample { s: 0.75, kappa: -5.0 },
            CurvatureSample { s: 0.7500001, kappa: 0.0 },
            CurvatureSample { s: 1.0, kappa: 0.0 },
        ];
        let p = path_from_curvature(&s, 1.0, &PathOptions::default()).unwrap();
        assert_eq!(p.curvature_jumps().len(), 3);
    }

    #[test]
    fn spec_json_parses_both_kinds() {
        let a = PathSpec::from_json(r#"{"type":"polyline","vertices":[[0,0],[1,0],[2,0]]}"#).unwrap();
        assert!(matches!(a, PathSpec::Polyline { closed_period: true, .. }));
        let b = PathSpec::from_json(r#"{"type":"curvature","L":1.0,"samples":[[0,0],[0.5,0],[1,0]]}"#).unwrap();
        let p = b.build(&PathOptions::default()).unwrap();
        assert_eq!(p.length(), 1.0);
    }

    #[test]
    fn spec_json_errors_name_the_key() {
        let e = PathSpec::from_json(r#"{"type":"curvature","samples":[[0,0],[1,0]]}"#).unwrap_err();
        assert!(e.to_string().contains("`L`"), "{e}");
        let e = PathSpec::from_json(r#"{"type":"spline","vertices":[]}"#).unwrap_err();
        assert!(e.to_string().contains("spline"), "{e}");
        let e = PathSpec::from_json("{\"type\": \"curvature\",\n\"L\": 1,\n\"samples\": [[0, 0], [1, \"x\"]]}").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("`samples[1][1]`") && msg.contains("line 3"), "{msg}");
        let e = PathSpec::from_json(r#"{"type":"polyline","vertices":[[0,0],[1,0]],"bogus":1}"#).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn spec_json_round_trips() {
        for spec in [
            PathSpec::Polyline { vertices: vec![[0.0, 0.0], [1.0, 0.5], [2.0, 0.0]], closed_period: false, allow_open: true },
            PathSpec::Curvature { length: 2.0, samples: vec![[0.0, 1.0], [2.0, 1.0]], allow_open: true },
        ] {
            assert_eq!(PathSpec::from_json(&spec.to_json()).unwrap(), spec);
        }
    }

    #[test]
    fn position_at_matches_sample_positions() {
        let p = path_from_curvature(&sample_curvature(2.0, 33, |s| (s * 3.0).sin()), 2.0, &PathOptions::open()).unwrap();
        for (c, q) in p.samples().iter().zip(p.sample_positions()) {
            assert!((p.position_at(c.s) - q).norm() < 1e-14);
        }
    }
}
