//! Rolling a sphere of radius `K⁻¹` along one period of a planar path.
//!
//! Two independent pictures of the same motion live here:
//!
//! * [`trace`] integrates the Darboux frame of the contact curve `T_K*` drawn
//!   on the unit sphere, whose geodesic curvature (on the radius-`K⁻¹`
//!   sphere) equals the planar curvature `κ(s)`.
//! * [`net_rotation`] integrates the body orientation of the rolling ball
//!   with angular velocity `K·(ẑ × t(s))` (no slip, no spin).
//!
//! The trace uses the canonical gauge `p(0) = (0,0,1)`, `t(0) = (1,0,0)`.
//! The body picture is its mirror image: see [`contact_point_from_rotation`].

use std::io::{self, Write};

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use thiserror::Error;

use crate::path::{path_from_curvature, CurvatureSample, PathError, PathOptions, PlanarPath};

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("inverse radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("step too coarse: frame rotates {angle:e} rad per step (limit {limit:e}); raise the step count")]
    StepTooCoarse { angle: f64, limit: f64 },
}

/// Largest frame rotation per RK4 step before [`TraceError::StepTooCoarse`].
pub const MAX_STEP_ROTATION: f64 = 0.02;

/// Position, tangent and co-tangent `u = p × t` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxFrame {
    pub p: Vec3,
    pub t: Vec3,
    pub u: Vec3,
}

impl DarbouxFrame {
    pub fn canonical() -> Self {
        Self { p: Vec3::z(), t: Vec3::x(), u: Vec3::z().cross(&Vec3::x()) }
    }

    /// Largest deviation from orthonormality.
    pub fn defect(&self) -> f64 {
        [
            (self.p.norm() - 1.0).abs(),
            (self.t.norm() - 1.0).abs(),
            (self.u.norm() - 1.0).abs(),
            self.p.dot(&self.t).abs(),
            self.p.dot(&self.u).abs(),
            self.t.dot(&self.u).abs(),
            (self.p.cross(&self.t) - self.u).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn orthonormalize(&mut self) {
        self.p.normalize_mut();
        self.t -= self.p * self.p.dot(&self.t);
        self.t.normalize_mut();
        self.u = self.p.cross(&self.t);
    }

    /// Columns `[p t u]`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.p, self.t, self.u])
    }

    pub fn rotated(&self, r: &UnitQuaternion<f64>) -> Self {
        Self { p: r * self.p, t: r * self.t, u: r * self.u }
    }
}

/// Step-count policy for the integrators.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TraceOptions {
    /// Requested number of RK4 steps per period; `None` uses
    /// `max(4·samples, 4096)`. Steps are distributed evenly inside each sample
    /// interval, so the realised count is a multiple of the interval count.
    pub steps: Option<usize>,
}

impl TraceOptions {
    pub fn with_steps(steps: usize) -> Self {
        Self { steps: Some(steps) }
    }

    pub(crate) fn substeps(&self, path: &PlanarPath) -> usize {
        let intervals = path.samples().len() - 1;
        let target = self.steps.unwrap_or_else(|| (4 * path.samples().len()).max(4096));
        target.div_ceil(intervals).max(1)
    }
}

/// The contact curve `T_K*` on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphericalTrace {
    k: f64,
    frames: Vec<DarbouxFrame>,
    s: Vec<f64>,
    kappa: Vec<f64>,
}

impl SphericalTrace {
    /// Inverse radius `K`.
    pub fn inv_radius(&self) -> f64 {
        self.k
    }

    pub fn frames(&self) -> &[DarbouxFrame] {
        &self.frames
    }

    /// Arclength tags in path units.
    pub fn arclengths(&self) -> &[f64] {
        &self.s
    }

    /// Planar curvature `κ` at each frame; geodesic curvature on the unit
    /// sphere is `κ/K`.
    pub fn curvatures(&self) -> &[f64] {
        &self.kappa
    }

    pub fn points(&self) -> Vec<Vec3> {
        self.frames.iter().map(|f| f.p).collect()
    }

    /// `A`, the first point.
    pub fn start(&self) -> Vec3 {
        self.frames[0].p
    }

    /// `B`, the last point.
    pub fn end(&self) -> Vec3 {
        self.frames.last().unwrap().p
    }

    pub fn start_frame(&self) -> &DarbouxFrame {
        &self.frames[0]
    }

    pub fn end_frame(&self) -> &DarbouxFrame {
        self.frames.last().unwrap()
    }

    /// Angle subtended by `A` and `B` at the centre, i.e. `K·d_T(K)`.
    pub fn endpoint_angle(&self) -> f64 {
        angle_between(&self.start(), &self.end())
    }

    /// Sum of the great-arc step lengths on the unit sphere.
    pub fn angular_length(&self) -> f64 {
        self.frames.windows(2).map(|w| angle_between(&w[0].p, &w[1].p)).sum()
    }

    pub fn max_frame_defect(&self) -> f64 {
        self.frames.iter().map(DarbouxFrame::defect).fold(0.0, f64::max)
    }

    /// CSV dump with columns `s,px,py,pz,tx,ty,tz` (unit-sphere coordinates).
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "s,px,py,pz,tx,ty,tz")?;
        for (s, f) in self.s.iter().zip(&self.frames) {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s, f.p.x, f.p.y, f.p.z, f.t.x, f.t.y, f.t.z
            )?;
        }
        Ok(())
    }
}

/// Angle between two unit vectors, accurate near 0 and π.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

fn check_radius(k: f64) -> Result<(), TraceError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(TraceError::InvalidRadius(k))
    }
}

/// Walks the RK4 grid of `path`, calling `visit(s, κ(s), frame)` at every
/// node including both ends.
fn integrate_darboux(
    path: &PlanarPath,
    k: f64,
    opts: &TraceOptions,
    mut visit: impl FnMut(f64, f64, &DarbouxFrame),
) -> Result<DarbouxFrame, TraceError> {
    check_radius(k)?;
    let sub = opts.substeps(path);
    let samples = path.samples();
    let mut frame = DarbouxFrame::canonical();
    visit(0.0, samples[0].kappa, &frame);

    let deriv = |f: &DarbouxFrame, kappa: f64| DarbouxFrame {
        p: f.t * k,
        t: f.u * kappa - f.p * k,
        u: -f.t * kappa,
    };
    let axpy = |f: &DarbouxFrame, d: &DarbouxFrame, h: f64| DarbouxFrame {
        p: f.p + d.p * h,
        t: f.t + d.t * h,
        u: f.u + d.u * h,
    };

    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ds = (b.s - a.s) / sub as f64;
        let kap = |s: f64| a.kappa + (b.kappa - a.kappa) * (s - a.s) / (b.s - a.s);
        let rot = k.hypot(a.kappa.abs().max(b.kappa.abs())) * ds;
        if rot > MAX_STEP_ROTATION {
            return Err(TraceError::StepTooCoarse { angle: rot, limit: MAX_STEP_ROTATION });
        }
        for j in 0..sub {
            let s0 = a.s + ds * j as f64;
            let (k0, km, k1) = (kap(s0), kap(s0 + 0.5 * ds), kap(s0 + ds));
            let d1 = deriv(&frame, k0);
            let d2 = deriv(&axpy(&frame, &d1, 0.5 * ds), km);
            let d3 = deriv(&axpy(&frame, &d2, 0.5 * ds), km);
            let d4 = deriv(&axpy(&frame, &d3, ds), k1);
            frame = DarbouxFrame {
                p: frame.p + (d1.p + (d2.p + d3.p) * 2.0 + d4.p) * (ds / 6.0),
                t: frame.t + (d1.t + (d2.t + d3.t) * 2.0 + d4.t) * (ds / 6.0),
                u: frame.u + (d1.u + (d2.u + d3.u) * 2.0 + d4.u) * (ds / 6.0),
            };
            frame.orthonormalize();
            let s1 = if j + 1 == sub { b.s } else { s0 + ds };
            visit(s1, k1, &frame);
        }
    }
    Ok(frame)
}

/// Traces one period of `path` on a sphere of inverse radius `k`.
pub fn trace(path: &PlanarPath, k: f64, opts: &TraceOptions) -> Result<SphericalTrace, TraceError> {
    let n = opts.substeps(path) * (path.samples().len() - 1) + 1;
    let mut frames = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    integrate_darboux(path, k, opts, |si, ki, f| {
        frames.push(*f);
        s.push(si);
        kappa.push(ki);
    })?;
    Ok(SphericalTrace { k, frames, s, kappa })
}

/// Final frame only; no allocation. Used by the solver's scans.
pub fn trace_end_frame(path: &PlanarPath, k: f64, opts: &TraceOptions) -> Result<DarbouxFrame, TraceError> {
    integrate_darboux(path, k, opts, |_, _, _| {})
}

/// Spherical distance `d_T(K)` between the trace endpoints, in path units.
pub fn endpoint_distance(trace: &SphericalTrace) -> f64 {
    trace.endpoint_angle() / trace.inv_radius()
}

/// Rotation vector (axis × angle) of a rotation matrix, accurate for small angles.
pub fn rotation_log(m: &Matrix3<f64>) -> Vec3 {
    let v = Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]) * 0.5;
    let sin = v.norm();
    let cos = 0.5 * (m.trace() - 1.0);
    let angle = sin.atan2(cos);
    if sin < 1e-300 {
        return Vec3::zeros();
    }
    if angle > 3.0 {
        // near π the antisymmetric part loses the axis; fall back to the quaternion
        let q = UnitQuaternion::from_matrix(m);
        let (w, xyz) = (q.w, q.imag());
        let a = 2.0 * xyz.norm().atan2(w);
        return xyz.normalize() * a;
    }
    v * (angle / sin)
}

/// Unrolls a trace back onto the plane.
///
/// The geodesic curvature is measured from the frames themselves: the
/// relative rotation between consecutive Darboux frames has body-frame
/// rotation vector `≈ Δs·(κ, 0, K)`, giving both the step length and the
/// curvature at the step midpoint.
pub fn develop(trace: &SphericalTrace) -> Result<PlanarPath, PathError> {
    let k = trace.inv_radius();
    let mut mids = Vec::with_capacity(trace.frames.len() + 1);
    let mut s = 0.0;
    for w in trace.frames.windows(2) {
        let rel = w[0].matrix().transpose() * w[1].matrix();
        let omega = rotation_log(&rel);
        let ds = omega.z / k;
        mids.push((s + 0.5 * ds, k * omega.x / omega.z));
        s += ds;
    }
    let length = s;
    let extrapolate = |a: (f64, f64), b: (f64, f64), at: f64| a.1 + (b.1 - a.1) * (at - a.0) / (b.0 - a.0);
    let m = mids.len();
    let mut samples = Vec::with_capacity(m + 2);
    let k0 = if m > 1 { extrapolate(mids[0], mids[1], 0.0) } else { mids[0].1 };
    let k1 = if m > 1 { extrapolate(mids[m - 2], mids[m - 1], length) } else { mids[0].1 };
    samples.push(CurvatureSample { s: 0.0, kappa: k0 });
    samples.extend(mids.iter().map(|&(s, kappa)| CurvatureSample { s, kappa }));
    samples.push(CurvatureSample { s: length, kappa: k1 });
    path_from_curvature(&samples, length, &PathOptions { allow_open: true, jump_warning: f64::INFINITY, ..PathOptions::default() })
}

/// Net body rotation after rolling one period.
#[derive(Debug, Clone, Copy)]
pub struct NetRotation {
    pub quaternion: UnitQuaternion<f64>,
    pub matrix: Matrix3<f64>,
    /// Rotation angle in `[0, π]`.
    pub angle: f64,
    /// Unit axis; `+z` when the rotation is the identity.
    pub axis: Vec3,
}

impl NetRotation {
    fn new(q: UnitQuaternion<f64>) -> Self {
        // keep w ≥ 0 so the angle lands in [0, π]
        let q = if q.w < 0.0 { UnitQuaternion::new_unchecked(-q.into_inner()) } else { q };
        let xyz = q.imag();
        let angle = 2.0 * xyz.norm().atan2(q.w);
        let axis = if xyz.norm() > 0.0 { xyz.normalize() } else { Vec3::z() };
        Self { quaternion: q, matrix: *q.to_rotation_matrix().matrix(), angle, axis }
    }

    /// `‖Mⁿ − I‖_F`, the closure residual after `n` periods.
    pub fn closure_residual(&self, n: u32) -> f64 {
        let mut m = Matrix3::<f64>::identity();
        for _ in 0..n {
            m *= self.matrix;
        }
        (m - Matrix3::identity()).norm()
    }

    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix3::identity())
            .norm()
            .max((self.matrix.determinant() - 1.0).abs())
    }
}

/// Composed body rotation of a sphere of inverse radius `k` rolling without
/// slip or spin along one period of `path`.
pub fn net_rotation(path: &PlanarPath, k: f64, opts: &TraceOptions) -> Result<NetRotation, TraceError> {
    check_radius(k)?;
    let sub = opts.substeps(path);
    let omega = |s: f64| {
        let th = path.angle_at(s);
        // K·(ẑ × t)
        Quaternion::new(0.0, -k * th.sin(), k * th.cos(), 0.0)
    };
    let mut q = Quaternion::identity();
    for w in path.samples().windows(2) {
        let (a, b) = (w[0], w[1]);
        let ds = (b.s - a.s) / sub as f64;
        for j in 0..sub {
            let s0 = a.s + ds * j as f64;
            let (w0, wm, w1) = (omega(s0), omega(s0 + 0.5 * ds), omega((s0 + ds).min(b.s)));
            let f = |w: &Quaternion<f64>, q: &Quaternion<f64>| (w * q) * 0.5;
            let d1 = f(&w0, &q);
            let d2 = f(&wm, &(q + d1 * (0.5 * ds)));
            let d3 = f(&wm, &(q + d2 * (0.5 * ds)));
            let d4 = f(&w1, &(q + d3 * ds));
            q += (d1 + (d2 + d3) * 2.0 + d4) * (ds / 6.0);
            q = q.normalize();
        }
    }
    Ok(NetRotation::new(UnitQuaternion::new_normalize(q)))
}

/// Contact point after one period, in trace coordinates, predicted from the
/// body rotation `M`.
///
/// The body picture sees the contact point as `Mᵀ·(−ẑ)`; mapping it into the
/// trace gauge takes a rotation by `−θ₀` about `ẑ` (aligning the start
/// tangent with `+x`) followed by the reflection `z ↦ −z`.
pub fn contact_point_from_rotation(rot: &NetRotation, start_angle: f64) -> Vec3 {
    let body = rot.matrix.transpose() * -Vec3::z();
    let (s, c) = (-start_angle).sin_cos();
    let aligned = Vec3::new(c * body.x - s * body.y, s * body.x + c * body.y, body.z);
    Vec3::new(aligned.x, aligned.y, -aligned.z)
}
