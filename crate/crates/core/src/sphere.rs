//! Spherical triangles and signed areas of regions bounded by traces and
//! great arcs.
//!
//! All areas here are on the unit sphere unless a name says otherwise;
//! scaling by `K⁻²` gives the area on the radius-`K⁻¹` sphere. Orientation
//! convention: counterclockwise seen from outside the sphere is positive.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{angle_between, SphericalTrace, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("no isosceles apex exists: base angle {base} exceeds apex angle {apex}")]
    NotConstructible { base: f64, apex: f64 },
    #[error("endpoints are antipodal (separation {0}); the shorter arc is undefined")]
    AntipodalEndpoints(f64),
    #[error("endpoints coincide; the triangle is degenerate")]
    CoincidentEndpoints,
    #[error("apex angle must lie in (0, π], got {0}")]
    InvalidAngle(f64),
    #[error("boundary is not closed: first and last points are {0:e} apart")]
    NotClosed(f64),
    #[error("no usable fan point: every candidate is antipodal to the boundary")]
    FanPointDegenerate,
}

/// Which of the two mirror-image apexes closes the region.
///
/// `C1` lies to the left of the arc `A → B` seen from outside, so the triangle
/// `A, B, C1` has positive signed area; `C2` is its mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Apex {
    #[default]
    C1,
    C2,
}

impl Apex {
    /// Sign of the triangle `A, B, C` for this apex.
    pub fn sign(self) -> f64 {
        match self {
            Apex::C1 => 1.0,
            Apex::C2 => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Self {
        if sign < 0.0 { Apex::C2 } else { Apex::C1 }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Apex::C1 => "C1",
            Apex::C2 => "C2",
        }
    }
}

/// The two apexes of the isosceles triangles over the base `AB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApexPair {
    pub c1: Vec3,
    pub c2: Vec3,
    /// Angular length of the legs `CA = CB`.
    pub leg_angle: f64,
    pub apex_angle: f64,
}

impl ApexPair {
    pub fn get(&self, apex: Apex) -> Vec3 {
        match apex {
            Apex::C1 => self.c1,
            Apex::C2 => self.c2,
        }
    }
}

/// Builds the apexes `C` with `|CA| = |CB|`, acute base angles and angle
/// `apex_angle` at `C`, for unit vectors `a`, `b`.
///
/// On a sphere of inverse radius `K`, the base angle `angle(A, B)` is `K·d`,
/// so the existence condition `K·d ≤ α` becomes `angle(A, B) ≤ α`.
pub fn isosceles_apexes(a: &Vec3, b: &Vec3, apex_angle: f64) -> Result<ApexPair, GeometryError> {
    if !(apex_angle > 0.0 && apex_angle <= PI) {
        return Err(GeometryError::InvalidAngle(apex_angle));
    }
    let normal = a.cross(b);
    let base = normal.norm().atan2(a.dot(b));
    if PI - base < 1e-9 {
        return Err(GeometryError::AntipodalEndpoints(base));
    }
    if base < 1e-15 {
        return Err(GeometryError::CoincidentEndpoints);
    }
    if base > apex_angle {
        return Err(GeometryError::NotConstructible { base, apex: apex_angle });
    }
    let (half_base, half_apex) = (0.5 * base, 0.5 * apex_angle);
    // sin ℓ = sin(b/2)/sin(α/2); cos ℓ via a product form that stays
    // accurate as b → α
    let sin_leg = (half_base.sin() / half_apex.sin()).min(1.0);
    let cos_leg = (((half_apex - half_base).sin() * (half_apex + half_base).sin()).max(0.0)).sqrt() / half_apex.sin();
    let leg_angle = sin_leg.atan2(cos_leg);
    // height h over the base midpoint: tan h = sin(b/2)·cot(α/2) / cos ℓ
    let height = (half_base.sin() * half_apex.cos() / half_apex.sin()).atan2(cos_leg);
    let mid = (a + b).normalize();
    let pole = normal / normal.norm();
    let (sh, ch) = height.sin_cos();
    Ok(ApexPair {
        c1: (mid * ch + pole * sh).normalize(),
        c2: (mid * ch - pole * sh).normalize(),
        leg_angle,
        apex_angle,
    })
}

/// Unsigned area `|S^Δ_x(K)|` of the isosceles triangle with apex angle `x`
/// and base angle `dk = K·d_T(K)`, on the radius-`K⁻¹` sphere:
/// `K⁻²·[2·arcsin√((1+cos x)/(1+cos dK)) + x − π]`.
pub fn delta_area_formula(x: f64, dk: f64, k: f64) -> Result<f64, GeometryError> {
    if !(x > 0.0 && x <= PI) {
        return Err(GeometryError::InvalidAngle(x));
    }
    if !(dk >= 0.0) || dk > x {
        return Err(GeometryError::NotConstructible { base: dk, apex: x });
    }
    // √((1+cos x)/(1+cos dK)) = cos(x/2)/cos(dK/2), free of cancellation near π
    let ratio = ((0.5 * x).cos() / (0.5 * dk).cos()).min(1.0);
    Ok((x + (2.0 * ratio.asin() - PI)) / (k * k))
}

/// Signed area of the geodesic triangle `a, b, c` (unit vectors).
pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// Winding-weighted signed area of a closed polyline of great arcs, fanned
/// from `fan`. The winding number is zero at `−fan`.
pub fn signed_area_about(boundary: &[Vec3], fan: &Vec3) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for w in boundary.windows(2) {
        // Kahan summation; long traces add many tiny terms
        let y = triangle_area(fan, &w[0], &w[1]) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Chooses a fan point whose antipode stays clear of the boundary: the
/// normalised centroid, or failing that the coordinate axis farthest from it.
pub fn fan_point(boundary: &[Vec3]) -> Result<Vec3, GeometryError> {
    let clearance = |z: &Vec3| boundary.iter().map(|v| 1.0 + z.dot(v)).fold(f64::INFINITY, f64::min);
    let mean: Vec3 = boundary.iter().sum::<Vec3>() / boundary.len().max(1) as f64;
    if mean.norm() > 1e-6 {
        let z = mean.normalize();
        if clearance(&z) > 1e-6 {
            return Ok(z);
        }
    }
    let axes = [Vec3::z(), -Vec3::z(), Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y()];
    let (best, c) = axes
        .iter()
        .map(|z| (*z, clearance(z)))
        .fold((Vec3::z(), f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc });
    if c > 1e-6 {
        Ok(best)
    } else {
        Err(GeometryError::FanPointDegenerate)
    }
}

fn check_closed(boundary: &[Vec3]) -> Result<(), GeometryError> {
    let gap = match (boundary.first(), boundary.last()) {
        (Some(a), Some(b)) => (a - b).norm(),
        _ => return Err(GeometryError::NotClosed(f64::INFINITY)),
    };
    if gap > 1e-9 {
        return Err(GeometryError::NotClosed(gap));
    }
    Ok(())
}

/// Winding-weighted signed area of a closed boundary (first point repeated
/// at the end) on the unit sphere, in `(−4π, 4π)`.
pub fn signed_region_area(boundary: &[Vec3]) -> Result<f64, GeometryError> {
    check_closed(boundary)?;
    let fan = fan_point(boundary)?;
    Ok(signed_area_about(boundary, &fan))
}

/// Area between a smooth curve and its inscribed great-arc polygon.
///
/// For a step of angular length `h` and geodesic curvature `g` the curve
/// bulges by `g·h³/12` (to the right of the chord when `g > 0`, so it adds to
/// the area on its left). `geodesic[i]` is the unit-sphere geodesic curvature
/// at `points[i]`.
pub fn chord_correction(points: &[Vec3], geodesic: &[f64]) -> f64 {
    points
        .windows(2)
        .zip(geodesic.windows(2))
        .map(|(p, g)| {
            let h = angle_between(&p[0], &p[1]);
            0.5 * (g[0] + g[1]) * h * h * h / 12.0
        })
        .sum()
}

/// Whether the trace is a great arc, i.e. the path is straight.
pub fn is_great_arc(trace: &SphericalTrace) -> bool {
    trace.curvatures().iter().all(|&k| k == 0.0)
}

/// The apex `C` for closing `trace` with rotations by `x`.
///
/// For a great arc with antipodal endpoints (a straight path at `KL = π`)
/// the isosceles apex is undefined; the pole of the great circle is used,
/// which closes the copies into the full circle.
pub fn apex_point(trace: &SphericalTrace, x: f64, apex: Apex) -> Result<Vec3, GeometryError> {
    match isosceles_apexes(&trace.start(), &trace.end(), x) {
        Err(GeometryError::AntipodalEndpoints(_)) if is_great_arc(trace) => Ok(trace.start_frame().u * apex.sign()),
        other => other.map(|pair| pair.get(apex)),
    }
}

/// `S^D` on the unit sphere: region bounded by the trace `A → B` and the
/// shorter great arc `B → A`. Zero for a great arc, whose closing arc
/// retraces it.
pub fn trace_loop_area(trace: &SphericalTrace) -> Result<f64, GeometryError> {
    if is_great_arc(trace) {
        return Ok(0.0);
    }
    let (a, b) = (trace.start(), trace.end());
    let sep = angle_between(&a, &b);
    if PI - sep < 1e-9 {
        return Err(GeometryError::AntipodalEndpoints(sep));
    }
    let mut boundary = trace.points();
    // a single great-arc edge closes the loop exactly
    boundary.push(a);
    let fan = fan_point(&boundary)?;
    let k = trace.inv_radius();
    let geodesic: Vec<f64> = trace.curvatures().iter().map(|c| c / k).collect();
    Ok(signed_area_about(&boundary, &fan) + chord_correction(&trace.points(), &geodesic))
}

/// `S^D(K)` on the radius-`K⁻¹` sphere.
pub fn region_area_d(trace: &SphericalTrace) -> Result<f64, GeometryError> {
    let k = trace.inv_radius();
    Ok(trace_loop_area(trace)? / (k * k))
}

/// Signed areas of `D_K`, `Δ_{K,x}` and `R_{K,x}` on the radius-`K⁻¹` sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionAreas {
    pub s_d: f64,
    pub s_delta: f64,
    pub s_r: f64,
    pub x: f64,
    pub k: f64,
    pub apex_choice: Apex,
    #[serde(skip)]
    pub apex: Vec3,
}

impl RegionAreas {
    /// `S^R·K²`, the unit-sphere area of `R_{K,x}`.
    pub fn unit_s_r(&self) -> f64 {
        self.s_r * self.k * self.k
    }

    pub fn unit_s_d(&self) -> f64 {
        self.s_d * self.k * self.k
    }

    pub fn unit_s_delta(&self) -> f64 {
        self.s_delta * self.k * self.k
    }
}

/// Region areas for a trace closed through the chosen apex, given a
/// precomputed unit-sphere `S^D` and the base angle `K·d_T(K)` to use in the
/// triangle area.
///
/// The triangle area has a square-root singularity at `K·d_T = x`, so at
/// `K = K_x` the caller passes `base = x` (the defining identity) rather than
/// the measured endpoint angle.
pub fn region_areas_with(
    trace: &SphericalTrace,
    unit_s_d: f64,
    x: f64,
    apex_choice: Apex,
    base: f64,
) -> Result<RegionAreas, GeometryError> {
    let k = trace.inv_radius();
    let apex = apex_point(trace, x, apex_choice)?;
    let unit_delta = apex_choice.sign() * delta_area_formula(x, base, 1.0)?;
    let scale = 1.0 / (k * k);
    Ok(RegionAreas {
        s_d: unit_s_d * scale,
        s_delta: unit_delta * scale,
        s_r: (unit_s_d + unit_delta) * scale,
        x,
        k,
        apex_choice,
        apex,
    })
}

/// `S^R_x(K) = S^Δ_x(K) + S^D(K)` with the triangle sign fixed by `apex_choice`.
pub fn region_area_r(trace: &SphericalTrace, x: f64, apex_choice: Apex) -> Result<RegionAreas, GeometryError> {
    region_areas_with(trace, trace_loop_area(trace)?, x, apex_choice, trace.endpoint_angle())
}

/// Points along the great arc from `a` to `b`, both ends included.
pub fn great_arc(a: &Vec3, b: &Vec3, segments: usize) -> Vec<Vec3> {
    let theta = angle_between(a, b);
    let segments = segments.max(1);
    if theta < 1e-300 {
        return vec![*a; segments + 1];
    }
    let s = theta.sin();
    (0..=segments)
        .map(|i| {
            let t = theta * i as f64 / segments as f64;
            (a * (theta - t).sin() / s + b * t.sin() / s).normalize()
        })
        .collect()
}
