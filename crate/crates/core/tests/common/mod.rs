//! Oracles shared by the integration tests. Nothing here calls the area or
//! triangle code under test.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use nalgebra::{Vector2, Vector3};
use rand::Rng;

pub type V3 = Vector3<f64>;
pub type P2 = Vector2<f64>;

/// Interior angle of the geodesic polygon at `v` between the arcs to `a`
/// and to `b`.
pub fn vertex_angle(v: &V3, a: &V3, b: &V3) -> f64 {
    let ta = (a - v * v.dot(a)).normalize();
    let tb = (b - v * v.dot(b)).normalize();
    ta.cross(&tb).norm().atan2(ta.dot(&tb))
}

/// Unsigned area of a spherical triangle by Girard's theorem.
pub fn girard_excess(a: &V3, b: &V3, c: &V3) -> f64 {
    vertex_angle(a, b, c) + vertex_angle(b, c, a) + vertex_angle(c, a, b) - PI
}

/// Signed turning at `v` when travelling `prev → v → next` along great arcs,
/// positive to the left seen from outside.
pub fn turning(prev: &V3, v: &V3, next: &V3) -> f64 {
    let t_in = -(prev - v * v.dot(prev)).normalize();
    let t_out = (next - v * v.dot(next)).normalize();
    v.dot(&t_in.cross(&t_out)).atan2(t_in.dot(&t_out))
}

/// Area to the left of a simple closed geodesic polygon (no repeated end
/// point) by Gauss–Bonnet: `2π − Σ turning`.
pub fn gauss_bonnet_area(loop_pts: &[V3]) -> f64 {
    let n = loop_pts.len();
    let total: f64 = (0..n).map(|i| turning(&loop_pts[(i + n - 1) % n], &loop_pts[i], &loop_pts[(i + 1) % n])).sum();
    TAU - total
}

/// Unit vector at colatitude `theta` and longitude `phi`.
pub fn polar(theta: f64, phi: f64) -> V3 {
    V3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// A random star-shaped smooth loop about a random centre, traversed
/// counterclockwise seen from outside, as `m` points without repetition.
pub fn random_loop<R: Rng>(rng: &mut R, m: usize) -> Vec<V3> {
    let base = rng.random_range(0.3..1.2);
    let harmonics: Vec<(f64, f64, f64)> = (2..=5)
        .map(|k| (k as f64, rng.random_range(-0.04..0.04) * base, rng.random_range(0.0..TAU)))
        .collect();
    let centre = polar(rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
    let helper = if centre.x.abs() < 0.9 { V3::x() } else { V3::y() };
    let e1 = (helper - centre * centre.dot(&helper)).normalize();
    let e2 = centre.cross(&e1);
    (0..m)
        .map(|i| {
            let phi = TAU * i as f64 / m as f64;
            let theta = base + harmonics.iter().map(|(k, a, p)| a * (k * phi + p).cos()).sum::<f64>();
            let local = polar(theta, phi);
            e1 * local.x + e2 * local.y + centre * local.z
        })
        .collect()
}

/// `moving` after the rigid motion that best maps it onto `fixed` in the
/// least-squares sense (2-D Kabsch on corresponding points).
pub fn kabsch_align(fixed: &[P2], moving: &[P2]) -> Vec<P2> {
    let n = fixed.len() as f64;
    let cf = fixed.iter().sum::<P2>() / n;
    let cm = moving.iter().sum::<P2>() / n;
    let (mut dot, mut cross) = (0.0, 0.0);
    for (f, m) in fixed.iter().zip(moving) {
        let (f, m) = (f - cf, m - cm);
        dot += m.dot(&f);
        cross += m.x * f.y - m.y * f.x;
    }
    let (s, c) = cross.atan2(dot).sin_cos();
    moving
        .iter()
        .map(|m| {
            let d = m - cm;
            P2::new(c * d.x - s * d.y, s * d.x + c * d.y) + cf
        })
        .collect()
}

fn point_to_polyline(p: &P2, line: &[P2]) -> f64 {
    line.windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            let t = ((p - w[0]).dot(&d) / d.norm_squared().max(f64::MIN_POSITIVE)).clamp(0.0, 1.0);
            (p - (w[0] + d * t)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between two polylines, measured from the vertices of
/// each to the segments of the other.
pub fn hausdorff(a: &[P2], b: &[P2]) -> f64 {
    let one = |x: &[P2], y: &[P2]| x.iter().map(|p| point_to_polyline(p, y)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}
