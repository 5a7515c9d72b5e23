//! Three-dimensional convex hull by quickhull.
//!
//! Visibility is decided with Shewchuk's exact `orient3d`, so the visible
//! region of every eye point is a topological disk and the horizon is a
//! single cycle. Floating-point plane distances only pick the eye point.

use std::collections::HashMap;

use robust::{orient3d, Coord3D};
use thiserror::Error;

use crate::trace::Vec3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("a hull needs at least four points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} is not finite")]
    NonFinite(usize),
    #[error("all points lie in one plane")]
    Coplanar,
    #[error("horizon is not a simple cycle")]
    BrokenHorizon,
}

/// A triangle of the hull, counterclockwise seen from outside.
///
/// `neighbors[k]` shares the edge `vertices[k] → vertices[(k+1)%3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facet {
    pub vertices: [usize; 3],
    pub neighbors: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct ConvexHull {
    pub facets: Vec<Facet>,
}

impl ConvexHull {
    /// Indices of input points that are hull vertices, sorted.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().flat_map(|f| f.vertices).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn c3(p: &Vec3) -> Coord3D<f64> {
    Coord3D { x: p.x, y: p.y, z: p.z }
}

/// Positive when `d` lies below the plane of `a, b, c` (counterclockwise
/// seen from above), i.e. on the inner side of an outward facet.
fn orient(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    orient3d(c3(a), c3(b), c3(c), c3(d))
}

struct Work {
    v: [usize; 3],
    nb: [usize; 3],
    normal: Vec3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Work {
    fn new(v: [usize; 3], pts: &[Vec3]) -> Self {
        let (a, b, c) = (pts[v[0]], pts[v[1]], pts[v[2]]);
        let n = (b - a).cross(&(c - a));
        let normal = n / n.norm().max(f64::MIN_POSITIVE);
        Self { v, nb: [usize::MAX; 3], normal, offset: normal.dot(&a), outside: Vec::new(), alive: true }
    }

    fn visible(&self, pts: &[Vec3], p: usize) -> bool {
        orient(&pts[self.v[0]], &pts[self.v[1]], &pts[self.v[2]], &pts[p]) < 0.0
    }

    fn distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

fn initial_simplex(pts: &[Vec3]) -> Result<[usize; 4], HullError> {
    let mut ext = [0usize; 6];
    for (i, p) in pts.iter().enumerate() {
        for ax in 0..3 {
            if p[ax] < pts[ext[2 * ax]][ax] {
                ext[2 * ax] = i;
            }
            if p[ax] > pts[ext[2 * ax + 1]][ax] {
                ext[2 * ax + 1] = i;
            }
        }
    }
    let (mut i0, mut i1, mut best) = (0, 0, -1.0);
    for &a in &ext {
        for &b in &ext {
            let d = (pts[a] - pts[b]).norm_squared();
            if d > best {
                (i0, i1, best) = (a, b, d);
            }
        }
    }
    if best <= 0.0 {
        return Err(HullError::Coplanar);
    }
    let axis = pts[i1] - pts[i0];
    let i2 = (0..pts.len())
        .max_by(|&a, &b| {
            let da = axis.cross(&(pts[a] - pts[i0])).norm_squared();
            let db = axis.cross(&(pts[b] - pts[i0])).norm_squared();
            da.total_cmp(&db)
        })
        .unwrap();
    if axis.cross(&(pts[i2] - pts[i0])).norm_squared() == 0.0 {
        return Err(HullError::Coplanar);
    }
    let vol = |d: usize| orient(&pts[i0], &pts[i1], &pts[i2], &pts[d]).abs();
    let i3 = (0..pts.len()).max_by(|&a, &b| vol(a).total_cmp(&vol(b))).unwrap();
    if vol(i3) == 0.0 {
        return Err(HullError::Coplanar);
    }
    if orient(&pts[i0], &pts[i1], &pts[i2], &pts[i3]) > 0.0 {
        Ok([i0, i1, i2, i3])
    } else {
        Ok([i1, i0, i2, i3])
    }
}

/// Convex hull of `pts`. Points on a facet plane or inside are not hull
/// vertices.
pub fn convex_hull(pts: &[Vec3]) -> Result<ConvexHull, HullError> {
    if pts.len() < 4 {
        return Err(HullError::TooFewPoints(pts.len()));
    }
    if let Some(i) = pts.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
        return Err(HullError::NonFinite(i));
    }
    let [a, b, c, d] = initial_simplex(pts)?;
    let mut faces: Vec<Work> =
        [[a, b, c], [a, d, b], [b, d, c], [c, d, a]].into_iter().map(|v| Work::new(v, pts)).collect();
    let mut edges = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), fi);
        }
    }
    for f in faces.iter_mut() {
        for k in 0..3 {
            f.nb[k] = edges[&(f.v[(k + 1) % 3], f.v[k])];
        }
    }
    for p in 0..pts.len() {
        if [a, b, c, d].contains(&p) {
            continue;
        }
        if let Some(f) = faces.iter_mut().find(|f| f.visible(pts, p)) {
            f.outside.push(p);
        }
    }

    let mut stack: Vec<usize> = (0..4).filter(|&i| !faces[i].outside.is_empty()).collect();
    // 0 unknown, 1 visible, 2 hidden; reset after each step
    let mut state: Vec<u8> = vec![0; faces.len()];
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let eye = *faces[fi]
            .outside
            .iter()
            .max_by(|&&p, &&q| faces[fi].distance(&pts[p]).total_cmp(&faces[fi].distance(&pts[q])))
            .unwrap();

        state.resize(faces.len(), 0);
        let mut visible = vec![fi];
        let mut touched = vec![fi];
        state[fi] = 1;
        let mut horizon = Vec::new();
        let mut q = 0;
        while q < visible.len() {
            let f = visible[q];
            q += 1;
            for k in 0..3 {
                let g = faces[f].nb[k];
                if state[g] == 0 {
                    touched.push(g);
                    if faces[g].visible(pts, eye) {
                        state[g] = 1;
                        visible.push(g);
                    } else {
                        state[g] = 2;
                    }
                }
                if state[g] == 2 {
                    horizon.push((faces[f].v[k], faces[f].v[(k + 1) % 3], g));
                }
            }
        }
        for &t in &touched {
            state[t] = 0;
        }

        let first_new = faces.len();
        let mut by_start = HashMap::with_capacity(horizon.len());
        let mut by_end = HashMap::with_capacity(horizon.len());
        for (j, &(u, v, g)) in horizon.iter().enumerate() {
            let id = first_new + j;
            let mut w = Work::new([u, v, eye], pts);
            w.nb[0] = g;
            let slot = (0..3)
                .find(|&s| faces[g].v[s] == v && faces[g].v[(s + 1) % 3] == u)
                .ok_or(HullError::BrokenHorizon)?;
            faces[g].nb[slot] = id;
            if by_start.insert(u, id).is_some() || by_end.insert(v, id).is_some() {
                return Err(HullError::BrokenHorizon);
            }
            faces.push(w);
        }
        for id in first_new..faces.len() {
            let [u, v, _] = faces[id].v;
            faces[id].nb[1] = *by_start.get(&v).ok_or(HullError::BrokenHorizon)?;
            faces[id].nb[2] = *by_end.get(&u).ok_or(HullError::BrokenHorizon)?;
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            orphans.append(&mut faces[f].outside);
        }
        for p in orphans {
            if p == eye {
                continue;
            }
            if let Some(f) = faces[first_new..].iter_mut().find(|f| f.visible(pts, p)) {
                f.outside.push(p);
            }
        }
        stack.extend((first_new..faces.len()).filter(|&i| !faces[i].outside.is_empty()));
    }

    let mut remap = vec![usize::MAX; faces.len()];
    let mut next = 0;
    for (i, f) in faces.iter().enumerate() {
        if f.alive {
            remap[i] = next;
            next += 1;
        }
    }
    let facets = faces
        .iter()
        .filter(|f| f.alive)
        .map(|f| Facet { vertices: f.v, neighbors: f.nb.map(|g| remap[g]) })
        .collect();
    Ok(ConvexHull { facets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_closed(h: &ConvexHull, pts: &[Vec3]) {
        for (i, f) in h.facets.iter().enumerate() {
            for k in 0..3 {
                let g = &h.facets[f.neighbors[k]];
                let (u, v) = (f.vertices[k], f.vertices[(k + 1) % 3]);
                assert!((0..3).any(|s| g.vertices[s] == v && g.vertices[(s + 1) % 3] == u), "facet {i} edge {k}");
            }
            let [a, b, c] = f.vertices.map(|v| pts[v]);
            for p in pts {
                assert!(orient(&a, &b, &c, p) >= 0.0);
            }
        }
        let v = h.vertex_indices().len() as i64;
        let fcount = h.facets.len() as i64;
        assert_eq!(v - 3 * fcount / 2 + fcount, 2);
    }

    #[test]
    fn cube_with_interior_points() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64));
        }
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        pts.push(Vec3::new(0.5, 0.5, 1.0));
        let h = convex_hull(&pts).unwrap();
        check_closed(&h, &pts);
        assert_eq!(h.vertex_indices(), (0..8).collect::<Vec<_>>());
        assert_eq!(h.facets.len(), 12);
    }

    #[test]
    fn random_sphere_points_are_all_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec3> = (0..500)
            .map(|_| {
                Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    .normalize()
            })
            .collect();
        let h = convex_hull(&pts).unwrap();
        check_closed(&h, &pts);
        assert_eq!(h.vertex_indices().len(), 500);
    }

    #[test]
    fn planar_input_is_rejected() {
        let pts: Vec<Vec3> = (0..20).map(|i| Vec3::new((i as f64).cos(), (i as f64).sin(), 0.0)).collect();
        assert_eq!(convex_hull(&pts).unwrap_err(), HullError::Coplanar);
        assert_eq!(convex_hull(&pts[..3]).unwrap_err(), HullError::TooFewPoints(3));
    }
}
