//! From a solved trace to a printable solid.
//!
//! [`assemble_closed_curve`] rotates `n` copies of the trace about the apex
//! axis `OC` into one closed contact curve. [`build_mesh`] intersects the
//! tangent half-spaces of the sphere along that curve. Each half-space
//! `{y : y·p ≤ r}` is dual to the point `p/r`, so the body is read off the
//! convex hull of the (unit) curve points: hull facets become body vertices
//! and hull vertices become body faces.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path as FsPath;
use std::str::FromStr;

use nalgebra::{Rotation3, Unit};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hull::{convex_hull, HullError};
use crate::sphere::{apex_point, chord_correction, is_great_arc, signed_area_about, Apex, GeometryError};
use crate::trace::{SphericalTrace, Vec3};

pub const JUNCTION_GAP_TOLERANCE: f64 = 1e-8;
pub const TANGENT_KINK_TOLERANCE: f64 = 1e-5;
pub const AREA_TOLERANCE: f64 = 1e-6;
pub const CONVEXITY_TOLERANCE: f64 = 1e-7;
pub const INSCRIBED_TOLERANCE: f64 = 1e-6;
pub const SUPPORT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_SAMPLES_PER_COPY: usize = 2048;
pub const MIN_MESH_SAMPLES: usize = 64;
/// Body vertices of adjacent hull facets closer than this (relative to the
/// inscribed radius) are merged. Planes that nearly share a line, as along
/// straight runs of the path, meet in ill-conditioned clusters up to a few
/// `1e-8` across, below `f32` resolution in exported files.
pub const MERGE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("junction gap: copies meet {gap:e} apart (limit {limit:e}); the scale is not a valid root")]
    JunctionGap { gap: f64, limit: f64 },
    #[error("degenerate hull: {0}")]
    DegenerateHull(String),
    #[error("need at least {min} curve samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("copy count must be at least 1")]
    InvalidCopies,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Measured defects of an assembled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveDiagnostics {
    /// Largest distance between a copy's end and the next copy's start.
    pub junction_gap: f64,
    /// Largest tangent turn at a junction, radians.
    pub tangent_kink: f64,
    /// `max_j |R·P_j − P_{j+m}|` for the generating rotation `R`.
    pub symmetry_residual: f64,
    /// Winding-weighted area on the unit sphere, fanned from the axis.
    pub enclosed_area: f64,
    /// `| |S| − 2π | / 2π`: how far the curve is from halving the sphere.
    pub halving_residual: f64,
}

/// `n` rotated copies of a trace, closed into one loop on the unit sphere.
#[derive(Debug, Clone)]
pub struct ClosedSphericalCurve {
    /// `n·m` unit vectors; the first point is not repeated.
    pub points: Vec<Vec3>,
    pub tangents: Vec<Vec3>,
    /// Geodesic curvature on the unit sphere at each point.
    pub geodesic: Vec<f64>,
    pub axis: Vec3,
    /// Signed rotation angle between consecutive copies.
    pub step_angle: f64,
    pub n: u32,
    pub k: f64,
    pub copy_len: usize,
    pub diagnostics: CurveDiagnostics,
    pub warnings: Vec<String>,
}

impl ClosedSphericalCurve {
    /// Points with the first repeated at the end.
    pub fn closed_points(&self) -> Vec<Vec3> {
        let mut p = self.points.clone();
        p.push(self.points[0]);
        p
    }
}

fn subsample(len: usize, count: usize) -> Vec<usize> {
    let m = len - 1;
    let c = count.clamp(1, m);
    (0..=c).map(|j| ((j as f64) * m as f64 / c as f64).round() as usize).collect()
}

/// The full great circle through a great-arc trace: rolling along a straight
/// line traces the same circle whatever the scale.
fn great_circle_closure(trace: &SphericalTrace, n: u32, apex: Apex, samples_per_copy: usize) -> ClosedSphericalCurve {
    let axis = trace.start_frame().u;
    let a = trace.start();
    let total = n as usize * samples_per_copy.max(1);
    let mut points = Vec::with_capacity(total);
    let mut tangents = Vec::with_capacity(total);
    for j in 0..total {
        let phi = TAU * j as f64 / total as f64;
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(axis), phi);
        points.push(r * a);
        tangents.push(r * trace.start_frame().t);
    }
    let mut closed = points.clone();
    closed.push(points[0]);
    let enclosed_area = signed_area_about(&closed, &axis);
    ClosedSphericalCurve {
        points,
        tangents,
        geodesic: vec![0.0; total],
        axis: axis * apex.sign(),
        step_angle: TAU / n as f64,
        n,
        k: trace.inv_radius(),
        copy_len: samples_per_copy.max(1),
        diagnostics: CurveDiagnostics {
            junction_gap: 0.0,
            tangent_kink: 0.0,
            symmetry_residual: 0.0,
            enclosed_area,
            halving_residual: (enclosed_area.abs() - TAU).abs() / TAU,
        },
        warnings: vec!["straight path: closed with the full great circle".to_string()],
    }
}

/// Builds the closed curve and measures its defects without rejecting it.
///
/// A great-arc trace (straight path) is closed with its full great circle.
pub fn assemble_unchecked(
    trace: &SphericalTrace,
    n: u32,
    apex: Apex,
    samples_per_copy: usize,
) -> Result<ClosedSphericalCurve, MeshError> {
    if n == 0 {
        return Err(MeshError::InvalidCopies);
    }
    if is_great_arc(trace) {
        return Ok(great_circle_closure(trace, n, apex, samples_per_copy));
    }
    let x = TAU / n as f64;
    let axis = apex_point(trace, x.min(PI), apex)?;
    let k = trace.inv_radius();
    let (a, b) = (trace.start(), trace.end());
    let unit = Unit::new_normalize(axis);
    let plus = Rotation3::from_axis_angle(&unit, x);
    let minus = Rotation3::from_axis_angle(&unit, -x);
    let (rot, step_angle) = if (plus * a - b).norm() <= (minus * a - b).norm() { (plus, x) } else { (minus, -x) };

    let idx = subsample(trace.frames().len(), samples_per_copy);
    let m = idx.len() - 1;
    let frames = trace.frames();
    let kappa = trace.curvatures();
    let mut points = Vec::with_capacity(n as usize * m);
    let mut tangents = Vec::with_capacity(n as usize * m);
    let mut geodesic = Vec::with_capacity(n as usize * m);
    let mut ends = Vec::with_capacity(n as usize);
    let mut r = Rotation3::identity();
    for _ in 0..n {
        for &j in &idx[..m] {
            points.push(r * frames[j].p);
            tangents.push(r * frames[j].t);
            geodesic.push(kappa[j] / k);
        }
        let last = frames[idx[m]];
        ends.push((r * last.p, r * last.t));
        r = rot * r;
    }

    let total = points.len();
    let mut junction_gap: f64 = 0.0;
    let mut tangent_kink: f64 = 0.0;
    for (i, (end_p, end_t)) in ends.iter().enumerate() {
        let next = ((i + 1) * m) % total;
        junction_gap = junction_gap.max((points[next] - end_p).norm());
        let out = tangents[next];
        let turn = end_t.cross(&out).dot(&points[next]).atan2(end_t.dot(&out));
        tangent_kink = tangent_kink.max(turn.abs());
    }
    let symmetry_residual =
        (0..total).map(|j| (rot * points[j] - points[(j + m) % total]).norm()).fold(0.0, f64::max);

    let mut loop_pts = points.clone();
    loop_pts.push(points[0]);
    let mut loop_g = geodesic.clone();
    loop_g.push(geodesic[0]);
    let enclosed_area = signed_area_about(&loop_pts, &axis) + chord_correction(&loop_pts, &loop_g);
    let halving_residual = (enclosed_area.abs() - TAU).abs() / TAU;

    let mut warnings = Vec::new();
    if tangent_kink > TANGENT_KINK_TOLERANCE {
        let msg = format!("tangent kink of {tangent_kink:e} rad at copy junctions");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(ClosedSphericalCurve {
        points,
        tangents,
        geodesic,
        axis,
        step_angle,
        n,
        k,
        copy_len: m,
        diagnostics: CurveDiagnostics { junction_gap, tangent_kink, symmetry_residual, enclosed_area, halving_residual },
        warnings,
    })
}

/// Closed contact curve from a trace at a solved scale. Fails with
/// [`MeshError::JunctionGap`] when the copies do not meet; a tangent kink is
/// only a warning.
pub fn assemble_closed_curve(
    trace: &SphericalTrace,
    n: u32,
    apex: Apex,
    samples_per_copy: usize,
) -> Result<ClosedSphericalCurve, MeshError> {
    let curve = assemble_unchecked(trace, n, apex, samples_per_copy)?;
    let gap = curve.diagnostics.junction_gap;
    if !(gap <= JUNCTION_GAP_TOLERANCE) {
        return Err(MeshError::JunctionGap { gap, limit: JUNCTION_GAP_TOLERANCE });
    }
    Ok(curve)
}

/// Where a mesh came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub path_id: String,
    pub n: u32,
    #[serde(rename = "Q_x")]
    pub q_x: f64,
}

/// Convex polyhedron circumscribing the sphere of radius `inscribed_radius`.
#[derive(Debug, Clone)]
pub struct TrajectoidMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// Polygonal faces, counterclockwise from outside.
    pub faces: Vec<Vec<u32>>,
    /// Unit outward normal of each face: the contact direction it touches.
    pub face_directions: Vec<Vec3>,
    /// Face index of each triangle.
    pub triangle_face: Vec<u32>,
    pub inscribed_radius: f64,
    pub provenance: Provenance,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Intersection of the half-spaces `{y : y·d ≤ r}` over unit directions `d`.
pub fn halfspace_intersection(directions: &[Vec3], r: f64) -> Result<TrajectoidMesh, MeshError> {
    let hull = convex_hull(directions).map_err(|e| match e {
        HullError::Coplanar => {
            MeshError::DegenerateHull("unbounded body: all contact directions lie on one great circle".into())
        }
        other => MeshError::DegenerateHull(other.to_string()),
    })?;

    // body vertex of facet (a, b, c): the y with y·a = y·b = y·c = r
    let mut corners = Vec::with_capacity(hull.facets.len());
    for f in &hull.facets {
        let [a, b, c] = f.vertices.map(|i| directions[i]);
        let det = a.dot(&b.cross(&c));
        let sum = b.cross(&c) + c.cross(&a) + a.cross(&b);
        let height = det / sum.norm();
        if !(height > 1e-8) {
            return Err(MeshError::DegenerateHull(format!(
                "unbounded body: contact directions leave an open hemisphere (facet plane at distance {height:e})"
            )));
        }
        corners.push(sum * (r / det));
    }

    let mut uf = UnionFind((0..corners.len()).collect());
    for (i, f) in hull.facets.iter().enumerate() {
        for &g in &f.neighbors {
            if (corners[i] - corners[g]).norm() <= MERGE_TOLERANCE * r {
                uf.union(i, g);
            }
        }
    }
    let mut id = vec![u32::MAX; corners.len()];
    let mut sums: Vec<(Vec3, usize)> = Vec::new();
    for i in 0..corners.len() {
        let root = uf.find(i);
        if id[root] == u32::MAX {
            id[root] = sums.len() as u32;
            sums.push((Vec3::zeros(), 0));
        }
        id[i] = id[root];
        let s = &mut sums[id[i] as usize];
        s.0 += corners[i];
        s.1 += 1;
    }
    let merged: Vec<Vec3> = sums.iter().map(|(s, c)| s / *c as f64).collect();

    let mut incident = vec![usize::MAX; directions.len()];
    for (fi, f) in hull.facets.iter().enumerate() {
        for &v in &f.vertices {
            incident[v] = fi;
        }
    }
    let mut faces = Vec::new();
    let mut face_directions = Vec::new();
    for (v, &start) in incident.iter().enumerate() {
        if start == usize::MAX {
            continue;
        }
        let mut ring: Vec<u32> = Vec::new();
        let mut f = start;
        for _ in 0..=hull.facets.len() {
            let facet = &hull.facets[f];
            let k = facet.vertices.iter().position(|&w| w == v).unwrap();
            let c = id[f];
            if ring.last() != Some(&c) {
                ring.push(c);
            }
            f = facet.neighbors[(k + 2) % 3];
            if f == start {
                break;
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        if ring.len() < 3 {
            continue;
        }
        let normal = newell(&ring, &merged);
        if normal.dot(&directions[v]) < 0.0 {
            ring.reverse();
        }
        faces.push(ring);
        face_directions.push(directions[v]);
    }

    // keep only referenced vertices
    let mut used = vec![u32::MAX; merged.len()];
    let mut vertices = Vec::new();
    for face in faces.iter_mut() {
        for c in face.iter_mut() {
            if used[*c as usize] == u32::MAX {
                used[*c as usize] = vertices.len() as u32;
                vertices.push(merged[*c as usize]);
            }
            *c = used[*c as usize];
        }
    }
    let mut triangles = Vec::new();
    let mut triangle_face = Vec::new();
    for (fi, face) in faces.iter().enumerate() {
        let apex = best_fan_apex(face, &vertices);
        let k = face.len();
        for j in 1..k - 1 {
            triangles.push([face[apex], face[(apex + j) % k], face[(apex + j + 1) % k]]);
            triangle_face.push(fi as u32);
        }
    }
    Ok(TrajectoidMesh {
        vertices,
        triangles,
        faces,
        face_directions,
        triangle_face,
        inscribed_radius: r,
        provenance: Provenance::default(),
    })
}

/// Fan apex of a convex polygon that maximises the smallest triangle, so
/// nearly straight vertices do not end up in slivers.
fn best_fan_apex(ring: &[u32], pts: &[Vec3]) -> usize {
    let k = ring.len();
    if k == 3 {
        return 0;
    }
    let p = |i: usize| pts[ring[i % k] as usize];
    (0..k)
        .map(|a| {
            let worst = (1..k - 1)
                .map(|j| (p(a + j) - p(a)).cross(&(p(a + j + 1) - p(a))).norm())
                .fold(f64::INFINITY, f64::min);
            (a, worst)
        })
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
        .0
}

fn newell(ring: &[u32], pts: &[Vec3]) -> Vec3 {
    let mut n = Vec3::zeros();
    for (i, &a) in ring.iter().enumerate() {
        let p = pts[a as usize];
        let q = pts[ring[(i + 1) % ring.len()] as usize];
        n += Vec3::new((p.y - q.y) * (p.z + q.z), (p.z - q.z) * (p.x + q.x), (p.x - q.x) * (p.y + q.y));
    }
    n
}

/// The trajectoid bounded by the tangent planes of the radius-`K⁻¹` sphere
/// along `curve`.
pub fn build_mesh(curve: &ClosedSphericalCurve) -> Result<TrajectoidMesh, MeshError> {
    if curve.points.len() < MIN_MESH_SAMPLES {
        return Err(MeshError::TooFewSamples { got: curve.points.len(), min: MIN_MESH_SAMPLES });
    }
    let mut mesh = halfspace_intersection(&curve.points, 1.0 / curve.k)?;
    mesh.provenance = Provenance { path_id: String::new(), n: curve.n, q_x: curve.k };
    Ok(mesh)
}

/// Invariant measurements of a mesh against its contact directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshReport {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    /// Every undirected edge used by exactly two triangles, once each way.
    pub watertight: bool,
    /// Largest `(y·d − r)/r` over vertices `y` and contact directions `d`.
    pub convexity_violation: f64,
    /// Smallest face-plane distance from the origin, from the vertices alone.
    pub measured_inscribed_radius: f64,
    pub inscribed_radius: f64,
    pub inscribed_residual: f64,
    /// Largest distance from a contact point `r·d` to its face plane, over `r`.
    pub support_residual: f64,
    pub volume: f64,
    pub degenerate_triangles: usize,
}

impl MeshReport {
    /// Names of the invariants that fail their tolerance.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.watertight || self.euler_characteristic != 2 {
            out.push("watertight");
        }
        if !(self.convexity_violation <= CONVEXITY_TOLERANCE) {
            out.push("convexity");
        }
        if !(self.inscribed_residual <= INSCRIBED_TOLERANCE) {
            out.push("inscribed radius");
        }
        if !(self.support_residual <= SUPPORT_TOLERANCE) {
            out.push("support");
        }
        if self.degenerate_triangles > 0 {
            out.push("degenerate triangles");
        }
        out
    }

    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }
}

impl TrajectoidMesh {
    pub fn volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i as usize]);
                a.dot(&b.cross(&c))
            })
            .sum::<f64>()
            / 6.0
    }

    /// Unit outward normal and offset of each face plane, fitted to its
    /// vertices only.
    pub fn face_planes(&self) -> Vec<(Vec3, f64)> {
        self.faces
            .iter()
            .map(|ring| {
                let n = newell(ring, &self.vertices).normalize();
                let centroid: Vec3 =
                    ring.iter().map(|&i| self.vertices[i as usize]).sum::<Vec3>() / ring.len() as f64;
                (n, n.dot(&centroid))
            })
            .collect()
    }

    /// Checks every mesh invariant against the contact directions `dirs`.
    pub fn check(&self, dirs: &[Vec3]) -> MeshReport {
        let r = self.inscribed_radius;
        let mut directed = std::collections::HashMap::new();
        let mut degenerate = 0;
        for t in &self.triangles {
            let [a, b, c] = t.map(|i| self.vertices[i as usize]);
            if (b - a).cross(&(c - a)).norm() <= 1e-14 * r * r || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                degenerate += 1;
            }
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_insert(0usize) += 1;
            }
        }
        let watertight = directed
            .iter()
            .all(|(&(a, b), &count)| count == 1 && directed.get(&(b, a)) == Some(&1));
        let edges = directed.len() / 2;
        let euler = self.vertices.len() as i64 - edges as i64 + self.triangles.len() as i64;

        let convexity_violation = crate::solver::par_chunks_max(&self.vertices, |y| {
            dirs.iter().map(|d| (y.dot(d) - r) / r).fold(f64::NEG_INFINITY, f64::max)
        });

        let planes = self.face_planes();
        let measured = planes.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);

        let mut own = std::collections::HashMap::new();
        for (fi, d) in self.face_directions.iter().enumerate() {
            own.insert(key(d), fi);
        }
        let support_residual = crate::solver::par_chunks_max(dirs, |d| {
            let y = d * r;
            let dist = |p: &(Vec3, f64)| (p.0.dot(&y) - p.1).abs() / r;
            match own.get(&key(d)) {
                Some(&fi) => dist(&planes[fi]),
                None => planes.iter().map(dist).fold(f64::INFINITY, f64::min),
            }
        });

        MeshReport {
            vertices: self.vertices.len(),
            edges,
            triangles: self.triangles.len(),
            faces: self.faces.len(),
            euler_characteristic: euler,
            watertight,
            convexity_violation,
            measured_inscribed_radius: measured,
            inscribed_radius: r,
            inscribed_residual: (measured - r).abs() / r,
            support_residual,
            volume: self.volume(),
            degenerate_triangles: degenerate,
        }
    }
}

fn key(d: &Vec3) -> [u64; 3] {
    [d.x.to_bits(), d.y.to_bits(), d.z.to_bits()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshFormat {
    Stl,
    Obj,
}

impl FromStr for MeshFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "stl" => Ok(MeshFormat::Stl),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(format!("unknown mesh format '{other}' (expected stl or obj)")),
        }
    }
}

impl fmt::Display for MeshFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeshFormat::Stl => "stl",
            MeshFormat::Obj => "obj",
        })
    }
}

fn header_text(mesh: &TrajectoidMesh) -> String {
    let p = &mesh.provenance;
    format!("trajectoid path={} n={} Q_x={} r={}", p.path_id, p.n, p.q_x, mesh.inscribed_radius)
}

/// Binary STL: 80-byte header, triangle count, then per triangle a normal,
/// three vertices (all `f32`, little-endian) and a zero attribute word.
pub fn write_stl<W: Write>(mesh: &TrajectoidMesh, mut out: W) -> io::Result<()> {
    let mut header = [0u8; 80];
    let text = header_text(mesh);
    let n = text.len().min(80);
    header[..n].copy_from_slice(&text.as_bytes()[..n]);
    out.write_all(&header)?;
    out.write_all(&(mesh.triangles.len() as u32).to_le_bytes())?;
    for (t, &fi) in mesh.triangles.iter().zip(&mesh.triangle_face) {
        let normal = mesh.face_directions[fi as usize];
        for c in normal.iter() {
            out.write_all(&(*c as f32).to_le_bytes())?;
        }
        for &i in t {
            for c in mesh.vertices[i as usize].iter() {
                out.write_all(&(*c as f32).to_le_bytes())?;
            }
        }
        out.write_all(&0u16.to_le_bytes())?;
    }
    Ok(())
}

/// ASCII OBJ with 1-based face indices.
pub fn write_obj<W: Write>(mesh: &TrajectoidMesh, mut out: W) -> io::Result<()> {
    writeln!(out, "# {}", header_text(mesh))?;
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

pub fn export_mesh(mesh: &TrajectoidMesh, format: MeshFormat, path: &FsPath) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        MeshFormat::Stl => write_stl(mesh, &mut out)?,
        MeshFormat::Obj => write_obj(mesh, &mut out)?,
    }
    out.flush()
}

/// A triangle read back from binary STL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StlTriangle {
    pub normal: [f32; 3],
    pub vertices: [[f32; 3]; 3],
}

pub fn read_stl<R: Read>(mut input: R) -> io::Result<Vec<StlTriangle>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    if bytes.len() < 84 {
        return Err(bad("STL shorter than its header"));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() != 84 + 50 * count {
        return Err(bad("STL length does not match its triangle count"));
    }
    let f = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    Ok((0..count)
        .map(|t| {
            let o = 84 + 50 * t;
            let v = |j: usize| [f(o + 12 * j), f(o + 12 * j + 4), f(o + 12 * j + 8)];
            StlTriangle { normal: v(0), vertices: [v(1), v(2), v(3)] }
        })
        .collect())
}

/// Undirected-edge manifold check on a triangle soup, welding vertices that
/// are bitwise equal. Returns `(V, E, F, every edge shared by two)`.
pub fn soup_topology(tris: &[StlTriangle]) -> (usize, usize, usize, bool) {
    let mut ids = std::collections::HashMap::new();
    let mut id = |v: [f32; 3]| {
        let k = v.map(f32::to_bits);
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    };
    let mut edges = std::collections::HashMap::new();
    for t in tris {
        let [a, b, c] = t.vertices.map(&mut id);
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *edges.entry((u.min(v), u.max(v))).or_insert(0usize) += 1;
        }
    }
    let manifold = edges.values().all(|&c| c == 2);
    (ids.len(), edges.len(), tris.len(), manifold)
}
