//! Plain SVG drawings of paths, traces, scans and meshes.

use std::fmt::Write;

use crate::mesh::TrajectoidMesh;
use crate::path::PlanarPath;
use crate::trace::{SphericalTrace, Vec3};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Maps points into a `PANEL`-sized square with equal scaling on both axes
/// and `y` pointing up.
struct Frame {
    min: (f64, f64),
    scale: f64,
    offset: (f64, f64),
}

impl Frame {
    fn fit(pts: &[(f64, f64)], x0: f64) -> Self {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12);
        let scale = (PANEL - 2.0 * MARGIN) / span;
        let used = ((hi.0 - lo.0) * scale, (hi.1 - lo.1) * scale);
        Self {
            min: lo,
            scale,
            offset: (x0 + MARGIN + 0.5 * (PANEL - 2.0 * MARGIN - used.0), MARGIN + 0.5 * (PANEL - 2.0 * MARGIN - used.1)),
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (self.offset.0 + (x - self.min.0) * self.scale, PANEL - (self.offset.1 + (y - self.min.1) * self.scale))
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], frame: &Frame, stroke: &str) {
    out.push_str("<polyline fill=\"none\" stroke=\"");
    out.push_str(stroke);
    out.push_str("\" stroke-width=\"1.5\" points=\"");
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = frame.map(*p);
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x:.2},{y:.2}").unwrap();
    }
    out.push_str("\"/>");
}

fn open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
}

fn label(out: &mut String, x: f64, y: f64, text: &str) {
    write!(out, "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\">{text}</text>").unwrap();
}

/// Azimuthal equidistant projection centred on `+z`.
pub fn azimuthal(p: &Vec3) -> (f64, f64) {
    let colat = p.xy().norm().atan2(p.z);
    let phi = p.y.atan2(p.x);
    (colat * phi.cos(), colat * phi.sin())
}

/// Two panels side by side: the planar path drawn with `samples` points and
/// the azimuthal projection of the trace. Each panel is one `<g>` with one
/// polyline.
pub fn plan_and_projection(path: &PlanarPath, trace: &SphericalTrace, samples: usize) -> String {
    let plan: Vec<(f64, f64)> = path.polyline(samples.max(2)).iter().map(|p| (p.x, p.y)).collect();
    let proj: Vec<(f64, f64)> = trace.points().iter().map(azimuthal).collect();
    let mut out = open(2.0 * PANEL, PANEL);
    out.push_str("<g id=\"plan\">");
    polyline(&mut out, &plan, &Frame::fit(&plan, 0.0), "#1f5fa8");
    label(&mut out, 8.0, 16.0, "path, one period");
    out.push_str("</g><g id=\"projection\">");
    polyline(&mut out, &proj, &Frame::fit(&proj, PANEL), "#b03a2e");
    write!(out, "<text x=\"{}\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">trace at K = {:.6}</text>", PANEL + 8.0, trace.inv_radius())
        .unwrap();
    out.push_str("</g></svg>\n");
    out
}

/// Azimuthal projection of a closed contact curve about its axis.
pub fn closed_curve(points: &[Vec3], axis: &Vec3) -> String {
    let z = axis.normalize();
    let x = if z.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let x = (x - z * z.dot(&x)).normalize();
    let y = z.cross(&x);
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| azimuthal(&Vec3::new(p.dot(&x), p.dot(&y), p.dot(&z)))).collect();
    if let Some(&first) = pts.first() {
        pts.push(first);
    }
    let mut out = open(PANEL, PANEL);
    out.push_str("<g id=\"closed-curve\">");
    polyline(&mut out, &pts, &Frame::fit(&pts, 0.0), "#b03a2e");
    out.push_str("</g></svg>\n");
    out
}

/// `K·d_T(K)` against `K`, with a horizontal line at `X`.
pub fn scan_plot(table: &[(f64, f64)], x_max: f64) -> String {
    let mut out = open(PANEL, PANEL);
    if table.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let mut all = table.to_vec();
    all.push((0.0, 0.0));
    let frame = Frame::fit(&all, 0.0);
    out.push_str("<g id=\"scan\">");
    polyline(&mut out, table, &frame, "#1f5fa8");
    let (x0, y) = frame.map((0.0, x_max));
    let (x1, _) = frame.map((table.last().unwrap().0, x_max));
    write!(out, "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{x1:.2}\" y2=\"{y:.2}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>")
        .unwrap();
    label(&mut out, 8.0, 16.0, &format!("K·d_T(K), X = {x_max:.6}"));
    out.push_str("</g></svg>\n");
    out
}

/// Shaded orthographic view of a mesh from direction `(yaw, pitch)` radians.
pub fn mesh_view(mesh: &TrajectoidMesh, yaw: f64, pitch: f64, size: f64) -> String {
    let (sy, cy) = yaw.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let right = Vec3::new(cy, sy, 0.0);
    let view = Vec3::new(-sy * cp, cy * cp, sp);
    let up = right.cross(&view);
    let light = (view * 0.8 + up * 0.5 + right * 0.3).normalize();
    let extent = mesh.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-12);
    let scale = 0.45 * size / extent;
    let project = |v: &Vec3| (0.5 * size + v.dot(&right) * scale, 0.5 * size - v.dot(&up) * scale);

    let mut faces: Vec<(f64, usize)> = mesh
        .faces
        .iter()
        .enumerate()
        .filter(|(i, _)| mesh.face_directions[*i].dot(&view) > 0.0)
        .map(|(i, ring)| {
            let depth = ring.iter().map(|&v| mesh.vertices[v as usize].dot(&view)).sum::<f64>() / ring.len() as f64;
            (depth, i)
        })
        .collect();
    faces.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = open(size, size);
    out.push_str("<g id=\"mesh\" stroke-linejoin=\"round\">");
    for (_, i) in faces {
        let shade = mesh.face_directions[i].dot(&light).max(0.0);
        let c = (60.0 + 180.0 * shade) as u8;
        let fill = format!("rgb({},{},{})", c / 2 + 20, c, c.saturating_add(20));
        write!(out, "<polygon fill=\"{fill}\" stroke=\"{fill}\" stroke-width=\"0.5\" points=\"").unwrap();
        for (j, &v) in mesh.faces[i].iter().enumerate() {
            let (x, y) = project(&mesh.vertices[v as usize]);
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{x:.2},{y:.2}").unwrap();
        }
        out.push_str("\"/>");
    }
    out.push_str("</g></svg>\n");
    out
}
