mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use proptest::prelude::*;
use trajectoid::corpus;
use trajectoid::path::{path_from_curvature, sample_curvature, PathOptions, PlanarPath};
use trajectoid::solver::{compute_bounds, find_kx, SolverConfig};
use trajectoid::sphere::{region_area_d, signed_region_area};
use trajectoid::trace::{angle_between, contact_point_from_rotation, net_rotation, trace, TraceOptions};

fn build(samples: usize, kappa: impl Fn(f64) -> f64, opts: &PathOptions) -> PlanarPath {
    path_from_curvature(&sample_curvature(1.0, samples, kappa), 1.0, opts).unwrap()
}

#[test]
fn constant_curvature_traces_a_small_circle() {
    for (kappa, k) in [(2.0, 1.0), (-3.0, 2.0), (0.5, 3.0)] {
        let p = build(65, |_| kappa, &PathOptions::open());
        let tr = trace(&p, k, &TraceOptions::default()).unwrap();
        // geodesic curvature κ/K on the unit sphere ⇔ circle of angular radius β, cot β = |κ|/K
        let beta = (k / f64::abs(kappa)).atan();
        let u = tr.start_frame().u;
        let centre = (tr.start() * beta.cos() + u * (beta.sin() * kappa.signum())).normalize();
        let worst = tr.points().iter().map(|q| (angle_between(q, &centre) - beta).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-10, "κ={kappa} K={k}: {worst:e}");
        // arclength on the unit sphere is K·L, so the angle swept about the centre is K·L/sin β
        let swept = k / beta.sin();
        let e = tr.end();
        let (a, b) = (tr.start() - centre * centre.dot(&tr.start()), e - centre * centre.dot(&e));
        let turned = centre.dot(&a.cross(&b)).atan2(a.dot(&b));
        let want = (kappa.signum() * swept + PI).rem_euclid(TAU) - PI;
        assert!((turned - want).abs() < 1e-9, "{turned} vs {want}");
    }
}

#[test]
fn loop_area_tends_to_planar_shoelace() {
    let p = corpus::by_name("fourier", 2049).unwrap().build(&PathOptions::default()).unwrap();
    let pts = p.polyline(4001);
    let mut shoelace = 0.0;
    for w in pts.windows(2) {
        shoelace += w[0].x * w[1].y - w[1].x * w[0].y;
    }
    // closing chord end → start
    let (a, b) = (pts[pts.len() - 1], pts[0]);
    shoelace += a.x * b.y - b.x * a.y;
    let planar = 0.5 * shoelace;
    assert!(planar.abs() > 1e-3);

    let mut prev = f64::INFINITY;
    for k in [0.2, 0.1, 0.05] {
        let tr = trace(&p, k, &TraceOptions::default()).unwrap();
        let area = region_area_d(&tr).unwrap();
        let rel = (area.abs() - planar.abs()).abs() / planar.abs();
        // leading correction is O(K²)
        assert!(rel < 0.5 * k * k, "K={k}: {area} vs {planar}");
        assert!(rel < prev);
        prev = rel;
    }
}

#[test]
fn rolling_rotation_predicts_trace_endpoint() {
    for name in corpus::NAMES {
        let p = corpus::by_name(name, corpus::DEFAULT_SAMPLES).unwrap().build(&PathOptions::default()).unwrap();
        for k in [0.4, 1.3, 2.9] {
            let opts = TraceOptions::default();
            let tr = trace(&p, k, &opts).unwrap();
            let rot = net_rotation(&p, k, &opts).unwrap();
            let predicted = contact_point_from_rotation(&rot, p.start_angle());
            assert!((predicted - tr.end()).norm() < 1e-9, "{name} K={k}");
        }
    }
}

#[test]
fn trace_endpoint_converges_at_fourth_order() {
    let p = corpus::by_name("sine", 257).unwrap().build(&PathOptions::default()).unwrap();
    let end = |steps| trace(&p, 2.0, &TraceOptions::with_steps(steps)).unwrap().end();
    let (a, b, c) = (end(256), end(512), end(1024));
    let ratio = (a - b).norm() / (b - c).norm();
    // RK4 in the step, with the curvature interpolation fixed by the samples
    assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    let richardson = c + (c - b) / 15.0;
    let fine = end(8192);
    assert!((richardson - fine).norm() < 1e-12);
}

#[test]
fn gauss_bonnet_on_random_loops() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let mut pts = random_loop(&mut rng, 800);
        let gb = gauss_bonnet_area(&pts);
        pts.push(pts[0]);
        let area = signed_region_area(&pts).unwrap();
        assert!((area - gb).abs() < 1e-9, "{area} vs {gb}");
    }
}

fn fourier_path(c: &[f64]) -> PlanarPath {
    let c = c.to_vec();
    build(
        257,
        move |s| c.chunks(2).enumerate().map(|(i, ab)| {
            let w = TAU * (i + 1) as f64 * s;
            ab[0] * w.cos() + ab[1] * w.sin()
        }).sum(),
        &PathOptions::default(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frames_stay_orthonormal(c in prop::collection::vec(-3.0f64..3.0, 6), k in 0.05f64..3.0) {
        let p = fourier_path(&c);
        let tr = trace(&p, k, &TraceOptions::default()).unwrap();
        prop_assert!(tr.max_frame_defect() < 1e-12);
        let rot = net_rotation(&p, k, &TraceOptions::default()).unwrap();
        prop_assert!(rot.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn kx_never_overshoots(c in prop::collection::vec(-2.0f64..2.0, 4), n in 3u32..9) {
        let p = fourier_path(&c);
        let cfg = SolverConfig { scan_resolution: 200, ..SolverConfig::default() };
        let bounds = compute_bounds(&p, &cfg).unwrap();
        let x = TAU / n as f64;
        prop_assume!(x <= bounds.x_max);
        let k = find_kx(&p, x, &bounds, &cfg).unwrap();
        let tr = trace(&p, k, &cfg.trace).unwrap();
        prop_assert!(tr.endpoint_angle() <= x + 1e-15);
        prop_assert!(x - tr.endpoint_angle() < 1e-9);
    }

    #[test]
    fn isometric_start_does_not_change_the_trace_shape(
        c in prop::collection::vec(-3.0f64..3.0, 4),
        x0 in -5.0f64..5.0, y0 in -5.0f64..5.0, th in -PI..PI, k in 0.1f64..3.0,
    ) {
        let p = fourier_path(&c);
        let q = p.with_start(trajectoid::path::Point2::new(x0, y0), th);
        let opts = TraceOptions::default();
        let (a, b) = (trace(&p, k, &opts).unwrap(), trace(&q, k, &opts).unwrap());
        prop_assert!((a.endpoint_angle() - b.endpoint_angle()).abs() < 1e-12);
        let (ra, rb) = (net_rotation(&p, k, &opts).unwrap(), net_rotation(&q, k, &opts).unwrap());
        prop_assert!((ra.angle - rb.angle).abs() < 1e-10);
    }
}
