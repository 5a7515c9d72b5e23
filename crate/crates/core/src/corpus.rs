//! Reference paths of unit period used by the tests, the CLI `example`
//! command and the browser demo.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::path::{sample_curvature, PathSpec};

pub const DEFAULT_SAMPLES: usize = 1025;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 5] = ["straight", "sine", "zigzag", "serpentine", "fourier"];

fn spec(samples: usize, kappa: impl Fn(f64) -> f64) -> PathSpec {
    let samples = sample_curvature(1.0, samples, kappa);
    PathSpec::Curvature { length: 1.0, samples: samples.iter().map(|c| [c.s, c.kappa]).collect(), allow_open: false }
}

pub fn straight(samples: usize) -> PathSpec {
    spec(samples, |_| 0.0)
}

/// `κ(s) = c·sin(2πs)`.
pub fn sine(amplitude: f64, samples: usize) -> PathSpec {
    spec(samples, move |s| amplitude * (TAU * s).sin())
}

/// A smooth bump of unit integral and half-width `w` centred at 0.
fn bump(u: f64, w: f64) -> f64 {
    if u.abs() >= w {
        0.0
    } else {
        (PI * u / (2.0 * w)).cos().powi(2) / w
    }
}

/// Straight runs joined by a left turn of `angle` at `s = 1/4` and a right
/// turn of `angle` at `s = 3/4`, each spread over a smooth bump.
pub fn zigzag(angle: f64, samples: usize) -> PathSpec {
    let w = 0.12;
    spec(samples, move |s| angle * (bump(s - 0.25, w) - bump(s - 0.75, w)))
}

/// Half circles of radius about `radius` joined by straight runs, turning
/// alternately left and right: a serpentine that advances `4ρ` per period.
///
/// The period starts halfway round a left half circle, and `ρ` is rounded so
/// every curvature jump falls midway between samples. Linear interpolation
/// of the samples then integrates each piece exactly and the total turning
/// is zero.
pub fn serpentine(radius: f64, samples: usize) -> PathSpec {
    let h = 1.0 / (samples - 1) as f64;
    let j = ((PI * radius / h - 1.0) / 2.0).round().max(0.0);
    let arc = (2.0 * j + 1.0) * h;
    let line = 0.5 - arc;
    assert!(line > 0.0, "radius too large for a unit period");
    let rho = arc / PI;
    let breaks = [0.5 * arc, 0.5 * arc + line, 1.5 * arc + line, 1.5 * arc + 2.0 * line];
    spec(samples, move |s| {
        if s < breaks[0] || s >= breaks[3] {
            1.0 / rho
        } else if s < breaks[1] || s >= breaks[2] {
            0.0
        } else {
            -1.0 / rho
        }
    })
}

/// `κ(s) = Σ_{k=1..4} (a_k cos 2πks + b_k sin 2πks)` with coefficients drawn
/// from `seed`, scaled so the largest coefficient pair has modulus `scale`.
pub fn fourier(seed: u64, scale: f64, samples: usize) -> PathSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> =
        (1..=4).map(|k| (rng.random_range(-1.0..1.0) / k as f64, rng.random_range(-1.0..1.0) / k as f64)).collect();
    let top = coeffs.iter().map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
    let c: Vec<(f64, f64)> = coeffs.iter().map(|(a, b)| (a * scale / top, b * scale / top)).collect();
    spec(samples, move |s| {
        c.iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let w = TAU * (i + 1) as f64 * s;
                a * w.cos() + b * w.sin()
            })
            .sum()
    })
}

/// Preset by name with its default parameters.
pub fn by_name(name: &str, samples: usize) -> Option<PathSpec> {
    Some(match name {
        "straight" => straight(samples),
        "sine" => sine(4.0, samples),
        "zigzag" => zigzag(1.0, samples),
        "serpentine" => serpentine(0.1, samples),
        "fourier" => fourier(7, 3.0, samples),
        _ => return None,
    })
}

/// The four curved presets, for sweeps.
pub fn curved() -> Vec<(&'static str, PathSpec)> {
    NAMES[1..].iter().map(|&n| (n, by_name(n, DEFAULT_SAMPLES).unwrap())).collect()
}
