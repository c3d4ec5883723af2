//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mosar::geometry::{axis_direction, CylinderPose, CylinderSpec, Vec3};
use mosar::pareto::{compare, Dominance};
use rand::Rng;

/// Fronts by repeated extraction of the non-dominated remainder.
pub fn sort_oracle(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| compare(&points[j], &points[i]) == Dominance::ADominatesB))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Minimum distance between two segments by nested ternary search over the
/// two segment parameters. The distance is jointly convex in them, so its
/// minimum over `t` is convex in `s`.
pub fn segment_distance_oracle(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> f64 {
    let at = |p: Vec3, q: Vec3, s: f64| p + (q - p) * s;
    let ternary = |f: &dyn Fn(f64) -> f64| {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..100 {
            let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if f(m1) <= f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        f((lo + hi) / 2.0).min(f(0.0)).min(f(1.0))
    };
    let inner = |s: f64| {
        let pa = at(a0, a1, s);
        ternary(&|t| pa.distance(at(b0, b1, t)))
    };
    ternary(&inner)
}

fn basis(u: Vec3) -> (Vec3, Vec3) {
    let helper = if u.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let v = helper - u * helper.dot(u);
    let v = v * (1.0 / v.norm());
    let w = Vec3::new(u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x);
    (v, w)
}

/// Random point on the closed cylinder surface: side, cap discs or cap rims
/// with equal probability.
pub fn surface_point<R: Rng>(pose: &CylinderPose, spec: &CylinderSpec, rng: &mut R) -> Vec3 {
    let u = axis_direction(pose.theta, pose.phi);
    let (v, w) = basis(u);
    let a = rng.gen::<f64>() * std::f64::consts::TAU;
    let ring = v * a.cos() + w * a.sin();
    let cap = if rng.gen::<bool>() { spec.length } else { 0.0 };
    match rng.gen_range(0..3) {
        0 => pose.base + u * (rng.gen::<f64>() * spec.length) + ring * spec.radius,
        1 => pose.base + u * cap + ring * (spec.radius * rng.gen::<f64>().sqrt()),
        _ => pose.base + u * cap + ring * spec.radius,
    }
}

/// Axis-aligned bounds of `samples` surface points per cylinder.
pub fn sampled_bounds<R: Rng>(
    poses: &[CylinderPose],
    specs: &[CylinderSpec],
    samples: usize,
    rng: &mut R,
) -> [(f64, f64); 3] {
    let mut b = [(f64::INFINITY, f64::NEG_INFINITY); 3];
    for (pose, spec) in poses.iter().zip(specs) {
        for _ in 0..samples {
            let p = surface_point(pose, spec, rng);
            for (k, c) in [p.x, p.y, p.z].into_iter().enumerate() {
                b[k].0 = b[k].0.min(c);
                b[k].1 = b[k].1.max(c);
            }
        }
    }
    b
}

/// Which acceptance branch a MOSA/R step must take, from the dominance
/// definitions alone. Returns every branch whose predicate holds.
pub fn mosar_case_oracle(
    archive: &[Vec<f64>],
    current: &[f64],
    current_in_archive: bool,
    new: &[f64],
) -> Vec<&'static str> {
    let dominates = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y);
    let new_dominates_some = archive.iter().any(|a| dominates(new, a));
    let some_dominates_new = archive.iter().any(|a| dominates(a, new));
    let cur_dom = dominates(current, new);
    let new_dom = dominates(new, current);
    let mut cases = Vec::new();
    if new_dominates_some {
        cases.push("1");
    }
    if some_dominates_new && cur_dom && current_in_archive {
        cases.push("2a-1");
    }
    if some_dominates_new && cur_dom && !current_in_archive {
        cases.push("2a-2");
    }
    if some_dominates_new && new_dom {
        cases.push("2b");
    }
    if some_dominates_new && !cur_dom && !new_dom {
        cases.push("2c");
    }
    if !new_dominates_some && !some_dominates_new {
        cases.push("3");
    }
    cases
}

/// Quantile `q` of a sorted sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, f) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - f) + sorted[i + 1] * f
    } else {
        sorted[i]
    }
}

/// Quantile function of Laplace(0, l).
pub fn laplace_quantile(q: f64, l: f64) -> f64 {
    if q < 0.5 {
        l * (2.0 * q).ln()
    } else {
        -l * (2.0 - 2.0 * q).ln()
    }
}
