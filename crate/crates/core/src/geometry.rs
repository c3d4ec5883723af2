//! Cylinder geometry for the configuration problem.
//!
//! Lengths are in inches, angles in degrees. A cylinder is described by the
//! centre of its base, a yaw `theta` measured from +Z and a pitch `phi`
//! measured in the XY plane from +X. The cube spans `[0, SL]` on every axis.

use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn component(self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn midpoint(self, o: Vec3) -> Vec3 {
        (self + o) * 0.5
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// How the extent of a cylinder body along an axis is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ExtentMode {
    /// True bounding extent: the end caps contribute `r * sqrt(1 - u_k^2)`.
    #[default]
    Exact,
    /// Closed-form extents with absolute values on the trigonometric cap
    /// terms. The Z terms use `cos(theta)` for the upper side and
    /// `sin(theta)` for the lower side.
    ClosedForm,
}

impl ExtentMode {
    pub fn name(self) -> &'static str {
        match self {
            ExtentMode::Exact => "exact",
            ExtentMode::ClosedForm => "closed-form",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exact" => Some(ExtentMode::Exact),
            "closed-form" => Some(ExtentMode::ClosedForm),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderSpec {
    pub radius: f64,
    pub length: f64,
}

impl CylinderSpec {
    pub const fn new(radius: f64, length: f64) -> Self {
        Self { radius, length }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderPose {
    pub base: Vec3,
    /// Degrees in `[0, 180]`.
    pub theta: f64,
    /// Degrees in `[0, 360)`.
    pub phi: f64,
}

impl CylinderPose {
    pub const fn new(base: Vec3, theta: f64, phi: f64) -> Self {
        Self { base, theta, phi }
    }
}

/// Cylinder specifications: diameters 1.25, 1.25, 1.0, 1.0, 1.0, 0.75 and
/// lengths 5, 5, 4, 4, 4, 3.
pub const CYLINDER_SPECS: [CylinderSpec; 6] = [
    CylinderSpec::new(0.625, 5.0),
    CylinderSpec::new(0.625, 5.0),
    CylinderSpec::new(0.5, 4.0),
    CylinderSpec::new(0.5, 4.0),
    CylinderSpec::new(0.5, 4.0),
    CylinderSpec::new(0.375, 3.0),
];

/// Connective lines as zero-based (start, end) cylinder indices: from the axis
/// midpoint of `start` to the base centre of `end`.
pub const CONNECTIONS: [(usize, usize); 6] = [(0, 5), (5, 1), (1, 3), (3, 2), (2, 4), (4, 0)];

pub const DEFAULT_CLEARANCE: f64 = 0.5;
pub const DEFAULT_LINE_ALLOWANCE: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SceneConfig {
    pub side_length: f64,
    pub specs: [CylinderSpec; 6],
    pub connections: [(usize, usize); 6],
    /// Upper limit on d(2,4).
    pub line_limit_2_4: f64,
    /// Upper limit on d(4,3).
    pub line_limit_4_3: f64,
    pub clearance: f64,
}

impl SceneConfig {
    pub fn new(side_length: f64) -> Self {
        Self {
            side_length,
            specs: CYLINDER_SPECS,
            connections: CONNECTIONS,
            line_limit_2_4: 5.0 - DEFAULT_LINE_ALLOWANCE,
            line_limit_4_3: 3.0 - DEFAULT_LINE_ALLOWANCE,
            clearance: DEFAULT_CLEARANCE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub volume: f64,
}

/// Unit axis direction `(sin t cos p, sin t sin p, cos t)` for degrees `t`, `p`.
pub fn axis_direction(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.to_radians().sin_cos();
    let (sp, cp) = phi.to_radians().sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

pub fn cylinder_end(pose: &CylinderPose, spec: &CylinderSpec) -> Vec3 {
    pose.base + axis_direction(pose.theta, pose.phi) * spec.length
}

pub fn axis_midpoint(pose: &CylinderPose, spec: &CylinderSpec) -> Vec3 {
    pose.base.midpoint(cylinder_end(pose, spec))
}

/// `(min, max)` reached by the cylinder body along `axis`.
pub fn axis_extent(pose: &CylinderPose, spec: &CylinderSpec, axis: Axis, mode: ExtentMode) -> (f64, f64) {
    let u = axis_direction(pose.theta, pose.phi);
    let base = pose.base.component(axis);
    let end = base + spec.length * u.component(axis);
    let (lo, hi) = if base <= end { (base, end) } else { (end, base) };
    let r = spec.radius;
    match mode {
        ExtentMode::Exact => {
            let uk = u.component(axis);
            let cap = r * (1.0 - uk * uk).max(0.0).sqrt();
            (lo - cap, hi + cap)
        }
        ExtentMode::ClosedForm => {
            let (st, ct) = pose.theta.to_radians().sin_cos();
            let (sp, cp) = pose.phi.to_radians().sin_cos();
            let (cap_lo, cap_hi) = match axis {
                Axis::X => ((r * st * cp).abs(), (r * st * cp).abs()),
                Axis::Y => ((r * st * sp).abs(), (r * st * sp).abs()),
                Axis::Z => ((r * st).abs(), (r * ct).abs()),
            };
            (lo - cap_lo, hi + cap_hi)
        }
    }
}

/// Per-axis `(min, max)` over all cylinders, in X, Y, Z order.
pub fn scene_extents(poses: &[CylinderPose; 6], scene: &SceneConfig, mode: ExtentMode) -> [(f64, f64); 3] {
    Axis::ALL.map(|axis| {
        poses.iter().zip(&scene.specs).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (p, s)| {
            let (a, b) = axis_extent(p, s, axis, mode);
            (lo.min(a), hi.max(b))
        })
    })
}

pub fn envelope(poses: &[CylinderPose; 6], scene: &SceneConfig, mode: ExtentMode) -> Envelope {
    let [ex, ey, ez] = scene_extents(poses, scene, mode).map(|(lo, hi)| hi - lo);
    Envelope { x: ex, y: ey, z: ez, volume: ex * ey * ez }
}

/// Distance from the axis midpoint of cylinder `i` to the base centre of
/// cylinder `j` (zero-based indices).
pub fn window_distance(i: usize, j: usize, poses: &[CylinderPose; 6], specs: &[CylinderSpec; 6]) -> f64 {
    debug_assert_ne!(i, j);
    axis_midpoint(&poses[i], &specs[i]).distance(poses[j].base)
}

pub fn total_connective_length(poses: &[CylinderPose; 6], scene: &SceneConfig) -> f64 {
    scene.connections.iter().map(|&(i, j)| window_distance(i, j, poses, &scene.specs)).sum()
}

const PARALLEL_EPS: f64 = 1e-12;

/// Minimum distance between the closed segments `a0-a1` and `b0-b1`.
/// Either segment may be degenerate.
pub fn segment_segment_distance(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> f64 {
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let r = a0 - b0;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);

    let (s, t);
    if a <= PARALLEL_EPS && e <= PARALLEL_EPS {
        return a0.distance(b0);
    }
    if a <= PARALLEL_EPS {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= PARALLEL_EPS {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > PARALLEL_EPS * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    (a0 + d1 * s).distance(b0 + d2 * t)
}

/// Shortest distance between the centre axes of cylinders `i` and `j`.
pub fn axis_distance(i: usize, j: usize, poses: &[CylinderPose; 6], specs: &[CylinderSpec; 6]) -> f64 {
    segment_segment_distance(
        poses[i].base,
        cylinder_end(&poses[i], &specs[i]),
        poses[j].base,
        cylinder_end(&poses[j], &specs[j]),
    )
}

fn overshoot(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

/// Containment penalty: the six envelope overshoots beyond the cube faces.
pub fn penalty_bounds(poses: &[CylinderPose; 6], scene: &SceneConfig, mode: ExtentMode) -> f64 {
    let (cube_lo, cube_hi) = (0.0, scene.side_length);
    scene_extents(poses, scene, mode).iter().map(|&(lo, hi)| overshoot(hi - cube_hi) + overshoot(cube_lo - lo)).sum()
}

/// Penalty on the two length-limited connective lines, d(2,4) and d(4,3).
pub fn penalty_lines(poses: &[CylinderPose; 6], scene: &SceneConfig) -> f64 {
    let d24 = window_distance(1, 3, poses, &scene.specs);
    let d43 = window_distance(3, 2, poses, &scene.specs);
    overshoot(d24 - scene.line_limit_2_4) + overshoot(d43 - scene.line_limit_4_3)
}

/// Clearance penalty summed over ordered pairs, so each violating pair
/// counts twice.
pub fn penalty_clearance(poses: &[CylinderPose; 6], scene: &SceneConfig) -> f64 {
    let mut total = 0.0;
    for i in 0..6 {
        for j in i + 1..6 {
            let required = scene.specs[i].radius + scene.specs[j].radius + scene.clearance;
            let d = axis_distance(i, j, poses, &scene.specs);
            total += 2.0 * overshoot(required - d);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn close3(a: Vec3, b: Vec3, tol: f64) -> bool {
        close(a.x, b.x, tol) && close(a.y, b.y, tol) && close(a.z, b.z, tol)
    }

    fn pose(x: f64, y: f64, z: f64, theta: f64, phi: f64) -> CylinderPose {
        CylinderPose::new(Vec3::new(x, y, z), theta, phi)
    }

    #[test]
    fn axis_direction_cases() {
        assert!(close3(axis_direction(0.0, 123.0), Vec3::new(0.0, 0.0, 1.0), 1e-12));
        assert!(close3(axis_direction(90.0, 0.0), Vec3::new(1.0, 0.0, 0.0), 1e-12));
        assert!(close3(axis_direction(90.0, 180.0), Vec3::new(-1.0, 0.0, 0.0), 1e-12));
        for (t, p) in [(13.0, 250.0), (170.0, 5.0), (45.0, 359.0)] {
            assert!(close(axis_direction(t, p).norm(), 1.0, 1e-12));
        }
    }

    #[test]
    fn cylinder_end_cases() {
        let s = |l| CylinderSpec::new(0.5, l);
        assert!(close3(cylinder_end(&pose(0.0, 0.0, 0.0, 0.0, 0.0), &s(5.0)), Vec3::new(0.0, 0.0, 5.0), 1e-12));
        assert!(close3(cylinder_end(&pose(1.0, 1.0, 1.0, 90.0, 180.0), &s(4.0)), Vec3::new(-3.0, 1.0, 1.0), 1e-12));
        let end = cylinder_end(&pose(0.0, 0.0, 0.0, 60.0, 30.0), &s(2.0));
        assert!(close3(end, Vec3::new(1.5, 0.8660254037844386, 1.0), 1e-4));
    }

    #[test]
    fn axis_extent_axis_aligned() {
        let spec = CylinderSpec::new(0.625, 5.0);
        let p = pose(0.0, 0.0, 0.0, 0.0, 0.0);
        let (lo, hi) = axis_extent(&p, &spec, Axis::Z, ExtentMode::Exact);
        assert!(close(lo, 0.0, 1e-12) && close(hi, 5.0, 1e-12));
        let (lo, hi) = axis_extent(&p, &spec, Axis::X, ExtentMode::Exact);
        assert!(close(lo, -0.625, 1e-12) && close(hi, 0.625, 1e-12));
    }

    #[test]
    fn closed_form_extent_z_terms() {
        let spec = CylinderSpec::new(0.5, 4.0);
        let p = pose(0.0, 0.0, 0.0, 60.0, 30.0);
        let (lo, hi) = axis_extent(&p, &spec, Axis::Z, ExtentMode::ClosedForm);
        let (st, ct) = 60f64.to_radians().sin_cos();
        assert!(close(hi, 4.0 * ct + 0.5 * ct, 1e-12));
        assert!(close(lo, -0.5 * st, 1e-12));
    }

    #[test]
    fn envelope_cases() {
        let scene = SceneConfig { specs: [CylinderSpec::new(0.625, 5.0); 6], ..SceneConfig::new(10.0) };
        let poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        let env = envelope(&poses, &scene, ExtentMode::Exact);
        assert!(close(env.x, 1.25, 1e-12) && close(env.y, 1.25, 1e-12) && close(env.z, 5.0, 1e-12));
        assert!(close(env.volume, 7.8125, 1e-12));

        let scene = SceneConfig { specs: [CylinderSpec::new(1.0, 5.0); 6], ..SceneConfig::new(10.0) };
        let mut poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        poses[1] = pose(10.0, 0.0, 0.0, 0.0, 0.0);
        let env = envelope(&poses, &scene, ExtentMode::Exact);
        assert!(close(env.x, 12.0, 1e-12) && close(env.y, 2.0, 1e-12) && close(env.z, 5.0, 1e-12));
    }

    #[test]
    fn window_distance_cases() {
        let specs = [CylinderSpec::new(0.5, 4.0); 6];
        let mut poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        poses[1] = pose(0.0, 0.0, 2.0, 0.0, 0.0);
        assert!(close(window_distance(0, 1, &poses, &specs), 0.0, 1e-12));
        poses[1] = pose(3.0, 4.0, 2.0, 0.0, 0.0);
        assert!(close(window_distance(0, 1, &poses, &specs), 5.0, 1e-12));
    }

    #[test]
    fn connective_length_cases() {
        // Chain order of the connections: 1 -> 6 -> 2 -> 4 -> 3 -> 5 -> 1.
        let chain = [0usize, 5, 1, 3, 2, 4];
        let scene = SceneConfig { specs: [CylinderSpec::new(0.5, 2.0); 6], ..SceneConfig::new(10.0) };

        // Horizontal axes on a closed hexagon: every midpoint is the next base.
        let mut poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        let mut at = Vec3::new(0.0, 0.0, 0.0);
        for (m, &k) in chain.iter().enumerate() {
            let phi = 60.0 * m as f64;
            poses[k] = pose(at.x, at.y, at.z, 90.0, phi);
            at = at + axis_direction(90.0, phi);
        }
        assert!(close(total_connective_length(&poses, &scene), 0.0, 1e-12));

        // Vertical axes on a hexagon of side sqrt(24): each term is sqrt(24 + 1) = 5.
        let side = 24f64.sqrt();
        for (m, &k) in chain.iter().enumerate() {
            let a = (60.0 * m as f64).to_radians();
            poses[k] = pose(side * a.cos(), side * a.sin(), 0.0, 0.0, 0.0);
        }
        for &(i, j) in &scene.connections {
            assert!(close(window_distance(i, j, &poses, &scene.specs), 5.0, 1e-12));
        }
        assert!(close(total_connective_length(&poses, &scene), 30.0, 1e-12));
    }

    #[test]
    fn segment_distance_cases() {
        let v = Vec3::new;
        assert!(close(
            segment_segment_distance(v(0., 0., 0.), v(1., 0., 0.), v(0., 0., 1.), v(1., 0., 1.)),
            1.0,
            1e-12
        ));
        assert!(close(
            segment_segment_distance(v(-1., 0., 0.), v(1., 0., 0.), v(0., -1., 0.), v(0., 1., 0.)),
            0.0,
            1e-12
        ));
        // Collinear, disjoint.
        assert!(close(
            segment_segment_distance(v(0., 0., 0.), v(1., 0., 0.), v(2., 0., 0.), v(3., 0., 0.)),
            1.0,
            1e-12
        ));
        // Point against segment, point against point.
        assert!(close(
            segment_segment_distance(v(0., 2., 0.), v(0., 2., 0.), v(-1., 0., 0.), v(1., 0., 0.)),
            2.0,
            1e-12
        ));
        assert!(close(
            segment_segment_distance(v(0., 0., 0.), v(0., 0., 0.), v(3., 4., 0.), v(3., 4., 0.)),
            5.0,
            1e-12
        ));
        // Skew lines whose closest points are interior.
        assert!(close(
            segment_segment_distance(v(-1., 0., 0.), v(1., 0., 0.), v(0., -1., 2.), v(0., 1., 2.)),
            2.0,
            1e-12
        ));
    }

    #[test]
    fn penalty_lines_cases() {
        // Cylinder 2 (index 1) midpoint at origin; cylinder 4 (index 3) base at
        // distance d24; cylinder 4's midpoint to cylinder 3 (index 2) base = d43.
        let scene = SceneConfig { specs: [CylinderSpec::new(0.5, 2.0); 6], ..SceneConfig::new(10.0) };
        let layout = |d24: f64, d43: f64| {
            let mut poses = [pose(50.0, 50.0, 50.0, 0.0, 0.0); 6];
            poses[1] = pose(0.0, 0.0, -1.0, 0.0, 0.0);
            poses[3] = pose(d24, 0.0, 0.0, 0.0, 0.0);
            poses[2] = pose(d24, d43, 1.0, 0.0, 0.0);
            poses
        };
        assert!(close(penalty_lines(&layout(3.5, 1.5), &scene), 0.0, 1e-12));
        assert!(close(penalty_lines(&layout(4.5, 1.0), &scene), 0.5, 1e-12));
        assert!(close(penalty_lines(&layout(6.0, 3.0), &scene), 3.0, 1e-12));
    }

    #[test]
    fn penalty_bounds_single_overshoot() {
        let scene = SceneConfig::new(10.0);
        let mut poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        for (k, p) in poses.iter_mut().enumerate() {
            *p = pose(1.0 + k as f64, 2.0, 1.0, 0.0, 0.0);
        }
        assert!(close(penalty_bounds(&poses, &scene, ExtentMode::Exact), 0.0, 1e-12));
        // Cylinder 3 (r = 0.5) with x_max = SL + 0.3.
        poses[2] = pose(9.8, 2.0, 1.0, 0.0, 0.0);
        assert!(close(penalty_bounds(&poses, &scene, ExtentMode::Exact), 0.3, 1e-12));
    }

    #[test]
    fn penalty_clearance_double_counts() {
        let scene = SceneConfig::new(100.0);
        let mut poses = [pose(0.0, 0.0, 0.0, 0.0, 0.0); 6];
        for (k, p) in poses.iter_mut().enumerate() {
            *p = pose(10.0 * k as f64, 0.0, 0.0, 0.0, 0.0);
        }
        assert!(close(penalty_clearance(&poses, &scene), 0.0, 1e-12));
        // Cylinders 3 and 4 (r = 0.5 each): D = 0.5 + 0.5 + 0.2.
        poses[3] = pose(20.0 + 1.2, 0.0, 0.0, 0.0, 0.0);
        assert!(close(penalty_clearance(&poses, &scene), 0.6, 1e-12));
    }
}
