//! Problem definitions mapped onto combined objective vectors.
//!
//! Every problem returns its true objectives followed by one non-negative
//! violation entry per constraint group, so the annealer handles constraints
//! with plain dominance.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{self, CylinderPose, ExtentMode, SceneConfig, Vec3};
use crate::pareto::ObjectiveVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPolicy {
    Clamp,
    /// Periodic, e.g. an azimuth angle.
    Wrap,
    /// Mirror at both ends, e.g. a polar angle.
    Reflect,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariableBound {
    pub lower: f64,
    pub upper: f64,
    pub policy: BoundaryPolicy,
}

impl VariableBound {
    pub const fn new(lower: f64, upper: f64, policy: BoundaryPolicy) -> Self {
        Self { lower, upper, policy }
    }

    pub fn range(&self) -> f64 {
        self.upper - self.lower
    }

    /// Maps an unconstrained value back into the bound.
    pub fn apply(&self, v: f64) -> f64 {
        let span = self.range();
        match self.policy {
            BoundaryPolicy::Clamp => v.clamp(self.lower, self.upper),
            BoundaryPolicy::Wrap => {
                let w = (v - self.lower).rem_euclid(span);
                // rem_euclid can round up to exactly `span`.
                if w >= span {
                    self.lower
                } else {
                    self.lower + w
                }
            }
            BoundaryPolicy::Reflect => {
                let w = (v - self.lower).rem_euclid(2.0 * span);
                let folded = if w > span { 2.0 * span - w } else { w };
                (self.lower + folded).clamp(self.lower, self.upper)
            }
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        match self.policy {
            BoundaryPolicy::Wrap => v >= self.lower && v < self.upper,
            _ => v >= self.lower && v <= self.upper,
        }
    }
}

/// Variables moved together by the configuration problem's move routine:
/// one cylinder's free positional and angular variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveGroup {
    pub translation: Vec<usize>,
    pub rotation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemDescriptor {
    pub name: String,
    pub bounds: Vec<VariableBound>,
    pub objective_count: usize,
    /// Number of trailing objectives that are constraint violations.
    pub constraint_count: usize,
    /// The two objectives that define the front for quality indicators.
    pub metric_projection: [usize; 2],
    /// `None` for problems perturbed one variable at a time.
    pub move_groups: Option<Vec<MoveGroup>>,
}

impl ProblemDescriptor {
    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn constraint_indices(&self) -> Vec<usize> {
        (self.objective_count - self.constraint_count..self.objective_count).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.bounds.len() && x.iter().zip(&self.bounds).all(|(v, b)| b.contains(*v))
    }
}

pub trait Problem: Send + Sync {
    fn descriptor(&self) -> &ProblemDescriptor;

    /// Pure function of the decision vector.
    fn evaluate(&self, x: &[f64]) -> ObjectiveVector;
}

/// Uniform sample over the decision box.
pub fn random_decision<R: Rng + ?Sized>(descriptor: &ProblemDescriptor, rng: &mut R) -> Vec<f64> {
    descriptor
        .bounds
        .iter()
        .map(|b| match b.policy {
            BoundaryPolicy::Wrap => rng.gen_range(b.lower..b.upper),
            _ => rng.gen_range(b.lower..=b.upper),
        })
        .collect()
}

fn violation(v: f64) -> f64 {
    v.max(0.0)
}

fn combined(values: Vec<f64>, constraint_count: usize) -> ObjectiveVector {
    ObjectiveVector::new(values, constraint_count).expect("violation entries are clamped at zero")
}

pub fn evaluate_srn(x: [f64; 2]) -> ObjectiveVector {
    let [x1, x2] = x;
    let f1 = 2.0 + (x1 - 2.0).powi(2) + (x2 - 2.0).powi(2);
    let f2 = 9.0 * x1 - (x2 - 1.0).powi(2);
    let c1 = violation(x1 * x1 + x2 * x2 - 225.0);
    let c2 = violation(x1 - 3.0 * x2 + 10.0);
    combined(vec![f1, f2, c1, c2], 2)
}

pub fn evaluate_tnk(x: [f64; 2]) -> ObjectiveVector {
    let [x1, x2] = x;
    let c1 = violation(1.0 + 0.1 * (16.0 * x2.atan2(x1)).cos() - x1 * x1 - x2 * x2);
    let c2 = violation((x1 - 0.5).powi(2) + (x2 - 0.5).powi(2) - 0.5);
    combined(vec![x1, x2, c1, c2], 2)
}

#[derive(Clone, Debug)]
pub struct Srn {
    descriptor: ProblemDescriptor,
}

impl Default for Srn {
    fn default() -> Self {
        Self::new()
    }
}

impl Srn {
    pub const LOWER: f64 = -20.0;
    pub const UPPER: f64 = 20.0;

    pub fn new() -> Self {
        Self {
            descriptor: ProblemDescriptor {
                name: "srn".into(),
                bounds: vec![VariableBound::new(Self::LOWER, Self::UPPER, BoundaryPolicy::Clamp); 2],
                objective_count: 4,
                constraint_count: 2,
                metric_projection: [0, 1],
                move_groups: None,
            },
        }
    }
}

impl Problem for Srn {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.descriptor
    }

    fn evaluate(&self, x: &[f64]) -> ObjectiveVector {
        evaluate_srn([x[0], x[1]])
    }
}

/// TNK over the enlarged box `(0, 100)^2`.
#[derive(Clone, Debug)]
pub struct Tnk {
    descriptor: ProblemDescriptor,
}

impl Default for Tnk {
    fn default() -> Self {
        Self::new()
    }
}

impl Tnk {
    /// Open bounds are enforced by clamping this far inside the box.
    pub const OPEN_MARGIN: f64 = 1e-9;
    pub const UPPER: f64 = 100.0;

    pub fn new() -> Self {
        let b = VariableBound::new(Self::OPEN_MARGIN, Self::UPPER - Self::OPEN_MARGIN, BoundaryPolicy::Clamp);
        Self {
            descriptor: ProblemDescriptor {
                name: "tnk".into(),
                bounds: vec![b; 2],
                objective_count: 4,
                constraint_count: 2,
                metric_projection: [0, 1],
                move_groups: None,
            },
        }
    }
}

impl Problem for Tnk {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.descriptor
    }

    fn evaluate(&self, x: &[f64]) -> ObjectiveVector {
        evaluate_tnk([x[0], x[1]])
    }
}

/// Length of the configuration decision vector.
pub const CONFIG_DIMENSION: usize = 24;

/// Fixed orientation of cylinder 1: pointing down from the top face.
pub const CYLINDER_1_ANGLES: (f64, f64) = (180.0, 0.0);
/// Fixed orientation of cylinder 6: axis `(-1, 0, 0)` from the `x = SL` face.
pub const CYLINDER_6_ANGLES: (f64, f64) = (90.0, 180.0);

/// Free variables of the configuration problem, decoded from the flat layout
/// `[x1, y1, (x, y, z, theta, phi) for cylinders 2..=5, y6, z6]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfigDecision {
    pub cylinder1_xy: [f64; 2],
    pub middle: [[f64; 5]; 4],
    pub cylinder6_yz: [f64; 2],
}

impl ConfigDecision {
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() != CONFIG_DIMENSION {
            return Err(Error::DimensionMismatch { left: CONFIG_DIMENSION, right: x.len() });
        }
        let mut middle = [[0.0; 5]; 4];
        for (k, m) in middle.iter_mut().enumerate() {
            m.copy_from_slice(&x[2 + 5 * k..7 + 5 * k]);
        }
        Ok(Self { cylinder1_xy: [x[0], x[1]], middle, cylinder6_yz: [x[22], x[23]] })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(CONFIG_DIMENSION);
        v.extend_from_slice(&self.cylinder1_xy);
        for m in &self.middle {
            v.extend_from_slice(m);
        }
        v.extend_from_slice(&self.cylinder6_yz);
        v
    }

    /// The six poses, with the fixed contact variables filled in.
    pub fn poses(&self, side_length: f64) -> [CylinderPose; 6] {
        let [x1, y1] = self.cylinder1_xy;
        let [y6, z6] = self.cylinder6_yz;
        let mid = |k: usize| {
            let [x, y, z, t, p] = self.middle[k];
            CylinderPose::new(Vec3::new(x, y, z), t, p)
        };
        [
            CylinderPose::new(Vec3::new(x1, y1, side_length), CYLINDER_1_ANGLES.0, CYLINDER_1_ANGLES.1),
            mid(0),
            mid(1),
            mid(2),
            mid(3),
            CylinderPose::new(Vec3::new(side_length, y6, z6), CYLINDER_6_ANGLES.0, CYLINDER_6_ANGLES.1),
        ]
    }
}

/// Objectives: envelope volume, connective length, then the containment,
/// line-length and clearance penalties.
pub fn evaluate_config(d: &ConfigDecision, scene: &SceneConfig, mode: ExtentMode) -> ObjectiveVector {
    let poses = d.poses(scene.side_length);
    let volume = geometry::envelope(&poses, scene, mode).volume;
    let length = geometry::total_connective_length(&poses, scene);
    let p1 = geometry::penalty_bounds(&poses, scene, mode);
    let p2 = geometry::penalty_lines(&poses, scene);
    let p3 = geometry::penalty_clearance(&poses, scene);
    combined(vec![volume, length, p1, p2, p3], 3)
}

#[derive(Clone, Debug)]
pub struct ConfigProblem {
    scene: SceneConfig,
    mode: ExtentMode,
    descriptor: ProblemDescriptor,
}

impl ConfigProblem {
    pub fn new(side_length: f64, mode: ExtentMode) -> Result<Self> {
        if !(side_length > 0.0) || !side_length.is_finite() {
            return Err(Error::InvalidArgument(format!("side length must be positive, got {side_length}")));
        }
        let pos = VariableBound::new(0.0, side_length, BoundaryPolicy::Clamp);
        let theta = VariableBound::new(0.0, 180.0, BoundaryPolicy::Reflect);
        let phi = VariableBound::new(0.0, 360.0, BoundaryPolicy::Wrap);

        let mut bounds = vec![pos, pos];
        let mut groups = vec![MoveGroup { translation: vec![0, 1], rotation: vec![] }];
        for k in 0..4 {
            let at = 2 + 5 * k;
            bounds.extend([pos, pos, pos, theta, phi]);
            groups.push(MoveGroup { translation: vec![at, at + 1, at + 2], rotation: vec![at + 3, at + 4] });
        }
        bounds.extend([pos, pos]);
        groups.push(MoveGroup { translation: vec![22, 23], rotation: vec![] });

        Ok(Self {
            scene: SceneConfig::new(side_length),
            mode,
            descriptor: ProblemDescriptor {
                name: "config".into(),
                bounds,
                objective_count: 5,
                constraint_count: 3,
                metric_projection: [0, 1],
                move_groups: Some(groups),
            },
        })
    }

    pub fn scene(&self) -> &SceneConfig {
        &self.scene
    }

    pub fn mode(&self) -> ExtentMode {
        self.mode
    }
}

impl Problem for ConfigProblem {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.descriptor
    }

    fn evaluate(&self, x: &[f64]) -> ObjectiveVector {
        let d = ConfigDecision::from_slice(x).expect("decision length checked by descriptor");
        evaluate_config(&d, &self.scene, self.mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Srn,
    Tnk,
    Config,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Srn => "srn",
            ProblemKind::Tnk => "tnk",
            ProblemKind::Config => "config",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "srn" => Ok(ProblemKind::Srn),
            "tnk" => Ok(ProblemKind::Tnk),
            "config" => Ok(ProblemKind::Config),
            other => Err(Error::UnknownProblem(other.into())),
        }
    }
}

/// Builds a problem by kind; `side_length` is required for the configuration
/// problem and ignored otherwise.
pub fn build_problem(kind: ProblemKind, side_length: Option<f64>, mode: ExtentMode) -> Result<Box<dyn Problem>> {
    Ok(match kind {
        ProblemKind::Srn => Box::new(Srn::new()),
        ProblemKind::Tnk => Box::new(Tnk::new()),
        ProblemKind::Config => {
            let sl =
                side_length.ok_or_else(|| Error::InvalidArgument("the config problem needs a side length".into()))?;
            Box::new(ConfigProblem::new(sl, mode)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{axis_distance, axis_extent, window_distance, Axis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn srn_examples() {
        let v = evaluate_srn([-2.5, 2.5]);
        assert!(close(v.values()[0], 22.5) && close(v.values()[1], -24.75));
        assert!(v.is_feasible());
        let v = evaluate_srn([0.0, 0.0]);
        assert_eq!(v.values(), &[10.0, -1.0, 0.0, 10.0]);
        assert!(!v.is_feasible());
        let v = evaluate_srn([15.1, 0.0]);
        assert!(close(v.values()[2], 3.01));
    }

    #[test]
    fn tnk_examples() {
        let v = evaluate_tnk([1.0, 1.0]);
        assert_eq!(v.values(), &[1.0, 1.0, 0.0, 0.0]);
        assert!(v.is_feasible());
        let v = evaluate_tnk([0.1, 0.1]);
        assert!(close(v.values()[2], 1.08), "{}", v.values()[2]);
        assert_eq!(v.values()[3], 0.0);
        let v = evaluate_tnk([50.0, 50.0]);
        assert!(close(v.values()[3], 4900.0));
        assert!(!v.is_feasible());
    }

    #[test]
    fn tnk_handles_x1_at_zero() {
        let v = evaluate_tnk([0.0, 0.5]);
        assert!(v.values().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn boundary_policies() {
        let theta = VariableBound::new(0.0, 180.0, BoundaryPolicy::Reflect);
        assert!(close(theta.apply(-10.0), 10.0));
        assert!(close(theta.apply(190.0), 170.0));
        assert!(close(theta.apply(400.0), 40.0));
        assert!(close(theta.apply(-200.0), 160.0));
        let phi = VariableBound::new(0.0, 360.0, BoundaryPolicy::Wrap);
        assert!(close(phi.apply(370.0), 10.0));
        assert!(close(phi.apply(-30.0), 330.0));
        assert_eq!(phi.apply(-1e-18), 0.0);
        let pos = VariableBound::new(0.0, 9.0, BoundaryPolicy::Clamp);
        assert_eq!(pos.apply(9.5), 9.0);
        assert_eq!(pos.apply(-0.1), 0.0);
    }

    #[test]
    fn config_layout_has_24_variables_and_fixed_contacts() {
        let p = ConfigProblem::new(9.0, ExtentMode::Exact).unwrap();
        assert_eq!(p.descriptor().dimension(), 24);
        let x: Vec<f64> = (0..24).map(|i| i as f64 * 0.1).collect();
        let d = ConfigDecision::from_slice(&x).unwrap();
        assert_eq!(d.to_vec(), x);
        let poses = d.poses(9.0);
        assert_eq!(poses[0].base, Vec3::new(0.0, 0.1, 9.0));
        assert_eq!((poses[0].theta, poses[0].phi), (180.0, 0.0));
        assert_eq!(poses[5].base, Vec3::new(9.0, x[22], x[23]));
        let u = geometry::axis_direction(poses[5].theta, poses[5].phi);
        assert!((u - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!(ConfigDecision::from_slice(&x[..23]).is_err());
    }

    /// A hand-built feasible layout for SL = 9.4.
    pub(crate) fn feasible_layout() -> Vec<f64> {
        vec![
            // cylinder 1: top face, pointing down
            1.0, 1.0, // cylinder 2: vertical, r = 0.625
            1.0, 3.2, 1.0, 0.0, 0.0, // cylinder 3: horizontal along +X, base next to cylinder 4's midpoint
            4.8, 3.2, 3.0, 90.0, 0.0, // cylinder 4
            3.2, 3.2, 1.0, 0.0, 0.0, // cylinder 5
            6.5, 1.0, 1.0, 0.0, 0.0, // cylinder 6: from the x = SL face along -X
            2.0, 7.0,
        ]
    }

    #[test]
    fn feasible_layout_has_zero_penalties() {
        let p = ConfigProblem::new(9.4, ExtentMode::Exact).unwrap();
        let x = feasible_layout();
        let v = p.evaluate(&x);
        assert_eq!(v.violations(), &[0.0, 0.0, 0.0], "{:?}", v.values());
        assert!(v.is_feasible());

        // Cross-check the constraints directly.
        let poses = ConfigDecision::from_slice(&x).unwrap().poses(9.4);
        let specs = &p.scene().specs;
        for (pose, spec) in poses.iter().zip(specs) {
            for axis in Axis::ALL {
                let (lo, hi) = axis_extent(pose, spec, axis, ExtentMode::Exact);
                assert!(lo >= -1e-9 && hi <= 9.4 + 1e-9);
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert!(axis_distance(i, j, &poses, specs) >= specs[i].radius + specs[j].radius + 0.5);
                }
            }
        }
        assert!(window_distance(1, 3, &poses, specs) <= 4.0);
        assert!(window_distance(3, 2, &poses, specs) <= 2.0);
    }

    #[test]
    fn protruding_cylinder_gives_containment_penalty() {
        let p = ConfigProblem::new(9.4, ExtentMode::Exact).unwrap();
        let mut x = feasible_layout();
        // Cylinder 5 (r = 0.5) pushed so that x_max = SL + 0.3.
        x[17] = 9.4 + 0.3 - 0.5;
        let v = p.evaluate(&x);
        assert!(close(v.values()[2], 0.3));
    }

    #[test]
    fn random_decision_is_reproducible_and_in_bounds() {
        let p = ConfigProblem::new(8.5, ExtentMode::Exact).unwrap();
        let a = random_decision(p.descriptor(), &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_decision(p.descriptor(), &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            assert!(p.descriptor().contains(&random_decision(p.descriptor(), &mut rng)));
        }
    }

    #[test]
    fn build_by_name() {
        assert!(build_problem(ProblemKind::Config, None, ExtentMode::Exact).is_err());
        assert!(build_problem(ProblemKind::Config, Some(-1.0), ExtentMode::Exact).is_err());
        assert_eq!(build_problem(ProblemKind::Tnk, None, ExtentMode::Exact).unwrap().descriptor().name, "tnk");
        assert!(matches!(ProblemKind::from_name("zdt1"), Err(Error::UnknownProblem(_))));
    }
}
