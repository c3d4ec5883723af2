//! Archive-based multi-objective simulated annealing.
//!
//! [`Algorithm::MosarV1`] and [`Algorithm::MosarV2`] re-seed the current
//! solution from the archive only when the current solution lies outside the
//! archive and dominates a candidate that the archive also dominates. They
//! differ in how the re-seed member is chosen. [`Algorithm::Amosa`] is the
//! baseline that re-seeds when the candidate dominates the current solution
//! while being dominated by the archive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pareto::{self, delta_dom, Archive, ArchiveRelation, Dominance, ObjectiveRanges, ObjectiveVector};
use crate::problems::{random_decision, Problem, ProblemDescriptor};

/// Number of random decisions used to seed the archive.
pub const INITIAL_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub t_max: f64,
    pub t_min: f64,
    pub alpha: f64,
    pub iters_per_temp: usize,
}

impl Schedule {
    pub fn new(t_max: f64, t_min: f64, alpha: f64, iters_per_temp: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("need T_max > T_min > 0, got {t_max} and {t_min}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("cooling rate must be in (0, 1), got {alpha}")));
        }
        if iters_per_temp == 0 {
            return Err(Error::InvalidArgument("iterations per temperature must be positive".into()));
        }
        Ok(Self { t_max, t_min, alpha, iters_per_temp })
    }

    /// 100 -> 1e-4 at 0.8, 81 iterations per level.
    pub const SRN: Schedule = Schedule { t_max: 100.0, t_min: 1e-4, alpha: 0.8, iters_per_temp: 81 };
    /// 100 -> 1e-4 at 0.8, 162 iterations per level.
    pub const TNK: Schedule = Schedule { t_max: 100.0, t_min: 1e-4, alpha: 0.8, iters_per_temp: 162 };
    /// 1000 -> 1e-2 at 0.95, 200 iterations per level.
    pub const CONFIG: Schedule = Schedule { t_max: 1000.0, t_min: 1e-2, alpha: 0.95, iters_per_temp: 200 };

    /// Temperature levels visited, in order.
    pub fn temperatures(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::successors(Some(self.t_max), move |t| Some(t * self.alpha)).take_while(move |t| *t > self.t_min)
    }

    pub fn levels(&self) -> usize {
        self.temperatures().count()
    }

    pub fn main_loop_evaluations(&self) -> u64 {
        (self.levels() * self.iters_per_temp) as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoveConfig {
    /// Laplace scale for positional variables of the configuration problem.
    pub translation_scale: f64,
    /// Laplace scale, in degrees, for angular variables.
    pub rotation_scale: f64,
    pub translation_probability: f64,
    /// Laplace scale for benchmark variables, as a fraction of the range.
    pub benchmark_scale_fraction: f64,
}

impl Default for MoveConfig {
    fn default() -> Self {
        Self {
            translation_scale: 0.5,
            rotation_scale: 30.0,
            translation_probability: 0.5,
            benchmark_scale_fraction: 0.05,
        }
    }
}

impl MoveConfig {
    pub fn validate(&self) -> Result<()> {
        let scales = [self.translation_scale, self.rotation_scale, self.benchmark_scale_fraction];
        if scales.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidArgument("move scales must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.translation_probability) {
            return Err(Error::InvalidArgument("translation probability must be in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Amosa,
    MosarV1,
    MosarV2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Amosa, Algorithm::MosarV1, Algorithm::MosarV2];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Amosa => "amosa",
            Algorithm::MosarV1 => "mosar1",
            Algorithm::MosarV2 => "mosar2",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "amosa" => Ok(Algorithm::Amosa),
            "mosar1" => Ok(Algorithm::MosarV1),
            "mosar2" => Ok(Algorithm::MosarV2),
            other => Err(Error::UnknownAlgorithm(other.into())),
        }
    }

    /// Short label used in comparison tables.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Amosa => "AM",
            Algorithm::MosarV1 => "MR1",
            Algorithm::MosarV2 => "MR2",
        }
    }
}

/// How MOSA/R picks the archive member to re-seed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReseedRule {
    /// Minimum amount of domination towards the candidate over the whole archive.
    MinDeltaDom,
    /// Minimum amount of domination within the first non-dominated front of
    /// the archive ranked on the constraint-violation objectives only.
    ConstraintFrontMinDeltaDom,
}

/// Denominator of the averaged amount of domination when the current solution
/// joins the k dominating archive members in the out-of-archive re-seed case.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AverageDenominator {
    /// Average over all k + 1 terms.
    #[default]
    IncludeCurrent,
    /// Divide the k + 1 terms by k.
    Literal,
}

/// Draws from Laplace(`mu`, `scale`) by inverting the CDF.
pub fn sample_laplace<R: Rng + ?Sized>(mu: f64, scale: f64, rng: &mut R) -> f64 {
    debug_assert!(scale > 0.0);
    loop {
        let u: f64 = rng.gen::<f64>() - 0.5;
        if u > -0.5 {
            return mu - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln();
        }
    }
}

/// Proposes a neighbour of `decision`.
///
/// Grouped problems move one group (cylinder) per call: either all of its
/// positional variables or all of its angular variables. Groups without a
/// variable of the chosen kind are redrawn. Ungrouped problems move one
/// variable with a scale proportional to its range.
pub fn perturb<R: Rng + ?Sized>(
    decision: &[f64],
    descriptor: &ProblemDescriptor,
    moves: &MoveConfig,
    rng: &mut R,
) -> Vec<f64> {
    let mut next = decision.to_vec();
    match &descriptor.move_groups {
        None => {
            let i = rng.gen_range(0..decision.len());
            let b = &descriptor.bounds[i];
            next[i] = b.apply(sample_laplace(decision[i], b.range() * moves.benchmark_scale_fraction, rng));
        }
        Some(groups) => {
            let mut translate = rng.gen::<f64>() < moves.translation_probability;
            let has =
                |g: &crate::problems::MoveGroup, t: bool| !(if t { &g.translation } else { &g.rotation }).is_empty();
            if !groups.iter().any(|g| has(g, translate)) {
                translate = !translate;
            }
            let group = loop {
                let g = &groups[rng.gen_range(0..groups.len())];
                if has(g, translate) {
                    break g;
                }
            };
            let (vars, scale) = if translate {
                (&group.translation, moves.translation_scale)
            } else {
                (&group.rotation, moves.rotation_scale)
            };
            for &i in vars {
                next[i] = descriptor.bounds[i].apply(sample_laplace(decision[i], scale, rng));
            }
        }
    }
    next
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub decision: Vec<f64>,
    pub objectives: ObjectiveVector,
}

impl Candidate {
    pub fn new(decision: Vec<f64>, objectives: ObjectiveVector) -> Self {
        Self { decision, objectives }
    }

    pub fn evaluate(problem: &dyn Problem, decision: Vec<f64>) -> Self {
        let objectives = problem.evaluate(&decision);
        Self { decision, objectives }
    }
}

/// Which branch of the acceptance rules a step took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepCase {
    /// Candidate dominates some archive members.
    DominatesArchive,
    /// Dominated by the archive and by an archived current solution.
    DominatedByArchivedCurrent,
    /// Dominated by the archive and by a current solution outside it.
    DominatedByOutsideCurrent,
    /// Dominated by the archive, dominates the current solution.
    DominatesCurrent,
    /// Dominated by the archive, trades off against the current solution.
    TradesOffCurrent,
    /// Non-dominated with respect to the whole archive.
    NonDominatedWithArchive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// Current solution is now the candidate.
    AcceptedNew,
    /// Current solution is now an archive member.
    Reseeded,
    Unchanged,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub case: StepCase,
    pub transition: Transition,
}

#[derive(Clone, Debug)]
pub struct AnnealState {
    pub current: Candidate,
    pub current_in_archive: bool,
    pub archive: Archive,
    pub temperature: f64,
    pub rng: ChaCha8Rng,
    pub eval_count: u64,
}

impl AnnealState {
    pub fn new(archive: Archive, current: Candidate, temperature: f64, rng: ChaCha8Rng) -> Self {
        let current_in_archive = archive.contains_objectives(current.objectives.values());
        Self { current, current_in_archive, archive, temperature, rng, eval_count: 0 }
    }

    fn ranges_with(&self, new: &[f64]) -> ObjectiveRanges {
        let mut ranges = ObjectiveRanges::from_points([new]).expect("one point");
        ranges.include(self.current.objectives.values());
        for e in self.archive.iter() {
            ranges.include(e.objectives.values());
        }
        ranges
    }

    fn set_current_from_archive(&mut self, position: usize) {
        let e = &self.archive.entries()[position];
        self.current = Candidate::new(e.decision.clone(), e.objectives.clone());
        self.current_in_archive = true;
    }

    fn insert_as_current(&mut self, new: Candidate) {
        self.archive
            .insert(new.decision.clone(), new.objectives.clone())
            .expect("candidate classified as non-dominated");
        self.current = new;
        self.current_in_archive = true;
    }

    fn accept_outside(&mut self, new: Candidate) {
        self.current = new;
        self.current_in_archive = false;
    }

    fn chance(&mut self, p: f64) -> bool {
        debug_assert!((0.0..=1.0).contains(&p), "probability {p}");
        self.rng.gen::<f64>() < p
    }
}

/// `1 / (1 + exp(dom / T))`: chance of accepting a dominated candidate.
pub fn acceptance_probability(avg_delta_dom: f64, temperature: f64) -> f64 {
    1.0 / (1.0 + (avg_delta_dom / temperature).exp())
}

/// `1 / (1 + exp(-dom))`: chance of re-seeding from the selected member.
pub fn reseed_probability(delta_dom_select: f64) -> f64 {
    1.0 / (1.0 + (-delta_dom_select).exp())
}

fn sum_delta(archive: &Archive, members: &[usize], new: &[f64], ranges: &ObjectiveRanges) -> f64 {
    members.iter().map(|&p| delta_dom(archive.entries()[p].objectives.values(), new, ranges)).sum()
}

/// Position of the candidate-set member with minimum amount of domination
/// towards `new`; ties go to the lowest entry id.
fn argmin_delta(
    archive: &Archive,
    members: impl Iterator<Item = usize>,
    new: &[f64],
    ranges: &ObjectiveRanges,
) -> Option<usize> {
    let entries = archive.entries();
    members
        .map(|p| (delta_dom(entries[p].objectives.values(), new, ranges), entries[p].id, p))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, _, p)| p)
}

/// Chooses the archive member used for a MOSA/R re-seed. Returns its position.
pub fn select_reseed(
    archive: &Archive,
    new: &[f64],
    rule: ReseedRule,
    constraint_indices: &[usize],
    ranges: &ObjectiveRanges,
) -> Result<usize> {
    if archive.is_empty() {
        return Err(Error::Empty("archive"));
    }
    let position = match rule {
        ReseedRule::ConstraintFrontMinDeltaDom if !constraint_indices.is_empty() => {
            let points: Vec<&[f64]> = archive.iter().map(|e| e.objectives.values()).collect();
            let front = pareto::first_front(&points, constraint_indices)?;
            argmin_delta(archive, front.into_iter(), new, ranges)
        }
        _ => argmin_delta(archive, 0..archive.len(), new, ranges),
    };
    Ok(position.expect("non-empty candidate set"))
}

/// One MOSA/R acceptance step for an evaluated candidate.
pub fn mosar_step(
    state: &mut AnnealState,
    new: Candidate,
    rule: ReseedRule,
    denominator: AverageDenominator,
) -> StepOutcome {
    step_impl(state, new, Some((rule, denominator)))
}

/// One AMOSA acceptance step for an evaluated candidate.
pub fn amosa_step(state: &mut AnnealState, new: Candidate) -> StepOutcome {
    step_impl(state, new, None)
}

pub fn step(
    state: &mut AnnealState,
    new: Candidate,
    algorithm: Algorithm,
    denominator: AverageDenominator,
) -> StepOutcome {
    match algorithm {
        Algorithm::Amosa => amosa_step(state, new),
        Algorithm::MosarV1 => mosar_step(state, new, ReseedRule::MinDeltaDom, denominator),
        Algorithm::MosarV2 => mosar_step(state, new, ReseedRule::ConstraintFrontMinDeltaDom, denominator),
    }
}

fn step_impl(state: &mut AnnealState, new: Candidate, mosar: Option<(ReseedRule, AverageDenominator)>) -> StepOutcome {
    let new_obj = new.objectives.values().to_vec();
    let outcome = match state.archive.classify(&new_obj) {
        ArchiveRelation::Dominates(_) => {
            state.insert_as_current(new);
            StepOutcome { case: StepCase::DominatesArchive, transition: Transition::AcceptedNew }
        }
        ArchiveRelation::MutuallyNonDominated => {
            state.insert_as_current(new);
            StepOutcome { case: StepCase::NonDominatedWithArchive, transition: Transition::AcceptedNew }
        }
        ArchiveRelation::DominatedBy(dominators) => {
            let ranges = state.ranges_with(&new_obj);
            let k = dominators.len() as f64;
            let sum = sum_delta(&state.archive, &dominators, &new_obj, &ranges);
            let current_vs_new = pareto::compare(state.current.objectives.values(), &new_obj);
            match current_vs_new {
                Dominance::ADominatesB if state.current_in_archive || mosar.is_none() => {
                    let p = acceptance_probability(sum / k, state.temperature);
                    let transition = if state.chance(p) {
                        state.accept_outside(new);
                        Transition::AcceptedNew
                    } else {
                        Transition::Unchanged
                    };
                    StepOutcome { case: StepCase::DominatedByArchivedCurrent, transition }
                }
                Dominance::ADominatesB => {
                    let (rule, denominator) = mosar.expect("AMOSA handled above");
                    let constraint_indices: Vec<usize> = new.objectives.constraint_indices().collect();
                    let selected = select_reseed(&state.archive, &new_obj, rule, &constraint_indices, &ranges)
                        .expect("archive is never empty after initialisation");
                    let d_select = delta_dom(state.archive.entries()[selected].objectives.values(), &new_obj, &ranges);
                    let d_current = delta_dom(state.current.objectives.values(), &new_obj, &ranges);
                    let divisor = match denominator {
                        AverageDenominator::IncludeCurrent => k + 1.0,
                        AverageDenominator::Literal => k,
                    };
                    let transition = if state.chance(reseed_probability(d_select)) {
                        state.set_current_from_archive(selected);
                        Transition::Reseeded
                    } else if state.chance(acceptance_probability((sum + d_current) / divisor, state.temperature)) {
                        state.accept_outside(new);
                        Transition::AcceptedNew
                    } else {
                        Transition::Unchanged
                    };
                    StepOutcome { case: StepCase::DominatedByOutsideCurrent, transition }
                }
                Dominance::BDominatesA => {
                    let transition = if mosar.is_some() {
                        state.accept_outside(new);
                        Transition::AcceptedNew
                    } else {
                        let best = argmin_delta(&state.archive, dominators.iter().copied(), &new_obj, &ranges)
                            .expect("k >= 1");
                        let d_min = delta_dom(state.archive.entries()[best].objectives.values(), &new_obj, &ranges);
                        if state.chance(reseed_probability(d_min)) {
                            state.set_current_from_archive(best);
                            Transition::Reseeded
                        } else {
                            state.accept_outside(new);
                            Transition::AcceptedNew
                        }
                    };
                    StepOutcome { case: StepCase::DominatesCurrent, transition }
                }
                Dominance::NonDominated | Dominance::Equal => {
                    let p = acceptance_probability(sum / k, state.temperature);
                    let transition = if state.chance(p) {
                        state.accept_outside(new);
                        Transition::AcceptedNew
                    } else {
                        Transition::Unchanged
                    };
                    StepOutcome { case: StepCase::TradesOffCurrent, transition }
                }
            }
        }
    };
    debug_assert_eq!(
        state.current_in_archive,
        state.archive.contains_objectives(state.current.objectives.values()),
        "current-in-archive flag out of sync"
    );
    outcome
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub schedule: Schedule,
    pub moves: MoveConfig,
    pub seed: u64,
    pub denominator: AverageDenominator,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, schedule: Schedule, seed: u64) -> Self {
        Self { algorithm, schedule, moves: MoveConfig::default(), seed, denominator: AverageDenominator::default() }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub archive: Archive,
    pub init_evaluations: u64,
    pub main_evaluations: u64,
    /// Feasible archive members at the end of each temperature level.
    pub feasible_trace: Vec<usize>,
}

impl RunOutcome {
    pub fn evaluations(&self) -> u64 {
        self.init_evaluations + self.main_evaluations
    }

    pub fn feasible_count(&self) -> usize {
        self.archive.feasible().count()
    }
}

/// Seeds an archive from uniform random decisions, keeping only the
/// mutually non-dominating ones.
pub fn initial_archive<R: Rng + ?Sized>(problem: &dyn Problem, samples: usize, rng: &mut R) -> Archive {
    let mut archive = Archive::new();
    for _ in 0..samples {
        let c = Candidate::evaluate(problem, random_decision(problem.descriptor(), rng));
        if !matches!(archive.classify(c.objectives.values()), ArchiveRelation::DominatedBy(_)) {
            archive.insert(c.decision, c.objectives).expect("classified as non-dominated");
        }
    }
    archive
}

/// One complete annealing run. Deterministic given `config.seed`.
pub fn run(problem: &dyn Problem, config: &RunConfig) -> RunOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let archive = initial_archive(problem, INITIAL_SAMPLES, &mut rng);
    let start = rng.gen_range(0..archive.len());
    let first = &archive.entries()[start];
    let current = Candidate::new(first.decision.clone(), first.objectives.clone());
    let mut state = AnnealState::new(archive, current, config.schedule.t_max, rng);
    state.eval_count = INITIAL_SAMPLES as u64;

    let descriptor = problem.descriptor();
    let mut trace = Vec::with_capacity(config.schedule.levels());
    let mut main_evaluations = 0;
    for t in config.schedule.temperatures() {
        state.temperature = t;
        for _ in 0..config.schedule.iters_per_temp {
            let decision = perturb(&state.current.decision, descriptor, &config.moves, &mut state.rng);
            let candidate = Candidate::evaluate(problem, decision);
            state.eval_count += 1;
            main_evaluations += 1;
            step(&mut state, candidate, config.algorithm, config.denominator);
        }
        trace.push(state.archive.feasible().count());
    }

    RunOutcome {
        archive: state.archive,
        init_evaluations: INITIAL_SAMPLES as u64,
        main_evaluations,
        feasible_trace: trace,
    }
}
