//! Pareto dominance primitives and the non-dominated archive.
//!
//! All objectives are minimised. An [`ObjectiveVector`] carries the true
//! objectives followed by `constraint_count` constraint-violation entries, so
//! constrained problems are compared with plain dominance over the combined
//! vector.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A constraint-violation entry at or below this value counts as satisfied.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveVector {
    values: Vec<f64>,
    constraint_count: usize,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>, constraint_count: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("objective vector"));
        }
        if constraint_count > values.len() {
            return Err(Error::InvalidArgument(format!(
                "constraint_count {constraint_count} exceeds dimension {}",
                values.len()
            )));
        }
        let violations = &values[values.len() - constraint_count..];
        if violations.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidArgument("constraint-violation entries must be non-negative".into()));
        }
        Ok(Self { values, constraint_count })
    }

    pub fn unconstrained(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraint_count
    }

    /// The true objectives, without the trailing violation entries.
    pub fn objectives(&self) -> &[f64] {
        &self.values[..self.values.len() - self.constraint_count]
    }

    pub fn violations(&self) -> &[f64] {
        &self.values[self.values.len() - self.constraint_count..]
    }

    /// Indices of the violation entries within [`values`](Self::values).
    pub fn constraint_indices(&self) -> std::ops::Range<usize> {
        self.values.len() - self.constraint_count..self.values.len()
    }

    pub fn is_feasible(&self) -> bool {
        self.violations().iter().all(|v| *v <= FEASIBILITY_TOLERANCE)
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dominance {
    ADominatesB,
    BDominatesA,
    NonDominated,
    Equal,
}

impl Dominance {
    pub fn flip(self) -> Self {
        match self {
            Dominance::ADominatesB => Dominance::BDominatesA,
            Dominance::BDominatesA => Dominance::ADominatesB,
            other => other,
        }
    }
}

/// Compares two objective vectors under minimisation.
///
/// Panics when the dimensions differ; use [`try_compare`] for a checked
/// version.
pub fn compare(a: &[f64], b: &[f64]) -> Dominance {
    assert_eq!(a.len(), b.len(), "objective dimension mismatch");
    fold_relation(a.iter().zip(b))
}

pub fn try_compare(a: &[f64], b: &[f64]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    Ok(compare(a, b))
}

/// Dominance restricted to the objective indices in `subset`.
pub fn compare_on(a: &[f64], b: &[f64], subset: &[usize]) -> Dominance {
    fold_relation(subset.iter().map(|&i| (&a[i], &b[i])))
}

pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    compare(a, b) == Dominance::ADominatesB
}

fn fold_relation<'a>(pairs: impl Iterator<Item = (&'a f64, &'a f64)>) -> Dominance {
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in pairs {
        match x.partial_cmp(y) {
            Some(Ordering::Less) => a_better = true,
            Some(Ordering::Greater) => b_better = true,
            Some(Ordering::Equal) => {}
            None => return Dominance::NonDominated,
        }
        if a_better && b_better {
            return Dominance::NonDominated;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::ADominatesB,
        (false, true) => Dominance::BDominatesA,
        (false, false) => Dominance::Equal,
        (true, true) => Dominance::NonDominated,
    }
}

/// Per-objective `(min, max)` pairs used to normalise the amount of domination.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveRanges {
    bounds: Vec<(f64, f64)>,
}

impl ObjectiveRanges {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| !(lo <= hi)) {
            return Err(Error::InvalidArgument(format!("range min {lo} exceeds max {hi}")));
        }
        Ok(Self { bounds })
    }

    pub fn from_points<'a, I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(Error::Empty("objective ranges"))?;
        let mut ranges = Self { bounds: first.iter().map(|&v| (v, v)).collect() };
        for p in iter {
            if p.len() != ranges.bounds.len() {
                return Err(Error::DimensionMismatch { left: ranges.bounds.len(), right: p.len() });
            }
            ranges.include(p);
        }
        Ok(ranges)
    }

    pub fn include(&mut self, point: &[f64]) {
        for ((lo, hi), &v) in self.bounds.iter_mut().zip(point) {
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// Range width of objective `i`; a zero width falls back to 1.
    pub fn width(&self, i: usize) -> f64 {
        let (lo, hi) = self.bounds[i];
        let w = hi - lo;
        if w > 0.0 {
            w
        } else {
            1.0
        }
    }
}

pub fn objective_ranges(entries: &[ObjectiveVector]) -> Result<ObjectiveRanges> {
    ObjectiveRanges::from_points(entries.iter().map(|e| e.values()))
}

/// Amount of domination between `a` and `b`: the product of range-normalised
/// gaps over the objectives where they differ. Identical vectors give 0.
pub fn delta_dom(a: &[f64], b: &[f64], ranges: &ObjectiveRanges) -> f64 {
    assert_eq!(a.len(), b.len(), "objective dimension mismatch");
    assert_eq!(a.len(), ranges.len(), "range dimension mismatch");
    let mut product = 1.0;
    let mut any = false;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x != y {
            product *= (x - y).abs() / ranges.width(i);
            any = true;
        }
    }
    if any {
        product
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArchiveEntry {
    pub id: u64,
    pub decision: Vec<f64>,
    pub objectives: ObjectiveVector,
}

/// How a candidate relates to the archive. Member lists hold positions into
/// [`Archive::entries`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArchiveRelation {
    /// The candidate dominates these members.
    Dominates(Vec<usize>),
    /// The candidate is dominated by these members.
    DominatedBy(Vec<usize>),
    MutuallyNonDominated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inserted {
    Added {
        id: u64,
        removed: usize,
    },
    /// An entry with identical objectives was already present.
    Duplicate {
        id: u64,
    },
}

impl Inserted {
    pub fn id(self) -> u64 {
        match self {
            Inserted::Added { id, .. } | Inserted::Duplicate { id } => id,
        }
    }
}

/// Unbounded set of mutually non-dominating entries.
#[derive(Clone, Debug, Default)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    next_id: u64,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ArchiveEntry> {
        self.entries.iter()
    }

    pub fn get(&self, position: usize) -> Option<&ArchiveEntry> {
        self.entries.get(position)
    }

    pub fn position_of(&self, id: u64) -> Option<usize> {
        self.entries.iter().position(|e| e.id == id)
    }

    pub fn classify(&self, candidate: &[f64]) -> ArchiveRelation {
        let mut dominated = Vec::new();
        let mut dominating = Vec::new();
        for (pos, entry) in self.entries.iter().enumerate() {
            match compare(candidate, entry.objectives.values()) {
                Dominance::ADominatesB => dominated.push(pos),
                Dominance::BDominatesA => dominating.push(pos),
                Dominance::NonDominated | Dominance::Equal => {}
            }
        }
        debug_assert!(
            dominated.is_empty() || dominating.is_empty(),
            "archive invariant violated: candidate both dominates and is dominated"
        );
        if !dominated.is_empty() {
            ArchiveRelation::Dominates(dominated)
        } else if !dominating.is_empty() {
            ArchiveRelation::DominatedBy(dominating)
        } else {
            ArchiveRelation::MutuallyNonDominated
        }
    }

    /// Inserts a candidate, removing every member it dominates.
    ///
    /// Fails when the candidate is dominated by a member; callers classify
    /// first.
    pub fn insert(&mut self, decision: Vec<f64>, objectives: ObjectiveVector) -> Result<Inserted> {
        let mut duplicate = None;
        for entry in &self.entries {
            match compare(objectives.values(), entry.objectives.values()) {
                Dominance::BDominatesA => return Err(Error::DominatedInsert(entry.id)),
                Dominance::Equal => duplicate = Some(entry.id),
                _ => {}
            }
        }
        if let Some(id) = duplicate {
            return Ok(Inserted::Duplicate { id });
        }
        let before = self.entries.len();
        self.entries.retain(|e| !dominates(objectives.values(), e.objectives.values()));
        let removed = before - self.entries.len();
        let id = self.next_id;
        self.next_id += 1;
        self.entries.push(ArchiveEntry { id, decision, objectives });
        Ok(Inserted::Added { id, removed })
    }

    pub fn contains_objectives(&self, objectives: &[f64]) -> bool {
        self.entries.iter().any(|e| e.objectives.values() == objectives)
    }

    pub fn is_mutually_nondominated(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, a)| {
            self.entries[i + 1..]
                .iter()
                .all(|b| compare(a.objectives.values(), b.objectives.values()) == Dominance::NonDominated)
        })
    }

    pub fn feasible(&self) -> impl Iterator<Item = &ArchiveEntry> {
        self.entries.iter().filter(|e| e.objectives.is_feasible())
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry> {
        self.entries
    }
}

fn check_subset(dimension: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Empty("objective subset"));
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= dimension) {
        return Err(Error::InvalidArgument(format!("objective index {i} out of range for dimension {dimension}")));
    }
    Ok(())
}

/// Deb's fast non-dominated sort restricted to `subset`. Returns fronts of
/// input positions, best front first; each front is in ascending position
/// order.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P], subset: &[usize]) -> Result<Vec<Vec<usize>>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let dim = points[0].as_ref().len();
    check_subset(dim, subset)?;
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch { left: dim, right: p.as_ref().len() });
    }

    let n = points.len();
    let mut dominated_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_counts = vec![0usize; n];
    let mut current = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            match compare_on(points[p].as_ref(), points[q].as_ref(), subset) {
                Dominance::ADominatesB => {
                    dominated_sets[p].push(q);
                    domination_counts[q] += 1;
                }
                Dominance::BDominatesA => {
                    dominated_sets[q].push(p);
                    domination_counts[p] += 1;
                }
                _ => {}
            }
        }
    }
    for (p, &count) in domination_counts.iter().enumerate() {
        if count == 0 {
            current.push(p);
        }
    }

    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_sets[p] {
                domination_counts[q] -= 1;
                if domination_counts[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// First front only, in ascending position order. Cheaper than a full sort
/// when most points are dominated.
pub fn first_front<P: AsRef<[f64]>>(points: &[P], subset: &[usize]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    check_subset(points[0].as_ref().len(), subset)?;
    let mut front: Vec<usize> = Vec::new();
    'outer: for (p, point) in points.iter().enumerate() {
        let point = point.as_ref();
        let mut k = 0;
        while k < front.len() {
            match compare_on(point, points[front[k]].as_ref(), subset) {
                Dominance::BDominatesA => continue 'outer,
                Dominance::ADominatesB => {
                    front.swap_remove(k);
                }
                _ => k += 1,
            }
        }
        front.push(p);
    }
    front.sort_unstable();
    Ok(front)
}
