//! Quality indicators for two-objective Pareto sets.
//!
//! All indicators work on [`ParetoSet`]s: feasible points projected onto the
//! problem's two metric objectives.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pareto::{compare, dominates, Archive, Dominance};
use crate::problems::{evaluate_srn, evaluate_tnk, ProblemKind};

pub type Point2 = [f64; 2];

/// Environment variable naming the reference-front cache directory.
pub const CACHE_DIR_ENV: &str = "MOSAR_CACHE_DIR";

/// Default grid resolution per axis for reference fronts.
pub const DEFAULT_RESOLUTION: usize = 1000;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParetoSet {
    pub points: Vec<Point2>,
    pub algorithm: Option<String>,
    pub seed: Option<u64>,
}

impl ParetoSet {
    pub fn new(points: Vec<Point2>) -> Self {
        Self { points, algorithm: None, seed: None }
    }

    pub fn labelled(points: Vec<Point2>, algorithm: impl Into<String>, seed: u64) -> Self {
        Self { points, algorithm: Some(algorithm.into()), seed: Some(seed) }
    }

    /// Feasible archive members projected onto `projection`.
    pub fn from_archive(archive: &Archive, projection: [usize; 2]) -> Self {
        let points = archive
            .feasible()
            .map(|e| {
                let v = e.objectives.values();
                [v[projection[0]], v[projection[1]]]
            })
            .collect();
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn cardinality(ps: &ParetoSet) -> usize {
    ps.len()
}

fn euclid(a: &Point2, b: &Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Inverted generational distance from `pf_star` to `pf`.
///
/// An empty `pf` gives `f64::INFINITY`.
pub fn igd(pf: &ParetoSet, pf_star: &ParetoSet) -> Result<f64> {
    if pf_star.is_empty() {
        return Err(Error::Empty("reference front"));
    }
    if pf.is_empty() {
        return Ok(f64::INFINITY);
    }
    let total: f64 =
        pf_star.points.iter().map(|r| pf.points.iter().map(|p| euclid(p, r)).fold(f64::INFINITY, f64::min)).sum();
    Ok(total / pf_star.len() as f64)
}

/// `1.1 ×` the componentwise maximum of `source`.
pub fn reference_point(source: &ParetoSet) -> Option<Point2> {
    if source.is_empty() {
        return None;
    }
    let mut m = [f64::NEG_INFINITY; 2];
    for p in &source.points {
        m[0] = m[0].max(p[0]);
        m[1] = m[1].max(p[1]);
    }
    Some([1.1 * m[0], 1.1 * m[1]])
}

/// Area of the union of boxes `[p, r]`; points not strictly below `r` are ignored.
pub fn dominated_area(points: &[Point2], r: Point2) -> f64 {
    let mut inside: Vec<Point2> = points.iter().copied().filter(|p| p[0] < r[0] && p[1] < r[1]).collect();
    inside.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut level = r[1];
    for p in inside {
        if p[1] < level {
            area += (r[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    area
}

/// Fraction of the box from the origin to `r` dominated by `pf`.
pub fn hypervolume_with_reference(pf: &ParetoSet, r: Point2) -> Result<f64> {
    if !(r[0] > 0.0 && r[1] > 0.0) {
        return Err(Error::InvalidArgument(format!("reference point {r:?} must be positive")));
    }
    Ok(dominated_area(&pf.points, r) / (r[0] * r[1]))
}

/// Normalised hypervolume with the reference point derived from
/// `reference_source`. An empty `pf` gives 0.
pub fn hypervolume_2d(pf: &ParetoSet, reference_source: &ParetoSet) -> Result<f64> {
    if pf.is_empty() {
        return Ok(0.0);
    }
    let r = reference_point(reference_source).ok_or(Error::Empty("hypervolume reference source"))?;
    hypervolume_with_reference(pf, r)
}

/// Fraction of `b` strictly dominated by some point of `a`.
pub fn coverage(a: &ParetoSet, b: &ParetoSet) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.5,
        (false, true) => 1.0,
        (true, false) => 0.0,
        (false, false) => {
            let covered = b.points.iter().filter(|q| a.points.iter().any(|p| dominates(p, *q))).count();
            covered as f64 / b.len() as f64
        }
    }
}

/// Per-objective `(min, max)` of a point set.
pub fn own_ranges(ps: &ParetoSet) -> [(f64, f64); 2] {
    let mut r = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for p in &ps.points {
        for k in 0..2 {
            r[k].0 = r[k].0.min(p[k]);
            r[k].1 = r[k].1.max(p[k]);
        }
    }
    r
}

/// Chain-based spacing of `ps` under standardised Manhattan distance.
///
/// Sets with at most one point give 1. Every point is tried as the chain
/// seed and the chain with the smallest total length is kept. Totals equal
/// to within a relative `1e-12` count as tied and the lowest seed wins.
pub fn minimal_spacing(ps: &ParetoSet, standardization: [(f64, f64); 2]) -> f64 {
    let n = ps.len();
    if n <= 1 {
        return 1.0;
    }
    let scale = standardization.map(|(lo, hi)| {
        let w = (hi - lo).abs();
        if w > 0.0 && w.is_finite() {
            w
        } else {
            1.0
        }
    });
    let dist = |a: &Point2, b: &Point2| (a[0] - b[0]).abs() / scale[0] + (a[1] - b[1]).abs() / scale[1];

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut marked = vec![false; n];
    for seed in 0..n {
        marked.iter_mut().for_each(|m| *m = false);
        marked[seed] = true;
        let mut last = seed;
        let mut chain = Vec::with_capacity(n - 1);
        for _ in 1..n {
            let (next, d) = (0..n)
                .filter(|&j| !marked[j])
                .map(|j| (j, dist(&ps.points[last], &ps.points[j])))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("unmarked point remains");
            marked[next] = true;
            chain.push(d);
            last = next;
        }
        let total: f64 = chain.iter().sum();
        if best.as_ref().is_none_or(|(t, _)| total < *t - 1e-12 * t.abs().max(1e-300)) {
            best = Some((total, chain));
        }
    }
    let (total, chain) = best.expect("n > 1");
    let mean = total / chain.len() as f64;
    let var = chain.iter().map(|d| (mean - d).powi(2)).sum::<f64>() / chain.len() as f64;
    var.sqrt()
}

/// Minimal spacing standardised by the set's own objective ranges.
pub fn minimal_spacing_own(ps: &ParetoSet) -> f64 {
    minimal_spacing(ps, own_ranges(ps))
}

/// Points of `points` not dominated by any other, without duplicates, in
/// ascending order of the first objective.
pub fn nondominated_filter(points: &[Point2]) -> Vec<Point2> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut out: Vec<Point2> = Vec::new();
    for p in sorted {
        if out.last().is_none_or(|q| p[1] < q[1]) {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProportionRule {
    /// Count only the members of an algorithm's combined set that survive
    /// in the overall non-dominated set.
    #[default]
    Intersection,
    /// Use the full size of an algorithm's combined set as numerator.
    Literal,
}

/// Share of the overall non-dominated set contributed by each algorithm.
///
/// `runs[i]` holds every run of algorithm `i`. The overall set keeps one
/// copy of a point per algorithm that found it, so the intersection shares
/// sum to 1 whenever any algorithm has a feasible point.
pub fn accounted_proportion(runs: &[Vec<ParetoSet>], rule: ProportionRule) -> Vec<f64> {
    let per_algorithm: Vec<Vec<Point2>> = runs
        .iter()
        .map(|sets| {
            let union: Vec<Point2> = sets.iter().flat_map(|s| s.points.iter().copied()).collect();
            nondominated_filter(&union)
        })
        .collect();
    let tagged: Vec<(usize, Point2)> =
        per_algorithm.iter().enumerate().flat_map(|(i, ps)| ps.iter().map(move |p| (i, *p))).collect();
    let survivors: Vec<usize> = tagged
        .iter()
        .map(|(_, p)| !tagged.iter().any(|(_, q)| compare(q, p) == Dominance::ADominatesB))
        .enumerate()
        .filter_map(|(k, keep)| keep.then_some(k))
        .collect();
    if survivors.is_empty() {
        return vec![0.0; runs.len()];
    }
    let total = survivors.len() as f64;
    (0..runs.len())
        .map(|i| match rule {
            ProportionRule::Intersection => survivors.iter().filter(|&&k| tagged[k].0 == i).count() as f64 / total,
            ProportionRule::Literal => per_algorithm[i].len() as f64 / total,
        })
        .collect()
}

/// Decision box sampled for a reference front. Only the part of the box that
/// can satisfy the constraints is gridded.
pub fn reference_box(kind: ProblemKind) -> Result<[(f64, f64); 2]> {
    match kind {
        ProblemKind::Srn => Ok([(-15.0, 15.0); 2]),
        ProblemKind::Tnk => Ok([(1e-9, 0.5 + 0.5f64.sqrt() + 1e-4); 2]),
        ProblemKind::Config => Err(Error::InvalidArgument("no reference front for the configuration problem".into())),
    }
}

/// Feasible, non-dominated image of a dense decision grid.
pub fn reference_front(kind: ProblemKind, resolution: usize) -> Result<ParetoSet> {
    if resolution < DEFAULT_RESOLUTION {
        return Err(Error::InvalidArgument(format!("resolution {resolution} below {DEFAULT_RESOLUTION}")));
    }
    let [(x0, x1), (y0, y1)] = reference_box(kind)?;
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
    let points: Vec<Point2> = (0..resolution)
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = step(x0, x1, i);
            (0..resolution).filter_map(move |j| {
                let x = [a, step(y0, y1, j)];
                let v = match kind {
                    ProblemKind::Srn => evaluate_srn(x),
                    _ => evaluate_tnk(x),
                };
                v.is_feasible().then(|| [v.values()[0], v.values()[1]])
            })
        })
        .collect();
    Ok(ParetoSet::new(nondominated_filter(&points)))
}

pub fn cache_file(dir: &Path, kind: ProblemKind, resolution: usize) -> PathBuf {
    dir.join(format!("{}-front-{resolution}.txt", kind.name()))
}

/// Cache directory from the environment, else a directory under the system
/// temporary directory.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("mosar-cache"))
}

pub fn write_front(path: &Path, ps: &ParetoSet) -> Result<()> {
    let mut text = String::with_capacity(ps.len() * 48);
    for p in &ps.points {
        text.push_str(&format!("{} {}\n", p[0], p[1]));
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_front(path: &Path) -> Result<ParetoSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let mut it = line.split_whitespace().map(str::parse::<f64>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => points.push([a, b]),
            _ => return Err(Error::parse(path, format!("line {}: expected two floats", n + 1))),
        }
    }
    Ok(ParetoSet::new(points))
}

/// Reference front loaded from `dir`, generated and stored on a miss.
pub fn cached_reference_front(kind: ProblemKind, resolution: usize, dir: &Path) -> Result<ParetoSet> {
    let path = cache_file(dir, kind, resolution);
    if path.exists() {
        return read_front(&path);
    }
    let front = reference_front(kind, resolution)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    write_front(&tmp, &front)?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(front)
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ps(points: &[Point2]) -> ParetoSet {
        ParetoSet::new(points.to_vec())
    }

    #[test]
    fn cardinality_counts_points() {
        assert_eq!(cardinality(&ps(&[])), 0);
        assert_eq!(cardinality(&ps(&[[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]])), 3);
    }

    #[test]
    fn igd_examples() {
        let star = ps(&[[0.0, 1.0], [1.0, 0.0]]);
        let got = igd(&ps(&[[0.0, 1.0]]), &star).unwrap();
        assert!((got - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
        assert_eq!(igd(&star, &star).unwrap(), 0.0);
        assert_eq!(igd(&ps(&[]), &star).unwrap(), f64::INFINITY);
        assert!(igd(&star, &ps(&[])).is_err());
    }

    #[test]
    fn hypervolume_examples() {
        let two = ps(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!((hypervolume_2d(&two, &two).unwrap() - 0.21 / 1.21).abs() < 1e-12);
        let origin = ps(&[[0.0, 0.0]]);
        assert_eq!(hypervolume_with_reference(&origin, [1.1, 1.1]).unwrap(), 1.0);
        assert_eq!(hypervolume_2d(&ps(&[]), &two).unwrap(), 0.0);
    }

    #[test]
    fn hypervolume_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let pts: Vec<Point2> = (0..10).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
            let set = ps(&pts);
            let hv = hypervolume_2d(&set, &set).unwrap();
            let r = reference_point(&set).unwrap();
            let samples = 1_000_000;
            let hits = (0..samples)
                .filter(|_| {
                    let s = [rng.gen::<f64>() * r[0], rng.gen::<f64>() * r[1]];
                    pts.iter().any(|p| p[0] <= s[0] && p[1] <= s[1])
                })
                .count();
            let mc = hits as f64 / samples as f64;
            assert!((hv - mc).abs() < 2e-3, "{hv} vs {mc}");
        }
    }

    #[test]
    fn coverage_conventions() {
        let a = ps(&[[0.0, 0.0]]);
        let b = ps(&[[1.0, 1.0]]);
        let e = ps(&[]);
        assert_eq!(coverage(&a, &b), 1.0);
        assert_eq!(coverage(&b, &a), 0.0);
        assert_eq!(coverage(&e, &e), 0.5);
        assert_eq!(coverage(&a, &e), 1.0);
        assert_eq!(coverage(&e, &a), 0.0);
        let front = ps(&[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]);
        assert_eq!(coverage(&front, &front), 0.0);
    }

    #[test]
    fn minimal_spacing_examples() {
        assert_eq!(minimal_spacing_own(&ps(&[])), 1.0);
        assert_eq!(minimal_spacing_own(&ps(&[[3.0, 4.0]])), 1.0);
        assert_eq!(minimal_spacing_own(&ps(&[[0.0, 1.0], [1.0, 0.0]])), 0.0);
        let three = ps(&[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]);
        assert_eq!(minimal_spacing(&three, [(0.0, 1.0); 2]), 0.0);
        // Chain 0 -> 0.1 -> 1.0 on a line: distances 0.1 and 0.9 (unit ranges).
        let uneven = ps(&[[0.0, 1.0], [0.1, 0.9], [1.0, 0.0]]);
        let s = minimal_spacing(&uneven, [(0.0, 1.0); 2]);
        assert!((s - 0.8).abs() < 1e-12, "{s}");
    }

    #[test]
    fn accounted_proportion_examples() {
        let alg1 = vec![ps(&[[1.0, 0.0]])];
        let alg2 = vec![ps(&[[0.0, 1.0], [2.0, 2.0]])];
        let p = accounted_proportion(&[alg1.clone(), alg2.clone()], ProportionRule::Intersection);
        assert_eq!(p, vec![0.5, 0.5]);
        assert_eq!(accounted_proportion(&[alg1], ProportionRule::Intersection), vec![1.0]);
        let none = accounted_proportion(&[vec![ps(&[])], vec![]], ProportionRule::Intersection);
        assert_eq!(none, vec![0.0, 0.0]);
        // The literal rule ignores cross-algorithm domination, so rows can exceed 1.
        let dominated = vec![ps(&[[3.0, 3.0]])];
        assert_eq!(
            accounted_proportion(&[alg2.clone(), dominated.clone()], ProportionRule::Intersection),
            vec![1.0, 0.0]
        );
        assert_eq!(accounted_proportion(&[alg2, dominated], ProportionRule::Literal), vec![1.0, 1.0]);
    }

    #[test]
    fn nondominated_filter_dedups() {
        let f = nondominated_filter(&[[1.0, 1.0], [0.0, 2.0], [1.0, 1.0], [2.0, 2.0], [0.0, 3.0]]);
        assert_eq!(f, vec![[0.0, 2.0], [1.0, 1.0]]);
    }

    #[test]
    fn front_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        let set = ps(&[[0.1 + 0.2, 1e-300], [-3.5, 7.0 / 3.0]]);
        write_front(&path, &set).unwrap();
        assert_eq!(read_front(&path).unwrap(), set);
        fs::write(&path, "1 2 3\n").unwrap();
        assert!(read_front(&path).is_err());
    }

    #[test]
    fn mean_std_sample() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
