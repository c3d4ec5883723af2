//! Running experiments, persisting results and summarising them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::annealer::{self, Algorithm, AverageDenominator, MoveConfig, RunConfig, Schedule};
use crate::error::{Error, Result};
use crate::geometry::ExtentMode;
use crate::metrics::{self, ParetoSet, ProportionRule};
use crate::pareto::FEASIBILITY_TOLERANCE;
use crate::problems::{build_problem, ProblemKind};

/// Side lengths swept by default.
pub const DEFAULT_SL_GRID: [f64; 4] = [9.4, 9.0, 8.6, 8.2];

/// 9.4 down to 8.2 in steps of 0.1.
pub fn full_sl_grid() -> Vec<f64> {
    (0..=12).map(|i| (94 - i) as f64 / 10.0).collect()
}

pub fn default_schedule(kind: ProblemKind) -> Schedule {
    match kind {
        ProblemKind::Srn => Schedule::SRN,
        ProblemKind::Tnk => Schedule::TNK,
        ProblemKind::Config => Schedule::CONFIG,
    }
}

/// Benchmark move scale for TNK, as a fraction of its 100-wide box.
pub const TNK_BENCHMARK_SCALE_FRACTION: f64 = 1e-3;

pub fn default_moves(kind: ProblemKind) -> MoveConfig {
    match kind {
        ProblemKind::Tnk => {
            MoveConfig { benchmark_scale_fraction: TNK_BENCHMARK_SCALE_FRACTION, ..MoveConfig::default() }
        }
        _ => MoveConfig::default(),
    }
}

/// Everything needed to reproduce one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemKind,
    pub side_length: Option<f64>,
    pub envelope: ExtentMode,
    pub run: RunConfig,
}

impl RunSpec {
    pub fn new(problem: ProblemKind, side_length: Option<f64>, algorithm: Algorithm, seed: u64) -> Self {
        let side_length = if problem == ProblemKind::Config { side_length } else { None };
        Self {
            problem,
            side_length,
            envelope: ExtentMode::default(),
            run: RunConfig {
                moves: default_moves(problem),
                ..RunConfig::new(algorithm, default_schedule(problem), seed)
            },
        }
    }

    pub fn file_name(&self) -> String {
        let sl = self.side_length.map(|s| format!("-sl{s}")).unwrap_or_default();
        format!("{}{}-{}-seed{}.txt", self.problem.name(), sl, self.run.algorithm.name(), self.run.seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultEntry {
    pub decision: Vec<f64>,
    pub objectives: Vec<f64>,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub spec: RunSpec,
    pub constraint_count: usize,
    pub evaluations_init: u64,
    pub evaluations_main: u64,
    pub wall_clock_seconds: f64,
    pub feasible_trace: Vec<usize>,
    pub archive: Vec<ResultEntry>,
}

fn denominator_name(d: AverageDenominator) -> &'static str {
    match d {
        AverageDenominator::IncludeCurrent => "include-current",
        AverageDenominator::Literal => "literal",
    }
}

fn join_floats(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" ")
}

impl RunResult {
    pub fn evaluations(&self) -> u64 {
        self.evaluations_init + self.evaluations_main
    }

    pub fn feasible_count(&self) -> usize {
        self.archive.iter().filter(|e| e.feasible).count()
    }

    /// Feasible members projected onto the first two objectives, labelled
    /// with algorithm and seed.
    pub fn pareto_set(&self) -> ParetoSet {
        let points = self.archive.iter().filter(|e| e.feasible).map(|e| [e.objectives[0], e.objectives[1]]).collect();
        ParetoSet::labelled(points, self.spec.run.algorithm.name(), self.spec.run.seed)
    }

    /// Text form with or without the wall-clock line. Without it the text is
    /// a pure function of the run specification.
    pub fn to_text(&self, with_wall_clock: bool) -> String {
        let s = &self.spec;
        let r = &s.run;
        let mut out = String::from("# mosar run result\n");
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("write to string");
        kv("problem", s.problem.name().into());
        kv("side_length", s.side_length.map_or("none".into(), |v| v.to_string()));
        kv("envelope", s.envelope.name().into());
        kv("algorithm", r.algorithm.name().into());
        kv("seed", r.seed.to_string());
        kv("t_max", r.schedule.t_max.to_string());
        kv("t_min", r.schedule.t_min.to_string());
        kv("alpha", r.schedule.alpha.to_string());
        kv("iters_per_temp", r.schedule.iters_per_temp.to_string());
        kv("translation_scale", r.moves.translation_scale.to_string());
        kv("rotation_scale", r.moves.rotation_scale.to_string());
        kv("translation_probability", r.moves.translation_probability.to_string());
        kv("benchmark_scale_fraction", r.moves.benchmark_scale_fraction.to_string());
        kv("average_denominator", denominator_name(r.denominator).into());
        kv("constraint_count", self.constraint_count.to_string());
        kv("evaluations_init", self.evaluations_init.to_string());
        kv("evaluations_main", self.evaluations_main.to_string());
        kv("evaluations", self.evaluations().to_string());
        kv("feasible_count", self.feasible_count().to_string());
        kv("feasible_trace", self.feasible_trace.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        if with_wall_clock {
            kv("wall_clock_seconds", format!("{:.6}", self.wall_clock_seconds));
        }
        out.push_str("[archive]\n");
        for e in &self.archive {
            let _ =
                writeln!(out, "{} | {} | {}", join_floats(&e.decision), join_floats(&e.objectives), e.feasible as u8);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text(true)).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|m| Error::parse(path, m))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut header = BTreeMap::new();
        let mut lines = text.lines().enumerate();
        let mut saw_archive = false;
        for (_, line) in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[archive]" {
                saw_archive = true;
                break;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("bad header line `{line}`"))?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        }
        if !saw_archive {
            return Err("missing [archive] section".into());
        }
        let get = |k: &str| header.get(k).map(String::as_str).ok_or_else(|| format!("missing `{k}`"));
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value for `{k}`: `{v}`"))
        }
        let problem = ProblemKind::from_name(get("problem")?).map_err(|e| e.to_string())?;
        let side_length = match get("side_length")? {
            "none" => None,
            v => Some(num("side_length", v)?),
        };
        let envelope = ExtentMode::from_name(get("envelope")?).ok_or("bad envelope")?;
        let algorithm = Algorithm::from_name(get("algorithm")?).map_err(|e| e.to_string())?;
        let schedule = Schedule::new(
            num("t_max", get("t_max")?)?,
            num("t_min", get("t_min")?)?,
            num("alpha", get("alpha")?)?,
            num("iters_per_temp", get("iters_per_temp")?)?,
        )
        .map_err(|e| e.to_string())?;
        let moves = MoveConfig {
            translation_scale: num("translation_scale", get("translation_scale")?)?,
            rotation_scale: num("rotation_scale", get("rotation_scale")?)?,
            translation_probability: num("translation_probability", get("translation_probability")?)?,
            benchmark_scale_fraction: num("benchmark_scale_fraction", get("benchmark_scale_fraction")?)?,
        };
        let denominator = match get("average_denominator")? {
            "include-current" => AverageDenominator::IncludeCurrent,
            "literal" => AverageDenominator::Literal,
            other => return Err(format!("bad average_denominator `{other}`")),
        };
        let feasible_trace = get("feasible_trace")?
            .split_whitespace()
            .map(|t| num("feasible_trace", t))
            .collect::<std::result::Result<_, _>>()?;
        let wall_clock_seconds = match header.get("wall_clock_seconds") {
            Some(v) => num("wall_clock_seconds", v)?,
            None => 0.0,
        };

        let mut archive = Vec::new();
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(format!("line {}: expected `decision | objectives | feasible`", n + 1));
            }
            let floats = |s: &str| -> std::result::Result<Vec<f64>, String> {
                s.split_whitespace()
                    .map(|t| t.parse().map_err(|_| format!("line {}: bad float `{t}`", n + 1)))
                    .collect()
            };
            let feasible = match parts[2].trim() {
                "1" => true,
                "0" => false,
                other => return Err(format!("line {}: bad feasibility flag `{other}`", n + 1)),
            };
            archive.push(ResultEntry { decision: floats(parts[0])?, objectives: floats(parts[1])?, feasible });
        }

        Ok(RunResult {
            spec: RunSpec {
                problem,
                side_length,
                envelope,
                run: RunConfig { algorithm, schedule, moves, seed: num("seed", get("seed")?)?, denominator },
            },
            constraint_count: num("constraint_count", get("constraint_count")?)?,
            evaluations_init: num("evaluations_init", get("evaluations_init")?)?,
            evaluations_main: num("evaluations_main", get("evaluations_main")?)?,
            wall_clock_seconds,
            feasible_trace,
            archive,
        })
    }
}

/// Runs one annealing run described by `spec`.
pub fn solve(spec: &RunSpec) -> Result<RunResult> {
    let problem = build_problem(spec.problem, spec.side_length, spec.envelope)?;
    spec.run.moves.validate()?;
    let started = Instant::now();
    let outcome = annealer::run(problem.as_ref(), &spec.run);
    let wall_clock_seconds = started.elapsed().as_secs_f64();
    let archive = outcome
        .archive
        .iter()
        .map(|e| ResultEntry {
            decision: e.decision.clone(),
            objectives: e.objectives.values().to_vec(),
            feasible: e.objectives.is_feasible(),
        })
        .collect();
    Ok(RunResult {
        spec: *spec,
        constraint_count: problem.descriptor().constraint_count,
        evaluations_init: outcome.init_evaluations,
        evaluations_main: outcome.main_evaluations,
        wall_clock_seconds,
        feasible_trace: outcome.feasible_trace,
        archive,
    })
}

/// Runs every spec on the rayon pool. Output order follows input order.
pub fn solve_all(specs: &[RunSpec]) -> Result<Vec<RunResult>> {
    specs.par_iter().map(solve).collect()
}

/// Per-problem hypervolume. SRN points are min-max normalised by the
/// reference front first; TNK uses raw objective values.
pub fn problem_hypervolume(kind: ProblemKind, pf: &ParetoSet, reference_front: &ParetoSet) -> Result<f64> {
    match kind {
        ProblemKind::Srn => {
            let r = metrics::own_ranges(reference_front);
            let norm = |s: &ParetoSet| {
                let pts = s
                    .points
                    .iter()
                    .map(|p| {
                        let mut q = [0.0; 2];
                        for k in 0..2 {
                            let w = r[k].1 - r[k].0;
                            q[k] = if w > 0.0 { (p[k] - r[k].0) / w } else { p[k] - r[k].0 };
                        }
                        q
                    })
                    .collect();
                ParetoSet::new(pts)
            };
            metrics::hypervolume_2d(&norm(pf), &norm(reference_front))
        }
        ProblemKind::Tnk => metrics::hypervolume_2d(pf, reference_front),
        ProblemKind::Config => Err(Error::InvalidArgument("hypervolume needs a benchmark problem".into())),
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub side_lengths: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub schedule: Schedule,
    pub moves: MoveConfig,
    pub envelope: ExtentMode,
    pub denominator: AverageDenominator,
}

impl SweepConfig {
    pub fn new(side_lengths: Vec<f64>, seeds: Vec<u64>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            side_lengths,
            seeds,
            algorithms,
            schedule: Schedule::CONFIG,
            moves: MoveConfig::default(),
            envelope: ExtentMode::default(),
            denominator: AverageDenominator::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.side_lengths.is_empty() || self.seeds.is_empty() || self.algorithms.is_empty() {
            return Err(Error::InvalidArgument("side lengths, seeds and algorithms must be non-empty".into()));
        }
        if let Some(sl) = self.side_lengths.iter().find(|s| !(**s > 0.0)) {
            return Err(Error::InvalidArgument(format!("side length {sl} must be positive")));
        }
        Ok(())
    }

    pub fn specs(&self) -> Vec<RunSpec> {
        let mut out = Vec::new();
        for &sl in &self.side_lengths {
            for &algorithm in &self.algorithms {
                for &seed in &self.seeds {
                    let mut spec = RunSpec::new(ProblemKind::Config, Some(sl), algorithm, seed);
                    spec.envelope = self.envelope;
                    spec.run.schedule = self.schedule;
                    spec.run.moves = self.moves;
                    spec.run.denominator = self.denominator;
                    out.push(spec);
                }
            }
        }
        out
    }
}

/// Metric summaries for one side length.
#[derive(Clone, Debug, PartialEq)]
pub struct SlSummary {
    pub side_length: f64,
    /// Per algorithm: one value per seed, in seed order.
    pub cardinality: Vec<Vec<f64>>,
    pub spacing: Vec<Vec<f64>>,
    /// `(a, b, per-seed C(a, b))` for every ordered pair of algorithms.
    pub coverage: Vec<(usize, usize, Vec<f64>)>,
    pub proportion: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub rows: Vec<SlSummary>,
}

/// Groups results by side length and computes the summary metrics. Results
/// must cover every (side length, algorithm, seed) of `config`.
pub fn summarize(config: &SweepConfig, results: &[RunResult]) -> Result<SweepSummary> {
    let find = |sl: f64, a: Algorithm, seed: u64| {
        results
            .iter()
            .find(|r| r.spec.side_length == Some(sl) && r.spec.run.algorithm == a && r.spec.run.seed == seed)
            .map(RunResult::pareto_set)
            .ok_or_else(|| Error::InvalidArgument(format!("missing run sl={sl} {} seed={seed}", a.name())))
    };
    let mut rows = Vec::new();
    for &sl in &config.side_lengths {
        let sets: Vec<Vec<ParetoSet>> = config
            .algorithms
            .iter()
            .map(|&a| config.seeds.iter().map(|&s| find(sl, a, s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let cardinality = sets.iter().map(|v| v.iter().map(|p| metrics::cardinality(p) as f64).collect()).collect();
        let spacing = sets.iter().map(|v| v.iter().map(metrics::minimal_spacing_own).collect()).collect();
        let mut coverage = Vec::new();
        for a in 0..sets.len() {
            for b in 0..sets.len() {
                if a != b {
                    let c = sets[a].iter().zip(&sets[b]).map(|(x, y)| metrics::coverage(x, y)).collect();
                    coverage.push((a, b, c));
                }
            }
        }
        let proportion = metrics::accounted_proportion(&sets, ProportionRule::Intersection);
        rows.push(SlSummary { side_length: sl, cardinality, spacing, coverage, proportion });
    }
    Ok(SweepSummary { algorithms: config.algorithms.clone(), seeds: config.seeds.clone(), rows })
}

fn seed_line(seeds: &[u64]) -> String {
    seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn mean_std_cells(values: &[f64]) -> String {
    let (m, s) = metrics::mean_std(values);
    format!("{m:>12.4} {s:>10.4}")
}

impl SweepSummary {
    fn header(&self, title: &str, config: &SweepConfig) -> String {
        let s = &config.schedule;
        format!(
            "# {title}\n# seeds = {}\n# schedule = t_max {} t_min {} alpha {} iters {}\n# envelope = {}\n",
            seed_line(&self.seeds),
            s.t_max,
            s.t_min,
            s.alpha,
            s.iters_per_temp,
            config.envelope.name()
        )
    }

    fn per_algorithm_table(
        &self,
        title: &str,
        config: &SweepConfig,
        pick: impl Fn(&SlSummary) -> &Vec<Vec<f64>>,
    ) -> String {
        let mut out = self.header(title, config);
        out.push_str(&format!("{:>6}", "sl"));
        for a in &self.algorithms {
            out.push_str(&format!(" {:>12} {:>10}", format!("{}_mean", a.name()), "std"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{:>6}", row.side_length));
            for values in pick(row) {
                out.push(' ');
                out.push_str(&mean_std_cells(values));
            }
            out.push('\n');
        }
        out
    }

    pub fn cardinality_table(&self, config: &SweepConfig) -> String {
        self.per_algorithm_table("cardinality (mean, sample std over seeds)", config, |r| &r.cardinality)
    }

    pub fn spacing_table(&self, config: &SweepConfig) -> String {
        self.per_algorithm_table("minimal spacing (mean, sample std over seeds)", config, |r| &r.spacing)
    }

    pub fn coverage_table(&self, config: &SweepConfig) -> String {
        let mut out = self.header("coverage C(a,b) paired by seed (mean, sample std)", config);
        out.push_str(&format!("{:>6}", "sl"));
        if let Some(first) = self.rows.first() {
            for (a, b, _) in &first.coverage {
                let name = format!("C({},{})", self.algorithms[*a].label(), self.algorithms[*b].label());
                out.push_str(&format!(" {name:>12} {:>10}", "std"));
            }
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{:>6}", row.side_length));
            for (_, _, values) in &row.coverage {
                out.push(' ');
                out.push_str(&mean_std_cells(values));
            }
            out.push('\n');
        }
        out
    }

    pub fn proportion_table(&self, config: &SweepConfig) -> String {
        let mut out = self.header("accounted proportion", config);
        out.push_str(&format!("{:>6}", "sl"));
        for a in &self.algorithms {
            out.push_str(&format!(" {:>10}", a.name()));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{:>6}", row.side_length));
            for p in &row.proportion {
                out.push_str(&format!(" {p:>10.4}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Files written by [`run_sweep`].
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub run_files: Vec<PathBuf>,
    pub table_files: Vec<PathBuf>,
    pub front_files: Vec<PathBuf>,
    pub summary: SweepSummary,
}

fn write_file(path: PathBuf, text: &str) -> Result<PathBuf> {
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Runs the configuration-problem sweep and writes per-run results, one
/// summary table per metric and CSV front projections into `out`.
pub fn run_sweep(config: &SweepConfig, out: &Path) -> Result<SweepOutput> {
    config.validate()?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let specs = config.specs();
    let results = solve_all(&specs)?;

    let mut run_files = Vec::with_capacity(results.len());
    for r in &results {
        let path = out.join(r.spec.file_name());
        r.write(&path)?;
        run_files.push(path);
    }

    let summary = summarize(config, &results)?;
    let table_files = vec![
        write_file(out.join("cardinality.txt"), &summary.cardinality_table(config))?,
        write_file(out.join("minimal_spacing.txt"), &summary.spacing_table(config))?,
        write_file(out.join("coverage.txt"), &summary.coverage_table(config))?,
        write_file(out.join("accounted_proportion.txt"), &summary.proportion_table(config))?,
    ];

    let fronts = out.join("fronts");
    fs::create_dir_all(&fronts).map_err(|e| Error::io(&fronts, e))?;
    let mut front_files = Vec::new();
    for &sl in &config.side_lengths {
        for &a in &config.algorithms {
            let mut csv = String::from("seed,volume,length\n");
            for r in results.iter().filter(|r| r.spec.side_length == Some(sl) && r.spec.run.algorithm == a) {
                for p in r.pareto_set().points {
                    let _ = writeln!(csv, "{},{:.16e},{:.16e}", r.spec.run.seed, p[0], p[1]);
                }
            }
            front_files.push(write_file(fronts.join(format!("sl{sl}-{}.csv", a.name())), &csv)?);
        }
    }
    Ok(SweepOutput { run_files, table_files, front_files, summary })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Cardinality,
    Igd,
    Hypervolume,
    Coverage,
    Spacing,
    Proportion,
}

impl MetricKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "n" => Ok(MetricKind::Cardinality),
            "igd" => Ok(MetricKind::Igd),
            "hv" => Ok(MetricKind::Hypervolume),
            "c" => Ok(MetricKind::Coverage),
            "s_m" | "sm" => Ok(MetricKind::Spacing),
            "p" => Ok(MetricKind::Proportion),
            other => Err(Error::InvalidArgument(format!("unknown metric `{other}` (expected N, IGD, HV, C, S_m, P)"))),
        }
    }
}

/// Marker written for an undefined value such as the IGD of an empty front.
pub const EMPTY_MARKER: &str = "empty";

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        EMPTY_MARKER.into()
    }
}

type Loaded = (PathBuf, RunResult);

/// Metric report over stored results. `against` is the second set for
/// coverage; without it coverage compares the inputs pairwise.
pub fn metrics_report(
    inputs: &[(PathBuf, RunResult)],
    against: &[(PathBuf, RunResult)],
    wanted: &[MetricKind],
    cache_dir: &Path,
) -> Result<String> {
    let mut out = String::new();
    let mut fronts: BTreeMap<ProblemKind, ParetoSet> = BTreeMap::new();
    let mut front_for = |kind: ProblemKind| -> Result<ParetoSet> {
        if let Some(f) = fronts.get(&kind) {
            return Ok(f.clone());
        }
        let f = metrics::cached_reference_front(kind, metrics::DEFAULT_RESOLUTION, cache_dir)?;
        fronts.insert(kind, f.clone());
        Ok(f)
    };

    for (path, r) in inputs {
        let ps = r.pareto_set();
        let mut cells = vec![path.display().to_string()];
        let benchmark = r.spec.problem != ProblemKind::Config;
        for m in wanted {
            match m {
                MetricKind::Cardinality => cells.push(format!("N={}", metrics::cardinality(&ps))),
                MetricKind::Spacing => cells.push(format!("S_m={}", fmt_value(metrics::minimal_spacing_own(&ps)))),
                MetricKind::Igd if benchmark => {
                    let v = metrics::igd(&ps, &front_for(r.spec.problem)?)?;
                    cells.push(format!("IGD={}", fmt_value(v)));
                }
                MetricKind::Hypervolume if benchmark => {
                    let v = problem_hypervolume(r.spec.problem, &ps, &front_for(r.spec.problem)?)?;
                    cells.push(format!("HV={}", fmt_value(v)));
                }
                MetricKind::Igd => cells.push("IGD=n/a".into()),
                MetricKind::Hypervolume => cells.push("HV=n/a".into()),
                MetricKind::Coverage | MetricKind::Proportion => {}
            }
        }
        if cells.len() > 1 {
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }

    if wanted.contains(&MetricKind::Coverage) {
        let pairs: Vec<(&Loaded, &Loaded)> = if against.is_empty() {
            inputs.iter().flat_map(|a| inputs.iter().map(move |b| (a, b))).collect()
        } else {
            inputs.iter().flat_map(|a| against.iter().map(move |b| (a, b))).collect()
        };
        for ((pa, ra), (pb, rb)) in pairs {
            let (sa, sb) = (ra.pareto_set(), rb.pareto_set());
            let _ = writeln!(
                out,
                "C({}, {}) = {} ; C({}, {}) = {}",
                pa.display(),
                pb.display(),
                fmt_value(metrics::coverage(&sa, &sb)),
                pb.display(),
                pa.display(),
                fmt_value(metrics::coverage(&sb, &sa))
            );
        }
    }

    if wanted.contains(&MetricKind::Proportion) {
        let mut groups: BTreeMap<&'static str, Vec<ParetoSet>> = BTreeMap::new();
        for (_, r) in inputs.iter().chain(against) {
            groups.entry(r.spec.run.algorithm.name()).or_default().push(r.pareto_set());
        }
        let names: Vec<&str> = groups.keys().copied().collect();
        let sets: Vec<Vec<ParetoSet>> = groups.into_values().collect();
        let p = metrics::accounted_proportion(&sets, ProportionRule::Intersection);
        for (name, v) in names.iter().zip(p) {
            let _ = writeln!(out, "P({name}) = {}", fmt_value(v));
        }
    }
    Ok(out)
}

/// Loads all result files matching `pattern`, sorted by path.
pub fn load_results(pattern: &str) -> Result<Vec<(PathBuf, RunResult)>> {
    let paths = glob::glob(pattern).map_err(|e| Error::InvalidArgument(format!("bad glob `{pattern}`: {e}")))?;
    let mut out = Vec::new();
    for p in paths {
        let p = p.map_err(|e| Error::io(e.path().to_path_buf(), std::io::Error::other(e.to_string())))?;
        let r = RunResult::read(&p)?;
        out.push((p, r));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Short human summary of a run: feasible count and per-objective minima
/// over feasible members.
pub fn describe(r: &RunResult) -> String {
    let feasible: Vec<&ResultEntry> = r.archive.iter().filter(|e| e.feasible).collect();
    let mut s = format!(
        "{} {} seed {}: {} feasible of {} archived, {} evaluations",
        r.spec.problem.name(),
        r.spec.run.algorithm.name(),
        r.spec.run.seed,
        feasible.len(),
        r.archive.len(),
        r.evaluations()
    );
    if let Some(first) = feasible.first() {
        let objectives = first.objectives.len() - r.constraint_count;
        let best: Vec<String> = (0..objectives)
            .map(|k| {
                let v = feasible.iter().map(|e| e.objectives[k]).fold(f64::INFINITY, f64::min);
                format!("{v:.6}")
            })
            .collect();
        s.push_str(&format!("; best objectives [{}]", best.join(", ")));
    }
    s
}

/// Feasibility as stored in result files matches the archive tolerance.
pub fn is_feasible(objectives: &[f64], constraint_count: usize) -> bool {
    objectives[objectives.len() - constraint_count..].iter().all(|v| *v <= FEASIBILITY_TOLERANCE)
}
