//! Replication harness for the two evaluation studies.
//!
//! RQ1 scores each strategy by the reliability the model predicts for its
//! split. RQ2 seeds hidden faults, simulates testing with the split, and
//! scores by the reliability of what survives.
//!
//! Every (fault tree, spending profile) pair is one instance. Instances get
//! their own seeds derived from the global seed and their indices, so
//! results do not depend on scheduling, and they are aggregated in index
//! order.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocator::{AllocationProblem, SaParams, Solver, Strategy};
use crate::confidence_fn::{Builtin, ComponentModel, ConfidenceExpr};
use crate::error::{Error, Result};
use crate::fault_tree::{failure_prob, random_ft, FaultTree};
use crate::round_sig;

/// Strategies compared by both studies, in output order.
pub const STRATEGIES: [Strategy; 3] = [Strategy::Sa, Strategy::Proportional, Strategy::Uniform];

fn default_leaves() -> usize {
    6
}

fn default_family() -> Builtin {
    Builtin::DEFAULT_EXPONENTIAL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rq1Config {
    pub n_fts: usize,
    pub n_sps: usize,
    /// Already-spent resources per component are drawn uniformly from `[low, high)`.
    pub sp_range: (f64, f64),
    pub budgets: Vec<f64>,
    #[serde(default = "default_leaves")]
    pub ft_leaves: usize,
    #[serde(default = "default_family")]
    pub conf_family: Builtin,
    pub seed: u64,
    #[serde(default)]
    pub sa: SaParams,
}

impl Rq1Config {
    /// 20 trees × 10 profiles; small enough for a test run.
    pub fn desk(seed: u64) -> Self {
        Rq1Config {
            n_fts: 20,
            n_sps: 10,
            sp_range: (100.0, 300.0),
            budgets: vec![1.0, 10.0, 100.0, 1000.0],
            ft_leaves: default_leaves(),
            conf_family: default_family(),
            seed,
            sa: SaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.n_fts, self.n_sps, self.sp_range, &self.budgets, self.ft_leaves)?;
        self.conf_family.validate()?;
        self.sa.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rq2Config {
    pub n_fts: usize,
    pub n_sps: usize,
    /// Fault distributions seeded per instance.
    pub n_fds: usize,
    /// Testing repetitions per fault distribution.
    pub n_runs: usize,
    pub sp_range: (f64, f64),
    pub budgets: Vec<f64>,
    /// Resources consumed by one full test.
    pub test_cost: f64,
    /// Per-fault probability that one test finds it, and that it fires in operation.
    pub observability: f64,
    #[serde(default = "default_leaves")]
    pub ft_leaves: usize,
    #[serde(default = "default_family")]
    pub conf_family: Builtin,
    pub seed: u64,
    #[serde(default)]
    pub sa: SaParams,
}

impl Rq2Config {
    /// 5 trees × 5 profiles × 20 fault distributions × 20 runs.
    pub fn desk(seed: u64) -> Self {
        Rq2Config {
            n_fts: 5,
            n_sps: 5,
            n_fds: 20,
            n_runs: 20,
            sp_range: (10.0, 70.0),
            budgets: vec![60.0, 600.0],
            test_cost: 10.0,
            observability: 0.1,
            ft_leaves: default_leaves(),
            conf_family: default_family(),
            seed,
            sa: SaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.n_fts, self.n_sps, self.sp_range, &self.budgets, self.ft_leaves)?;
        if self.n_fds == 0 || self.n_runs == 0 {
            return Err(Error::BadParameter("n_fds and n_runs must be positive".into()));
        }
        check_testing_params(self.test_cost, self.observability)?;
        self.conf_family.validate()?;
        self.sa.validate()
    }
}

fn validate_common(n_fts: usize, n_sps: usize, (low, high): (f64, f64), budgets: &[f64], leaves: usize) -> Result<()> {
    if n_fts == 0 || n_sps == 0 {
        return Err(Error::BadParameter("n_fts and n_sps must be positive".into()));
    }
    if !(low >= 0.0 && low < high && high.is_finite()) {
        return Err(Error::BadParameter(format!(
            "sp_range must satisfy 0 <= low < high, got [{low}, {high}]"
        )));
    }
    if budgets.is_empty() {
        return Err(Error::BadParameter("budgets must not be empty".into()));
    }
    if budgets.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
        return Err(Error::BadParameter("budgets must be finite and non-negative".into()));
    }
    if budgets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadParameter("budgets must be sorted ascending".into()));
    }
    if leaves == 0 {
        return Err(Error::BadParameter("ft_leaves must be positive".into()));
    }
    Ok(())
}

fn check_testing_params(test_cost: f64, observability: f64) -> Result<()> {
    if !(test_cost > 0.0 && test_cost.is_finite()) {
        return Err(Error::BadParameter(format!("test_cost must be positive, got {test_cost}")));
    }
    if !(observability > 0.0 && observability <= 1.0) {
        return Err(Error::BadParameter(format!("observability must lie in (0, 1], got {observability}")));
    }
    Ok(())
}

/// Hidden fault counts per component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultAssignment {
    pub faults: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub budget: f64,
    pub strategy: Strategy,
    /// Mean system reliability over instances.
    pub score: f64,
    /// `(r' − r) / (1 − r) · 100` against the `sa` row at the same budget.
    pub rel_diff_pct: f64,
    /// Standard error of `score` over instances.
    pub stderr: f64,
    pub n_instances: usize,
}

/// Relative difference in percent of remaining unreliability closed:
/// `(r' − r) / (1 − r) · 100`. When `r = 1` the result is 0 if `r' = 1`
/// and `−∞` otherwise.
pub fn relative_difference(r: f64, r_prime: f64) -> f64 {
    if r == 1.0 {
        return if r_prime == 1.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    (r_prime - r) / (1.0 - r) * 100.0
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable per-task seed from the global seed and a path of indices.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(seed), |h, x| splitmix64(h ^ splitmix64(*x)))
}

// Tags keeping the seed families of different purposes apart.
const TAG_FT: u64 = 1;
const TAG_SP: u64 = 2;
const TAG_SA: u64 = 3;
const TAG_FD: u64 = 4;
const TAG_RUN: u64 = 5;

fn sample_sp(ft: &FaultTree, range: (f64, f64), seed: u64) -> BTreeMap<String, f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ft.basic_events()
        .into_iter()
        .map(|n| (n.to_string(), rng.random_range(range.0..range.1)))
        .collect()
}

fn build_problem(ft: &FaultTree, sp: &BTreeMap<String, f64>, family: &ConfidenceExpr) -> Result<AllocationProblem> {
    let comps = sp
        .iter()
        .map(|(n, s)| ComponentModel::new(n.clone(), family.clone(), *s))
        .collect::<Result<Vec<_>>>()?;
    AllocationProblem::new(ft.clone(), comps, 0.0)
}

fn solver(strategy: Strategy, sa: SaParams, seed: u64) -> Solver {
    match strategy {
        Strategy::Sa => Solver::Sa { params: sa, seed },
        Strategy::Proportional => Solver::Proportional,
        Strategy::Uniform => Solver::Uniform,
        Strategy::Grid => unreachable!("grid is not an experiment strategy"),
    }
}

/// Per-instance scores, indexed `[budget][strategy]`.
type InstanceScores = Vec<[f64; STRATEGIES.len()]>;

fn instance_indices(n_fts: usize, n_sps: usize) -> Vec<(u64, u64)> {
    (0..n_fts as u64)
        .flat_map(|f| (0..n_sps as u64).map(move |s| (f, s)))
        .collect()
}

pub fn run_rq1(cfg: &Rq1Config) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let family = cfg.conf_family.expr()?;
    let fts: Vec<FaultTree> = (0..cfg.n_fts as u64)
        .map(|f| random_ft(cfg.ft_leaves, derive_seed(cfg.seed, &[TAG_FT, f])))
        .collect();
    let scores = instance_indices(cfg.n_fts, cfg.n_sps)
        .into_par_iter()
        .map(|(f, s)| {
            let ft = &fts[f as usize];
            let sp = sample_sp(ft, cfg.sp_range, derive_seed(cfg.seed, &[TAG_SP, f, s]));
            let base = build_problem(ft, &sp, &family)?;
            let sa_seed = derive_seed(cfg.seed, &[TAG_SA, f, s]);
            cfg.budgets
                .iter()
                .map(|b| {
                    let problem = base.with_budget(*b)?;
                    let mut row = [0.0; STRATEGIES.len()];
                    for (slot, st) in row.iter_mut().zip(STRATEGIES) {
                        *slot = solver(st, cfg.sa, sa_seed).solve(&problem)?.predicted_after;
                    }
                    Ok(row)
                })
                .collect::<Result<InstanceScores>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("rq1", &cfg.budgets, &scores))
}

/// Samples a fault count per component with `P(N = k) = (1 − c)^k · c`,
/// where `c` is the component's current confidence. Mean `(1 − c) / c`.
pub fn seed_faults(sp: &BTreeMap<String, f64>, family: &ConfidenceExpr, rng_seed: u64) -> Result<FaultAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut faults = BTreeMap::new();
    for (name, spent) in sp {
        let c = family.evaluate(*spent)?.value;
        if c <= 0.0 {
            return Err(Error::DegenerateConfidence(name.clone()));
        }
        let dist = Geometric::new(c).map_err(|e| Error::BadParameter(e.to_string()))?;
        faults.insert(name.clone(), dist.sample(&mut rng));
    }
    Ok(FaultAssignment { faults })
}

/// Probability that one fault survives testing with `resources`:
/// `⌊r / cost⌋` full tests, then one partial test whose detection
/// probability is scaled by the leftover fraction of a test.
pub fn survival_probability(resources: f64, test_cost: f64, observability: f64) -> f64 {
    let full = (resources / test_cost).floor();
    let leftover = resources - full * test_cost;
    let mut p = (1.0 - observability).powf(full);
    if leftover > 0.0 {
        p *= 1.0 - observability * leftover / test_cost;
    }
    p
}

/// Surviving fault counts after testing each component with its share of
/// the split. Components absent from `split` are not tested.
pub fn simulate_testing(
    fa: &FaultAssignment,
    split: &BTreeMap<String, f64>,
    test_cost: f64,
    observability: f64,
    rng_seed: u64,
) -> Result<FaultAssignment> {
    check_testing_params(test_cost, observability)?;
    let mut faults = BTreeMap::new();
    for (idx, (name, n)) in fa.faults.iter().enumerate() {
        let r = split.get(name).copied().unwrap_or(0.0);
        if !(r >= 0.0) {
            return Err(Error::BadParameter(format!("split for `{name}` is negative: {r}")));
        }
        let survive = survival_probability(r, test_cost, observability);
        // One stream per component keeps draws aligned across strategies.
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(idx as u64);
        let left = if *n == 0 || survive >= 1.0 {
            *n
        } else {
            Binomial::new(*n, survive)
                .map_err(|e| Error::BadParameter(e.to_string()))?
                .sample(&mut rng)
        };
        faults.insert(name.clone(), left);
    }
    Ok(FaultAssignment { faults })
}

/// Probability that a component with `n_faults` remaining faults fails in
/// operation: `1 − (1 − observability)^n`.
pub fn component_failure(n_faults: u64, observability: f64) -> f64 {
    1.0 - (1.0 - observability).powf(n_faults as f64)
}

/// Reliability of the system in operation, propagating [`component_failure`]
/// through the fault tree.
pub fn system_reliability(ft: &FaultTree, fa: &FaultAssignment, observability: f64) -> Result<f64> {
    let fail: BTreeMap<String, f64> = fa
        .faults
        .iter()
        .map(|(n, k)| (n.clone(), component_failure(*k, observability)))
        .collect();
    Ok(1.0 - failure_prob(ft, &fail)?)
}

pub fn run_rq2(cfg: &Rq2Config) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let family = cfg.conf_family.expr()?;
    let fts: Vec<FaultTree> = (0..cfg.n_fts as u64)
        .map(|f| random_ft(cfg.ft_leaves, derive_seed(cfg.seed, &[TAG_FT, f])))
        .collect();
    let scores = instance_indices(cfg.n_fts, cfg.n_sps)
        .into_par_iter()
        .map(|(f, s)| {
            let ft = &fts[f as usize];
            let sp = sample_sp(ft, cfg.sp_range, derive_seed(cfg.seed, &[TAG_SP, f, s]));
            let base = build_problem(ft, &sp, &family)?;
            let sa_seed = derive_seed(cfg.seed, &[TAG_SA, f, s]);
            let fds = (0..cfg.n_fds as u64)
                .map(|d| seed_faults(&sp, &family, derive_seed(cfg.seed, &[TAG_FD, f, s, d])))
                .collect::<Result<Vec<_>>>()?;
            cfg.budgets
                .iter()
                .map(|b| {
                    let problem = base.with_budget(*b)?;
                    let mut row = [0.0; STRATEGIES.len()];
                    for (slot, st) in row.iter_mut().zip(STRATEGIES) {
                        let split = solver(st, cfg.sa, sa_seed).solve(&problem)?.split;
                        let mut acc = NeumaierSum::default();
                        for (d, fd) in fds.iter().enumerate() {
                            for k in 0..cfg.n_runs as u64 {
                                let run_seed = derive_seed(cfg.seed, &[TAG_RUN, f, s, d as u64, k]);
                                let left = simulate_testing(fd, &split, cfg.test_cost, cfg.observability, run_seed)?;
                                acc.add(system_reliability(ft, &left, cfg.observability)?);
                            }
                        }
                        *slot = acc.total() / (cfg.n_fds * cfg.n_runs) as f64;
                    }
                    Ok(row)
                })
                .collect::<Result<InstanceScores>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("rq2", &cfg.budgets, &scores))
}

#[derive(Debug, Default, Clone, Copy)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Mean and standard error of the mean.
fn mean_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64, usize) {
    let mut acc = NeumaierSum::default();
    let mut n = 0usize;
    for x in xs.clone() {
        acc.add(x);
        n += 1;
    }
    let mean = acc.total() / n as f64;
    if n < 2 {
        return (mean, 0.0, n);
    }
    let mut sq = NeumaierSum::default();
    for x in xs {
        sq.add((x - mean) * (x - mean));
    }
    let var = sq.total() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt(), n)
}

fn aggregate(experiment: &str, budgets: &[f64], scores: &[InstanceScores]) -> Vec<ExperimentRow> {
    let mut rows = Vec::with_capacity(budgets.len() * STRATEGIES.len());
    for (bi, budget) in budgets.iter().enumerate() {
        let stats: Vec<_> = (0..STRATEGIES.len())
            .map(|si| mean_stderr(scores.iter().map(move |inst| inst[bi][si])))
            .collect();
        let reference = stats[0].0;
        for (st, (mean, stderr, n)) in STRATEGIES.into_iter().zip(stats) {
            rows.push(ExperimentRow {
                experiment: experiment.to_string(),
                budget: *budget,
                strategy: st,
                score: mean,
                rel_diff_pct: relative_difference(reference, mean),
                stderr,
                n_instances: n,
            });
        }
    }
    rows
}

/// Writes rows as CSV with numbers rounded to 9 significant digits.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(ExperimentRow {
            experiment: row.experiment.clone(),
            budget: round_sig(row.budget),
            strategy: row.strategy,
            score: round_sig(row.score),
            rel_diff_pct: round_sig(row.rel_diff_pct),
            stderr: round_sig(row.stderr),
            n_instances: row.n_instances,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: &str) -> Result<Vec<ExperimentRow>> {
    csv::Reader::from_reader(input.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence_fn::builtin;
    use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};

    fn half() -> ConfidenceExpr {
        ConfidenceExpr::constant(0.5)
    }

    fn one_component(name: &str, n: u64) -> FaultAssignment {
        FaultAssignment { faults: [(name.to_string(), n)].into_iter().collect() }
    }

    fn split(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
    }

    #[test]
    fn relative_difference_examples() {
        assert!((relative_difference(0.9812, 0.9711) - (-53.7234)).abs() < 1e-3);
        assert_eq!(relative_difference(0.5, 0.5), 0.0);
        assert_eq!(relative_difference(1.0, 1.0), 0.0);
        assert_eq!(relative_difference(1.0, 0.9), f64::NEG_INFINITY);
    }

    #[test]
    fn survival_examples() {
        assert_eq!(survival_probability(0.0, 10.0, 0.1), 1.0);
        assert_eq!(survival_probability(10.0, 10.0, 0.1), 0.9);
        assert!((survival_probability(25.0, 10.0, 0.1) - 0.7695).abs() < 1e-15);
    }

    #[test]
    fn no_budget_keeps_faults() {
        let fa = one_component("x", 7);
        assert_eq!(simulate_testing(&fa, &split(&[]), 10.0, 0.1, 0).unwrap(), fa);
        for seed in 0..20 {
            assert_eq!(simulate_testing(&fa, &split(&[("x", 0.0)]), 10.0, 0.1, seed).unwrap(), fa);
        }
    }

    #[test]
    fn single_fault_survival_frequency() {
        for (r, p) in [(10.0, 0.9), (25.0, 0.7695)] {
            let trials = 40_000;
            let fa = one_component("x", 1);
            let survived = (0..trials)
                .filter(|s| simulate_testing(&fa, &split(&[("x", r)]), 10.0, 0.1, *s).unwrap().faults["x"] == 1)
                .count();
            let freq = survived as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((freq - p).abs() < 4.0 * se, "r={r}: {freq} vs {p}");
        }
    }

    #[test]
    fn system_reliability_examples() {
        let single = FaultTree::basic("x");
        assert!((system_reliability(&single, &one_component("x", 1), 0.1).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(system_reliability(&single, &one_component("x", 0), 0.1).unwrap(), 1.0);
        let and = FaultTree::and(vec![FaultTree::basic("a"), FaultTree::basic("b")]);
        let fa = FaultAssignment { faults: [("a".to_string(), 1), ("b".to_string(), 1)].into_iter().collect() };
        assert!((system_reliability(&and, &fa, 0.1).unwrap() - 0.99).abs() < 1e-15);
    }

    #[test]
    fn geometric_fault_seeding() {
        let one = seed_faults(&split(&[("x", 3.0)]), &ConfidenceExpr::constant(1.0), 9).unwrap();
        assert_eq!(one.faults["x"], 0);
        let zero = seed_faults(&split(&[("x", 3.0)]), &ConfidenceExpr::constant(0.0), 9);
        assert!(matches!(zero, Err(Error::DegenerateConfidence(ref n)) if n == "x"));

        let trials = 40_000u64;
        let counts: Vec<u64> = (0..trials)
            .map(|s| seed_faults(&split(&[("x", 0.0)]), &half(), s).unwrap().faults["x"])
            .collect();
        let mean = counts.iter().sum::<u64>() as f64 / trials as f64;
        let p0 = counts.iter().filter(|k| **k == 0).count() as f64 / trials as f64;
        let p1 = counts.iter().filter(|k| **k == 1).count() as f64 / trials as f64;
        // Variance of the count is (1 − c)/c² = 2.
        assert!((mean - 1.0).abs() < 4.0 * (2.0 / trials as f64).sqrt(), "{mean}");
        assert!((p0 - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt(), "{p0}");
        assert!((p1 - 0.25).abs() < 4.0 * (0.1875 / trials as f64).sqrt(), "{p1}");
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(42, &[1, 0, 0]);
        assert_ne!(a, derive_seed(42, &[1, 0, 1]));
        assert_ne!(a, derive_seed(42, &[1, 1, 0]));
        assert_ne!(a, derive_seed(43, &[1, 0, 0]));
        assert_eq!(a, derive_seed(42, &[1, 0, 0]));
    }

    fn tiny_rq1(budgets: Vec<f64>) -> Rq1Config {
        Rq1Config {
            n_fts: 2,
            n_sps: 2,
            budgets,
            sa: SaParams { iterations: 2000, ..SaParams::default() },
            ..Rq1Config::desk(5)
        }
    }

    #[test]
    fn rq1_zero_budget_is_flat() {
        let rows = run_rq1(&tiny_rq1(vec![0.0])).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.score, rows[0].score);
            assert_eq!(r.rel_diff_pct, 0.0);
            assert_eq!(r.n_instances, 4);
        }
    }

    #[test]
    fn rq1_is_deterministic_and_sa_row_is_reference() {
        let cfg = tiny_rq1(vec![10.0, 100.0]);
        let rows = run_rq1(&cfg).unwrap();
        assert_eq!(rows, run_rq1(&cfg).unwrap());
        for chunk in rows.chunks(3) {
            assert_eq!(chunk[0].strategy, Strategy::Sa);
            assert_eq!(chunk[0].rel_diff_pct, 0.0);
        }
    }

    #[test]
    fn rq2_zero_budget_is_flat() {
        let cfg = Rq2Config {
            n_fts: 2,
            n_sps: 2,
            n_fds: 3,
            n_runs: 2,
            budgets: vec![0.0],
            ..Rq2Config::desk(1)
        };
        let rows = run_rq2(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.score == rows[0].score && r.rel_diff_pct == 0.0));
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.score)));
    }

    #[test]
    fn csv_format() {
        let rows = run_rq1(&tiny_rq1(vec![10.0])).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("experiment,budget,strategy,score,rel_diff_pct,stderr,n_instances"));
        assert!(lines.next().unwrap().starts_with("rq1,10.0,sa,"));
        let back = read_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in back.iter().zip(&rows) {
            assert_eq!(a.score, round_sig(b.score));
        }
    }

    #[test]
    fn config_validation() {
        let bad = [
            Rq1Config { sp_range: (300.0, 100.0), ..Rq1Config::desk(0) },
            Rq1Config { budgets: vec![10.0, 1.0], ..Rq1Config::desk(0) },
            Rq1Config { budgets: vec![], ..Rq1Config::desk(0) },
            Rq1Config { n_fts: 0, ..Rq1Config::desk(0) },
        ];
        for cfg in bad {
            assert!(matches!(run_rq1(&cfg), Err(Error::BadParameter(_))), "{cfg:?}");
        }
        let bad2 = Rq2Config { observability: 0.0, ..Rq2Config::desk(0) };
        assert!(matches!(run_rq2(&bad2), Err(Error::BadParameter(_))));
    }

    #[test]
    fn config_json() {
        let json = r#"{"n_fts": 3, "n_sps": 2, "sp_range": [100, 300], "budgets": [1, 10], "seed": 7}"#;
        let cfg: Rq1Config = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.ft_leaves, 6);
        assert_eq!(cfg.conf_family, Builtin::DEFAULT_EXPONENTIAL);
        assert_eq!(cfg.sa, SaParams::default());
        let back: Rq1Config = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let rq2 = Rq2Config::desk(3);
        let back: Rq2Config = serde_json::from_str(&serde_json::to_string(&rq2).unwrap()).unwrap();
        assert_eq!(back, rq2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn testing_never_adds_faults(n in 0u64..50, r in 0.0..200.0f64, obs in 0.01..1.0f64, seed in any::<u64>()) {
            let fa = one_component("x", n);
            let left = simulate_testing(&fa, &split(&[("x", r)]), 10.0, obs, seed).unwrap();
            prop_assert!(left.faults["x"] <= n);
        }

        #[test]
        fn system_reliability_in_unit_interval(seed in any::<u64>(), counts in proptest::collection::vec(0u64..20, 5)) {
            let ft = random_ft(5, seed);
            let fa = FaultAssignment {
                faults: ft.basic_events().into_iter().map(String::from).zip(counts).collect(),
            };
            let r = system_reliability(&ft, &fa, 0.1).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
        }

        #[test]
        fn seeded_faults_cover_every_component(seed in any::<u64>()) {
            let family = builtin(Builtin::DEFAULT_EXPONENTIAL).unwrap();
            let sp = split(&[("a", 10.0), ("b", 40.0), ("c", 70.0)]);
            let fa = seed_faults(&sp, &family, seed).unwrap();
            prop_assert!(fa.faults.keys().eq(sp.keys()));
        }
    }
}
