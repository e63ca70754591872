//! Test resource allocation: split a verification budget across the basic
//! events of a fault tree so that the predicted system reliability is as
//! high as possible.
//!
//! Every solver spends the whole budget. The objective is non-decreasing in
//! each component's resources, so leaving budget unspent never helps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confidence_fn::ComponentModel;
use crate::error::{Error, Result};
use crate::fault_tree::{reliability_fn, FaultTree, ReliabilityPolynomial};
use crate::round_sig;

/// Upper bound on the number of simplex lattice points [`solve_grid`] visits.
pub const MAX_GRID_POINTS: u128 = 1 << 24;

#[derive(Debug, Clone)]
pub struct AllocationProblem {
    ft: FaultTree,
    poly: ReliabilityPolynomial,
    /// Same order as `poly.leaves()`.
    components: Vec<ComponentModel>,
    budget: f64,
}

impl AllocationProblem {
    /// Components must match the fault tree's basic events one to one by name.
    pub fn new(ft: FaultTree, components: Vec<ComponentModel>, budget: f64) -> Result<Self> {
        ft.validate()?;
        check_budget(budget)?;
        let poly = reliability_fn(&ft);
        let mut by_name: BTreeMap<String, ComponentModel> = BTreeMap::new();
        for c in components {
            if by_name.contains_key(&c.name) {
                return Err(Error::ComponentMismatch(format!("component `{}` listed twice", c.name)));
            }
            by_name.insert(c.name.clone(), c);
        }
        let mut ordered = Vec::with_capacity(poly.leaves().len());
        for leaf in poly.leaves() {
            match by_name.remove(leaf) {
                Some(c) => ordered.push(c),
                None => {
                    return Err(Error::ComponentMismatch(format!(
                        "no component entry for basic event `{leaf}`"
                    )))
                }
            }
        }
        if let Some(extra) = by_name.keys().next() {
            return Err(Error::ComponentMismatch(format!(
                "component `{extra}` is not a basic event of the fault tree"
            )));
        }
        Ok(AllocationProblem { ft, poly, components: ordered, budget })
    }

    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        check_budget(budget)?;
        Ok(AllocationProblem { budget, ..self.clone() })
    }

    pub fn fault_tree(&self) -> &FaultTree {
        &self.ft
    }

    /// Components in basic-event order.
    pub fn components(&self) -> &[ComponentModel] {
        &self.components
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Objective on a split given in component order.
    pub fn objective_indexed(&self, split: &[f64]) -> Result<f64> {
        if split.len() != self.components.len() {
            return Err(Error::ComponentMismatch(format!(
                "split has {} entries for {} components",
                split.len(),
                self.components.len()
            )));
        }
        let conf = self
            .components
            .iter()
            .zip(split)
            .map(|(c, x)| c.confidence_after(*x))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.poly.eval_indexed(&conf))
    }

    pub fn objective(&self, split: &BTreeMap<String, f64>) -> Result<f64> {
        if split.len() != self.components.len() {
            return Err(Error::ComponentMismatch(format!(
                "split has {} entries for {} components",
                split.len(),
                self.components.len()
            )));
        }
        let ordered = self
            .components
            .iter()
            .map(|c| {
                let x = *split
                    .get(&c.name)
                    .ok_or_else(|| Error::ComponentMismatch(format!("split has no entry for `{}`", c.name)))?;
                if !(x >= 0.0) {
                    return Err(Error::BadParameter(format!("split for `{}` is negative: {x}", c.name)));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        self.objective_indexed(&ordered)
    }

    /// Predicted reliability with no additional resources.
    pub fn baseline(&self) -> Result<f64> {
        self.objective_indexed(&vec![0.0; self.components.len()])
    }

    fn result(&self, strategy: Strategy, split: Vec<f64>) -> Result<AllocationResult> {
        let predicted_before = self.baseline()?;
        let predicted_after = self.objective_indexed(&split)?;
        let split = self
            .components
            .iter()
            .map(|c| c.name.clone())
            .zip(split)
            .collect();
        Ok(AllocationResult { strategy, split, predicted_before, predicted_after })
    }
}

fn check_budget(budget: f64) -> Result<()> {
    if budget >= 0.0 && budget.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("budget must be finite and non-negative, got {budget}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Simulated annealing on the reliability objective.
    Sa,
    Uniform,
    Proportional,
    /// Exhaustive lattice search.
    Grid,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Sa => "sa",
            Strategy::Uniform => "uniform",
            Strategy::Proportional => "proportional",
            Strategy::Grid => "grid",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" => Ok(Strategy::Sa),
            "uniform" => Ok(Strategy::Uniform),
            "proportional" => Ok(Strategy::Proportional),
            "grid" => Ok(Strategy::Grid),
            other => Err(Error::BadParameter(format!(
                "unknown strategy `{other}`, expected sa, uniform, proportional or grid"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationResult {
    pub strategy: Strategy,
    pub split: BTreeMap<String, f64>,
    pub predicted_before: f64,
    pub predicted_after: f64,
}

impl AllocationResult {
    /// Copy with every number rounded to 9 significant digits.
    pub fn rounded(&self) -> Self {
        AllocationResult {
            strategy: self.strategy,
            split: self.split.iter().map(|(k, v)| (k.clone(), round_sig(*v))).collect(),
            predicted_before: round_sig(self.predicted_before),
            predicted_after: round_sig(self.predicted_after),
        }
    }

    pub fn total(&self) -> f64 {
        self.split.values().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaParams {
    pub iterations: usize,
    pub initial_temp: f64,
    /// Temperature multiplier applied after every iteration.
    pub cooling: f64,
    /// Largest move at the first iteration, as a fraction of the budget.
    pub step_start: f64,
    /// Largest move at the last iteration, as a fraction of the budget.
    pub step_end: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams { iterations: 20_000, initial_temp: 1.0, cooling: 0.995, step_start: 0.5, step_end: 1e-6 }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_temp > 0.0 && self.initial_temp.is_finite()) {
            return Err(Error::BadParameter(format!(
                "initial temperature must be positive, got {}",
                self.initial_temp
            )));
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return Err(Error::BadParameter(format!("cooling must lie in (0, 1], got {}", self.cooling)));
        }
        if !(self.step_end > 0.0 && self.step_end <= self.step_start && self.step_start <= 1.0) {
            return Err(Error::BadParameter(format!(
                "steps must satisfy 0 < step_end <= step_start <= 1, got {} and {}",
                self.step_start, self.step_end
            )));
        }
        Ok(())
    }
}

/// Simulated annealing from the uniform split.
///
/// A move transfers `δ ~ U(0, σ·budget)` from one random component to
/// another, clipped so the donor stays non-negative. Worse states are
/// accepted with probability `exp(Δ/T)`. The step scale `σ` decays
/// geometrically from `step_start` to `step_end` independently of `T`, so
/// moves stay large enough to cross the simplex while `T` is still in the
/// range of typical objective differences. The best state seen is returned.
pub fn solve_sa(problem: &AllocationProblem, params: &SaParams, seed: u64) -> Result<AllocationResult> {
    params.validate()?;
    let n = problem.len();
    let budget = problem.budget;
    let mut x = vec![budget / n as f64; n];
    if n < 2 || budget == 0.0 {
        return problem.result(Strategy::Sa, x);
    }
    let comps = &problem.components;
    let mut conf = comps
        .iter()
        .zip(&x)
        .map(|(c, xi)| c.confidence_after(*xi))
        .collect::<Result<Vec<_>>>()?;
    let mut current = problem.poly.eval_indexed(&conf);
    let mut best = current;
    let mut best_x = x.clone();
    let mut temp = params.initial_temp;
    let mut step = params.step_start;
    let step_decay = (params.step_end / params.step_start).powf(1.0 / params.iterations.max(1) as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..params.iterations {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let delta = (rng.random::<f64>() * step * budget).min(x[i]);
        let u: f64 = rng.random();
        if delta > 0.0 {
            let (xi, xj) = (x[i] - delta, x[j] + delta);
            let (old_i, old_j) = (conf[i], conf[j]);
            conf[i] = comps[i].confidence_after(xi)?;
            conf[j] = comps[j].confidence_after(xj)?;
            let candidate = problem.poly.eval_indexed(&conf);
            let gain = candidate - current;
            if gain >= 0.0 || u < (gain / temp).exp() {
                x[i] = xi;
                x[j] = xj;
                current = candidate;
                if current > best {
                    best = current;
                    best_x.copy_from_slice(&x);
                }
            } else {
                conf[i] = old_i;
                conf[j] = old_j;
            }
        }
        temp *= params.cooling;
        step *= step_decay;
    }
    problem.result(Strategy::Sa, best_x)
}

/// Exhaustive search over `{split ≥ 0, Σ split = budget}` on a lattice with
/// spacing at most `step`. Ties keep the first point in lexicographic order.
pub fn solve_grid(problem: &AllocationProblem, step: f64) -> Result<AllocationResult> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadParameter(format!("grid step must be positive, got {step}")));
    }
    let n = problem.len();
    let budget = problem.budget;
    let units = (budget / step - 1e-9).ceil().max(0.0);
    if units > u32::MAX as f64 {
        return Err(Error::TooLarge { points: u128::MAX, max: MAX_GRID_POINTS });
    }
    let units = units as usize;
    let points = lattice_size(units, n);
    if points > MAX_GRID_POINTS {
        return Err(Error::TooLarge { points, max: MAX_GRID_POINTS });
    }
    if units == 0 {
        return problem.result(Strategy::Grid, vec![0.0; n]);
    }
    let unit = budget / units as f64;
    let table = problem
        .components
        .iter()
        .map(|c| (0..=units).map(|k| c.confidence_after(k as f64 * unit)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let mut search = GridSearch {
        poly: &problem.poly,
        table: &table,
        conf: vec![0.0; n],
        idx: vec![0; n],
        best: f64::NEG_INFINITY,
        best_idx: vec![0; n],
    };
    search.descend(0, units);
    let split = search.best_idx.iter().map(|k| *k as f64 * unit).collect();
    problem.result(Strategy::Grid, split)
}

/// Number of ways to write `units` as an ordered sum of `n` non-negative parts.
fn lattice_size(units: usize, n: usize) -> u128 {
    let k = n as u128 - 1;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.saturating_mul(units as u128 + i) / i;
    }
    acc
}

struct GridSearch<'a> {
    poly: &'a ReliabilityPolynomial,
    table: &'a [Vec<f64>],
    conf: Vec<f64>,
    idx: Vec<usize>,
    best: f64,
    best_idx: Vec<usize>,
}

impl GridSearch<'_> {
    fn descend(&mut self, i: usize, remaining: usize) {
        let last = self.table.len() - 1;
        if i == last {
            self.idx[i] = remaining;
            self.conf[i] = self.table[i][remaining];
            let v = self.poly.eval_indexed(&self.conf);
            if v > self.best {
                self.best = v;
                self.best_idx.copy_from_slice(&self.idx);
            }
            return;
        }
        for k in 0..=remaining {
            self.idx[i] = k;
            self.conf[i] = self.table[i][k];
            self.descend(i + 1, remaining - k);
        }
    }
}

pub fn solve_uniform(problem: &AllocationProblem) -> Result<AllocationResult> {
    let n = problem.len();
    problem.result(Strategy::Uniform, vec![problem.budget / n as f64; n])
}

/// Splits the budget in proportion to `1 − c_i`, the current lack of
/// confidence. Falls back to uniform when every component is at 1.
pub fn solve_proportional(problem: &AllocationProblem) -> Result<AllocationResult> {
    let weights = problem
        .components
        .iter()
        .map(|c| Ok(1.0 - c.confidence_after(0.0)?))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        let mut r = solve_uniform(problem)?;
        r.strategy = Strategy::Proportional;
        return Ok(r);
    }
    let split = weights.iter().map(|w| problem.budget * w / total).collect();
    problem.result(Strategy::Proportional, split)
}

/// A solver together with its configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Sa { params: SaParams, seed: u64 },
    Grid { step: f64 },
    Uniform,
    Proportional,
}

impl Solver {
    pub fn strategy(&self) -> Strategy {
        match self {
            Solver::Sa { .. } => Strategy::Sa,
            Solver::Grid { .. } => Strategy::Grid,
            Solver::Uniform => Strategy::Uniform,
            Solver::Proportional => Strategy::Proportional,
        }
    }

    pub fn solve(&self, problem: &AllocationProblem) -> Result<AllocationResult> {
        match self {
            Solver::Sa { params, seed } => solve_sa(problem, params, *seed),
            Solver::Grid { step } => solve_grid(problem, *step),
            Solver::Uniform => solve_uniform(problem),
            Solver::Proportional => solve_proportional(problem),
        }
    }
}
