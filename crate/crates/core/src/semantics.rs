//! Probabilistic semantics over independent contexts.
//!
//! A context assigns each atom an independent Bernoulli variable. The
//! semantics of a formula is the probability that it evaluates to `⊤`, and
//! `φ : (t, f)` holds when that probability lies in `[t, 1 − f]`. Everything
//! here is computed exactly by enumerating all `2^n` assignments of the
//! formula's atoms, which makes this module the oracle for the rule
//! soundness and independence properties.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::confidence::{Confidence, TOLERANCE};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::proof::ProofTree;

/// Largest number of distinct atoms [`eval_exact`] will enumerate.
pub const MAX_EXACT_ATOMS: usize = 24;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndependentContext {
    probs: BTreeMap<String, f64>,
}

impl IndependentContext {
    pub fn new(probs: BTreeMap<String, f64>) -> Result<Self> {
        for (atom, &p) in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability {
                    atom: atom.clone(),
                    p,
                });
            }
        }
        Ok(IndependentContext { probs })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(a, p)| (a.to_string(), p)).collect())
    }

    pub fn prob(&self, atom: &str) -> Option<f64> {
        self.probs.get(atom).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemanticsResult {
    pub p_true: f64,
}

/// A subset of `{⊤, ⊥}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruthSet {
    pub top: bool,
    pub bottom: bool,
}

impl TruthSet {
    pub const EMPTY: TruthSet = TruthSet {
        top: false,
        bottom: false,
    };
    pub const TOP: TruthSet = TruthSet {
        top: true,
        bottom: false,
    };
    pub const BOTTOM: TruthSet = TruthSet {
        top: false,
        bottom: true,
    };
    pub const BOTH: TruthSet = TruthSet {
        top: true,
        bottom: true,
    };
    pub const ALL: [TruthSet; 4] = [Self::EMPTY, Self::TOP, Self::BOTTOM, Self::BOTH];

    pub fn contains(&self, value: bool) -> bool {
        if value {
            self.top
        } else {
            self.bottom
        }
    }
}

/// Formula with atoms replaced by bit positions.
enum Compiled {
    Var(u32),
    Const(bool),
    Imp(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, mask: u32) -> bool {
        match self {
            Compiled::Var(i) => mask >> i & 1 == 1,
            Compiled::Const(b) => *b,
            Compiled::Imp(l, r) => !l.eval(mask) || r.eval(mask),
        }
    }
}

/// Atom order and probabilities for an enumeration.
struct Space {
    index: BTreeMap<String, u32>,
    probs: Vec<f64>,
}

impl Space {
    fn new<'a>(atoms: impl IntoIterator<Item = &'a str>, ctx: &IndependentContext) -> Result<Self> {
        let atoms: BTreeSet<&str> = atoms.into_iter().collect();
        if atoms.len() > MAX_EXACT_ATOMS {
            return Err(Error::TooManyAtoms {
                count: atoms.len(),
                max: MAX_EXACT_ATOMS,
            });
        }
        let mut index = BTreeMap::new();
        let mut probs = Vec::with_capacity(atoms.len());
        for (i, atom) in atoms.into_iter().enumerate() {
            let p = ctx
                .prob(atom)
                .ok_or_else(|| Error::UnknownAtom(atom.to_string()))?;
            index.insert(atom.to_string(), i as u32);
            probs.push(p);
        }
        Ok(Space { index, probs })
    }

    fn compile(&self, phi: &Formula) -> Compiled {
        match phi {
            Formula::Atom(name) => Compiled::Var(self.index[name]),
            Formula::Top => Compiled::Const(true),
            Formula::Bottom => Compiled::Const(false),
            Formula::Implies(l, r) => {
                Compiled::Imp(Box::new(self.compile(l)), Box::new(self.compile(r)))
            }
        }
    }

    /// Calls `visit(mask, weight)` for every assignment, bit `i` set meaning atom `i` is `⊤`.
    fn enumerate(&self, mut visit: impl FnMut(u32, f64)) {
        fn go(probs: &[f64], depth: usize, mask: u32, weight: f64, visit: &mut impl FnMut(u32, f64)) {
            if depth == probs.len() {
                visit(mask, weight);
                return;
            }
            let p = probs[depth];
            go(probs, depth + 1, mask, weight * (1.0 - p), visit);
            go(probs, depth + 1, mask | 1 << depth, weight * p, visit);
        }
        go(&self.probs, 0, 0, 1.0, &mut visit);
    }
}

/// Exact probability that `phi` is `⊤` under independent atoms.
pub fn eval_exact(phi: &Formula, ctx: &IndependentContext) -> Result<SemanticsResult> {
    let space = Space::new(phi.atoms(), ctx)?;
    let compiled = space.compile(phi);
    let mut p_true = 0.0;
    space.enumerate(|mask, w| {
        if compiled.eval(mask) {
            p_true += w;
        }
    });
    Ok(SemanticsResult {
        p_true: p_true.clamp(0.0, 1.0),
    })
}

/// Whether `phi : c` holds, i.e. the semantics lies in `[t, 1 − f]` up to [`TOLERANCE`].
pub fn holds(phi: &Formula, c: Confidence, ctx: &IndependentContext) -> Result<bool> {
    let p = eval_exact(phi, ctx)?.p_true;
    let (lo, hi) = c.interval();
    Ok(p >= lo - TOLERANCE && p <= hi + TOLERANCE)
}

/// Checks `P(φ ∈ S ∧ ψ ∈ T) = P(φ ∈ S)·P(ψ ∈ T)` for atom-disjoint formulas,
/// with the joint and both marginals obtained by enumeration.
pub fn check_independence_lemma(
    phi: &Formula,
    psi: &Formula,
    ctx: &IndependentContext,
    s: TruthSet,
    t: TruthSet,
) -> Result<bool> {
    let phi_atoms = phi.atoms();
    let psi_atoms = psi.atoms();
    let shared: Vec<String> = phi_atoms
        .intersection(&psi_atoms)
        .map(|a| a.to_string())
        .collect();
    if !shared.is_empty() {
        return Err(Error::SharedAtoms(shared));
    }
    let space = Space::new(phi_atoms.union(&psi_atoms).copied(), ctx)?;
    let cphi = space.compile(phi);
    let cpsi = space.compile(psi);
    let (mut joint, mut p_phi, mut p_psi) = (0.0, 0.0, 0.0);
    space.enumerate(|mask, w| {
        let in_s = s.contains(cphi.eval(mask));
        let in_t = t.contains(cpsi.eval(mask));
        if in_s {
            p_phi += w;
        }
        if in_t {
            p_psi += w;
        }
        if in_s && in_t {
            joint += w;
        }
    });
    Ok((joint - p_phi * p_psi).abs() <= TOLERANCE)
}

/// Evaluates a proof's conclusion against the semantics.
///
/// Requires the preconditions under which intro-only proofs are sound: a
/// linear conclusion formula and no elimination rules. If some hypothesis
/// of the context does not hold in `ctx`, the sequent holds vacuously.
pub fn check_soundness(tree: &ProofTree, ctx: &IndependentContext) -> Result<bool> {
    if !tree.root.formula.is_linear() {
        return Err(Error::NonLinearFormula);
    }
    if let Some(rule) = tree.uses_elimination() {
        return Err(Error::EliminationRulePresent(rule));
    }
    for (hyp, c) in tree.context.iter() {
        if !holds(hyp, *c, ctx)? {
            return Ok(true);
        }
    }
    holds(&tree.root.formula, tree.root.confidence, ctx)
}

/// Monte Carlo estimate of the semantics, for formulas beyond the
/// enumeration bound. Diagnostic use only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// Whether `p` is within three standard errors of the estimate.
    pub fn agrees_with(&self, p: f64) -> bool {
        (self.mean - p).abs() <= 3.0 * self.stderr.max(f64::EPSILON)
    }
}

pub fn eval_monte_carlo(
    phi: &Formula,
    ctx: &IndependentContext,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::BadParameter("samples must be positive".into()));
    }
    let atoms: Vec<&str> = phi.atoms().into_iter().collect();
    let probs = atoms
        .iter()
        .map(|a| ctx.prob(a).ok_or_else(|| Error::UnknownAtom(a.to_string())))
        .collect::<Result<Vec<f64>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valuation: BTreeMap<&str, bool> = BTreeMap::new();
    let mut hits = 0usize;
    for _ in 0..samples {
        for (a, p) in atoms.iter().zip(&probs) {
            valuation.insert(a, rng.random_bool(*p));
        }
        if phi.eval_bool(&valuation).expect("all atoms assigned") {
            hits += 1;
        }
    }
    let mean = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        mean,
        stderr: (mean * (1.0 - mean) / samples as f64).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{infer_confidences, ProofShape};
    use crate::rules::Rule;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn ctx(pairs: &[(&str, f64)]) -> IndependentContext {
        IndependentContext::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn top_is_certain() {
        assert_eq!(eval_exact(&Formula::Top, &ctx(&[])).unwrap().p_true, 1.0);
        assert_eq!(eval_exact(&Formula::Bottom, &ctx(&[])).unwrap().p_true, 0.0);
    }

    #[test]
    fn independent_product() {
        let p = eval_exact(&Formula::and(a("A"), a("B")), &ctx(&[("A", 0.5), ("B", 0.5)]))
            .unwrap()
            .p_true;
        assert!((p - 0.25).abs() < TOLERANCE);
    }

    #[test]
    fn mixed_formula() {
        let f = Formula::and(Formula::or(a("A"), a("B")), Formula::or(a("C"), a("D")));
        let c = ctx(&[("A", 0.9), ("B", 0.9), ("C", 0.9), ("D", 0.9)]);
        assert!((eval_exact(&f, &c).unwrap().p_true - 0.9801).abs() < TOLERANCE);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            eval_exact(&a("Q"), &ctx(&[])),
            Err(Error::UnknownAtom(_))
        ));
        let names: Vec<String> = (0..25).map(|i| format!("x{i}")).collect();
        let big = names
            .iter()
            .skip(1)
            .fold(a(&names[0]), |acc, n| Formula::or(acc, a(n)));
        let probs = names.iter().map(|n| (n.clone(), 0.5)).collect();
        let c = IndependentContext::new(probs).unwrap();
        assert!(matches!(
            eval_exact(&big, &c),
            Err(Error::TooManyAtoms { count: 25, .. })
        ));
        assert!(IndependentContext::from_pairs([("A", 1.5)]).is_err());
    }

    #[test]
    fn holds_examples() {
        let c = ctx(&[("A", 0.6)]);
        assert!(holds(&a("A"), Confidence::UNKNOWN, &c).unwrap());
        assert!(holds(&a("A"), Confidence::new(0.5, 0.2).unwrap(), &c).unwrap());
        assert!(!holds(&a("A"), Confidence::new(0.7, 0.0).unwrap(), &c).unwrap());
    }

    #[test]
    fn independence_examples() {
        let c = ctx(&[("A", 0.3), ("B", 0.7), ("C", 0.2), ("D", 0.55)]);
        assert!(check_independence_lemma(&a("A"), &a("B"), &c, TruthSet::TOP, TruthSet::TOP).unwrap());
        let phi = Formula::and(a("A"), a("B"));
        let psi = Formula::or(a("C"), a("D"));
        for s in TruthSet::ALL {
            for t in TruthSet::ALL {
                assert!(check_independence_lemma(&phi, &psi, &c, s, t).unwrap());
            }
        }
        assert!(matches!(
            check_independence_lemma(&a("A"), &Formula::or(a("A"), a("B")), &c, TruthSet::TOP, TruthSet::TOP),
            Err(Error::SharedAtoms(_))
        ));
    }

    #[test]
    fn negation_is_complement() {
        let f = Formula::implies(a("A"), Formula::or(a("B"), a("C")));
        let c = ctx(&[("A", 0.35), ("B", 0.2), ("C", 0.6)]);
        let p = eval_exact(&f, &c).unwrap().p_true;
        let q = eval_exact(&Formula::not(f), &c).unwrap().p_true;
        assert!((p + q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn soundness_of_software_hardware_example() {
        let shape = ProofShape::and_i(ProofShape::ax("software"), ProofShape::ax("hardware"));
        let leaves = [
            ("software".to_string(), Confidence::new(0.5, 0.2).unwrap()),
            ("hardware".to_string(), Confidence::new(0.3, 0.01).unwrap()),
        ]
        .into_iter()
        .collect();
        let tree = infer_confidences(&shape, &leaves).unwrap();
        let c = ctx(&[("software", 0.6), ("hardware", 0.4)]);
        assert!(check_soundness(&tree, &c).unwrap());
    }

    #[test]
    fn soundness_rejects_elimination_and_nonlinear() {
        let leaves = [
            ("A".to_string(), Confidence::new(0.8, 0.1).unwrap()),
            ("B".to_string(), Confidence::new(0.5, 0.1).unwrap()),
        ]
        .into_iter()
        .collect();
        let imp = ProofShape::imp_i(ProofShape::ax("A"), ProofShape::ax("B"));
        let mp = ProofShape::ImpEl(Box::new(imp), Box::new(ProofShape::ax("A")));
        let tree = infer_confidences(&mp, &leaves).unwrap();
        let c = ctx(&[("A", 0.85), ("B", 0.6)]);
        assert!(matches!(
            check_soundness(&tree, &c),
            Err(Error::EliminationRulePresent(Rule::ImpEl))
        ));
        let nonlin = ProofShape::and_i(ProofShape::ax("A"), ProofShape::ax("A"));
        let tree = infer_confidences(&nonlin, &leaves).unwrap();
        assert!(matches!(
            check_soundness(&tree, &c),
            Err(Error::NonLinearFormula)
        ));
    }

    #[test]
    fn monte_carlo_agrees_with_enumeration() {
        let f = Formula::and(Formula::or(a("A"), a("B")), Formula::not(a("C")));
        let c = ctx(&[("A", 0.3), ("B", 0.4), ("C", 0.25)]);
        let exact = eval_exact(&f, &c).unwrap().p_true;
        let est = eval_monte_carlo(&f, &c, 20_000, 7).unwrap();
        assert!(est.agrees_with(exact), "{est:?} vs {exact}");
    }
}
