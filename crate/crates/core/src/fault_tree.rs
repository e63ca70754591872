//! AND/OR fault trees: JSON I/O, classical failure propagation, and the
//! dualizing translation to proof trees.
//!
//! A fault tree describes how faults propagate; the translated proof
//! describes how absence of faults propagates. AND gates therefore become
//! `∨I` applications and OR gates become `∧I` applications.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confidence::Confidence;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::proof::{infer_confidences, ProofShape, ProofTree};
use crate::rules;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FaultTree {
    Basic { name: String },
    And { children: Vec<FaultTree> },
    Or { children: Vec<FaultTree> },
}

impl FaultTree {
    pub fn basic(name: impl Into<String>) -> Self {
        FaultTree::Basic { name: name.into() }
    }

    pub fn and(children: Vec<FaultTree>) -> Self {
        FaultTree::And { children }
    }

    pub fn or(children: Vec<FaultTree>) -> Self {
        FaultTree::Or { children }
    }

    /// Basic-event names in depth-first, left-to-right order.
    pub fn basic_events(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_events(&mut out);
        out
    }

    fn collect_events<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            FaultTree::Basic { name } => out.push(name),
            FaultTree::And { children } | FaultTree::Or { children } => {
                for c in children {
                    c.collect_events(out);
                }
            }
        }
    }

    pub fn gate_count(&self) -> usize {
        match self {
            FaultTree::Basic { .. } => 0,
            FaultTree::And { children } | FaultTree::Or { children } => {
                1 + children.iter().map(FaultTree::gate_count).sum::<usize>()
            }
        }
    }

    /// Gates have at least two children and basic-event names are unique.
    pub fn validate(&self) -> Result<()> {
        self.validate_arity()?;
        let mut seen = BTreeSet::new();
        for name in self.basic_events() {
            if !seen.insert(name) {
                return Err(Error::Schema(format!("duplicate basic event `{name}`")));
            }
        }
        Ok(())
    }

    fn validate_arity(&self) -> Result<()> {
        match self {
            FaultTree::Basic { .. } => Ok(()),
            FaultTree::And { children } | FaultTree::Or { children } => {
                if children.len() < 2 {
                    return Err(Error::Schema(format!(
                        "gate `children` must have at least 2 entries, found {}",
                        children.len()
                    )));
                }
                children.iter().try_for_each(FaultTree::validate_arity)
            }
        }
    }

    /// The formula concluded by the translated proof.
    pub fn to_formula(&self) -> Formula {
        match self {
            FaultTree::Basic { name } => Formula::atom(name.clone()),
            FaultTree::And { children } => fold(children, Formula::or, FaultTree::to_formula),
            FaultTree::Or { children } => fold(children, Formula::and, FaultTree::to_formula),
        }
    }

    fn to_shape(&self) -> ProofShape {
        match self {
            FaultTree::Basic { name } => ProofShape::ax(name.clone()),
            FaultTree::And { children } => fold(children, ProofShape::or_i, FaultTree::to_shape),
            FaultTree::Or { children } => fold(children, ProofShape::and_i, FaultTree::to_shape),
        }
    }
}

/// Left-nested binary fold over at least one child.
fn fold<T>(children: &[FaultTree], combine: fn(T, T) -> T, map: fn(&FaultTree) -> T) -> T {
    let mut iter = children.iter().map(map);
    let first = iter.next().expect("gate without children");
    iter.fold(first, combine)
}

pub fn parse_ft(json: &str) -> Result<FaultTree> {
    let ft: FaultTree = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    ft.validate()?;
    Ok(ft)
}

fn check_covered<T>(ft: &FaultTree, values: &BTreeMap<String, T>) -> Result<()> {
    match ft.basic_events().into_iter().find(|n| !values.contains_key(*n)) {
        Some(missing) => Err(Error::UnknownBasicEvent(missing.to_string())),
        None => Ok(()),
    }
}

/// Translates the fault tree into an intro-only proof: basic events become
/// `Ax` leaves, AND gates left-nested `∨I`, OR gates left-nested `∧I`.
pub fn translate(ft: &FaultTree, leaf_conf: &BTreeMap<String, Confidence>) -> Result<ProofTree> {
    check_covered(ft, leaf_conf)?;
    infer_confidences(&ft.to_shape(), leaf_conf)
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(usize),
    /// AND gate, combined with `∨I`.
    Parallel(Vec<Node>),
    /// OR gate, combined with `∧I`.
    Series(Vec<Node>),
}

/// System true confidence as a function of component true confidences,
/// with all false confidences fixed at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityPolynomial {
    leaves: Vec<String>,
    root: Node,
}

impl ReliabilityPolynomial {
    /// Component names; [`eval_indexed`](Self::eval_indexed) takes values in this order.
    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let ordered = self
            .leaves
            .iter()
            .map(|n| {
                values
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::UnknownBasicEvent(n.clone()))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.eval_indexed(&ordered))
    }

    /// Evaluates on values in [`leaves`](Self::leaves) order; each must lie in `[0, 1]`.
    pub fn eval_indexed(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.leaves.len());
        eval_node(&self.root, values).t()
    }
}

fn eval_node(node: &Node, values: &[f64]) -> Confidence {
    match node {
        Node::Leaf(i) => Confidence::new_unchecked(values[*i], 0.0),
        Node::Parallel(ch) => fold_conf(ch, values, rules::or_i),
        Node::Series(ch) => fold_conf(ch, values, rules::and_i),
    }
}

fn fold_conf(children: &[Node], values: &[f64], rule: fn(Confidence, Confidence) -> Confidence) -> Confidence {
    let mut iter = children.iter().map(|c| eval_node(c, values));
    let first = iter.next().expect("gate without children");
    iter.fold(first, rule)
}

pub fn reliability_fn(ft: &FaultTree) -> ReliabilityPolynomial {
    fn build(ft: &FaultTree, leaves: &mut Vec<String>) -> Node {
        match ft {
            FaultTree::Basic { name } => {
                leaves.push(name.clone());
                Node::Leaf(leaves.len() - 1)
            }
            FaultTree::And { children } => {
                Node::Parallel(children.iter().map(|c| build(c, leaves)).collect())
            }
            FaultTree::Or { children } => {
                Node::Series(children.iter().map(|c| build(c, leaves)).collect())
            }
        }
    }
    let mut leaves = Vec::new();
    let root = build(ft, &mut leaves);
    ReliabilityPolynomial { leaves, root }
}

/// Classical quantitative analysis: AND multiplies failure probabilities,
/// OR folds them with `a + b − ab`.
pub fn failure_prob(ft: &FaultTree, leaf_failure: &BTreeMap<String, f64>) -> Result<f64> {
    match ft {
        FaultTree::Basic { name } => leaf_failure
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasicEvent(name.clone())),
        FaultTree::And { children } => children
            .iter()
            .try_fold(1.0, |acc, c| Ok(acc * failure_prob(c, leaf_failure)?)),
        FaultTree::Or { children } => children.iter().try_fold(0.0, |acc, c| {
            let q = failure_prob(c, leaf_failure)?;
            Ok(acc + q - acc * q)
        }),
    }
}

/// A random binary fault tree with `n_leaves` basic events `c0, c1, …`.
///
/// The shape is drawn by recursive uniform leaf-count splitting and every
/// gate is AND or OR with probability 1/2.
pub fn random_ft(n_leaves: usize, seed: u64) -> FaultTree {
    assert!(n_leaves >= 1, "a fault tree needs at least one basic event");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = 0;
    random_subtree(n_leaves, &mut rng, &mut next)
}

fn random_subtree(n: usize, rng: &mut ChaCha8Rng, next: &mut usize) -> FaultTree {
    if n == 1 {
        let name = format!("c{next}");
        *next += 1;
        return FaultTree::basic(name);
    }
    let left = rng.random_range(1..n);
    let is_and = rng.random_bool(0.5);
    let children = vec![
        random_subtree(left, rng, next),
        random_subtree(n - left, rng, next),
    ];
    if is_and {
        FaultTree::and(children)
    } else {
        FaultTree::or(children)
    }
}
