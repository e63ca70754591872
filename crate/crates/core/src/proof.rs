//! Sequents, proof trees, bottom-up confidence inference and proof checking.
//!
//! Every rule shares its context `Γ` between premises and conclusion, so a
//! [`ProofTree`] stores `Γ` once and each [`Derivation`] node carries the
//! goal formula and confidence of its conclusion sequent.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::confidence::{Confidence, TOLERANCE};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rules::{self, Rule};

/// A finite set of hypotheses `φ : c`, keyed by formula. Re-inserting a
/// formula overwrites its confidence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Hypothesis>", into = "Vec<Hypothesis>")]
pub struct Context {
    entries: BTreeMap<Formula, Confidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub formula: Formula,
    pub confidence: Confidence,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, formula: Formula, confidence: Confidence) {
        self.entries.insert(formula, confidence);
    }

    pub fn get(&self, formula: &Formula) -> Option<Confidence> {
        self.entries.get(formula).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &Confidence)> {
        self.entries.iter()
    }
}

impl From<Vec<Hypothesis>> for Context {
    fn from(hyps: Vec<Hypothesis>) -> Self {
        let mut ctx = Context::new();
        for h in hyps {
            ctx.insert(h.formula, h.confidence);
        }
        ctx
    }
}

impl From<Context> for Vec<Hypothesis> {
    fn from(ctx: Context) -> Self {
        ctx.entries
            .into_iter()
            .map(|(formula, confidence)| Hypothesis {
                formula,
                confidence,
            })
            .collect()
    }
}

impl FromIterator<(Formula, Confidence)> for Context {
    fn from_iter<I: IntoIterator<Item = (Formula, Confidence)>>(iter: I) -> Self {
        let mut ctx = Context::new();
        for (f, c) in iter {
            ctx.insert(f, c);
        }
        ctx
    }
}

/// `Γ ⊢ φ : c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequent {
    pub context: Context,
    pub goal: Formula,
    pub confidence: Confidence,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self
            .context
            .iter()
            .map(|(phi, c)| format!("{phi} : {c}"))
            .collect();
        write!(f, "{} ⊢ {} : {}", hyps.join(", "), self.goal, self.confidence)
    }
}

/// One rule application: the conclusion's goal and confidence plus its premises.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "DerivationRepr", into = "DerivationRepr")]
pub struct Derivation {
    pub rule: Rule,
    pub formula: Formula,
    pub confidence: Confidence,
    pub premises: Vec<Derivation>,
}

// Wire form; `display` is a rendering for humans and is ignored on input.
#[derive(Serialize, Deserialize)]
struct DerivationRepr {
    rule: Rule,
    formula: Formula,
    #[serde(default, skip_deserializing)]
    display: String,
    confidence: Confidence,
    #[serde(default)]
    premises: Vec<DerivationRepr>,
}

impl From<DerivationRepr> for Derivation {
    fn from(r: DerivationRepr) -> Self {
        Derivation {
            rule: r.rule,
            formula: r.formula,
            confidence: r.confidence,
            premises: r.premises.into_iter().map(Into::into).collect(),
        }
    }
}

impl From<Derivation> for DerivationRepr {
    fn from(d: Derivation) -> Self {
        DerivationRepr {
            rule: d.rule,
            display: d.formula.to_string(),
            formula: d.formula,
            confidence: d.confidence,
            premises: d.premises.into_iter().map(Into::into).collect(),
        }
    }
}

impl Derivation {
    /// Rules used anywhere in this subtree, in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofTree {
    pub context: Context,
    pub root: Derivation,
}

impl ProofTree {
    pub fn conclusion(&self) -> Sequent {
        Sequent {
            context: self.context.clone(),
            goal: self.root.formula.clone(),
            confidence: self.root.confidence,
        }
    }

    pub fn uses_elimination(&self) -> Option<Rule> {
        self.root.rules().into_iter().find(|r| r.is_elimination())
    }

    pub fn is_valid(&self) -> bool {
        check_proof(self).is_ok()
    }
}

/// A proof tree without confidences. Formulas of inner nodes follow from
/// their premises; `Ax` leaves name an atom hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofShape {
    Ax(String),
    Unk(Formula),
    TopI,
    BotI,
    ImpI(Box<ProofShape>, Box<ProofShape>),
    /// Premises: the implication `φ ⇒ ψ`, then `φ`.
    ImpEl(Box<ProofShape>, Box<ProofShape>),
    /// Premises: the implication `φ ⇒ ψ`, then `ψ`.
    ImpEr(Box<ProofShape>, Box<ProofShape>),
    NegI(Box<ProofShape>),
    AndI(Box<ProofShape>, Box<ProofShape>),
    OrI(Box<ProofShape>, Box<ProofShape>),
}

impl ProofShape {
    pub fn ax(name: impl Into<String>) -> Self {
        ProofShape::Ax(name.into())
    }

    pub fn and_i(a: ProofShape, b: ProofShape) -> Self {
        ProofShape::AndI(Box::new(a), Box::new(b))
    }

    pub fn or_i(a: ProofShape, b: ProofShape) -> Self {
        ProofShape::OrI(Box::new(a), Box::new(b))
    }

    pub fn imp_i(a: ProofShape, b: ProofShape) -> Self {
        ProofShape::ImpI(Box::new(a), Box::new(b))
    }

    pub fn neg_i(a: ProofShape) -> Self {
        ProofShape::NegI(Box::new(a))
    }

    pub fn rule(&self) -> Rule {
        match self {
            ProofShape::Ax(_) => Rule::Ax,
            ProofShape::Unk(_) => Rule::Unk,
            ProofShape::TopI => Rule::TopI,
            ProofShape::BotI => Rule::BotI,
            ProofShape::ImpI(..) => Rule::ImpI,
            ProofShape::ImpEl(..) => Rule::ImpEl,
            ProofShape::ImpEr(..) => Rule::ImpEr,
            ProofShape::NegI(_) => Rule::NegI,
            ProofShape::AndI(..) => Rule::AndI,
            ProofShape::OrI(..) => Rule::OrI,
        }
    }
}

/// Evaluates every rule bottom-up. The resulting context holds one atom
/// hypothesis per entry of `leaves`.
pub fn infer_confidences(
    shape: &ProofShape,
    leaves: &BTreeMap<String, Confidence>,
) -> Result<ProofTree> {
    let context: Context = leaves
        .iter()
        .map(|(name, c)| (Formula::atom(name.clone()), *c))
        .collect();
    let root = infer_node(shape, &context)?;
    Ok(ProofTree { context, root })
}

fn infer_node(shape: &ProofShape, ctx: &Context) -> Result<Derivation> {
    let rule = shape.rule();
    let (formula, premises, axiom) = match shape {
        ProofShape::Ax(name) => {
            let formula = Formula::atom(name.clone());
            let c = ctx
                .get(&formula)
                .ok_or_else(|| Error::UnknownAtom(name.clone()))?;
            (formula, vec![], Some(c))
        }
        ProofShape::Unk(phi) => (phi.clone(), vec![], None),
        ProofShape::TopI => (Formula::Top, vec![], None),
        ProofShape::BotI => (Formula::Bottom, vec![], None),
        ProofShape::NegI(p) => {
            let p = infer_node(p, ctx)?;
            (Formula::not(p.formula.clone()), vec![p], None)
        }
        ProofShape::ImpI(a, b)
        | ProofShape::ImpEl(a, b)
        | ProofShape::ImpEr(a, b)
        | ProofShape::AndI(a, b)
        | ProofShape::OrI(a, b) => {
            let a = infer_node(a, ctx)?;
            let b = infer_node(b, ctx)?;
            let formula = conclusion_formula(rule, &a.formula, &b.formula)?;
            (formula, vec![a, b], None)
        }
    };
    let confs: Vec<Confidence> = premises.iter().map(|p| p.confidence).collect();
    let confidence = rules::apply(rule, &confs, axiom)?;
    Ok(Derivation {
        rule,
        formula,
        confidence,
        premises,
    })
}

/// Conclusion formula of a binary rule given its premise formulas.
fn conclusion_formula(rule: Rule, first: &Formula, second: &Formula) -> Result<Formula> {
    let mismatch = |detail: String| Error::ShapeMismatch { rule, detail };
    match rule {
        Rule::ImpI => Ok(Formula::implies(first.clone(), second.clone())),
        Rule::AndI => Ok(Formula::and(first.clone(), second.clone())),
        Rule::OrI => Ok(Formula::or(first.clone(), second.clone())),
        Rule::ImpEl => match first {
            Formula::Implies(lhs, rhs) if **lhs == *second => Ok((**rhs).clone()),
            _ => Err(mismatch(format!(
                "`{first}` is not an implication with antecedent `{second}`"
            ))),
        },
        Rule::ImpEr => match first {
            Formula::Implies(lhs, rhs) if **rhs == *second => Ok((**lhs).clone()),
            _ => Err(mismatch(format!(
                "`{first}` is not an implication with consequent `{second}`"
            ))),
        },
        _ => Err(mismatch("not a binary rule".into())),
    }
}

/// First node of a proof that fails validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofDefect {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for ProofDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "node /{} ({}): {}",
            path.join("/"),
            self.rule,
            self.reason
        )
    }
}

/// Checks that every node is a correct rule application: arity, premise and
/// conclusion formulas, side conditions, and confidence arithmetic within
/// [`TOLERANCE`]. `Ax` conclusions must appear in the context.
pub fn check_proof(tree: &ProofTree) -> std::result::Result<(), ProofDefect> {
    let mut path = Vec::new();
    check_node(&tree.root, &tree.context, &mut path)
}

fn check_node(
    node: &Derivation,
    ctx: &Context,
    path: &mut Vec<usize>,
) -> std::result::Result<(), ProofDefect> {
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        check_node(p, ctx, path)?;
        path.pop();
    }
    let defect = |reason: String| ProofDefect {
        path: path.clone(),
        rule: node.rule,
        reason,
    };

    if node.premises.len() != node.rule.arity() {
        return Err(defect(format!(
            "expected {} premises, found {}",
            node.rule.arity(),
            node.premises.len()
        )));
    }

    let expected_formula = match node.rule {
        Rule::Ax => {
            if ctx.get(&node.formula).is_none() {
                return Err(defect(format!("`{}` is not in the context", node.formula)));
            }
            node.formula.clone()
        }
        Rule::Unk => node.formula.clone(),
        Rule::TopI => Formula::Top,
        Rule::BotI => Formula::Bottom,
        Rule::NegI => Formula::not(node.premises[0].formula.clone()),
        rule => conclusion_formula(rule, &node.premises[0].formula, &node.premises[1].formula)
            .map_err(|e| defect(e.to_string()))?,
    };
    if expected_formula != node.formula {
        return Err(defect(format!(
            "conclusion `{}` should be `{}`",
            node.formula, expected_formula
        )));
    }

    let confs: Vec<Confidence> = node.premises.iter().map(|p| p.confidence).collect();
    let expected = rules::apply(node.rule, &confs, ctx.get(&node.formula))
        .map_err(|e| defect(e.to_string()))?;
    if !expected.approx_eq(&node.confidence, TOLERANCE) {
        return Err(defect(format!(
            "confidence {} should be {}",
            node.confidence, expected
        )));
    }
    Ok(())
}
