//! Confidence arithmetic of every proof rule.
//!
//! Base rules: `ax`, `unk`, `⊤I`, `⊥I`, `⇒I`, `⇒E,l`, `⇒E,r`.
//! Derived introduction rules: `¬I`, `∧I`, `∨I`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::confidence::{clamp, Confidence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Ax,
    Unk,
    TopI,
    BotI,
    ImpI,
    ImpEl,
    ImpEr,
    NegI,
    AndI,
    OrI,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::Ax,
        Rule::Unk,
        Rule::TopI,
        Rule::BotI,
        Rule::ImpI,
        Rule::ImpEl,
        Rule::ImpEr,
        Rule::NegI,
        Rule::AndI,
        Rule::OrI,
    ];

    pub fn arity(self) -> usize {
        match self {
            Rule::Ax | Rule::Unk | Rule::TopI | Rule::BotI => 0,
            Rule::NegI => 1,
            Rule::ImpI | Rule::ImpEl | Rule::ImpEr | Rule::AndI | Rule::OrI => 2,
        }
    }

    pub fn is_elimination(self) -> bool {
        matches!(self, Rule::ImpEl | Rule::ImpEr)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Rule outputs stay in C before clamping, so clamping cannot fail on valid input.
fn clamped(t: f64, f: f64) -> Confidence {
    clamp(t, f).expect("rule arithmetic left the confidence space")
}

/// `⇒I`: from `φ : (t, f)` and `ψ : (t', f')` conclude `φ ⇒ ψ : (f + t' − f t', t f')`.
pub fn imp_i(phi: Confidence, psi: Confidence) -> Confidence {
    let (t, f) = (phi.t(), phi.f());
    let (t2, f2) = (psi.t(), psi.f());
    clamped(f + t2 - f * t2, t * f2)
}

/// `⇒E,l` (modus ponens): from `φ ⇒ ψ : (t, f)` and `φ : (t', f')` conclude
/// `ψ : (1 − (1 − t)/t', f/(1 − f'))`. Requires `t' ≠ 0` and `f' ≠ 1`.
pub fn imp_e_l(imp: Confidence, phi: Confidence) -> Result<Confidence> {
    let (t2, f2) = (phi.t(), phi.f());
    if t2 == 0.0 || f2 == 1.0 {
        return Err(Error::SideConditionViolated {
            rule: Rule::ImpEl,
            t: t2,
            f: f2,
        });
    }
    Ok(clamped(1.0 - (1.0 - imp.t()) / t2, imp.f() / (1.0 - f2)))
}

/// `⇒E,r` (modus tollens): from `φ ⇒ ψ : (t, f)` and `ψ : (t', f')` conclude
/// `φ : (f/(1 − t'), 1 − (1 − t)/f')`. Requires `t' ≠ 1` and `f' ≠ 0`.
pub fn imp_e_r(imp: Confidence, psi: Confidence) -> Result<Confidence> {
    let (t2, f2) = (psi.t(), psi.f());
    if t2 == 1.0 || f2 == 0.0 {
        return Err(Error::SideConditionViolated {
            rule: Rule::ImpEr,
            t: t2,
            f: f2,
        });
    }
    Ok(clamped(imp.f() / (1.0 - t2), 1.0 - (1.0 - imp.t()) / f2))
}

pub fn neg_i(c: Confidence) -> Confidence {
    Confidence::new_unchecked(c.f(), c.t())
}

/// `∧I`: product T-norm on true confidence, probabilistic sum on false.
pub fn and_i(c1: Confidence, c2: Confidence) -> Confidence {
    clamped(c1.t() * c2.t(), c1.f() + c2.f() - c1.f() * c2.f())
}

/// `∨I`: probabilistic sum on true confidence, product on false.
pub fn or_i(c1: Confidence, c2: Confidence) -> Confidence {
    clamped(c1.t() + c2.t() - c1.t() * c2.t(), c1.f() * c2.f())
}

/// Conclusions of the premise-free rules.
pub fn constant(rule: Rule, axiom: Option<Confidence>) -> Result<Confidence> {
    match rule {
        Rule::Ax => axiom.ok_or(Error::MissingAxiomConfidence),
        Rule::Unk => Ok(Confidence::UNKNOWN),
        Rule::TopI => Ok(Confidence::TRUE),
        Rule::BotI => Ok(Confidence::FALSE),
        other => Err(Error::Arity {
            rule: other,
            expected: other.arity(),
            got: 0,
        }),
    }
}

/// Applies `rule` to premise confidences given in premise order.
/// `axiom` is only consulted for [`Rule::Ax`].
pub fn apply(rule: Rule, premises: &[Confidence], axiom: Option<Confidence>) -> Result<Confidence> {
    if premises.len() != rule.arity() {
        return Err(Error::Arity {
            rule,
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    match rule {
        Rule::Ax | Rule::Unk | Rule::TopI | Rule::BotI => constant(rule, axiom),
        Rule::NegI => Ok(neg_i(premises[0])),
        Rule::ImpI => Ok(imp_i(premises[0], premises[1])),
        Rule::ImpEl => imp_e_l(premises[0], premises[1]),
        Rule::ImpEr => imp_e_r(premises[0], premises[1]),
        Rule::AndI => Ok(and_i(premises[0], premises[1])),
        Rule::OrI => Ok(or_i(premises[0], premises[1])),
    }
}
