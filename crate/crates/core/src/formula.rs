//! Propositional formulas over atoms, `⊤`, `⊥` and `⇒`.
//!
//! Negation, disjunction and conjunction are encodings, not variants:
//! `¬φ ≡ φ ⇒ ⊥`, `φ ∨ ψ ≡ ¬φ ⇒ ψ`, `φ ∧ ψ ≡ ¬(¬φ ∨ ¬ψ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Atom(String),
    Top,
    Bottom,
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Self {
        Formula::implies(phi, Formula::Bottom)
    }

    pub fn or(phi: Formula, psi: Formula) -> Self {
        Formula::implies(Formula::not(phi), psi)
    }

    pub fn and(phi: Formula, psi: Formula) -> Self {
        Formula::not(Formula::or(Formula::not(phi), Formula::not(psi)))
    }

    /// Matches `φ ⇒ ⊥`.
    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(lhs, rhs) if **rhs == Formula::Bottom => Some(lhs),
            _ => None,
        }
    }

    /// Matches `¬φ ⇒ ψ`.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(lhs, rhs) => lhs.as_not().map(|phi| (phi, &**rhs)),
            _ => None,
        }
    }

    /// Matches `¬(¬φ ∨ ¬ψ)`.
    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let (nphi, npsi) = self.as_not()?.as_or()?;
        Some((nphi.as_not()?, npsi.as_not()?))
    }

    /// Atom names in order of occurrence, with repetitions.
    pub fn atom_occurrences(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(name) => out.push(name),
            Formula::Top | Formula::Bottom => {}
            Formula::Implies(lhs, rhs) => {
                lhs.collect_atoms(out);
                rhs.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        self.atom_occurrences().into_iter().collect()
    }

    /// Each atom occurs at most once.
    pub fn is_linear(&self) -> bool {
        let occ = self.atom_occurrences();
        let distinct: BTreeSet<_> = occ.iter().collect();
        distinct.len() == occ.len()
    }

    /// Boolean evaluation with `⇒` as material implication.
    pub fn eval_bool(&self, valuation: &BTreeMap<&str, bool>) -> Option<bool> {
        Some(match self {
            Formula::Atom(name) => *valuation.get(name.as_str())?,
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Implies(lhs, rhs) => !lhs.eval_bool(valuation)? || rhs.eval_bool(valuation)?,
        })
    }

    fn is_compound(&self) -> bool {
        matches!(self, Formula::Implies(..)) && self.as_not().is_none()
            || self.as_and().is_some()
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_compound() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((phi, psi)) = self.as_and() {
            phi.fmt_operand(f)?;
            f.write_str(" ∧ ")?;
            return psi.fmt_operand(f);
        }
        if let Some(phi) = self.as_not() {
            f.write_str("¬")?;
            return phi.fmt_operand(f);
        }
        if let Some((phi, psi)) = self.as_or() {
            phi.fmt_operand(f)?;
            f.write_str(" ∨ ")?;
            return psi.fmt_operand(f);
        }
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Top => f.write_str("⊤"),
            Formula::Bottom => f.write_str("⊥"),
            Formula::Implies(lhs, rhs) => {
                lhs.fmt_operand(f)?;
                f.write_str(" ⇒ ")?;
                rhs.fmt_operand(f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn sugar_encodings() {
        let phi = a("A");
        let psi = a("B");
        assert_eq!(
            Formula::not(phi.clone()),
            Formula::Implies(Box::new(phi.clone()), Box::new(Formula::Bottom))
        );
        assert_eq!(
            Formula::or(phi.clone(), psi.clone()),
            Formula::implies(Formula::implies(phi.clone(), Formula::Bottom), psi.clone())
        );
        assert_eq!(
            Formula::and(phi.clone(), psi.clone()),
            Formula::not(Formula::or(
                Formula::not(phi.clone()),
                Formula::not(psi.clone())
            ))
        );
        assert_eq!(
            Formula::and(phi.clone(), psi.clone()).as_and(),
            Some((&phi, &psi))
        );
    }

    #[test]
    fn linearity() {
        let paired = Formula::and(Formula::or(a("A"), a("B")), Formula::or(a("C"), a("D")));
        assert!(paired.is_linear());
        assert!(!Formula::implies(a("A"), a("A")).is_linear());
        assert!(Formula::implies(Formula::Top, Formula::Bottom).is_linear());
    }

    #[test]
    fn display_uses_sugar() {
        let paired = Formula::and(Formula::or(a("A"), a("B")), Formula::or(a("C"), a("D")));
        assert_eq!(paired.to_string(), "(A ∨ B) ∧ (C ∨ D)");
        assert_eq!(Formula::not(a("A")).to_string(), "¬A");
        assert_eq!(
            Formula::implies(a("A"), Formula::Top).to_string(),
            "A ⇒ ⊤"
        );
    }

    #[test]
    fn boolean_evaluation() {
        let f = Formula::or(a("A"), a("B"));
        let v: BTreeMap<&str, bool> = [("A", false), ("B", true)].into_iter().collect();
        assert_eq!(f.eval_bool(&v), Some(true));
        assert_eq!(Formula::and(a("A"), a("B")).eval_bool(&v), Some(false));
        assert_eq!(a("Z").eval_bool(&v), None);
    }

    #[test]
    fn json_round_trip() {
        let f = Formula::and(a("x"), Formula::not(Formula::Top));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Formula>(&s).unwrap(), f);
    }
}
