//! Confidence functions: how much true confidence a component gains from
//! a given amount of verification resource.
//!
//! Functions are small expression trees over a single variable `r`. Only
//! the true component is modelled; false confidence stays at 0 because
//! faults found by verification are assumed to be fixed.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::confidence::TOLERANCE;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfidenceExpr {
    Const(f64),
    /// The resource variable `r`.
    Var,
    Add(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Sub(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Mul(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Div(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Pow(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Min(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Max(Box<ConfidenceExpr>, Box<ConfidenceExpr>),
    Neg(Box<ConfidenceExpr>),
}

use ConfidenceExpr as E;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Result clamped into `[0, 1]`.
    pub value: f64,
    /// Whether the raw result lay outside `[0, 1]`.
    pub clamped: bool,
}

impl ConfidenceExpr {
    pub fn constant(v: f64) -> Self {
        E::Const(v)
    }

    fn bin(ctor: fn(Box<E>, Box<E>) -> E, a: E, b: E) -> E {
        ctor(Box::new(a), Box::new(b))
    }

    pub fn add(a: E, b: E) -> E {
        Self::bin(E::Add, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: E, b: E) -> E {
        Self::bin(E::Sub, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: E, b: E) -> E {
        Self::bin(E::Mul, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: E, b: E) -> E {
        Self::bin(E::Div, a, b)
    }

    pub fn pow(a: E, b: E) -> E {
        Self::bin(E::Pow, a, b)
    }

    pub fn min(a: E, b: E) -> E {
        Self::bin(E::Min, a, b)
    }

    pub fn max(a: E, b: E) -> E {
        Self::bin(E::Max, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: E) -> E {
        E::Neg(Box::new(a))
    }

    fn op_name(&self) -> &'static str {
        match self {
            E::Const(_) => "const",
            E::Var => "var",
            E::Add(..) => "add",
            E::Sub(..) => "sub",
            E::Mul(..) => "mul",
            E::Div(..) => "div",
            E::Pow(..) => "pow",
            E::Min(..) => "min",
            E::Max(..) => "max",
            E::Neg(_) => "neg",
        }
    }

    fn children(&self) -> Vec<&E> {
        match self {
            E::Const(_) | E::Var => vec![],
            E::Neg(a) => vec![a],
            E::Add(a, b)
            | E::Sub(a, b)
            | E::Mul(a, b)
            | E::Div(a, b)
            | E::Pow(a, b)
            | E::Min(a, b)
            | E::Max(a, b) => vec![a, b],
        }
    }

    fn raw(&self, r: f64) -> Result<f64> {
        let v = match self {
            E::Const(c) => *c,
            E::Var => r,
            E::Add(a, b) => a.raw(r)? + b.raw(r)?,
            E::Sub(a, b) => a.raw(r)? - b.raw(r)?,
            E::Mul(a, b) => a.raw(r)? * b.raw(r)?,
            E::Div(a, b) => {
                let d = b.raw(r)?;
                if d == 0.0 {
                    return Err(Error::Eval(format!("division by zero at r = {r}")));
                }
                a.raw(r)? / d
            }
            E::Pow(a, b) => {
                let (base, exp) = (a.raw(r)?, b.raw(r)?);
                if base == 0.0 && exp < 0.0 {
                    return Err(Error::Eval(format!("0 raised to negative power at r = {r}")));
                }
                if base < 0.0 && exp.fract() != 0.0 {
                    return Err(Error::Eval(format!(
                        "negative base {base} raised to non-integer power {exp} at r = {r}"
                    )));
                }
                base.powf(exp)
            }
            E::Min(a, b) => a.raw(r)?.min(b.raw(r)?),
            E::Max(a, b) => a.raw(r)?.max(b.raw(r)?),
            E::Neg(a) => -a.raw(r)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Eval(format!("`{}` is not finite at r = {r}", self.op_name())))
        }
    }

    /// Evaluates at `r ≥ 0`, clamping the result into `[0, 1]`.
    pub fn evaluate(&self, r: f64) -> Result<Evaluation> {
        if !(r >= 0.0) {
            return Err(Error::Eval(format!("resource must be non-negative, got {r}")));
        }
        let raw = self.raw(r)?;
        let value = raw.clamp(0.0, 1.0);
        Ok(Evaluation { value, clamped: value != raw })
    }

    /// Sampled monotonicity check on `samples` equally spaced points of
    /// `[0, r_max]`. Not exhaustive: a function may dip between samples.
    pub fn check_monotone(&self, r_max: f64, samples: usize) -> Result<bool> {
        if samples < 2 {
            return Err(Error::BadParameter(format!("need at least 2 samples, got {samples}")));
        }
        if !(r_max >= 0.0) || !r_max.is_finite() {
            return Err(Error::BadParameter(format!("r_max must be finite and non-negative, got {r_max}")));
        }
        let mut prev = self.evaluate(0.0)?.value;
        for i in 1..samples {
            let r = r_max * i as f64 / (samples - 1) as f64;
            let v = self.evaluate(r)?.value;
            if v < prev - TOLERANCE {
                return Ok(false);
            }
            prev = v;
        }
        Ok(true)
    }

    /// `f_s(r) = f(r + s)`: every occurrence of `r` becomes `r + s`.
    pub fn shift(&self, s: f64) -> ConfidenceExpr {
        match self {
            E::Var => E::add(E::Var, E::Const(s)),
            E::Const(c) => E::Const(*c),
            E::Neg(a) => E::neg(a.shift(s)),
            E::Add(a, b) => E::add(a.shift(s), b.shift(s)),
            E::Sub(a, b) => E::sub(a.shift(s), b.shift(s)),
            E::Mul(a, b) => E::mul(a.shift(s), b.shift(s)),
            E::Div(a, b) => E::div(a.shift(s), b.shift(s)),
            E::Pow(a, b) => E::pow(a.shift(s), b.shift(s)),
            E::Min(a, b) => E::min(a.shift(s), b.shift(s)),
            E::Max(a, b) => E::max(a.shift(s), b.shift(s)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            E::Const(v) => json!({"op": "const", "value": v}),
            _ => json!({
                "op": self.op_name(),
                "args": self.children().into_iter().map(E::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    /// Parses the `{"op", "value", "args"}` form. `path` prefixes error messages.
    pub fn from_json(value: &Value, path: &str) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Schema(format!("{path}: expected an object")))?;
        let op = obj
            .get("op")
            .ok_or_else(|| Error::Schema(format!("{path}.op: missing field")))?
            .as_str()
            .ok_or_else(|| Error::Schema(format!("{path}.op: expected a string")))?;
        const OPS: [&str; 10] = ["const", "var", "add", "sub", "mul", "div", "pow", "min", "max", "neg"];
        if !OPS.contains(&op) {
            return Err(Error::Schema(format!("{path}.op: unknown operator `{op}`")));
        }
        for key in obj.keys() {
            let allowed = match key.as_str() {
                "op" => true,
                "value" => op == "const",
                "args" => op != "const",
                _ => false,
            };
            if !allowed {
                return Err(Error::Schema(format!("{path}.{key}: unexpected field for op `{op}`")));
            }
        }
        if op == "const" {
            let v = obj
                .get("value")
                .ok_or_else(|| Error::Schema(format!("{path}.value: missing field")))?
                .as_f64()
                .ok_or_else(|| Error::Schema(format!("{path}.value: expected a number")))?;
            return Ok(E::Const(v));
        }
        let arity = match op {
            "var" => 0,
            "neg" => 1,
            "add" | "sub" | "mul" | "div" | "pow" | "min" | "max" => 2,
            _ => unreachable!(),
        };
        let args: &[Value] = match obj.get("args") {
            None if arity == 0 => &[],
            None => return Err(Error::Schema(format!("{path}.args: missing field"))),
            Some(a) => a
                .as_array()
                .ok_or_else(|| Error::Schema(format!("{path}.args: expected an array")))?,
        };
        if args.len() != arity {
            return Err(Error::Schema(format!(
                "{path}.args: `{op}` takes {arity} argument(s), found {}",
                args.len()
            )));
        }
        let mut parsed = args
            .iter()
            .enumerate()
            .map(|(i, a)| E::from_json(a, &format!("{path}.args[{i}]")))
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let mut next = || Box::new(parsed.next().expect("arity checked"));
        Ok(match op {
            "var" => E::Var,
            "neg" => E::Neg(next()),
            "add" => E::Add(next(), next()),
            "sub" => E::Sub(next(), next()),
            "mul" => E::Mul(next(), next()),
            "div" => E::Div(next(), next()),
            "pow" => E::Pow(next(), next()),
            "min" => E::Min(next(), next()),
            "max" => E::Max(next(), next()),
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for ConfidenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Const(v) => write!(f, "{v}"),
            E::Var => f.write_str("r"),
            E::Neg(a) => write!(f, "-({a})"),
            E::Add(a, b) => write!(f, "({a} + {b})"),
            E::Sub(a, b) => write!(f, "({a} - {b})"),
            E::Mul(a, b) => write!(f, "({a} * {b})"),
            E::Div(a, b) => write!(f, "({a} / {b})"),
            E::Pow(a, b) => write!(f, "({a} ^ {b})"),
            E::Min(a, b) => write!(f, "min({a}, {b})"),
            E::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}

impl Serialize for ConfidenceExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConfidenceExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        E::from_json(&v, "expr").map_err(D::Error::custom)
    }
}

/// Standard confidence-function families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builtin {
    /// `min(r / (n·r0), 1)`: `n` items, each covered by `r0` resources.
    Coverage { n: f64, r0: f64 },
    /// `1 − (1 − p)^(r / r0)`: each test of cost `r0` finds the fault with probability `p`.
    RandomTesting { p: f64, r0: f64 },
    /// `1 − base^(r + shift)`.
    Exponential { base: f64, shift: f64 },
}

impl Builtin {
    /// The family used for random experiment instances.
    pub const DEFAULT_EXPONENTIAL: Builtin = Builtin::Exponential { base: 0.99, shift: 1.0 };

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParameter(msg));
        match *self {
            Builtin::Coverage { n, r0 } => {
                if !(n > 0.0 && n.is_finite()) {
                    return bad(format!("coverage: n must be positive, got {n}"));
                }
                if !(r0 > 0.0 && r0.is_finite()) {
                    return bad(format!("coverage: r0 must be positive, got {r0}"));
                }
            }
            Builtin::RandomTesting { p, r0 } => {
                if !(p > 0.0 && p < 1.0) {
                    return bad(format!("random_testing: p must lie in (0, 1), got {p}"));
                }
                if !(r0 > 0.0 && r0.is_finite()) {
                    return bad(format!("random_testing: r0 must be positive, got {r0}"));
                }
            }
            Builtin::Exponential { base, shift } => {
                if !(base > 0.0 && base < 1.0) {
                    return bad(format!("exponential: base must lie in (0, 1), got {base}"));
                }
                if !(shift >= 0.0 && shift.is_finite()) {
                    return bad(format!("exponential: shift must be non-negative, got {shift}"));
                }
            }
        }
        Ok(())
    }

    pub fn expr(&self) -> Result<ConfidenceExpr> {
        self.validate()?;
        let one = || E::Const(1.0);
        Ok(match *self {
            Builtin::Coverage { n, r0 } => E::min(E::div(E::Var, E::Const(n * r0)), one()),
            Builtin::RandomTesting { p, r0 } => E::sub(
                one(),
                E::pow(E::Const(1.0 - p), E::div(E::Var, E::Const(r0))),
            ),
            Builtin::Exponential { base, shift } => {
                let exponent = if shift == 0.0 { E::Var } else { E::add(E::Var, E::Const(shift)) };
                E::sub(one(), E::pow(E::Const(base), exponent))
            }
        })
    }
}

pub fn builtin(family: Builtin) -> Result<ConfidenceExpr> {
    family.expr()
}

/// One basic event's confidence function and the resources already spent on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentModel {
    pub name: String,
    pub expr: ConfidenceExpr,
    pub spent: f64,
}

impl ComponentModel {
    pub fn new(name: impl Into<String>, expr: ConfidenceExpr, spent: f64) -> Result<Self> {
        let name = name.into();
        if !(spent >= 0.0 && spent.is_finite()) {
            return Err(Error::Schema(format!("{name}.spent: must be a non-negative number, got {spent}")));
        }
        Ok(ComponentModel { name, expr, spent })
    }

    /// Confidence after spending `extra` more resources, `f(spent + extra)`.
    pub fn confidence_after(&self, extra: f64) -> Result<f64> {
        Ok(self.expr.evaluate(self.spent + extra)?.value)
    }

    /// The shifted function `f_s` with `s = spent`.
    pub fn shifted(&self) -> ConfidenceExpr {
        self.expr.shift(self.spent)
    }
}

/// Parses a components file: `{name: {"fn": expr-or-builtin, "spent": number}}`.
/// Components come back sorted by name.
pub fn parse_components(json: &str) -> Result<Vec<ComponentModel>> {
    let root: Value = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    let map = root
        .as_object()
        .ok_or_else(|| Error::Schema("components: expected an object keyed by component name".into()))?;
    let sorted: BTreeMap<&String, &Value> = map.iter().collect();
    sorted
        .into_iter()
        .map(|(name, entry)| parse_component(name, entry))
        .collect()
}

fn parse_component(name: &str, entry: &Value) -> Result<ComponentModel> {
    let path = format!("components.{name}");
    let obj = entry
        .as_object()
        .ok_or_else(|| Error::Schema(format!("{path}: expected an object")))?;
    if let Some(key) = obj.keys().find(|k| *k != "fn" && *k != "spent") {
        return Err(Error::Schema(format!("{path}.{key}: unexpected field")));
    }
    let spent = match obj.get("spent") {
        None => 0.0,
        Some(v) => v
            .as_f64()
            .filter(|s| *s >= 0.0)
            .ok_or_else(|| Error::Schema(format!("{path}.spent: expected a non-negative number")))?,
    };
    let fn_value = obj
        .get("fn")
        .ok_or_else(|| Error::Schema(format!("{path}.fn: missing field")))?;
    let expr = parse_fn(fn_value, &format!("{path}.fn"))?;
    ComponentModel::new(name, expr, spent)
}

fn parse_fn(value: &Value, path: &str) -> Result<ConfidenceExpr> {
    if value.get("builtin").is_some() {
        let family: Builtin = serde_json::from_value(value.clone())
            .map_err(|e| Error::Schema(format!("{path}: {e}")))?;
        return family.expr().map_err(|e| Error::Schema(format!("{path}: {e}")));
    }
    ConfidenceExpr::from_json(value, path)
}

/// Inverse of [`parse_components`]; builtins are written in expanded form.
pub fn components_to_json(components: &[ComponentModel]) -> Value {
    let mut map = Map::new();
    for c in components {
        map.insert(c.name.clone(), json!({"fn": c.expr.to_json(), "spent": c.spent}));
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exp(base: f64, shift: f64) -> ConfidenceExpr {
        builtin(Builtin::Exponential { base, shift }).unwrap()
    }

    fn at(e: &ConfidenceExpr, r: f64) -> f64 {
        e.evaluate(r).unwrap().value
    }

    #[test]
    fn exponential_family() {
        let f = exp(0.99, 1.0);
        assert!((at(&f, 100.0) - (1.0 - 0.99f64.powi(101))).abs() < 1e-15);
        assert!((at(&f, 100.0) - 0.637).abs() < 1e-3);
        assert!((at(&f, 200.0) - 0.866).abs() < 2e-3);
        let half = exp(0.5, 0.0);
        assert_eq!(at(&half, 0.0), 0.0);
        assert_eq!(at(&half, 5.0), 0.96875);
    }

    #[test]
    fn coverage_family() {
        let f = builtin(Builtin::Coverage { n: 10.0, r0: 2.0 }).unwrap();
        assert_eq!(at(&f, 30.0), 1.0);
        assert_eq!(at(&f, 20.0), 1.0);
        assert_eq!(at(&f, 10.0), 0.5);
        assert!(!f.evaluate(30.0).unwrap().clamped);
    }

    #[test]
    fn random_testing_family() {
        let f = builtin(Builtin::RandomTesting { p: 0.3, r0: 4.0 }).unwrap();
        assert_eq!(at(&f, 0.0), 0.0);
        assert!((at(&f, 8.0) - (1.0 - 0.49)).abs() < 1e-12);
    }

    #[test]
    fn bad_parameters() {
        for b in [
            Builtin::Coverage { n: 0.0, r0: 1.0 },
            Builtin::Coverage { n: 1.0, r0: -1.0 },
            Builtin::RandomTesting { p: 1.0, r0: 1.0 },
            Builtin::RandomTesting { p: 0.5, r0: 0.0 },
            Builtin::Exponential { base: 1.0, shift: 0.0 },
            Builtin::Exponential { base: 0.5, shift: -1.0 },
        ] {
            assert!(matches!(builtin(b), Err(Error::BadParameter(_))), "{b:?}");
        }
    }

    #[test]
    fn clamping_is_flagged() {
        let over = ConfidenceExpr::add(E::Var, E::Const(0.5));
        let e = over.evaluate(1.0).unwrap();
        assert_eq!(e, Evaluation { value: 1.0, clamped: true });
        let under = ConfidenceExpr::neg(E::Var).evaluate(1.0).unwrap();
        assert_eq!(under, Evaluation { value: 0.0, clamped: true });
    }

    #[test]
    fn evaluation_errors() {
        let div0 = E::div(E::Const(1.0), E::Var);
        assert!(matches!(div0.evaluate(0.0), Err(Error::Eval(_))));
        let pow0 = E::pow(E::Var, E::Const(-1.0));
        assert!(matches!(pow0.evaluate(0.0), Err(Error::Eval(_))));
        let neg_base = E::pow(E::Const(-2.0), E::Const(0.5));
        assert!(matches!(neg_base.evaluate(0.0), Err(Error::Eval(_))));
        assert!(matches!(E::Var.evaluate(-1.0), Err(Error::Eval(_))));
    }

    #[test]
    fn monotonicity_check() {
        assert!(exp(0.99, 1.0).check_monotone(1000.0, 1001).unwrap());
        assert!(E::Const(0.5).check_monotone(10.0, 2).unwrap());
        assert!(!E::sub(E::Const(1.0), E::Var).check_monotone(2.0, 11).unwrap());
        assert!(matches!(E::Var.check_monotone(1.0, 1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn json_forms() {
        let f = exp(0.99, 1.0);
        let v = f.to_json();
        assert_eq!(v["op"], "sub");
        assert_eq!(v["args"][0], json!({"op": "const", "value": 1.0}));
        assert_eq!(ConfidenceExpr::from_json(&v, "f").unwrap(), f);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<ConfidenceExpr>(&s).unwrap(), f);
    }

    #[test]
    fn json_diagnostics_name_the_field() {
        let err = |v: Value| ConfidenceExpr::from_json(&v, "f").unwrap_err().to_string();
        assert!(err(json!({"op": "add", "args": [{"op": "var"}]})).contains("f.args"));
        assert!(err(json!({"op": "const"})).contains("f.value"));
        assert!(err(json!({"op": "sqrt", "args": []})).contains("f.op"));
        assert!(err(json!({"op": "neg", "args": [{"op": "cosnt", "value": 1}]})).contains("f.args[0].op"));
        assert!(err(json!({"op": "var", "value": 2})).contains("f.value"));
    }

    const REFERENCE_COMPONENTS: &str = r#"{
        "A": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 0},
        "B": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 5},
        "C": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 5},
        "D": {"fn": {"op": "sub", "args": [{"op": "const", "value": 1},
                     {"op": "pow", "args": [{"op": "const", "value": 0.5}, {"op": "var"}]}]}, "spent": 10}
    }"#;

    #[test]
    fn components_file() {
        let comps = parse_components(REFERENCE_COMPONENTS).unwrap();
        let names: Vec<_> = comps.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["A", "B", "C", "D"]);
        assert_eq!(comps[3].expr, comps[0].expr);
        assert_eq!(comps[1].confidence_after(0.0).unwrap(), 1.0 - 1.0 / 32.0);
        let back = components_to_json(&comps).to_string();
        assert_eq!(parse_components(&back).unwrap(), comps);
    }

    #[test]
    fn components_file_errors() {
        let err = |s: &str| match parse_components(s) {
            Err(Error::Schema(m)) => m,
            other => panic!("expected schema error, got {other:?}"),
        };
        assert!(err(r#"{"A": {"spent": 1}}"#).contains("components.A.fn"));
        assert!(err(r#"{"A": {"fn": {"op": "var"}, "spent": -1}}"#).contains("components.A.spent"));
        assert!(err(r#"{"A": {"fn": {"builtin": "exponential", "base": 2, "shift": 0}}}"#)
            .contains("components.A.fn"));
        assert!(err(r#"{"A": {"fn": {"op": "var"}, "cost": 1}}"#).contains("components.A.cost"));
        assert!(err("[1]").contains("components"));
    }

    fn any_builtin() -> impl Strategy<Value = Builtin> {
        prop_oneof![
            (0.1..100.0f64, 0.1..10.0f64).prop_map(|(n, r0)| Builtin::Coverage { n, r0 }),
            (0.001..0.999f64, 0.1..10.0f64).prop_map(|(p, r0)| Builtin::RandomTesting { p, r0 }),
            (0.01..0.999f64, 0.0..5.0f64).prop_map(|(base, shift)| Builtin::Exponential { base, shift }),
        ]
    }

    proptest! {
        #[test]
        fn builtins_stay_in_range(b in any_builtin(), r in 0.0..1e4f64) {
            let e = builtin(b).unwrap().evaluate(r).unwrap();
            prop_assert!(!e.clamped);
            prop_assert!((0.0..=1.0).contains(&e.value));
        }

        #[test]
        fn builtins_are_monotone(b in any_builtin(), r in 0.0..1e3f64, h in 0.0..100.0f64) {
            let f = builtin(b).unwrap();
            prop_assert!(at(&f, r + h) >= at(&f, r));
        }

        #[test]
        fn shift_identity(b in any_builtin(), s in 0.0..500.0f64, r in 0.0..500.0f64) {
            let m = ComponentModel::new("x", builtin(b).unwrap(), s).unwrap();
            prop_assert_eq!(at(&m.shifted(), r), at(&m.expr, r + s));
            prop_assert_eq!(m.confidence_after(r).unwrap(), at(&m.expr, r + s));
        }

        #[test]
        fn coverage_saturates(n in 0.5..50.0f64, r0 in 0.5..5.0f64, extra in 0.0..100.0f64) {
            let f = builtin(Builtin::Coverage { n, r0 }).unwrap();
            prop_assert_eq!(at(&f, n * r0), 1.0);
            prop_assert_eq!(at(&f, n * r0 + extra), 1.0);
        }
    }
}
