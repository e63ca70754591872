use thiserror::Error;

use crate::rules::Rule;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("confidence ({t}, {f}) is outside the confidence space")]
    InvalidConfidence { t: f64, f: f64 },

    /// Clamped rule output still has `t + f > 1`; indicates broken rule arithmetic.
    #[error("clamped confidence ({t}, {f}) has t + f > 1")]
    ClampedOutOfSpace { t: f64, f: f64 },

    #[error("side condition of {rule} violated by premise ({t}, {f})")]
    SideConditionViolated { rule: Rule, t: f64, f: f64 },

    #[error("axiom rule requires a hypothesis confidence")]
    MissingAxiomConfidence,

    #[error("{rule} takes {expected} premise(s), got {got}")]
    Arity {
        rule: Rule,
        expected: usize,
        got: usize,
    },

    #[error("premise formulas do not fit {rule}: {detail}")]
    ShapeMismatch { rule: Rule, detail: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("formula has {count} distinct atoms, exact enumeration supports at most {max}")]
    TooManyAtoms { count: usize, max: usize },

    #[error("formulas share atoms: {0:?}")]
    SharedAtoms(Vec<String>),

    #[error("probability {p} for atom `{atom}` is outside [0, 1]")]
    InvalidProbability { atom: String, p: f64 },

    #[error("conclusion formula is not linear")]
    NonLinearFormula,

    #[error("proof uses elimination rule {0}")]
    EliminationRulePresent(Rule),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown basic event `{0}`")]
    UnknownBasicEvent(String),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("components do not match fault tree: {0}")]
    ComponentMismatch(String),

    #[error("grid has {points} lattice points, limit is {max}")]
    TooLarge { points: u128, max: u128 },

    #[error("component `{0}` has zero confidence, fault count distribution is degenerate")]
    DegenerateConfidence(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data,
    /// as opposed to failures while solving.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfidence { .. }
                | Error::UnknownAtom(_)
                | Error::InvalidProbability { .. }
                | Error::Schema(_)
                | Error::UnknownBasicEvent(_)
                | Error::BadParameter(_)
                | Error::ComponentMismatch(_)
                | Error::Json(_)
                | Error::MissingAxiomConfidence
                | Error::Arity { .. }
                | Error::ShapeMismatch { .. }
        )
    }
}
