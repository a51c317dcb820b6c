use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alias::VarComp;
use crate::ir::ast::{Name, Point, Pos};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagnosticKind {
    MissingBang,
    AbstractUpdate,
    PreconditionViolated,
    PostconditionViolated,
    UndeclaredMutable,
    InstypeHazard,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub func: Name,
    pub point: Point,
    pub kind: DiagnosticKind,
    /// Variables at fault: unannotated or undeclared ones, the abstract
    /// variable that would be updated, the instantiated variable.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<Name>,
    /// Offending pairs for contract violations.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<[VarComp; 2]>,
    #[serde(skip)]
    pub pos: Pos,
}

impl Diagnostic {
    pub fn new(func: &str, point: Point, kind: DiagnosticKind, pos: Pos) -> Diagnostic {
        Diagnostic { func: func.to_string(), point, kind, vars: Vec::new(), pairs: Vec::new(), pos }
    }

    pub fn with_vars(mut self, vars: impl IntoIterator<Item = Name>) -> Diagnostic {
        self.vars = vars.into_iter().collect();
        self
    }

    pub fn with_pairs(mut self, pairs: impl IntoIterator<Item = (VarComp, VarComp)>) -> Diagnostic {
        self.pairs = pairs.into_iter().map(|(a, b)| [a, b]).collect();
        self
    }

    pub fn message(&self) -> String {
        let vars = self.vars.join(", ");
        let pairs: Vec<String> = self.pairs.iter().map(|[a, b]| format!("{{{a}, {b}}}")).collect();
        let pairs = pairs.join(", ");
        match self.kind {
            DiagnosticKind::MissingBang => format!("may update live variable(s) {vars} without !"),
            DiagnosticKind::AbstractUpdate => format!("may update data shared with {vars}"),
            DiagnosticKind::PreconditionViolated => {
                format!("call to {vars} violates its precondition: {pairs}")
            }
            DiagnosticKind::PostconditionViolated => format!("sharing not allowed by pre/post: {pairs}"),
            DiagnosticKind::UndeclaredMutable => format!("parameter(s) {vars} updated but not declared mutable"),
            DiagnosticKind::InstypeHazard => {
                format!("{vars} shares with a more specific instance and is updated later")
            }
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.func, self.point, self.kind, self.message())
    }
}
