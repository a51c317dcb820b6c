//! Sharing analysis for a small core language with references and
//! destructive update.
//!
//! The pipeline is: [`parse_program`] produces a [`Program`], [`check_types`]
//! annotates it, and [`analyze_program`] computes an alias set at every
//! program point together with any annotation or contract violations.
//! The [`oracle`] module runs the same programs over an explicit heap and
//! checks the analysis against what actually happens.

pub mod alias;
pub mod analysis;
pub mod domain;
pub mod error;
pub mod ir;
pub mod oracle;
pub mod report;

pub use alias::{AliasSet, VarComp};
pub use analysis::{analyze_function, analyze_program, AnalysisOptions, Diagnostic, DiagnosticKind, PointResult};
pub use domain::{Comp, Domain, DomainMode, Step};
pub use error::{Error, Result};
pub use ir::ast::{FuncDef, Point, Program, Type};
pub use ir::liveness::{compute_liveness, Liveness};
pub use ir::parser::parse_program;
pub use ir::typeck::check_types;

/// Parses and type checks a source text in one go.
pub fn load(text: &str) -> Result<Program> {
    check_types(parse_program(text)?)
}
