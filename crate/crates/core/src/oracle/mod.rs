//! Concrete execution, used to test the analysis against real heaps.
//!
//! Values are single words; constructors with arguments, references and
//! closures point to blocks of words on a [`Heap`]. At every program point
//! the words reachable from each variable are grouped by component, and any
//! two components whose words intersect form a concrete sharing pair.

mod footprint;
mod literal;
mod machine;
mod soundness;

pub use footprint::{concrete_sharing, footprint, var_type, Footprint};
pub use literal::{build, parse_literals, Literal};
pub use machine::{Addr, Frame, Heap, Machine, Observer, Outcome, Value, DEFAULT_STEP_LIMIT, MAX_DEPTH};
pub use soundness::{check_run, trace, uncovered, SoundnessReport, Trace, TraceEntry, Violation};

use crate::analysis::{analyze_program, AnalysisOptions};
use crate::domain::Domain;
use crate::error::Result;
use crate::ir::ast::Program;

/// Analyses `prog` and checks one run of `entry` against the result.
pub fn check_soundness(
    prog: &Program,
    opts: AnalysisOptions,
    entry: &str,
    args: &[Literal],
    step_limit: u64,
) -> Result<SoundnessReport> {
    let results = analyze_program(prog, opts)?;
    let dom = Domain::new(prog, opts.mode);
    check_run(prog, &dom, &results, entry, args, step_limit)
}
