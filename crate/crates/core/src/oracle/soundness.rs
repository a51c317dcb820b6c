//! Comparing concrete runs with analysis results.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::alias::{AliasSet, VarComp};
use crate::analysis::lower::is_abstract;
use crate::analysis::{DiagnosticKind, PointResult};
use crate::domain::Domain;
use crate::error::Result;
use crate::ir::ast::{FuncDef, Name, Point, Program};
use crate::oracle::footprint::concrete_sharing;
use crate::oracle::literal::{build, Literal};
use crate::oracle::machine::{Frame, Heap, Machine, Observer, Outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub func: Name,
    pub point: Point,
    pub pair: [VarComp; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub entry: Name,
    pub outcome: Outcome,
    pub points_checked: usize,
    /// Points inside calls whose contract was broken, where the analysis
    /// promises nothing.
    pub points_skipped: usize,
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Concrete pairs missing from `analysed`, abstract variables aside.
pub fn uncovered(concrete: &AliasSet, analysed: &AliasSet) -> Vec<(VarComp, VarComp)> {
    concrete
        .iter()
        .filter(|(a, b)| !is_abstract(&a.var) && !is_abstract(&b.var) && !analysed.contains(a, b))
        .cloned()
        .collect()
}

/// Whether running `f` may leave sharing its caller was not told about.
fn breaks_contract(r: &PointResult) -> bool {
    r.diagnostics.iter().any(|d| {
        matches!(
            d.kind,
            DiagnosticKind::PostconditionViolated
                | DiagnosticKind::UndeclaredMutable
                | DiagnosticKind::AbstractUpdate
                | DiagnosticKind::InstypeHazard
        )
    })
}

struct Checker<'a> {
    dom: &'a Domain,
    results: HashMap<&'a str, &'a PointResult>,
    trusted: Vec<bool>,
    checked: usize,
    skipped: usize,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn pre_violated(&self, f: &str, p: Point) -> bool {
        self.results.get(f).is_some_and(|r| {
            r.diagnostics.iter().any(|d| d.point == p && d.kind == DiagnosticKind::PreconditionViolated)
        })
    }
}

impl Observer for Checker<'_> {
    fn at(&mut self, heap: &Heap, frame: &Frame<'_>, point: Point) {
        if !self.trusted.last().copied().unwrap_or(true) {
            self.skipped += 1;
            return;
        }
        self.checked += 1;
        let Some(r) = self.results.get(frame.func.name.as_str()) else { return };
        let concrete = concrete_sharing(self.dom, heap, frame);
        let empty = AliasSet::new();
        let analysed = r.per_point.get(&point).unwrap_or(&empty);
        for (a, b) in uncovered(&concrete, analysed) {
            self.violations.push(Violation { func: frame.func.name.clone(), point, pair: [a, b] });
        }
    }

    fn enter(&mut self, site: Option<(&Frame<'_>, Point)>, _callee: &FuncDef) {
        let ok = match site {
            None => true,
            Some((caller, p)) => {
                self.trusted.last().copied().unwrap_or(true) && !self.pre_violated(&caller.func.name, p)
            }
        };
        self.trusted.push(ok);
    }

    fn leave(&mut self, callee: &FuncDef) {
        let ok = self.trusted.pop().unwrap_or(true);
        let broke = self.results.get(callee.name.as_str()).is_some_and(|r| breaks_contract(r));
        if !ok || broke {
            if let Some(t) = self.trusted.last_mut() {
                *t = false;
            }
        }
    }
}

/// Runs `entry` on `args` and checks every point reached against
/// `results`, which must come from analysing `prog` over `dom`.
pub fn check_run(
    prog: &Program,
    dom: &Domain,
    results: &[PointResult],
    entry: &str,
    args: &[Literal],
    step_limit: u64,
) -> Result<SoundnessReport> {
    let mut m = Machine::new(prog, step_limit);
    let vals = args.iter().map(|l| build(prog, &mut m.heap, l)).collect::<Result<Vec<_>>>()?;
    let mut ck = Checker {
        dom,
        results: results.iter().map(|r| (r.func.as_str(), r)).collect(),
        trusted: Vec::new(),
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    let outcome = m.run(entry, vals, &mut ck)?;
    Ok(SoundnessReport {
        entry: entry.to_string(),
        outcome,
        points_checked: ck.checked,
        points_skipped: ck.skipped,
        violations: ck.violations,
    })
}

/// One reached point of a traced run.
#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub func: Name,
    pub depth: usize,
    pub point: Point,
    pub env: BTreeMap<Name, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub entry: Name,
    pub outcome: Outcome,
    pub steps: u64,
    pub heap_words: usize,
    pub points: Vec<TraceEntry>,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

struct Recorder {
    points: Vec<TraceEntry>,
}

impl Observer for Recorder {
    fn at(&mut self, heap: &Heap, frame: &Frame<'_>, point: Point) {
        let env = frame.env.iter().map(|(k, v)| (k.clone(), heap.render(v, 6))).collect();
        self.points.push(TraceEntry { func: frame.func.name.clone(), depth: frame.depth, point, env });
    }
}

/// Runs `entry`, recording the variables of the active frame at each point.
pub fn trace(prog: &Program, entry: &str, args: &[Literal], step_limit: u64) -> Result<Trace> {
    let mut m = Machine::new(prog, step_limit);
    let vals = args.iter().map(|l| build(prog, &mut m.heap, l)).collect::<Result<Vec<_>>>()?;
    let mut rec = Recorder { points: Vec::new() };
    let outcome = m.run(entry, vals, &mut rec)?;
    Ok(Trace { entry: entry.to_string(), outcome, steps: m.steps(), heap_words: m.heap.len(), points: rec.points })
}
