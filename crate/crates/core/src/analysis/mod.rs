//! The sharing analysis proper.
//!
//! Each function is analysed on its own, assuming every call satisfies the
//! callee's declared pre and post conditions. The result is an alias set
//! at every program point plus the diagnostics found along the way.

mod diagnostic;
pub mod lower;
mod transfer;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::alias::{AliasSet, VarComp};
use crate::domain::{Domain, DomainMode, Step};
use crate::error::{Error, Result};
use crate::ir::ast::{FnType, FuncDef, Name, Point, Program, SharingSig, StmtKind, Type};
use crate::ir::builtins;
use crate::ir::liveness::{compute_liveness, Liveness};

pub use diagnostic::{Diagnostic, DiagnosticKind};
use lower::{is_abstract, lower, Lowered};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub mode: DomainMode,
    /// Skip closure-creation sharing at calls known to be saturated.
    pub precise_app: bool,
}

impl AnalysisOptions {
    pub fn new(mode: DomainMode) -> AnalysisOptions {
        AnalysisOptions { mode, precise_app: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointResult {
    pub func: Name,
    pub per_point: BTreeMap<Point, AliasSet>,
    pub diagnostics: Vec<Diagnostic>,
}

impl PointResult {
    pub fn at(&self, p: Point) -> &AliasSet {
        &self.per_point[&p]
    }

    pub fn has(&self, kind: DiagnosticKind) -> bool {
        self.diagnostics.iter().any(|d| d.kind == kind)
    }
}

/// Analyses every function of a type checked program, in program order.
pub fn analyze_program(prog: &Program, opts: AnalysisOptions) -> Result<Vec<PointResult>> {
    let dom = Domain::new(prog, opts.mode);
    prog.funcs.iter().map(|f| analyze_function(prog, f, &dom, opts)).collect()
}

pub fn analyze_function(prog: &Program, f: &FuncDef, dom: &Domain, opts: AnalysisOptions) -> Result<PointResult> {
    let mut an = Analyzer {
        prog,
        f,
        dom,
        opts,
        live: compute_liveness(f),
        types: f.types.var_types.clone(),
        per_point: BTreeMap::new(),
        diags: Vec::new(),
        mut_acc: AliasSet::new(),
        lowered: HashMap::new(),
        errors: Vec::new(),
    };
    an.run()?;
    let mut diagnostics = an.diags;
    diagnostics.sort();
    diagnostics.dedup();
    Ok(PointResult { func: f.name.clone(), per_point: an.per_point, diagnostics })
}

/// Signature of a program function or a builtin.
pub fn signature(prog: &Program, name: &str) -> Option<SharingSig> {
    prog.func(name).map(|f| f.sig.clone()).or_else(|| builtins::signature(name))
}

pub(crate) struct Analyzer<'a> {
    prog: &'a Program,
    f: &'a FuncDef,
    dom: &'a Domain,
    opts: AnalysisOptions,
    live: Liveness,
    types: BTreeMap<Name, Type>,
    per_point: BTreeMap<Point, AliasSet>,
    diags: Vec<Diagnostic>,
    mut_acc: AliasSet,
    lowered: HashMap<(Name, FnType), Option<(Lowered, Lowered)>>,
    errors: Vec<String>,
}

impl Analyzer<'_> {
    fn own_env(&self) -> BTreeMap<Name, Type> {
        self.f
            .sig
            .params
            .iter()
            .map(|p| (p.name.clone(), self.types.get(&p.name).cloned().unwrap_or_else(|| p.ty.clone())))
            .collect()
    }

    fn run(&mut self) -> Result<()> {
        let f = self.f;
        let cond_err = |which: &str, m: String| Error::Type { pos: f.pos, msg: format!("{which} of {}: {m}", f.name) };
        let pre_env = self.own_env();
        let mut post_env = pre_env.clone();
        let ret_ty = self.types.get(f.ret()).cloned().unwrap_or_else(|| f.sig.result_ty.clone());
        post_env.insert(f.ret().clone(), ret_ty);
        let pre = lower(self.dom, &f.sig.pre, &pre_env).map_err(|m| cond_err("precondition", m))?;
        let post = lower(self.dom, &f.sig.post, &post_env).map_err(|m| cond_err("postcondition", m))?;
        self.types.extend(pre.abstracts.clone());
        self.types.extend(post.abstracts.clone());

        self.check_declared_mutables();
        self.record(0, &pre.set);
        let end = self.block(&f.body, pre.set.clone());
        if let Some(m) = self.errors.first() {
            return Err(Error::Type { pos: f.pos, msg: format!("in {}: {m}", f.name) });
        }

        let last = f.last_point();
        let fin = end.union(&self.mut_acc).restrict(|v| self.non_local(v));
        let allowed = pre.set.union(&post.set);
        let extra: Vec<(VarComp, VarComp)> = fin
            .difference(&allowed)
            .iter()
            .filter(|(a, b)| !(is_abstract(&a.var) && is_abstract(&b.var)))
            .cloned()
            .collect();
        if !extra.is_empty() {
            self.diags
                .push(Diagnostic::new(&f.name, last, DiagnosticKind::PostconditionViolated, f.pos).with_pairs(extra));
        }
        Ok(())
    }

    fn check_declared_mutables(&mut self) {
        for s in self.f.statements() {
            let bad: Vec<Name> =
                s.bang.iter().filter(|b| self.f.is_param(b) && !self.f.sig.is_mutable(b)).cloned().collect();
            if !bad.is_empty() {
                self.diags.push(
                    Diagnostic::new(&self.f.name, s.point, DiagnosticKind::UndeclaredMutable, s.pos).with_vars(bad),
                );
            }
        }
    }

    fn non_local(&self, v: &str) -> bool {
        self.f.is_param(v) || v == self.f.ret() || is_abstract(v)
    }

    fn is_mut(&self, v: &str) -> bool {
        self.f.sig.is_mutable(v)
    }

    fn record(&mut self, p: Point, a: &AliasSet) {
        for (x, y) in a.iter() {
            let keep =
                (self.is_mut(&x.var) && self.non_local(&y.var)) || (self.is_mut(&y.var) && self.non_local(&x.var));
            if keep {
                self.mut_acc.insert(x.clone(), y.clone());
            }
        }
        self.per_point.insert(p, a.clone());
    }

    fn ty(&self, v: &str) -> Option<&Type> {
        self.types.get(v)
    }

    /// `var` at raw path `raw`, folded.
    fn fold_vc(&self, var: &str, raw: &[Step]) -> Option<VarComp> {
        let t = self.ty(var)?;
        if raw.is_empty() {
            let empty = crate::domain::Comp::empty();
            return self.dom.has_comp(t, &empty).then(|| VarComp::new(var, empty));
        }
        self.dom.fold(t, raw).map(|c| VarComp::new(var, c))
    }

    fn extend_vc(&self, vc: &VarComp, more: &[Step]) -> Option<VarComp> {
        self.fold_vc(&vc.var, &vc.comp.join(more))
    }

    fn comps_of(&self, v: &str) -> Vec<crate::domain::Comp> {
        self.ty(v).map(|t| self.dom.comps(t).to_vec()).unwrap_or_default()
    }

    /// Update checks for the words named by `targets`: every variable
    /// owning one of them must carry `!` when it is live or a parameter, and
    /// none of them may share with abstract data.
    fn check_update(&self, s: &crate::ir::ast::Stmt, targets: &BTreeSet<VarComp>, a0: &AliasSet) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut missing = BTreeSet::new();
        let mut abs = BTreeSet::new();
        for u in targets {
            if is_abstract(&u.var) {
                abs.insert(u.var.clone());
                continue;
            }
            let needs = self.live.is_live(s.point, &u.var) || self.f.is_param(&u.var);
            if needs && !s.bang.contains(&u.var) {
                missing.insert(u.var.clone());
            }
            for q in a0.partners(u) {
                if is_abstract(&q.var) {
                    abs.insert(q.var);
                }
            }
        }
        if !missing.is_empty() {
            out.push(Diagnostic::new(&self.f.name, s.point, DiagnosticKind::MissingBang, s.pos).with_vars(missing));
        }
        if !abs.is_empty() {
            out.push(Diagnostic::new(&self.f.name, s.point, DiagnosticKind::AbstractUpdate, s.pos).with_vars(abs));
        }
        out
    }

    fn callee_conditions(&mut self, ft: &FnType) -> Option<(Lowered, Lowered)> {
        let key = (ft.func.clone(), ft.clone());
        if let Some(l) = self.lowered.get(&key) {
            return l.clone();
        }
        let result = match signature(self.prog, &ft.func) {
            None => {
                self.errors.push(format!("no signature for {}", ft.func));
                None
            }
            Some(sig) => {
                let mut env: BTreeMap<Name, Type> =
                    sig.params.iter().zip(&ft.params).map(|(p, t)| (p.name.clone(), t.clone())).collect();
                let pre = lower(self.dom, &sig.pre, &env);
                env.insert(sig.result.clone(), (*ft.result).clone());
                let post = lower(self.dom, &sig.post, &env);
                match (pre, post) {
                    (Ok(pre), Ok(post)) => Some((pre, post)),
                    (Err(m), _) | (_, Err(m)) => {
                        self.errors.push(format!("conditions of {} at this call: {m}", ft.func));
                        None
                    }
                }
            }
        };
        self.lowered.insert(key, result.clone());
        result
    }
}

/// Every statement kind, for tests that want to be sure each one is
/// exercised.
pub fn stmt_kind_name(k: &StmtKind) -> &'static str {
    match k {
        StmtKind::EqVar { .. } => "EqVar",
        StmtKind::EqDeref { .. } => "EqDeref",
        StmtKind::DerefEq { .. } => "DerefEq",
        StmtKind::Dc { .. } => "Dc",
        StmtKind::Case { .. } => "Case",
        StmtKind::Error => "Error",
        StmtKind::App { .. } => "App",
        StmtKind::Assign { .. } => "Assign",
        StmtKind::Instype { .. } => "Instype",
        StmtKind::ArrayRef { .. } => "ArrayRef",
    }
}
