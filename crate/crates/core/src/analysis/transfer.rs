//! Per-statement transfer functions.

use std::collections::{BTreeMap, BTreeSet};

use super::lower::is_abstract;
use super::{signature, Analyzer, Diagnostic, DiagnosticKind};
use crate::alias::{AliasSet, VarComp};
use crate::domain::{Comp, Step};
use crate::ir::ast::{Alt, Ctor, Name, Stmt, StmtKind, ARRAY_CONS};

impl Analyzer<'_> {
    pub(super) fn block(&mut self, stmts: &[Stmt], mut a: AliasSet) -> AliasSet {
        for s in stmts {
            a = self.stmt(s, a);
        }
        a
    }

    fn stmt(&mut self, s: &Stmt, a0: AliasSet) -> AliasSet {
        let a1 = match &s.kind {
            StmtKind::EqVar { v, src } => self.copy(v, src, a0),
            StmtKind::DerefEq { v, src } => self.deref_eq(v, src, a0),
            StmtKind::EqDeref { v, src } => self.eq_deref(v, src, a0),
            StmtKind::Dc { v, cons, args } => self.construct(v, cons, args, a0),
            StmtKind::Case { v, alts } => self.case(v, alts, &a0),
            StmtKind::Error => AliasSet::new(),
            StmtKind::App { v, f, args } => self.app(s, v, f, args, a0),
            StmtKind::Assign { v, src } => self.assign(s, v, src, a0),
            StmtKind::Instype { v, src, .. } => {
                let a1 = self.copy(v, src, a0);
                let shares = a1.iter().any(|(x, y)| (x.var == *v && y.var == *src) || (x.var == *src && y.var == *v));
                if shares && self.live.banged_later(s.point, src) {
                    self.diags.push(
                        Diagnostic::new(&self.f.name, s.point, DiagnosticKind::InstypeHazard, s.pos)
                            .with_vars([src.clone()]),
                    );
                }
                a1
            }
            StmtKind::ArrayRef { v, array, .. } => self.array_ref(v, array, a0),
        };
        self.record(s.point, &a1);
        a1
    }

    /// `v` gets the same value as `src`, at the same components.
    fn copy(&self, v: &str, src: &str, a0: AliasSet) -> AliasSet {
        let add = a0.mirror(
            |e| {
                if e.var == src {
                    self.fold_vc(v, e.comp.steps()).into_iter().filter(|x| x.comp == e.comp).collect()
                } else {
                    vec![]
                }
            },
            |_| true,
        );
        a0.union(&add)
    }

    fn deref_eq(&self, v: &str, src: &str, a0: AliasSet) -> AliasSet {
        let add = a0.mirror(
            |e| {
                if e.var == src {
                    self.fold_vc(v, &[&[Step::deref()], e.comp.steps()].concat()).into_iter().collect()
                } else {
                    vec![]
                }
            },
            |_| true,
        );
        let mut a = a0.union(&add);
        if let Some(cell) = self.fold_vc(v, &[Step::deref()]) {
            a.insert_self(cell);
        }
        a
    }

    fn eq_deref(&self, v: &str, src: &str, a0: AliasSet) -> AliasSet {
        let mut back: BTreeMap<Comp, Vec<VarComp>> = BTreeMap::new();
        for c1 in self.comps_of(v) {
            if let Some(d) = self.fold_vc(src, &[&[Step::deref()], c1.steps()].concat()) {
                back.entry(d.comp).or_default().push(VarComp::new(v, c1));
            }
        }
        let add =
            a0.mirror(|e| if e.var == src { back.get(&e.comp).cloned().unwrap_or_default() } else { vec![] }, |_| true);
        a0.union(&add)
    }

    fn construct(&self, v: &str, cons: &Ctor, args: &[Name], a0: AliasSet) -> AliasSet {
        let Ctor::Named(cons) = cons else { return a0 };
        let step = |i: usize| {
            if cons == ARRAY_CONS {
                Step::new(ARRAY_CONS, 1)
            } else {
                Step::new(cons, i as u32 + 1)
            }
        };
        let add = a0.mirror(
            |e| {
                args.iter()
                    .enumerate()
                    .filter(|(_, a)| **a == e.var)
                    .filter_map(|(i, _)| self.fold_vc(v, &[&[step(i)], e.comp.steps()].concat()))
                    .collect()
            },
            |_| true,
        );
        let mut a = a0.union(&add);
        for i in 0..args.len() {
            if let Some(w) = self.fold_vc(v, &[step(i)]) {
                a.insert_self(w);
            }
        }
        a
    }

    fn assign(&mut self, s: &Stmt, v: &str, src: &str, a0: AliasSet) -> AliasSet {
        let Some(cell) = self.fold_vc(v, &[Step::deref()]) else { return a0 };
        let al = a0.partners(&cell);
        let add = a0.mirror(
            |e| {
                if e.var == src {
                    al.iter().filter_map(|va| self.extend_vc(va, e.comp.steps())).collect()
                } else {
                    vec![]
                }
            },
            |_| true,
        );
        let mut targets: BTreeSet<VarComp> = al.iter().cloned().collect();
        targets.insert(cell);
        let found = self.check_update(s, &targets, &a0);
        self.diags.extend(found);
        let mut a = a0.clone();
        if !self.is_mut(v) {
            let old = |x: &VarComp| x.var == v && x.comp.len() > 1 && x.comp.starts_with(&[Step::deref()]);
            a.retain(|x, y| !old(x) && !old(y));
        }
        a.extend(&add);
        a
    }

    fn case(&mut self, v: &str, alts: &[Alt], a0: &AliasSet) -> AliasSet {
        let Some(t) = self.ty(v).cloned() else { return a0.clone() };
        let av = a0.pairs_with_var(v);
        let rest = a0.difference(&av);
        let mut out = AliasSet::new();
        for alt in alts {
            let dc = &alt.pat.cons;
            let refs = &alt.pat.refs;
            let compat = |c: &Comp| self.dom.preimages(&t, c).iter().any(|r| &r[0].cons == dc);
            let on_v = |x: &VarComp| x.var == v;
            let mut avdc = av.clone();
            avdc.retain(|x, y| (!on_v(x) || compat(&x.comp)) && (!on_v(y) || compat(&y.comp)));
            let share = av.mirror(
                |e| {
                    if e.var != v {
                        return vec![];
                    }
                    self.dom
                        .preimages(&t, &e.comp)
                        .iter()
                        .filter(|r| &r[0].cons == dc)
                        .filter_map(|r| {
                            let r_i = refs.get(r[0].arg as usize - 1)?;
                            self.fold_vc(r_i, &[&[Step::deref()], &r[1..]].concat())
                        })
                        .collect()
                },
                |y| !on_v(y) || compat(&y.comp),
            );
            let mut a = rest.union(&avdc);
            a.extend(&share);
            for r in refs {
                if let Some(cell) = self.fold_vc(r, &[Step::deref()]) {
                    a.insert_self(cell);
                }
            }
            self.record(alt.entry, &a);
            let end = self.block(&alt.body, a);
            out.extend(&end);
        }
        out
    }

    fn array_ref(&self, v: &str, array: &str, a0: AliasSet) -> AliasSet {
        let Some(t) = self.ty(array).cloned() else { return a0 };
        let add = a0.mirror(
            |e| {
                if e.var != array {
                    return vec![];
                }
                self.dom
                    .preimages(&t, &e.comp)
                    .iter()
                    .filter(|r| r[0].cons == ARRAY_CONS)
                    .filter_map(|r| self.fold_vc(v, &[&[Step::deref()], &r[1..]].concat()))
                    .collect()
            },
            |_| true,
        );
        let mut a = a0.union(&add);
        if let Some(cell) = self.fold_vc(v, &[Step::deref()]) {
            a.insert_self(cell);
        }
        a
    }

    fn app(&mut self, s: &Stmt, v: &str, f: &str, args: &[Name], a0: AliasSet) -> AliasSet {
        let Some(ft) = self.f.types.app_types.get(&s.point).cloned() else { return a0 };
        let (k, n) = (ft.supplied, args.len());
        let saturated = k + n == ft.params.len();
        let mut a = a0.clone();
        if !saturated || !self.opts.precise_app {
            let add = a0.mirror(
                |e| {
                    let mut out: Vec<VarComp> = args
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| **x == e.var)
                        .filter_map(|(i, _)| self.fold_vc(v, &[&[Step::closure(n - i)], e.comp.steps()].concat()))
                        .collect();
                    if e.var == f {
                        if let Some((first, rest)) = e.comp.steps().split_first() {
                            let j = first.arg as usize + n;
                            out.extend(self.fold_vc(v, &[&[Step::closure(j)], rest].concat()));
                        }
                    }
                    out
                },
                |_| true,
            );
            a.extend(&add);
            for i in 1..=n {
                if let Some(w) = self.fold_vc(v, &[Step::closure(i)]) {
                    a.insert_self(w);
                }
            }
        }
        if !saturated {
            return a;
        }
        let Some(sig) = signature(self.prog, &ft.func) else { return a };
        let Some((pre, post)) = self.callee_conditions(&ft) else { return a };
        self.types.extend(pre.abstracts.clone());
        self.types.extend(post.abstracts.clone());

        let formal_index: BTreeMap<&str, usize> =
            sig.params.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect();
        let actual = |i: usize| if i < k { f.to_string() } else { args[i - k].clone() };
        let rename = |x: &VarComp| -> Option<VarComp> {
            if is_abstract(&x.var) {
                return Some(x.clone());
            }
            if x.var == sig.result {
                return Some(VarComp::new(v, x.comp.clone()));
            }
            let i = *formal_index.get(x.var.as_str())?;
            if i < k {
                self.fold_vc(f, &[&[Step::closure(k - i)], x.comp.steps()].concat())
            } else {
                Some(VarComp::new(args[i - k].clone(), x.comp.clone()))
            }
        };

        // The caller's sharing, seen from the callee, must be allowed by
        // the precondition.
        let mut formals_of: BTreeMap<VarComp, Vec<VarComp>> = BTreeMap::new();
        for (i, t) in ft.params.iter().enumerate() {
            for c in self.dom.comps(t).iter() {
                let fx = VarComp::new(sig.params[i].name.clone(), c.clone());
                if let Some(x) = rename(&fx) {
                    formals_of.entry(x).or_default().push(fx);
                }
            }
        }
        for e in a0.elements() {
            if is_abstract(&e.var) {
                formals_of.entry(e.clone()).or_default().push(e);
            }
        }
        let mut bad = BTreeSet::new();
        for (x, y) in a0.iter() {
            if is_abstract(&x.var) && is_abstract(&y.var) {
                continue;
            }
            let (Some(fx), Some(fy)) = (formals_of.get(x), formals_of.get(y)) else { continue };
            for p in fx {
                for q in fy {
                    if !pre.set.contains(p, q) {
                        bad.insert(if p <= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) });
                    }
                }
            }
        }
        let mut found = Vec::new();
        if !bad.is_empty() {
            found.push(
                Diagnostic::new(&self.f.name, s.point, DiagnosticKind::PreconditionViolated, s.pos)
                    .with_vars([ft.func.clone()])
                    .with_pairs(bad),
            );
        }

        // Updates through mutable parameters.
        let mut targets = BTreeSet::new();
        let mut unbanged = BTreeSet::new();
        for (i, p) in sig.params.iter().enumerate() {
            if !p.mutable {
                continue;
            }
            let act = actual(i);
            if !s.bang.contains(&act) {
                unbanged.insert(act);
            }
            for c in self.dom.comps(&ft.params[i]).iter() {
                if let Some(u) = rename(&VarComp::new(p.name.clone(), c.clone())) {
                    targets.extend(a0.partners(&u));
                    targets.insert(u);
                }
            }
        }
        if !unbanged.is_empty() {
            found.push(Diagnostic::new(&self.f.name, s.point, DiagnosticKind::MissingBang, s.pos).with_vars(unbanged));
        }
        if !targets.is_empty() {
            found.extend(self.check_update(s, &targets, &a0));
        }

        // Effect of the call.
        let significant = |x: &VarComp| x.var == sig.result || sig.is_mutable(&x.var);
        let mut effect = post.set.clone();
        for (x, y) in pre.set.iter() {
            if sig.is_mutable(&x.var) || sig.is_mutable(&y.var) {
                effect.insert(x.clone(), y.clone());
            }
        }
        effect.retain(|x, y| significant(x) || significant(y));
        let actuals: BTreeSet<Name> = (0..ft.params.len()).map(actual).collect();
        let mut ext: BTreeMap<VarComp, BTreeSet<VarComp>> = BTreeMap::new();
        for (x, y) in a0.iter() {
            for (p, q) in [(x, y), (y, x)] {
                if !actuals.contains(&p.var) {
                    continue;
                }
                let Some(pt) = self.ty(&p.var).and_then(|t| self.dom.comp_type(t, &p.comp)) else { continue };
                let deeper = self.dom.comps(&pt);
                for d in std::iter::once(&Comp::empty()).chain(deeper.iter()) {
                    let (Some(u), Some(w)) = (self.extend_vc(p, d.steps()), self.extend_vc(q, d.steps())) else {
                        continue;
                    };
                    ext.entry(u).or_default().insert(w);
                }
            }
        }
        let ext_of = |u: &VarComp| -> BTreeSet<VarComp> {
            let mut out = ext.get(u).cloned().unwrap_or_default();
            out.insert(u.clone());
            out
        };
        let mut added = AliasSet::new();
        for (x, y) in effect.iter() {
            let (Some(u), Some(w)) = (rename(x), rename(y)) else { continue };
            let (eu, ew) = (ext_of(&u), ext_of(&w));
            for p in &eu {
                for q in &ew {
                    added.insert(p.clone(), q.clone());
                }
            }
        }
        for e in added.elements() {
            added.insert_self(e);
        }
        a.extend(&added);
        self.diags.extend(found);
        a
    }
}
