//! Turning pre/post conditions into alias sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::alias::{AliasSet, VarComp};
use crate::domain::{Comp, Domain, Step};
use crate::ir::ast::{CondExpr, CondForm, CondStmt, Name, RawVarComp, Type, ABSTRACT};

pub fn abstract_name(t: &Type) -> Name {
    format!("{ABSTRACT}_{}", t.mangle())
}

pub fn is_abstract(v: &str) -> bool {
    v.strip_prefix(ABSTRACT).is_some_and(|r| r.starts_with('_'))
}

/// A lowered condition together with the types of the abstract variables
/// it mentions.
#[derive(Clone, Debug, Default)]
pub struct Lowered {
    pub set: AliasSet,
    pub abstracts: BTreeMap<Name, Type>,
}

/// Self pairs for every component of every variable in `env`.
pub fn self_pairs(dom: &Domain, env: &BTreeMap<Name, Type>) -> AliasSet {
    let mut out = AliasSet::new();
    for (v, t) in env {
        for c in dom.comps(t).iter() {
            out.insert_self(VarComp::new(v.clone(), c.clone()));
        }
    }
    out
}

pub fn lower(dom: &Domain, cond: &CondForm, env: &BTreeMap<Name, Type>) -> Result<Lowered, String> {
    match cond {
        CondForm::Stmts(eqs) => lower_stmts(dom, eqs, env),
        CondForm::Explicit(sets) => lower_explicit(dom, sets, env),
    }
}

fn deref_type(t: &Type, k: usize) -> Option<Type> {
    let mut t = t.clone();
    for _ in 0..k {
        match t {
            Type::Ref(x) => t = *x,
            _ => return None,
        }
    }
    Some(t)
}

fn wrap_refs(t: Type, k: usize) -> Type {
    (0..k).fold(t, |t, _| Type::reference(t))
}

struct Typing<'a> {
    dom: &'a Domain,
    tys: BTreeMap<Name, Type>,
}

impl Typing<'_> {
    fn side(&self, e: &CondExpr) -> Result<Option<Type>, String> {
        match e {
            CondExpr::Deref { var, .. } if var == ABSTRACT => Ok(None),
            CondExpr::Deref { derefs, var } => match self.tys.get(var) {
                Some(t) => deref_type(t, *derefs)
                    .map(Some)
                    .ok_or_else(|| format!("{} dereferences a non-reference", "*".repeat(*derefs) + var)),
                None => Ok(None),
            },
            CondExpr::Cons { cons, args } => {
                let env = self.dom.env();
                let owner = env.cons_owner.get(cons).ok_or_else(|| format!("unknown constructor {cons}"))?;
                let data = &env.datas[owner];
                let def = data.constructors.iter().find(|c| &c.name == cons).expect("owner lists constructor");
                if def.args.len() != args.len() {
                    return Err(format!("{cons} expects {} arguments", def.args.len()));
                }
                let mut subst = BTreeMap::new();
                for (formal, a) in def.args.iter().zip(args) {
                    if let Some(at) = self.tys.get(a) {
                        matcher(formal, at, &mut subst);
                    }
                }
                let mut targs = Vec::new();
                for p in &data.params {
                    match subst.get(p) {
                        Some(t) => targs.push(t.clone()),
                        None => return Ok(None),
                    }
                }
                Ok(Some(Type::Named(owner.clone(), targs)))
            }
        }
    }

    /// Binds untyped variables of `e` given that it has type `t`.
    fn bind(&mut self, e: &CondExpr, t: &Type) -> Result<bool, String> {
        let mut changed = false;
        match e {
            CondExpr::Deref { var, .. } if var == ABSTRACT => {}
            CondExpr::Deref { derefs, var } => {
                if !self.tys.contains_key(var) {
                    self.tys.insert(var.clone(), wrap_refs(t.clone(), *derefs));
                    changed = true;
                }
            }
            CondExpr::Cons { cons, args } => {
                let def =
                    self.dom.env().constructor(t, cons).ok_or_else(|| format!("{cons} is not a constructor of {t}"))?;
                for (a, at) in args.iter().zip(def.args) {
                    if !self.tys.contains_key(a) {
                        self.tys.insert(a.clone(), at);
                        changed = true;
                    }
                }
            }
        }
        Ok(changed)
    }
}

fn matcher(formal: &Type, actual: &Type, subst: &mut BTreeMap<Name, Type>) {
    match (formal, actual) {
        (Type::Var(v), _) => {
            subst.entry(v.clone()).or_insert_with(|| actual.clone());
        }
        (Type::Named(n1, a1), Type::Named(n2, a2)) if n1 == n2 => {
            a1.iter().zip(a2).for_each(|(f, a)| matcher(f, a, subst));
        }
        (Type::Ref(f), Type::Ref(a)) | (Type::Array(f), Type::Array(a)) => matcher(f, a, subst),
        _ => {}
    }
}

fn lower_stmts(dom: &Domain, eqs: &[CondStmt], env: &BTreeMap<Name, Type>) -> Result<Lowered, String> {
    let mut typing = Typing { dom, tys: env.clone() };
    let mut eq_types: Vec<Option<Type>> = vec![None; eqs.len()];
    loop {
        let mut changed = false;
        for (i, eq) in eqs.iter().enumerate() {
            let (lt, rt) = (typing.side(&eq.lhs)?, typing.side(&eq.rhs)?);
            if let (Some(l), Some(r)) = (&lt, &rt) {
                if l != r {
                    return Err(format!("condition sides have types {l} and {r}"));
                }
            }
            let Some(t) = lt.or(rt) else { continue };
            changed |= typing.bind(&eq.lhs, &t)?;
            changed |= typing.bind(&eq.rhs, &t)?;
            eq_types[i] = Some(t);
        }
        if !changed {
            break;
        }
    }
    let mut abstracts = BTreeMap::new();
    let mut typed = Vec::new();
    for (eq, t) in eqs.iter().zip(eq_types) {
        let t = t.ok_or_else(|| "cannot determine the type of a condition".to_string())?;
        for side in [&eq.lhs, &eq.rhs] {
            if matches!(side, CondExpr::Deref { var, .. } if var == ABSTRACT) {
                abstracts.insert(abstract_name(&t), t.clone());
            }
        }
        typed.push((eq, t));
    }
    let mut set = self_pairs(dom, &typing.tys);
    set.extend(&self_pairs(dom, &abstracts));
    loop {
        let before = set.len();
        for (eq, t) in &typed {
            let groups: Vec<Vec<VarComp>> = dom
                .comps(t)
                .iter()
                .map(|c| {
                    let mut g = members(dom, &typing.tys, &eq.lhs, t, c);
                    g.extend(members(dom, &typing.tys, &eq.rhs, t, c));
                    g.sort();
                    g.dedup();
                    g
                })
                .collect();
            unify_groups(&mut set, &groups);
        }
        if set.len() == before {
            break;
        }
    }
    let set = set.restrict(|v| env.contains_key(v) || abstracts.contains_key(v));
    Ok(Lowered { set, abstracts })
}

/// Components of the condition variables that hold the words at component
/// `c` of an equation side of type `t`.
fn members(dom: &Domain, tys: &BTreeMap<Name, Type>, e: &CondExpr, t: &Type, c: &Comp) -> Vec<VarComp> {
    match e {
        CondExpr::Deref { var, .. } if var == ABSTRACT => vec![VarComp::new(abstract_name(t), c.clone())],
        CondExpr::Deref { derefs: 0, var } => vec![VarComp::new(var.clone(), c.clone())],
        CondExpr::Deref { derefs, var } => {
            let mut raw = vec![Step::deref(); *derefs];
            raw.extend(c.0.iter().cloned());
            dom.fold(&tys[var], &raw).map(|fc| VarComp::new(var.clone(), fc)).into_iter().collect()
        }
        CondExpr::Cons { cons, args } => {
            let mut out = Vec::new();
            for (i, a) in args.iter().enumerate() {
                let step = Step::new(cons, i as u32 + 1);
                for c1 in dom.comps(&tys[a]).iter() {
                    let raw = [std::slice::from_ref(&step), c1.steps()].concat();
                    if dom.fold(t, &raw).as_ref() == Some(c) {
                        out.push(VarComp::new(a.clone(), c1.clone()));
                    }
                }
            }
            out
        }
    }
}

/// Makes each group a clique and lifts existing sharing of any member to
/// the whole group.
fn unify_groups(set: &mut AliasSet, groups: &[Vec<VarComp>]) {
    let mut index: BTreeMap<&VarComp, Vec<usize>> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        for m in g {
            index.entry(m).or_default().push(i);
        }
    }
    let mut add = AliasSet::new();
    for g in groups {
        for a in g {
            for b in g {
                add.insert(a.clone(), b.clone());
            }
        }
    }
    let none = Vec::new();
    for (u, z) in set.iter() {
        let (gu, gz) = (index.get(u).unwrap_or(&none), index.get(z).unwrap_or(&none));
        for &i in gu {
            for &j in gz {
                for a in &groups[i] {
                    for b in &groups[j] {
                        add.insert(a.clone(), b.clone());
                    }
                }
            }
        }
        if gz.is_empty() {
            for &i in gu {
                groups[i].iter().for_each(|a| {
                    add.insert(a.clone(), z.clone());
                });
            }
        }
        if gu.is_empty() {
            for &j in gz {
                groups[j].iter().for_each(|b| {
                    add.insert(u.clone(), b.clone());
                });
            }
        }
    }
    set.extend(&add);
}

fn lower_explicit(dom: &Domain, sets: &[Vec<RawVarComp>], env: &BTreeMap<Name, Type>) -> Result<Lowered, String> {
    let mut candidates: BTreeMap<Name, Type> = BTreeMap::new();
    for t in env.values() {
        let mut seen = BTreeSet::new();
        collect_types(dom, t, &mut seen);
        for ty in seen {
            candidates.insert(abstract_name(&ty), ty);
        }
    }
    let mut abstracts = BTreeMap::new();
    let mut set = self_pairs(dom, env);
    for group in sets {
        let mut members = Vec::new();
        for raw in group {
            let t = match env.get(&raw.var) {
                Some(t) => t.clone(),
                None => {
                    let t = candidates.get(&raw.var).ok_or_else(|| format!("unknown variable {}", raw.var))?;
                    abstracts.insert(raw.var.clone(), t.clone());
                    t.clone()
                }
            };
            let steps: Vec<Step> = raw.steps.iter().map(|(c, i)| Step::new(c, *i)).collect();
            let comp = Comp(steps.clone());
            let comp = if dom.has_comp(&t, &comp) {
                comp
            } else {
                dom.fold(&t, &steps).ok_or_else(|| format!("{}.{comp} is not a component", raw.var))?
            };
            members.push(VarComp::new(raw.var.clone(), comp));
        }
        for a in &members {
            for b in &members {
                set.insert(a.clone(), b.clone());
            }
        }
    }
    set.extend(&self_pairs(dom, &abstracts));
    Ok(Lowered { set, abstracts })
}

fn collect_types(dom: &Domain, t: &Type, seen: &mut BTreeSet<Type>) {
    if seen.insert(t.clone()) {
        for (_, ct) in dom.steps(t) {
            collect_types(dom, &ct, seen);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainMode;
    use crate::load;

    fn vc(s: &str) -> VarComp {
        s.parse().unwrap()
    }

    #[test]
    fn list_bst_precondition() {
        let p = load(
            "data Ints = Nil | Cons Int Ints\ndata Tree = TNil | Node Tree Int Tree\n\
             fn f (xs: Ints) -> Tree pre xs = abstract post ret = abstract { ret = TNil }",
        )
        .unwrap();
        let dom = Domain::new(&p, DomainMode::OldFold);
        let env = BTreeMap::from([("xs".to_string(), Type::Named("Ints".into(), vec![]))]);
        let l = lower(&dom, &p.funcs[0].sig.pre, &env).unwrap();
        assert!(l.set.contains(&vc("xs.[]"), &vc("abstract_Ints.[]")));
        assert!(l.set.contains(&vc("xs.[Cons.1]"), &vc("abstract_Ints.[Cons.1]")));
        assert!(!l.set.contains(&vc("xs.[]"), &vc("abstract_Ints.[Cons.1]")));
        assert_eq!(l.set.len(), 6);
    }

    #[test]
    fn double_deref_post() {
        let p = load("fn f2 (!v1: Ref (Ref (Ref Int)), !v2: Ref (Ref (Ref Int))) -> () post **v1 = **v2 { ret = () }")
            .unwrap();
        let dom = Domain::new(&p, DomainMode::NewFold);
        let f = &p.funcs[0];
        let env: BTreeMap<Name, Type> = f.sig.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
        let l = lower(&dom, &f.sig.post, &env).unwrap();
        assert!(l.set.contains(&vc("v1.[Ref.1,Ref.1,Ref.1]"), &vc("v2.[Ref.1,Ref.1,Ref.1]")));
        assert!(!l.set.contains(&vc("v1.[Ref.1,Ref.1]"), &vc("v2.[Ref.1,Ref.1]")));
    }

    #[test]
    fn fresh_variables_are_projected_out() {
        let p = load(
            "data Ints = Nil | Cons Int Ints\n\
             fn f (xs: Ints, ys: Ints) -> Ints post xs = Cons h t; t = ys { ret = Nil }",
        )
        .unwrap();
        let dom = Domain::new(&p, DomainMode::OldFold);
        let ints = Type::Named("Ints".into(), vec![]);
        let env = BTreeMap::from([("xs".to_string(), ints.clone()), ("ys".to_string(), ints)]);
        let l = lower(&dom, &p.funcs[0].sig.post, &env).unwrap();
        assert!(l.set.contains(&vc("xs.[]"), &vc("ys.[]")));
        assert!(l.set.vars().iter().all(|v| v == "xs" || v == "ys"));
    }
}
