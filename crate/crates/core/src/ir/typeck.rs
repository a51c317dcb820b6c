//! Type inference for core programs.
//!
//! Every variable gets one monomorphic type. Signature type variables are
//! rigid inside the definition and become the opaque one-word type
//! `Ref ()` once inference is done; callee signatures are instantiated
//! afresh at each application.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{type_err, Result};
use crate::ir::ast::*;
use crate::ir::builtins;

/// Largest number of distinct instances a data type may reach through its
/// own constructors before it is treated as non-regular.
const MAX_INSTANCES: usize = 512;

/// Data definitions visible to a program, built-ins included.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    pub datas: BTreeMap<Name, DataDef>,
    pub cons_owner: BTreeMap<Name, Name>,
}

impl TypeEnv {
    pub fn new(prog: &Program) -> TypeEnv {
        let mut env = TypeEnv::default();
        for d in builtins::datas().into_iter().chain(prog.datas.iter().cloned()) {
            for c in &d.constructors {
                env.cons_owner.insert(c.name.clone(), d.name.clone());
            }
            env.datas.insert(d.name.clone(), d);
        }
        env
    }

    /// Constructors of a fully applied data type with argument types
    /// instantiated.
    pub fn constructors(&self, name: &str, args: &[Type]) -> Option<Vec<ConsDef>> {
        let d = self.datas.get(name)?;
        let map: BTreeMap<Name, Type> = d.params.iter().cloned().zip(args.iter().cloned()).collect();
        Some(
            d.constructors
                .iter()
                .map(|c| ConsDef { name: c.name.clone(), args: c.args.iter().map(|a| a.subst(&map)).collect() })
                .collect(),
        )
    }

    pub fn constructor(&self, ty: &Type, cons: &str) -> Option<ConsDef> {
        match ty {
            Type::Named(n, args) => self.constructors(n, args)?.into_iter().find(|c| c.name == cons),
            _ => None,
        }
    }
}

pub fn check_types(mut prog: Program) -> Result<Program> {
    let aliases = resolve_aliases(&prog)?;
    let expand = |t: &Type| expand_aliases(t, &aliases);
    for d in &mut prog.datas {
        for c in &mut d.constructors {
            c.args = c.args.iter().map(expand).collect();
        }
    }
    for f in &mut prog.funcs {
        for p in &mut f.sig.params {
            p.ty = expand(&p.ty);
        }
        f.sig.result_ty = expand(&f.sig.result_ty);
        expand_body(&mut f.body, &aliases);
    }
    let env = TypeEnv::new(&prog);
    for d in &prog.datas {
        check_data(d, &env)?;
    }
    for d in &prog.datas {
        check_regular(d, &env)?;
    }
    for f in &prog.funcs {
        check_sig(f, &env)?;
    }
    let sigs: BTreeMap<Name, SharingSig> = prog.funcs.iter().map(|f| (f.name.clone(), f.sig.clone())).collect();
    for f in &mut prog.funcs {
        let mut inf = Infer {
            env: &env,
            sigs: &sigs,
            metas: Vec::new(),
            vars: BTreeMap::new(),
            apps: BTreeMap::new(),
            instypes: Vec::new(),
        };
        inf.function(f)?;
    }
    Ok(prog)
}

fn resolve_aliases(prog: &Program) -> Result<BTreeMap<Name, Type>> {
    let raw: BTreeMap<&str, &TypeAlias> = prog.aliases.iter().map(|a| (a.name.as_str(), a)).collect();
    let mut done = BTreeMap::new();
    fn go(
        name: &str,
        raw: &BTreeMap<&str, &TypeAlias>,
        done: &mut BTreeMap<Name, Type>,
        stack: &mut Vec<String>,
    ) -> Result<Type> {
        if let Some(t) = done.get(name) {
            return Ok(t.clone());
        }
        let a = raw[name];
        if stack.iter().any(|s| s == name) {
            return type_err(a.pos, format!("type {name} is an infinite chain of refs or aliases"));
        }
        stack.push(name.to_string());
        let t = subst_aliases(&a.ty, &mut |n| if raw.contains_key(n) { Some(go(n, raw, done, stack)) } else { None })?;
        stack.pop();
        done.insert(name.to_string(), t.clone());
        Ok(t)
    }
    for a in &prog.aliases {
        go(&a.name, &raw, &mut done, &mut Vec::new())?;
    }
    for a in &prog.aliases {
        if let Type::Named(n, args) = &a.ty {
            if raw.contains_key(n.as_str()) && !args.is_empty() {
                return type_err(a.pos, format!("type alias {n} takes no arguments"));
            }
        }
    }
    Ok(done)
}

fn subst_aliases(t: &Type, look: &mut dyn FnMut(&str) -> Option<Result<Type>>) -> Result<Type> {
    Ok(match t {
        Type::Var(_) => t.clone(),
        Type::Named(n, args) if args.is_empty() => match look(n) {
            Some(r) => r?,
            None => t.clone(),
        },
        Type::Named(n, args) => {
            Type::Named(n.clone(), args.iter().map(|a| subst_aliases(a, look)).collect::<Result<_>>()?)
        }
        Type::Ref(x) => Type::reference(subst_aliases(x, look)?),
        Type::Array(x) => Type::Array(Box::new(subst_aliases(x, look)?)),
        Type::Fn(_) => t.clone(),
    })
}

fn expand_aliases(t: &Type, aliases: &BTreeMap<Name, Type>) -> Type {
    subst_aliases(t, &mut |n| aliases.get(n).cloned().map(Ok)).expect("aliases already resolved")
}

fn expand_body(stmts: &mut [Stmt], aliases: &BTreeMap<Name, Type>) {
    for s in stmts {
        match &mut s.kind {
            StmtKind::Instype { ty, .. } => *ty = expand_aliases(ty, aliases),
            StmtKind::Case { alts, .. } => alts.iter_mut().for_each(|a| expand_body(&mut a.body, aliases)),
            _ => {}
        }
    }
}

fn check_wf(t: &Type, env: &TypeEnv, vars: Option<&[Name]>, pos: Pos) -> Result<()> {
    match t {
        Type::Var(v) => match vars {
            Some(vs) if !vs.contains(v) => type_err(pos, format!("type variable {v} is not a parameter")),
            _ => Ok(()),
        },
        Type::Named(n, args) => {
            if n == INT {
                if !args.is_empty() {
                    return type_err(pos, "Int takes no arguments");
                }
                return Ok(());
            }
            let Some(d) = env.datas.get(n) else {
                return type_err(pos, format!("unknown type {n}"));
            };
            if d.params.len() != args.len() {
                return type_err(pos, format!("type {n} expects {} arguments, got {}", d.params.len(), args.len()));
            }
            args.iter().try_for_each(|a| check_wf(a, env, vars, pos))
        }
        Type::Ref(x) | Type::Array(x) => check_wf(x, env, vars, pos),
        Type::Fn(_) => type_err(pos, "function types cannot be written in source"),
    }
}

fn check_data(d: &DataDef, env: &TypeEnv) -> Result<()> {
    let uniq: BTreeSet<&Name> = d.params.iter().collect();
    if uniq.len() != d.params.len() {
        return type_err(d.pos, format!("repeated type parameter in {}", d.name));
    }
    for c in &d.constructors {
        for a in &c.args {
            check_wf(a, env, Some(&d.params), d.pos)?;
        }
    }
    Ok(())
}

/// Rejects data types whose recursive occurrences grow their arguments,
/// which would have no finite set of components.
fn check_regular(d: &DataDef, env: &TypeEnv) -> Result<()> {
    let root = Type::Named(d.name.clone(), d.params.iter().map(|p| Type::Var(p.clone())).collect());
    let mut seen = BTreeSet::new();
    let mut work = vec![root];
    while let Some(t) = work.pop() {
        if !seen.insert(t.clone()) {
            continue;
        }
        if seen.len() > MAX_INSTANCES {
            return type_err(d.pos, format!("type {} is not regular", d.name));
        }
        match &t {
            Type::Named(n, args) => {
                for c in env.constructors(n, args).unwrap_or_default() {
                    work.extend(c.args);
                }
            }
            Type::Ref(x) | Type::Array(x) => work.push((**x).clone()),
            _ => {}
        }
    }
    Ok(())
}

fn check_sig(f: &FuncDef, env: &TypeEnv) -> Result<()> {
    let mut names = BTreeSet::new();
    for p in &f.sig.params {
        check_wf(&p.ty, env, None, f.pos)?;
        if !names.insert(&p.name) {
            return type_err(f.pos, format!("parameter {} declared twice", p.name));
        }
    }
    if names.contains(&f.sig.result) {
        return type_err(f.pos, format!("result name {} clashes with a parameter", f.sig.result));
    }
    check_wf(&f.sig.result_ty, env, None, f.pos)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Meta(usize),
    Rigid(Name),
    Con(Name, Vec<Ty>),
    Ref(Box<Ty>),
    Array(Box<Ty>),
    Fn { func: Name, params: Vec<Ty>, result: Box<Ty>, supplied: usize },
}

struct Infer<'a> {
    env: &'a TypeEnv,
    sigs: &'a BTreeMap<Name, SharingSig>,
    metas: Vec<Option<Ty>>,
    vars: BTreeMap<Name, Ty>,
    apps: BTreeMap<Point, Ty>,
    instypes: Vec<(Ty, Ty, Pos)>,
}

/// Variables bound on the current path; `None` once the path has hit
/// `error` and can no longer fall through.
type Scope = Option<BTreeSet<Name>>;

impl Infer<'_> {
    fn fresh(&mut self) -> Ty {
        self.metas.push(None);
        Ty::Meta(self.metas.len() - 1)
    }

    fn lift_type(&mut self, t: &Type, vars: &mut BTreeMap<Name, Ty>, rigid: bool) -> Ty {
        match t {
            Type::Var(v) => {
                if let Some(m) = vars.get(v) {
                    return m.clone();
                }
                let m = if rigid { Ty::Rigid(v.clone()) } else { self.fresh() };
                vars.insert(v.clone(), m.clone());
                m
            }
            Type::Named(n, args) => Ty::Con(n.clone(), args.iter().map(|a| self.lift_type(a, vars, rigid)).collect()),
            Type::Ref(x) => Ty::Ref(Box::new(self.lift_type(x, vars, rigid))),
            Type::Array(x) => Ty::Array(Box::new(self.lift_type(x, vars, rigid))),
            Type::Fn(f) => Ty::Fn {
                func: f.func.clone(),
                params: f.params.iter().map(|p| self.lift_type(p, vars, rigid)).collect(),
                result: Box::new(self.lift_type(&f.result, vars, rigid)),
                supplied: f.supplied,
            },
        }
    }

    fn resolve(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(m) = t {
            match &self.metas[m] {
                Some(x) => t = x.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Rigid(_) => false,
            Ty::Con(_, args) => args.iter().any(|a| self.occurs(m, a)),
            Ty::Ref(x) | Ty::Array(x) => self.occurs(m, &x),
            Ty::Fn { params, result, .. } => params.iter().any(|p| self.occurs(m, p)) || self.occurs(m, &result),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, pos: Pos) -> Result<()> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Meta(x), Ty::Meta(y)) if x == y => Ok(()),
            (Ty::Meta(m), t) | (t, Ty::Meta(m)) => {
                if self.occurs(*m, t) {
                    return type_err(pos, format!("infinite type {}", self.show(t)));
                }
                self.metas[*m] = Some(t.clone());
                Ok(())
            }
            (Ty::Rigid(x), Ty::Rigid(y)) if x == y => Ok(()),
            (Ty::Con(n, xs), Ty::Con(m, ys)) if n == m && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify(x, y, pos))
            }
            (Ty::Ref(x), Ty::Ref(y)) | (Ty::Array(x), Ty::Array(y)) => self.unify(x, y, pos),
            (
                Ty::Fn { func: f1, params: p1, result: r1, supplied: s1 },
                Ty::Fn { func: f2, params: p2, result: r2, supplied: s2 },
            ) if f1 == f2 && s1 == s2 && p1.len() == p2.len() => {
                p1.iter().zip(p2).try_for_each(|(x, y)| self.unify(x, y, pos))?;
                self.unify(r1, r2, pos)
            }
            _ => type_err(pos, format!("type mismatch: {} vs {}", self.show(&a), self.show(&b))),
        }
    }

    fn zonk(&self, t: &Ty) -> Type {
        match self.resolve(t) {
            Ty::Meta(_) | Ty::Rigid(_) => Type::opaque(),
            Ty::Con(n, args) => Type::Named(n, args.iter().map(|a| self.zonk(a)).collect()),
            Ty::Ref(x) => Type::reference(self.zonk(&x)),
            Ty::Array(x) => Type::Array(Box::new(self.zonk(&x))),
            Ty::Fn { func, params, result, supplied } => Type::Fn(FnType {
                func,
                params: params.iter().map(|p| self.zonk(p)).collect(),
                result: Box::new(self.zonk(&result)),
                supplied,
            }),
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Meta(m) => format!("?{m}"),
            Ty::Rigid(v) => v,
            _ => self.zonk(t).to_string(),
        }
    }

    fn global(&mut self, name: &str) -> Option<Ty> {
        let sig = self.sigs.get(name).cloned().or_else(|| builtins::signature(name))?;
        let mut vars = BTreeMap::new();
        let params = sig.params.iter().map(|p| self.lift_type(&p.ty, &mut vars, false)).collect();
        let result = Box::new(self.lift_type(&sig.result_ty, &mut vars, false));
        Some(Ty::Fn { func: name.to_string(), params, result, supplied: 0 })
    }

    fn lookup(&mut self, v: &str, scope: &Scope, pos: Pos) -> Result<Ty> {
        let bound = scope.as_ref().is_none_or(|s| s.contains(v));
        if bound {
            if let Some(t) = self.vars.get(v) {
                return Ok(t.clone());
            }
        }
        if let Some(t) = self.global(v) {
            return Ok(t);
        }
        type_err(pos, format!("variable {v} used before it is bound"))
    }

    fn bind(&mut self, v: &str, t: Ty, scope: &mut Scope, params: &BTreeSet<Name>, pos: Pos) -> Result<()> {
        if params.contains(v) {
            return type_err(pos, format!("parameter {v} cannot be rebound"));
        }
        if let Some(s) = scope {
            if !s.insert(v.to_string()) {
                return type_err(pos, format!("variable {v} bound twice"));
            }
        }
        match self.vars.get(v).cloned() {
            Some(old) => self.unify(&old, &t, pos),
            None => {
                self.vars.insert(v.to_string(), t);
                Ok(())
            }
        }
    }

    fn function(&mut self, f: &mut FuncDef) -> Result<()> {
        let mut tvars = BTreeMap::new();
        let mut params = BTreeSet::new();
        let mut scope = BTreeSet::new();
        for p in &f.sig.params {
            let t = self.lift_type(&p.ty, &mut tvars, true);
            self.vars.insert(p.name.clone(), t);
            params.insert(p.name.clone());
            scope.insert(p.name.clone());
        }
        let rt = self.lift_type(&f.sig.result_ty, &mut tvars, true);
        self.vars.insert(f.sig.result.clone(), rt);
        let mut scope = Some(scope);
        self.block(&mut f.body, &mut scope, &params)?;
        if let Some(s) = &scope {
            if !s.contains(&f.sig.result) {
                return type_err(f.pos, format!("{} does not bind {} on every path", f.name, f.sig.result));
            }
        }
        for (src, target, pos) in std::mem::take(&mut self.instypes) {
            let mut binding = BTreeMap::new();
            if !self.instance_of(&src, &target, &mut binding) {
                return type_err(pos, format!("{} is not an instance of {}", self.show(&target), self.show(&src)));
            }
        }
        f.types.var_types = self.vars.iter().map(|(v, t)| (v.clone(), self.zonk(t))).collect();
        f.types.app_types = self
            .apps
            .iter()
            .map(|(p, t)| match self.zonk(t) {
                Type::Fn(ft) => (*p, ft),
                _ => unreachable!("application of a non-function"),
            })
            .collect();
        Ok(())
    }

    /// Whether `target` is obtained from `general` by substituting its
    /// unresolved type variables.
    fn instance_of(&self, general: &Ty, target: &Ty, binding: &mut BTreeMap<String, Ty>) -> bool {
        let (g, t) = (self.resolve(general), self.resolve(target));
        match (&g, &t) {
            (Ty::Meta(_), _) | (Ty::Rigid(_), _) => {
                let key = self.show(&g);
                match binding.get(&key) {
                    Some(prev) => self.zonk(prev) == self.zonk(&t),
                    None => {
                        binding.insert(key, t.clone());
                        true
                    }
                }
            }
            (Ty::Con(n, xs), Ty::Con(m, ys)) => {
                n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.instance_of(x, y, binding))
            }
            (Ty::Ref(x), Ty::Ref(y)) | (Ty::Array(x), Ty::Array(y)) => self.instance_of(x, y, binding),
            _ => self.zonk(&g) == self.zonk(&t),
        }
    }

    fn block(&mut self, stmts: &mut [Stmt], scope: &mut Scope, params: &BTreeSet<Name>) -> Result<()> {
        for s in stmts {
            self.stmt(s, scope, params)?;
        }
        Ok(())
    }

    fn stmt(&mut self, s: &mut Stmt, scope: &mut Scope, params: &BTreeSet<Name>) -> Result<()> {
        let pos = s.pos;
        for b in &s.bang {
            if self.lookup(b, scope, pos).is_err() || !self.vars.contains_key(b) {
                return type_err(pos, format!("annotated variable {b} is not bound"));
            }
        }
        match &mut s.kind {
            StmtKind::EqVar { v, src } => {
                let t = self.lookup(src, scope, pos)?;
                self.bind(v, t, scope, params, pos)
            }
            StmtKind::EqDeref { v, src } => {
                let t = self.lookup(src, scope, pos)?;
                let m = self.fresh();
                self.unify(&t, &Ty::Ref(Box::new(m.clone())), pos)?;
                self.bind(v, m, scope, params, pos)
            }
            StmtKind::DerefEq { v, src } => {
                let t = self.lookup(src, scope, pos)?;
                self.bind(v, Ty::Ref(Box::new(t)), scope, params, pos)
            }
            StmtKind::Dc { v, cons, args } => {
                let t = match cons {
                    Ctor::Int(_) => Ty::Con(INT.into(), vec![]),
                    Ctor::Named(c) if c == ARRAY_CONS => {
                        let m = self.fresh();
                        for a in args.iter() {
                            let at = self.lookup(a, scope, pos)?;
                            self.unify(&m, &at, pos)?;
                        }
                        Ty::Array(Box::new(m))
                    }
                    Ctor::Named(c) => {
                        let Some(owner) = self.env.cons_owner.get(c.as_str()) else {
                            return type_err(pos, format!("unknown constructor {c}"));
                        };
                        let d = &self.env.datas[owner];
                        let cdef = d.constructors.iter().find(|k| &k.name == c).expect("owner table");
                        if cdef.args.len() != args.len() {
                            return type_err(
                                pos,
                                format!("constructor {c} expects {} arguments, got {}", cdef.args.len(), args.len()),
                            );
                        }
                        let mut tv = BTreeMap::new();
                        let targs: Vec<Ty> =
                            d.params.iter().map(|p| self.lift_type(&Type::Var(p.clone()), &mut tv, false)).collect();
                        for (a, at) in args.iter().zip(&cdef.args) {
                            let expect = self.lift_type(at, &mut tv, false);
                            let got = self.lookup(a, scope, pos)?;
                            self.unify(&expect, &got, pos)?;
                        }
                        Ty::Con(d.name.clone(), targs)
                    }
                };
                self.bind(v, t, scope, params, pos)
            }
            StmtKind::Case { v, alts } => {
                let vt = self.lookup(v, scope, pos)?;
                let Some(first) = alts.first() else {
                    return type_err(pos, "case with no alternatives");
                };
                let Some(owner) = self.env.cons_owner.get(&first.pat.cons).cloned() else {
                    return type_err(first.pos, format!("unknown constructor {}", first.pat.cons));
                };
                let d = self.env.datas[&owner].clone();
                let mut tv = BTreeMap::new();
                let targs: Vec<Ty> =
                    d.params.iter().map(|p| self.lift_type(&Type::Var(p.clone()), &mut tv, false)).collect();
                self.unify(&vt, &Ty::Con(d.name.clone(), targs), pos)?;
                let covered: BTreeSet<&Name> = alts.iter().map(|a| &a.pat.cons).collect();
                for c in &d.constructors {
                    if !covered.contains(&c.name) {
                        return type_err(pos, format!("case on {v} does not cover {}", c.name));
                    }
                }
                let mut after: Option<BTreeSet<Name>> = None;
                let mut any_falls = false;
                for a in alts.iter_mut() {
                    let Some(cdef) = d.constructors.iter().find(|k| k.name == a.pat.cons) else {
                        return type_err(a.pos, format!("constructor {} does not belong to {}", a.pat.cons, d.name));
                    };
                    if cdef.args.len() != a.pat.refs.len() {
                        return type_err(
                            a.pos,
                            format!(
                                "pattern {} expects {} arguments, got {}",
                                a.pat.cons,
                                cdef.args.len(),
                                a.pat.refs.len()
                            ),
                        );
                    }
                    let mut inner = scope.clone();
                    for (r, at) in a.pat.refs.iter().zip(&cdef.args) {
                        let t = self.lift_type(at, &mut tv, false);
                        self.bind(r, Ty::Ref(Box::new(t)), &mut inner, params, a.pos)?;
                    }
                    self.block(&mut a.body, &mut inner, params)?;
                    if let Some(s) = inner {
                        any_falls = true;
                        after = Some(match after {
                            None => s,
                            Some(prev) => prev.intersection(&s).cloned().collect(),
                        });
                    }
                }
                if scope.is_some() {
                    *scope = if any_falls { after } else { None };
                }
                Ok(())
            }
            StmtKind::Error => {
                *scope = None;
                Ok(())
            }
            StmtKind::App { v, f, args } => {
                let ft = self.lookup(f, scope, pos)?;
                let Ty::Fn { func, params: fps, result, supplied } = self.resolve(&ft) else {
                    return type_err(pos, format!("{f} is not a function"));
                };
                let remaining = fps.len() - supplied;
                if args.len() > remaining {
                    let extra_banged = args[remaining..].iter().all(|a| s.bang.contains(a));
                    if !extra_banged {
                        return type_err(pos, format!("{f} expects {remaining} arguments, got {}", args.len()));
                    }
                    args.truncate(remaining);
                }
                if args.is_empty() {
                    return type_err(pos, format!("application of {f} to no arguments"));
                }
                for (a, pt) in args.iter().zip(&fps[supplied..]) {
                    let at = self.lookup(a, scope, pos)?;
                    self.unify(pt, &at, pos)?;
                }
                let n = supplied + args.len();
                let vt = if n == fps.len() {
                    (*result).clone()
                } else {
                    Ty::Fn { func: func.clone(), params: fps.clone(), result: result.clone(), supplied: n }
                };
                self.apps.insert(s.point, Ty::Fn { func, params: fps, result, supplied });
                self.bind(v, vt, scope, params, pos)
            }
            StmtKind::Assign { v, src } => {
                let vt = self.lookup(v, scope, pos)?;
                let st = self.lookup(src, scope, pos)?;
                self.unify(&vt, &Ty::Ref(Box::new(st)), pos)
            }
            StmtKind::Instype { v, src, ty } => {
                let st = self.lookup(src, scope, pos)?;
                let mut tv = BTreeMap::new();
                let target = self.lift_type(ty, &mut tv, false);
                self.instypes.push((st, target.clone(), pos));
                self.bind(v, target, scope, params, pos)
            }
            StmtKind::ArrayRef { v, array, index } => {
                let at = self.lookup(array, scope, pos)?;
                let m = self.fresh();
                self.unify(&at, &Ty::Array(Box::new(m.clone())), pos)?;
                let it = self.lookup(index, scope, pos)?;
                self.unify(&it, &Ty::Con(INT.into(), vec![]), pos)?;
                self.bind(v, Ty::Ref(Box::new(m)), scope, params, pos)
            }
        }
    }
}
