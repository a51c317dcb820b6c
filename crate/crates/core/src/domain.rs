//! Components of types and path folding.
//!
//! A component names a class of heap words inside a value: the path of
//! (constructor, argument) steps leading to them, folded at type recursion
//! so every type has finitely many. Two folding regimes are supported.
//! [`DomainMode::OldFold`] folds a step back to the earliest ancestor of the
//! same type, so recursive sub-parts share the empty path.
//! [`DomainMode::NewFold`] folds every step but the last in that way and
//! keeps the last step, so components are never empty and words of
//! different constructors stay apart.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ir::ast::{Name, Program, Type, ARRAY_CONS, INT};
use crate::ir::typeck::TypeEnv;

pub const REF: &str = "Ref";
pub const CL: &str = "Cl";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainMode {
    #[serde(rename = "old")]
    OldFold,
    #[default]
    #[serde(rename = "new")]
    NewFold,
}

impl FromStr for DomainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<DomainMode> {
        match s {
            "old" => Ok(DomainMode::OldFold),
            "new" => Ok(DomainMode::NewFold),
            _ => Err(Error::Domain(format!("unknown domain mode {s}"))),
        }
    }
}

impl fmt::Display for DomainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainMode::OldFold => "old",
            DomainMode::NewFold => "new",
        })
    }
}

/// One path step: argument `arg` (1-based) of constructor `cons`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub cons: Name,
    pub arg: u32,
}

impl Step {
    pub fn new(cons: &str, arg: u32) -> Step {
        Step { cons: cons.to_string(), arg }
    }

    pub fn deref() -> Step {
        Step::new(REF, 1)
    }

    pub fn closure(i: usize) -> Step {
        Step::new(CL, i as u32)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.cons, self.arg)
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Step> {
        let bad = || Error::Domain(format!("bad path step {s}"));
        let (cons, arg) = s.rsplit_once('.').ok_or_else(bad)?;
        let arg: u32 = arg.parse().map_err(|_| bad())?;
        if cons.is_empty() || arg == 0 {
            return Err(bad());
        }
        Ok(Step::new(cons, arg))
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Step, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A folded path.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Comp(pub Vec<Step>);

impl Comp {
    pub fn empty() -> Comp {
        Comp(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    /// This path with `more` appended, unfolded.
    pub fn join(&self, more: &[Step]) -> Vec<Step> {
        let mut v = self.0.clone();
        v.extend_from_slice(more);
        v
    }

    pub fn starts_with(&self, prefix: &[Step]) -> bool {
        self.0.starts_with(prefix)
    }
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Comp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Comp> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Domain(format!("bad component {s}")))?;
        if inner.trim().is_empty() {
            return Ok(Comp::empty());
        }
        inner.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<_>>>().map(Comp)
    }
}

type PreKey = (Type, Comp);

/// Component algebra for the types of one program under one folding mode.
pub struct Domain {
    env: TypeEnv,
    mode: DomainMode,
    comps: RwLock<HashMap<Type, Arc<Vec<Comp>>>>,
    preimages: RwLock<HashMap<PreKey, Arc<Vec<Vec<Step>>>>>,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain").field("mode", &self.mode).finish_non_exhaustive()
    }
}

impl Domain {
    pub fn new(prog: &Program, mode: DomainMode) -> Domain {
        Domain {
            env: TypeEnv::new(prog),
            mode,
            comps: RwLock::new(HashMap::new()),
            preimages: RwLock::new(HashMap::new()),
        }
    }

    pub fn mode(&self) -> DomainMode {
        self.mode
    }

    pub fn env(&self) -> &TypeEnv {
        &self.env
    }

    /// Every legal step out of a value of type `t`, with the type reached.
    pub fn steps(&self, t: &Type) -> Vec<(Step, Type)> {
        match t {
            Type::Ref(x) => vec![(Step::deref(), (**x).clone())],
            Type::Array(x) => vec![(Step::new(ARRAY_CONS, 1), (**x).clone())],
            Type::Named(n, _) if n == INT => vec![],
            Type::Named(n, args) => self
                .env
                .constructors(n, args)
                .unwrap_or_default()
                .into_iter()
                .flat_map(|c| {
                    let name = c.name;
                    c.args.into_iter().enumerate().map(move |(i, a)| (Step::new(&name, i as u32 + 1), a))
                })
                .collect(),
            Type::Fn(ft) => (1..=ft.supplied).map(|i| (Step::closure(i), ft.params[ft.supplied - i].clone())).collect(),
            Type::Var(_) => self.steps(&Type::opaque()),
        }
    }

    pub fn child(&self, t: &Type, step: &Step) -> Option<Type> {
        match t {
            Type::Ref(x) if step.cons == REF && step.arg == 1 => Some((**x).clone()),
            Type::Array(x) if step.cons == ARRAY_CONS && step.arg == 1 => Some((**x).clone()),
            Type::Var(_) => self.child(&Type::opaque(), step),
            Type::Named(..) => {
                let c = self.env.constructor(t, &step.cons)?;
                c.args.get((step.arg as usize).checked_sub(1)?).cloned()
            }
            Type::Fn(ft) if step.cons == CL && step.arg >= 1 && (step.arg as usize) <= ft.supplied => {
                Some(ft.params[ft.supplied - step.arg as usize].clone())
            }
            _ => None,
        }
    }

    /// Folds at every recursion point, as in the original domain.
    pub fn fold_old(&self, t: &Type, raw: &[Step]) -> Option<Comp> {
        let mut chain = vec![t.clone()];
        let mut path: Vec<Step> = Vec::with_capacity(raw.len());
        for s in raw {
            let child = self.child(chain.last().expect("chain never empty"), s)?;
            path.push(s.clone());
            match chain.iter().position(|a| *a == child) {
                Some(j) => {
                    path.truncate(j);
                    chain.truncate(j + 1);
                }
                None => chain.push(child),
            }
        }
        Some(Comp(path))
    }

    /// The component a raw, non-empty path from type `t` belongs to.
    pub fn fold(&self, t: &Type, raw: &[Step]) -> Option<Comp> {
        let (last, init) = raw.split_last()?;
        match self.mode {
            DomainMode::OldFold => self.fold_old(t, raw),
            DomainMode::NewFold => {
                let mut c = self.fold_old(t, init)?;
                let ty = self.comp_type(t, &c)?;
                self.child(&ty, last)?;
                c.0.push(last.clone());
                Some(c)
            }
        }
    }

    /// Advances a walk over a value. `cursor` is the old-folded path of the
    /// value being entered and `ty` its type; returns the component of the
    /// word at `step`, the cursor for its contents, and their type.
    pub fn advance(&self, root: &Type, cursor: &Comp, ty: &Type, step: &Step) -> Option<(Comp, Comp, Type)> {
        let child = self.child(ty, step)?;
        let next = self.fold_old(root, &cursor.join(std::slice::from_ref(step)))?;
        let word = match self.mode {
            DomainMode::OldFold => next.clone(),
            DomainMode::NewFold => Comp(cursor.join(std::slice::from_ref(step))),
        };
        Some((word, next, child))
    }

    /// Type of the words a component stands for.
    pub fn comp_type(&self, t: &Type, c: &Comp) -> Option<Type> {
        let mut ty = t.clone();
        for s in &c.0 {
            ty = self.child(&ty, s)?;
        }
        Some(ty)
    }

    pub fn comps(&self, t: &Type) -> Arc<Vec<Comp>> {
        if let Some(c) = self.comps.read().expect("lock").get(t) {
            return c.clone();
        }
        let computed = Arc::new(self.compute_comps(t));
        self.comps.write().expect("lock").insert(t.clone(), computed.clone());
        computed
    }

    fn compute_comps(&self, t: &Type) -> Vec<Comp> {
        let mut seen: BTreeSet<Comp> = BTreeSet::from([Comp::empty()]);
        let mut work = vec![Comp::empty()];
        let mut out = BTreeSet::new();
        while let Some(q) = work.pop() {
            let Some(qt) = self.comp_type(t, &q) else { continue };
            for (s, _) in self.steps(&qt) {
                let raw = q.join(std::slice::from_ref(&s));
                let Some(f) = self.fold_old(t, &raw) else { continue };
                match self.mode {
                    DomainMode::OldFold => {
                        out.insert(f.clone());
                    }
                    DomainMode::NewFold => {
                        out.insert(Comp(raw));
                    }
                }
                if seen.insert(f.clone()) {
                    work.push(f);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn has_comp(&self, t: &Type, c: &Comp) -> bool {
        self.comps(t).binary_search(c).is_ok()
    }

    /// Raw paths one constructor layer deep, `step : c1` with `c1` empty or a
    /// component of the argument type, that fold to `c`.
    pub fn preimages(&self, t: &Type, c: &Comp) -> Arc<Vec<Vec<Step>>> {
        let key = (t.clone(), c.clone());
        if let Some(p) = self.preimages.read().expect("lock").get(&key) {
            return p.clone();
        }
        let mut out = BTreeSet::new();
        for (s, ct) in self.steps(t) {
            let inner = self.comps(&ct);
            for c1 in std::iter::once(&Comp::empty()).chain(inner.iter()) {
                let mut raw = vec![s.clone()];
                raw.extend(c1.0.iter().cloned());
                if self.fold(t, &raw).as_ref() == Some(c) {
                    out.insert(raw);
                }
            }
        }
        let result = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.preimages.write().expect("lock").insert(key, result.clone());
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parser::parse_program;
    use crate::ir::typeck::check_types;

    const RT: &str = "data RTrees = Nil | Cons RTree RTrees\ndata RTree = RNode Int RTrees\n\
                      data Tree = TNil | Node Tree Int Tree";

    fn domain(mode: DomainMode) -> Domain {
        Domain::new(&check_types(parse_program(RT).unwrap()).unwrap(), mode)
    }

    fn named(n: &str) -> Type {
        Type::Named(n.into(), vec![])
    }

    fn c(s: &str) -> Comp {
        s.parse().unwrap()
    }

    fn show(cs: &[Comp]) -> Vec<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn old_components() {
        let d = domain(DomainMode::OldFold);
        assert_eq!(show(&d.comps(&named("RTrees"))), vec!["[]", "[Cons.1]", "[Cons.1,RNode.1]"]);
        assert_eq!(show(&d.comps(&named("RTree"))), vec!["[]", "[RNode.1]", "[RNode.2]"]);
        assert_eq!(show(&d.comps(&named("Tree"))), vec!["[]", "[Node.2]"]);
        assert_eq!(show(&d.comps(&Type::reference(named("Tree")))), vec!["[Ref.1]", "[Ref.1,Node.2]"]);
        assert!(d.comps(&Type::int()).is_empty());
    }

    #[test]
    fn new_components() {
        let d = domain(DomainMode::NewFold);
        assert_eq!(
            show(&d.comps(&named("RTree"))),
            vec!["[RNode.1]", "[RNode.2]", "[RNode.2,Cons.1]", "[RNode.2,Cons.2]"]
        );
        assert_eq!(d.comps(&Type::reference(named("RTree"))).len(), 5);
    }

    #[test]
    fn folding_examples() {
        let old = domain(DomainMode::OldFold);
        assert_eq!(old.fold(&named("RTrees"), &c("[Cons.2]").0), Some(c("[]")));
        let new = domain(DomainMode::NewFold);
        assert_eq!(new.fold(&named("RTree"), &c("[RNode.2,Cons.2,Cons.2]").0), Some(c("[RNode.2,Cons.2]")));
        assert_eq!(new.fold(&named("RTree"), &c("[RNode.7]").0), None);
    }

    #[test]
    fn old_preimages_of_empty() {
        let d = domain(DomainMode::OldFold);
        let pre: BTreeSet<String> =
            d.preimages(&named("RTrees"), &c("[]")).iter().map(|p| Comp(p.clone()).to_string()).collect();
        assert_eq!(pre, BTreeSet::from(["[Cons.2]".to_string(), "[Cons.1,RNode.2]".to_string()]));
        let one: Vec<String> =
            d.preimages(&named("RTrees"), &c("[Cons.1]")).iter().map(|p| Comp(p.clone()).to_string()).collect();
        assert!(one.contains(&"[Cons.1]".to_string()));
    }

    #[test]
    fn text_round_trip() {
        for s in ["[]", "[Ref.1]", "[Cons.1,RNode.2]", "[Array_.1,Cl.3]"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert!("[Cons]".parse::<Comp>().is_err());
    }
}
