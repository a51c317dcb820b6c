//! Alias sets: symmetric relations over variable components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::Comp;
use crate::error::{Error, Result};
use crate::ir::ast::Name;

/// A component of a particular variable, written `x.[Cons.1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarComp {
    pub var: Name,
    pub comp: Comp,
}

impl VarComp {
    pub fn new(var: impl Into<Name>, comp: Comp) -> VarComp {
        VarComp { var: var.into(), comp }
    }
}

impl fmt::Display for VarComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.var, self.comp)
    }
}

impl FromStr for VarComp {
    type Err = Error;

    fn from_str(s: &str) -> Result<VarComp> {
        let (var, comp) =
            s.trim().split_once('.').ok_or_else(|| Error::Domain(format!("bad variable component {s}")))?;
        Ok(VarComp::new(var, comp.parse()?))
    }
}

fn ordered(a: VarComp, b: VarComp) -> (VarComp, VarComp) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A set of unordered pairs. A self pair `{x, x}` records that the words of
/// `x` may exist at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AliasSet {
    pairs: BTreeSet<(VarComp, VarComp)>,
}

impl AliasSet {
    pub fn new() -> AliasSet {
        AliasSet::default()
    }

    pub fn insert(&mut self, a: VarComp, b: VarComp) -> bool {
        self.pairs.insert(ordered(a, b))
    }

    pub fn insert_self(&mut self, a: VarComp) -> bool {
        self.pairs.insert((a.clone(), a))
    }

    pub fn contains(&self, a: &VarComp, b: &VarComp) -> bool {
        if a <= b {
            self.pairs.contains(&(a.clone(), b.clone()))
        } else {
            self.pairs.contains(&(b.clone(), a.clone()))
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in canonical order, smaller element first.
    pub fn iter(&self) -> impl Iterator<Item = &(VarComp, VarComp)> {
        self.pairs.iter()
    }

    pub fn extend(&mut self, other: &AliasSet) {
        self.pairs.extend(other.pairs.iter().cloned());
    }

    pub fn union(&self, other: &AliasSet) -> AliasSet {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn is_subset(&self, other: &AliasSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Pairs of `self` missing from `other`.
    pub fn difference(&self, other: &AliasSet) -> AliasSet {
        AliasSet { pairs: self.pairs.difference(&other.pairs).cloned().collect() }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&VarComp, &VarComp) -> bool) {
        self.pairs.retain(|(a, b)| keep(a, b));
    }

    /// Pairs whose two variables both satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> AliasSet {
        AliasSet { pairs: self.pairs.iter().filter(|(a, b)| keep(&a.var) && keep(&b.var)).cloned().collect() }
    }

    pub fn remove_var(&mut self, v: &str) {
        self.pairs.retain(|(a, b)| a.var != v && b.var != v);
    }

    /// Renames elements; pairs with an element mapped to `None` are dropped.
    pub fn rename(&self, f: impl Fn(&VarComp) -> Option<VarComp>) -> AliasSet {
        let mut out = AliasSet::new();
        for (a, b) in &self.pairs {
            if let (Some(x), Some(y)) = (f(a), f(b)) {
                out.insert(x, y);
            }
        }
        out
    }

    /// Elements paired with `x`, `x` itself included when self paired.
    pub fn partners(&self, x: &VarComp) -> Vec<VarComp> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.pairs {
            if a == x {
                out.insert(b.clone());
            }
            if b == x {
                out.insert(a.clone());
            }
        }
        out.into_iter().collect()
    }

    /// Pairs with at least one element on variable `v`.
    pub fn pairs_with_var(&self, v: &str) -> AliasSet {
        AliasSet { pairs: self.pairs.iter().filter(|(a, b)| a.var == v || b.var == v).cloned().collect() }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        self.pairs.iter().flat_map(|(a, b)| [a.var.clone(), b.var.clone()]).collect()
    }

    pub fn elements(&self) -> BTreeSet<VarComp> {
        self.pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    }

    /// Pairs added by copying sharing through a map. For every pair
    /// `{x, y}` this yields `M(x) x M(y)`, plus `{t, y}` for `t` in `M(x)`
    /// when `keep(y)`, and symmetrically. `M` gives the new names an
    /// existing element is also reachable as.
    pub fn mirror(&self, map: impl Fn(&VarComp) -> Vec<VarComp>, keep: impl Fn(&VarComp) -> bool) -> AliasSet {
        let mut memo: BTreeMap<&VarComp, Vec<VarComp>> = BTreeMap::new();
        for (a, b) in &self.pairs {
            for e in [a, b] {
                if !memo.contains_key(e) {
                    memo.insert(e, map(e));
                }
            }
        }
        let mut out = AliasSet::new();
        for (x, y) in &self.pairs {
            let (mx, my) = (&memo[x], &memo[y]);
            for t in mx {
                for u in my {
                    out.insert(t.clone(), u.clone());
                }
            }
            if keep(y) {
                for t in mx {
                    out.insert(t.clone(), y.clone());
                }
            }
            if keep(x) {
                for u in my {
                    out.insert(x.clone(), u.clone());
                }
            }
        }
        out
    }

    /// One `{a, b}` per pair, self pairs written `{a}`.
    pub fn to_lines(&self) -> Vec<String> {
        self.pairs.iter().map(|(a, b)| if a == b { format!("{{{a}}}") } else { format!("{{{a}, {b}}}") }).collect()
    }
}

impl FromIterator<(VarComp, VarComp)> for AliasSet {
    fn from_iter<I: IntoIterator<Item = (VarComp, VarComp)>>(iter: I) -> AliasSet {
        let mut s = AliasSet::new();
        for (a, b) in iter {
            s.insert(a, b);
        }
        s
    }
}

impl fmt::Display for AliasSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_lines().join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct PairsJson {
    pairs: Vec<[VarComp; 2]>,
}

impl Serialize for AliasSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.pairs.iter().map(|(a, b)| [a.clone(), b.clone()]).collect();
        PairsJson { pairs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AliasSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<AliasSet, D::Error> {
        Ok(PairsJson::deserialize(d)?.pairs.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vc(s: &str) -> VarComp {
        s.parse().unwrap()
    }

    #[test]
    fn pairs_are_unordered() {
        let mut s = AliasSet::new();
        assert!(s.insert(vc("x.[Ref.1]"), vc("a.[]")));
        assert!(!s.insert(vc("a.[]"), vc("x.[Ref.1]")));
        assert!(s.contains(&vc("x.[Ref.1]"), &vc("a.[]")));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn mirror_copies_sharing() {
        let mut s = AliasSet::new();
        s.insert(vc("w.[]"), vc("a.[]"));
        s.insert_self(vc("w.[]"));
        let m = s.mirror(|e| if e.var == "w" { vec![VarComp::new("v", e.comp.clone())] } else { vec![] }, |_| true);
        assert!(m.contains(&vc("v.[]"), &vc("a.[]")));
        assert!(m.contains(&vc("v.[]"), &vc("w.[]")));
        assert!(m.contains(&vc("v.[]"), &vc("v.[]")));
    }

    #[test]
    fn json_round_trip() {
        let s: AliasSet = [(vc("x.[Cons.1]"), vc("y.[]")), (vc("y.[]"), vc("y.[]"))].into_iter().collect();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"pairs":[[{"var":"x","comp":["Cons.1"]},{"var":"y","comp":[]}],[{"var":"y","comp":[]},{"var":"y","comp":[]}]]}"#
        );
        assert_eq!(serde_json::from_str::<AliasSet>(&j).unwrap(), s);
    }
}
