//! Mapping concrete heap words back to components.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::alias::{AliasSet, VarComp};
use crate::domain::{Comp, Domain, Step};
use crate::ir::ast::Type;
use crate::oracle::machine::{Addr, Frame, Heap, Value};

/// Addresses of the words of one variable, per component.
pub type Footprint = BTreeMap<Comp, BTreeSet<Addr>>;

/// Walks `val` of type `ty`, assigning every reachable word the component
/// of the path it was reached by. A word reached along several paths is
/// listed under each of their components.
pub fn footprint(dom: &Domain, heap: &Heap, val: &Value, ty: &Type) -> Footprint {
    let mut out = Footprint::new();
    let mut seen = HashSet::new();
    walk(dom, heap, ty, val, &Comp::empty(), ty, &mut out, &mut seen);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    dom: &Domain,
    heap: &Heap,
    root: &Type,
    val: &Value,
    cursor: &Comp,
    ty: &Type,
    out: &mut Footprint,
    seen: &mut HashSet<(Addr, Comp)>,
) {
    for (cons, arg, addr) in val.words() {
        let step = Step::new(&cons, arg);
        let Some((word, next, child)) = dom.advance(root, cursor, ty, &step) else { continue };
        out.entry(word).or_default().insert(addr);
        if seen.insert((addr, next.clone())) {
            walk(dom, heap, root, heap.get(addr), &next, &child, out, seen);
        }
    }
}

/// Static type of a frame variable.
pub fn var_type<'a>(frame: &'a Frame<'_>, v: &str) -> Option<&'a Type> {
    let f = frame.func;
    f.types.var_types.get(v).or_else(|| f.sig.params.iter().find(|p| p.name == v).map(|p| &p.ty))
}

/// Every pair of variable components of `frame` whose words intersect,
/// self pairs included.
pub fn concrete_sharing(dom: &Domain, heap: &Heap, frame: &Frame<'_>) -> AliasSet {
    let mut owners: HashMap<Addr, Vec<VarComp>> = HashMap::new();
    for (v, val) in &frame.env {
        let Some(ty) = var_type(frame, v) else { continue };
        for (c, addrs) in footprint(dom, heap, val, ty) {
            for a in addrs {
                owners.entry(a).or_default().push(VarComp::new(v.clone(), c.clone()));
            }
        }
    }
    let mut out = AliasSet::new();
    for elems in owners.values() {
        for (i, x) in elems.iter().enumerate() {
            for y in &elems[i..] {
                out.insert(x.clone(), y.clone());
            }
        }
    }
    out
}
