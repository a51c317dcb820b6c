//! Backward liveness over the structured body.

use std::collections::{BTreeMap, BTreeSet};

use crate::ir::ast::*;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Liveness {
    /// Variables live at each program point. Parameters are live everywhere.
    pub live: BTreeMap<Point, BTreeSet<Name>>,
    /// Variables carrying a `!` on some statement reachable after each point.
    pub later_bangs: BTreeMap<Point, BTreeSet<Name>>,
}

impl Liveness {
    pub fn is_live(&self, p: Point, v: &str) -> bool {
        self.live.get(&p).is_some_and(|s| s.contains(v))
    }

    pub fn banged_later(&self, p: Point, v: &str) -> bool {
        self.later_bangs.get(&p).is_some_and(|s| s.contains(v))
    }
}

pub fn compute_liveness(f: &FuncDef) -> Liveness {
    let params: BTreeSet<Name> = f.sig.params.iter().map(|p| p.name.clone()).collect();
    let mut w = Walker { params: &params, out: Liveness::default() };
    let exit: BTreeSet<Name> = std::iter::once(f.sig.result.clone()).chain(params.iter().cloned()).collect();
    let (entry, bangs) = w.block(&f.body, exit, BTreeSet::new());
    w.out.live.insert(0, &entry | &params);
    w.out.later_bangs.insert(0, bangs);
    w.out
}

struct Walker<'a> {
    params: &'a BTreeSet<Name>,
    out: Liveness,
}

impl Walker<'_> {
    fn block(
        &mut self,
        stmts: &[Stmt],
        mut live: BTreeSet<Name>,
        mut bangs: BTreeSet<Name>,
    ) -> (BTreeSet<Name>, BTreeSet<Name>) {
        for s in stmts.iter().rev() {
            (live, bangs) = self.stmt(s, live, bangs);
        }
        (live, bangs)
    }

    fn stmt(
        &mut self,
        s: &Stmt,
        live_out: BTreeSet<Name>,
        bangs_out: BTreeSet<Name>,
    ) -> (BTreeSet<Name>, BTreeSet<Name>) {
        let (live_out, bangs_out) = match s.kind {
            StmtKind::Error => (BTreeSet::new(), BTreeSet::new()),
            _ => (live_out, bangs_out),
        };
        self.out.live.insert(s.point, &live_out | self.params);
        self.out.later_bangs.insert(s.point, bangs_out.clone());
        let mut bangs_in = &bangs_out | &s.bang;
        let mut live_in = live_out.clone();
        if let StmtKind::Case { v, alts } = &s.kind {
            live_in.clear();
            for a in alts {
                let (body_live, body_bangs) = self.block(&a.body, live_out.clone(), bangs_out.clone());
                self.out.live.insert(a.entry, &body_live | self.params);
                self.out.later_bangs.insert(a.entry, body_bangs.clone());
                live_in.extend(body_live.into_iter().filter(|x| !a.pat.refs.contains(x)));
                bangs_in.extend(body_bangs);
            }
            live_in.insert(v.clone());
            return (live_in, bangs_in);
        }
        if let Some(d) = s.defined() {
            live_in.remove(d);
        }
        live_in.extend(s.used().into_iter().cloned());
        (live_in, bangs_in)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parser::parse_program;

    #[test]
    fn straight_line_last_use() {
        let p = parse_program("fn f (a: Int) -> Int { w = a\n v = w\n ret = v }").unwrap();
        let l = compute_liveness(&p.funcs[0]);
        assert!(l.is_live(1, "w"));
        assert!(!l.is_live(2, "w"));
        assert!(l.is_live(2, "v"));
        assert!(l.is_live(3, "ret"));
        assert!(l.is_live(2, "a"));
    }

    #[test]
    fn later_bang_scan() {
        let p = parse_program("fn f (!p: Ref Int) -> () { q = p\n *!p := x !q\n ret = () }").unwrap();
        let l = compute_liveness(&p.funcs[0]);
        assert!(l.banged_later(1, "q"));
        assert!(!l.banged_later(2, "q"));
    }
}
