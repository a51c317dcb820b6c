//! Random well-typed programs for soundness testing.
//!
//! Each program declares at most three data types, a few helper functions
//! with honest contracts, and a parameterless `main` of at most
//! `MAX_STMTS` statements (nested ones and the final `ret = ()` included).

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

pub const MAX_STMTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Field {
    Int,
    Data(&'static str),
}

struct DataDesc {
    name: &'static str,
    conses: Vec<(&'static str, Vec<Field>)>,
}

fn menu() -> Vec<Vec<DataDesc>> {
    use Field::*;
    let il = || DataDesc { name: "IL", conses: vec![("INil", vec![]), ("ICons", vec![Int, Data("IL")])] };
    let tr = || DataDesc { name: "TR", conses: vec![("TLeaf", vec![]), ("TNode", vec![Data("TR"), Int, Data("TR")])] };
    let rs = || DataDesc { name: "RS", conses: vec![("RNil", vec![]), ("RCons", vec![Data("RT"), Data("RS")])] };
    let rt = || DataDesc { name: "RT", conses: vec![("RNode", vec![Int, Data("RS")])] };
    let pr = || DataDesc { name: "PR", conses: vec![("MkP", vec![Data("IL"), Data("TR")])] };
    vec![vec![il()], vec![tr()], vec![il(), tr()], vec![rs(), rt()], vec![il(), rs(), rt()], vec![il(), tr(), pr()]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum GTy {
    Int,
    Data(&'static str),
    Ref(Box<GTy>),
    /// `set_X` applied to its reference argument only.
    SetClosure(&'static str),
}

impl GTy {
    fn of(f: &Field) -> GTy {
        match f {
            Field::Int => GTy::Int,
            Field::Data(d) => GTy::Data(d),
        }
    }

    fn ref_depth(&self) -> usize {
        match self {
            GTy::Ref(t) => 1 + t.ref_depth(),
            _ => 0,
        }
    }
}

type Scope = Vec<(String, GTy)>;

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    datas: Vec<DataDesc>,
    out: String,
    next: usize,
    budget: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("v{}", self.next)
    }

    fn line(&mut self, indent: usize, s: &str) {
        let _ = writeln!(self.out, "{}{s}", "  ".repeat(indent));
    }

    fn pick<'s>(&mut self, scope: &'s Scope, want: impl Fn(&GTy) -> bool) -> Option<&'s (String, GTy)> {
        let c: Vec<_> = scope.iter().filter(|(_, t)| want(t)).collect();
        c.choose(self.rng).copied()
    }

    fn bangs(scope: &Scope) -> String {
        scope.iter().filter(|(_, t)| *t != GTy::Int).map(|(v, _)| format!(" !{v}")).collect()
    }

    fn data_names(&self) -> Vec<&'static str> {
        self.datas.iter().map(|d| d.name).collect()
    }

    /// Emits one statement if the chosen kind is possible; returns whether it did.
    fn stmt(&mut self, scope: &mut Scope, indent: usize, allow_case: bool) -> bool {
        let kind = self.rng.gen_range(0..12);
        match kind {
            0 => {
                let v = self.fresh();
                let n = self.rng.gen_range(0..5);
                self.line(indent, &format!("{v} = {n}"));
                scope.push((v, GTy::Int));
            }
            1 | 2 => {
                let di = self.rng.gen_range(0..self.datas.len());
                let ci = self.rng.gen_range(0..self.datas[di].conses.len());
                let (cname, fields) = self.datas[di].conses[ci].clone();
                let dname = self.datas[di].name;
                let mut args = Vec::new();
                for f in &fields {
                    let t = GTy::of(f);
                    let Some((a, _)) = self.pick(scope, |x| *x == t) else { return false };
                    args.push(a.clone());
                }
                let v = self.fresh();
                let rhs = if args.is_empty() { cname.to_string() } else { format!("{cname} {}", args.join(" ")) };
                self.line(indent, &format!("{v} = {rhs}"));
                scope.push((v, GTy::Data(dname)));
            }
            3 => {
                let Some((x, t)) = self.pick(scope, |t| t.ref_depth() < 2 && !matches!(t, GTy::SetClosure(_))).cloned()
                else {
                    return false;
                };
                let v = self.fresh();
                self.line(indent, &format!("*{v} = {x}"));
                scope.push((v, GTy::Ref(Box::new(t))));
            }
            4 => {
                let Some((r, GTy::Ref(t))) = self.pick(scope, |t| matches!(t, GTy::Ref(_))).cloned() else {
                    return false;
                };
                let v = self.fresh();
                self.line(indent, &format!("{v} = *{r}"));
                scope.push((v, *t));
            }
            5 => {
                let Some((x, t)) = self.pick(scope, |_| true).cloned() else { return false };
                let v = self.fresh();
                self.line(indent, &format!("{v} = {x}"));
                scope.push((v, t));
            }
            6 | 7 => {
                let Some((r, GTy::Ref(t))) = self.pick(scope, |t| matches!(t, GTy::Ref(_))).cloned() else {
                    return false;
                };
                let Some((x, _)) = self.pick(scope, |u| *u == *t).cloned() else { return false };
                let bangs = Self::bangs(scope).replace(&format!(" !{r}"), "");
                self.line(indent, &format!("*!{r} := {x}{bangs}"));
            }
            8 if allow_case && self.budget >= 2 => {
                let Some((x, GTy::Data(d))) = self.pick(scope, |t| matches!(t, GTy::Data(_))).cloned() else {
                    return false;
                };
                let conses = self.datas.iter().find(|dd| dd.name == d).unwrap().conses.clone();
                self.budget -= 1;
                self.line(indent, &format!("case {x} {{"));
                for (c, fields) in conses {
                    let mut inner = scope.clone();
                    let mut pat = c.to_string();
                    for f in &fields {
                        let r = self.fresh();
                        pat.push_str(&format!(" *{r}"));
                        inner.push((r, GTy::Ref(Box::new(GTy::of(f)))));
                    }
                    self.line(indent + 1, &format!("{pat} -> {{"));
                    let n = self.rng.gen_range(0..=2);
                    self.block(&mut inner, indent + 2, n, false);
                    self.line(indent + 1, "}");
                }
                self.line(indent, "}");
            }
            9 => {
                let names = self.data_names();
                let d = *names.choose(self.rng).unwrap();
                let v = self.fresh();
                if self.rng.gen_bool(0.5) {
                    let Some((x, _)) = self.pick(scope, |t| *t == GTy::Data(d)).cloned() else { return false };
                    self.line(indent, &format!("{v} = id_{d} {x}"));
                } else {
                    let Some((p, _)) = self.pick(scope, |t| *t == GTy::Ref(Box::new(GTy::Data(d)))).cloned() else {
                        return false;
                    };
                    self.line(indent, &format!("{v} = get_{d} {p}"));
                }
                scope.push((v, GTy::Data(d)));
            }
            10 => {
                let names = self.data_names();
                let d = *names.choose(self.rng).unwrap();
                let Some((p, _)) = self.pick(scope, |t| *t == GTy::Ref(Box::new(GTy::Data(d)))).cloned() else {
                    return false;
                };
                let v = self.fresh();
                if self.rng.gen_bool(0.5) {
                    let Some((x, _)) = self.pick(scope, |t| *t == GTy::Data(d)).cloned() else { return false };
                    let bangs = Self::bangs(scope).replace(&format!(" !{p}"), "");
                    self.line(indent, &format!("{v} = set_{d} !{p} {x}{bangs}"));
                } else {
                    self.line(indent, &format!("{v} = set_{d} {p}"));
                    scope.push((v, GTy::SetClosure(d)));
                }
            }
            11 => {
                let Some((c, GTy::SetClosure(d))) = self.pick(scope, |t| matches!(t, GTy::SetClosure(_))).cloned()
                else {
                    return false;
                };
                let Some((x, _)) = self.pick(scope, |t| *t == GTy::Data(d)).cloned() else { return false };
                let v = self.fresh();
                let bangs = Self::bangs(scope);
                self.line(indent, &format!("{v} = {c} {x}{bangs}"));
            }
            _ => return false,
        }
        true
    }

    fn block(&mut self, scope: &mut Scope, indent: usize, n: usize, allow_case: bool) {
        let mut made = 0;
        let mut tries = 0;
        while made < n && self.budget > 1 && tries < 200 {
            tries += 1;
            let before = self.out.len();
            let start = self.budget;
            if self.stmt(scope, indent, allow_case) {
                made += 1;
                let used = self.out[before..].lines().filter(|l| is_stmt_line(l)).count();
                self.budget = start.saturating_sub(used);
            }
        }
    }
}

fn is_stmt_line(l: &str) -> bool {
    let t = l.trim();
    !(t.is_empty() || t == "}" || t.ends_with("-> {"))
}

/// A random program; `main` takes no arguments.
pub fn program(rng: &mut impl Rng) -> String {
    let mut menus = menu();
    let i = rng.gen_range(0..menus.len());
    let datas = menus.swap_remove(i);
    let mut out = String::new();
    for d in &datas {
        let cs: Vec<String> = d
            .conses
            .iter()
            .map(|(c, fs)| {
                let mut s = c.to_string();
                for f in fs {
                    s.push(' ');
                    s.push_str(match f {
                        Field::Int => "Int",
                        Field::Data(n) => n,
                    });
                }
                s
            })
            .collect();
        let _ = writeln!(out, "data {} = {}", d.name, cs.join(" | "));
    }
    for d in &datas {
        let n = d.name;
        let _ = writeln!(out, "fn id_{n} (x: {n}) -> {n} pre nosharing post ret = x {{ ret = x }}");
        let _ = writeln!(out, "fn get_{n} (p: Ref {n}) -> {n} pre nosharing post ret = *p {{ ret = *p }}");
        let _ = writeln!(
            out,
            "fn set_{n} (!p: Ref {n}, v: {n}) -> () pre nosharing post *p = v {{ *!p := v\n  ret = () }}"
        );
    }
    out.push_str("fn main () -> () pre nosharing post nosharing {\n");
    let mut g = Gen { rng, datas, out, next: 0, budget: MAX_STMTS };
    let mut scope = Scope::new();
    g.block(&mut scope, 1, MAX_STMTS - 1, true);
    g.line(1, "ret = ()");
    g.out.push_str("}\n");
    g.out
}

/// Statements in `main`, nested ones included.
pub fn main_statements(src: &str) -> usize {
    let body = &src[src.find("fn main").expect("main")..];
    body.lines().skip(1).filter(|l| is_stmt_line(l)).count()
}
