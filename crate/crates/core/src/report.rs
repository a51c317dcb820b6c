//! Text and JSON output for analysis results.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::alias::{AliasSet, VarComp};
use crate::analysis::lower::is_abstract;
use crate::analysis::{Diagnostic, PointResult};
use crate::domain::DomainMode;
use crate::error::{Error, Result};
use crate::ir::ast::{Name, Program};

/// Analysis results for a whole program, ready for printing.
#[derive(Clone, Debug)]
pub struct Report {
    pub mode: DomainMode,
    pub results: Vec<PointResult>,
    /// Per function, the set at its last point without local variables.
    pub finals: Vec<(Name, AliasSet)>,
}

impl Report {
    pub fn new(prog: &Program, mode: DomainMode, results: Vec<PointResult>) -> Report {
        let finals = results
            .iter()
            .map(|r| {
                let fin = prog
                    .func(&r.func)
                    .and_then(|f| {
                        let last = r.per_point.get(&f.last_point())?;
                        Some(last.restrict(|v| f.is_param(v) || v == f.ret() || is_abstract(v)))
                    })
                    .unwrap_or_default();
                (r.func.clone(), fin)
            })
            .collect();
        Report { mode, results, finals }
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.results.iter().flat_map(|r| r.diagnostics.iter())
    }

    pub fn is_clean(&self) -> bool {
        self.diagnostics().next().is_none()
    }

    pub fn to_text(&self, dump_points: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        for (r, (_, fin)) in self.results.iter().zip(&self.finals) {
            let _ = writeln!(out, "function {}", r.func);
            if dump_points {
                for (p, a) in &r.per_point {
                    let _ = writeln!(out, "  {}:{p} {}", r.func, compact(a));
                }
            }
            let _ = writeln!(out, "  final {}", compact(fin));
        }
        for d in self.diagnostics() {
            let _ = writeln!(out, "{}: {d}", d.pos);
        }
        out
    }

    pub fn to_json(&self, dump_points: bool) -> String {
        let view = JsonReport { report: self, dump_points };
        serde_json::to_string_pretty(&view).expect("report serializes")
    }
}

struct JsonReport<'a> {
    report: &'a Report,
    dump_points: bool,
}

#[derive(Serialize)]
struct DiagJson<'a> {
    #[serde(flatten)]
    diag: &'a Diagnostic,
    line: u32,
    col: u32,
    message: String,
}

struct Points<'a>(&'a [PointResult]);

impl Serialize for Points<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        for r in self.0 {
            for (p, a) in &r.per_point {
                m.serialize_entry(&format!("{}:{p}", r.func), a)?;
            }
        }
        m.end()
    }
}

struct Finals<'a>(&'a [(Name, AliasSet)]);

impl Serialize for Finals<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (f, a) in self.0 {
            m.serialize_entry(f, a)?;
        }
        m.end()
    }
}

impl Serialize for JsonReport<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.report;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("mode", &r.mode)?;
        if self.dump_points {
            m.serialize_entry("points", &Points(&r.results))?;
        }
        m.serialize_entry("final", &Finals(&r.finals))?;
        let diags: Vec<DiagJson> = r
            .diagnostics()
            .map(|d| DiagJson { diag: d, line: d.pos.line, col: d.pos.col, message: d.message() })
            .collect();
        m.serialize_entry("diagnostics", &diags)?;
        m.end()
    }
}

/// Set-of-sets notation: each inner set stands for every pair of its
/// members, a member with itself included. A pair whose elements are not
/// both self paired is written `<a, b>` instead.
pub fn compact(a: &AliasSet) -> String {
    let selfp = |e: &VarComp| a.contains(e, e);
    let elems: Vec<VarComp> = a.elements().into_iter().filter(|e| selfp(e)).collect();
    let mut covered: BTreeSet<(VarComp, VarComp)> = BTreeSet::new();
    let mut groups: Vec<Vec<VarComp>> = Vec::new();
    let mut bare = Vec::new();
    for (x, y) in a.iter() {
        if !selfp(x) || !selfp(y) {
            bare.push(format!("<{x}, {y}>"));
            continue;
        }
        if covered.contains(&(x.clone(), y.clone())) {
            continue;
        }
        let mut g = vec![x.clone()];
        if x != y {
            g.push(y.clone());
        }
        for c in &elems {
            if !g.contains(c) && g.iter().all(|m| a.contains(m, c)) {
                g.push(c.clone());
            }
        }
        for (i, m) in g.iter().enumerate() {
            for n in &g[i..] {
                covered.insert(if m <= n { (m.clone(), n.clone()) } else { (n.clone(), m.clone()) });
            }
        }
        g.sort();
        groups.push(g);
    }
    groups.sort();
    groups.dedup();
    let mut inner: Vec<String> = groups
        .iter()
        .map(|g| format!("{{{}}}", g.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    inner.extend(bare);
    format!("{{{}}}", inner.join(", "))
}

/// Reads the notation printed by [`compact`].
pub fn parse_compact(s: &str) -> Result<AliasSet> {
    let s = s.trim();
    let body = s
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| Error::Domain(format!("not a set: {s}")))?;
    let mut out = AliasSet::new();
    for (group, clique) in split_groups(body)? {
        let members: Vec<VarComp> = split_members(&group).iter().map(|m| m.parse()).collect::<Result<_>>()?;
        if !clique {
            match members.as_slice() {
                [a, b] => {
                    out.insert(a.clone(), b.clone());
                }
                _ => return Err(Error::Domain(format!("<{group}> is not a pair"))),
            }
            continue;
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i..] {
                out.insert(a.clone(), b.clone());
            }
        }
    }
    Ok(out)
}

/// Top level `{..}` groups and `<..>` pairs, flagged true for groups.
fn split_groups(body: &str) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let mut open: Option<char> = None;
    let mut cur = String::new();
    for ch in body.chars() {
        match (open, ch) {
            (None, '{') | (None, '<') => {
                open = Some(ch);
                cur.clear();
            }
            (Some('{'), '}') | (Some('<'), '>') => {
                out.push((std::mem::take(&mut cur), open == Some('{')));
                open = None;
            }
            (None, c) if c == ',' || c.is_whitespace() => {}
            (None, c) => return Err(Error::Domain(format!("unexpected {c:?} in set"))),
            (Some(_), c) => cur.push(c),
        }
    }
    if open.is_some() {
        return Err(Error::Domain("unterminated group".into()));
    }
    Ok(out)
}

fn split_members(group: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in group.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}
