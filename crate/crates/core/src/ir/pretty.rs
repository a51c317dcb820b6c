//! Source printer. Output parses back to the same program.

use std::fmt::Write;

use crate::ir::ast::*;

pub fn program(prog: &Program) -> String {
    let mut out = String::new();
    for d in &prog.datas {
        out.push_str(&data_def(d));
        out.push('\n');
    }
    for a in &prog.aliases {
        let _ = writeln!(out, "type {} = {}", a.name, a.ty);
    }
    for f in &prog.funcs {
        out.push('\n');
        out.push_str(&func(f, false));
    }
    out
}

pub fn data_def(d: &DataDef) -> String {
    let mut s = format!("data {}", d.name);
    for p in &d.params {
        s.push(' ');
        s.push_str(p);
    }
    s.push_str(" =");
    for (i, c) in d.constructors.iter().enumerate() {
        s.push_str(if i == 0 { " " } else { " | " });
        s.push_str(&c.name);
        for a in &c.args {
            s.push(' ');
            s.push_str(&atype(a));
        }
    }
    s
}

fn atype(t: &Type) -> String {
    match t {
        Type::Named(_, args) if args.is_empty() => t.to_string(),
        Type::Var(_) => t.to_string(),
        _ => format!("({t})"),
    }
}

/// Prints one function; `points` appends a `-- n` label to every line
/// that carries a program point.
pub fn func(f: &FuncDef, points: bool) -> String {
    let mut out = format!("fn {} (", f.name);
    for (i, p) in f.sig.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}{}: {}", if p.mutable { "!" } else { "" }, p.name, p.ty);
    }
    out.push_str(") -> ");
    if f.sig.result != "ret" {
        let _ = write!(out, "{}: ", f.sig.result);
    }
    let _ = writeln!(out, "{}", f.sig.result_ty);
    let _ = writeln!(out, "  pre {}", cond(&f.sig.pre));
    let _ = writeln!(out, "  post {}", cond(&f.sig.post));
    out.push('{');
    if points {
        out.push_str(" -- 0");
    }
    out.push('\n');
    block(&mut out, &f.body, 1, points);
    out.push_str("}\n");
    out
}

pub fn cond(c: &CondForm) -> String {
    match c {
        CondForm::Stmts(s) if s.is_empty() => "nosharing".into(),
        CondForm::Stmts(s) => {
            s.iter().map(|cs| format!("{} = {}", cond_expr(&cs.lhs), cond_expr(&cs.rhs))).collect::<Vec<_>>().join("; ")
        }
        CondForm::Explicit(sets) => {
            let inner: Vec<String> = sets
                .iter()
                .map(|set| {
                    let vcs: Vec<String> = set
                        .iter()
                        .map(|vc| {
                            let steps: Vec<String> = vc.steps.iter().map(|(c, i)| format!("{c}.{i}")).collect();
                            format!("{}.[{}]", vc.var, steps.join(","))
                        })
                        .collect();
                    format!("{{{}}}", vcs.join(", "))
                })
                .collect();
            format!("alias {{{}}}", inner.join(", "))
        }
    }
}

fn cond_expr(e: &CondExpr) -> String {
    match e {
        CondExpr::Deref { derefs, var } => format!("{}{}", "*".repeat(*derefs), var),
        CondExpr::Cons { cons, args } => {
            let mut s = cons.clone();
            for a in args {
                s.push(' ');
                s.push_str(a);
            }
            s
        }
    }
}

fn block(out: &mut String, stmts: &[Stmt], depth: usize, points: bool) {
    for s in stmts {
        stmt(out, s, depth, points);
    }
}

fn label(out: &mut String, line: String, depth: usize, point: Option<Point>) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&line);
    if let Some(p) = point {
        let _ = write!(out, "  -- {p}");
    }
    out.push('\n');
}

fn bang_suffix(s: &Stmt, inline: &[&Name]) -> String {
    s.bang.iter().filter(|b| !inline.contains(b)).map(|b| format!(" !{b}")).collect()
}

/// Renders a simple statement on one line.
pub fn simple(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::EqVar { v, src } => format!("{v} = {src}{}", bang_suffix(s, &[])),
        StmtKind::EqDeref { v, src } => format!("{v} = *{src}{}", bang_suffix(s, &[])),
        StmtKind::DerefEq { v, src } => format!("*{v} = {src}{}", bang_suffix(s, &[])),
        StmtKind::Dc { v, cons, args } => {
            let mut line = format!("{v} = {cons}");
            for a in args {
                line.push(' ');
                line.push_str(a);
            }
            line + &bang_suffix(s, &[])
        }
        StmtKind::App { v, f, args } => {
            let call: String = std::iter::once(f.clone())
                .chain(args.iter().map(|a| if s.bang.contains(a) { format!("!{a}") } else { a.clone() }))
                .collect::<Vec<_>>()
                .join(" ");
            let inline: Vec<&Name> = args.iter().collect();
            let rest = bang_suffix(s, &inline);
            if rest.is_empty() {
                format!("{v} = {call}")
            } else {
                format!("{v} = ({call}){rest}")
            }
        }
        StmtKind::Assign { v, src } => {
            let dv = if s.bang.contains(v) { "!" } else { "" };
            let ds = if s.bang.contains(src) { "!" } else { "" };
            format!("*{dv}{v} := {ds}{src}{}", bang_suffix(s, &[v, src]))
        }
        StmtKind::Instype { v, src, ty } => format!("{v} = {src} :: {ty}{}", bang_suffix(s, &[])),
        StmtKind::ArrayRef { v, array, index } => format!("{v} = arrayref {array} {index}{}", bang_suffix(s, &[])),
        StmtKind::Error => format!("error{}", bang_suffix(s, &[])),
        StmtKind::Case { v, .. } => format!("case {v}"),
    }
}

fn stmt(out: &mut String, s: &Stmt, depth: usize, points: bool) {
    let pt = |p: Point| points.then_some(p);
    match &s.kind {
        StmtKind::Case { v, alts } => {
            label(out, format!("case {v} {{"), depth, None);
            for a in alts {
                let mut pat = a.pat.cons.clone();
                for r in &a.pat.refs {
                    let _ = write!(pat, " *{r}");
                }
                label(out, format!("{pat} -> {{"), depth + 1, pt(a.entry));
                block(out, &a.body, depth + 2, points);
                label(out, "}".into(), depth + 1, None);
            }
            label(out, format!("}}{}", bang_suffix(s, &[])), depth, pt(s.point));
        }
        _ => label(out, simple(s), depth, pt(s.point)),
    }
}
