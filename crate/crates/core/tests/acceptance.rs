//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{fixture, gen, reference, vc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sharing::oracle::{check_run, parse_literals, DEFAULT_STEP_LIMIT};
use sharing::{
    analyze_program, AliasSet, AnalysisOptions, Comp, DiagnosticKind, Domain, DomainMode, PointResult, Program, Step,
    Type,
};

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const SOUNDNESS_BUDGET: Duration = Duration::from_secs(60);
const RANDOM_PROGRAMS: u64 = 250;
const MIN_RANDOM_PROGRAMS: u64 = 200;
const ENUM_DEPTH: usize = 4;
const MODES: [DomainMode; 2] = [DomainMode::OldFold, DomainMode::NewFold];

const FIXTURES: &[&str] = &[
    "assign_violation.pcore",
    "bst.pcore",
    "bst_abstract.pcore",
    "closures.pcore",
    "colours.pcore",
    "colours_missing_bang.pcore",
    "map_const.pcore",
    "mutable.pcore",
    "mutable_nosharing.pcore",
    "rtrees.pcore",
];

/// Fixture, entry function and arguments of every concrete run.
const RUNS: &[(&str, &str, &str)] = &[
    ("assign_violation.pcore", "make_cycle", ""),
    ("bst.pcore", "list_bst", "Cons 3 (Cons 1 (Cons 2 (Cons 5 (Cons 4 Nil))))"),
    ("bst.pcore", "list_bst", "Nil"),
    ("bst.pcore", "list_bst_du", "Cons 2 (Cons 5 Nil), Ref TNil"),
    ("bst.pcore", "bst_insert_du", "4, Ref (Node TNil 2 (Node TNil 7 TNil))"),
    ("bst_abstract.pcore", "insert_abstract", "Node TNil 1 TNil"),
    ("bst_abstract.pcore", "bst_insert_du", "0, Ref TNil"),
    ("closures.pcore", "use_foo", ""),
    ("colours.pcore", "colours", ""),
    ("colours.pcore", "cyclic", ""),
    ("colours_missing_bang.pcore", "colours", ""),
    ("colours_missing_bang.pcore", "cyclic", ""),
    ("map_const.pcore", "map_const_1", "Cons 1 (Cons 2 (Cons 3 Nil))"),
    ("map_const.pcore", "map_const_1", "Nil"),
    ("mutable.pcore", "use_f1", ""),
    ("mutable.pcore", "f1", "Ref (Ref 1), Ref (Ref 2)"),
    ("mutable.pcore", "f2", "Ref (Ref (Ref 1)), Ref (Ref (Ref 2))"),
    ("mutable_nosharing.pcore", "f2", "Ref (Ref (Ref 1)), Ref (Ref (Ref 2))"),
    ("rtrees.pcore", "construct", ""),
    ("rtrees.pcore", "replace_head", ""),
    ("rtrees.pcore", "precision", ""),
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn analyze(prog: &Program, mode: DomainMode) -> Vec<PointResult> {
    analyze_program(prog, AnalysisOptions::new(mode)).expect("analysis")
}

fn result<'a>(rs: &'a [PointResult], f: &str) -> &'a PointResult {
    rs.iter().find(|r| r.func == f).unwrap_or_else(|| panic!("no function {f}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden() -> Outcome {
    let prog = fixture("bst.pcore");
    let start = Instant::now();
    let rs = analyze(&prog, DomainMode::OldFold);
    let took = start.elapsed();
    let mut points = 0;
    for (f, expected) in reference::all() {
        let r = result(&rs, f);
        ensure(r.per_point.len() == expected.len(), || format!("{f}: {} points", r.per_point.len()))?;
        for (p, want) in expected {
            let got = r.at(p);
            ensure(*got == want, || {
                format!("{f}:{p} missing {} extra {}", want.difference(got), got.difference(&want))
            })?;
            points += 1;
        }
        ensure(r.diagnostics.is_empty(), || format!("{f}: {:?}", r.diagnostics))?;
    }
    ensure(took < GOLDEN_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{points} points equal, {took:?}"))
}

fn construction() -> Outcome {
    let rs = analyze(&fixture("rtrees.pcore"), DomainMode::OldFold);
    let got = result(&rs, "construct").at(5);
    let want: AliasSet = [
        ("t.[RNode.1]", "t.[RNode.1]"),
        ("t.[RNode.2]", "t.[RNode.2]"),
        ("ts.[]", "ts.[]"),
        ("ts.[Cons.1]", "ts.[Cons.1]"),
        ("ts.[Cons.1,RNode.1]", "ts.[Cons.1,RNode.1]"),
        ("t.[RNode.1]", "ts.[Cons.1,RNode.1]"),
        ("t.[RNode.2]", "ts.[]"),
    ]
    .iter()
    .map(|(a, b)| (vc(a), vc(b)))
    .collect();
    ensure(*got == want, || format!("missing {} extra {}", want.difference(got), got.difference(&want)))?;
    Ok(format!("{} pairs", got.len()))
}

fn flagged(file: &str, func: &str, kind: DiagnosticKind) -> Result<(), String> {
    let prog = fixture(file);
    for mode in MODES {
        let rs = analyze(&prog, mode);
        ensure(result(&rs, func).has(kind), || format!("{file} {func} {mode}: no {kind:?}"))?;
    }
    Ok(())
}

fn clean(file: &str, func: &str) -> Result<(), String> {
    let prog = fixture(file);
    for mode in MODES {
        let rs = analyze(&prog, mode);
        let r = result(&rs, func);
        ensure(r.diagnostics.is_empty(), || format!("{file} {func} {mode}: {:?}", r.diagnostics))?;
    }
    Ok(())
}

fn violations() -> Outcome {
    flagged("assign_violation.pcore", "make_cycle", DiagnosticKind::PreconditionViolated)?;
    flagged("colours_missing_bang.pcore", "colours", DiagnosticKind::MissingBang)?;
    clean("colours.pcore", "colours")?;
    flagged("bst_abstract.pcore", "insert_abstract", DiagnosticKind::PreconditionViolated)?;
    Ok("three scenarios flagged in both modes".into())
}

fn mutable_params() -> Outcome {
    clean("mutable.pcore", "f2")?;
    flagged("mutable_nosharing.pcore", "f2", DiagnosticKind::PostconditionViolated)?;
    Ok("declared post accepted, nosharing rejected".into())
}

fn encapsulation() -> Outcome {
    clean("map_const.pcore", "map_const_1")?;
    clean("bst.pcore", "list_bst")?;
    Ok("map_const_1 and list_bst clean in both modes".into())
}

fn precision() -> Outcome {
    let prog = fixture("rtrees.pcore");
    let cross = |a: &AliasSet| -> Vec<String> {
        a.iter()
            .filter(|(x, y)| x.var != y.var && x.var.starts_with("rtree") && y.var.starts_with("rtree"))
            .map(|(x, y)| format!("{{{x}, {y}}}"))
            .collect()
    };
    let old = analyze(&prog, DomainMode::OldFold);
    let new = analyze(&prog, DomainMode::NewFold);
    let old16 = result(&old, "precision").at(16);
    let new16 = result(&new, "precision").at(16);
    for (a, b) in
        [("rtree1.[]", "rtree2.[]"), ("rtree1.[RNode.1]", "rtree3.[RNode.1]"), ("rtree2.[RNode.2]", "rtree3.[RNode.2]")]
    {
        ensure(old16.contains(&vc(a), &vc(b)), || format!("old lacks {{{a}, {b}}}"))?;
    }
    let new_cross = cross(new16);
    ensure(new_cross.is_empty(), || format!("new has {new_cross:?}"))?;
    Ok(format!("old {} cross pairs, new 0", cross(old16).len()))
}

#[derive(Default)]
struct Tally {
    runs: usize,
    checked: usize,
    skipped: usize,
}

fn run_checked(prog: &Program, entry: &str, args: &str, tally: &mut Tally) -> Result<(), String> {
    let lits = parse_literals(args).map_err(|e| e.to_string())?;
    for mode in MODES {
        let rs = analyze(prog, mode);
        let dom = Domain::new(prog, mode);
        let rep = check_run(prog, &dom, &rs, entry, &lits, DEFAULT_STEP_LIMIT).map_err(|e| e.to_string())?;
        ensure(rep.outcome.is_complete(), || format!("{entry} {mode}: {:?}", rep.outcome))?;
        ensure(rep.is_sound(), || format!("{entry}({args}) {mode}: {:?}", rep.violations))?;
        tally.runs += 1;
        tally.checked += rep.points_checked;
        tally.skipped += rep.points_skipped;
    }
    Ok(())
}

/// Removing a pair the run actually exhibits must produce a violation.
fn oracle_detects_missing_pair() -> Result<(), String> {
    let prog = fixture("bst.pcore");
    let mode = DomainMode::OldFold;
    let mut rs = analyze(&prog, mode);
    let r = rs.iter_mut().find(|r| r.func == "list_bst").expect("list_bst");
    let (a, b) = (vc("ret.[]"), vc("tp.[Ref.1]"));
    r.per_point.get_mut(&4).expect("point 4").retain(|x, y| !((*x == a && *y == b) || (*x == b && *y == a)));
    let dom = Domain::new(&prog, mode);
    let lits = parse_literals("Cons 1 Nil").map_err(|e| e.to_string())?;
    let rep = check_run(&prog, &dom, &rs, "list_bst", &lits, DEFAULT_STEP_LIMIT).map_err(|e| e.to_string())?;
    ensure(rep.violations.iter().any(|v| v.func == "list_bst" && v.point == 4), || {
        "corrupted analysis not detected".into()
    })
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let mut tally = Tally::default();
    for (file, entry, args) in RUNS {
        run_checked(&fixture(file), entry, args, &mut tally).map_err(|e| format!("{file}: {e}"))?;
    }
    let fixture_runs = tally.runs;
    for seed in 0..RANDOM_PROGRAMS {
        let src = gen::program(&mut ChaCha8Rng::seed_from_u64(seed));
        ensure(gen::main_statements(&src) <= gen::MAX_STMTS, || format!("seed {seed} too long"))?;
        let prog = sharing::load(&src).map_err(|e| format!("seed {seed}: {e}\n{src}"))?;
        run_checked(&prog, "main", "", &mut tally).map_err(|e| format!("seed {seed}: {e}\n{src}"))?;
    }
    ensure(RANDOM_PROGRAMS >= MIN_RANDOM_PROGRAMS, || "too few programs".into())?;
    oracle_detects_missing_pair()?;
    let took = start.elapsed();
    ensure(took < SOUNDNESS_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "{fixture_runs} fixture runs, {RANDOM_PROGRAMS} random programs x 2 modes, {} points checked, {} skipped, 0 violations, {took:?}",
        tally.checked, tally.skipped
    ))
}

/// Every type a fixture mentions, with the types of all their components.
fn fixture_types(prog: &Program, dom: &Domain) -> BTreeSet<Type> {
    let mut work: Vec<Type> = Vec::new();
    for f in &prog.funcs {
        work.extend(f.types.var_types.values().cloned());
        work.extend(f.sig.params.iter().map(|p| p.ty.clone()));
    }
    let mut out = BTreeSet::new();
    while let Some(t) = work.pop() {
        if !out.insert(t.clone()) {
            continue;
        }
        for (_, ct) in dom.steps(&t) {
            work.push(ct);
        }
    }
    out
}

fn raw_paths(dom: &Domain, t: &Type, depth: usize) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<Step>, Type)> = vec![(Vec::new(), t.clone())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (p, ty) in frontier {
            for (s, ct) in dom.steps(&ty) {
                let mut q = p.clone();
                q.push(s);
                out.push(q.clone());
                next.push((q, ct));
            }
        }
        frontier = next;
    }
    out
}

fn recursive(dom: &Domain, t: &Type) -> bool {
    raw_paths(dom, t, ENUM_DEPTH).iter().any(|p| dom.fold_old(t, p).map(|c| c.len()) != Some(p.len()))
}

fn type_algebra(dom: &Domain, old: &Domain, t: &Type, counts: &mut [usize; 4]) -> Result<(), String> {
    let comps = dom.comps(t);
    let set: BTreeSet<&Comp> = comps.iter().collect();
    let mode = dom.mode();
    for p in raw_paths(dom, t, ENUM_DEPTH) {
        let c = dom.fold(t, &p).ok_or_else(|| format!("{t:?} {mode}: no fold for {p:?}"))?;
        ensure(set.contains(&c), || format!("{t:?} {mode}: {p:?} folds outside components to {c}"))?;
        if !c.is_empty() {
            let again = dom.fold(t, c.steps());
            ensure(again.as_ref() == Some(&c), || format!("{t:?} {mode}: fc not idempotent on {c}"))?;
        }
        counts[0] += 1;
        let (s, rest) = p.split_first().expect("non-empty");
        let ct = dom.child(t, s).expect("legal step");
        let inner = if rest.is_empty() { Comp::empty() } else { dom.fold(&ct, rest).expect("legal rest") };
        let mut layer = vec![s.clone()];
        layer.extend(inner.steps().iter().cloned());
        let pre = dom.preimages(t, &c);
        ensure(pre.contains(&layer), || format!("{t:?} {mode}: {p:?} folds to {c} but {layer:?} is no preimage"))?;
    }
    for c in comps.iter() {
        ensure(c.steps().len() <= 64, || format!("{t:?} {mode}: runaway component {c}"))?;
        let ct = dom.comp_type(t, c).ok_or_else(|| format!("{t:?}: untyped component {c}"))?;
        for (s, _) in dom.steps(&ct) {
            let ext = c.join(std::slice::from_ref(&s));
            let f = dom.fold(t, &ext).ok_or_else(|| format!("{t:?}: cannot fold {ext:?}"))?;
            ensure(set.contains(&f), || format!("{t:?} {mode}: {c} + {s} leaves the components"))?;
        }
        for p in dom.preimages(t, c).iter() {
            ensure(dom.fold(t, p).as_ref() == Some(c), || {
                format!("{t:?} {mode}: preimage {p:?} of {c} folds elsewhere")
            })?;
            counts[2] += 1;
        }
        counts[1] += 1;
    }
    if mode == DomainMode::NewFold && !recursive(dom, t) {
        let want: BTreeSet<Comp> = old.comps(t).iter().filter(|c| !c.is_empty()).cloned().collect();
        let got: BTreeSet<Comp> = comps.iter().cloned().collect();
        ensure(got == want, || format!("{t:?}: non-recursive new components differ from old"))?;
    }
    Ok(())
}

fn self_alias_closed(a: &AliasSet) -> Result<(), String> {
    for (x, y) in a.iter() {
        if x != y {
            ensure(a.contains(x, x) && a.contains(y, y), || format!("{{{x}, {y}}} without self pairs"))?;
        }
    }
    Ok(())
}

fn domain_algebra() -> Outcome {
    let mut counts = [0usize; 4];
    for file in FIXTURES {
        let prog = fixture(file);
        for mode in MODES {
            let dom = Domain::new(&prog, mode);
            let old = Domain::new(&prog, DomainMode::OldFold);
            for t in fixture_types(&prog, &dom) {
                type_algebra(&dom, &old, &t, &mut counts).map_err(|e| format!("{file}: {e}"))?;
            }
            for r in analyze(&prog, mode) {
                for (p, a) in &r.per_point {
                    self_alias_closed(a).map_err(|e| format!("{file} {}:{p} {mode}: {e}", r.func))?;
                    counts[3] += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} paths folded, {} components closed, {} preimages, {} sets self-closed",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden OldFold sets", golden),
        ("construction example", construction),
        ("violation detection", violations),
        ("mutable-parameter retention", mutable_params),
        ("encapsulation", encapsulation),
        ("domain precision", precision),
        ("oracle soundness", soundness),
        ("domain algebra", domain_algebra),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
