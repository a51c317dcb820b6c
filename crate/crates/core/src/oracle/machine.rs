//! A direct interpreter over an explicit word heap.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ir::ast::{Ctor, FuncDef, Name, Point, Program, Stmt, StmtKind, ARRAY_CONS};
use crate::ir::builtins;

pub type Addr = usize;

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// Nested calls allowed before a run is abandoned.
pub const MAX_DEPTH: usize = 400;

/// The contents of one word, in a variable or on the heap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Value {
    Int(i64),
    /// Nullary constructor.
    Const(Name),
    /// Constructor (or array) with its arguments in `arity` consecutive words.
    Block {
        tag: Name,
        base: Addr,
        arity: usize,
    },
    Ref(Addr),
    /// Partial application; supplied arguments live at `base..base+supplied`,
    /// the most recent one first.
    Closure {
        func: Name,
        base: Addr,
        supplied: usize,
    },
}

impl Value {
    /// Heap words directly inside this value, with the step leading to each.
    pub fn words(&self) -> Vec<(Name, u32, Addr)> {
        match self {
            Value::Int(_) | Value::Const(_) => vec![],
            Value::Block { tag, base, arity } if tag == ARRAY_CONS => {
                (0..*arity).map(|i| (tag.clone(), 1, base + i)).collect()
            }
            Value::Block { tag, base, arity } => (0..*arity).map(|i| (tag.clone(), i as u32 + 1, base + i)).collect(),
            Value::Ref(a) => vec![("Ref".into(), 1, *a)],
            Value::Closure { base, supplied, .. } => {
                (0..*supplied).map(|i| ("Cl".into(), i as u32 + 1, base + i)).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Heap {
    words: Vec<Value>,
}

impl Heap {
    pub fn alloc(&mut self, vals: impl IntoIterator<Item = Value>) -> Addr {
        let base = self.words.len();
        self.words.extend(vals);
        base
    }

    pub fn get(&self, a: Addr) -> &Value {
        &self.words[a]
    }

    pub fn set(&mut self, a: Addr, v: Value) {
        self.words[a] = v;
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Readable rendering, cut off below `depth` constructors.
    pub fn render(&self, v: &Value, depth: usize) -> String {
        let mut out = String::new();
        self.render_into(v, depth, &mut out);
        out
    }

    fn render_into(&self, v: &Value, depth: usize, out: &mut String) {
        if depth == 0 {
            out.push_str("..");
            return;
        }
        let nested = |out: &mut String, a: Addr| {
            let inner = self.get(a);
            let paren = matches!(inner, Value::Block { .. } | Value::Ref(_) | Value::Closure { .. });
            out.push(' ');
            if paren {
                out.push('(');
            }
            self.render_into(inner, depth - 1, out);
            if paren {
                out.push(')');
            }
        };
        match v {
            Value::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Value::Const(c) => out.push_str(c),
            Value::Block { tag, base, arity } => {
                let _ = write!(out, "{tag}@{base}");
                for i in 0..*arity {
                    nested(out, base + i);
                }
            }
            Value::Ref(a) => {
                let _ = write!(out, "Ref@{a}");
                nested(out, *a);
            }
            Value::Closure { func, base, supplied } => {
                let _ = write!(out, "{func}/{supplied}@{base}");
                for i in (0..*supplied).rev() {
                    nested(out, base + i);
                }
            }
        }
    }
}

/// One activation: the function and its variables.
#[derive(Clone, Debug)]
pub struct Frame<'p> {
    pub func: &'p FuncDef,
    pub env: BTreeMap<Name, Value>,
    pub depth: usize,
}

/// Hooks called while a program runs.
pub trait Observer {
    /// Control reached `point` of `frame`.
    fn at(&mut self, heap: &Heap, frame: &Frame<'_>, point: Point);

    /// `callee` is entered, from `site` in the caller unless it is the entry.
    fn enter(&mut self, _site: Option<(&Frame<'_>, Point)>, _callee: &FuncDef) {}

    fn leave(&mut self, _callee: &FuncDef) {}
}

impl Observer for () {
    fn at(&mut self, _: &Heap, _: &Frame<'_>, _: Point) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Returned {
        value: String,
    },
    /// An `error` statement, or a case with no matching alternative.
    Error {
        func: Name,
        point: Point,
    },
    StepLimit {
        steps: u64,
    },
    Fault {
        msg: String,
    },
}

impl Outcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, Outcome::Returned { .. })
    }
}

enum Stop {
    Error(Name, Point),
    StepLimit,
    Fault(String),
}

type Flow<T> = std::result::Result<T, Stop>;

pub struct Machine<'p> {
    prog: &'p Program,
    pub heap: Heap,
    steps: u64,
    limit: u64,
}

impl<'p> Machine<'p> {
    pub fn new(prog: &'p Program, limit: u64) -> Machine<'p> {
        Machine { prog, heap: Heap::default(), steps: 0, limit }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Calls `entry` with already built arguments.
    pub fn run(&mut self, entry: &str, args: Vec<Value>, obs: &mut dyn Observer) -> Result<Outcome> {
        let f = self.prog.func(entry).ok_or_else(|| Error::Run(format!("no function {entry}")))?;
        if f.sig.params.len() != args.len() {
            return Err(Error::Run(format!("{entry} takes {} arguments, got {}", f.sig.params.len(), args.len())));
        }
        Ok(match self.call_fn(f, args, None, 0, obs) {
            Ok(v) => Outcome::Returned { value: self.heap.render(&v, 8) },
            Err(Stop::Error(func, point)) => Outcome::Error { func, point },
            Err(Stop::StepLimit) => Outcome::StepLimit { steps: self.steps },
            Err(Stop::Fault(msg)) => Outcome::Fault { msg },
        })
    }

    fn call_fn(
        &mut self,
        f: &'p FuncDef,
        args: Vec<Value>,
        site: Option<(&Frame<'p>, Point)>,
        depth: usize,
        obs: &mut dyn Observer,
    ) -> Flow<Value> {
        if depth >= MAX_DEPTH {
            return Err(Stop::Fault(format!("call depth {MAX_DEPTH} exceeded")));
        }
        let env = f.sig.params.iter().map(|p| p.name.clone()).zip(args).collect();
        let mut frame = Frame { func: f, env, depth };
        obs.enter(site, f);
        obs.at(&self.heap, &frame, 0);
        self.block(&mut frame, &f.body, obs)?;
        obs.leave(f);
        frame.env.remove(f.ret()).ok_or_else(|| Stop::Fault(format!("{} finished without a result", f.name)))
    }

    fn block(&mut self, fr: &mut Frame<'p>, stmts: &'p [Stmt], obs: &mut dyn Observer) -> Flow<()> {
        for s in stmts {
            self.stmt(fr, s, obs)?;
            obs.at(&self.heap, fr, s.point);
        }
        Ok(())
    }

    fn var(&self, fr: &Frame<'_>, v: &str) -> Flow<Value> {
        fr.env.get(v).cloned().ok_or_else(|| Stop::Fault(format!("{}: unbound variable {v}", fr.func.name)))
    }

    fn cell(&self, fr: &Frame<'_>, v: &str) -> Flow<Addr> {
        match self.var(fr, v)? {
            Value::Ref(a) => Ok(a),
            other => Err(Stop::Fault(format!("{v} is not a reference: {other:?}"))),
        }
    }

    fn stmt(&mut self, fr: &mut Frame<'p>, s: &'p Stmt, obs: &mut dyn Observer) -> Flow<()> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(Stop::StepLimit);
        }
        match &s.kind {
            StmtKind::EqVar { v, src } | StmtKind::Instype { v, src, .. } => {
                let x = self.var(fr, src)?;
                fr.env.insert(v.clone(), x);
            }
            StmtKind::EqDeref { v, src } => {
                let a = self.cell(fr, src)?;
                fr.env.insert(v.clone(), self.heap.get(a).clone());
            }
            StmtKind::DerefEq { v, src } => {
                let x = self.var(fr, src)?;
                let a = self.heap.alloc([x]);
                fr.env.insert(v.clone(), Value::Ref(a));
            }
            StmtKind::Dc { v, cons, args } => {
                let x = match cons {
                    Ctor::Int(i) => Value::Int(*i),
                    Ctor::Named(c) if args.is_empty() && c != ARRAY_CONS => Value::Const(c.clone()),
                    Ctor::Named(c) => {
                        let vals = args.iter().map(|a| self.var(fr, a)).collect::<Flow<Vec<_>>>()?;
                        let arity = vals.len();
                        let base = self.heap.alloc(vals);
                        Value::Block { tag: c.clone(), base, arity }
                    }
                };
                fr.env.insert(v.clone(), x);
            }
            StmtKind::Case { v, alts } => {
                let x = self.var(fr, v)?;
                let (tag, fields) = match &x {
                    Value::Const(c) => (c.clone(), vec![]),
                    Value::Block { tag, base, arity } => (tag.clone(), (0..*arity).map(|i| base + i).collect()),
                    other => return Err(Stop::Fault(format!("case on {other:?}"))),
                };
                let Some(alt) = alts.iter().find(|a| a.pat.cons == tag) else {
                    return Err(Stop::Error(fr.func.name.clone(), s.point));
                };
                for (r, a) in alt.pat.refs.iter().zip(fields) {
                    fr.env.insert(r.clone(), Value::Ref(a));
                }
                obs.at(&self.heap, fr, alt.entry);
                self.block(fr, &alt.body, obs)?;
            }
            StmtKind::Error => return Err(Stop::Error(fr.func.name.clone(), s.point)),
            StmtKind::App { v, f, args } => {
                let mut all = Vec::new();
                let func = match fr.env.get(f) {
                    Some(Value::Closure { func, base, supplied }) => {
                        all.extend((0..*supplied).rev().map(|i| self.heap.get(base + i).clone()));
                        func.clone()
                    }
                    Some(other) => return Err(Stop::Fault(format!("{f} is not a function: {other:?}"))),
                    None => f.clone(),
                };
                for a in args {
                    all.push(self.var(fr, a)?);
                }
                let x = self.apply(fr, s.point, &func, all, obs)?;
                fr.env.insert(v.clone(), x);
            }
            StmtKind::Assign { v, src } => {
                let a = self.cell(fr, v)?;
                let x = self.var(fr, src)?;
                self.heap.set(a, x);
            }
            StmtKind::ArrayRef { v, array, index } => {
                let (base, len) = match self.var(fr, array)? {
                    Value::Block { base, arity, .. } => (base, arity),
                    other => return Err(Stop::Fault(format!("{array} is not an array: {other:?}"))),
                };
                let i = match self.var(fr, index)? {
                    Value::Int(i) => i,
                    other => return Err(Stop::Fault(format!("{index} is not an integer: {other:?}"))),
                };
                if i < 0 || i as usize >= len {
                    return Err(Stop::Error(fr.func.name.clone(), s.point));
                }
                fr.env.insert(v.clone(), Value::Ref(base + i as usize));
            }
        }
        Ok(())
    }

    fn apply(
        &mut self,
        fr: &Frame<'p>,
        site: Point,
        func: &str,
        all: Vec<Value>,
        obs: &mut dyn Observer,
    ) -> Flow<Value> {
        let arity = match self.prog.func(func) {
            Some(g) => g.sig.params.len(),
            None if builtins::is_builtin_fn(func) => 2,
            None => return Err(Stop::Fault(format!("unknown function {func}"))),
        };
        if all.len() < arity {
            let supplied = all.len();
            let base = self.heap.alloc(all.into_iter().rev());
            return Ok(Value::Closure { func: func.to_string(), base, supplied });
        }
        match self.prog.func(func) {
            Some(g) => self.call_fn(g, all, Some((fr, site)), fr.depth + 1, obs),
            None => {
                let int = |v: &Value| match v {
                    Value::Int(i) => Ok(*i),
                    other => Err(Stop::Fault(format!("{func} applied to {other:?}"))),
                };
                let (a, b) = (int(&all[0])?, int(&all[1])?);
                Ok(match builtins::eval(func, a, b) {
                    Some(Ok(i)) => Value::Int(i),
                    Some(Err(t)) => Value::Const(if t { "True" } else { "False" }.into()),
                    None => return Err(Stop::Fault(format!("unknown builtin {func}"))),
                })
            }
        }
    }
}
