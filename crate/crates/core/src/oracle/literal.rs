//! Argument literals such as `Cons 2 (Cons 1 Nil)` or `Ref TNil`.

use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use crate::error::{Error, Result};
use crate::ir::ast::{Name, Program, ARRAY_CONS, UNIT};
use crate::oracle::machine::{Heap, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Cons(Name, Vec<Literal>),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Cons(c, args) => {
                write!(f, "{c}")?;
                for a in args {
                    match a {
                        Literal::Cons(_, inner) if !inner.is_empty() => write!(f, " ({a})")?,
                        _ => write!(f, " {a}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Int(i64),
    Name(String),
    Open,
    Close,
    Comma,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it: Peekable<Chars> = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '(' => {
                it.next();
                if it.peek() == Some(&')') {
                    it.next();
                    out.push(Tok::Name(UNIT.into()));
                } else {
                    out.push(Tok::Open);
                }
            }
            ')' => {
                it.next();
                out.push(Tok::Close);
            }
            ',' => {
                it.next();
                out.push(Tok::Comma);
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut n = String::from(c);
                it.next();
                while let Some(&d) = it.peek().filter(|d| d.is_ascii_digit()) {
                    n.push(d);
                    it.next();
                }
                out.push(Tok::Int(n.parse().map_err(|_| Error::Literal(format!("bad integer {n}")))?));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut n = String::new();
                while let Some(&d) = it.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    n.push(d);
                    it.next();
                }
                out.push(Tok::Name(n));
            }
            other => return Err(Error::Literal(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }

    fn literal(&mut self) -> Result<Literal> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.i += 1;
                let mut args = Vec::new();
                while matches!(self.peek(), Some(Tok::Int(_) | Tok::Name(_) | Tok::Open)) {
                    args.push(self.atom()?);
                }
                Ok(Literal::Cons(n, args))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Literal> {
        let t = self.toks.get(self.i).ok_or_else(|| Error::Literal("unexpected end of literal".into()))?;
        self.i += 1;
        match t {
            Tok::Int(i) => Ok(Literal::Int(*i)),
            Tok::Name(n) => Ok(Literal::Cons(n.clone(), vec![])),
            Tok::Open => {
                let l = self.literal()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::Literal("expected )".into()));
                }
                self.i += 1;
                Ok(l)
            }
            other => Err(Error::Literal(format!("unexpected {other:?}"))),
        }
    }
}

/// Parses a comma separated list of literals; an empty string is no arguments.
pub fn parse_literals(s: &str) -> Result<Vec<Literal>> {
    let mut p = Parser { toks: lex(s)?, i: 0 };
    let mut out = Vec::new();
    if p.toks.is_empty() {
        return Ok(out);
    }
    loop {
        out.push(p.literal()?);
        match p.peek() {
            None => return Ok(out),
            Some(Tok::Comma) => p.i += 1,
            Some(other) => return Err(Error::Literal(format!("unexpected {other:?} after literal"))),
        }
    }
}

/// Allocates a literal on the heap.
pub fn build(prog: &Program, heap: &mut Heap, lit: &Literal) -> Result<Value> {
    match lit {
        Literal::Int(i) => Ok(Value::Int(*i)),
        Literal::Cons(c, args) if c == "Ref" => match args.as_slice() {
            [x] => {
                let v = build(prog, heap, x)?;
                Ok(Value::Ref(heap.alloc([v])))
            }
            _ => Err(Error::Literal("Ref takes one argument".into())),
        },
        Literal::Cons(c, args) => {
            if c != ARRAY_CONS {
                let (_, cd) = prog.constructor(c).ok_or_else(|| Error::Literal(format!("unknown constructor {c}")))?;
                if cd.args.len() != args.len() {
                    return Err(Error::Literal(format!("{c} takes {} arguments, got {}", cd.args.len(), args.len())));
                }
            }
            if args.is_empty() && c != ARRAY_CONS {
                return Ok(Value::Const(c.clone()));
            }
            let vals = args.iter().map(|a| build(prog, heap, a)).collect::<Result<Vec<_>>>()?;
            let arity = vals.len();
            let base = heap.alloc(vals);
            Ok(Value::Block { tag: c.clone(), base, arity })
        }
    }
}
