//! Abstract syntax of the core language.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Name = String;

/// Program point label. Point 0 is function entry; every simple statement
/// is labelled with the point just after it, every case alternative with the
/// point just after its pattern binds, and every case with the point after
/// the whole case.
pub type Point = u32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(Name),
    Named(Name, Vec<Type>),
    Ref(Box<Type>),
    Array(Box<Type>),
    Fn(FnType),
}

/// A function value: either a known function with nothing supplied yet, or a
/// closure holding `supplied` arguments. Parameter types are already
/// instantiated for the use site.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnType {
    pub func: Name,
    pub params: Vec<Type>,
    pub result: Box<Type>,
    pub supplied: usize,
}

pub const INT: &str = "Int";
pub const UNIT: &str = "()";
pub const BOOL: &str = "Bool";

impl Type {
    pub fn int() -> Type {
        Type::Named(INT.into(), vec![])
    }

    pub fn unit() -> Type {
        Type::Named(UNIT.into(), vec![])
    }

    pub fn bool() -> Type {
        Type::Named(BOOL.into(), vec![])
    }

    pub fn reference(t: Type) -> Type {
        Type::Ref(Box::new(t))
    }

    /// The one-component stand-in used for type variables during analysis.
    pub fn opaque() -> Type {
        Type::reference(Type::unit())
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, Type::Ref(t) if **t == Type::unit())
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Named(_, args) => args.iter().any(Type::has_vars),
            Type::Ref(t) | Type::Array(t) => t.has_vars(),
            Type::Fn(f) => f.params.iter().any(Type::has_vars) || f.result.has_vars(),
        }
    }

    pub fn subst(&self, map: &BTreeMap<Name, Type>) -> Type {
        match self {
            Type::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Type::Named(n, args) => Type::Named(n.clone(), args.iter().map(|a| a.subst(map)).collect()),
            Type::Ref(t) => Type::reference(t.subst(map)),
            Type::Array(t) => Type::Array(Box::new(t.subst(map))),
            Type::Fn(f) => Type::Fn(FnType {
                func: f.func.clone(),
                params: f.params.iter().map(|p| p.subst(map)).collect(),
                result: Box::new(f.result.subst(map)),
                supplied: f.supplied,
            }),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(v) => {
                out.insert(v.clone());
            }
            Type::Named(_, args) => args.iter().for_each(|a| a.vars(out)),
            Type::Ref(t) | Type::Array(t) => t.vars(out),
            Type::Fn(f) => {
                f.params.iter().for_each(|p| p.vars(out));
                f.result.vars(out);
            }
        }
    }

    /// Identifier-safe rendering, used to name per-type abstract variables.
    pub fn mangle(&self) -> String {
        match self {
            Type::Var(v) => v.clone(),
            Type::Named(n, args) => {
                let mut s = if n == UNIT { "Unit".to_string() } else { n.clone() };
                for a in args {
                    s.push('_');
                    s.push_str(&a.mangle());
                }
                s
            }
            Type::Ref(t) => format!("Ref_{}", t.mangle()),
            Type::Array(t) => format!("Array_{}", t.mangle()),
            Type::Fn(f) => format!("Fn_{}_{}", f.func, f.supplied),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atomic = match self {
            Type::Var(_) => true,
            Type::Named(_, args) => args.is_empty(),
            _ => false,
        };
        if atomic {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "{v}"),
            Type::Named(n, args) => {
                write!(f, "{n}")?;
                for a in args {
                    write!(f, " ")?;
                    a.fmt_atom(f)?;
                }
                Ok(())
            }
            Type::Ref(t) => {
                write!(f, "Ref ")?;
                t.fmt_atom(f)
            }
            Type::Array(t) => {
                write!(f, "Array ")?;
                t.fmt_atom(f)
            }
            Type::Fn(ft) => {
                write!(f, "<{}", ft.func)?;
                for p in &ft.params[..ft.supplied.min(ft.params.len())] {
                    write!(f, " {p}")?;
                }
                write!(f, " | ")?;
                for (i, p) in ft.params.iter().enumerate().skip(ft.supplied) {
                    if i > ft.supplied {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, " -> {}>", ft.result)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsDef {
    pub name: Name,
    pub args: Vec<Type>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDef {
    pub name: Name,
    pub params: Vec<Name>,
    pub constructors: Vec<ConsDef>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAlias {
    pub name: Name,
    pub ty: Type,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Name,
    pub ty: Type,
    pub mutable: bool,
}

/// One side of a condition equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondExpr {
    /// `**x`: a variable under `derefs` dereferences. `abstract` is spelled
    /// as a variable named [`ABSTRACT`].
    Deref {
        derefs: usize,
        var: Name,
    },
    Cons {
        cons: Name,
        args: Vec<Name>,
    },
}

pub const ABSTRACT: &str = "abstract";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondStmt {
    pub lhs: CondExpr,
    pub rhs: CondExpr,
}

/// A component reference as written in explicit alias-set conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVarComp {
    pub var: Name,
    pub steps: Vec<(Name, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondForm {
    /// Condition statements; `nosharing` is the empty list.
    Stmts(Vec<CondStmt>),
    /// Set-of-sets notation: every inner set is a clique of aliasing
    /// components, self pairs included.
    Explicit(Vec<Vec<RawVarComp>>),
}

impl CondForm {
    pub fn nosharing() -> CondForm {
        CondForm::Stmts(Vec::new())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharingSig {
    pub params: Vec<Param>,
    /// Number of leading formals that stand for closure arguments.
    pub closure_params: usize,
    pub result: Name,
    pub result_ty: Type,
    pub pre: CondForm,
    pub post: CondForm,
}

impl SharingSig {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn is_mutable(&self, name: &str) -> bool {
        self.params.iter().any(|p| p.mutable && p.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ctor {
    Named(Name),
    Int(i64),
}

impl fmt::Display for Ctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ctor::Named(n) => write!(f, "{n}"),
            Ctor::Int(i) => write!(f, "{i}"),
        }
    }
}

/// Array constructor pseudo-name, also used as the path step into arrays.
pub const ARRAY_CONS: &str = "Array_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pat {
    pub cons: Name,
    pub refs: Vec<Name>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alt {
    pub pat: Pat,
    pub body: Vec<Stmt>,
    pub entry: Point,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    /// `v = w`
    EqVar {
        v: Name,
        src: Name,
    },
    /// `v = *w`
    EqDeref {
        v: Name,
        src: Name,
    },
    /// `*v = w`
    DerefEq {
        v: Name,
        src: Name,
    },
    /// `v = C w1 .. wn`
    Dc {
        v: Name,
        cons: Ctor,
        args: Vec<Name>,
    },
    /// `case v { .. }`
    Case {
        v: Name,
        alts: Vec<Alt>,
    },
    Error,
    /// `v = f w1 .. wn`
    App {
        v: Name,
        f: Name,
        args: Vec<Name>,
    },
    /// `*!v := w`
    Assign {
        v: Name,
        src: Name,
    },
    /// `v = w :: T`
    Instype {
        v: Name,
        src: Name,
        ty: Type,
    },
    /// `v = arrayref a i`
    ArrayRef {
        v: Name,
        array: Name,
        index: Name,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Variables annotated with `!` anywhere in the statement.
    pub bang: BTreeSet<Name>,
    pub point: Point,
    pub pos: Pos,
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Stmt {
        Stmt { kind, bang: BTreeSet::new(), point: 0, pos: Pos::default() }
    }

    /// The variable this statement binds, if any.
    pub fn defined(&self) -> Option<&Name> {
        match &self.kind {
            StmtKind::EqVar { v, .. }
            | StmtKind::EqDeref { v, .. }
            | StmtKind::DerefEq { v, .. }
            | StmtKind::Dc { v, .. }
            | StmtKind::App { v, .. }
            | StmtKind::Instype { v, .. }
            | StmtKind::ArrayRef { v, .. } => Some(v),
            StmtKind::Case { .. } | StmtKind::Error | StmtKind::Assign { .. } => None,
        }
    }

    /// Variables read by this statement itself (not by nested alternatives).
    pub fn used(&self) -> Vec<&Name> {
        match &self.kind {
            StmtKind::EqVar { src, .. }
            | StmtKind::EqDeref { src, .. }
            | StmtKind::DerefEq { src, .. }
            | StmtKind::Instype { src, .. } => vec![src],
            StmtKind::Dc { args, .. } => args.iter().collect(),
            StmtKind::Case { v, .. } => vec![v],
            StmtKind::Error => vec![],
            StmtKind::App { f, args, .. } => std::iter::once(f).chain(args.iter()).collect(),
            StmtKind::Assign { v, src } => vec![v, src],
            StmtKind::ArrayRef { array, index, .. } => vec![array, index],
        }
    }
}

/// Per-function information filled in by type checking.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeInfo {
    pub var_types: BTreeMap<Name, Type>,
    /// Instantiated callee type at every application, keyed by point.
    pub app_types: BTreeMap<Point, FnType>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncDef {
    pub name: Name,
    pub sig: SharingSig,
    pub body: Vec<Stmt>,
    pub pos: Pos,
    pub types: TypeInfo,
}

impl FuncDef {
    pub fn ret(&self) -> &Name {
        &self.sig.result
    }

    pub fn is_param(&self, v: &str) -> bool {
        self.sig.params.iter().any(|p| p.name == v)
    }

    pub fn last_point(&self) -> Point {
        fn walk(stmts: &[Stmt], max: &mut Point) {
            for s in stmts {
                *max = (*max).max(s.point);
                if let StmtKind::Case { alts, .. } = &s.kind {
                    for a in alts {
                        *max = (*max).max(a.entry);
                        walk(&a.body, max);
                    }
                }
            }
        }
        let mut max = 0;
        walk(&self.body, &mut max);
        max
    }

    /// All statements in program order, nested ones included.
    pub fn statements(&self) -> Vec<&Stmt> {
        fn walk<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a Stmt>) {
            for s in stmts {
                out.push(s);
                if let StmtKind::Case { alts, .. } = &s.kind {
                    for a in alts {
                        walk(&a.body, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.body, &mut out);
        out
    }

    /// Every program point label in the body, in ascending order.
    pub fn points(&self) -> Vec<Point> {
        let mut pts = vec![0];
        for s in self.statements() {
            pts.push(s.point);
            if let StmtKind::Case { alts, .. } = &s.kind {
                pts.extend(alts.iter().map(|a| a.entry));
            }
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub datas: Vec<DataDef>,
    pub aliases: Vec<TypeAlias>,
    pub funcs: Vec<FuncDef>,
}

impl Program {
    pub fn func(&self, name: &str) -> Option<&FuncDef> {
        self.funcs.iter().find(|f| f.name == name)
    }

    pub fn data(&self, name: &str) -> Option<&DataDef> {
        self.datas.iter().find(|d| d.name == name)
    }

    /// The data definition owning a constructor, with the constructor.
    pub fn constructor(&self, cons: &str) -> Option<(&DataDef, &ConsDef)> {
        self.datas.iter().find_map(|d| d.constructors.iter().find(|c| c.name == cons).map(|c| (d, c)))
    }
}

/// Reassigns program point labels in textual order.
pub fn number_points(f: &mut FuncDef) {
    fn walk(stmts: &mut [Stmt], next: &mut Point) {
        for s in stmts {
            if let StmtKind::Case { alts, .. } = &mut s.kind {
                for a in alts.iter_mut() {
                    *next += 1;
                    a.entry = *next;
                    walk(&mut a.body, next);
                }
            }
            *next += 1;
            s.point = *next;
        }
    }
    let mut next = 0;
    walk(&mut f.body, &mut next);
}
