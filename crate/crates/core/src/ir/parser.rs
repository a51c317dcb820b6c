//! Recursive-descent parser for `.pcore` source text.

use std::collections::BTreeSet;

use crate::error::{syntax, Result};
use crate::ir::ast::*;
use crate::ir::builtins;
use crate::ir::lexer::{lex, Tok, Token};

pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser { toks: lex(text)?, i: 0, fresh: 0 };
    let prog = p.program()?;
    check_duplicates(&prog)?;
    Ok(prog)
}

fn check_duplicates(prog: &Program) -> Result<()> {
    let mut types: BTreeSet<&str> = [INT, UNIT, BOOL, "Ref", "Array"].into_iter().collect();
    let mut conses: BTreeSet<String> =
        builtins::datas().into_iter().flat_map(|d| d.constructors.into_iter().map(|c| c.name)).collect();
    conses.extend(["Ref".to_string(), "Cl".to_string(), ARRAY_CONS.to_string()]);
    for d in &prog.datas {
        if !types.insert(&d.name) {
            return syntax(d.pos, format!("duplicate definition of type {}", d.name));
        }
        for c in &d.constructors {
            if !conses.insert(c.name.clone()) {
                return syntax(d.pos, format!("duplicate definition of constructor {}", c.name));
            }
        }
    }
    for a in &prog.aliases {
        if !types.insert(&a.name) {
            return syntax(a.pos, format!("duplicate definition of type {}", a.name));
        }
    }
    let mut funcs = BTreeSet::new();
    for f in &prog.funcs {
        if builtins::is_builtin_fn(&f.name) || !funcs.insert(&f.name) {
            return syntax(f.pos, format!("duplicate definition of function {}", f.name));
        }
    }
    Ok(())
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    fresh: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn at(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.at(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    /// Skips newlines only when the next real token is `sym`.
    fn continues_with(&mut self, sym: &str) -> bool {
        let mut k = 0;
        while *self.peek_at(k) == Tok::Newline {
            k += 1;
        }
        if matches!(self.peek_at(k), Tok::Sym(s) if *s == sym) {
            self.skip_newlines();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, what: &str) -> Result<T> {
        let found = match self.peek() {
            Tok::Ident(s) | Tok::Upper(s) => format!("'{s}'"),
            Tok::Int(n) => n.to_string(),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        };
        syntax(self.pos(), format!("expected {what}, found {found}"))
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.unexpected(&format!("'{sym}'"))
        }
    }

    fn ident(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("variable name"),
        }
    }

    fn upper(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Upper(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("capitalised name"),
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut prog = Program::default();
        loop {
            self.skip_newlines();
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Eof => return Ok(prog),
                Tok::Ident(kw) if kw == "data" => {
                    self.bump();
                    prog.datas.push(self.data_def(pos)?);
                }
                Tok::Ident(kw) if kw == "type" => {
                    self.bump();
                    let name = self.upper()?;
                    self.expect("=")?;
                    let ty = self.ty()?;
                    prog.aliases.push(TypeAlias { name, ty, pos });
                }
                Tok::Ident(kw) if kw == "fn" => {
                    self.bump();
                    prog.funcs.push(self.func_def(pos)?);
                }
                _ => return self.unexpected("'data', 'type' or 'fn'"),
            }
        }
    }

    fn data_def(&mut self, pos: Pos) -> Result<DataDef> {
        let name = self.upper()?;
        let mut params = Vec::new();
        while let Tok::Ident(v) = self.peek().clone() {
            self.bump();
            params.push(v);
        }
        self.expect("=")?;
        self.skip_newlines();
        let mut constructors = Vec::new();
        loop {
            let cname = self.upper()?;
            let mut args = Vec::new();
            while self.at_atype() {
                args.push(self.atype()?);
            }
            if constructors.iter().any(|c: &ConsDef| c.name == cname) {
                return syntax(pos, format!("constructor {cname} appears twice in {name}"));
            }
            constructors.push(ConsDef { name: cname, args });
            if !self.continues_with("|") {
                break;
            }
            self.bump();
            self.skip_newlines();
        }
        Ok(DataDef { name, params, constructors, pos })
    }

    fn at_atype(&self) -> bool {
        if self.at_kw("pre") || self.at_kw("post") {
            return false;
        }
        matches!(self.peek(), Tok::Upper(_) | Tok::Ident(_)) || self.at("(") || self.at("()")
    }

    fn atype(&mut self) -> Result<Type> {
        match self.peek().clone() {
            Tok::Upper(n) if n == "Ref" || n == "Array" => {
                self.unexpected("a type argument for Ref/Array in parentheses")
            }
            Tok::Upper(n) => {
                self.bump();
                Ok(Type::Named(n, vec![]))
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(Type::Var(v))
            }
            Tok::Sym("()") => {
                self.bump();
                Ok(Type::unit())
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => self.unexpected("type"),
        }
    }

    fn ty(&mut self) -> Result<Type> {
        match self.peek().clone() {
            Tok::Upper(n) if n == "Ref" => {
                self.bump();
                Ok(Type::reference(self.atype()?))
            }
            Tok::Upper(n) if n == "Array" => {
                self.bump();
                Ok(Type::Array(Box::new(self.atype()?)))
            }
            Tok::Upper(n) => {
                self.bump();
                let mut args = Vec::new();
                while self.at_atype() {
                    args.push(self.atype()?);
                }
                Ok(Type::Named(n, args))
            }
            _ => self.atype(),
        }
    }

    fn func_def(&mut self, pos: Pos) -> Result<FuncDef> {
        self.fresh = 0;
        let name = self.ident()?;
        let mut params = Vec::new();
        if !self.eat("()") {
            self.expect("(")?;
            if !self.eat(")") {
                loop {
                    self.skip_newlines();
                    let mutable = self.eat("!");
                    let pname = self.ident()?;
                    self.expect(":")?;
                    let ty = self.ty()?;
                    params.push(Param { name: pname, ty, mutable });
                    self.skip_newlines();
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
        }
        self.expect("->")?;
        let mut result = "ret".to_string();
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Sym(":") {
            result = self.ident()?;
            self.bump();
        }
        let result_ty = self.ty()?;
        self.skip_newlines();
        let mut pre = CondForm::nosharing();
        let mut post = CondForm::nosharing();
        if self.at_kw("pre") {
            self.bump();
            pre = self.cond()?;
            self.skip_newlines();
        }
        if self.at_kw("post") {
            self.bump();
            post = self.cond()?;
            self.skip_newlines();
        }
        let body = self.block()?;
        let mut f = FuncDef {
            name,
            sig: SharingSig { params, closure_params: 0, result, result_ty, pre, post },
            body,
            pos,
            types: TypeInfo::default(),
        };
        number_points(&mut f);
        Ok(f)
    }

    fn cond(&mut self) -> Result<CondForm> {
        if self.at_kw("nosharing") {
            self.bump();
            return Ok(CondForm::nosharing());
        }
        if self.at_kw("alias") {
            self.bump();
            return self.explicit_cond();
        }
        let mut stmts = Vec::new();
        loop {
            let lhs = self.cond_expr()?;
            self.expect("=")?;
            let rhs = self.cond_expr()?;
            stmts.push(CondStmt { lhs, rhs });
            if !self.continues_with(";") {
                break;
            }
            self.bump();
            self.skip_newlines();
        }
        Ok(CondForm::Stmts(stmts))
    }

    fn cond_expr(&mut self) -> Result<CondExpr> {
        match self.peek().clone() {
            Tok::Upper(cons) => {
                self.bump();
                let mut args = Vec::new();
                while let Tok::Ident(a) = self.peek().clone() {
                    self.bump();
                    args.push(a);
                }
                Ok(CondExpr::Cons { cons, args })
            }
            _ => {
                let mut derefs = 0;
                while self.eat("*") {
                    derefs += 1;
                }
                let var = self.ident()?;
                Ok(CondExpr::Deref { derefs, var })
            }
        }
    }

    fn explicit_cond(&mut self) -> Result<CondForm> {
        self.expect("{")?;
        let mut sets = Vec::new();
        self.skip_newlines();
        if self.eat("}") {
            return Ok(CondForm::Explicit(sets));
        }
        loop {
            self.skip_newlines();
            self.expect("{")?;
            let mut set = Vec::new();
            loop {
                self.skip_newlines();
                set.push(self.raw_varcomp()?);
                self.skip_newlines();
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
            sets.push(set);
            self.skip_newlines();
            if self.eat("}") {
                return Ok(CondForm::Explicit(sets));
            }
            self.expect(",")?;
        }
    }

    fn raw_varcomp(&mut self) -> Result<RawVarComp> {
        let var = self.ident()?;
        self.expect(".")?;
        self.expect("[")?;
        let mut steps = Vec::new();
        if !self.eat("]") {
            loop {
                let cons = self.upper()?;
                self.expect(".")?;
                let Tok::Int(i) = self.bump() else {
                    return self.unexpected("argument index");
                };
                if i < 1 {
                    return syntax(self.pos(), "argument index must be positive");
                }
                steps.push((cons, i as u32));
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(RawVarComp { var, steps })
    }

    fn block(&mut self) -> Result<Vec<Stmt>> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        loop {
            while *self.peek() == Tok::Newline || self.at(";") {
                self.bump();
            }
            if self.eat("}") {
                return Ok(stmts);
            }
            stmts.push(self.stmt()?);
            if !(*self.peek() == Tok::Newline || self.at(";") || self.at("}")) {
                return self.unexpected("end of statement");
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let mut bang = BTreeSet::new();
        let kind = match self.peek().clone() {
            Tok::Ident(kw) if kw == "case" && matches!(self.peek_at(1), Tok::Ident(_)) => {
                self.bump();
                let v = self.ident()?;
                let alts = self.alts()?;
                StmtKind::Case { v, alts }
            }
            Tok::Ident(kw) if kw == "error" && !matches!(self.peek_at(1), Tok::Sym("=")) => {
                self.bump();
                StmtKind::Error
            }
            Tok::Sym("*") => {
                self.bump();
                let direct = self.eat("!");
                let v = self.ident()?;
                if self.eat(":=") {
                    if direct {
                        bang.insert(v.clone());
                    }
                    if self.eat("!") {
                        let src = self.ident()?;
                        bang.insert(src.clone());
                        StmtKind::Assign { v, src }
                    } else {
                        StmtKind::Assign { v, src: self.ident()? }
                    }
                } else if direct {
                    return self.unexpected("':=' after '*!v'");
                } else {
                    self.expect("=")?;
                    StmtKind::DerefEq { v, src: self.ident()? }
                }
            }
            Tok::Sym("(") => {
                let v = self.fresh_name();
                self.paren_app(v, &mut bang)?
            }
            Tok::Ident(v) if *self.peek_at(1) == Tok::Sym("=") => {
                self.bump();
                self.bump();
                self.rhs(v, &mut bang)?
            }
            Tok::Ident(f) => {
                self.bump();
                let v = self.fresh_name();
                let args = self.app_args(&mut bang)?;
                StmtKind::App { v, f, args }
            }
            _ => return self.unexpected("statement"),
        };
        while self.eat("!") {
            bang.insert(self.ident()?);
        }
        Ok(Stmt { kind, bang, point: 0, pos })
    }

    fn fresh_name(&mut self) -> Name {
        self.fresh += 1;
        format!("_u{}", self.fresh)
    }

    fn app_args(&mut self, bang: &mut BTreeSet<Name>) -> Result<Vec<Name>> {
        let mut args = Vec::new();
        loop {
            let banged = self.at("!") && matches!(self.peek_at(1), Tok::Ident(_));
            if banged {
                self.bump();
            } else if !matches!(self.peek(), Tok::Ident(_)) {
                return Ok(args);
            }
            let a = self.ident()?;
            if banged {
                bang.insert(a.clone());
            }
            args.push(a);
        }
    }

    fn paren_app(&mut self, v: Name, bang: &mut BTreeSet<Name>) -> Result<StmtKind> {
        self.expect("(")?;
        let f = self.ident()?;
        let args = self.app_args(bang)?;
        self.expect(")")?;
        if args.is_empty() {
            return self.unexpected("arguments in parenthesised application");
        }
        Ok(StmtKind::App { v, f, args })
    }

    fn rhs(&mut self, v: Name, bang: &mut BTreeSet<Name>) -> Result<StmtKind> {
        match self.peek().clone() {
            Tok::Sym("*") => {
                self.bump();
                Ok(StmtKind::EqDeref { v, src: self.ident()? })
            }
            Tok::Int(n) => {
                self.bump();
                Ok(StmtKind::Dc { v, cons: Ctor::Int(n), args: vec![] })
            }
            Tok::Sym("()") => {
                self.bump();
                Ok(StmtKind::Dc { v, cons: Ctor::Named(UNIT.into()), args: vec![] })
            }
            Tok::Upper(c) => {
                self.bump();
                let mut args = Vec::new();
                while let Tok::Ident(a) = self.peek().clone() {
                    self.bump();
                    args.push(a);
                }
                Ok(StmtKind::Dc { v, cons: Ctor::Named(c), args })
            }
            Tok::Sym("(") => self.paren_app(v, bang),
            Tok::Ident(kw) if kw == "arrayref" && matches!(self.peek_at(1), Tok::Ident(_)) => {
                self.bump();
                let array = self.ident()?;
                let index = self.ident()?;
                Ok(StmtKind::ArrayRef { v, array, index })
            }
            Tok::Ident(w) => {
                self.bump();
                if self.eat("::") {
                    let ty = self.ty()?;
                    return Ok(StmtKind::Instype { v, src: w, ty });
                }
                let args = self.app_args(bang)?;
                if args.is_empty() {
                    Ok(StmtKind::EqVar { v, src: w })
                } else {
                    Ok(StmtKind::App { v, f: w, args })
                }
            }
            _ => self.unexpected("right-hand side"),
        }
    }

    fn alts(&mut self) -> Result<Vec<Alt>> {
        self.skip_newlines();
        self.expect("{")?;
        let mut alts: Vec<Alt> = Vec::new();
        loop {
            while *self.peek() == Tok::Newline || self.at(";") {
                self.bump();
            }
            if self.eat("}") {
                return Ok(alts);
            }
            let pos = self.pos();
            let cons = match self.bump() {
                Tok::Upper(c) => c,
                Tok::Sym("()") => UNIT.to_string(),
                _ => {
                    self.i -= 1;
                    return self.unexpected("constructor pattern");
                }
            };
            let mut refs = Vec::new();
            while self.eat("*") {
                refs.push(self.ident()?);
            }
            self.expect("->")?;
            self.skip_newlines();
            let body = self.block()?;
            if alts.iter().any(|a| a.pat.cons == cons) {
                return syntax(pos, format!("duplicate alternative {cons}"));
            }
            alts.push(Alt { pat: Pat { cons, refs }, body, entry: 0, pos });
        }
    }
}

/// Zeroes every source position so programs can be compared structurally.
pub fn strip_positions(prog: &mut Program) {
    fn stmts(ss: &mut [Stmt]) {
        for s in ss {
            s.pos = Pos::default();
            if let StmtKind::Case { alts, .. } = &mut s.kind {
                for a in alts {
                    a.pos = Pos::default();
                    stmts(&mut a.body);
                }
            }
        }
    }
    prog.datas.iter_mut().for_each(|d| d.pos = Pos::default());
    prog.aliases.iter_mut().for_each(|a| a.pos = Pos::default());
    for f in &mut prog.funcs {
        f.pos = Pos::default();
        stmts(&mut f.body);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        let p = parse_program("").unwrap();
        assert!(p.funcs.is_empty() && p.datas.is_empty());
    }

    #[test]
    fn duplicate_alternative_rejected() {
        let src = "data L = N | C Int L\nfn f (x: L) -> Int { case x { N -> { ret = 1 } N -> { ret = 2 } } }";
        let err = parse_program(src).unwrap_err().to_string();
        assert!(err.contains("duplicate alternative"), "{err}");
    }

    #[test]
    fn duplicate_function_rejected() {
        let src = "fn f () -> Int { ret = 1 }\nfn f () -> Int { ret = 2 }";
        assert!(parse_program(src).is_err());
    }

    #[test]
    fn bare_call_and_bangs() {
        let src = "fn g (!p: Ref Int) -> () { (h p !p) !q\n h2 !p }";
        let p = parse_program(src).unwrap();
        let body = &p.funcs[0].body;
        assert!(matches!(&body[0].kind, StmtKind::App { v, f, args } if v == "_u1" && f == "h" && args.len() == 2));
        assert_eq!(body[0].bang.iter().cloned().collect::<Vec<_>>(), vec!["p", "q"]);
        assert!(matches!(&body[1].kind, StmtKind::App { v, .. } if v == "_u2"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_program("fn f () -> Int {\n  ret = = 1\n}").unwrap_err();
        assert!(err.to_string().starts_with("2:9"), "{err}");
    }
}
