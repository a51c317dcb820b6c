use crate::error::{syntax, Result};
use crate::ir::ast::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case or underscore-initial identifier, keywords included.
    Ident(String),
    /// Upper-case identifier: a type or constructor name.
    Upper(String),
    Int(i64),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: &[&str] =
    &[":=", "::", "->", "()", "=", "*", "!", ":", ",", "(", ")", "{", "}", "[", "]", "|", ";", "."];

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            out.push(Token { tok: Tok::Newline, pos });
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let negative = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let Ok(n) = text.parse::<i64>() else {
                return syntax(pos, format!("integer literal out of range: {text}"));
            };
            col += (i - start) as u32;
            out.push(Token { tok: Tok::Int(n), pos });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let tok = if c.is_uppercase() { Tok::Upper(text) } else { Tok::Ident(text) };
            out.push(Token { tok, pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return syntax(pos, format!("unexpected character '{c}'"));
        };
        i += sym.len();
        col += sym.len() as u32;
        out.push(Token { tok: Tok::Sym(sym), pos });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}
