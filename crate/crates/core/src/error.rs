use crate::ir::ast::Pos;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: {msg}")]
    Type { pos: Pos, msg: String },
    #[error("bad literal: {0}")]
    Literal(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Run(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn syntax<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

pub(crate) fn type_err<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Type { pos, msg: msg.into() })
}
