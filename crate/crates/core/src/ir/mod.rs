//! Core language: syntax tree, parsing, printing, type checking, liveness.

pub mod ast;
pub mod builtins;
pub mod lexer;
pub mod liveness;
pub mod parser;
pub mod pretty;
pub mod typeck;
