//! Types and functions every program can use without declaring them.

use crate::ir::ast::{CondForm, ConsDef, DataDef, Param, Pos, SharingSig, Type, BOOL, UNIT};

pub fn datas() -> Vec<DataDef> {
    vec![
        DataDef {
            name: UNIT.into(),
            params: vec![],
            constructors: vec![ConsDef { name: UNIT.into(), args: vec![] }],
            pos: Pos::default(),
        },
        DataDef {
            name: BOOL.into(),
            params: vec![],
            constructors: vec![
                ConsDef { name: "False".into(), args: vec![] },
                ConsDef { name: "True".into(), args: vec![] },
            ],
            pos: Pos::default(),
        },
    ]
}

/// Integer primitives: name and whether the result is a truth value.
pub const INT_OPS: &[(&str, bool)] =
    &[("leq", true), ("lt", true), ("eq", true), ("add", false), ("sub", false), ("mul", false)];

pub fn is_builtin_fn(name: &str) -> bool {
    INT_OPS.iter().any(|(n, _)| *n == name)
}

pub fn signature(name: &str) -> Option<SharingSig> {
    let (_, pred) = INT_OPS.iter().find(|(n, _)| *n == name)?;
    let param = |n: &str| Param { name: n.into(), ty: Type::int(), mutable: false };
    Some(SharingSig {
        params: vec![param("a"), param("b")],
        closure_params: 0,
        result: "ret".into(),
        result_ty: if *pred { Type::bool() } else { Type::int() },
        pre: CondForm::nosharing(),
        post: CondForm::nosharing(),
    })
}

pub fn eval(name: &str, a: i64, b: i64) -> Option<Result<i64, bool>> {
    Some(match name {
        "leq" => Err(a <= b),
        "lt" => Err(a < b),
        "eq" => Err(a == b),
        "add" => Ok(a.wrapping_add(b)),
        "sub" => Ok(a.wrapping_sub(b)),
        "mul" => Ok(a.wrapping_mul(b)),
        _ => return None,
    })
}
