#![allow(dead_code)]

pub mod gen;
pub mod reference;

use std::path::PathBuf;

use sharing::{AliasSet, Program, VarComp};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Program {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    sharing::load(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn vc(s: &str) -> VarComp {
    s.parse().unwrap()
}

/// Builds a set from groups, each group sharing pairwise (itself included).
pub fn cliques(groups: &[&[&str]]) -> AliasSet {
    let mut out = AliasSet::new();
    for g in groups {
        for a in *g {
            for b in *g {
                out.insert(vc(a), vc(b));
            }
        }
    }
    out
}

/// Pairs given explicitly, `"x.[..]"` alone meaning a self pair.
pub fn pairs(items: &[(&str, &str)]) -> AliasSet {
    items.iter().map(|(a, b)| (vc(a), vc(b))).collect()
}
