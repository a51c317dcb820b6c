//! Expected OldFold sets for the functions of `bst.pcore`, per point.

use sharing::AliasSet;

use super::cliques;

const ABS: &str = "abstract_Ints";

fn absl(c: &str) -> String {
    format!("{ABS}.{c}")
}

pub fn list_bst() -> Vec<(u32, AliasSet)> {
    let (c1, c0) = (absl("[Cons.1]"), absl("[]"));
    let a0 = cliques(&[&["xs.[Cons.1]", &c1], &["xs.[]", &c0]]);
    let a2 = a0.union(&cliques(&[&["tp.[Ref.1]"]]));
    let a3 = a2.union(&cliques(&[&["tp.[Ref.1,Node.2]"]]));
    let a4 = a3.union(&cliques(&[&["ret.[]", "tp.[Ref.1]"], &["ret.[Node.2]", "tp.[Ref.1,Node.2]"]]));
    vec![(0, a0.clone()), (1, a0), (2, a2), (3, a3), (4, a4)]
}

pub fn list_bst_du() -> Vec<(u32, AliasSet)> {
    let (c1, c0) = (absl("[Cons.1]"), absl("[]"));
    let a0 = cliques(&[&["tp.[Ref.1]"], &["tp.[Ref.1,Node.2]"], &["xs.[Cons.1]", &c1], &["xs.[]", &c0]]);
    let a1 =
        a0.union(&cliques(&[&["xs.[Cons.1]", &c1, "v1.[Ref.1]", "v2.[Ref.1,Cons.1]"], &["v2.[Ref.1]", "xs.[]", &c0]]));
    let a3 = a1.union(&cliques(&[
        &["v2.[Ref.1]", "xs.[]", "xs1.[]", &c0],
        &["v1.[Ref.1]", "xs.[Cons.1]", "xs1.[Cons.1]", &c1, "v2.[Ref.1,Cons.1]"],
    ]));
    let a7 = cliques(&[&["tp.[Ref.1]"], &["tp.[Ref.1,Node.2]"], &[&c1], &[&c0]]);
    let a9 = a3.union(&a7);
    vec![
        (0, a0),
        (1, a1.clone()),
        (2, a1),
        (3, a3.clone()),
        (4, a3.clone()),
        (5, a3.clone()),
        (6, a3),
        (7, a7.clone()),
        (8, a7),
        (9, a9),
    ]
}

pub fn bst_insert_du() -> Vec<(u32, AliasSet)> {
    let a0 = cliques(&[&["tp.[Ref.1]"], &["tp.[Ref.1,Node.2]"]]);
    let a1 = a0.union(&cliques(&[&["v1.[]", "tp.[Ref.1]"], &["tp.[Ref.1,Node.2]", "v1.[Node.2]"]]));
    let a5 = a0.union(&cliques(&[&["v4.[]"], &["v4.[Node.2]"]]));
    let a6 = a5.union(&cliques(&[&["v4.[]", "tp.[Ref.1]"], &["v4.[Node.2]", "tp.[Ref.1,Node.2]"]]));
    let a8 = a1.union(&cliques(&[
        &["v1.[]", "tp.[Ref.1]", "lp.[Ref.1]", "rp.[Ref.1]"],
        &["tp.[Ref.1,Node.2]", "lp.[Ref.1,Node.2]", "rp.[Ref.1,Node.2]", "v5.[Ref.1]", "v1.[Node.2]"],
    ]));
    let a18 = a8.union(&a6);
    let mut expected = vec![(0, a0.clone()), (1, a1)];
    expected.extend((2..=4).map(|p| (p, a0.clone())));
    expected.push((5, a5));
    expected.push((6, a6.clone()));
    expected.push((7, a6));
    expected.extend((8..=17).map(|p| (p, a8.clone())));
    expected.push((18, a18));
    expected
}

/// Function name and expected sets, for every reference function.
pub fn all() -> Vec<(&'static str, Vec<(u32, AliasSet)>)> {
    vec![("list_bst", list_bst()), ("list_bst_du", list_bst_du()), ("bst_insert_du", bst_insert_du())]
}
