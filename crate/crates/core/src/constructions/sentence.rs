//! The Π₂ sentence describing the limit structure of a well-founded tree.
//!
//! The infinitary conjunctions range over all of `ω^{<ω}`; here they are cut
//! down to `V`, the tree together with its frontier, i.e. the children
//! `σ⌢m` with `m` at most one past the largest child index in use.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::tree::ExplicitTree;
use crate::formula::Formula;
use crate::label::{incompatible, is_prefix, Label};

fn ell(s: &[u32], v: &str) -> Formula {
    Formula::label(Label::ell_seq(s), v)
}

fn not_ell(s: &[u32], v: &str) -> Formula {
    Formula::not_label(Label::ell_seq(s), v)
}

fn dag(s: &[u32], v: &str) -> Formula {
    Formula::label(Label::dagger_seq(s), v)
}

fn not_dag(s: &[u32], v: &str) -> Formula {
    Formula::not_label(Label::dagger_seq(s), v)
}

fn all_x(body: Vec<Formula>) -> Formula {
    Formula::forall(&["x"], Formula::And(body))
}

/// The nine clause groups, in order, as one conjunction.
pub fn generate_tree_scott_sentence(t: &ExplicitTree) -> Formula {
    let nodes: Vec<&Vec<u32>> = t.nodes().iter().collect();
    let width = t.max_child_index().map_or(1, |m| m + 2);
    let mut frontier: BTreeSet<Vec<u32>> = BTreeSet::new();
    for s in &nodes {
        for m in 0..width {
            let mut c = (*s).clone();
            c.push(m);
            if !t.contains(&c) {
                frontier.insert(c);
            }
        }
    }
    let v: Vec<&Vec<u32>> = t.nodes().iter().chain(frontier.iter()).collect();
    let inner: Vec<Vec<u32>> = t.inner_nodes();

    // a label brings all labels of its prefixes.
    let mut g1 = Vec::new();
    for s in &v {
        for i in 0..s.len() {
            g1.push(Formula::Or(alloc::vec![not_ell(s, "x"), ell(&s[..i], "x")]));
        }
    }
    // a dagger sits on an element with its own label and none below it.
    let mut g2 = Vec::new();
    for s in &v {
        let mut then = alloc::vec![ell(s, "x")];
        then.extend(
            v.iter()
                .filter(|u| u.len() > s.len() && is_prefix(s, u))
                .map(|u| not_ell(u, "x")),
        );
        g2.push(Formula::Or(alloc::vec![not_dag(s, "x"), Formula::And(then)]));
    }
    // no element lies on two incompatible nodes.
    let mut g3 = Vec::new();
    for (i, s) in v.iter().enumerate() {
        for u in &v[i + 1..] {
            if incompatible(s, u) {
                g3.push(Formula::Or(alloc::vec![not_ell(s, "x"), not_ell(u, "x")]));
            }
        }
    }
    // nothing lies off the tree.
    let g4: Vec<Formula> = frontier.iter().map(|s| not_ell(s, "x")).collect();
    // every element is on the root, and on an inner node only with its
    // dagger or below it.
    let mut g5 = alloc::vec![ell(&[], "x")];
    for s in &inner {
        let mut alts = alloc::vec![not_ell(s, "x"), dag(s, "x")];
        alts.extend(t.children(s).iter().map(|c| ell(c, "x")));
        g5.push(Formula::Or(alts));
    }
    // leaves carry no dagger.
    let g6: Vec<Formula> = v
        .iter()
        .filter(|s| !inner.contains(s))
        .map(|s| not_dag(s, "x"))
        .collect();
    // every node is inhabited, and every inner node has its dagger.
    let g7: Vec<Formula> = nodes
        .iter()
        .map(|s| Formula::exists(&["x"], ell(s, "x")))
        .collect();
    let g8: Vec<Formula> = inner
        .iter()
        .map(|s| Formula::exists(&["x"], dag(s, "x")))
        .collect();
    // distinct elements are told apart by incompatible nodes or by a
    // dagger against a child.
    let mut g9 = alloc::vec![Formula::eq("x", "y")];
    for s in &nodes {
        for u in &nodes {
            if incompatible(s, u) {
                g9.push(Formula::And(alloc::vec![ell(s, "x"), ell(u, "y")]));
            }
        }
    }
    for s in &inner {
        for c in t.children(s) {
            g9.push(Formula::And(alloc::vec![dag(s, "x"), ell(&c, "y")]));
            g9.push(Formula::And(alloc::vec![ell(&c, "x"), dag(s, "y")]));
        }
    }

    Formula::And(alloc::vec![
        all_x(g1),
        all_x(g2),
        all_x(g3),
        all_x(g4),
        all_x(g5),
        all_x(g6),
        Formula::And(g7),
        Formula::And(g8),
        Formula::forall(&["x", "y"], Formula::Or(g9)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, evaluate, Kind};
    use crate::structure::{ElementId, ElementRecord, StageStructure, Status};
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn structure(sets: &[Vec<Label>]) -> StageStructure {
        StageStructure {
            stage: 0,
            elements: sets
                .iter()
                .enumerate()
                .map(|(i, ls)| {
                    ElementRecord::new(ElementId(i as u64), 0, Status::Active(None)).with_labels(ls.clone())
                })
                .collect(),
        }
    }

    fn holds(f: &Formula, s: &StageStructure) -> bool {
        evaluate(f, s, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn nine_groups_pi2() {
        let t = ExplicitTree::new(vec![vec![], vec![0]]).unwrap();
        let f = generate_tree_scott_sentence(&t);
        let Formula::And(groups) = &f else {
            panic!("conjunction expected");
        };
        assert_eq!(groups.len(), 9);
        let c = classify(&f);
        assert_eq!((c.kind, c.level), (Kind::Pi, 2));
    }

    #[test]
    fn two_node_models() {
        let t = ExplicitTree::new(vec![vec![], vec![0]]).unwrap();
        let f = generate_tree_scott_sentence(&t);
        let root = Label::ell_seq(&[]);
        let good = structure(&[
            vec![root.clone(), Label::dagger_seq(&[])],
            vec![root.clone(), Label::ell_seq(&[0])],
        ]);
        assert!(holds(&f, &good));
        let extra = structure(&[
            vec![root.clone(), Label::dagger_seq(&[])],
            vec![root.clone(), Label::ell_seq(&[0])],
            vec![root.clone()],
        ]);
        assert!(!holds(&f, &extra));
        let doubled = structure(&[
            vec![root.clone(), Label::dagger_seq(&[])],
            vec![root.clone(), Label::ell_seq(&[0])],
            vec![root, Label::ell_seq(&[0])],
        ]);
        assert!(!holds(&f, &doubled));
    }
}
