//! Export of a label structure as an undirected "bouquet" graph: one flower
//! per element, one loop through the flower's center per label.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::label::{Label, LabelIndex};
use crate::structure::{ElementId, StageStructure};

/// Loop-length scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopCoding {
    /// `u_e` → `2e + 3`, `ℓ_i` → `4i + 4`, `ℓ†_i` → `4i + 6`.
    Graded,
    /// One label sequence `n = 0, 1, 2, ...` with loop length `n + 3`;
    /// `u_e` is `n = 3e`, `ℓ_i` is `n = 3i + 1`, `ℓ†_i` is `n = 3i + 2`.
    Uniform,
}

/// What a natural `ℓ` code stands for after re-indexing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CodedKey {
    Index(LabelIndex),
    Class(u32),
}

/// Bijection from label indices (and class tags) onto the naturals used for
/// loop lengths. Identity on natural indices when no re-indexing was needed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reindexing {
    pub codes: BTreeMap<CodedKey, u64>,
    /// False when every index was already a natural and no class tag occurred.
    pub reindexed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowerGraph {
    /// Sorted neighbor lists.
    pub adjacency: Vec<Vec<usize>>,
    /// Center vertex of each element, in element order.
    pub centers: Vec<(ElementId, usize)>,
}

impl FlowerGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn add_vertex(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    fn add_loop(&mut self, center: usize, length: u64) {
        let mut prev = center;
        for _ in 1..length {
            let v = self.add_vertex();
            self.add_edge(prev, v);
            prev = v;
        }
        self.add_edge(prev, center);
    }
}

fn reindexing(s: &StageStructure) -> Reindexing {
    let mut keys = BTreeMap::new();
    let mut needs = false;
    for e in &s.elements {
        for l in &e.labels {
            match l {
                Label::Ell(i) | Label::EllDagger(i) => {
                    if matches!(i, LabelIndex::Seq(_)) {
                        needs = true;
                    }
                    keys.insert(CodedKey::Index(i.clone()), ());
                }
                Label::Class(c) => {
                    needs = true;
                    keys.insert(CodedKey::Class(*c), ());
                }
                Label::Sort(_) => {}
            }
        }
    }
    let codes = if needs {
        keys.into_keys()
            .enumerate()
            .map(|(n, k)| (k, n as u64))
            .collect()
    } else {
        keys.into_keys()
            .map(|k| {
                let n = match &k {
                    CodedKey::Index(LabelIndex::Nat(n)) => *n,
                    _ => unreachable!("only natural indices without re-indexing"),
                };
                (k, n)
            })
            .collect()
    };
    Reindexing {
        codes,
        reindexed: needs,
    }
}

/// Loop length of a label under a coding, given the index map.
pub fn loop_length(label: &Label, coding: LoopCoding, map: &Reindexing) -> u64 {
    let code = |k: CodedKey| map.codes[&k];
    match (coding, label) {
        (LoopCoding::Graded, Label::Sort(e)) => 2 * u64::from(*e) + 3,
        (LoopCoding::Graded, Label::Ell(i)) => 4 * code(CodedKey::Index(i.clone())) + 4,
        (LoopCoding::Graded, Label::Class(c)) => 4 * code(CodedKey::Class(*c)) + 4,
        (LoopCoding::Graded, Label::EllDagger(i)) => 4 * code(CodedKey::Index(i.clone())) + 6,
        (LoopCoding::Uniform, Label::Sort(e)) => 3 * u64::from(*e) + 3,
        (LoopCoding::Uniform, Label::Ell(i)) => 3 * code(CodedKey::Index(i.clone())) + 4,
        (LoopCoding::Uniform, Label::Class(c)) => 3 * code(CodedKey::Class(*c)) + 4,
        (LoopCoding::Uniform, Label::EllDagger(i)) => 3 * code(CodedKey::Index(i.clone())) + 5,
    }
}

/// Compiles `s` into a flower graph. Sequence indices and class tags are first
/// mapped bijectively onto naturals (ascending key order); the map is returned.
pub fn compile_to_graph(s: &StageStructure, coding: LoopCoding) -> (FlowerGraph, Reindexing) {
    let map = reindexing(s);
    let mut g = FlowerGraph::default();
    for e in &s.elements {
        let center = g.add_vertex();
        g.centers.push((e.id, center));
        for l in &e.labels {
            g.add_loop(center, loop_length(l, coding, &map));
        }
    }
    for adj in &mut g.adjacency {
        adj.sort_unstable();
    }
    (g, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{ElementRecord, Status};
    use alloc::vec;

    fn one(labels: &[Label]) -> StageStructure {
        StageStructure {
            stage: 0,
            elements: vec![ElementRecord::new(ElementId(0), 0, Status::Active(None))
                .with_labels(labels.to_vec())],
        }
    }

    #[test]
    fn sort_loop_is_a_triangle() {
        let (g, _) = compile_to_graph(&one(&[]), LoopCoding::Graded);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn sort_and_ell_share_the_center() {
        let (g, _) = compile_to_graph(&one(&[Label::ell(0)]), LoopCoding::Graded);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.adjacency[0].len(), 4);
    }

    #[test]
    fn empty_structure_empty_graph() {
        let (g, map) = compile_to_graph(&StageStructure::new(0), LoopCoding::Uniform);
        assert_eq!(g.vertex_count(), 0);
        assert!(!map.reindexed);
    }

    #[test]
    fn sequence_labels_are_reindexed() {
        let s = one(&[Label::ell_seq(&[]), Label::dagger_seq(&[]), Label::ell_seq(&[0])]);
        let (g, map) = compile_to_graph(&s, LoopCoding::Graded);
        assert!(map.reindexed);
        assert_eq!(map.codes.len(), 2);
        // sort 3, l(eps) code 0 → 4, ld(eps) → 6, l(0.) code 1 → 8
        assert_eq!(g.vertex_count(), 1 + 2 + 3 + 5 + 7);
    }

    #[test]
    fn uniform_lengths() {
        let map = reindexing(&one(&[Label::ell(2), Label::dagger(2)]));
        assert_eq!(loop_length(&Label::Sort(1), LoopCoding::Uniform, &map), 6);
        assert_eq!(loop_length(&Label::ell(2), LoopCoding::Uniform, &map), 10);
        assert_eq!(loop_length(&Label::dagger(2), LoopCoding::Uniform, &map), 11);
    }
}
