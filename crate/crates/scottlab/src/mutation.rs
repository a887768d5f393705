//! Deterministic mutation suites: near-copies of a structure used as the test
//! population when model-checking a candidate Scott sentence.

use std::collections::{BTreeMap, BTreeSet};

use scottlab_core::backforth::orbits;
use scottlab_core::structure::is_isomorphic;
use scottlab_core::{ElementId, ElementRecord, Label, LabelIndex, StageStructure, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    pub structure: StageStructure,
    pub description: String,
    /// Computed from canonical forms, never assumed from the mutation kind.
    pub expected_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationSuite {
    pub base: StageStructure,
    pub mutants: Vec<Mutant>,
}

fn next_id(s: &StageStructure) -> u64 {
    s.elements.iter().map(|e| e.id.0 + 1).max().unwrap_or(0)
}

/// A label of the same index kind as the structure's own that nothing in it
/// carries. For sequence indices it is a child `σ⌢m` of the element's deepest
/// node with `m` one past every index entry in use.
fn fresh_label(s: &StageStructure, e: &ElementRecord) -> Label {
    let indices: Vec<&LabelIndex> = s
        .elements
        .iter()
        .flat_map(|x| x.labels.iter())
        .filter_map(|l| match l {
            Label::Ell(i) | Label::EllDagger(i) => Some(i),
            _ => None,
        })
        .collect();
    let seqs: Vec<&[u32]> = indices.iter().filter_map(|i| i.as_seq()).collect();
    if !seqs.is_empty() {
        let m = seqs.iter().flat_map(|s| s.iter()).max().map_or(0, |m| m + 1);
        let mut sigma = e
            .labels
            .iter()
            .filter_map(|l| match l {
                Label::Ell(LabelIndex::Seq(s)) => Some(s.clone()),
                _ => None,
            })
            .max_by_key(Vec::len)
            .unwrap_or_default();
        sigma.push(m);
        return Label::Ell(LabelIndex::Seq(sigma));
    }
    let top = indices
        .iter()
        .filter_map(|i| match i {
            LabelIndex::Nat(n) => Some(n + 1),
            LabelIndex::Seq(_) => None,
        })
        .max()
        .unwrap_or(0);
    Label::ell(top)
}

fn remove_element(s: &StageStructure, id: ElementId) -> StageStructure {
    let mut t = s.clone();
    t.elements.retain(|e| e.id != id);
    for e in &mut t.elements {
        if e.status == Status::DuplicateOf(id) {
            e.status = Status::Active(None);
        }
    }
    t
}

/// Builds the suite. Each mutation family contributes at most `budget`
/// mutants (a budget of 0 is treated as 1):
///
/// - the identity copy;
/// - id shuffles (isomorphic);
/// - deletion of one element per orbit;
/// - addition of a duplicate of one element per orbit;
/// - single-label deletions and additions, additions using both a fresh
///   label and labels already in the vocabulary;
/// - a "c-style" element: the labels of an element carrying daggers, with
///   the daggers removed, i.e. a bare path-closed label chain.
pub fn mutation_suite(s: &StageStructure, budget: usize) -> MutationSuite {
    let budget = budget.max(1);
    let mut out: Vec<(StageStructure, String)> = vec![(s.clone(), "identity".into())];
    let mut sorted: Vec<&ElementRecord> = s.elements.iter().collect();
    sorted.sort_by_key(|e| e.id);

    let stride = next_id(s);
    let ids: Vec<ElementId> = sorted.iter().map(|e| e.id).collect();
    for r in 1..=budget {
        let map: BTreeMap<ElementId, ElementId> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, ElementId(ids[(i + r) % ids.len()].0 + stride * r as u64)))
            .collect();
        let mut t = s.clone();
        t.elements.reverse();
        for e in &mut t.elements {
            e.id = map[&e.id];
            if let Status::DuplicateOf(x) = e.status {
                e.status = Status::DuplicateOf(map[&x]);
            }
        }
        out.push((t, format!("id shuffle {r}")));
    }

    let classes = orbits(s, 1).classes;
    for class in classes.iter().take(budget) {
        let id = class[0][0];
        out.push((remove_element(s, id), format!("delete element {}", id.0)));
    }
    for class in classes.iter().take(budget) {
        let src = s.get(class[0][0]).expect("orbit member");
        let mut t = s.clone();
        let status = if src.status.is_active() {
            Status::DuplicateOf(src.id)
        } else {
            Status::Active(None)
        };
        let id = ElementId(next_id(s));
        t.elements.push(ElementRecord {
            id,
            sort: src.sort,
            labels: src.labels.clone(),
            status,
        });
        out.push((t, format!("add element {} duplicating {}", id.0, src.id.0)));
    }

    let mut deletions = Vec::new();
    for e in &sorted {
        for l in e.labels.iter().filter(|l| !l.is_sort()) {
            let mut t = s.clone();
            t.get_mut(e.id).expect("element").labels.remove(l);
            deletions.push((t, format!("remove {l} from element {}", e.id.0)));
        }
    }
    out.extend(deletions.into_iter().take(budget));

    let vocab: BTreeSet<Label> = s.vocabulary().into_iter().filter(|l| !l.is_sort()).collect();
    let mut additions = Vec::new();
    for e in &sorted {
        let fresh = fresh_label(s, e);
        let mut t = s.clone();
        t.get_mut(e.id).expect("element").labels.insert(fresh.clone());
        additions.push((t, format!("add fresh {fresh} to element {}", e.id.0)));
    }
    for e in &sorted {
        for l in vocab.iter().filter(|l| !e.labels.contains(*l)) {
            let mut t = s.clone();
            t.get_mut(e.id).expect("element").labels.insert(l.clone());
            additions.push((t, format!("add {l} to element {}", e.id.0)));
        }
    }
    out.extend(additions.into_iter().take(budget));

    let sort = sorted.first().map_or(0, |e| e.sort);
    let mut chains = Vec::new();
    for e in &sorted {
        let bare: BTreeSet<Label> = e
            .labels
            .iter()
            .filter(|l| !matches!(l, Label::EllDagger(_)))
            .cloned()
            .collect();
        if bare.len() < e.labels.len() {
            chains.push((e.sort, bare, format!("add c-style element from {}", e.id.0)));
        }
    }
    if chains.is_empty() {
        // No dagger anywhere: extend the longest chain by a fresh label.
        let mut labels = sorted
            .iter()
            .max_by_key(|e| e.labels.len())
            .map(|e| e.labels.clone())
            .unwrap_or_else(|| BTreeSet::from([Label::Sort(sort)]));
        let fresh = match sorted.iter().max_by_key(|e| e.labels.len()) {
            Some(e) => fresh_label(s, e),
            None => Label::ell(0),
        };
        labels.insert(fresh);
        chains.push((sort, labels, "add c-style element extending the longest chain".into()));
    }
    for (sort, labels, description) in chains.into_iter().take(budget) {
        let mut t = s.clone();
        t.elements.push(ElementRecord {
            id: ElementId(next_id(s)),
            sort,
            labels,
            status: Status::Active(None),
        });
        out.push((t, description));
    }

    MutationSuite {
        base: s.clone(),
        mutants: out
            .into_iter()
            .map(|(structure, description)| Mutant {
                expected_iso: structure.canonical_form() == s.canonical_form(),
                structure,
                description,
            })
            .collect(),
    }
}

/// Mutants whose tag disagrees with [`is_isomorphic`]; empty for a sound
/// suite.
pub fn mislabeled(suite: &MutationSuite) -> Vec<&Mutant> {
    suite
        .mutants
        .iter()
        .filter(|m| m.expected_iso != is_isomorphic(&suite.base, &m.structure))
        .collect()
}
