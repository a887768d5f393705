//! Automorphism orbits of tuples.
//!
//! An automorphism of a bouquet structure can only permute elements with
//! equal label sets, and any such permutation is an automorphism. Two tuples
//! therefore share an orbit exactly when their components have the same label
//! sets and they have the same equality pattern.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::equality_pattern;
use crate::label::Label;
use crate::structure::{ElementId, StageStructure};

/// Orbit invariant of a tuple: component label sets and equality pattern.
pub type OrbitKey = (Vec<BTreeSet<Label>>, Vec<usize>);

pub fn orbit_key(s: &StageStructure, tuple: &[ElementId]) -> Option<OrbitKey> {
    let colors = tuple
        .iter()
        .map(|id| s.get(*id).map(|e| e.labels.clone()))
        .collect::<Option<Vec<_>>>()?;
    Some((colors, equality_pattern(tuple)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub arity: usize,
    /// Orbit classes of all tuples of arity `1..=arity`, each listed in
    /// lexicographic id order; classes are ordered by arity, then by first
    /// tuple.
    pub classes: Vec<Vec<Vec<ElementId>>>,
}

impl OrbitPartition {
    /// Index of the class containing `tuple`.
    pub fn class_of(&self, tuple: &[ElementId]) -> Option<usize> {
        self.classes.iter().position(|c| c.iter().any(|t| t == tuple))
    }

    /// Classes whose tuples have exactly `m` components.
    pub fn of_arity(&self, m: usize) -> impl Iterator<Item = &Vec<Vec<ElementId>>> {
        self.classes.iter().filter(move |c| c[0].len() == m)
    }
}

/// Every tuple of arity `m` over `ids`, in lexicographic order.
pub(crate) fn all_tuples(ids: &[ElementId], m: usize) -> Vec<Vec<ElementId>> {
    let mut out = Vec::new();
    if ids.is_empty() && m > 0 {
        return out;
    }
    let mut idx = vec![0usize; m];
    loop {
        out.push(idx.iter().map(|&i| ids[i]).collect());
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < ids.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn orbits(s: &StageStructure, arity: usize) -> OrbitPartition {
    let mut ids: Vec<ElementId> = s.ids().collect();
    ids.sort();
    let mut classes = Vec::new();
    for m in 1..=arity {
        let mut groups: BTreeMap<OrbitKey, Vec<Vec<ElementId>>> = BTreeMap::new();
        for t in all_tuples(&ids, m) {
            let key = orbit_key(s, &t).expect("ids come from the structure");
            groups.entry(key).or_default().push(t);
        }
        let mut cs: Vec<_> = groups.into_values().collect();
        cs.sort_by(|a, b| a[0].cmp(&b[0]));
        classes.extend(cs);
    }
    OrbitPartition { arity, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{ElementRecord, Status};

    fn s(sets: &[&[Label]]) -> StageStructure {
        StageStructure {
            stage: 0,
            elements: sets
                .iter()
                .enumerate()
                .map(|(i, ls)| {
                    ElementRecord::new(ElementId(i as u64), 0, Status::Active(None))
                        .with_labels(ls.to_vec())
                })
                .collect(),
        }
    }

    #[test]
    fn duplicates_share_an_orbit() {
        let p = orbits(&s(&[&[Label::ell(0)], &[Label::ell(0)]]), 1);
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.classes[0].len(), 2);
    }

    #[test]
    fn distinct_labels_split() {
        let p = orbits(&s(&[&[Label::ell(0)], &[Label::ell(1)]]), 1);
        assert_eq!(p.classes.len(), 2);
        assert!(p.classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn pairs_respect_equality() {
        let p = orbits(&s(&[&[], &[]]), 2);
        // arity 1: one class; arity 2: diagonal and off-diagonal.
        assert_eq!(p.classes.len(), 3);
        assert_eq!(p.of_arity(2).count(), 2);
        assert_eq!(p.class_of(&[ElementId(1), ElementId(0)]), p.class_of(&[ElementId(0), ElementId(1)]));
    }

    #[test]
    fn tuple_enumeration() {
        let ids = [ElementId(0), ElementId(1), ElementId(2)];
        assert_eq!(all_tuples(&ids, 2).len(), 9);
        assert_eq!(all_tuples(&ids, 0).len(), 1);
        assert!(all_tuples(&[], 1).is_empty());
    }
}
