//! The companion structure `B` of a tree run, built along an infinite path.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::arena::Arena;
use super::tree::Tree;
use super::{ConstructionError, ConstructionTrace};
use crate::label::LabelIndex;
use crate::structure::{Designation, ElementId, ElementRecord, StageStructure, Status};

/// The path `prefix ⌢ cycle ⌢ cycle ⌢ ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRule {
    prefix: Vec<u32>,
    cycle: Vec<u32>,
}

impl PathRule {
    /// `None` when `cycle` is empty, since the path must be infinite.
    pub fn new(prefix: Vec<u32>, cycle: Vec<u32>) -> Option<PathRule> {
        (!cycle.is_empty()).then_some(PathRule { prefix, cycle })
    }

    /// `0^ω`.
    pub fn zeros() -> PathRule {
        PathRule {
            prefix: Vec::new(),
            cycle: alloc::vec![0],
        }
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u32] {
        &self.cycle
    }

    pub fn at(&self, i: usize) -> u32 {
        match self.prefix.get(i) {
            Some(x) => *x,
            None => self.cycle[(i - self.prefix.len()) % self.cycle.len()],
        }
    }

    /// The first `len` entries.
    pub fn initial(&self, len: usize) -> Vec<u32> {
        (0..len).map(|i| self.at(i)).collect()
    }
}

/// `B_s` for every record of a tree trace: `b_σ` mirrors `a_σ` for
/// `σ ∈ T_s` other than `π_s`, and `c` mirrors `a_{π_s}`, where `π_s` is the
/// longest initial segment of the path in `T_s`. Ids persist across stages;
/// `c` is id 0. With `tree` given, the path is also checked to stay in `T`.
pub fn build_b_along_path(
    trace: &ConstructionTrace,
    tree: Option<&Tree>,
    path: &PathRule,
) -> Result<Vec<StageStructure>, ConstructionError> {
    let sort = trace
        .records
        .first()
        .and_then(|r| r.a.elements.first())
        .map_or(0, |e| e.sort);
    let mut b = Arena::new(sort);
    let mut c: Option<ElementId> = None;
    let mut ids: BTreeMap<Vec<u32>, ElementId> = BTreeMap::new();
    let mut out = Vec::with_capacity(trace.records.len());
    for r in &trace.records {
        let ts = r.tree.as_ref().ok_or(ConstructionError::NotATreeTrace)?;
        let a_of: BTreeMap<&[u32], &ElementRecord> = r
            .a
            .elements
            .iter()
            .filter_map(|e| match e.status.designation() {
                Some(Designation::A(LabelIndex::Seq(s))) => Some((s.as_slice(), e)),
                _ => None,
            })
            .collect();
        let mut len = 0;
        while ts.binary_search(&path.initial(len + 1)).is_ok() {
            len += 1;
        }
        let pi_s = path.initial(len);
        let next = path.initial(len + 1);
        if let Some(t) = tree {
            if !t.contains(&next) {
                return Err(ConstructionError::PathLeavesTree {
                    stage: r.stage,
                    node: next,
                });
            }
        }
        if ts.iter().any(|s| s.len() == len + 1 && s.starts_with(&pi_s)) {
            return Err(ConstructionError::PathNotLeaf {
                stage: r.stage,
                node: pi_s,
            });
        }
        let missing = |s: &[u32]| ConstructionError::Invariant {
            stage: r.stage,
            detail: alloc::format!("T_s node {} has no element", crate::label::SeqText(s)),
        };
        let top = a_of.get(pi_s.as_slice()).ok_or_else(|| missing(&pi_s))?;
        let cid = *c.get_or_insert_with(|| b.add([], Status::Active(Some(Designation::C))));
        b.get_mut(cid).labels = top.labels.clone();
        for s in ts {
            if *s == pi_s {
                continue;
            }
            let src = a_of.get(s.as_slice()).ok_or_else(|| missing(s))?;
            let id = *ids.entry(s.clone()).or_insert_with(|| {
                b.add([], Status::Active(Some(Designation::B(LabelIndex::Seq(s.clone())))))
            });
            b.get_mut(id).labels = src.labels.clone();
        }
        out.push(b.snapshot(r.stage));
    }
    Ok(out)
}
