//! Replays the invariants of a construction trace and reports every breach.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::tree::{Children, Tree};
use super::{ConstructionTrace, StageFlag, StageRecord};
use crate::backforth::exists_atomic_check;
use crate::label::{LabelIndex, SeqText};
use crate::structure::{extends, extension_failures, Designation, ElementId, StageStructure, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// Snapshot fails its own well-formedness check, or the record is
    /// inconsistent with itself.
    Malformed,
    StageOrder,
    Extends,
    DuplicateLabels,
    PendingLabels,
    Isomorphism,
    Correspondence,
    DuplicateCount,
    Atomicity,
    Rollback,
    TreeSubtree,
    TreeClosure,
    TreeDesignation,
    QuietChange,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::Malformed => "malformed",
            ViolationKind::StageOrder => "stage-order",
            ViolationKind::Extends => "extends",
            ViolationKind::DuplicateLabels => "duplicate-labels",
            ViolationKind::PendingLabels => "pending-labels",
            ViolationKind::Isomorphism => "isomorphism",
            ViolationKind::Correspondence => "correspondence",
            ViolationKind::DuplicateCount => "duplicate-count",
            ViolationKind::Atomicity => "atomicity",
            ViolationKind::Rollback => "rollback",
            ViolationKind::TreeSubtree => "tree-subtree",
            ViolationKind::TreeClosure => "tree-closure",
            ViolationKind::TreeDesignation => "tree-designation",
            ViolationKind::QuietChange => "quiet-change",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub stage: u64,
    pub kind: ViolationKind,
    pub elements: Vec<ElementId>,
    pub detail: String,
}

struct Report {
    out: Vec<Violation>,
    stage: u64,
}

impl Report {
    fn push(&mut self, kind: ViolationKind, elements: Vec<ElementId>, detail: String) {
        self.out.push(Violation {
            stage: self.stage,
            kind,
            elements,
            detail,
        });
    }
}

/// Checks every stage of `trace`. `b_snaps`, when given, supplies the `B`
/// side for records without one (tree runs); `tree`, when given, enables the
/// `T_s ⊆ T` and all-children checks.
pub fn verify_trace(
    trace: &ConstructionTrace,
    b_snaps: Option<&[StageStructure]>,
    tree: Option<&Tree>,
) -> Vec<Violation> {
    let mut rep = Report {
        out: Vec::new(),
        stage: 0,
    };
    if let Some(bs) = b_snaps {
        if bs.len() != trace.records.len() {
            rep.stage = trace.records.first().map_or(0, |r| r.stage);
            rep.push(
                ViolationKind::Malformed,
                Vec::new(),
                format!("{} B snapshots for {} stages", bs.len(), trace.records.len()),
            );
        }
    }
    let mut prev_b: Option<&StageStructure> = None;
    for (i, r) in trace.records.iter().enumerate() {
        rep.stage = r.stage;
        let b = r.b.as_ref().or_else(|| b_snaps.and_then(|bs| bs.get(i)));
        let prev = i.checked_sub(1).map(|j| &trace.records[j]);

        check_side(&mut rep, &r.a, "A");
        if let Some(b) = b {
            check_side(&mut rep, b, "B");
        }
        if let Some(p) = prev {
            if r.stage <= p.stage {
                rep.push(
                    ViolationKind::StageOrder,
                    Vec::new(),
                    format!("stage {} follows stage {}", r.stage, p.stage),
                );
            } else {
                check_extends(&mut rep, &p.a, &r.a, "A");
                if let (Some(pb), Some(b)) = (prev_b, b) {
                    check_extends(&mut rep, pb, b, "B");
                }
            }
        }
        if r.flag == StageFlag::Attention && r.acting.is_none() {
            rep.push(ViolationKind::Malformed, Vec::new(), "attention stage without an acting requirement".into());
        }
        if r.flag != StageFlag::Attention && r.acting.is_some() {
            rep.push(ViolationKind::Malformed, Vec::new(), "acting requirement outside an attention stage".into());
        }
        if let Some(b) = b {
            if r.a.canonical_form() != b.canonical_form() {
                rep.push(ViolationKind::Isomorphism, Vec::new(), "A and B have different canonical forms".into());
            }
            check_correspondence(&mut rep, &r.a, b);
        }
        let atomic = exists_atomic_check(&r.a);
        if !atomic.atomic {
            rep.push(
                ViolationKind::Atomicity,
                atomic.witnesses,
                "elements not isolated by their labels".into(),
            );
        }
        if r.flag == StageFlag::Attention {
            check_rollback(&mut rep, &trace.records[..i], r);
        }
        if let Some(ts) = &r.tree {
            check_tree(&mut rep, r, prev, tree, ts);
        }
        prev_b = b;
    }
    rep.out
}

fn check_side(rep: &mut Report, s: &StageStructure, side: &str) {
    if let Err(e) = s.validate() {
        rep.push(ViolationKind::Malformed, Vec::new(), format!("{side}: {e}"));
        return;
    }
    let c_labels = s.designated(&Designation::C).map(|c| &c.labels);
    for e in &s.elements {
        match &e.status {
            Status::DuplicateOf(t) => {
                let target = s.get(*t).expect("validated");
                if target.labels != e.labels {
                    rep.push(
                        ViolationKind::DuplicateLabels,
                        alloc::vec![e.id, *t],
                        format!("{side}: duplicate {} disagrees with {}", e.id, t),
                    );
                }
            }
            Status::PendingDuplicate => {
                if c_labels != Some(&e.labels) {
                    rep.push(
                        ViolationKind::PendingLabels,
                        alloc::vec![e.id],
                        format!("{side}: pending duplicate {} disagrees with c", e.id),
                    );
                }
            }
            Status::Active(_) => {}
        }
    }
}

fn check_extends(rep: &mut Report, prev: &StageStructure, next: &StageStructure, side: &str) {
    if !extends(prev, next) {
        rep.push(
            ViolationKind::Extends,
            extension_failures(prev, next),
            format!("{side} does not extend the previous stage"),
        );
    }
}

fn duplicate_count(s: &StageStructure, id: ElementId, with_pending: bool) -> usize {
    s.elements
        .iter()
        .filter(|e| e.status == Status::DuplicateOf(id) || (with_pending && e.status == Status::PendingDuplicate))
        .count()
}

/// `a(x) ↦ b(x)`, and the one active `a` without a `b` partner `↦ c`.
fn check_correspondence(rep: &mut Report, a: &StageStructure, b: &StageStructure) {
    let c = b.designated(&Designation::C);
    let mut to_c = Vec::new();
    for e in &a.elements {
        let Some(Designation::A(x)) = e.status.designation() else {
            continue;
        };
        let (partner, is_c) = match b.designated(&Designation::B(x.clone())) {
            Some(p) => (p, false),
            None => {
                to_c.push(e.id);
                match c {
                    Some(c) => (c, true),
                    None => continue,
                }
            }
        };
        if partner.labels != e.labels {
            rep.push(
                ViolationKind::Correspondence,
                alloc::vec![e.id, partner.id],
                format!("{} and its partner carry different labels", e.status.designation().expect("designated")),
            );
        }
        let da = duplicate_count(a, e.id, false);
        let db = duplicate_count(b, partner.id, is_c);
        if da != db {
            rep.push(
                ViolationKind::DuplicateCount,
                alloc::vec![e.id, partner.id],
                format!("{da} duplicates in A against {db} in B"),
            );
        }
    }
    if to_c.len() != 1 || c.is_none() {
        rep.push(
            ViolationKind::Correspondence,
            to_c.clone(),
            format!("{} active elements of A have no b partner; exactly one must map to c", to_c.len()),
        );
    }
    for e in &b.elements {
        if let Some(Designation::B(x)) = e.status.designation() {
            if a.designated(&Designation::A(x.clone())).is_none() {
                rep.push(
                    ViolationKind::Correspondence,
                    alloc::vec![e.id],
                    format!("{} has no a partner", Designation::B(x.clone())),
                );
            }
        }
    }
}

fn active_a(s: &StageStructure, i: u64) -> Option<ElementId> {
    s.designated(&Designation::A(LabelIndex::Nat(i))).map(|e| e.id)
}

fn check_rollback(rep: &mut Report, earlier: &[StageRecord], r: &StageRecord) {
    let Some(key) = &r.acting else {
        return;
    };
    let Some(origin) = earlier.iter().rev().find(|p| p.init.as_ref() == Some(key)) else {
        rep.push(
            ViolationKind::Rollback,
            key.b.clone(),
            format!("requirement ({}, {}) acted without being initialized", key.e, key.i),
        );
        return;
    };
    if r.n != origin.n {
        rep.push(
            ViolationKind::Rollback,
            Vec::new(),
            format!("n = {} after attention, expected n[t] = {} from stage {}", r.n, origin.n, origin.stage),
        );
    }
    for i in 1..=origin.n.min(r.n) {
        let before = active_a(&origin.a, i);
        let after = active_a(&r.a, i);
        if before != after {
            rep.push(
                ViolationKind::Rollback,
                before.into_iter().chain(after).collect(),
                format!("a({i}) changed since stage {}", origin.stage),
            );
        }
    }
}

fn check_tree(rep: &mut Report, r: &StageRecord, prev: Option<&StageRecord>, tree: Option<&Tree>, ts: &[Vec<u32>]) {
    let set: BTreeSet<&[u32]> = ts.iter().map(|s| s.as_slice()).collect();
    if !set.contains(&[][..]) {
        rep.push(ViolationKind::TreeSubtree, Vec::new(), "T_s lacks the root".into());
    }
    for s in &set {
        if let Some((_, parent)) = s.split_last() {
            if !set.contains(parent) {
                rep.push(
                    ViolationKind::TreeSubtree,
                    Vec::new(),
                    format!("T_s is not prefix-closed at {}", SeqText(s)),
                );
            }
        }
    }
    if let Some(prev_ts) = prev.and_then(|p| p.tree.as_ref()) {
        for s in prev_ts {
            if !set.contains(s.as_slice()) {
                rep.push(ViolationKind::TreeSubtree, Vec::new(), format!("{} left T_s", SeqText(s)));
            }
        }
    }
    if let Some(t) = tree {
        for s in &set {
            if !t.contains(s) {
                rep.push(ViolationKind::TreeSubtree, Vec::new(), format!("{} is not in T", SeqText(s)));
                continue;
            }
            // Infinite child sets are only ever present up to a window.
            let Children::Finite(children) = t.children(s) else {
                continue;
            };
            let present = children.iter().filter(|c| set.contains(c.as_slice())).count();
            if present > 0 && present < children.len() {
                rep.push(
                    ViolationKind::TreeClosure,
                    Vec::new(),
                    format!("{} has {present} of {} children in T_s", SeqText(s), children.len()),
                );
            }
        }
    }
    let mut designated: BTreeMap<&[u32], ElementId> = BTreeMap::new();
    for e in &r.a.elements {
        if let Some(Designation::A(LabelIndex::Seq(s))) = e.status.designation() {
            designated.insert(s.as_slice(), e.id);
        }
    }
    if designated.keys().copied().collect::<BTreeSet<_>>() != set {
        rep.push(
            ViolationKind::TreeDesignation,
            designated.values().copied().collect(),
            "designated elements of A do not match T_s".into(),
        );
    }
    if let Some(p) = prev {
        if r.flag == StageFlag::Quiet && (p.a.sorted_by_id().elements != r.a.sorted_by_id().elements || p.tree != r.tree) {
            rep.push(ViolationKind::QuietChange, Vec::new(), "A changed at a non-expansionary stage".into());
        }
    }
}
