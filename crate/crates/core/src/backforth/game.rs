//! The asymmetric back-and-forth relations `≤ₙ`.
//!
//! `(A, ā) ≤₀ (B, b̄)` when every literal true of `ā` in `A` is true of `b̄`
//! in `B`; for unary label structures this means equal label sets
//! componentwise and equal equality patterns. `(A, ā) ≤ₙ₊₁ (B, b̄)` when for
//! every finite extension `d̄` of `b̄` in `B` there is an extension `c̄` of `ā`
//! in `A` with `(B, b̄d̄) ≤ₙ (A, āc̄)`. With this orientation `A ≤ₙ B` holds
//! exactly when every Πₙ sentence true in `A` is true in `B`.
//!
//! Once the given tuples match, a position is described by how many elements
//! of each label set lie outside the tuples on each side. The challenger
//! never gains by holding elements back, so the game is decided by the
//! challenger extending with every free element at once: the responder must
//! cover every label-set count, after which the roles swap with the
//! challenger's side exhausted.

use alloc::collections::{BTreeMap, BTreeSet};

use super::{equality_pattern, BfError, TupleInStructure};
use crate::label::Label;
use crate::structure::StageStructure;

/// Largest tuple arity accepted by [`bf_leq`].
pub const MAX_ARITY: usize = 64;

type Counts<'a> = BTreeMap<&'a BTreeSet<Label>, usize>;

fn free_counts<'a>(t: &TupleInStructure<'a>) -> Counts<'a> {
    let s: &'a StageStructure = t.structure;
    let mut m = Counts::new();
    for e in &s.elements {
        if !t.tuple.contains(&e.id) {
            *m.entry(&e.labels).or_insert(0) += 1;
        }
    }
    m
}

fn covers(resp: &Counts<'_>, chal: &Counts<'_>) -> bool {
    chal.iter()
        .all(|(c, n)| resp.get(c).copied().unwrap_or(0) >= *n)
}

fn minus<'a>(a: &Counts<'a>, b: &Counts<'a>) -> Counts<'a> {
    a.iter()
        .filter_map(|(c, n)| {
            let left = n - b.get(c).copied().unwrap_or(0);
            (left > 0).then_some((*c, left))
        })
        .collect()
}

/// `(a.structure, a.tuple) ≤ₙ (b.structure, b.tuple)`.
pub fn bf_leq(n: u32, a: TupleInStructure<'_>, b: TupleInStructure<'_>) -> Result<bool, BfError> {
    if a.tuple.len() != b.tuple.len() {
        return Err(BfError::ArityMismatch {
            left: a.tuple.len(),
            right: b.tuple.len(),
        });
    }
    if a.tuple.len() > MAX_ARITY {
        return Err(BfError::ArityCap {
            arity: a.tuple.len(),
            cap: MAX_ARITY,
        });
    }
    let ca = a.colors()?;
    let cb = b.colors()?;
    if ca != cb || equality_pattern(a.tuple) != equality_pattern(b.tuple) {
        return Ok(false);
    }
    // Responder plays in `a` first; the challenger extends in `b`.
    let mut resp = free_counts(&a);
    let mut chal = free_counts(&b);
    for _ in 0..n {
        if !covers(&resp, &chal) {
            return Ok(false);
        }
        let next_chal = minus(&resp, &chal);
        resp = Counts::new();
        chal = next_chal;
    }
    Ok(true)
}
