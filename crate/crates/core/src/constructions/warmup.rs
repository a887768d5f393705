//! The warm-up construction: one structure `A` with a computable copy `B`
//! that is isomorphic to `A` exactly when the Π₂ sentence holds of `A`.
//!
//! Indexing: `a_i` carries `ℓ_j` for `j < i`, plus `ℓ†_i` once `a_{i+1}`
//! exists; `c` carries `ℓ_j` for `j < n`.

use alloc::vec::Vec;

use super::arena::Arena;
use super::theta::Pi2Cache;
use super::{ConstructionError, ConstructionTrace, StageFlag, StageRecord};
use crate::formula::{FormulaFamily, Model};
use crate::label::{Label, LabelIndex};
use crate::structure::{Designation, ElementId, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarmupConfig {
    pub sort: u32,
    /// Stages run after stage 0.
    pub stages: u64,
    /// Stop at the first non-expansionary stage, after which nothing changes.
    pub halt_at_fixed_point: bool,
}

impl WarmupConfig {
    pub fn new(stages: u64) -> Self {
        WarmupConfig {
            sort: 0,
            stages,
            halt_at_fixed_point: true,
        }
    }
}

fn designated(d: Designation) -> Status {
    Status::Active(Some(d))
}

fn nat(i: u64) -> LabelIndex {
    LabelIndex::Nat(i)
}

pub fn run_warmup(theta: &FormulaFamily, cfg: &WarmupConfig) -> Result<ConstructionTrace, ConstructionError> {
    if cfg.stages == 0 {
        return Err(ConstructionError::ZeroStages);
    }
    let mut cache = Pi2Cache::new(theta);
    let mut a = Arena::new(cfg.sort);
    let mut b = Arena::new(cfg.sort);
    // a_ids[i - 1] is a_i.
    let mut a_ids: Vec<ElementId> = Vec::new();
    a_ids.push(a.add([Label::ell(0)], designated(Designation::A(nat(1)))));
    let c = b.add([Label::ell(0)], designated(Designation::C));
    let mut n: u64 = 1;
    let mut k: u64 = 0;

    let mut trace = ConstructionTrace::default();
    let record = |stage: u64, flag: StageFlag, a: &Arena, b: &Arena, n: u64, k: u64| StageRecord {
        stage,
        flag,
        acting: None,
        init: None,
        a: a.snapshot(stage),
        b: Some(b.snapshot(stage)),
        n,
        k,
        tree: None,
    };
    trace.records.push(record(0, StageFlag::Initial, &a, &b, n, k));

    for stage in 1..=cfg.stages {
        cache.ensure(k as usize)?;
        let model = Model::new(a.structure(), &cache.vocab);
        let domain: Vec<usize> = (0..model.len()).collect();
        if !cache.holds_all(k as usize, &model, &domain, None) {
            trace.records.push(record(stage, StageFlag::Quiet, &a, &b, n, k));
            if cfg.halt_at_fixed_point {
                break;
            }
            continue;
        }
        let an = a_ids[n as usize - 1];
        a.add_label(an, Label::dagger(n));
        let next = a.labels(an).iter().filter(|l| !matches!(l, Label::EllDagger(_))).cloned();
        let next: Vec<Label> = next.chain([Label::ell(n)]).collect();
        a_ids.push(a.add(next, designated(Designation::A(nat(n + 1)))));
        let mirrored = a.labels(an).clone();
        let bn = b.add([], designated(Designation::B(nat(n))));
        b.extend_labels(bn, &mirrored);
        b.add_label(c, Label::ell(n));
        n += 1;
        k += 1;
        trace.records.push(record(stage, StageFlag::Expansionary, &a, &b, n, k));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Connective};
    use crate::structure::is_isomorphic;
    use alloc::vec;

    fn family(src: &[&str]) -> FormulaFamily {
        FormulaFamily::explicit(Connective::Conjunctive, src.iter().map(|s| parse(s).unwrap()).collect())
    }

    #[test]
    fn stage_zero_and_growth() {
        let t = run_warmup(&family(&["A x. true"]), &WarmupConfig::new(5)).unwrap();
        let r0 = &t.records[0];
        assert_eq!(r0.a.len(), 1);
        assert!(r0.a.elements[0].has(&Label::ell(0)));
        assert_eq!(t.records.len(), 6);
        assert!(t.records[1..].iter().all(|r| r.flag == StageFlag::Expansionary));
        assert_eq!(t.last().unwrap().n, 6);
        for r in &t.records {
            assert!(is_isomorphic(&r.a, r.b.as_ref().unwrap()));
        }
        let last = t.last().unwrap();
        let a2 = last.a.designated(&Designation::A(nat(2))).unwrap();
        let want: Vec<Label> = vec![Label::Sort(0), Label::ell(0), Label::ell(1), Label::dagger(2)];
        assert_eq!(a2.labels.iter().cloned().collect::<Vec<_>>(), want);
    }

    #[test]
    fn unsatisfiable_clause_freezes() {
        let t = run_warmup(&family(&["A x. true", "A x. false"]), &WarmupConfig::new(10)).unwrap();
        // Member 1 is first checked at stage 2, once k = 1.
        assert_eq!(t.records.len(), 3);
        assert_eq!(t.records[1].flag, StageFlag::Expansionary);
        assert_eq!(t.records[2].flag, StageFlag::Quiet);
        assert!(is_isomorphic(&t.records[2].a, t.records[2].b.as_ref().unwrap()));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            run_warmup(&family(&["A x. true"]), &WarmupConfig::new(0)),
            Err(ConstructionError::ZeroStages)
        );
        assert!(matches!(
            run_warmup(&family(&["A x. E y. A z. x = z"]), &WarmupConfig::new(3)),
            Err(ConstructionError::NotPi2 { index: 0, .. })
        ));
    }
}
