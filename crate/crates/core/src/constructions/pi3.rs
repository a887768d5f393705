//! The Π₃ construction: a finite-injury priority argument building `A` and a
//! computable copy `B` with `B ≅ A` exactly when the Π₃ sentence fails.
//!
//! Requirements `R_{i,b̄}` are listed by code `i + Σ b̄`, then `i`, then `b̄`
//! lexicographically; one is initialized per quiet stage, so the initialized
//! requirements always form a prefix of the listing and priority equals
//! initialization order. An injured requirement is simply uninitialized.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::arena::Arena;
use super::theta::{negated_disjunct, NegatedDisjunct};
use super::{ConstructionError, ConstructionTrace, RequirementKey, StageFlag, StageRecord};
use crate::formula::{FormulaFamily, Model, Vocabulary};
use crate::label::{Label, LabelIndex};
use crate::structure::{Designation, ElementId, Status};

/// `∀x̄ ⩖ⱼ ∃ȳⱼ φⱼ(x̄, ȳⱼ)`; the disjuncts are the members `∃ȳⱼ φⱼ`.
#[derive(Clone, Debug)]
pub struct Pi3Clause {
    pub xs: Vec<String>,
    pub disjuncts: FormulaFamily,
}

/// `⋀ᵢ` of the clauses.
#[derive(Clone, Debug, Default)]
pub struct Pi3Theta {
    pub clauses: Vec<Pi3Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi3Config {
    pub sort: u32,
    pub stages: u64,
}

impl Pi3Config {
    pub fn new(stages: u64) -> Self {
        Pi3Config { sort: 0, stages }
    }
}

/// The listing of requirements `(i, b̄)`, generated code by code.
struct Listing {
    arities: Vec<usize>,
    entries: Vec<(usize, Vec<u64>)>,
    next_code: u64,
}

impl Listing {
    fn new(arities: Vec<usize>) -> Self {
        Listing {
            arities,
            entries: Vec::new(),
            next_code: 0,
        }
    }

    fn finite(&self) -> bool {
        self.arities.iter().all(|&m| m == 0)
    }

    fn get(&mut self, pos: usize) -> Option<&(usize, Vec<u64>)> {
        while self.entries.len() <= pos {
            if self.finite() && self.next_code >= self.arities.len() as u64 {
                return None;
            }
            let c = self.next_code;
            self.next_code += 1;
            for (i, &m) in self.arities.iter().enumerate() {
                if i as u64 > c {
                    break;
                }
                let rest = c - i as u64;
                if m == 0 {
                    if rest == 0 {
                        self.entries.push((i, Vec::new()));
                    }
                    continue;
                }
                let mut parts = Vec::with_capacity(m);
                compositions(rest, m, &mut parts, &mut |b| self.entries.push((i, b.to_vec())));
            }
        }
        self.entries.get(pos)
    }
}

/// Tuples of `m` naturals summing to `total`, in lexicographic order.
fn compositions(total: u64, m: usize, parts: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if parts.len() + 1 == m {
        parts.push(total);
        emit(parts);
        parts.pop();
        return;
    }
    for x in 0..=total {
        parts.push(x);
        compositions(total - x, m, parts, emit);
        parts.pop();
    }
}

struct Requirement {
    clause: usize,
    b: Vec<ElementId>,
    t: u64,
    k: u64,
}

struct Clauses<'a> {
    theta: &'a Pi3Theta,
    vocab: Vocabulary,
    /// `compiled[i][j]`: `¬φᵢⱼ`, or `None` past the end of a finite family.
    compiled: Vec<Vec<Option<NegatedDisjunct>>>,
}

impl<'a> Clauses<'a> {
    fn new(theta: &'a Pi3Theta) -> Self {
        Clauses {
            theta,
            vocab: Vocabulary::new(),
            compiled: theta.clauses.iter().map(|_| Vec::new()).collect(),
        }
    }

    fn ensure(&mut self, i: usize, k: usize) -> Result<(), ConstructionError> {
        let clause = &self.theta.clauses[i];
        while self.compiled[i].len() <= k {
            let j = self.compiled[i].len();
            let d = match clause.disjuncts.member(j)? {
                Some(f) => Some(negated_disjunct(i, j, &clause.xs, &f, &mut self.vocab)?),
                None => None,
            };
            self.compiled[i].push(d);
        }
        Ok(())
    }
}

fn nat(i: u64) -> LabelIndex {
    LabelIndex::Nat(i)
}

fn designated(d: Designation) -> Status {
    Status::Active(Some(d))
}

struct State {
    a: Arena,
    b: Arena,
    /// `a_ids[i - 1]` is `a_i`, for `i ≤ n`.
    a_ids: Vec<ElementId>,
    /// `b_ids[i - 1]` is `b_i`, for `i < n`.
    b_ids: Vec<ElementId>,
    c: ElementId,
    n: u64,
    fresh: u64,
}

impl State {
    fn fresh(&mut self) -> Label {
        let l = Label::ell(self.fresh);
        self.fresh += 1;
        l
    }

    fn quiet(&mut self) {
        let an = self.a_ids[self.n as usize - 1];
        let copied = self.a.labels(an).clone();
        let next = self.a.add(copied, designated(Designation::A(nat(self.n + 1))));
        let mark = self.fresh();
        let dups: Vec<ElementId> = self.a.duplicates_of(an).collect();
        for x in core::iter::once(an).chain(dups) {
            self.a.add_label(x, mark.clone());
        }
        let mark = self.fresh();
        self.a.add_label(next, mark);
        self.a_ids.push(next);

        let labels_n = self.a.labels(an).clone();
        let bn = self.b.add([], designated(Designation::B(nat(self.n))));
        self.b.extend_labels(bn, &labels_n);
        let labels_next = self.a.labels(next).clone();
        self.b.extend_labels(self.c, &labels_next);
        let pending: Vec<ElementId> = self.pending().collect();
        for p in pending {
            let rec = self.b.get_mut(p);
            rec.status = Status::DuplicateOf(bn);
            rec.labels.extend(labels_n.iter().cloned());
        }
        self.b_ids.push(bn);
        self.n += 1;
    }

    fn pending(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.b
            .structure()
            .elements
            .iter()
            .filter(|e| e.status == Status::PendingDuplicate)
            .map(|e| e.id)
    }

    /// Rolls `n` back to `target`, merging `a_target .. a_n` and marking
    /// `b_target .. b_{n-1}` as pending duplicates of `c`.
    fn attention(&mut self, target: u64) {
        let lo = target as usize - 1;
        let merged_a: Vec<ElementId> = self.a_ids[lo..].to_vec();
        let mut union: BTreeSet<Label> = BTreeSet::new();
        for &x in &merged_a {
            union.extend(self.a.labels(x).iter().cloned());
        }
        let head = merged_a[0];
        for (pos, &x) in merged_a.iter().enumerate() {
            let dups: Vec<ElementId> = self.a.duplicates_of(x).collect();
            for y in core::iter::once(x).chain(dups) {
                let rec = self.a.get_mut(y);
                rec.labels.extend(union.iter().cloned());
                if pos > 0 {
                    rec.status = Status::DuplicateOf(head);
                }
            }
        }

        let merged_b: Vec<ElementId> = self.b_ids[lo..].to_vec();
        let old_pending: Vec<ElementId> = self.pending().collect();
        let mut touched: Vec<ElementId> = old_pending;
        for &x in &merged_b {
            touched.push(x);
            touched.extend(self.b.duplicates_of(x));
        }
        for &y in &touched {
            let rec = self.b.get_mut(y);
            rec.labels.extend(union.iter().cloned());
            rec.status = Status::PendingDuplicate;
        }
        self.b.extend_labels(self.c, &union);

        self.a_ids.truncate(lo + 1);
        self.b_ids.truncate(lo);
        self.n = target;
    }
}

pub fn run_pi3(theta: &Pi3Theta, cfg: &Pi3Config) -> Result<ConstructionTrace, ConstructionError> {
    if cfg.stages == 0 {
        return Err(ConstructionError::ZeroStages);
    }
    let mut clauses = Clauses::new(theta);
    let mut listing = Listing::new(theta.clauses.iter().map(|c| c.xs.len()).collect());
    let mut st = State {
        a: Arena::new(cfg.sort),
        b: Arena::new(cfg.sort),
        a_ids: Vec::new(),
        b_ids: Vec::new(),
        c: ElementId(0),
        n: 1,
        fresh: 0,
    };
    let g = st.fresh();
    st.a_ids.push(st.a.add([g.clone()], designated(Designation::A(nat(1)))));
    st.c = st.b.add([g], designated(Designation::C));

    let mut reqs: Vec<Requirement> = Vec::new();
    let mut n_at: Vec<u64> = vec![1];
    let mut b_len_at: Vec<usize> = vec![1];
    let mut quiet_count: u64 = 0;
    let key = |r: &Requirement| RequirementKey {
        e: cfg.sort,
        i: r.clause,
        b: r.b.clone(),
    };

    let mut trace = ConstructionTrace::default();
    trace.records.push(StageRecord {
        stage: 0,
        flag: StageFlag::Initial,
        acting: None,
        init: None,
        a: st.a.snapshot(0),
        b: Some(st.b.snapshot(0)),
        n: st.n,
        k: 0,
        tree: None,
    });

    for stage in 1..=cfg.stages {
        let s = stage - 1;
        for r in &reqs {
            clauses.ensure(r.clause, r.k as usize)?;
        }
        let model = Model::new(st.b.structure(), &clauses.vocab);
        let mut acting = None;
        for (p, r) in reqs.iter().enumerate() {
            let snap = (r.t + r.k).min(s) as usize;
            let domain: Vec<usize> = (0..b_len_at[snap]).collect();
            let b: Vec<usize> = r
                .b
                .iter()
                .map(|id| model.position(*id).expect("requirement tuple lies in B"))
                .collect();
            let needs = clauses.compiled[r.clause][..=r.k as usize]
                .iter()
                .flatten()
                .all(|d| d.refuted_everywhere(&model, &b, &domain));
            if needs {
                acting = Some(p);
                break;
            }
        }

        let (flag, acted, init) = match acting {
            Some(p) => {
                let target = n_at[reqs[p].t as usize];
                if target == 0 || target > st.n {
                    return Err(ConstructionError::Invariant {
                        stage,
                        detail: alloc::format!("rollback target {target} with n = {}", st.n),
                    });
                }
                st.attention(target);
                reqs.truncate(p + 1);
                let r = &mut reqs[p];
                r.k += 1;
                (StageFlag::Attention, Some(key(r)), None)
            }
            None => {
                st.quiet();
                quiet_count += 1;
                let mut init = None;
                if let Some((i, b)) = listing.get(reqs.len()) {
                    if b.iter().all(|&x| (x as usize) < st.b.len()) {
                        let r = Requirement {
                            clause: *i,
                            b: b.iter().map(|&x| ElementId(x)).collect(),
                            t: stage,
                            k: 0,
                        };
                        init = Some(key(&r));
                        reqs.push(r);
                    }
                }
                (StageFlag::Quiet, None, init)
            }
        };
        n_at.push(st.n);
        b_len_at.push(st.b.len());
        trace.records.push(StageRecord {
            stage,
            flag,
            acting: acted,
            init,
            a: st.a.snapshot(stage),
            b: Some(st.b.snapshot(stage)),
            n: st.n,
            k: quiet_count,
            tree: None,
        });
    }
    Ok(trace)
}
