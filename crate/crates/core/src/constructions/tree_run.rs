//! The tree construction: `A` built from a tree `T` so that a Π₂ sentence
//! holding pushes `A` towards the limit over all of `T`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::arena::Arena;
use super::theta::Pi2Cache;
use super::tree::{in_window, Children, Tree};
use super::{ConstructionError, ConstructionTrace, StageFlag, StageRecord};
use crate::formula::{FormulaFamily, Model};
use crate::label::{Label, LabelIndex};
use crate::structure::{Designation, ElementId, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeConfig {
    pub sort: u32,
    pub stages: u64,
    /// Stop once no later stage can change anything.
    pub halt_at_fixed_point: bool,
}

impl TreeConfig {
    pub fn new(stages: u64) -> Self {
        TreeConfig {
            sort: 0,
            stages,
            halt_at_fixed_point: true,
        }
    }
}

/// Labels `ℓ_ρ` for every `ρ ⪯ τ`.
fn path_labels(tau: &[u32]) -> Vec<Label> {
    (0..=tau.len()).map(|i| Label::ell_seq(&tau[..i])).collect()
}

struct State<'t> {
    tree: &'t Tree,
    a: Arena,
    nodes: BTreeMap<Vec<u32>, ElementId>,
    daggered: BTreeSet<Vec<u32>>,
}

impl State<'_> {
    fn add(&mut self, tau: Vec<u32>) {
        if self.nodes.contains_key(&tau) {
            return;
        }
        let d = Designation::A(LabelIndex::Seq(tau.clone()));
        let id = self.a.add(path_labels(&tau), Status::Active(Some(d)));
        self.nodes.insert(tau, id);
    }

    fn leaf(&self, s: &[u32]) -> bool {
        let mut lo = s.to_vec();
        lo.push(0);
        self.nodes
            .range(lo..)
            .next()
            .is_none_or(|(t, _)| !crate::label::is_prefix(s, t))
    }

    /// An expansionary stage: daggers on window nodes with children in the
    /// window, then children for the leaves among them, computed against `T_s`.
    fn expand(&mut self, k: u64) {
        let mut daggers = Vec::new();
        let mut added = Vec::new();
        for sigma in self.nodes.keys().filter(|s| in_window(s, k)) {
            let window = self.tree.children_in_window(sigma, k);
            if window.is_empty() {
                continue;
            }
            daggers.push(sigma.clone());
            match self.tree.children(sigma) {
                Children::Finite(all) if self.leaf(sigma) => added.extend(all),
                Children::Finite(_) => {}
                // Only the window is available of an infinite child set; it
                // keeps widening with k.
                Children::Infinite => added.extend(window),
            }
        }
        for sigma in daggers {
            if self.daggered.insert(sigma.clone()) {
                let id = self.nodes[&sigma];
                self.a.add_label(id, Label::dagger_seq(&sigma));
            }
        }
        for tau in added {
            self.add(tau);
        }
    }

    /// `T_s = T` and every inner node carries its dagger.
    fn complete(&self, finite: &Option<BTreeSet<Vec<u32>>>) -> bool {
        let Some(all) = finite else {
            return false;
        };
        all.len() == self.nodes.len()
            && all.iter().all(|s| self.nodes.contains_key(s))
            && all
                .iter()
                .all(|s| self.leaf(s) || self.daggered.contains(s))
    }
}

pub fn run_tree(
    tree: &Tree,
    theta: &FormulaFamily,
    cfg: &TreeConfig,
) -> Result<ConstructionTrace, ConstructionError> {
    if cfg.stages == 0 {
        return Err(ConstructionError::ZeroStages);
    }
    let mut cache = Pi2Cache::new(theta);
    let mut st = State {
        tree,
        a: Arena::new(cfg.sort),
        nodes: BTreeMap::new(),
        daggered: BTreeSet::new(),
    };
    st.add(Vec::new());
    let finite = tree.finite_nodes();
    let mut k: u64 = 0;

    let mut trace = ConstructionTrace::default();
    let record = |stage: u64, flag: StageFlag, st: &State<'_>, k: u64| StageRecord {
        stage,
        flag,
        acting: None,
        init: None,
        a: st.a.snapshot(stage),
        b: None,
        n: st.a.len() as u64,
        k,
        tree: Some(st.nodes.keys().cloned().collect()),
    };
    trace.records.push(record(0, StageFlag::Initial, &st, k));

    for stage in 1..=cfg.stages {
        let s = stage - 1;
        cache.ensure(k as usize)?;
        let model = Model::new(st.a.structure(), &cache.vocab);
        let domain: Vec<usize> = st
            .nodes
            .iter()
            .filter(|(sigma, _)| in_window(sigma, k))
            .map(|(_, id)| model.position(*id).expect("element of A"))
            .collect();
        let expansionary = cache.holds_all(k as usize, &model, &domain, Some(s as usize));
        if expansionary {
            st.expand(k);
            k += 1;
            trace.records.push(record(stage, StageFlag::Expansionary, &st, k));
        } else {
            trace.records.push(record(stage, StageFlag::Quiet, &st, k));
        }
        if cfg.halt_at_fixed_point {
            let frozen = !expansionary && s as usize >= st.a.len();
            if frozen || st.complete(&finite) {
                break;
            }
        }
    }
    Ok(trace)
}
