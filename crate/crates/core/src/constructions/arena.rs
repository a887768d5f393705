use alloc::collections::{BTreeMap, BTreeSet};

use crate::label::Label;
use crate::structure::{ElementId, ElementRecord, StageStructure, Status};

/// A growing structure of one sort with fresh ids handed out in creation order.
#[derive(Clone, Debug)]
pub(crate) struct Arena {
    s: StageStructure,
    index: BTreeMap<ElementId, usize>,
    sort: u32,
}

impl Arena {
    pub fn new(sort: u32) -> Self {
        Arena {
            s: StageStructure::new(0),
            index: BTreeMap::new(),
            sort,
        }
    }

    pub fn len(&self) -> usize {
        self.s.elements.len()
    }

    pub fn add(&mut self, labels: impl IntoIterator<Item = Label>, status: Status) -> ElementId {
        let id = ElementId(self.s.elements.len() as u64);
        self.index.insert(id, self.s.elements.len());
        self.s
            .elements
            .push(ElementRecord::new(id, self.sort, status).with_labels(labels));
        id
    }

    pub fn get(&self, id: ElementId) -> &ElementRecord {
        &self.s.elements[self.index[&id]]
    }

    pub fn get_mut(&mut self, id: ElementId) -> &mut ElementRecord {
        let i = self.index[&id];
        &mut self.s.elements[i]
    }

    pub fn labels(&self, id: ElementId) -> &BTreeSet<Label> {
        &self.get(id).labels
    }

    pub fn add_label(&mut self, id: ElementId, l: Label) {
        self.get_mut(id).labels.insert(l);
    }

    pub fn extend_labels(&mut self, id: ElementId, ls: &BTreeSet<Label>) {
        self.get_mut(id).labels.extend(ls.iter().cloned());
    }

    /// Elements currently marked as duplicates of `id`.
    pub fn duplicates_of(&self, id: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.s
            .elements
            .iter()
            .filter(move |e| e.status == Status::DuplicateOf(id))
            .map(|e| e.id)
    }

    pub fn structure(&self) -> &StageStructure {
        &self.s
    }

    pub fn snapshot(&self, stage: u64) -> StageStructure {
        let mut out = self.s.clone();
        out.stage = stage;
        out
    }
}
