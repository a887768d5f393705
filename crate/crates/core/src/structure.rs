//! Finite-stage snapshots of bouquet structures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{seq_string, Label, LabelIndex};

/// Globally fresh element identifier. Ids are handed out in creation order and
/// never reused within a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u64);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Role an active element currently plays in a construction (`a_i`, `b_i`,
/// `a_σ`, `c`). Designations move between elements; identity does not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Designation {
    A(LabelIndex),
    B(LabelIndex),
    C,
}

impl Designation {
    /// The `b`-side counterpart of an `a` designation.
    pub fn mirror(&self) -> Option<Designation> {
        match self {
            Designation::A(i) => Some(Designation::B(i.clone())),
            _ => None,
        }
    }

    /// Parses the text produced by `Display`: `a(3)`, `b(0.1)`, `a(0.)`,
    /// `a(eps)`, `c`.
    pub fn parse(text: &str) -> Option<Designation> {
        if text == "c" {
            return Some(Designation::C);
        }
        let (head, rest) = text.split_at(text.find('(')?);
        let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
        let index = parse_index(inner)?;
        match head {
            "a" => Some(Designation::A(index)),
            "b" => Some(Designation::B(index)),
            _ => None,
        }
    }
}

/// Index text shared by designations and the JSON label codec: a bare natural
/// is `Nat`, a dotted list (or a natural with a trailing dot) is `Seq`.
pub fn parse_index(text: &str) -> Option<LabelIndex> {
    if text == "eps" {
        return Some(LabelIndex::Seq(Vec::new()));
    }
    if let Some(single) = text.strip_suffix('.') {
        let n = parse_digits(single)?;
        return Some(LabelIndex::Seq(alloc::vec![u32::try_from(n).ok()?]));
    }
    if text.contains('.') {
        let seq = text
            .split('.')
            .map(|p| parse_digits(p).and_then(|n| u32::try_from(n).ok()))
            .collect::<Option<Vec<u32>>>()?;
        return Some(LabelIndex::Seq(seq));
    }
    parse_digits(text).map(LabelIndex::Nat)
}

fn parse_digits(text: &str) -> Option<u64> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Inverse of [`parse_index`].
pub fn index_text(index: &LabelIndex) -> String {
    match index {
        LabelIndex::Nat(n) => format!("{n}"),
        LabelIndex::Seq(s) if s.len() == 1 => format!("{}.", s[0]),
        LabelIndex::Seq(s) => seq_string(s),
    }
}

impl fmt::Display for Designation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Designation::A(i) => write!(f, "a({})", index_text(i)),
            Designation::B(i) => write!(f, "b({})", index_text(i)),
            Designation::C => f.write_str("c"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Active(Option<Designation>),
    DuplicateOf(ElementId),
    PendingDuplicate,
}

impl Status {
    pub fn is_active(&self) -> bool {
        matches!(self, Status::Active(_))
    }

    pub fn designation(&self) -> Option<&Designation> {
        match self {
            Status::Active(Some(d)) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementRecord {
    pub id: ElementId,
    pub sort: u32,
    pub labels: BTreeSet<Label>,
    pub status: Status,
}

impl ElementRecord {
    /// A fresh active element carrying only its sort label.
    pub fn new(id: ElementId, sort: u32, status: Status) -> Self {
        let mut labels = BTreeSet::new();
        labels.insert(Label::Sort(sort));
        ElementRecord {
            id,
            sort,
            labels,
            status,
        }
    }

    pub fn with_labels(mut self, labels: impl IntoIterator<Item = Label>) -> Self {
        self.labels.extend(labels);
        self
    }

    pub fn has(&self, label: &Label) -> bool {
        self.labels.contains(label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    DuplicateId(ElementId),
    MissingSortLabel(ElementId),
    ExtraSortLabel(ElementId, u32),
    DanglingDuplicate(ElementId, ElementId),
    EmptyProduct,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::DuplicateId(id) => write!(f, "element id {id} occurs twice"),
            StructureError::MissingSortLabel(id) => {
                write!(f, "element {id} does not carry its sort label")
            }
            StructureError::ExtraSortLabel(id, e) => {
                write!(f, "element {id} carries a second sort label u{e}")
            }
            StructureError::DanglingDuplicate(id, target) => {
                write!(f, "element {id} duplicates missing element {target}")
            }
            StructureError::EmptyProduct => f.write_str("empty product"),
        }
    }
}

/// Multiset of `(sort, label set)` pairs. Two bouquet structures are
/// isomorphic exactly when their canonical forms are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub BTreeMap<(u32, BTreeSet<Label>), usize>);

impl CanonicalForm {
    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StageStructure {
    pub stage: u64,
    pub elements: Vec<ElementRecord>,
}

impl StageStructure {
    pub fn new(stage: u64) -> Self {
        StageStructure {
            stage,
            elements: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: ElementId) -> Option<&ElementRecord> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn get_mut(&mut self, id: ElementId) -> Option<&mut ElementRecord> {
        self.elements.iter_mut().find(|e| e.id == id)
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.get(id).is_some()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements.iter().map(|e| e.id)
    }

    /// The active element holding `d`, if any.
    pub fn designated(&self, d: &Designation) -> Option<&ElementRecord> {
        self.elements
            .iter()
            .find(|e| e.status.designation() == Some(d))
    }

    /// Every label occurring anywhere in the structure.
    pub fn vocabulary(&self) -> BTreeSet<Label> {
        self.elements
            .iter()
            .flat_map(|e| e.labels.iter().cloned())
            .collect()
    }

    /// Checks id uniqueness, the sort-label invariant and that duplicate
    /// targets exist.
    pub fn validate(&self) -> Result<(), StructureError> {
        let mut seen = BTreeSet::new();
        for e in &self.elements {
            if !seen.insert(e.id) {
                return Err(StructureError::DuplicateId(e.id));
            }
            if !e.labels.contains(&Label::Sort(e.sort)) {
                return Err(StructureError::MissingSortLabel(e.id));
            }
            for l in &e.labels {
                if let Label::Sort(other) = l {
                    if *other != e.sort {
                        return Err(StructureError::ExtraSortLabel(e.id, *other));
                    }
                }
            }
        }
        for e in &self.elements {
            if let Status::DuplicateOf(target) = e.status {
                if !seen.contains(&target) {
                    return Err(StructureError::DanglingDuplicate(e.id, target));
                }
            }
        }
        Ok(())
    }

    /// Copies each duplicate target's labels onto its duplicates. Targets that
    /// are themselves duplicates are followed to the end of the chain.
    pub fn sync_duplicates(&mut self) {
        let index: BTreeMap<ElementId, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id, i))
            .collect();
        for i in 0..self.elements.len() {
            let mut target = match self.elements[i].status {
                Status::DuplicateOf(t) => t,
                _ => continue,
            };
            let mut hops = 0;
            while let Some(&j) = index.get(&target) {
                match self.elements[j].status {
                    Status::DuplicateOf(next) if hops < self.elements.len() => {
                        target = next;
                        hops += 1;
                    }
                    _ => break,
                }
            }
            if let Some(&j) = index.get(&target) {
                let labels = self.elements[j].labels.clone();
                self.elements[i].labels = labels;
            }
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let mut m = BTreeMap::new();
        for e in &self.elements {
            *m.entry((e.sort, e.labels.clone())).or_insert(0) += 1;
        }
        CanonicalForm(m)
    }

    /// Same content with stage and element order normalized; used when
    /// comparing snapshots for structural change.
    pub fn sorted_by_id(&self) -> StageStructure {
        let mut out = self.clone();
        out.elements.sort_by_key(|e| e.id);
        out
    }
}

pub fn canonical_form(s: &StageStructure) -> CanonicalForm {
    s.canonical_form()
}

pub fn is_isomorphic(a: &StageStructure, b: &StageStructure) -> bool {
    a.canonical_form() == b.canonical_form()
}

/// Every element of `prev` survives into `next` with a superset of its labels,
/// and `next` is strictly later.
pub fn extends(prev: &StageStructure, next: &StageStructure) -> bool {
    if next.stage <= prev.stage {
        return false;
    }
    let by_id: BTreeMap<ElementId, &ElementRecord> =
        next.elements.iter().map(|e| (e.id, e)).collect();
    prev.elements.iter().all(|e| match by_id.get(&e.id) {
        Some(n) => n.sort == e.sort && e.labels.is_subset(&n.labels),
        None => false,
    })
}

/// Elements of `prev` that are missing from `next` or lost labels there.
pub fn extension_failures(prev: &StageStructure, next: &StageStructure) -> Vec<ElementId> {
    let by_id: BTreeMap<ElementId, &ElementRecord> =
        next.elements.iter().map(|e| (e.id, e)).collect();
    prev.elements
        .iter()
        .filter(|e| match by_id.get(&e.id) {
            Some(n) => n.sort != e.sort || !e.labels.is_subset(&n.labels),
            None => true,
        })
        .map(|e| e.id)
        .collect()
}

/// `copies` disjoint copies of `s`, copy `i` tagged with `Class(i)`.
///
/// Copy `i` of the element with id `x` gets id `i * stride + x`, where
/// `stride` exceeds every id in `s`. Duplicate pointers are remapped within
/// their copy.
pub fn omega_power(s: &StageStructure, copies: u32) -> Result<StageStructure, StructureError> {
    if copies == 0 {
        return Err(StructureError::EmptyProduct);
    }
    let stride = s.elements.iter().map(|e| e.id.0 + 1).max().unwrap_or(0);
    let remap = |i: u32, id: ElementId| ElementId(u64::from(i) * stride + id.0);
    let mut out = StageStructure::new(s.stage);
    for i in 0..copies {
        for e in &s.elements {
            let mut labels = e.labels.clone();
            labels.insert(Label::Class(i));
            let status = match &e.status {
                Status::DuplicateOf(t) => Status::DuplicateOf(remap(i, *t)),
                other => other.clone(),
            };
            out.elements.push(ElementRecord {
                id: remap(i, e.id),
                sort: e.sort,
                labels,
                status,
            });
        }
    }
    Ok(out)
}
