//! Back-and-forth relations, automorphism orbits, isolating formulas and
//! Scott-family extraction for finite label structures.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Classification;
use crate::label::Label;
use crate::structure::{ElementId, StageStructure};

mod family;
mod game;
mod isolate;
mod orbits;

pub use family::{
    literal_pool, scott_family_pi2, scott_family_sigma1, scott_sentence_check, Pi2Entry,
    Sigma1Entry, Verdict,
};
pub use game::{bf_leq, MAX_ARITY};
pub use isolate::{exists_atomic_check, isolating_formula, AtomicReport};
pub use orbits::{orbit_key, orbits, OrbitKey, OrbitPartition};

/// A tuple of elements of one structure.
#[derive(Clone, Copy, Debug)]
pub struct TupleInStructure<'a> {
    pub structure: &'a StageStructure,
    pub tuple: &'a [ElementId],
}

impl<'a> TupleInStructure<'a> {
    pub fn new(structure: &'a StageStructure, tuple: &'a [ElementId]) -> Self {
        TupleInStructure { structure, tuple }
    }

    /// The empty tuple: relations between whole structures.
    pub fn whole(structure: &'a StageStructure) -> Self {
        TupleInStructure {
            structure,
            tuple: &[],
        }
    }

    /// Label sets of the tuple's components.
    fn colors(&self) -> Result<Vec<&'a BTreeSet<Label>>, BfError> {
        self.tuple
            .iter()
            .map(|id| {
                self.structure
                    .get(*id)
                    .map(|e| &e.labels)
                    .ok_or(BfError::UnknownElement(*id))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BfError {
    ArityMismatch { left: usize, right: usize },
    ArityCap { arity: usize, cap: usize },
    UnknownElement(ElementId),
    EmptyTuple,
    NotIsolated(Vec<ElementId>),
    PoolClass { index: usize, class: Classification },
    NotASentence(String),
}

impl fmt::Display for BfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BfError::ArityMismatch { left, right } => {
                write!(f, "tuple arities differ ({left} vs {right})")
            }
            BfError::ArityCap { arity, cap } => {
                write!(f, "tuple arity {arity} exceeds the cap of {cap}")
            }
            BfError::UnknownElement(id) => write!(f, "element {id} is not in the structure"),
            BfError::EmptyTuple => f.write_str("tuple must be non-empty"),
            BfError::NotIsolated(t) => {
                f.write_str("not isolated: no conjunction of the tuple's own labels isolates (")?;
                for (i, id) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{id}")?;
                }
                f.write_str(")")
            }
            BfError::PoolClass { index, class } => {
                write!(f, "pool formula {index} has the wrong class ({class})")
            }
            BfError::NotASentence(v) => write!(f, "not a sentence: `{v}` is free"),
        }
    }
}

/// Equality pattern of a tuple: position `i` maps to the first position
/// holding the same element.
pub(crate) fn equality_pattern(tuple: &[ElementId]) -> Vec<usize> {
    tuple
        .iter()
        .map(|x| tuple.iter().position(|y| y == x).expect("present"))
        .collect()
}
