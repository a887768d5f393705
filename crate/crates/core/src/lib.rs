//! Finite-stage laboratory for Scott sentences of computable bouquet structures.
//!
//! The crate models the finite approximations `A_s` of labeled "bouquet"
//! structures, truncated computable infinitary formulas over them, asymmetric
//! back-and-forth relations, and the three stage-by-stage constructions
//! (the Π₂ warm-up diagonalization, the finite-injury Π₃ diagonalization and
//! the tree reduction) together with a trace verifier.
//!
//! Everything here is pure computation over `alloc` collections; file formats,
//! the mutation suite and the command-line driver live in the `scottlab` crate.
#![cfg_attr(not(test), no_std)]
#![deny(rust_2018_idioms)]

extern crate alloc;

pub mod backforth;
pub mod constructions;
pub mod formula;
pub mod graph;
pub mod label;
pub mod structure;

pub use label::{Label, LabelIndex};
pub use structure::{
    CanonicalForm, Designation, ElementId, ElementRecord, StageStructure, Status, StructureError,
};
