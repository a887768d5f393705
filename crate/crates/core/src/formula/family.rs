//! Infinite conjunctions and disjunctions, represented as an enumeration of
//! members that is only ever truncated.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connective {
    Conjunctive,
    Disjunctive,
}

pub type Rule = Arc<dyn Fn(usize) -> Result<Formula, String> + Send + Sync>;

#[derive(Clone)]
pub enum Members {
    Explicit(Vec<Formula>),
    /// Computable enumeration `i ↦ φ_i`; `note` describes it for humans.
    Generated { rule: Rule, note: String },
}

impl fmt::Debug for Members {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Members::Explicit(fs) => f.debug_tuple("Explicit").field(fs).finish(),
            Members::Generated { note, .. } => f.debug_struct("Generated").field("note", note).finish(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormulaFamily {
    pub connective: Connective,
    pub members: Members,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyError {
    /// The generator failed at this index.
    Generator { index: usize, message: String },
    /// An explicit family has no member at this index.
    OutOfRange { index: usize, len: usize },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::Generator { index, message } => {
                write!(f, "family member {index} could not be generated: {message}")
            }
            FamilyError::OutOfRange { index, len } => {
                write!(f, "family member {index} requested but only {len} exist")
            }
        }
    }
}

impl FormulaFamily {
    pub fn explicit(connective: Connective, members: Vec<Formula>) -> Self {
        FormulaFamily {
            connective,
            members: Members::Explicit(members),
        }
    }

    pub fn generated(
        connective: Connective,
        note: impl Into<String>,
        rule: impl Fn(usize) -> Result<Formula, String> + Send + Sync + 'static,
    ) -> Self {
        FormulaFamily {
            connective,
            members: Members::Generated {
                rule: Arc::new(rule),
                note: note.into(),
            },
        }
    }

    /// Member `i`, or `None` past the end of an explicit family.
    pub fn member(&self, i: usize) -> Result<Option<Formula>, FamilyError> {
        match &self.members {
            Members::Explicit(fs) => Ok(fs.get(i).cloned()),
            Members::Generated { rule, .. } => rule(i)
                .map(Some)
                .map_err(|message| FamilyError::Generator { index: i, message }),
        }
    }

    /// Number of members, when finite.
    pub fn explicit_len(&self) -> Option<usize> {
        match &self.members {
            Members::Explicit(fs) => Some(fs.len()),
            Members::Generated { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.members {
            Members::Explicit(fs) => format!("{} explicit members", fs.len()),
            Members::Generated { note, .. } => note.clone(),
        }
    }
}

/// `⋀_{i≤k} φ_i` (or `⩖`). A one-member truncation is returned unwrapped.
pub fn instantiate_family(fam: &FormulaFamily, k: usize) -> Result<Formula, FamilyError> {
    let mut members = Vec::with_capacity(k + 1);
    for i in 0..=k {
        match fam.member(i)? {
            Some(f) => members.push(f),
            None => {
                return Err(FamilyError::OutOfRange {
                    index: i,
                    len: fam.explicit_len().unwrap_or(0),
                })
            }
        }
    }
    if members.len() == 1 {
        return Ok(members.pop().expect("one member"));
    }
    Ok(match fam.connective {
        Connective::Conjunctive => Formula::And(members),
        Connective::Disjunctive => Formula::Or(members),
    })
}
