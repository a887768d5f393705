//! Stage-by-stage construction engines, the companion structure along a path,
//! the generated tree Scott sentence, and trace verification.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::FamilyError;
use crate::structure::{ElementId, StageStructure};

mod arena;
mod bpath;
mod pi3;
mod sentence;
mod theta;
mod tree;
mod tree_run;
mod verify;
mod warmup;

pub use bpath::{build_b_along_path, PathRule};
pub use pi3::{run_pi3, Pi3Clause, Pi3Config, Pi3Theta};
pub use sentence::generate_tree_scott_sentence;
pub use tree::{enumerate_trees, Children, ExplicitTree, Tree, TreeError};
pub use tree_run::{run_tree, TreeConfig};
pub use verify::{verify_trace, Violation, ViolationKind};
pub use warmup::{run_warmup, WarmupConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageFlag {
    /// Stage 0.
    Initial,
    Expansionary,
    /// Nothing acted: a non-expansionary stage (warm-up, tree) or a stage
    /// where no requirement required attention (Π₃).
    Quiet,
    Attention,
}

impl StageFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            StageFlag::Initial => "initial",
            StageFlag::Expansionary => "expansionary",
            StageFlag::Quiet => "quiet",
            StageFlag::Attention => "attention",
        }
    }

    pub fn parse(s: &str) -> Option<StageFlag> {
        Some(match s {
            "initial" => StageFlag::Initial,
            "expansionary" => StageFlag::Expansionary,
            "quiet" => StageFlag::Quiet,
            "attention" => StageFlag::Attention,
            _ => return None,
        })
    }
}

/// Identifies the requirement `R^e_{i,b̄}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RequirementKey {
    pub e: u32,
    pub i: usize,
    pub b: Vec<ElementId>,
}

/// One committed stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: u64,
    pub flag: StageFlag,
    /// Requirement that acted at this stage (Π₃ attention stages).
    pub acting: Option<RequirementKey>,
    /// Requirement initialized at this stage (Π₃ quiet stages).
    pub init: Option<RequirementKey>,
    pub a: StageStructure,
    pub b: Option<StageStructure>,
    pub n: u64,
    pub k: u64,
    /// `T_s`, sorted (tree runs).
    pub tree: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub records: Vec<StageRecord>,
}

impl ConstructionTrace {
    pub fn last(&self) -> Option<&StageRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionError {
    ZeroStages,
    /// A theta member is not `∀x̄ φ` with `φ` Σ₁.
    NotPi2 { index: usize, detail: String },
    /// A Π₃ disjunct is not `∃ȳ φ` with `φ` Π₁ over the clause variables.
    NotPi3 {
        clause: usize,
        disjunct: usize,
        detail: String,
    },
    Family(FamilyError),
    Tree(TreeError),
    NotATreeTrace,
    PathLeavesTree { stage: u64, node: Vec<u32> },
    PathNotLeaf { stage: u64, node: Vec<u32> },
    Invariant { stage: u64, detail: String },
}

impl From<FamilyError> for ConstructionError {
    fn from(e: FamilyError) -> Self {
        ConstructionError::Family(e)
    }
}

impl From<TreeError> for ConstructionError {
    fn from(e: TreeError) -> Self {
        ConstructionError::Tree(e)
    }
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::label::SeqText;
        match self {
            ConstructionError::ZeroStages => f.write_str("stage budget must be positive"),
            ConstructionError::NotPi2 { index, detail } => {
                write!(f, "theta member {index} is not a Pi2 clause: {detail}")
            }
            ConstructionError::NotPi3 {
                clause,
                disjunct,
                detail,
            } => write!(
                f,
                "theta clause {clause}, disjunct {disjunct} is not of the required form: {detail}"
            ),
            ConstructionError::Family(e) => write!(f, "{e}"),
            ConstructionError::Tree(e) => write!(f, "{e}"),
            ConstructionError::NotATreeTrace => f.write_str("trace does not record T_s"),
            ConstructionError::PathLeavesTree { stage, node } => {
                write!(f, "stage {stage}: path node {} is not in the tree", SeqText(node))
            }
            ConstructionError::PathNotLeaf { stage, node } => {
                write!(f, "stage {stage}: path node {} is not a leaf of T_s", SeqText(node))
            }
            ConstructionError::Invariant { stage, detail } => {
                write!(f, "stage {stage}: invariant breach: {detail}")
            }
        }
    }
}
