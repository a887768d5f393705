//! Running constructions from file-level inputs, and the bundled reference
//! runs: three warm-up thetas, three Π₃ thetas and six trees.

use scottlab_core::constructions::{
    build_b_along_path, run_pi3, run_tree, run_warmup, ConstructionTrace, PathRule, Pi3Config, Tree,
    TreeConfig, WarmupConfig,
};
use scottlab_core::StageStructure;

use crate::format::theta::{builtin_theta, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    Warmup,
    Pi3,
    Tree,
}

impl RunKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunKind::Warmup => "warmup",
            RunKind::Pi3 => "pi3",
            RunKind::Tree => "tree",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0} runs need a {1} theta")]
    WrongTheta(&'static str, &'static str),
    #[error("tree runs need --tree")]
    MissingTree,
    #[error("{0}")]
    Construction(String),
}

/// Runs one construction with the default halting policy.
pub fn construct(
    kind: RunKind,
    theta: &Theta,
    tree: Option<&Tree>,
    stages: u64,
) -> Result<ConstructionTrace, RunError> {
    let fail = |e: scottlab_core::constructions::ConstructionError| RunError::Construction(e.to_string());
    match (kind, theta) {
        (RunKind::Warmup, Theta::Pi2(f)) => run_warmup(f, &WarmupConfig::new(stages)).map_err(fail),
        (RunKind::Tree, Theta::Pi2(f)) => {
            let t = tree.ok_or(RunError::MissingTree)?;
            run_tree(t, f, &TreeConfig::new(stages)).map_err(fail)
        }
        (RunKind::Pi3, Theta::Pi3(t)) => run_pi3(t, &Pi3Config::new(stages)).map_err(fail),
        (RunKind::Pi3, _) => Err(RunError::WrongTheta("pi3", "pi3")),
        (k, _) => Err(RunError::WrongTheta(k.as_str(), "pi2")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub name: &'static str,
    pub kind: RunKind,
    /// Builtin theta name.
    pub theta: &'static str,
    /// Builtin tree name.
    pub tree: Option<&'static str>,
    /// Build the companion structure along `0^ω`.
    pub zeros_path: bool,
    pub stages: u64,
}

const fn spec(
    name: &'static str,
    kind: RunKind,
    theta: &'static str,
    tree: Option<&'static str>,
    zeros_path: bool,
) -> RunSpec {
    RunSpec {
        name,
        kind,
        theta,
        tree,
        zeros_path,
        stages: 200,
    }
}

pub const BUNDLED: [RunSpec; 12] = [
    spec("warmup-trivial", RunKind::Warmup, "trivial", None, false),
    spec("warmup-label-chain", RunKind::Warmup, "label-chain", None, false),
    spec("warmup-unsat-at-3", RunKind::Warmup, "unsat-at:3", None, false),
    spec("pi3-always-attention", RunKind::Pi3, "pi3-always-attention", None, false),
    spec("pi3-never-attention", RunKind::Pi3, "pi3-never-attention", None, false),
    spec("pi3-label-avoid", RunKind::Pi3, "pi3-label-avoid", None, false),
    spec("tree-omega-path", RunKind::Tree, "trivial", Some("omega-path"), true),
    spec("tree-comb-1", RunKind::Tree, "trivial", Some("comb(1)"), true),
    spec("tree-comb-2", RunKind::Tree, "trivial", Some("comb(2)"), true),
    spec("tree-comb-3", RunKind::Tree, "trivial", Some("comb(3)"), true),
    spec("tree-full-binary-3", RunKind::Tree, "trivial", Some("full-binary-depth(3)"), false),
    spec("tree-omega-branching-2", RunKind::Tree, "trivial", Some("omega-branching-depth(2)"), false),
];

#[derive(Clone, Debug)]
pub struct BundledRun {
    pub spec: RunSpec,
    pub tree: Option<Tree>,
    pub trace: ConstructionTrace,
    /// Companion snapshots for tree runs with a path.
    pub path_b: Option<Vec<StageStructure>>,
}

impl BundledRun {
    /// `(A_s, B_s)` for every stage that has a companion structure.
    pub fn pairs(&self) -> Vec<(&StageStructure, &StageStructure)> {
        match &self.path_b {
            Some(bs) => self.trace.records.iter().map(|r| &r.a).zip(bs).collect(),
            None => self
                .trace
                .records
                .iter()
                .filter_map(|r| r.b.as_ref().map(|b| (&r.a, b)))
                .collect(),
        }
    }
}

pub fn run_bundled(spec: &RunSpec, stages: u64) -> Result<BundledRun, RunError> {
    let theta = builtin_theta(spec.theta).map_err(RunError::Construction)?;
    let tree = spec
        .tree
        .map(Tree::builtin)
        .transpose()
        .map_err(|e| RunError::Construction(e.to_string()))?;
    let trace = construct(spec.kind, &theta, tree.as_ref(), stages)?;
    let path_b = if spec.zeros_path {
        Some(
            build_b_along_path(&trace, tree.as_ref(), &PathRule::zeros())
                .map_err(|e| RunError::Construction(e.to_string()))?,
        )
    } else {
        None
    };
    Ok(BundledRun {
        spec: *spec,
        tree,
        trace,
        path_b,
    })
}
