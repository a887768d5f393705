//! Tree and path documents.
//!
//! A tree is a JSON array of dot-sequences (`"eps"` for the root) or
//! `{"builtin": "comb(2)"}`. On the command line `builtin:NAME` names a
//! builtin directly. A path is `{"path": "zeros"}` or
//! `{"prefix": [..], "cycle": [..]}` for `prefix ⌢ cycle ⌢ cycle ⌢ ...`.

use std::path::Path;

use scottlab_core::constructions::{ExplicitTree, PathRule, Tree};
use scottlab_core::label::{parse_seq, seq_string};
use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinTreeDoc {
    pub builtin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeDoc {
    Nodes(Vec<String>),
    Builtin(BuiltinTreeDoc),
}

impl TreeDoc {
    pub fn from_tree(t: &Tree) -> TreeDoc {
        match (t, t.builtin_name()) {
            (_, Some(builtin)) => TreeDoc::Builtin(BuiltinTreeDoc { builtin }),
            (Tree::Explicit(e), None) => TreeDoc::Nodes(e.nodes().iter().map(|s| seq_string(s)).collect()),
            (_, None) => unreachable!("only explicit trees lack a builtin name"),
        }
    }

    pub fn to_tree(&self, file: &str) -> Result<Tree, FormatError> {
        match self {
            TreeDoc::Builtin(b) => {
                Tree::builtin(&b.builtin).map_err(|e| FormatError::invalid(file, "builtin", e))
            }
            TreeDoc::Nodes(ns) => {
                let nodes = ns
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        parse_seq(s)
                            .ok_or_else(|| FormatError::invalid(file, format!("[{i}]"), format!("malformed sequence {s:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ExplicitTree::new(nodes)
                    .map(Tree::Explicit)
                    .map_err(|e| FormatError::invalid(file, ".", e))
            }
        }
    }
}

/// `builtin:NAME`, or a tree document on disk.
pub fn parse_tree_spec(spec: &str) -> Result<Tree, FormatError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Tree::builtin(name).map_err(|e| FormatError::invalid(spec, ".", e));
    }
    let doc: TreeDoc = super::read_json(Path::new(spec))?;
    doc.to_tree(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPathDoc {
    pub path: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclePathDoc {
    pub prefix: Vec<u32>,
    pub cycle: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathDoc {
    Named(NamedPathDoc),
    Cycle(CyclePathDoc),
}

impl PathDoc {
    pub fn from_rule(p: &PathRule) -> PathDoc {
        if *p == PathRule::zeros() {
            PathDoc::Named(NamedPathDoc { path: "zeros".into() })
        } else {
            PathDoc::Cycle(CyclePathDoc {
                prefix: p.prefix().to_vec(),
                cycle: p.cycle().to_vec(),
            })
        }
    }

    pub fn to_rule(&self, file: &str) -> Result<PathRule, FormatError> {
        match self {
            PathDoc::Named(n) if n.path == "zeros" => Ok(PathRule::zeros()),
            PathDoc::Named(n) => Err(FormatError::invalid(file, "path", format!("unknown path {:?}", n.path))),
            PathDoc::Cycle(c) => PathRule::new(c.prefix.clone(), c.cycle.clone())
                .ok_or_else(|| FormatError::invalid(file, "cycle", "the cycle must be non-empty")),
        }
    }
}

/// `zeros`, an inline JSON path document, or a path document on disk.
pub fn parse_path_spec(spec: &str) -> Result<PathRule, FormatError> {
    if spec == "zeros" {
        return Ok(PathRule::zeros());
    }
    let doc: PathDoc = if spec.trim_start().starts_with('{') {
        super::from_json_str("<path>", spec)?
    } else {
        super::read_json(Path::new(spec))?
    };
    doc.to_rule(spec)
}
