//! Trees `T ⊆ ω^{<ω}` driving the tree construction.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{is_prefix, SeqText};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    MissingRoot,
    /// A node whose parent is absent.
    NotPrefixClosed(Vec<u32>),
    UnknownBuiltin(String),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::MissingRoot => f.write_str("tree has no root"),
            TreeError::NotPrefixClosed(s) => {
                write!(f, "tree is not prefix-closed: {} has no parent", SeqText(s))
            }
            TreeError::UnknownBuiltin(n) => write!(f, "unknown builtin tree {n:?}"),
        }
    }
}

/// A finite prefix-closed set of sequences containing the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExplicitTree {
    nodes: BTreeSet<Vec<u32>>,
}

impl ExplicitTree {
    pub fn new(nodes: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, TreeError> {
        let nodes: BTreeSet<Vec<u32>> = nodes.into_iter().collect();
        if !nodes.contains(&Vec::new()) {
            return Err(TreeError::MissingRoot);
        }
        for s in &nodes {
            if let Some((_, parent)) = s.split_last() {
                if !nodes.contains(parent) {
                    return Err(TreeError::NotPrefixClosed(s.clone()));
                }
            }
        }
        Ok(ExplicitTree { nodes })
    }

    /// Nodes in lexicographic order (root first).
    pub fn nodes(&self) -> &BTreeSet<Vec<u32>> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.nodes.contains(s)
    }

    /// Children of `s`, in increasing order of the last entry.
    pub fn children(&self, s: &[u32]) -> Vec<Vec<u32>> {
        let mut lo = s.to_vec();
        lo.push(0);
        self.nodes
            .range(lo..)
            .take_while(|t| is_prefix(s, t))
            .filter(|t| t.len() == s.len() + 1)
            .cloned()
            .collect()
    }

    pub fn is_leaf(&self, s: &[u32]) -> bool {
        self.children(s).is_empty()
    }

    /// Nodes with at least one child.
    pub fn inner_nodes(&self) -> Vec<Vec<u32>> {
        self.nodes
            .iter()
            .filter(|s| !self.is_leaf(s))
            .cloned()
            .collect()
    }

    /// Largest child index used anywhere, if any node has children.
    pub fn max_child_index(&self) -> Option<u32> {
        self.nodes.iter().filter_map(|s| s.last().copied()).max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Children {
    Finite(Vec<Vec<u32>>),
    /// Every `σ⌢m` for `m ∈ ω`.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Explicit(ExplicitTree),
    /// `{0ⁿ : n ∈ ω}`.
    OmegaPath,
    /// `{0,1}^{≤depth}`.
    FullBinary { depth: u32 },
    /// The spine `0ⁿ` with a tooth `0ⁿ1ᵐ` for `1 ≤ m ≤ width` at every spine node.
    Comb { width: u32 },
    /// `ω^{≤depth}`.
    OmegaBranching { depth: u32 },
}

impl Tree {
    /// Parses a builtin name such as `omega-path`, `full-binary-depth(2)`,
    /// `comb(3)` or `omega-branching-depth(2)`.
    pub fn builtin(name: &str) -> Result<Tree, TreeError> {
        let unknown = || TreeError::UnknownBuiltin(String::from(name));
        if name == "omega-path" {
            return Ok(Tree::OmegaPath);
        }
        let (head, rest) = name.split_once('(').ok_or_else(unknown)?;
        let arg: u32 = rest
            .strip_suffix(')')
            .and_then(|a| a.parse().ok())
            .ok_or_else(unknown)?;
        match head {
            "full-binary-depth" => Ok(Tree::FullBinary { depth: arg }),
            "comb" => Ok(Tree::Comb { width: arg }),
            "omega-branching-depth" => Ok(Tree::OmegaBranching { depth: arg }),
            _ => Err(unknown()),
        }
    }

    /// Builtin name, or `None` for explicit trees.
    pub fn builtin_name(&self) -> Option<String> {
        Some(match self {
            Tree::Explicit(_) => return None,
            Tree::OmegaPath => String::from("omega-path"),
            Tree::FullBinary { depth } => format!("full-binary-depth({depth})"),
            Tree::Comb { width } => format!("comb({width})"),
            Tree::OmegaBranching { depth } => format!("omega-branching-depth({depth})"),
        })
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        match self {
            Tree::Explicit(t) => t.contains(s),
            Tree::OmegaPath => s.iter().all(|&x| x == 0),
            Tree::FullBinary { depth } => s.len() <= *depth as usize && s.iter().all(|&x| x <= 1),
            Tree::Comb { width } => {
                let spine = s.iter().take_while(|&&x| x == 0).count();
                let tooth = &s[spine..];
                tooth.len() <= *width as usize && tooth.iter().all(|&x| x == 1)
            }
            Tree::OmegaBranching { depth } => s.len() <= *depth as usize,
        }
    }

    /// Children of a node of the tree.
    pub fn children(&self, s: &[u32]) -> Children {
        let child = |m: u32| {
            let mut c = s.to_vec();
            c.push(m);
            c
        };
        match self {
            Tree::Explicit(t) => Children::Finite(t.children(s)),
            Tree::OmegaBranching { depth } => {
                if s.len() < *depth as usize {
                    Children::Infinite
                } else {
                    Children::Finite(Vec::new())
                }
            }
            _ => Children::Finite((0..2).map(child).filter(|c| self.contains(c)).collect()),
        }
    }

    /// Children of `s` in `T` that lie in the window `{0..k}^{≤k}`.
    pub fn children_in_window(&self, s: &[u32], k: u64) -> Vec<Vec<u32>> {
        if s.len() as u64 >= k {
            return Vec::new();
        }
        match self.children(s) {
            Children::Finite(cs) => cs.into_iter().filter(|c| in_window(c, k)).collect(),
            Children::Infinite => (0..=k)
                .map(|m| {
                    let mut c = s.to_vec();
                    c.push(m as u32);
                    c
                })
                .collect(),
        }
    }

    /// The node set, when the tree is finite.
    pub fn finite_nodes(&self) -> Option<BTreeSet<Vec<u32>>> {
        match self {
            Tree::Explicit(t) => Some(t.nodes().clone()),
            Tree::FullBinary { depth } => {
                let mut out = BTreeSet::new();
                let mut layer = vec![Vec::new()];
                for _ in 0..=*depth {
                    let mut next = Vec::new();
                    for s in layer {
                        for m in 0..2 {
                            let mut c: Vec<u32> = s.clone();
                            c.push(m);
                            next.push(c);
                        }
                        out.insert(s);
                    }
                    layer = next;
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// `s ∈ {0..k}^{≤k}`.
pub fn in_window(s: &[u32], k: u64) -> bool {
    s.len() as u64 <= k && s.iter().all(|&x| u64::from(x) <= k)
}

/// Every tree with at most `max_nodes` nodes in which each node's children are
/// `σ⌢0, ..., σ⌢(d-1)` for some `d ≤ max_branching`, by size, then
/// lexicographically on the sorted node list.
pub fn enumerate_trees(max_nodes: usize, max_branching: usize) -> Vec<ExplicitTree> {
    // shapes[n]: node sets (relative to the root) of trees with exactly n nodes.
    let mut shapes: Vec<Vec<Vec<Vec<u32>>>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes >= 1 {
        shapes[1].push(vec![Vec::new()]);
    }
    for n in 2..=max_nodes {
        let mut out = Vec::new();
        for d in 1..=max_branching {
            forests(&shapes, n - 1, d, &mut Vec::new(), &mut out);
        }
        shapes[n] = out;
    }
    let mut trees: Vec<ExplicitTree> = shapes
        .into_iter()
        .flatten()
        .map(|nodes| ExplicitTree {
            nodes: nodes.into_iter().collect(),
        })
        .collect();
    trees.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.nodes.iter().cmp(b.nodes.iter())));
    trees
}

/// Ordered forests of exactly `d` subtrees with `n` nodes in total, each
/// emitted as a tree under a fresh root.
fn forests(
    shapes: &[Vec<Vec<Vec<u32>>>],
    n: usize,
    d: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if chosen.len() == d {
        if n == 0 {
            combine(shapes, chosen, 0, vec![Vec::new()], out);
        }
        return;
    }
    let remaining = d - chosen.len();
    for size in 1..=n.saturating_sub(remaining - 1) {
        chosen.push(size);
        forests(shapes, n - size, d, chosen, out);
        chosen.pop();
    }
}

fn combine(
    shapes: &[Vec<Vec<Vec<u32>>>],
    sizes: &[usize],
    slot: usize,
    acc: Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if slot == sizes.len() {
        out.push(acc);
        return;
    }
    for sub in &shapes[sizes[slot]] {
        let mut next = acc.clone();
        next.extend(sub.iter().map(|s| {
            let mut c = vec![slot as u32];
            c.extend_from_slice(s);
            c
        }));
        combine(shapes, sizes, slot + 1, next, out);
    }
}
