//! Tarskian evaluation over finite snapshots.
//!
//! Formulas are compiled against a [`Vocabulary`] that interns labels, and
//! structures are loaded into a [`Model`] against the same vocabulary. When a
//! quantifier's body is quantifier-free and the model has at most 64
//! elements, the body is evaluated for all values of the quantified variable
//! at once as a bitmask.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Atom, Formula, Var};
use crate::label::Label;
use crate::structure::{ElementId, StageStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    UnboundVariable(String),
    UnknownElement(ElementId),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnboundVariable(v) => write!(f, "unbound variable `{v}`"),
            EvalError::UnknownElement(id) => write!(f, "element {id} is not in the structure"),
        }
    }
}

/// Label interner shared by compiled formulas and models.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    ids: BTreeMap<Label, u32>,
    labels: Vec<Label>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, label: &Label) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.ids.insert(label.clone(), id);
        self.labels.push(label.clone());
        id
    }

    pub fn get(&self, label: &Label) -> Option<u32> {
        self.ids.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A snapshot loaded for evaluation: elements in ascending id order, each with
/// the sorted vocabulary ids of its labels. Labels outside the vocabulary are
/// dropped, since no compiled formula can mention them.
#[derive(Clone, Debug)]
pub struct Model {
    ids: Vec<ElementId>,
    labels: Vec<Vec<u32>>,
    /// `(vocabulary id, element bitmask)` sorted by id; only for ≤ 64 elements.
    masks: Option<Vec<(u32, u64)>>,
}

impl Model {
    pub fn new(s: &StageStructure, vocab: &Vocabulary) -> Model {
        let mut elems: Vec<_> = s.elements.iter().collect();
        elems.sort_by_key(|e| e.id);
        let ids: Vec<ElementId> = elems.iter().map(|e| e.id).collect();
        let labels: Vec<Vec<u32>> = elems
            .iter()
            .map(|e| {
                let mut v: Vec<u32> = e.labels.iter().filter_map(|l| vocab.get(l)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let masks = (ids.len() <= 64).then(|| {
            let mut m: BTreeMap<u32, u64> = BTreeMap::new();
            for (p, ls) in labels.iter().enumerate() {
                for &l in ls {
                    *m.entry(l).or_insert(0) |= 1u64 << p;
                }
            }
            m.into_iter().collect()
        });
        Model { ids, labels, masks }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn position(&self, id: ElementId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn id(&self, pos: usize) -> ElementId {
        self.ids[pos]
    }

    fn has(&self, pos: usize, label: u32) -> bool {
        self.labels[pos].binary_search(&label).is_ok()
    }

    fn full(&self) -> u64 {
        match self.ids.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    fn mask(&self, label: u32) -> u64 {
        let masks = self.masks.as_ref().expect("bitmask model");
        match masks.binary_search_by_key(&label, |&(l, _)| l) {
            Ok(i) => masks[i].1,
            Err(_) => 0,
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Label {
        id: Option<u32>,
        slot: usize,
        positive: bool,
    },
    Eq {
        a: usize,
        b: usize,
        positive: bool,
    },
    And(Vec<Node>),
    Or(Vec<Node>),
    Exists {
        slot: usize,
        body: Box<Node>,
        qf: bool,
    },
    Forall {
        slot: usize,
        body: Box<Node>,
        qf: bool,
    },
}

/// A formula with variables resolved to slots and labels interned.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    root: Node,
    free: Vec<Var>,
    slots: usize,
}

struct Compiler<'v> {
    vocab: &'v mut Vocabulary,
    scope: Vec<(Var, usize)>,
    free: Vec<Var>,
    next_slot: usize,
}

impl Compiler<'_> {
    fn slot(&self, v: &Var) -> usize {
        if let Some((_, s)) = self.scope.iter().rev().find(|(n, _)| n == v) {
            return *s;
        }
        self.free.iter().position(|f| f == v).expect("free variable collected")
    }

    fn atom(&mut self, a: &Atom, positive: bool) -> Node {
        match a {
            Atom::Label(l, v) => Node::Label {
                id: Some(self.vocab.intern(l)),
                slot: self.slot(v),
                positive,
            },
            Atom::Eq(x, y) => Node::Eq {
                a: self.slot(x),
                b: self.slot(y),
                positive,
            },
        }
    }

    fn node(&mut self, f: &Formula) -> Node {
        match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => self.atom(a, true),
            Formula::NotAtom(a) => self.atom(a, false),
            Formula::And(fs) => Node::And(fs.iter().map(|g| self.node(g)).collect()),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| self.node(g)).collect()),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let slot = self.next_slot;
                self.next_slot += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.node(b));
                self.scope.pop();
                let qf = b.is_quantifier_free();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists { slot, body, qf }
                } else {
                    Node::Forall { slot, body, qf }
                }
            }
        }
    }
}

impl CompiledFormula {
    pub fn compile(f: &Formula, vocab: &mut Vocabulary) -> CompiledFormula {
        let free: Vec<Var> = f.free_vars().into_iter().collect();
        let mut c = Compiler {
            vocab,
            scope: Vec::new(),
            next_slot: free.len(),
            free,
        };
        let root = c.node(f);
        CompiledFormula {
            root,
            slots: c.next_slot,
            free: c.free,
        }
    }

    /// Free variables in the order expected by [`CompiledFormula::eval_at`].
    pub fn free_vars(&self) -> &[Var] {
        &self.free
    }

    /// Evaluates with free variables bound by name. `bound` limits every
    /// existential quantifier to the first `bound` elements by id.
    pub fn eval(
        &self,
        m: &Model,
        bound: Option<usize>,
        env: &BTreeMap<Var, ElementId>,
    ) -> Result<bool, EvalError> {
        let mut positions = Vec::with_capacity(self.free.len());
        for v in &self.free {
            let id = env
                .get(v)
                .ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
            positions.push(m.position(*id).ok_or(EvalError::UnknownElement(*id))?);
        }
        Ok(self.eval_at(m, bound, &positions))
    }

    /// Evaluates with free variables bound to model positions, in the order of
    /// [`CompiledFormula::free_vars`].
    pub fn eval_at(&self, m: &Model, bound: Option<usize>, free: &[usize]) -> bool {
        assert_eq!(free.len(), self.free.len(), "free variable count");
        let mut env = vec![0usize; self.slots];
        env[..free.len()].copy_from_slice(free);
        let limit = bound.unwrap_or(usize::MAX).min(m.len());
        holds(&self.root, m, &mut env, limit)
    }
}

fn holds(node: &Node, m: &Model, env: &mut [usize], limit: usize) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Label { id, slot, positive } => {
            let has = match id {
                Some(l) => m.has(env[*slot], *l),
                None => false,
            };
            has == *positive
        }
        Node::Eq { a, b, positive } => (env[*a] == env[*b]) == *positive,
        Node::And(ns) => ns.iter().all(|n| holds(n, m, env, limit)),
        Node::Or(ns) => ns.iter().any(|n| holds(n, m, env, limit)),
        Node::Exists { slot, body, qf } => {
            if *qf && m.masks.is_some() {
                let window = if limit >= 64 {
                    u64::MAX
                } else {
                    (1u64 << limit) - 1
                };
                return qf_mask(body, *slot, m, env) & window & m.full() != 0;
            }
            for p in 0..limit {
                env[*slot] = p;
                if holds(body, m, env, limit) {
                    return true;
                }
            }
            false
        }
        Node::Forall { slot, body, qf } => {
            if *qf && m.masks.is_some() {
                let full = m.full();
                return qf_mask(body, *slot, m, env) & full == full;
            }
            for p in 0..m.len() {
                env[*slot] = p;
                if !holds(body, m, env, limit) {
                    return false;
                }
            }
            true
        }
    }
}

/// Set of positions `p` such that the quantifier-free `node` holds with
/// `env[q] = p`.
fn qf_mask(node: &Node, q: usize, m: &Model, env: &[usize]) -> u64 {
    let full = m.full();
    let constant = |b: bool| if b { full } else { 0 };
    match node {
        Node::Const(b) => constant(*b),
        Node::Label { id, slot, positive } => {
            if *slot == q {
                let set = id.map_or(0, |l| m.mask(l));
                if *positive {
                    set
                } else {
                    !set & full
                }
            } else {
                let has = id.is_some_and(|l| m.has(env[*slot], l));
                constant(has == *positive)
            }
        }
        Node::Eq { a, b, positive } => {
            let set = match (*a == q, *b == q) {
                (true, true) => full,
                (true, false) => 1u64 << env[*b],
                (false, true) => 1u64 << env[*a],
                (false, false) => constant(env[*a] == env[*b]),
            };
            if *positive {
                set
            } else {
                !set & full
            }
        }
        Node::And(ns) => {
            let mut acc = full;
            for n in ns {
                acc &= qf_mask(n, q, m, env);
                if acc == 0 {
                    break;
                }
            }
            acc
        }
        Node::Or(ns) => {
            let mut acc = 0;
            for n in ns {
                acc |= qf_mask(n, q, m, env);
                if acc == full {
                    break;
                }
            }
            acc
        }
        Node::Exists { .. } | Node::Forall { .. } => unreachable!("quantifier-free body"),
    }
}

/// Truth of `f` in `s` under `env`; quantifiers range over all elements.
pub fn evaluate(
    f: &Formula,
    s: &StageStructure,
    env: &BTreeMap<Var, ElementId>,
) -> Result<bool, EvalError> {
    let mut vocab = Vocabulary::new();
    let c = CompiledFormula::compile(f, &mut vocab);
    c.eval(&Model::new(s, &vocab), None, env)
}

/// As [`evaluate`], but every existential quantifier only looks at the first
/// `bound` elements in ascending id order. Universal quantifiers are
/// unrestricted.
pub fn evaluate_witnessed(
    f: &Formula,
    s: &StageStructure,
    bound: usize,
    env: &BTreeMap<Var, ElementId>,
) -> Result<bool, EvalError> {
    let mut vocab = Vocabulary::new();
    let c = CompiledFormula::compile(f, &mut vocab);
    c.eval(&Model::new(s, &vocab), Some(bound), env)
}
