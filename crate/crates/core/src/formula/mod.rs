//! Truncated infinitary formulas over label structures: AST, text syntax,
//! Σₙ/Πₙ classification, evaluation and formula families.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::label::Label;

mod classify;
mod eval;
mod family;
mod parse;
mod print;

pub use classify::{classify, Classification, Kind};
pub use eval::{
    evaluate, evaluate_witnessed, CompiledFormula, EvalError, Model, Vocabulary,
};
pub use family::{instantiate_family, Connective, FamilyError, FormulaFamily, Members, Rule};
pub use parse::{parse, parse_open, ParseError};

pub type Var = String;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Label(Label, Var),
    Eq(Var, Var),
}

/// Formula in negation normal form: negation only wraps atoms.
///
/// Quantifiers bind one variable each; `E x, y. φ` is sugar for
/// `Exists(x, Exists(y, φ))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    NotAtom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn label(label: Label, var: &str) -> Formula {
        Formula::Atom(Atom::Label(label, var.into()))
    }

    pub fn not_label(label: Label, var: &str) -> Formula {
        Formula::NotAtom(Atom::Label(label, var.into()))
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Atom(Atom::Eq(x.into(), y.into()))
    }

    pub fn neq(x: &str, y: &str) -> Formula {
        Formula::NotAtom(Atom::Eq(x.into(), y.into()))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |b, v| Formula::Exists((*v).into(), Box::new(b)))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |b, v| Formula::Forall((*v).into(), Box::new(b)))
    }

    /// `a → b` for a literal-free premise, written as `¬a ∨ b`.
    pub fn implies(premise: Formula, conclusion: Formula) -> Formula {
        Formula::Or(alloc::vec![nnf_negate(&premise), conclusion])
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NotAtom(_) => true,
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Every label mentioned anywhere in the formula.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Label(l, _) = a {
                out.insert(l.clone());
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) | Formula::NotAtom(a) => f(a),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.visit_atoms(f)),
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.visit_atoms(f),
        }
    }

    /// Strips a leading block of universal quantifiers.
    pub fn forall_prefix(&self) -> (Vec<&str>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(v, b) = cur {
            vars.push(v.as_str());
            cur = b;
        }
        (vars, cur)
    }

    /// Strips a leading block of existential quantifiers.
    pub fn exists_prefix(&self) -> (Vec<&str>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Exists(v, b) = cur {
            vars.push(v.as_str());
            cur = b;
        }
        (vars, cur)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NotAtom(_) => 1,
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.size(),
        }
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let mut note = |v: &Var, bound: &Vec<Var>| {
        if !bound.contains(v) {
            out.insert(v.clone());
        }
    };
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(a) | Formula::NotAtom(a) => match a {
            Atom::Label(_, v) => note(v, bound),
            Atom::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
        },
        Formula::And(fs) | Formula::Or(fs) => {
            for g in fs {
                collect_free(g, bound, out);
            }
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
    }
}

/// Negation normal form of `¬f`.
pub fn nnf_negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(a) => Formula::NotAtom(a.clone()),
        Formula::NotAtom(a) => Formula::Atom(a.clone()),
        Formula::And(fs) => Formula::Or(fs.iter().map(nnf_negate).collect()),
        Formula::Or(fs) => Formula::And(fs.iter().map(nnf_negate).collect()),
        Formula::Exists(v, b) => Formula::Forall(v.clone(), Box::new(nnf_negate(b))),
        Formula::Forall(v, b) => Formula::Exists(v.clone(), Box::new(nnf_negate(b))),
    }
}
