//! Compiled caches for the theta families driving the constructions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ConstructionError;
use crate::formula::{classify, nnf_negate, CompiledFormula, Formula, FormulaFamily, Model, Vocabulary};

/// Splits `∀x̄ φ` into its matrix after checking `φ` is Σ₁ and the member is a
/// sentence.
pub(crate) fn pi2_matrix(index: usize, f: &Formula) -> Result<Formula, ConstructionError> {
    let err = |detail: String| ConstructionError::NotPi2 { index, detail };
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(err(format!("free variable {v}")));
    }
    let (_, matrix) = f.forall_prefix();
    let class = classify(matrix);
    if !class.is_sigma_at_most(1) {
        return Err(err(format!("matrix is {class}")));
    }
    Ok(matrix.clone())
}

/// Members `∀x̄ᵢ φᵢ` of a conjunctive Π₂ family, compiled on demand. A missing
/// member of a finite family counts as true.
pub(crate) struct Pi2Cache<'a> {
    family: &'a FormulaFamily,
    pub vocab: Vocabulary,
    members: Vec<Option<CompiledFormula>>,
}

impl<'a> Pi2Cache<'a> {
    pub fn new(family: &'a FormulaFamily) -> Self {
        Pi2Cache {
            family,
            vocab: Vocabulary::new(),
            members: Vec::new(),
        }
    }

    /// Compiles members `0..=k`. Must precede building the model.
    pub fn ensure(&mut self, k: usize) -> Result<(), ConstructionError> {
        while self.members.len() <= k {
            let i = self.members.len();
            let compiled = match self.family.member(i)? {
                Some(f) => Some(CompiledFormula::compile(&pi2_matrix(i, &f)?, &mut self.vocab)),
                None => None,
            };
            self.members.push(compiled);
        }
        Ok(())
    }

    /// `⋀_{i≤k} ∀x̄ᵢ ∈ domain φᵢ(x̄ᵢ)` in `m`, with existential witnesses
    /// restricted by `bound`.
    pub fn holds_all(&self, k: usize, m: &Model, domain: &[usize], bound: Option<usize>) -> bool {
        self.members[..=k]
            .iter()
            .flatten()
            .all(|c| for_all_tuples(domain, c.free_vars().len(), |t| c.eval_at(m, bound, t)))
    }
}

/// Whether `pred` holds of every tuple of length `arity` over `domain`.
pub(crate) fn for_all_tuples(domain: &[usize], arity: usize, mut pred: impl FnMut(&[usize]) -> bool) -> bool {
    if arity == 0 {
        return pred(&[]);
    }
    if domain.is_empty() {
        return true;
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<usize> = vec![domain[0]; arity];
    loop {
        if !pred(&tuple) {
            return false;
        }
        let mut p = arity;
        loop {
            if p == 0 {
                return true;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < domain.len() {
                tuple[p] = domain[idx[p]];
                break;
            }
            idx[p] = 0;
            tuple[p] = domain[0];
        }
    }
}

/// Where a free variable of a compiled Π₃ disjunct gets its value.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Slot {
    X(usize),
    Y(usize),
}

/// `¬φᵢⱼ` for a disjunct `∃ȳ φᵢⱼ` of clause `i`, with its free variables
/// resolved against the clause tuple and the disjunct's own block.
pub(crate) struct NegatedDisjunct {
    pub compiled: CompiledFormula,
    pub slots: Vec<Slot>,
}

pub(crate) fn negated_disjunct(
    clause: usize,
    disjunct: usize,
    xs: &[String],
    f: &Formula,
    vocab: &mut Vocabulary,
) -> Result<NegatedDisjunct, ConstructionError> {
    let err = |detail: String| ConstructionError::NotPi3 {
        clause,
        disjunct,
        detail,
    };
    let (ys, matrix) = f.exists_prefix();
    let class = classify(matrix);
    if !class.is_pi_at_most(1) {
        return Err(err(format!("matrix is {class}")));
    }
    let compiled = CompiledFormula::compile(&nnf_negate(matrix), vocab);
    let mut slots = Vec::with_capacity(compiled.free_vars().len());
    for v in compiled.free_vars() {
        // The innermost binder wins, so search ȳ from the right.
        if let Some(p) = ys.iter().rposition(|y| *y == v.as_str()) {
            slots.push(Slot::Y(p));
        } else if let Some(p) = xs.iter().position(|x| x == v) {
            slots.push(Slot::X(p));
        } else {
            return Err(err(format!("free variable {v}")));
        }
    }
    Ok(NegatedDisjunct {
        compiled,
        slots,
    })
}

impl NegatedDisjunct {
    /// `∀ȳ ∈ domain ¬φ(b̄, ȳ)`; `b` holds model positions.
    pub fn refuted_everywhere(&self, m: &Model, b: &[usize], domain: &[usize]) -> bool {
        let mut used: Vec<usize> = self
            .slots
            .iter()
            .filter_map(|s| match s {
                Slot::Y(p) => Some(*p),
                Slot::X(_) => None,
            })
            .collect();
        used.sort_unstable();
        used.dedup();
        let mut free = vec![0usize; self.slots.len()];
        for_all_tuples(domain, used.len(), |ys| {
            for (f, s) in free.iter_mut().zip(&self.slots) {
                *f = match s {
                    Slot::X(p) => b[*p],
                    Slot::Y(p) => ys[used.binary_search(p).expect("collected above")],
                };
            }
            self.compiled.eval_at(m, None, &free)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Connective};

    #[test]
    fn tuple_sweep() {
        let mut seen = Vec::new();
        assert!(for_all_tuples(&[3, 5], 2, |t| {
            seen.push(t.to_vec());
            true
        }));
        assert_eq!(seen, vec![vec![3, 3], vec![3, 5], vec![5, 3], vec![5, 5]]);
        assert!(for_all_tuples(&[], 1, |_| false));
        assert!(!for_all_tuples(&[], 0, |_| false));
    }

    #[test]
    fn pi2_shape_enforced() {
        assert!(pi2_matrix(0, &parse("A x. E y. x = y").unwrap()).is_ok());
        assert!(matches!(
            pi2_matrix(1, &parse("A x. E y. A z. x = z").unwrap()),
            Err(ConstructionError::NotPi2 { index: 1, .. })
        ));
        let fam = FormulaFamily::explicit(Connective::Conjunctive, vec![parse("A x. true").unwrap()]);
        let mut cache = Pi2Cache::new(&fam);
        cache.ensure(3).unwrap();
        assert_eq!(cache.members.iter().filter(|m| m.is_some()).count(), 1);
    }

    #[test]
    fn disjunct_variables_resolve() {
        let mut vocab = Vocabulary::new();
        let xs = vec![String::from("x")];
        let f = parse("A x. E y. And{ !x = y, l0(y) }").unwrap();
        let (_, inner) = f.forall_prefix();
        let d = negated_disjunct(0, 0, &xs, inner, &mut vocab).unwrap();
        assert_eq!(d.slots.len(), 2);
        let bad = parse("E y. A z. E w. z = w").unwrap();
        assert!(negated_disjunct(0, 1, &xs, &bad, &mut vocab).is_err());
    }
}
