//! Scott families extracted from finite pools of formulas, and model checking
//! of candidate Scott sentences against test structures.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::orbits::{all_tuples, orbits};
use super::BfError;
use crate::formula::{classify, CompiledFormula, Formula, Model, Vocabulary};
use crate::structure::{is_isomorphic, ElementId, StageStructure};

/// Single literals `ℓ(xᵢ)` and `¬ℓ(xᵢ)` over every label of `s`, and `xᵢ = xⱼ`
/// and its negation, for variables `x0 .. x{vars-1}`.
pub fn literal_pool(s: &StageStructure, vars: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    let labels = s.vocabulary();
    for i in 0..vars {
        let x = format!("x{i}");
        for l in &labels {
            out.push(Formula::label(l.clone(), &x));
            out.push(Formula::not_label(l.clone(), &x));
        }
        for j in 0..i {
            let y = format!("x{j}");
            out.push(Formula::eq(&x, &y));
            out.push(Formula::neq(&x, &y));
        }
    }
    out
}

/// Tuple position named by a pool variable `x<i>`.
fn var_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct PoolTable {
    /// Pool indices usable at this arity.
    members: Vec<usize>,
    tuples: Vec<Vec<ElementId>>,
    index: BTreeMap<Vec<ElementId>, usize>,
    /// `truth[t][k]`: member `members[k]` holds of tuple `t`.
    truth: Vec<Vec<bool>>,
}

impl PoolTable {
    fn build(s: &StageStructure, pool: &[Formula], m: usize) -> PoolTable {
        let mut vocab = Vocabulary::new();
        let mut compiled = Vec::new();
        let mut members = Vec::new();
        for (i, f) in pool.iter().enumerate() {
            let c = CompiledFormula::compile(f, &mut vocab);
            let slots: Option<Vec<usize>> = c.free_vars().iter().map(|v| var_index(v)).collect();
            if let Some(slots) = slots.filter(|sl| sl.iter().all(|&k| k < m)) {
                members.push(i);
                compiled.push((c, slots));
            }
        }
        let model = Model::new(s, &vocab);
        let mut ids: Vec<ElementId> = s.ids().collect();
        ids.sort();
        let tuples = all_tuples(&ids, m);
        let mut truth = Vec::with_capacity(tuples.len());
        let mut index = BTreeMap::new();
        for (ti, t) in tuples.iter().enumerate() {
            index.insert(t.clone(), ti);
            let pos: Vec<usize> = t
                .iter()
                .map(|id| model.position(*id).expect("own element"))
                .collect();
            let row = compiled
                .iter()
                .map(|(c, slots)| {
                    let free: Vec<usize> = slots.iter().map(|&k| pos[k]).collect();
                    c.eval_at(&model, None, &free)
                })
                .collect();
            truth.push(row);
        }
        PoolTable {
            members,
            tuples,
            index,
            truth,
        }
    }

    /// Tuples satisfying every member marked in `required`.
    fn satisfiers(&self, required: &[bool]) -> Vec<&Vec<ElementId>> {
        self.tuples
            .iter()
            .zip(&self.truth)
            .filter(|(_, row)| required.iter().zip(row.iter()).all(|(r, h)| !r || *h))
            .map(|(t, _)| t)
            .collect()
    }
}

fn same_set(sat: &[&Vec<ElementId>], orbit: &[Vec<ElementId>]) -> bool {
    sat.len() == orbit.len() && sat.iter().zip(orbit).all(|(a, b)| *a == b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi2Entry {
    pub orbit: Vec<Vec<ElementId>>,
    pub formula: Formula,
    pub isolating: bool,
}

/// For each orbit of tuples of arity `1..=arity`, the conjunction of all pool
/// formulas true of its first tuple. Pool members must be Π₁ at most; a
/// member applies at arity `m` when its free variables are among
/// `x0 .. x{m-1}`.
pub fn scott_family_pi2(
    s: &StageStructure,
    pool: &[Formula],
    arity: usize,
) -> Result<Vec<Pi2Entry>, BfError> {
    for (index, f) in pool.iter().enumerate() {
        let class = classify(f);
        if !class.is_pi_at_most(1) {
            return Err(BfError::PoolClass { index, class });
        }
    }
    let partition = orbits(s, arity);
    let mut out = Vec::new();
    for m in 1..=arity {
        let table = PoolTable::build(s, pool, m);
        for orbit in partition.of_arity(m) {
            let rep = table.index[&orbit[0]];
            let required = table.truth[rep].clone();
            let conj = table
                .members
                .iter()
                .zip(&required)
                .filter(|(i, r)| **r && pool[**i] != Formula::True)
                .map(|(i, _)| pool[*i].clone())
                .collect();
            let sat = table.satisfiers(&required);
            out.push(Pi2Entry {
                orbit: orbit.clone(),
                formula: Formula::And(conj),
                isolating: same_set(&sat, orbit),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma1Entry {
    pub orbit: Vec<Vec<ElementId>>,
    /// Pool formulas `ψ` true of the orbit whose satisfiers all satisfy every
    /// pool formula the orbit satisfies.
    pub qualifying: Vec<Formula>,
    /// A qualifying formula isolating the orbit if there is one, else the
    /// first qualifying formula.
    pub formula: Option<Formula>,
    pub isolating: bool,
}

/// The pairs `(ā, ψ)` with `ψ` in the pool, `ψ(ā)`, and every `b̄` satisfying
/// `ψ` satisfying all pool formulas `ā` satisfies, grouped by orbit. Pool
/// members must be Σ₁ at most.
pub fn scott_family_sigma1(
    s: &StageStructure,
    pool: &[Formula],
    arity: usize,
) -> Result<Vec<Sigma1Entry>, BfError> {
    for (index, f) in pool.iter().enumerate() {
        let class = classify(f);
        if !class.is_sigma_at_most(1) {
            return Err(BfError::PoolClass { index, class });
        }
    }
    let partition = orbits(s, arity);
    let mut out = Vec::new();
    for m in 1..=arity {
        let table = PoolTable::build(s, pool, m);
        for orbit in partition.of_arity(m) {
            let rep = &table.truth[table.index[&orbit[0]]];
            let mut qualifying = Vec::new();
            let mut isolating_choice = None;
            for (k, &i) in table.members.iter().enumerate() {
                if !rep[k] {
                    continue;
                }
                let mut only = vec![false; table.members.len()];
                only[k] = true;
                let sat = table.satisfiers(&only);
                let dominated = sat.iter().all(|t| {
                    let row = &table.truth[table.index[*t]];
                    rep.iter().zip(row).all(|(r, h)| !r || *h)
                });
                if dominated {
                    if isolating_choice.is_none() && same_set(&sat, orbit) {
                        isolating_choice = Some(pool[i].clone());
                    }
                    qualifying.push(pool[i].clone());
                }
            }
            let isolating = isolating_choice.is_some();
            let formula = isolating_choice.or_else(|| qualifying.first().cloned());
            out.push(Sigma1Entry {
                orbit: orbit.clone(),
                qualifying,
                formula,
                isolating,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub models: bool,
    pub isomorphic: bool,
    /// `models ⟺ isomorphic`.
    pub agree: bool,
}

/// Checks whether `theta` picks out `a` among `tests`.
pub fn scott_sentence_check(
    theta: &Formula,
    a: &StageStructure,
    tests: &[StageStructure],
) -> Result<Vec<Verdict>, BfError> {
    if let Some(v) = theta.free_vars().into_iter().next() {
        return Err(BfError::NotASentence(v));
    }
    let mut vocab = Vocabulary::new();
    let c = CompiledFormula::compile(theta, &mut vocab);
    Ok(tests
        .iter()
        .map(|b| {
            let models = c.eval_at(&Model::new(b, &vocab), None, &[]);
            let isomorphic = is_isomorphic(a, b);
            Verdict {
                models,
                isomorphic,
                agree: models == isomorphic,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::label::Label;
    use crate::structure::{ElementRecord, Status};

    fn s(sets: &[&[Label]]) -> StageStructure {
        StageStructure {
            stage: 0,
            elements: sets
                .iter()
                .enumerate()
                .map(|(i, ls)| {
                    ElementRecord::new(ElementId(i as u64), 0, Status::Active(None))
                        .with_labels(ls.to_vec())
                })
                .collect(),
        }
    }

    #[test]
    fn trivial_pool_gives_empty_conjunctions() {
        let st = s(&[&[Label::ell(0)], &[Label::ell(1)]]);
        let fam = scott_family_pi2(&st, &[Formula::True], 1).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(fam.iter().all(|e| e.formula == Formula::And(vec![]) && !e.isolating));
        let one = s(&[&[]]);
        let fam = scott_family_pi2(&one, &[Formula::True], 1).unwrap();
        assert!(fam[0].isolating);
    }

    #[test]
    fn literal_pool_isolates() {
        let st = s(&[&[Label::ell(0)], &[Label::ell(0), Label::ell(1)], &[Label::ell(2)]]);
        let pool = literal_pool(&st, 1);
        let fam = scott_family_pi2(&st, &pool, 1).unwrap();
        assert!(fam.iter().all(|e| e.isolating));
    }

    #[test]
    fn sigma1_duplicates_share_entry() {
        let st = s(&[&[Label::ell(0)], &[Label::ell(0)]]);
        let pool = vec![parse("E y. l0(y)").unwrap(), crate::formula::parse_open("l0(x0)").unwrap()];
        let fam = scott_family_sigma1(&st, &pool, 1).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].orbit.len(), 2);
        assert!(fam[0].isolating);
    }

    #[test]
    fn pool_class_enforced() {
        let st = s(&[&[]]);
        let bad = parse("A x. E y. x = y").unwrap();
        assert!(matches!(
            scott_family_pi2(&st, core::slice::from_ref(&bad), 1),
            Err(BfError::PoolClass { index: 0, .. })
        ));
        assert!(matches!(
            scott_family_sigma1(&st, &[bad], 1),
            Err(BfError::PoolClass { index: 0, .. })
        ));
    }

    #[test]
    fn true_is_not_a_scott_sentence() {
        let a = s(&[&[]]);
        let b = s(&[&[], &[]]);
        let v = scott_sentence_check(&Formula::True, &a, &[a.clone(), b]).unwrap();
        assert!(v[0].agree);
        assert!(!v[1].agree);
        let open = crate::formula::parse_open("l0(x)").unwrap();
        assert_eq!(
            scott_sentence_check(&open, &a, &[]),
            Err(BfError::NotASentence("x".into()))
        );
    }
}
