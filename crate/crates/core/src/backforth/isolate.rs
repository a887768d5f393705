//! Isolating quantifier-free formulas and the ∃-atomicity check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::BfError;
use crate::formula::Formula;
use crate::label::Label;
use crate::structure::{ElementId, StageStructure};

/// Distinguishing power, most specific first: a dagger label usually belongs
/// to a single element, a sort label to a whole sort.
fn preference(l: &Label) -> u8 {
    match l {
        Label::EllDagger(_) => 0,
        Label::Ell(_) => 1,
        Label::Class(_) => 2,
        Label::Sort(_) => 3,
    }
}

/// Smallest set of candidate indices meeting every obstacle, by iterative
/// deepening; ties go to the earliest candidates.
fn min_hitting_set(mut obstacles: Vec<Vec<usize>>) -> Vec<usize> {
    obstacles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    obstacles.dedup();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for d in obstacles {
        if !kept.iter().any(|k| k.iter().all(|x| d.binary_search(x).is_ok())) {
            kept.push(d);
        }
    }
    if kept.is_empty() {
        return Vec::new();
    }
    let mut chosen = Vec::new();
    for depth in 1.. {
        if search(&kept, &mut chosen, depth) {
            chosen.sort_unstable();
            return chosen;
        }
    }
    unreachable!("every obstacle is non-empty")
}

fn search(obstacles: &[Vec<usize>], chosen: &mut Vec<usize>, depth: usize) -> bool {
    let open = obstacles
        .iter()
        .find(|d| !d.iter().any(|x| chosen.contains(x)));
    let Some(d) = open else {
        return true;
    };
    if depth == 0 {
        return false;
    }
    for &x in d {
        chosen.push(x);
        if search(obstacles, chosen, depth - 1) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Injective tuples of length `k` over `pool`.
fn injective_tuples(pool: &[ElementId], k: usize) -> Vec<Vec<ElementId>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(pool: &[ElementId], k: usize, cur: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for &x in pool {
            if !cur.contains(&x) {
                cur.push(x);
                go(pool, k, cur, out);
                cur.pop();
            }
        }
    }
    go(pool, k, &mut cur, &mut out);
    out
}

/// A conjunction of the tuple's own label atoms plus its equality pattern
/// whose satisfiers in `s` are exactly the orbit of `t`, using as few label
/// atoms as possible (at least one). Variables are `x0, x1, ...`.
pub fn isolating_formula(s: &StageStructure, t: &[ElementId]) -> Result<Formula, BfError> {
    if t.is_empty() {
        return Err(BfError::EmptyTuple);
    }
    let mut colors = Vec::with_capacity(t.len());
    for id in t {
        colors.push(&s.get(*id).ok_or(BfError::UnknownElement(*id))?.labels);
    }
    let firsts: Vec<usize> = (0..t.len())
        .filter(|&i| !t[..i].contains(&t[i]))
        .collect();

    let mut candidates: Vec<(usize, &Label)> = Vec::new();
    for &p in &firsts {
        let mut ls: Vec<&Label> = colors[p].iter().collect();
        ls.sort_by(|a, b| preference(a).cmp(&preference(b)).then_with(|| a.cmp(b)));
        candidates.extend(ls.into_iter().map(|l| (p, l)));
    }

    // Injective tuples only depend on label sets, so `firsts.len()`
    // representatives per label set are enough.
    let mut reps: BTreeMap<&BTreeSet<Label>, Vec<ElementId>> = BTreeMap::new();
    let mut sorted: Vec<_> = s.elements.iter().collect();
    sorted.sort_by_key(|e| e.id);
    for e in sorted {
        let r = reps.entry(&e.labels).or_default();
        if r.len() < firsts.len() {
            r.push(e.id);
        }
    }
    let pool: Vec<ElementId> = reps.values().flatten().copied().collect();
    let mut obstacles = Vec::new();
    for u in injective_tuples(&pool, firsts.len()) {
        let ucolors: Vec<&BTreeSet<Label>> =
            u.iter().map(|id| &s.get(*id).expect("from pool").labels).collect();
        if firsts.iter().zip(&ucolors).all(|(&p, c)| *c == colors[p]) {
            continue;
        }
        let d: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(_, (p, l))| {
                let slot = firsts.iter().position(|q| q == p).expect("first occurrence");
                !ucolors[slot].contains(*l)
            })
            .map(|(i, _)| i)
            .collect();
        if d.is_empty() {
            return Err(BfError::NotIsolated(t.to_vec()));
        }
        obstacles.push(d);
    }

    let mut chosen = min_hitting_set(obstacles);
    if chosen.is_empty() {
        chosen.push(0);
    }
    let var = |i: usize| format!("x{i}");
    let mut conj: Vec<Formula> = chosen
        .iter()
        .map(|&c| {
            let (p, l) = candidates[c];
            Formula::label(l.clone(), &var(p))
        })
        .collect();
    for j in 0..t.len() {
        if let Some(i) = t[..j].iter().position(|x| *x == t[j]) {
            conj.push(Formula::eq(&var(j), &var(i)));
        }
    }
    for (a, &i) in firsts.iter().enumerate() {
        for &j in &firsts[a + 1..] {
            conj.push(Formula::neq(&var(i), &var(j)));
        }
    }
    Ok(if conj.len() == 1 {
        conj.pop().expect("one conjunct")
    } else {
        Formula::And(conj)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicReport {
    pub atomic: bool,
    /// Elements whose orbit no conjunction of their own labels isolates.
    pub witnesses: Vec<ElementId>,
}

/// Whether every element is isolated by a finite conjunction of its labels.
///
/// An element fails exactly when some other element carries a strict superset
/// of its labels, which is what is tested here (over interned bitsets).
pub fn exists_atomic_check(s: &StageStructure) -> AtomicReport {
    let mut vocab: BTreeMap<&Label, usize> = BTreeMap::new();
    for e in &s.elements {
        for l in &e.labels {
            let n = vocab.len();
            vocab.entry(l).or_insert(n);
        }
    }
    let words = vocab.len().div_ceil(64).max(1);
    let mut colors: BTreeMap<&BTreeSet<Label>, Vec<u64>> = BTreeMap::new();
    for e in &s.elements {
        colors.entry(&e.labels).or_insert_with(|| {
            let mut bits = vec![0u64; words];
            for l in &e.labels {
                let i = vocab[l];
                bits[i / 64] |= 1 << (i % 64);
            }
            bits
        });
    }
    let entries: Vec<(&BTreeSet<Label>, &Vec<u64>)> = colors.iter().map(|(k, v)| (*k, v)).collect();
    let mut bad: BTreeSet<&BTreeSet<Label>> = BTreeSet::new();
    for (c, cb) in &entries {
        for (d, db) in &entries {
            if d.len() > c.len() && cb.iter().zip(db.iter()).all(|(x, y)| x & !y == 0) {
                bad.insert(*c);
                break;
            }
        }
    }
    let mut witnesses: Vec<ElementId> = s
        .elements
        .iter()
        .filter(|e| bad.contains(&e.labels))
        .map(|e| e.id)
        .collect();
    witnesses.sort();
    AtomicReport {
        atomic: witnesses.is_empty(),
        witnesses,
    }
}
