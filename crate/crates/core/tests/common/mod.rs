//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use scottlab_core::constructions::ExplicitTree;
use scottlab_core::formula::{parse, Atom, Formula};
use scottlab_core::{ElementId, ElementRecord, Label, StageStructure, Status};

pub fn corpus() -> Vec<Formula> {
    corpus_lines()
        .iter()
        .map(|l| parse(l).unwrap_or_else(|e| panic!("corpus line {l:?}: {e:?}")))
        .collect()
}

pub fn corpus_lines() -> Vec<String> {
    include_str!("../../data/corpus.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// A structure of sort 0 whose elements carry the given label sets, ids in
/// order.
pub fn structure(sets: &[Vec<Label>]) -> StageStructure {
    StageStructure {
        stage: 0,
        elements: sets
            .iter()
            .enumerate()
            .map(|(i, ls)| ElementRecord::new(ElementId(i as u64), 0, Status::Active(None)).with_labels(ls.clone()))
            .collect(),
    }
}

/// `{ℓ_ρ : ρ ⪯ σ}` with the sort label, plus `ℓ†_σ` for inner nodes.
pub fn limit_labels(sigma: &[u32], inner: bool) -> BTreeSet<Label> {
    let mut want: BTreeSet<Label> = (0..=sigma.len()).map(|i| Label::ell_seq(&sigma[..i])).collect();
    want.insert(Label::Sort(0));
    if inner {
        want.insert(Label::dagger_seq(sigma));
    }
    want
}

/// The limit structure over a finite tree: one `a_σ` per node.
pub fn limit_structure(t: &ExplicitTree) -> StageStructure {
    let sets: Vec<Vec<Label>> = t
        .nodes()
        .iter()
        .map(|s| limit_labels(s, !t.is_leaf(s)).into_iter().collect())
        .collect();
    structure(&sets)
}

/// Every structure with at most `max` elements over subsets of `pool`, one per
/// isomorphism type.
pub fn structure_family(max: usize, pool: &[Label]) -> Vec<StageStructure> {
    let colors: Vec<Vec<Label>> = (0..1usize << pool.len())
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(colors: &[Vec<Label>], from: usize, left: usize, chosen: &mut Vec<usize>, out: &mut Vec<StageStructure>) {
        let sets: Vec<Vec<Label>> = chosen.iter().map(|&c| colors[c].clone()).collect();
        out.push(structure(&sets));
        if left == 0 {
            return;
        }
        for c in from..colors.len() {
            chosen.push(c);
            go(colors, c, left - 1, chosen, out);
            chosen.pop();
        }
    }
    go(&colors, 0, max, &mut chosen, &mut out);
    out
}

pub fn random_structure(rng: &mut impl Rng, max: usize, pool: &[Label]) -> StageStructure {
    let n = rng.gen_range(0..=max);
    let sets: Vec<Vec<Label>> = (0..n)
        .map(|_| pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect())
        .collect();
    let mut s = structure(&sets);
    // Non-contiguous ids exercise id-order handling.
    let mut ids: Vec<u64> = (0..n as u64).map(|i| i * 3 + 1).collect();
    ids.shuffle(rng);
    for (e, id) in s.elements.iter_mut().zip(ids) {
        e.id = ElementId(id);
    }
    s
}

pub fn label_pool() -> Vec<Label> {
    vec![
        Label::Sort(0),
        Label::ell(0),
        Label::ell(1),
        Label::ell(2),
        Label::dagger(0),
        Label::ell_seq(&[]),
        Label::ell_seq(&[0, 1]),
        Label::dagger_seq(&[1]),
        Label::Class(1),
    ]
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];

/// A random formula whose free variables are among `scope`.
pub fn random_formula(rng: &mut impl Rng, depth: u32, scope: &mut Vec<String>, labels: &[Label]) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        if scope.is_empty() {
            return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
        }
        let v = scope.choose(rng).expect("non-empty").clone();
        return match rng.gen_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => {
                let l = labels.choose(rng).expect("labels").clone();
                if rng.gen_bool(0.5) {
                    Formula::label(l, &v)
                } else {
                    Formula::not_label(l, &v)
                }
            }
            _ => {
                let u = scope.choose(rng).expect("non-empty").clone();
                if rng.gen_bool(0.5) {
                    Formula::eq(&v, &u)
                } else {
                    Formula::neq(&v, &u)
                }
            }
        };
    }
    match rng.gen_range(0..4) {
        0 | 1 => {
            let n = rng.gen_range(0..=3);
            let fs = (0..n).map(|_| random_formula(rng, depth - 1, scope, labels)).collect();
            if rng.gen_bool(0.5) {
                Formula::And(fs)
            } else {
                Formula::Or(fs)
            }
        }
        _ => {
            let v = VARS.choose(rng).expect("vars").to_string();
            scope.push(v.clone());
            let body = random_formula(rng, depth - 1, scope, labels);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::Exists(v, Box::new(body))
            } else {
                Formula::Forall(v, Box::new(body))
            }
        }
    }
}

pub fn random_sentence(rng: &mut impl Rng, depth: u32) -> Formula {
    random_formula(rng, depth, &mut Vec::new(), &label_pool())
}

/// Tarskian truth by direct recursion over the syntax. `bound` restricts every
/// existential quantifier to the first `bound` elements by id.
pub fn naive_eval(f: &Formula, s: &StageStructure, env: &mut BTreeMap<String, ElementId>, bound: Option<usize>) -> bool {
    let mut ids: Vec<ElementId> = s.elements.iter().map(|e| e.id).collect();
    ids.sort();
    naive(f, s, &ids, env, bound)
}

fn naive(f: &Formula, s: &StageStructure, ids: &[ElementId], env: &mut BTreeMap<String, ElementId>, bound: Option<usize>) -> bool {
    let atom = |a: &Atom, env: &BTreeMap<String, ElementId>| match a {
        Atom::Label(l, v) => s
            .elements
            .iter()
            .find(|e| e.id == env[v])
            .expect("bound element")
            .labels
            .contains(l),
        Atom::Eq(x, y) => env[x] == env[y],
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => atom(a, env),
        Formula::NotAtom(a) => !atom(a, env),
        Formula::And(fs) => fs.iter().all(|g| naive(g, s, ids, env, bound)),
        Formula::Or(fs) => fs.iter().any(|g| naive(g, s, ids, env, bound)),
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let exists = matches!(f, Formula::Exists(..));
            let range: &[ElementId] = match (exists, bound) {
                (true, Some(k)) => &ids[..k.min(ids.len())],
                _ => ids,
            };
            let saved = env.get(v).copied();
            let mut result = !exists;
            for &x in range {
                env.insert(v.clone(), x);
                if naive(b, s, ids, env, bound) == exists {
                    result = exists;
                    break;
                }
            }
            match saved {
                Some(x) => env.insert(v.clone(), x),
                None => env.remove(v),
            };
            result
        }
    }
}

fn labels_of(s: &StageStructure, id: ElementId) -> &BTreeSet<Label> {
    &s.elements.iter().find(|e| e.id == id).expect("element").labels
}

/// Every literal over the combined vocabulary true of `at` in `a` is true of
/// `bt` in `b`.
fn literals_transfer(a: &StageStructure, at: &[ElementId], b: &StageStructure, bt: &[ElementId]) -> bool {
    let vocab: BTreeSet<&Label> = a
        .elements
        .iter()
        .chain(&b.elements)
        .flat_map(|e| e.labels.iter())
        .collect();
    for i in 0..at.len() {
        for l in &vocab {
            if labels_of(a, at[i]).contains(*l) != labels_of(b, bt[i]).contains(*l) {
                return false;
            }
        }
        for j in 0..at.len() {
            if (at[i] == at[j]) != (bt[i] == bt[j]) {
                return false;
            }
        }
    }
    true
}

fn subsets(ids: &[ElementId]) -> Vec<Vec<ElementId>> {
    (0..1usize << ids.len())
        .map(|m| ids.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| *x).collect())
        .collect()
}

fn injective(ids: &[ElementId], k: usize) -> Vec<Vec<ElementId>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in ids.iter().enumerate() {
        let mut rest = ids.to_vec();
        rest.remove(i);
        for mut t in injective(&rest, k - 1) {
            t.insert(0, x);
            out.push(t);
        }
    }
    out
}

/// `(a, at) ≤ₙ (b, bt)` by exhaustive game search: the challenger extends
/// `bt` by any set of new elements of `b`, the responder answers with any
/// injective tuple of `a`, and the roles swap for `n - 1`.
pub fn brute_bf_leq(n: u32, a: &StageStructure, at: &[ElementId], b: &StageStructure, bt: &[ElementId]) -> bool {
    if !literals_transfer(a, at, b, bt) {
        return false;
    }
    if n == 0 {
        return true;
    }
    let b_free: Vec<ElementId> = b.elements.iter().map(|e| e.id).filter(|x| !bt.contains(x)).collect();
    let a_ids: Vec<ElementId> = a.elements.iter().map(|e| e.id).collect();
    subsets(&b_free).into_iter().all(|d| {
        let mut bd = bt.to_vec();
        bd.extend(&d);
        injective(&a_ids, d.len()).into_iter().any(|c| {
            let mut ac = at.to_vec();
            ac.extend(&c);
            brute_bf_leq(n - 1, b, &bd, a, &ac)
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Automorphisms as label-preserving permutations, found by trying all
/// permutations.
pub fn automorphisms(s: &StageStructure) -> Vec<BTreeMap<ElementId, ElementId>> {
    let ids: Vec<ElementId> = s.elements.iter().map(|e| e.id).collect();
    permutations(ids.len())
        .into_iter()
        .filter(|p| (0..ids.len()).all(|i| labels_of(s, ids[i]) == labels_of(s, ids[p[i]])))
        .map(|p| (0..ids.len()).map(|i| (ids[i], ids[p[i]])).collect())
        .collect()
}

/// Orbits of tuples of arity exactly `m` under [`automorphisms`].
pub fn brute_orbits(s: &StageStructure, m: usize) -> BTreeSet<BTreeSet<Vec<ElementId>>> {
    let auts = automorphisms(s);
    let mut ids: Vec<ElementId> = s.elements.iter().map(|e| e.id).collect();
    ids.sort();
    let mut tuples = vec![Vec::new()];
    for _ in 0..m {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<ElementId>| {
                ids.iter().map(move |x| {
                    let mut u = t.clone();
                    u.push(*x);
                    u
                })
            })
            .collect();
    }
    tuples
        .iter()
        .map(|t| auts.iter().map(|f| t.iter().map(|x| f[x]).collect()).collect())
        .collect()
}

/// Graph isomorphism by backtracking over vertex bijections, pruning on
/// degree and on adjacency with already-mapped vertices.
pub fn graphs_isomorphic(g: &[Vec<usize>], h: &[Vec<usize>]) -> bool {
    if g.len() != h.len() {
        return false;
    }
    let mut dg: Vec<usize> = g.iter().map(Vec::len).collect();
    let mut dh: Vec<usize> = h.iter().map(Vec::len).collect();
    dg.sort();
    dh.sort();
    if dg != dh {
        return false;
    }
    // Map vertices in BFS order so each new vertex has a mapped neighbor.
    let mut order = Vec::new();
    let mut seen = vec![false; g.len()];
    for root in 0..g.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &g[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; g.len()];
    let mut used = vec![false; h.len()];
    fn extend(g: &[Vec<usize>], h: &[Vec<usize>], order: &[usize], pos: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for c in 0..h.len() {
            if used[c] || h[c].len() != g[v].len() {
                continue;
            }
            let consistent = g[v].iter().all(|&w| map[w] == usize::MAX || h[c].contains(&map[w]))
                && g.iter().enumerate().all(|(u, nb)| {
                    map[u] == usize::MAX || nb.contains(&v) == h[map[u]].contains(&c)
                });
            if !consistent {
                continue;
            }
            map[v] = c;
            used[c] = true;
            if extend(g, h, order, pos + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[c] = false;
        }
        false
    }
    extend(g, h, &order, 0, &mut map, &mut used)
}
