//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The randomized parts take a seed from `--seed N` or `SCOTTLAB_SEED`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scottlab::bundle::{construct, run_bundled, BundledRun, RunKind, BUNDLED};
use scottlab::format::builtin_theta;
use scottlab::mutation::mutation_suite;
use scottlab_core::backforth::{
    bf_leq, exists_atomic_check, literal_pool, orbits, scott_family_pi2, scott_family_sigma1,
    TupleInStructure,
};
use scottlab_core::constructions::{
    build_b_along_path, enumerate_trees, generate_tree_scott_sentence, run_tree, ExplicitTree, PathRule,
    StageFlag, Tree, TreeConfig,
};
use scottlab_core::formula::{
    classify, evaluate, evaluate_witnessed, parse, CompiledFormula, Connective, Formula, FormulaFamily, Model,
    Vocabulary,
};
use scottlab_core::structure::{canonical_form, is_isomorphic, omega_power};
use scottlab_core::{Designation, ElementId, Label, LabelIndex, StageStructure};

use common::{
    brute_bf_leq, brute_orbits, corpus, corpus_lines, label_pool, limit_labels, limit_structure, naive_eval,
    random_sentence, random_structure, structure_family,
};

const DEFAULT_SEED: u64 = 20_241_015;
const TREE_NODES: usize = 10;
const TREE_BRANCHING: usize = 3;
const TREE_BUDGET: u64 = 200;
const MUTATION_BUDGET: usize = 20;

type Outcome = Result<String, String>;

fn seed() -> u64 {
    let args: Vec<String> = std::env::args().collect();
    let from_args = args
        .windows(2)
        .find(|w| w[0] == "--seed")
        .and_then(|w| w[1].parse().ok());
    from_args
        .or_else(|| std::env::var("SCOTTLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_SEED)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// Atomic exactly when no element's label set is strictly contained in
/// another's.
fn atomic_oracle(s: &StageStructure) -> bool {
    s.elements.iter().all(|e| {
        s.elements
            .iter()
            .all(|f| !(e.labels.len() < f.labels.len() && e.labels.is_subset(&f.labels)))
    })
}

fn c_labels(b: &StageStructure) -> Option<&BTreeSet<Label>> {
    b.designated(&Designation::C).map(|c| &c.labels)
}

fn trivial_family() -> FormulaFamily {
    FormulaFamily::explicit(Connective::Conjunctive, vec![parse("A x. E y. x = y").unwrap()])
}

/// Fixed points of every small tree, shared by criteria 5, 8 and 10.
struct TreeFamily {
    trees: Vec<ExplicitTree>,
    finals: Vec<StageStructure>,
    /// Trees whose run did not halt within the budget.
    unfinished: Vec<usize>,
}

fn tree_family() -> TreeFamily {
    let theta = trivial_family();
    let trees = enumerate_trees(TREE_NODES, TREE_BRANCHING);
    let mut finals = Vec::with_capacity(trees.len());
    let mut unfinished = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        let trace = run_tree(&Tree::Explicit(t.clone()), &theta, &TreeConfig::new(TREE_BUDGET))
            .expect("tree runs accept the trivial theta");
        if trace.len() as u64 > TREE_BUDGET {
            unfinished.push(i);
        }
        finals.push(trace.last().expect("non-empty trace").a.clone());
    }
    TreeFamily {
        trees,
        finals,
        unfinished,
    }
}

fn criterion_1(runs: &[BundledRun], elapsed: Duration) -> Outcome {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for run in runs {
        for (a, b) in run.pairs() {
            pairs += 1;
            if canonical_form(a) != canonical_form(b) {
                bad.push(format!("{} stage {}", run.spec.name, a.stage));
            }
        }
    }
    check(bad.is_empty(), || format!("{} of {pairs} stages differ, first {}", bad.len(), bad[0]))?;
    check(elapsed <= Duration::from_secs(60), || format!("bundled runs took {}", secs(elapsed)))?;
    let without: Vec<&str> = runs.iter().filter(|r| r.pairs().is_empty()).map(|r| r.spec.name).collect();
    Ok(format!(
        "{pairs} stage pairs over {} runs agree, {} (no companion: {})",
        runs.len(),
        secs(elapsed),
        without.join(", ")
    ))
}

fn criterion_2(runs: &[BundledRun]) -> Outcome {
    let mut checked = 0;
    for run in runs {
        for r in &run.trace.records {
            let snaps = std::iter::once(&r.a).chain(r.b.as_ref());
            for s in snaps {
                checked += 1;
                let report = exists_atomic_check(s);
                check(report.atomic && atomic_oracle(s), || {
                    format!("{} stage {}: witnesses {:?}", run.spec.name, r.stage, report.witnesses)
                })?;
            }
        }
        for b in run.path_b.iter().flatten() {
            checked += 1;
            check(exists_atomic_check(b).atomic && atomic_oracle(b), || {
                format!("{} companion stage {}", run.spec.name, b.stage)
            })?;
        }
    }
    Ok(format!("{checked} snapshots atomic"))
}

fn bundled<'a>(runs: &'a [BundledRun], name: &str) -> &'a BundledRun {
    runs.iter().find(|r| r.spec.name == name).expect("bundled run")
}

fn criterion_3(runs: &[BundledRun]) -> Outcome {
    let trace = &bundled(runs, "warmup-trivial").trace;
    check(trace.len() == 201, || format!("trivial run has {} records", trace.len()))?;
    check(trace.records[1..].iter().all(|r| r.flag == StageFlag::Expansionary), || {
        "trivial run has a non-expansionary stage".into()
    })?;
    let c_at = |s: usize| c_labels(trace.records[s].b.as_ref().unwrap()).unwrap();
    check(c_at(200).len() > c_at(100).len(), || {
        format!("c has {} labels at 100 and {} at 200", c_at(100).len(), c_at(200).len())
    })?;
    for i in 1..=20 {
        let d = Designation::A(LabelIndex::Nat(i));
        let early = trace.records[100].a.designated(&d).map(|e| &e.labels);
        let late = trace.records[200].a.designated(&d).map(|e| &e.labels);
        check(early.is_some() && early == late, || format!("a_{i} changed between 100 and 200"))?;
    }

    let trace = &bundled(runs, "warmup-unsat-at-3").trace;
    let index = 3;
    let mut prev_k = 0;
    for r in &trace.records {
        check(!(r.flag == StageFlag::Expansionary && prev_k >= index), || {
            format!("expansionary stage {} after index {index} was reached", r.stage)
        })?;
        prev_k = r.k;
    }
    let last = trace.last().unwrap();
    check((trace.len() as u64) < 201, || "unsatisfiable run did not halt".into())?;
    check(is_isomorphic(&last.a, last.b.as_ref().unwrap()), || "final A and B differ".into())?;
    Ok(format!(
        "c grew {} -> {} labels, a_1..a_20 frozen; unsat run halted at stage {}",
        c_at(100).len(),
        c_at(200).len(),
        last.stage
    ))
}

fn criterion_4() -> Outcome {
    let theta = builtin_theta("pi3-always-attention").map_err(|e| e.to_string())?;
    let trace = construct(RunKind::Pi3, &theta, None, 500).map_err(|e| e.to_string())?;
    check(trace.len() == 501, || format!("{} records", trace.len()))?;
    let (t, first) = trace
        .records
        .iter()
        .find_map(|r| r.init.clone().map(|k| (r.stage as usize, k)))
        .ok_or("no requirement was initialized")?;
    let n_t = trace.records[t].n;
    let firings: Vec<_> = trace.records.iter().filter(|r| r.acting.as_ref() == Some(&first)).collect();
    check(firings.len() >= 5, || format!("first requirement fired {} times", firings.len()))?;
    for r in &firings {
        check(r.n == n_t, || format!("stage {}: n = {} but n at initialization = {n_t}", r.stage, r.n))?;
    }
    for r in &trace.records {
        check(is_isomorphic(&r.a, r.b.as_ref().unwrap()), || format!("A and B differ at stage {}", r.stage))?;
    }

    let theta = builtin_theta("pi3-never-attention").map_err(|e| e.to_string())?;
    let trace = construct(RunKind::Pi3, &theta, None, 300).map_err(|e| e.to_string())?;
    let c_at = |s: usize| c_labels(trace.records[s].b.as_ref().unwrap()).unwrap();
    let (c1, c2, c3) = (c_at(100), c_at(200), c_at(300));
    let strict = |x: &BTreeSet<Label>, y: &BTreeSet<Label>| x.is_subset(y) && x.len() < y.len();
    check(strict(c1, c2) && strict(c2, c3), || {
        format!("c label counts {} / {} / {}", c1.len(), c2.len(), c3.len())
    })?;
    Ok(format!(
        "first requirement fired {} times, each back to n = {n_t}; c grew {} < {} < {}",
        firings.len(),
        c1.len(),
        c2.len(),
        c3.len()
    ))
}

fn compiled(f: &Formula) -> (CompiledFormula, Vocabulary) {
    let mut vocab = Vocabulary::new();
    let c = CompiledFormula::compile(f, &mut vocab);
    (c, vocab)
}

fn holds(c: &CompiledFormula, vocab: &Vocabulary, s: &StageStructure) -> bool {
    c.eval_at(&Model::new(s, vocab), None, &[])
}

fn criterion_5(fam: &TreeFamily) -> Outcome {
    check(fam.unfinished.is_empty(), || format!("{} runs reached no fixed point", fam.unfinished.len()))?;
    let mut mutants = 0;
    let mut non_iso = 0;
    let mut cross = 0u64;
    for (i, (t, a)) in fam.trees.iter().zip(&fam.finals).enumerate() {
        let name = || format!("{:?}", t.nodes());
        check(is_isomorphic(a, &limit_structure(t)), || format!("{}: fixed point is not the limit", name()))?;
        for e in &a.elements {
            let Some(Designation::A(LabelIndex::Seq(sigma))) = e.status.designation() else {
                return Err(format!("{}: undesignated element {:?}", name(), e.id));
            };
            check(e.labels == limit_labels(sigma, !t.is_leaf(sigma)), || {
                format!("{}: a_{sigma:?} has the wrong labels", name())
            })?;
        }
        let psi = generate_tree_scott_sentence(t);
        let (c, vocab) = compiled(&psi);
        check(holds(&c, &vocab, a), || format!("{}: sentence fails on its own structure", name()))?;

        let suite = mutation_suite(a, MUTATION_BUDGET);
        for m in &suite.mutants {
            mutants += 1;
            let iso = is_isomorphic(a, &m.structure);
            non_iso += usize::from(!iso);
            check(m.expected_iso == iso, || format!("{}: mislabeled mutant {}", name(), m.description))?;
            check(holds(&c, &vocab, &m.structure) == iso, || {
                format!("{}: sentence disagrees on mutant {}", name(), m.description)
            })?;
        }
        for (j, other) in fam.finals.iter().enumerate() {
            if i != j {
                cross += 1;
                check(!holds(&c, &vocab, other), || {
                    format!("{}: sentence holds on the structure of {:?}", name(), fam.trees[j].nodes())
                })?;
            }
        }
    }
    Ok(format!(
        "{} trees at fixed points; {mutants} mutants ({non_iso} non-iso) and {cross} cross pairs agree",
        fam.trees.len()
    ))
}

fn criterion_6() -> Outcome {
    let tree = Tree::OmegaPath;
    let trace = run_tree(&tree, &trivial_family(), &TreeConfig::new(100)).map_err(|e| e.to_string())?;
    check(trace.len() == 101, || format!("{} records", trace.len()))?;
    let bs = build_b_along_path(&trace, Some(&tree), &PathRule::zeros()).map_err(|e| e.to_string())?;
    let mut last = 0;
    for (r, b) in trace.records.iter().zip(&bs) {
        let ts = r.tree.as_ref().ok_or("tree run without T_s")?;
        let len = (0..).find(|&m| !ts.contains(&vec![0; m + 1])).unwrap();
        check(len >= last, || format!("path shrank at stage {}", r.stage))?;
        last = len;
        check(is_isomorphic(&r.a, b), || format!("A and B differ at stage {}", r.stage))?;
        check(c_labels(b) == Some(&limit_labels(&vec![0; len], false)), || {
            format!("c is not the chain below 0^{len} at stage {}", r.stage)
        })?;
    }
    check(last >= 5, || format!("path reached length {last}"))?;
    Ok(format!("path length reached {last}; B and c match at all {} stages", bs.len()))
}

fn leq(n: u32, a: &StageStructure, b: &StageStructure) -> bool {
    bf_leq(n, TupleInStructure::whole(a), TupleInStructure::whole(b)).expect("sentences only")
}

fn criterion_7() -> Outcome {
    let pool = [Label::ell(0), Label::ell(1), Label::ell(2)];
    let fam = structure_family(4, &pool);
    let mut pairs = 0;
    for a in &fam {
        for b in &fam {
            for n in 0..=3 {
                pairs += 1;
                check(leq(n, a, b) == brute_bf_leq(n, a, &[], b, &[]), || {
                    format!("disagree at n = {n} on {:?} vs {:?}", a.canonical_form(), b.canonical_form())
                })?;
            }
        }
    }

    let corpus = corpus();
    let small = structure_family(3, &[Label::ell(0), Label::ell(1), Label::dagger(0)]);
    let env = BTreeMap::new();
    let truth: Vec<Vec<bool>> = small
        .iter()
        .map(|s| corpus.iter().map(|f| evaluate(f, s, &env).unwrap()).collect())
        .collect();
    let classes: Vec<_> = corpus.iter().map(classify).collect();
    let mut transfers = 0;
    for (i, a) in small.iter().enumerate() {
        for (j, b) in small.iter().enumerate() {
            for n in 0..=4 {
                if !leq(n, a, b) {
                    continue;
                }
                for (k, c) in classes.iter().enumerate() {
                    if c.is_pi_at_most(n) && truth[i][k] {
                        transfers += 1;
                        check(truth[j][k], || format!("{} does not transfer at n = {n}", corpus[k]))?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} game instances over {} structures agree; {transfers} corpus transfers hold",
        fam.len()
    ))
}

/// Elements grouped by label set, which is what automorphisms preserve here.
fn label_orbits(s: &StageStructure) -> BTreeSet<BTreeSet<ElementId>> {
    let mut by: BTreeMap<&BTreeSet<Label>, BTreeSet<ElementId>> = BTreeMap::new();
    for e in &s.elements {
        by.entry(&e.labels).or_default().insert(e.id);
    }
    by.into_values().collect()
}

fn satisfiers(f: &Formula, s: &StageStructure) -> BTreeSet<ElementId> {
    s.ids()
        .filter(|&id| naive_eval(f, s, &mut BTreeMap::from([("x0".to_string(), id)]), None))
        .collect()
}

fn criterion_8(fam: &TreeFamily) -> Outcome {
    for s in structure_family(4, &[Label::ell(0), Label::ell(1)]) {
        for m in 1..=2 {
            let fast: BTreeSet<BTreeSet<Vec<ElementId>>> =
                orbits(&s, m).of_arity(m).map(|c| c.iter().cloned().collect()).collect();
            check(fast == brute_orbits(&s, m), || format!("orbits differ on {:?}", s.canonical_form()))?;
        }
    }
    let mut orbit_count = 0;
    for s in &fam.finals {
        let expected = label_orbits(s);
        let got: BTreeSet<BTreeSet<ElementId>> = orbits(s, 1)
            .of_arity(1)
            .map(|c| c.iter().map(|t| t[0]).collect())
            .collect();
        check(got == expected, || format!("orbits wrong on {:?}", s.canonical_form()))?;
        let pool = literal_pool(s, 1);
        let pi2 = scott_family_pi2(s, &pool, 1).map_err(|e| format!("{e:?}"))?;
        let sigma1 = scott_family_sigma1(s, &pool, 1).map_err(|e| format!("{e:?}"))?;
        check(pi2.len() == expected.len() && sigma1.len() == expected.len(), || {
            "family size differs from orbit count".into()
        })?;
        for e in &pi2 {
            orbit_count += 1;
            let orbit: BTreeSet<ElementId> = e.orbit.iter().map(|t| t[0]).collect();
            check(e.isolating && satisfiers(&e.formula, s) == orbit, || {
                format!("pi2 entry {} does not isolate {orbit:?}", e.formula)
            })?;
        }
        for e in &sigma1 {
            let orbit: BTreeSet<ElementId> = e.orbit.iter().map(|t| t[0]).collect();
            let f = e.formula.as_ref().ok_or_else(|| format!("no sigma1 formula for {orbit:?}"))?;
            check(e.isolating && satisfiers(f, s) == orbit, || {
                format!("sigma1 entry {f} does not isolate {orbit:?}")
            })?;
        }
    }
    Ok(format!(
        "{orbit_count} orbits over {} fixed points isolated by both families",
        fam.finals.len()
    ))
}

fn criterion_9(seed: u64) -> Outcome {
    let lines = corpus_lines();
    check(lines.len() == 50, || format!("corpus has {} sentences", lines.len()))?;
    for line in &lines {
        let f = parse(line).map_err(|e| format!("{line}: {e:?}"))?;
        check(parse(&f.to_string()).ok() == Some(f.clone()), || format!("{line} does not round-trip"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let f = random_sentence(&mut rng, 5);
        let printed = f.to_string();
        check(parse(&printed).ok() == Some(f), || format!("{printed} does not round-trip"))?;
    }
    let pool = label_pool();
    for _ in 0..200 {
        let f = random_sentence(&mut rng, 5);
        let s = random_structure(&mut rng, 5, &pool);
        let fast = evaluate(&f, &s, &BTreeMap::new()).map_err(|e| format!("{e:?}"))?;
        check(fast == naive_eval(&f, &s, &mut BTreeMap::new(), None), || format!("{f} disagrees"))?;
    }
    let sigma1: Vec<Formula> = corpus().into_iter().filter(|f| classify(f).is_sigma_at_most(1)).collect();
    let env = BTreeMap::new();
    for _ in 0..60 {
        let s = random_structure(&mut rng, 6, &pool);
        for f in &sigma1 {
            let mut prev = false;
            for bound in 0..=s.len() + 1 {
                let now = evaluate_witnessed(f, &s, bound, &env).map_err(|e| format!("{e:?}"))?;
                check(!prev || now, || format!("{f} lost truth at bound {bound}"))?;
                prev = now;
            }
        }
    }
    Ok(format!(
        "50 corpus + 500 random round trips, 200 naive pairs, {} sigma1 sentences monotone (seed {seed})",
        sigma1.len()
    ))
}

fn criterion_10(fam: &TreeFamily) -> Outcome {
    let mut atomic = 0;
    for s in &fam.finals {
        let base = exists_atomic_check(s).atomic;
        atomic += usize::from(base);
        for m in 1..=4 {
            let p = omega_power(s, m).map_err(|e| format!("{e:?}"))?;
            check(exists_atomic_check(&p).atomic == base, || {
                format!("{m} copies of {:?} change atomicity", s.canonical_form())
            })?;
        }
    }
    Ok(format!("{} fixed points ({atomic} atomic) keep atomicity for 1..4 copies", fam.finals.len()))
}

fn main() -> ExitCode {
    let seed = seed();
    let start = Instant::now();
    let mut failed = false;
    let mut lap = Instant::now();
    let mut report = |n: u32, outcome: Outcome| {
        let took = secs(lap.elapsed());
        lap = Instant::now();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS: {detail} [{took}]"),
            Err(detail) => {
                failed = true;
                println!("criterion {n} FAIL: {detail} [{took}]");
            }
        }
    };

    let t = Instant::now();
    let runs: Result<Vec<BundledRun>, String> = BUNDLED
        .iter()
        .map(|spec| run_bundled(spec, spec.stages).map_err(|e| format!("{}: {e}", spec.name)))
        .collect();
    let elapsed = t.elapsed();
    match &runs {
        Ok(runs) => {
            report(1, criterion_1(runs, elapsed));
            report(2, criterion_2(runs));
            report(3, criterion_3(runs));
        }
        Err(e) => {
            for n in 1..=3 {
                report(n, Err(e.clone()));
            }
        }
    }
    report(4, criterion_4());
    let fam = tree_family();
    report(5, criterion_5(&fam));
    report(6, criterion_6());
    report(7, criterion_7());
    report(8, criterion_8(&fam));
    report(9, criterion_9(seed));
    report(10, criterion_10(&fam));
    println!("acceptance finished in {}", secs(start.elapsed()));
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
