mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scottlab_core::backforth::exists_atomic_check;
use scottlab_core::structure::{extends, extension_failures, is_isomorphic, omega_power};
use scottlab_core::{ElementId, Label, StageStructure};

use common::{automorphisms, label_pool, random_structure, structure_family};

fn shuffled(s: &StageStructure, rng: &mut ChaCha8Rng) -> StageStructure {
    let mut t = s.clone();
    t.elements.shuffle(rng);
    let mut ids: Vec<u64> = t.elements.iter().map(|e| e.id.0 + 100).collect();
    ids.shuffle(rng);
    for (e, id) in t.elements.iter_mut().zip(ids) {
        e.id = ElementId(id);
    }
    t
}

#[test]
fn isomorphism_is_an_equivalence_on_the_family() {
    let fam = structure_family(3, &[Label::ell(0), Label::ell(1)]);
    for (i, a) in fam.iter().enumerate() {
        for (j, b) in fam.iter().enumerate() {
            // The family has one member per isomorphism type.
            assert_eq!(is_isomorphic(a, b), i == j);
        }
    }
}

#[test]
fn omega_power_keeps_atomicity_on_small_family() {
    for s in structure_family(3, &[Label::ell(0), Label::ell(1), Label::dagger(0)]) {
        let base = exists_atomic_check(&s).atomic;
        for m in 1..=4 {
            let p = omega_power(&s, m).unwrap();
            assert_eq!(p.len(), s.len() * m as usize);
            p.validate().unwrap();
            assert_eq!(exists_atomic_check(&p).atomic, base);
        }
    }
}

#[test]
fn omega_power_of_zero_copies_is_rejected() {
    assert!(omega_power(&StageStructure::new(0), 0).is_err());
}

proptest! {
    #[test]
    fn canonical_form_ignores_ids_and_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 6, &label_pool());
        let t = shuffled(&s, &mut rng);
        prop_assert_eq!(s.canonical_form(), t.canonical_form());
        prop_assert!(is_isomorphic(&s, &t));
    }

    #[test]
    fn label_changes_break_isomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 5, &label_pool());
        prop_assume!(!s.is_empty());
        let mut t = s.clone();
        t.stage += 1;
        t.elements[0].labels.insert(Label::ell(99));
        prop_assert!(!is_isomorphic(&s, &t));
        prop_assert!(extends(&s, &t));
        let mut back = s.clone();
        back.stage += 2;
        prop_assert!(!extends(&t, &back));
        prop_assert_eq!(extension_failures(&t, &s), vec![t.elements[0].id]);
    }

    #[test]
    fn extends_is_strict_and_transitive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_structure(&mut rng, 4, &label_pool());
        let mut b = a.clone();
        b.stage += 1;
        if let Some(e) = b.elements.first_mut() {
            e.labels.insert(Label::ell(7));
        }
        let mut c = b.clone();
        c.stage += 1;
        c.elements.push(scottlab_core::ElementRecord::new(
            ElementId(1000),
            0,
            scottlab_core::Status::Active(None),
        ));
        prop_assert!(!extends(&a, &a));
        prop_assert!(extension_failures(&a, &a).is_empty());
        prop_assert!(extends(&a, &b) && extends(&b, &c) && extends(&a, &c));
    }

    #[test]
    fn automorphisms_preserve_canonical_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 4, &label_pool());
        for f in automorphisms(&s) {
            let mut t = s.clone();
            for e in &mut t.elements {
                e.id = f[&e.id];
            }
            prop_assert_eq!(t.canonical_form(), s.canonical_form());
        }
    }
}
