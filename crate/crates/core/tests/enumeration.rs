use std::collections::BTreeSet;

use proptest::prelude::*;
use ybe_core::enumerate::search::{diagonal_classes, run_unit, work_units};
use ybe_core::enumerate::{fast_enumerate, oracle_enumerate, CatalogRecord, EnumerationBudget};
use ybe_core::{Perm, PermGroup, Solution};

/// Class counts pinned after the first oracle-verified (n ≤ 4) and
/// invariant-verified (n ≥ 5) runs.
const CLASS_COUNTS: [usize; 7] = [1, 2, 5, 23, 88, 595, 3456];

fn classes(n: usize) -> Vec<Solution> {
    fast_enumerate(n, EnumerationBudget::default()).unwrap()
}

#[test]
fn fast_matches_oracle_up_to_four() {
    for n in 1..=4 {
        assert_eq!(classes(n), oracle_enumerate(n).unwrap(), "n = {n}");
    }
}

#[test]
fn frozen_class_counts() {
    for (i, &expected) in CLASS_COUNTS.iter().enumerate() {
        assert_eq!(classes(i + 1).len(), expected, "n = {}", i + 1);
    }
}

#[test]
fn one_point_enumeration() {
    assert_eq!(classes(1), vec![Solution::one_point()]);
}

#[test]
fn unit_order_does_not_matter() {
    for n in [5, 6] {
        let diag = diagonal_classes(n);
        let units = work_units(n, &diag);
        let mut forward = BTreeSet::new();
        let mut backward = BTreeSet::new();
        let mut total = 0;
        for u in &units {
            let out = run_unit(u, &diag, &|| false).unwrap();
            total += out.tables.len();
            forward.extend(out.tables);
        }
        for u in units.iter().rev() {
            backward.extend(run_unit(u, &diag, &|| false).unwrap().tables);
        }
        assert_eq!(forward, backward);
        // Each class is produced by exactly one unit, exactly once.
        assert_eq!(total, forward.len());
    }
}

#[test]
fn interrupt_aborts_search() {
    let diag = diagonal_classes(7);
    let units = work_units(7, &diag);
    let last = units
        .iter()
        .rev()
        .find(|u| u.first_choice.is_some())
        .unwrap();
    // The identity-diagonal units are the largest; one of them must poll.
    let interrupted = units
        .iter()
        .filter(|u| u.class == last.class)
        .any(|u| run_unit(u, &diag, &|| true).is_err());
    assert!(interrupted);
}

#[test]
fn oracle_solutions_have_bijective_diagonal() {
    // The search fixes x ↦ σ_x⁻¹(x) to a permutation; check that every
    // solution found by brute force has that property.
    for n in 1..=4 {
        for s in oracle_enumerate(n).unwrap() {
            let diag: Vec<usize> = (0..n).map(|x| s.sigma(x).inverse().apply(x)).collect();
            assert!(Perm::new(diag).is_ok(), "{:?}", s.rows());
        }
    }
}

#[test]
fn enumerated_tables_are_canonical_valid_solutions() {
    for n in 1..=6 {
        for s in classes(n) {
            assert!(s.validate().passes());
            assert_eq!(s.canonical_form().unwrap(), s);
        }
    }
}

#[test]
fn records_are_reproducible_and_consistent() {
    for n in 1..=5 {
        for s in classes(n) {
            let r = CatalogRecord::from_solution(&s).unwrap();
            assert_eq!(r.solution, s);
            assert_eq!(CatalogRecord::from_solution(&r.solution).unwrap(), r);
            if r.primitive {
                assert!(r.indecomposable);
            }
            assert_eq!(r.irretractable && n > 1, r.mpl.is_none());
        }
    }
}

#[test]
fn retracts_are_enumerated() {
    let catalog: Vec<BTreeSet<Solution>> =
        (1..=6).map(|n| classes(n).into_iter().collect()).collect();
    for n in 1..=6 {
        for s in &catalog[n - 1] {
            let r = s.retract().unwrap().canonical_form().unwrap();
            assert!(catalog[r.n() - 1].contains(&r));
        }
    }
}

#[test]
fn indecomposable_iff_single_orbit() {
    for n in 1..=5 {
        for s in classes(n) {
            let g = PermGroup::of_solution(&s).unwrap();
            assert_eq!(s.is_indecomposable(), g.orbits().len() == 1);
        }
    }
}

fn arb_relabeled() -> impl Strategy<Value = (Solution, Perm)> {
    let pool: Vec<Solution> = (2..=5).flat_map(classes).collect();
    (0..pool.len()).prop_flat_map(move |i| {
        let s = pool[i].clone();
        let n = s.n();
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |f| (s.clone(), Perm::new(f).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_relabeling_invariant((s, f) in arb_relabeled()) {
        let t = s.relabel(&f).unwrap();
        prop_assert!(t.validate().passes());
        prop_assert_eq!(t.canonical_form().unwrap(), s.clone());
        prop_assert!(t.is_isomorphic(&s).unwrap());
        prop_assert_eq!(t.invariants(), s.invariants());
    }

    #[test]
    fn involutivity_pointwise((s, f) in arb_relabeled()) {
        let s = s.relabel(&f).unwrap();
        for x in 0..s.n() {
            for y in 0..s.n() {
                let (u, v) = s.r(x, y).unwrap();
                prop_assert_eq!(u, s.sigma(x).apply(y));
                prop_assert_eq!(s.r(u, v).unwrap(), (x, y));
            }
        }
    }

    #[test]
    fn sigma_classes_move_with_the_group((s, f) in arb_relabeled()) {
        let s = s.relabel(&f).unwrap();
        let part = s.sigma_class_blocks().unwrap();
        let g = PermGroup::of_solution(&s).unwrap();
        for elem in g.elements() {
            for class in &part.classes {
                let image: BTreeSet<usize> = class.iter().map(|&x| elem.apply(x)).collect();
                let target = &part.classes[part.class_of[elem.apply(class[0])]];
                prop_assert_eq!(image, target.iter().copied().collect::<BTreeSet<_>>());
            }
        }
    }
}
