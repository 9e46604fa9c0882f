use ybe_core::enumerate::{fast_enumerate, EnumerationBudget};
use ybe_core::{FiniteBrace, Solution};

/// Retractable classes whose brace has trivial socle, grouped by n.
fn converse_failures(n: usize) -> Vec<(Solution, usize)> {
    fast_enumerate(n, EnumerationBudget::default())
        .unwrap()
        .into_iter()
        .filter_map(|s| {
            let b = FiniteBrace::from_solution(&s).unwrap();
            let trivial_socle = b.socle().len() == 1;
            if s.is_irretractable() {
                assert!(trivial_socle, "{:?}", s.rows());
                None
            } else if trivial_socle {
                Some((s, b.order()))
            } else {
                None
            }
        })
        .collect()
}

/// Irretractable solutions have trivial socle, but the converse fails: the
/// trivial solution is retractable with a one-element brace, and from n = 6
/// on there are retractable classes with a non-trivial group and trivial
/// socle.
#[test]
fn trivial_socle_does_not_imply_irretractable() {
    let mut nontrivial = Vec::new();
    for n in 2..=6 {
        for (s, order) in converse_failures(n) {
            if order == 1 {
                assert_eq!(s, Solution::trivial(n));
            } else {
                nontrivial.push((n, order));
            }
        }
    }
    // Regression value from the first run.
    assert_eq!(nontrivial, vec![(6, 8); 16]);
}
