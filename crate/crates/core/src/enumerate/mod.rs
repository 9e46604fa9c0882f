//! Exhaustive enumeration, the single-solution analysis pipeline and the
//! classification of primitive solutions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::brace::{permutational_isomorphism_check, FiniteBrace};
use crate::group::PermGroup;
use crate::solution::{Solution, ValidationReport, CANONICAL_MAX_N};
use crate::{is_prime, Error, Result};

mod oracle;
pub mod search;

pub use oracle::{oracle_enumerate, ORACLE_MAX_N};

/// Sizes enumerated without any opt-in.
pub const DEFAULT_MAX_N: usize = 7;
/// Hard upper bound for the enumerator.
pub const LARGE_MAX_N: usize = 8;

/// Which sizes the enumerator may attempt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Permit `n = 8`.
    pub allow_large: bool,
}

impl EnumerationBudget {
    pub fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            Err(Error::EmptyDomain)
        } else if n > LARGE_MAX_N {
            Err(Error::SizeTooLarge {
                n,
                max: LARGE_MAX_N,
            })
        } else if n > DEFAULT_MAX_N && !self.allow_large {
            Err(Error::BudgetExceeded { n })
        } else {
            Ok(())
        }
    }
}

/// Every isomorphism class of solutions of size `n`, as canonical forms in
/// increasing order. Single-threaded; see the `ybekit` crate for the
/// parallel driver over the same work units.
pub fn fast_enumerate(n: usize, budget: EnumerationBudget) -> Result<Vec<Solution>> {
    budget.check(n)?;
    let classes = search::diagonal_classes(n);
    let mut found: BTreeSet<Vec<u8>> = BTreeSet::new();
    for unit in search::work_units(n, &classes) {
        let outcome = search::run_unit(&unit, &classes, &|| false)?;
        found.extend(outcome.tables);
    }
    Ok(found.iter().map(|t| Solution::from_flat(n, t)).collect())
}

/// Stored summary of one isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogRecord {
    /// Canonical representative.
    pub solution: Solution,
    pub indecomposable: bool,
    pub irretractable: bool,
    pub primitive: bool,
    /// Multipermutation level, `None` if not a multipermutation solution.
    pub mpl: Option<usize>,
    pub group_order: usize,
    pub brace_trivial: bool,
}

impl CatalogRecord {
    /// Canonicalizes `s` and computes every flag. `s` must be a solution.
    pub fn from_solution(s: &Solution) -> Result<Self> {
        if !s.validate().passes() {
            return Err(Error::InvalidSolution);
        }
        let solution = s.canonical_form()?;
        let group = PermGroup::of_solution(&solution)?;
        let brace = FiniteBrace::from_solution(&solution)?;
        Ok(CatalogRecord {
            indecomposable: solution.is_indecomposable(),
            irretractable: solution.is_irretractable(),
            primitive: group.is_primitive(),
            mpl: solution.multipermutation_level()?,
            group_order: group.order(),
            brace_trivial: brace.is_trivial_brace(),
            solution,
        })
    }

    pub fn n(&self) -> usize {
        self.solution.n()
    }
}

/// Pass/fail of the structural invariants checked for one solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantChecks {
    /// `λ_g(σ_x) = σ_{g(x)}` for all `g`, `x`.
    pub lambda_equivariance: bool,
    pub brace_axiom: bool,
    pub additive_identities: bool,
    pub lambda_action: bool,
    pub socle_is_lambda_kernel: bool,
    pub socle_is_ideal: bool,
    /// σ-classes are permuted by the group.
    pub sigma_classes_invariant: bool,
    pub group_solvable: bool,
    pub associated_solution_valid: bool,
    /// Only evaluated for irretractable solutions.
    pub permutational_isomorphism: Option<bool>,
}

impl InvariantChecks {
    pub fn all_pass(&self) -> bool {
        self.lambda_equivariance
            && self.brace_axiom
            && self.additive_identities
            && self.lambda_action
            && self.socle_is_lambda_kernel
            && self.socle_is_ideal
            && self.sigma_classes_invariant
            && self.group_solvable
            && self.associated_solution_valid
            && self.permutational_isomorphism.unwrap_or(true)
    }
}

/// Full single-solution report. `record` and `checks` are absent when the
/// table fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub validation: ValidationReport,
    pub record: Option<CatalogRecord>,
    pub checks: Option<InvariantChecks>,
}

/// Validates `s`, then computes its record and runs the invariant suite.
pub fn analyze(s: &Solution) -> Result<Analysis> {
    let validation = s.validate();
    if !validation.passes() {
        return Ok(Analysis {
            validation,
            record: None,
            checks: None,
        });
    }
    if s.n() > CANONICAL_MAX_N {
        return Err(Error::SizeTooLarge {
            n: s.n(),
            max: CANONICAL_MAX_N,
        });
    }
    let record = CatalogRecord::from_solution(s)?;
    let brace = FiniteBrace::from_solution(s)?;
    let group = PermGroup::of_solution(s)?;
    let socle = brace.socle();
    let checks = InvariantChecks {
        lambda_equivariance: brace.lambda_equivariance_check(),
        brace_axiom: brace.check_brace_axiom(),
        additive_identities: brace.additive_identities_check(),
        lambda_action: brace.lambda_is_action(),
        socle_is_lambda_kernel: socle == brace.lambda_kernel(),
        socle_is_ideal: brace.is_ideal(&socle),
        sigma_classes_invariant: s.sigma_class_blocks().is_ok(),
        group_solvable: group.is_solvable()?,
        associated_solution_valid: brace.associated_solution().validate().passes(),
        permutational_isomorphism: if s.is_irretractable() {
            Some(permutational_isomorphism_check(s)?)
        } else {
            None
        },
    };
    Ok(Analysis {
        validation,
        record: Some(record),
        checks: Some(checks),
    })
}

/// Primitive classes found at one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRow {
    pub n: usize,
    /// Number of isomorphism classes at this size.
    pub classes: usize,
    /// Canonical forms of the primitive classes.
    pub primitive: Vec<Solution>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub rows: Vec<ClassificationRow>,
}

impl ClassificationReport {
    pub fn primitive_counts(&self) -> Vec<(usize, usize)> {
        self.rows.iter().map(|r| (r.n, r.primitive.len())).collect()
    }
}

/// Enumerates sizes `2..=n_max` with `enumerate` and keeps the primitive
/// classes. Composite sizes must have none; a prime size `p` must have
/// exactly one, with every `σ_x` the same `p`-cycle and cyclic group of
/// order `p`. Anything else is a [`Error::ShapeViolation`].
pub fn classify_primitive_with<F>(n_max: usize, mut enumerate: F) -> Result<ClassificationReport>
where
    F: FnMut(usize) -> Result<Vec<Solution>>,
{
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let classes = enumerate(n)?;
        let mut primitive = Vec::new();
        for s in &classes {
            if PermGroup::of_solution(s)?.is_primitive() {
                primitive.push(s.clone());
            }
        }
        check_shape(n, &primitive)?;
        rows.push(ClassificationRow {
            n,
            classes: classes.len(),
            primitive,
        });
    }
    Ok(ClassificationReport { rows })
}

/// [`classify_primitive_with`] using the sequential enumerator.
pub fn classify_primitive(n_max: usize, budget: EnumerationBudget) -> Result<ClassificationReport> {
    classify_primitive_with(n_max, |n| fast_enumerate(n, budget))
}

fn check_shape(n: usize, primitive: &[Solution]) -> Result<()> {
    let violation = |detail| Err(Error::ShapeViolation { n, detail });
    if !is_prime(n) {
        if primitive.is_empty() {
            return Ok(());
        }
        return violation(format!(
            "{} primitive classes at composite size",
            primitive.len()
        ));
    }
    if primitive.len() != 1 {
        return violation(format!(
            "{} primitive classes at prime size",
            primitive.len()
        ));
    }
    let s = &primitive[0];
    let first = s.sigma(0);
    if s.sigmas().iter().any(|p| p != first) {
        return violation("left actions are not all equal".into());
    }
    if first.cycle_type() != [n] {
        return violation(format!(
            "left action has cycle type {:?}",
            first.cycle_type()
        ));
    }
    let group = PermGroup::of_solution(s)?;
    if group.order() != n || !group.is_cyclic() {
        return violation(format!(
            "group of order {} is not cyclic of order {n}",
            group.order()
        ));
    }
    if *s != Solution::cyclic(n).canonical_form()? {
        return violation("representative differs from the cyclic permutation solution".into());
    }
    Ok(())
}
