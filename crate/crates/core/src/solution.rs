//! Solutions `r(x, y) = (σ_x(y), γ_y(x))` on `X = {0, …, n-1}`.
//!
//! Only the left actions `σ_x` are stored. The right actions are derived on
//! demand as `γ_y(x) = σ⁻¹_{σ_x(y)}(x)`, which is the form they must take in
//! any involutive solution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::{LexPermutations, Perm};
use crate::{Error, Result};

/// Largest set size accepted by [`Solution::canonical_form`]; the sweep
/// visits all `n!` relabelings.
pub const CANONICAL_MAX_N: usize = 10;

/// A candidate solution: `sigma[x]` is `σ_x`.
///
/// Construction only checks that every `σ_x` is a permutation of the right
/// degree. Whether the table satisfies the axioms is answered by
/// [`Solution::validate`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Solution {
    sigma: Vec<Perm>,
}

/// Outcome of checking the three solution axioms independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub involutive: bool,
    pub nondegenerate: bool,
    pub braid: bool,
    /// First pair `(x, y)` with `r(r(x, y)) != (x, y)`.
    pub involutive_counterexample: Option<(usize, usize)>,
    /// First `y` whose `γ_y` is not a bijection.
    pub nondegenerate_counterexample: Option<usize>,
    /// First triple on which the two sides of the braid relation differ.
    pub braid_counterexample: Option<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.involutive && self.nondegenerate && self.braid
    }
}

/// Partition of `X` by equality of `σ_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaClassPartition {
    /// Classes ordered by their least element; each class is sorted.
    pub classes: Vec<Vec<usize>>,
    /// `class_of[x]` indexes into `classes`.
    pub class_of: Vec<usize>,
}

impl SigmaClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

/// Isomorphism invariants used to reject non-isomorphic pairs before the
/// canonical-form sweep.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsoInvariants {
    pub n: usize,
    /// Multiset of the cycle types of the `σ_x`, sorted.
    pub cycle_types: Vec<Vec<usize>>,
    /// Sizes of the σ-classes, sorted.
    pub class_sizes: Vec<usize>,
}

impl Solution {
    pub fn new(sigma: Vec<Perm>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        for s in &sigma {
            if s.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: s.degree(),
                });
            }
        }
        Ok(Solution { sigma })
    }

    /// Builds a table from raw image rows, checking each is a permutation.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let sigma = rows
            .into_iter()
            .enumerate()
            .map(|(x, row)| {
                Perm::new(row).map_err(|e| match e {
                    Error::NotAPermutation(msg) => {
                        Error::NotAPermutation(format!("sigma[{x}]: {msg}"))
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Solution::new(sigma)
    }

    pub(crate) fn from_perms_unchecked(sigma: Vec<Perm>) -> Self {
        debug_assert!(Solution::new(sigma.clone()).is_ok());
        Solution { sigma }
    }

    /// `σ_x = id` for every `x`, i.e. `r(x, y) = (y, x)`.
    pub fn trivial(n: usize) -> Self {
        Solution {
            sigma: vec![Perm::identity(n); n],
        }
    }

    pub fn one_point() -> Self {
        Solution::trivial(1)
    }

    /// The permutation solution `σ_x = π` for all `x`.
    pub fn permutation(pi: Perm) -> Self {
        let n = pi.degree();
        Solution { sigma: vec![pi; n] }
    }

    /// The permutation solution of the `n`-cycle `i ↦ i + 1`.
    pub fn cyclic(n: usize) -> Self {
        Solution::permutation(Perm::rotation(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    #[inline]
    pub fn sigma(&self, x: usize) -> &Perm {
        &self.sigma[x]
    }

    pub fn sigmas(&self) -> &[Perm] {
        &self.sigma
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.sigma.iter().map(|p| p.images().to_vec()).collect()
    }

    fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.n() {
            Err(Error::PointOutOfRange {
                point: p,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    /// `γ_y(x) = σ⁻¹_{σ_x(y)}(x)`.
    pub fn gamma(&self, y: usize, x: usize) -> Result<usize> {
        self.check_point(x)?;
        self.check_point(y)?;
        let u = self.sigma[x].apply(y);
        Ok(self.sigma[u].inverse().apply(x))
    }

    /// `r(x, y)`.
    pub fn r(&self, x: usize, y: usize) -> Result<(usize, usize)> {
        Ok((self.sigma(x).try_apply(y)?, self.gamma(y, x)?))
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let tables = Tables::new(self);
        let r = |x: usize, y: usize| tables.r(x, y);

        let mut involutive_counterexample = None;
        'inv: for x in 0..n {
            for y in 0..n {
                let (a, b) = r(x, y);
                if r(a, b) != (x, y) {
                    involutive_counterexample = Some((x, y));
                    break 'inv;
                }
            }
        }

        let mut nondegenerate_counterexample = None;
        let mut hit = vec![false; n];
        for y in 0..n {
            hit.iter_mut().for_each(|h| *h = false);
            for x in 0..n {
                hit[tables.gamma(y, x)] = true;
            }
            if hit.iter().any(|h| !h) {
                nondegenerate_counterexample = Some(y);
                break;
            }
        }

        let mut braid_counterexample = None;
        'braid: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // r12 r23 r12
                    let (a, b) = r(x, y);
                    let (b, c) = r(b, z);
                    let (a, b) = r(a, b);
                    let left = (a, b, c);
                    // r23 r12 r23
                    let (b, c) = r(y, z);
                    let (a, b) = r(x, b);
                    let (b, c) = r(b, c);
                    if left != (a, b, c) {
                        braid_counterexample = Some((x, y, z));
                        break 'braid;
                    }
                }
            }
        }

        ValidationReport {
            involutive: involutive_counterexample.is_none(),
            nondegenerate: nondegenerate_counterexample.is_none(),
            braid: braid_counterexample.is_none(),
            involutive_counterexample,
            nondegenerate_counterexample,
            braid_counterexample,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passes()
    }

    /// Orbits of the group generated by the `σ_x`, each sorted, ordered by
    /// least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut uf = crate::unionfind::UnionFind::new(n);
        for s in &self.sigma {
            for i in 0..n {
                uf.union(i, s.apply(i));
            }
        }
        uf.classes()
    }

    /// Transitivity of the permutation group of the solution.
    pub fn is_indecomposable(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn is_irretractable(&self) -> bool {
        let mut sorted: Vec<&Perm> = self.sigma.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// The σ-equality partition. Fails if some `σ_z` does not map classes
    /// onto classes.
    pub fn sigma_class_blocks(&self) -> Result<SigmaClassPartition> {
        let n = self.n();
        let mut index: BTreeMap<&Perm, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; n];
        for (x, p) in self.sigma.iter().enumerate() {
            let next = index.len();
            let c = *index.entry(p).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(x);
            class_of[x] = c;
        }
        for (z, g) in self.sigma.iter().enumerate() {
            for class in &classes {
                let target = class_of[g.apply(class[0])];
                let size_ok = classes[target].len() == class.len();
                if !size_ok || class.iter().any(|&x| class_of[g.apply(x)] != target) {
                    return Err(Error::ClassInvariance(format!(
                        "sigma_{z} splits the class of {}",
                        class[0]
                    )));
                }
            }
        }
        Ok(SigmaClassPartition { classes, class_of })
    }

    /// The retract: the induced solution `σ_[x]([y]) = [σ_x(y)]` on σ-classes.
    pub fn retract(&self) -> Result<Solution> {
        let part = self.sigma_class_blocks()?;
        let m = part.len();
        let mut sigma = Vec::with_capacity(m);
        for class in &part.classes {
            let s = &self.sigma[class[0]];
            let mut images = vec![usize::MAX; m];
            for (c, members) in part.classes.iter().enumerate() {
                let target = part.class_of[s.apply(members[0])];
                if members.iter().any(|&y| part.class_of[s.apply(y)] != target) {
                    return Err(Error::ClassInvariance(format!(
                        "induced map on classes is not well defined at class {c}"
                    )));
                }
                images[c] = target;
            }
            sigma.push(Perm::new(images)?);
        }
        Solution::new(sigma)
    }

    /// Number of retractions needed to reach one point; `None` when the
    /// retraction sequence stalls above one point. The one-point solution has
    /// level 0.
    pub fn multipermutation_level(&self) -> Result<Option<usize>> {
        let mut current = self.clone();
        let mut level = 0;
        loop {
            if current.n() == 1 {
                return Ok(Some(level));
            }
            let next = current.retract()?;
            if next.n() == current.n() {
                return Ok(None);
            }
            current = next;
            level += 1;
        }
    }

    /// Transports the solution along the relabeling `f`:
    /// `x ↦ f ∘ σ_{f⁻¹(x)} ∘ f⁻¹`.
    pub fn relabel(&self, f: &Perm) -> Result<Solution> {
        if f.degree() != self.n() {
            return Err(Error::DegreeMismatch {
                left: self.n(),
                right: f.degree(),
            });
        }
        let finv = f.inverse();
        let sigma = (0..self.n())
            .map(|x| self.sigma[finv.apply(x)].conjugate_by(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Solution { sigma })
    }

    /// The lexicographically least σ-table over all `n!` relabelings.
    pub fn canonical_form(&self) -> Result<Solution> {
        let n = self.n();
        if n > CANONICAL_MAX_N {
            return Err(Error::SizeTooLarge {
                n,
                max: CANONICAL_MAX_N,
            });
        }
        let flat: Vec<u8> = self
            .sigma
            .iter()
            .flat_map(|p| p.images().iter().map(|&v| v as u8))
            .collect();
        let best = canonical_table(n, &flat);
        Ok(Solution::from_flat(n, &best))
    }

    pub(crate) fn from_flat(n: usize, flat: &[u8]) -> Solution {
        let sigma = flat
            .chunks(n)
            .map(|row| Perm::from_images_unchecked(row.iter().map(|&v| v as usize).collect()))
            .collect();
        Solution { sigma }
    }

    pub fn invariants(&self) -> IsoInvariants {
        let mut cycle_types: Vec<Vec<usize>> = self.sigma.iter().map(Perm::cycle_type).collect();
        cycle_types.sort();
        let mut class_sizes: Vec<usize> = match self.sigma_class_blocks() {
            Ok(p) => p.classes.iter().map(Vec::len).collect(),
            // Not a solution; fall back to the raw equality classes.
            Err(_) => {
                let mut counts: BTreeMap<&Perm, usize> = BTreeMap::new();
                for s in &self.sigma {
                    *counts.entry(s).or_default() += 1;
                }
                counts.into_values().collect()
            }
        };
        class_sizes.sort_unstable();
        IsoInvariants {
            n: self.n(),
            cycle_types,
            class_sizes,
        }
    }

    /// Whether some relabeling carries `self` onto `other`.
    pub fn is_isomorphic(&self, other: &Solution) -> Result<bool> {
        if self.invariants() != other.invariants() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }
}

/// Dense lookup tables for `σ`, `σ⁻¹` used by the O(n³) checks.
struct Tables {
    n: usize,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
}

impl Tables {
    fn new(s: &Solution) -> Self {
        let n = s.n();
        let mut sigma = vec![0; n * n];
        let mut sigma_inv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let v = s.sigma[x].apply(y);
                sigma[x * n + y] = v;
                sigma_inv[x * n + v] = y;
            }
        }
        Tables {
            n,
            sigma,
            sigma_inv,
        }
    }

    #[inline]
    fn gamma(&self, y: usize, x: usize) -> usize {
        let u = self.sigma[x * self.n + y];
        self.sigma_inv[u * self.n + x]
    }

    #[inline]
    fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x * self.n + y], self.gamma(y, x))
    }
}

/// Lex-least relabeling of a flat σ-table (`flat[x * n + y] = σ_x(y)`).
pub(crate) fn canonical_table(n: usize, flat: &[u8]) -> Vec<u8> {
    let mut best = flat.to_vec();
    let mut finv = vec![0usize; n];
    let mut perms = LexPermutations::new(n);
    while let Some(f) = perms.next_ref() {
        for (i, &v) in f.iter().enumerate() {
            finv[v] = i;
        }
        // candidate[x][y] = f(σ_{f⁻¹x}(f⁻¹y))
        let mut improving = false;
        'cells: for x in 0..n {
            let row = finv[x] * n;
            for y in 0..n {
                let c = f[flat[row + finv[y]] as usize] as u8;
                let idx = x * n + y;
                if improving {
                    best[idx] = c;
                } else if c < best[idx] {
                    improving = true;
                    best[idx] = c;
                } else if c > best[idx] {
                    break 'cells;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    /// The rule `r(x,y) = (σ_x(y), γ_y(x))` evaluated without any table
    /// shortcuts, as an independent oracle for `validate`.
    fn naive_braid_holds(s: &Solution) -> bool {
        let n = s.n();
        let r = |x, y| s.r(x, y).unwrap();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a1, b1) = r(x, y);
                    let (b2, c2) = r(b1, z);
                    let (a3, b3) = r(a1, b2);
                    let (b4, c4) = r(y, z);
                    let (a5, b5) = r(x, b4);
                    let (b6, c6) = r(b5, c4);
                    if (a3, b3, c2) != (a5, b6, c6) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn gamma_examples() {
        let t = Solution::trivial(3);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(t.gamma(y, x).unwrap(), x);
            }
        }
        let swap = Solution::permutation(perm(&[1, 0]));
        assert_eq!(swap.gamma(0, 0).unwrap(), 1);
        let cyc = Solution::permutation(perm(&[1, 2, 0]));
        assert_eq!(cyc.gamma(0, 1).unwrap(), 0);
        assert_eq!(
            cyc.gamma(3, 0),
            Err(Error::PointOutOfRange { point: 3, n: 3 })
        );
    }

    #[test]
    fn validate_examples() {
        assert!(Solution::trivial(2).validate().passes());
        for pi in [perm(&[1, 2, 0]), perm(&[1, 0, 3, 2]), perm(&[2, 0, 1, 3])] {
            assert!(Solution::permutation(pi).validate().passes());
        }
        let bad = Solution::new(vec![Perm::identity(2), perm(&[1, 0])]).unwrap();
        assert!(!naive_braid_holds(&bad));
        let report = bad.validate();
        assert!(!report.passes());
        assert!(!report.braid);
        assert!(report.braid_counterexample.is_some());
    }

    #[test]
    fn validate_matches_naive_braid_on_all_tables_n3() {
        let all: Vec<Perm> = {
            let mut it = LexPermutations::new(3);
            let mut v = Vec::new();
            while let Some(p) = it.next_ref() {
                v.push(perm(p));
            }
            v
        };
        let mut passing = 0;
        for a in &all {
            for b in &all {
                for c in &all {
                    let s = Solution::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
                    let rep = s.validate();
                    // γ derived from σ always gives an involution.
                    assert!(rep.involutive);
                    assert_eq!(rep.braid, naive_braid_holds(&s));
                    if rep.passes() {
                        passing += 1;
                    }
                }
            }
        }
        assert!(passing > 0);
    }

    #[test]
    fn indecomposable_examples() {
        assert!(Solution::cyclic(3).is_indecomposable());
        assert!(!Solution::trivial(2).is_indecomposable());
        assert!(!Solution::permutation(perm(&[1, 0, 2])).is_indecomposable());
        assert!(Solution::one_point().is_indecomposable());
    }

    #[test]
    fn sigma_classes() {
        for n in 1..6 {
            let p = Solution::cyclic(n).sigma_class_blocks().unwrap();
            assert_eq!(p.classes, vec![(0..n).collect::<Vec<_>>()]);
        }
        let t = Solution::trivial(3).sigma_class_blocks().unwrap();
        assert_eq!(t.len(), 1);
        let s = irretractable4();
        assert!(s.validate().passes());
        assert!(s.is_irretractable());
        assert!(s.sigma_class_blocks().unwrap().is_discrete());
    }

    #[test]
    fn transpositions_fixing_each_point_are_not_a_solution() {
        // σ_x = the transposition fixing x. For x ≠ y the cycle-set form of
        // the braid relation reduces to σ_x σ_z = σ_y σ_z with z the third
        // point, which is false.
        let s = Solution::from_rows(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap();
        assert!(!naive_braid_holds(&s));
        assert!(!s.validate().passes());
    }

    /// An irretractable solution on four points with group of order 8.
    fn irretractable4() -> Solution {
        Solution::from_rows(vec![
            vec![0, 1, 3, 2],
            vec![2, 3, 1, 0],
            vec![3, 2, 0, 1],
            vec![1, 0, 2, 3],
        ])
        .unwrap()
    }

    #[test]
    fn retract_examples() {
        assert_eq!(
            Solution::cyclic(5).retract().unwrap(),
            Solution::one_point()
        );
        assert_eq!(
            Solution::trivial(4).retract().unwrap(),
            Solution::one_point()
        );
        let s = irretractable4();
        let r = s.retract().unwrap();
        assert_eq!(r.n(), 4);
        assert!(r.is_isomorphic(&s).unwrap());
    }

    #[test]
    fn multipermutation_levels() {
        assert_eq!(Solution::one_point().multipermutation_level(), Ok(Some(0)));
        assert_eq!(Solution::cyclic(4).multipermutation_level(), Ok(Some(1)));
        assert_eq!(Solution::trivial(3).multipermutation_level(), Ok(Some(1)));
        assert_eq!(irretractable4().multipermutation_level(), Ok(None));
    }

    #[test]
    fn canonical_form_examples() {
        let t = Solution::trivial(4);
        assert_eq!(t.canonical_form().unwrap(), t);

        let a = Solution::permutation(perm(&[1, 2, 0]));
        let b = Solution::permutation(perm(&[2, 0, 1]));
        // Oracle: enumerate the six relabelings of each by hand-rolled loop.
        let brute = |s: &Solution| {
            let mut it = LexPermutations::new(3);
            let mut best: Option<Vec<Vec<usize>>> = None;
            while let Some(f) = it.next_ref() {
                let rows = s.relabel(&perm(f)).unwrap().rows();
                if best.as_ref().is_none_or(|b| rows < *b) {
                    best = Some(rows);
                }
            }
            best.unwrap()
        };
        assert_eq!(brute(&a), brute(&b));
        assert_eq!(a.canonical_form().unwrap().rows(), brute(&a));
        assert_eq!(a.canonical_form().unwrap(), b.canonical_form().unwrap());
        let c = a.canonical_form().unwrap();
        assert_eq!(c.canonical_form().unwrap(), c);
        assert!(a.is_isomorphic(&b).unwrap());
        assert!(!a.is_isomorphic(&Solution::trivial(3)).unwrap());
    }

    #[test]
    fn canonical_form_size_cap() {
        assert!(matches!(
            Solution::trivial(11).canonical_form(),
            Err(Error::SizeTooLarge { n: 11, .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            Solution::from_rows(vec![vec![0, 0], vec![0, 1]]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            Solution::from_rows(vec![vec![0, 1, 2], vec![0, 1, 2]]),
            Err(Error::DegreeMismatch { .. })
        ));
        assert_eq!(Solution::from_rows(vec![]), Err(Error::EmptyDomain));
    }
}
