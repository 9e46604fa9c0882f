//! Permutations of `{0, …, n-1}` stored as image lists.
//!
//! Composition is right-to-left: `p.compose(&q)` is the map `i ↦ p(q(i))`.
//! Every module in the crate follows this convention.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A bijection of `{0, …, n-1}`, `images[i]` being the image of `i`.
///
/// Values are immutable once built; the derived ordering is the
/// lexicographic order of the image lists.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    /// Builds a permutation from its image list, rejecting anything that is
    /// not a bijection of `{0, …, n-1}`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        let mut seen = vec![false; n];
        for (i, &v) in images.iter().enumerate() {
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {v} of point {i} is outside 0..{n}"
                )));
            }
            if seen[v] {
                return Err(Error::NotAPermutation(format!("value {v} appears twice")));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Perm::new(images.clone()).is_ok());
        Perm { images }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity on an empty domain");
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 1, 2]]` is
    /// `0 ↦ 1 ↦ 2 ↦ 0`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::PointOutOfRange { point: a, n });
                }
                if touched[a] {
                    return Err(Error::NotAPermutation(format!(
                        "point {a} occurs in more than one cycle position"
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    /// The `n`-cycle `i ↦ i + 1 mod n`.
    pub fn rotation(n: usize) -> Self {
        assert!(n > 0, "rotation on an empty domain");
        Perm {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn try_apply(&self, point: usize) -> Result<usize> {
        self.images
            .get(point)
            .copied()
            .ok_or(Error::PointOutOfRange {
                point,
                n: self.degree(),
            })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    /// [`Perm::compose`] for operands already known to share a degree.
    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Perm { images: inv }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Result<Perm> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        let mut out = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            out[g.images[i]] = g.images[v];
        }
        Ok(Perm { images: out })
    }

    /// Cycle lengths in non-increasing order, fixed points included as 1s.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Order of the permutation as a group element.
    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Iterator over all permutations of `{0, …, n-1}` in lexicographic order.
pub(crate) struct LexPermutations {
    current: Vec<usize>,
    started: bool,
}

impl LexPermutations {
    pub(crate) fn new(n: usize) -> Self {
        LexPermutations {
            current: (0..n).collect(),
            started: false,
        }
    }

    /// Advances in place and returns the next arrangement, avoiding an
    /// allocation per step.
    pub(crate) fn next_ref(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
        } else if !next_permutation(&mut self.current) {
            return None;
        }
        Some(&self.current)
    }
}

/// Rearranges `a` into its lexicographic successor; false when `a` was the
/// last arrangement.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            p(&[1, 2, 0]).compose(&p(&[1, 0, 2])).unwrap(),
            p(&[2, 1, 0])
        );
        assert_eq!(
            p(&[0, 1, 2]).compose(&p(&[2, 0, 1])).unwrap(),
            p(&[2, 0, 1])
        );
        assert_eq!(p(&[1, 0]).compose(&p(&[1, 0])).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn compose_rejects_mismatched_degrees() {
        assert_eq!(
            p(&[1, 0]).compose(&p(&[0, 1, 2])),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(&[1, 2, 0]).inverse(), p(&[2, 0, 1]));
        assert_eq!(Perm::identity(5).inverse(), Perm::identity(5));
        assert_eq!(p(&[1, 0, 3, 2]).inverse(), p(&[1, 0, 3, 2]));
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(p(&[1, 2, 0]).cycle_type(), [3]);
        assert_eq!(Perm::identity(4).cycle_type(), [1, 1, 1, 1]);
        assert_eq!(p(&[1, 0, 2]).cycle_type(), [2, 1]);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(matches!(
            Perm::new(vec![0, 0]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            Perm::new(vec![0, 2]),
            Err(Error::NotAPermutation(_))
        ));
        assert_eq!(Perm::new(vec![]), Err(Error::EmptyDomain));
    }

    #[test]
    fn cycles_and_display() {
        let c = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(c, p(&[1, 2, 3, 0]));
        assert_eq!(c, Perm::rotation(4));
        assert_eq!(c.to_string(), "(0 1 2 3)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert_eq!(c.order(), 4);
        assert_eq!(p(&[1, 0, 3, 4, 2]).order(), 6);
        assert!(Perm::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn lex_permutations_cover_symmetric_group() {
        let mut it = LexPermutations::new(4);
        let mut all = Vec::new();
        while let Some(a) = it.next_ref() {
            all.push(a.to_vec());
        }
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], [0, 1, 2, 3]);
        assert_eq!(all[23], [3, 2, 1, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Perm::new(v).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (Perm, Perm, Perm)> {
        (1usize..9).prop_flat_map(|n| (arb_perm(n), arb_perm(n), arb_perm(n)))
    }

    proptest! {
        #[test]
        fn compose_is_associative((a, b, c) in arb_triple()) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_is_involutive((a, b, _) in arb_triple()) {
            prop_assert_eq!(a.inverse().inverse(), a.clone());
            prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
            prop_assert_eq!(b.compose(&a).unwrap().inverse(), a.inverse().compose(&b.inverse()).unwrap());
        }

        #[test]
        fn cycle_type_is_conjugation_invariant((g, q, _) in arb_triple()) {
            let conj = g.compose(&q).unwrap().compose(&g.inverse()).unwrap();
            prop_assert_eq!(conj.cycle_type(), q.cycle_type());
            prop_assert_eq!(q.conjugate_by(&g).unwrap(), conj);
            prop_assert_eq!(q.cycle_type().iter().sum::<usize>(), q.degree());
        }
    }
}
