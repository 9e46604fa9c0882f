//! Brute-force reference enumerator: every one of the `(n!)^n` tables is
//! validated directly, and survivors are bucketed by canonical form. It
//! shares nothing with the search except [`Solution`] itself.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::{LexPermutations, Perm};
use crate::solution::Solution;
use crate::{Error, Result};

pub const ORACLE_MAX_N: usize = 4;

/// Canonical forms of all solutions of size `n ≤ 4`, increasing.
pub fn oracle_enumerate(n: usize) -> Result<Vec<Solution>> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if n > ORACLE_MAX_N {
        return Err(Error::SizeTooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let mut perms = Vec::new();
    let mut it = LexPermutations::new(n);
    while let Some(p) = it.next_ref() {
        perms.push(Perm::new(p.to_vec())?);
    }
    let mut digits = vec![0usize; n];
    let mut found = BTreeSet::new();
    loop {
        let table = Solution::new(digits.iter().map(|&d| perms[d].clone()).collect())?;
        if table.validate().passes() {
            found.insert(table.canonical_form()?);
        }
        // Odometer over the n rows.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(found.into_iter().collect());
            }
            digits[pos] += 1;
            if digits[pos] < perms.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sizes() {
        assert_eq!(oracle_enumerate(1).unwrap(), vec![Solution::one_point()]);
        // By hand: of the four tables on two points, the trivial one and the
        // constant swap are solutions; the two mixed tables fail the braid
        // relation.
        let two = oracle_enumerate(2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.contains(&Solution::trivial(2)));
        assert!(two.contains(&Solution::cyclic(2)));
        assert!(matches!(
            oracle_enumerate(5),
            Err(Error::SizeTooLarge { .. })
        ));
    }
}
