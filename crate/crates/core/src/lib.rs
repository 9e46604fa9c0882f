//! Finite involutive non-degenerate set-theoretic solutions of the
//! Yang-Baxter equation.
//!
//! A solution on `X = {0, …, n-1}` is stored as its table of left actions
//! `σ_x`; the right actions are always derived through
//! `γ_y(x) = σ⁻¹_{σ_x(y)}(x)`. Around that representation the crate offers
//!
//! * [`perm`]: exact permutation arithmetic (composition is right-to-left,
//!   `(p∘q)(i) = p(q(i))`),
//! * [`solution`]: axiom checks, retraction, multipermutation level and
//!   canonical forms,
//! * [`group`]: explicit permutation groups with orbits, block systems,
//!   primitivity and solvability,
//! * [`brace`]: the left brace carried by the permutation group of a
//!   solution, with the usual structural checks,
//! * [`enumerate`]: an isomorph-free enumerator, a brute-force oracle and the
//!   primitive-solution classification pipeline.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod brace;
pub mod enumerate;
mod error;
pub mod group;
pub mod perm;
pub mod solution;
mod unionfind;

pub use brace::{FiniteBrace, SylowDecomposition};
pub use enumerate::{analyze, Analysis, CatalogRecord};
pub use error::{Error, Result};
pub use group::{BlockSystem, PermGroup};
pub use perm::Perm;
pub use solution::{Solution, ValidationReport};

/// True when `n` is a prime number.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(mut n: usize) -> alloc::vec::Vec<usize> {
    let mut out = alloc::vec::Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: alloc::vec::Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(prime_factors(1), alloc::vec::Vec::<usize>::new());
        assert_eq!(prime_factors(6), [2, 3]);
        assert_eq!(prime_factors(72), [2, 3]);
        assert_eq!(prime_factors(13), [13]);
    }
}
