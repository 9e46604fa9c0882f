//! The left brace on the permutation group `𝒢(X, r)` of a solution.
//!
//! Multiplication is composition of permutations. Addition is built from
//! the generators alone: since `λ_a(b) = ab − a`, one has
//! `a + c = a · λ_{a⁻¹}(c)`, and `λ_g(σ_y) = σ_{g(y)}` turns this into
//!
//! ```text
//! a + σ_y = a ∘ σ_{a⁻¹(y)}
//! ```
//!
//! Every element is a sum of generators, so walking a breadth-first tree of
//! such steps from `0` gives the full addition table. The result is then
//! re-verified against all brace axioms; a failure there is a bug, never an
//! expected outcome.
//!
//! Elements are indexed, and the common neutral element (`0 = 1 = id`) is
//! always index 0.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::PermGroup;
use crate::perm::Perm;
use crate::solution::Solution;
use crate::{prime_factors, Error, Result};

/// Default bound on the number of brace elements; tables are `k × k`.
pub const DEFAULT_BRACE_CAP: usize = 2048;

#[derive(Clone, Debug)]
pub struct FiniteBrace {
    elements: Vec<Perm>,
    k: usize,
    mul: Vec<u32>,
    add: Vec<u32>,
    lambda: Vec<u32>,
    mul_inv: Vec<u32>,
    neg: Vec<u32>,
    /// For a brace built from a solution, `generators[x]` is the index of
    /// `σ_x`.
    generators: Vec<usize>,
}

/// The Sylow subgroups of `(B, +)`, one per prime dividing `|B|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylowDecomposition {
    pub primes: Vec<usize>,
    /// `parts[i]` lists the element indices of the Sylow `primes[i]`-subgroup.
    pub parts: Vec<Vec<usize>>,
}

/// Which additive/multiplicative identity failed, with its witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityFailure {
    /// `ab⁻¹ = a − λ_{ab⁻¹}(b)`
    QuotientAsDifference(usize, usize),
    /// `a − b = a + λ_b(b⁻¹)`
    DifferenceViaLambda(usize, usize),
    /// `a + λ_b(b⁻¹) = a · λ_{a⁻¹b}(b⁻¹)`
    DifferenceAsProduct(usize, usize),
}

impl FiniteBrace {
    /// Builds the brace of `s`, which must pass validation.
    pub fn from_solution(s: &Solution) -> Result<Self> {
        Self::from_solution_with_cap(s, DEFAULT_BRACE_CAP)
    }

    pub fn from_solution_with_cap(s: &Solution, cap: usize) -> Result<Self> {
        if !s.validate().passes() {
            return Err(Error::InvalidSolution);
        }
        let group =
            PermGroup::generate_with_cap(s.n(), s.sigmas().to_vec(), cap).map_err(|e| match e {
                Error::GroupOrderCap { cap } => Error::BraceOrderCap { cap },
                other => other,
            })?;
        let elements = group.elements().to_vec();
        let k = elements.len();
        let n = s.n();

        let mut mul = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                let p = elements[a].compose_unchecked(&elements[b]);
                mul[a * k + b] = group
                    .index_of(&p)
                    .ok_or_else(|| Error::Internal(format!("product {p:?} escaped the closure")))?
                    as u32;
            }
        }
        let generators: Vec<usize> = s
            .sigmas()
            .iter()
            .map(|p| group.index_of(p).expect("generator lies in its closure"))
            .collect();

        // step[c * n + y] = c + σ_y = c ∘ σ_{c⁻¹(y)}
        let mut step = vec![0usize; k * n];
        for c in 0..k {
            let c_inv = elements[c].inverse();
            for y in 0..n {
                let g = generators[c_inv.apply(y)];
                step[c * n + y] = mul[c * k + g] as usize;
            }
        }

        // Breadth-first tree over a ↦ a + σ_y from 0.
        let mut parent = vec![usize::MAX; k];
        let mut label = vec![0usize; k];
        let mut order = Vec::with_capacity(k);
        parent[0] = 0;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for y in 0..n {
                let d = step[c * n + y];
                if parent[d] == usize::MAX {
                    parent[d] = c;
                    label[d] = y;
                    order.push(d);
                }
            }
        }
        if order.len() != k {
            return Err(Error::BraceConstruction(format!(
                "generator sums reach only {} of {k} elements",
                order.len()
            )));
        }

        // add[a][b] = (a + parent(b)) + σ_{label(b)}
        let mut add = vec![0u32; k * k];
        for a in 0..k {
            add[a * k] = a as u32;
            for &b in &order[1..] {
                let prev = add[a * k + parent[b]] as usize;
                add[a * k + b] = step[prev * n + label[b]] as u32;
            }
        }

        let brace = Self::from_tables(elements, mul, add, generators)?;
        brace.verify()?;
        Ok(brace)
    }

    /// Fills in inverses, negatives and `λ` from total `mul`/`add` tables.
    fn from_tables(
        elements: Vec<Perm>,
        mul: Vec<u32>,
        add: Vec<u32>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let k = elements.len();
        let mut mul_inv = vec![u32::MAX; k];
        let mut neg = vec![u32::MAX; k];
        for a in 0..k {
            for b in 0..k {
                if mul[a * k + b] == 0 {
                    mul_inv[a] = b as u32;
                }
                if add[a * k + b] == 0 {
                    neg[a] = b as u32;
                }
            }
        }
        if mul_inv.contains(&u32::MAX) || neg.contains(&u32::MAX) {
            return Err(Error::BraceConstruction(
                "some element lacks an inverse".into(),
            ));
        }
        let mut lambda = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                let ab = mul[a * k + b] as usize;
                lambda[a * k + b] = add[ab * k + neg[a] as usize];
            }
        }
        Ok(FiniteBrace {
            elements,
            k,
            mul,
            add,
            lambda,
            mul_inv,
            neg,
            generators,
        })
    }

    /// Checks every structural invariant of a left brace.
    fn verify(&self) -> Result<()> {
        let k = self.k;
        let fail = |msg: alloc::string::String| Err(Error::BraceConstruction(msg));
        for a in 0..k {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return fail(format!("index 0 is not the multiplicative identity at {a}"));
            }
            if self.add(0, a) != a {
                return fail(format!("index 0 is not the additive identity at {a}"));
            }
            for b in 0..k {
                if self.add(a, b) != self.add(b, a) {
                    return fail(format!("addition is not commutative at ({a}, {b})"));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = self.add(a, b);
                for c in 0..k {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return fail(format!("addition is not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if let Some((a, b, c)) = self.brace_axiom_counterexample() {
            return fail(format!("brace axiom fails at ({a}, {b}, {c})"));
        }
        if !self.lambda_is_action() {
            return fail("lambda is not an action by additive automorphisms".into());
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, a: usize) -> &Perm {
        &self.elements[a]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    /// Index of `σ_x` for the solution the brace was built from.
    pub fn generator(&self, x: usize) -> usize {
        self.generators[x]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.k + b] as usize
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.k + b] as usize
    }

    /// `λ_a(b) = ab − a`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.lambda[a * self.k + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.mul_inv[a] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul_row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.mul[a * self.k..(a + 1) * self.k]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn add_row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.add[a * self.k..(a + 1) * self.k]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn lambda_row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.lambda[a * self.k..(a + 1) * self.k]
            .iter()
            .map(|&v| v as usize)
    }

    /// First triple violating `a(b + c) + a = ab + ac`.
    pub fn brace_axiom_counterexample(&self) -> Option<(usize, usize, usize)> {
        let k = self.k;
        for a in 0..k {
            for b in 0..k {
                let ab = self.mul(a, b);
                for c in 0..k {
                    let left = self.add(self.mul(a, self.add(b, c)), a);
                    let right = self.add(ab, self.mul(a, c));
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn check_brace_axiom(&self) -> bool {
        self.brace_axiom_counterexample().is_none()
    }

    /// Each `λ_a` is an automorphism of `(B, +)` and `a ↦ λ_a` is a
    /// homomorphism from `(B, ·)`.
    pub fn lambda_is_action(&self) -> bool {
        let k = self.k;
        for a in 0..k {
            let mut hit = vec![false; k];
            for b in 0..k {
                hit[self.lambda(a, b)] = true;
                for c in 0..k {
                    if self.lambda(a, self.add(b, c))
                        != self.add(self.lambda(a, b), self.lambda(a, c))
                    {
                        return false;
                    }
                    if self.lambda(self.mul(a, b), c) != self.lambda(a, self.lambda(b, c)) {
                        return false;
                    }
                }
            }
            if hit.contains(&false) {
                return false;
            }
        }
        true
    }

    /// `{a : ab = a + b for all b}`.
    pub fn socle(&self) -> Vec<usize> {
        (0..self.k)
            .filter(|&a| (0..self.k).all(|b| self.mul(a, b) == self.add(a, b)))
            .collect()
    }

    /// `{a : λ_a = id}`.
    pub fn lambda_kernel(&self) -> Vec<usize> {
        (0..self.k)
            .filter(|&a| (0..self.k).all(|b| self.lambda(a, b) == b))
            .collect()
    }

    /// Subgroup of `(B, +)` stable under every `λ_a`.
    pub fn is_left_ideal(&self, set: &[usize]) -> bool {
        let member = self.membership(set);
        member[0]
            && set.iter().all(|&a| {
                set.iter().all(|&b| member[self.add(a, self.neg(b))])
                    && (0..self.k).all(|g| member[self.lambda(g, a)])
            })
    }

    /// Normal subgroup of `(B, ·)` stable under every `λ_a`.
    pub fn is_ideal(&self, set: &[usize]) -> bool {
        let member = self.membership(set);
        let subgroup = member[0]
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| member[self.mul(a, self.inv(b))]));
        subgroup
            && set.iter().all(|&s| {
                (0..self.k).all(|g| {
                    member[self.mul(self.mul(g, s), self.inv(g))] && member[self.lambda(g, s)]
                })
            })
    }

    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.k];
        for &a in set {
            member[a] = true;
        }
        member
    }

    /// Addition and multiplication coincide.
    pub fn is_trivial_brace(&self) -> bool {
        self.mul == self.add
    }

    /// First pair violating one of the identities relating `+`, `·` and `λ`.
    pub fn additive_identities_counterexample(&self) -> Option<IdentityFailure> {
        for a in 0..self.k {
            for b in 0..self.k {
                let b_inv = self.inv(b);
                let ab_inv = self.mul(a, b_inv);
                if ab_inv != self.sub(a, self.lambda(ab_inv, b)) {
                    return Some(IdentityFailure::QuotientAsDifference(a, b));
                }
                let via_lambda = self.add(a, self.lambda(b, b_inv));
                if self.sub(a, b) != via_lambda {
                    return Some(IdentityFailure::DifferenceViaLambda(a, b));
                }
                let a_inv_b = self.mul(self.inv(a), b);
                if via_lambda != self.mul(a, self.lambda(a_inv_b, b_inv)) {
                    return Some(IdentityFailure::DifferenceAsProduct(a, b));
                }
            }
        }
        None
    }

    pub fn additive_identities_check(&self) -> bool {
        self.additive_identities_counterexample().is_none()
    }

    /// `λ_g(σ_x) = σ_{g(x)}` for every element `g` and point `x`.
    pub fn lambda_equivariance_check(&self) -> bool {
        (0..self.k).all(|g| {
            self.generators
                .iter()
                .enumerate()
                .all(|(x, &sx)| self.lambda(g, sx) == self.generators[self.elements[g].apply(x)])
        })
    }

    /// Smallest `m ≥ 1` with `m·a = 0`.
    pub fn additive_order(&self, a: usize) -> usize {
        let mut m = 1;
        let mut acc = a;
        while acc != 0 {
            acc = self.add(acc, a);
            m += 1;
        }
        m
    }

    /// Sylow subgroups of `(B, +)`: `B_p` is the set of elements whose
    /// additive order is a power of `p`. All Sylow-system properties are
    /// verified before returning.
    pub fn sylow_decomposition(&self) -> Result<SylowDecomposition> {
        let primes = prime_factors(self.k);
        let orders: Vec<usize> = (0..self.k).map(|a| self.additive_order(a)).collect();
        let parts: Vec<Vec<usize>> = primes
            .iter()
            .map(|&p| (0..self.k).filter(|&a| is_power_of(orders[a], p)).collect())
            .collect();
        let d = SylowDecomposition { primes, parts };
        self.verify_sylow(&d)?;
        Ok(d)
    }

    fn verify_sylow(&self, d: &SylowDecomposition) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::Sylow(msg));
        for (&p, part) in d.primes.iter().zip(&d.parts) {
            let mut full = 1;
            let mut rest = self.k;
            while rest % p == 0 {
                rest /= p;
                full *= p;
            }
            if part.len() != full {
                return fail(format!(
                    "part for {p} has {} elements, expected {full}",
                    part.len()
                ));
            }
            if !self.is_left_ideal(part) {
                return fail(format!("part for {p} is not a left ideal"));
            }
        }
        for i in 0..d.parts.len() {
            for j in i + 1..d.parts.len() {
                let ij = self.product_set(&d.parts[i], &d.parts[j]);
                let ji = self.product_set(&d.parts[j], &d.parts[i]);
                if ij != ji {
                    return fail(format!("parts {i} and {j} do not permute"));
                }
            }
        }
        let mut total: BTreeSet<usize> = BTreeSet::new();
        total.insert(0);
        for part in &d.parts {
            let current: Vec<usize> = total.iter().copied().collect();
            total = self.product_set(&current, part);
        }
        if total.len() != self.k {
            return fail(format!(
                "product of the parts has {} of {} elements",
                total.len(),
                self.k
            ));
        }
        Ok(())
    }

    fn product_set(&self, left: &[usize], right: &[usize]) -> BTreeSet<usize> {
        left.iter()
            .flat_map(|&a| right.iter().map(move |&b| self.mul(a, b)))
            .collect()
    }

    /// For `b_i ∈ B_i`, `b_j ∈ B_j` (`i ≠ j`), factors `b_i b_j = a c` with
    /// `a ∈ B_j`, `c ∈ B_i`, requires the factorization to be unique and
    /// checks `λ_{b_i}(b_j) = a`. Fewer than two parts is vacuously true.
    pub fn decomp_check(&self, d: &SylowDecomposition) -> Result<bool> {
        let mut ok = true;
        for (i, part_i) in d.parts.iter().enumerate() {
            let in_i = self.membership(part_i);
            for (j, part_j) in d.parts.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &bi in part_i {
                    for &bj in part_j {
                        let t = self.mul(bi, bj);
                        let mut factor = None;
                        for &a in part_j {
                            let c = self.mul(self.inv(a), t);
                            if in_i[c] {
                                if factor.is_some() {
                                    return Err(Error::Sylow(format!(
                                        "non-unique factorization of {bi}*{bj}"
                                    )));
                                }
                                factor = Some(a);
                            }
                        }
                        match factor {
                            None => {
                                return Err(Error::Sylow(format!(
                                    "no factorization of {bi}*{bj} in B_{j}B_{i}"
                                )))
                            }
                            Some(a) => ok &= self.lambda(bi, bj) == a,
                        }
                    }
                }
            }
        }
        Ok(ok)
    }

    /// The solution on the brace elements with `σ_a = λ_a`.
    pub fn associated_solution(&self) -> Solution {
        let sigma = (0..self.k)
            .map(|a| Perm::from_images_unchecked(self.lambda_row(a).collect()))
            .collect();
        Solution::from_perms_unchecked(sigma)
    }
}

fn is_power_of(mut m: usize, p: usize) -> bool {
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Checks that `(x ↦ σ_x, g ↦ λ_g)` is a permutational isomorphism from
/// `𝒢(X, r)` onto the permutation group of the solution associated with
/// its brace. Requires an irretractable solution.
pub fn permutational_isomorphism_check(s: &Solution) -> Result<bool> {
    if !s.validate().passes() {
        return Err(Error::InvalidSolution);
    }
    if !s.is_irretractable() {
        return Err(Error::Retractable);
    }
    let b = FiniteBrace::from_solution(s)?;
    let k = b.order();
    let assoc = b.associated_solution();
    let target = PermGroup::generate(k, assoc.sigmas().to_vec())?;

    // x ↦ σ_x injective.
    let mut seen = vec![false; k];
    for x in 0..s.n() {
        let g = b.generator(x);
        if seen[g] {
            return Ok(false);
        }
        seen[g] = true;
    }

    // g ↦ λ_g: homomorphism, injective, onto the target group.
    let images: Vec<Perm> = assoc.sigmas().to_vec();
    let distinct: BTreeSet<&Perm> = images.iter().collect();
    if distinct.len() != k || target.order() != k {
        return Ok(false);
    }
    if !images.iter().all(|p| target.contains(p)) {
        return Ok(false);
    }
    for g in 0..k {
        for h in 0..k {
            let gh = b.mul(g, h);
            if (0..k).any(|c| b.lambda(gh, c) != b.lambda(g, b.lambda(h, c))) {
                return Ok(false);
            }
        }
    }

    // f1(g(x)) = f2(g)(f1(x))
    for g in 0..k {
        for x in 0..s.n() {
            let gx = b.element(g).apply(x);
            if b.generator(gx) != b.lambda(g, b.generator(x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
