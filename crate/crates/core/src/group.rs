//! Explicit finite permutation groups.
//!
//! Groups are materialized as full element lists, which keeps every query a
//! plain scan and makes the brace tables in [`crate::brace`] direct to
//! build. Orders are capped; the permutation groups of solutions on at most
//! eight points stay far below the default cap.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::perm::Perm;
use crate::solution::Solution;
use crate::unionfind::UnionFind;
use crate::{Error, Result};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// `elements[0]` is the identity.
    elements: Vec<Perm>,
    index: BTreeMap<Perm, usize>,
}

/// A partition of the domain into blocks of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    /// Blocks sorted internally and ordered by least element.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    /// One block, or all singletons.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1 || self.block_size() == 1
    }

    /// Checks every element of `group` maps every block onto a block.
    pub fn is_invariant_under(&self, group: &PermGroup) -> bool {
        let n = group.degree();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                block_of[x] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return false;
        }
        let size = self.block_size();
        if self.blocks.iter().any(|b| b.len() != size) {
            return false;
        }
        group.elements().iter().all(|g| {
            self.blocks.iter().all(|block| {
                let target = block_of[g.apply(block[0])];
                block.iter().all(|&x| block_of[g.apply(x)] == target)
            })
        })
    }
}

impl PermGroup {
    /// Closure of `generators` acting on `degree` points, with the default
    /// order cap.
    pub fn generate(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::generate_with_cap(degree, generators, DEFAULT_GROUP_CAP)
    }

    /// Breadth-first closure. Exceeding `cap` elements is an error rather
    /// than a truncated group.
    pub fn generate_with_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyDomain);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = BTreeMap::new();
        index.insert(id, 0);
        let mut distinct: Vec<Perm> = Vec::new();
        for g in &generators {
            if !g.is_identity() && !distinct.contains(g) {
                distinct.push(g.clone());
            }
        }
        let mut i = 0;
        while i < elements.len() {
            for g in &distinct {
                let h = g.compose_unchecked(&elements[i]);
                if !index.contains_key(&h) {
                    if elements.len() >= cap {
                        return Err(Error::GroupOrderCap { cap });
                    }
                    index.insert(h.clone(), elements.len());
                    elements.push(h);
                }
            }
            i += 1;
        }
        let group = PermGroup {
            degree,
            generators,
            elements,
            index,
        };
        debug_assert!(group.order_divides_factorial());
        Ok(group)
    }

    /// The group generated by the `σ_x` of a solution.
    pub fn of_solution(s: &Solution) -> Result<Self> {
        Self::generate(s.n(), s.sigmas().to_vec())
    }

    /// Subgroup from an element list already known to be closed.
    fn from_closed_elements(degree: usize, members: Vec<Perm>) -> Self {
        let mut elements = Vec::with_capacity(members.len());
        let id = Perm::identity(degree);
        elements.push(id.clone());
        elements.extend(members.into_iter().filter(|p| *p != id));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut group = PermGroup {
            degree,
            generators: Vec::new(),
            elements,
            index,
        };
        group.generators = group.small_generating_set();
        group
    }

    /// Greedy generating set: keep each element not yet generated.
    fn small_generating_set(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut covered: BTreeSet<Perm> = BTreeSet::new();
        covered.insert(Perm::identity(self.degree));
        for e in &self.elements {
            if covered.contains(e) {
                continue;
            }
            gens.push(e.clone());
            let sub = PermGroup::generate(self.degree, gens.clone())
                .expect("subgroup of a group within the cap");
            covered = sub.elements.into_iter().collect();
        }
        gens
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Lagrange sanity check against `Sym(degree)`.
    pub fn order_divides_factorial(&self) -> bool {
        let mut fact: u128 = 1;
        for k in 2..=self.degree as u128 {
            match fact.checked_mul(k) {
                Some(f) => fact = f,
                None => return true,
            }
        }
        fact % self.order() as u128 == 0
    }

    fn acting_set(&self) -> &[Perm] {
        if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        }
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for g in self.acting_set() {
            for i in 0..self.degree {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for g in &self.elements {
            seen.insert(g.apply(x));
        }
        seen.into_iter().collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// The finest block system with `a` and `b` in one block, by union-find
    /// closure: seed `a ~ b`, then merge `g(x) ~ g(y)` for every merged pair
    /// and generator `g` until nothing changes.
    pub fn minimal_block_containing(&self, a: usize, b: usize) -> Result<BlockSystem> {
        let n = self.degree;
        if a >= n || b >= n {
            return Err(Error::PointOutOfRange { point: a.max(b), n });
        }
        if a == b {
            return Err(Error::DegenerateBlockSeed);
        }
        if !self.is_transitive() {
            return Err(Error::Intransitive);
        }
        let gens = self.acting_set();
        let mut uf = UnionFind::new(n);
        let mut pending = vec![(a, b)];
        uf.union(a, b);
        while let Some((x, y)) = pending.pop() {
            for g in gens {
                let (gx, gy) = (g.apply(x), g.apply(y));
                let (rx, ry) = (uf.find(gx), uf.find(gy));
                if rx != ry {
                    uf.union(rx, ry);
                    pending.push((rx, ry));
                }
            }
        }
        let blocks = uf.classes();
        let size = blocks[0].len();
        if blocks.iter().any(|blk| blk.len() != size) {
            return Err(Error::Internal(format!(
                "block closure produced unequal blocks {blocks:?}"
            )));
        }
        Ok(BlockSystem { blocks })
    }

    /// Transitive with no block system other than the trivial ones. Degree 1
    /// counts as primitive.
    pub fn is_primitive(&self) -> bool {
        if self.degree == 1 {
            return true;
        }
        if !self.is_transitive() {
            return false;
        }
        (1..self.degree).all(|b| {
            self.minimal_block_containing(0, b)
                .map(|sys| sys.blocks.len() == 1)
                .unwrap_or(false)
        })
    }

    /// Elements fixing `x`.
    pub fn stabilizer(&self, x: usize) -> Result<PermGroup> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x,
                n: self.degree,
            });
        }
        let members: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| g.apply(x) == x)
            .cloned()
            .collect();
        let stab = PermGroup::from_closed_elements(self.degree, members);
        if stab.order() * self.orbit(x).len() != self.order() {
            return Err(Error::Internal(format!(
                "orbit-stabilizer fails at point {x}"
            )));
        }
        Ok(stab)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.acting_set();
        gens.iter().all(|a| {
            gens.iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    /// Some element has order equal to the group order.
    pub fn is_cyclic(&self) -> bool {
        let k = self.order();
        self.elements.iter().any(|g| g.order() == k)
    }

    /// Commutator subgroup, as the normal closure of the commutators of the
    /// generators.
    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let gens = self.acting_set();
        let mut seeds: Vec<Perm> = Vec::new();
        for (i, s) in gens.iter().enumerate() {
            let s_inv = s.inverse();
            for t in &gens[i + 1..] {
                let c = s_inv
                    .compose_unchecked(&t.inverse())
                    .compose_unchecked(s)
                    .compose_unchecked(t);
                if !c.is_identity() && !seeds.contains(&c) {
                    seeds.push(c);
                }
            }
        }
        let mut sub = PermGroup::generate(self.degree, seeds)?;
        loop {
            let mut extra = None;
            'search: for s in gens {
                let s_inv = s.inverse();
                for c in sub.generators() {
                    let conj = s.compose_unchecked(c).compose_unchecked(&s_inv);
                    if !sub.contains(&conj) {
                        extra = Some(conj);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(p) => {
                    let mut next = sub.generators.clone();
                    next.push(p);
                    sub = PermGroup::generate(self.degree, next)?;
                }
                None => return Ok(sub),
            }
        }
    }

    /// Orders along the derived series, starting with `|G|`, until it
    /// becomes stationary.
    pub fn derived_series_orders(&self) -> Result<Vec<usize>> {
        let mut orders = vec![self.order()];
        let mut current = self.clone();
        loop {
            if current.order() == 1 {
                return Ok(orders);
            }
            let next = current.derived_subgroup()?;
            if next.order() == current.order() {
                return Ok(orders);
            }
            orders.push(next.order());
            current = next;
        }
    }

    /// The derived series reaches the trivial group.
    pub fn is_solvable(&self) -> Result<bool> {
        Ok(*self.derived_series_orders()?.last().unwrap() == 1)
    }
}
