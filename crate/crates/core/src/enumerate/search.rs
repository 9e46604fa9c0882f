//! Isomorph-free backtracking over solution tables.
//!
//! The search works on the table `T[x][y] = σ_x⁻¹(y)`. For such tables the
//! first coordinate of the braid relation reads
//!
//! ```text
//! T[T[x][y]][T[x][z]] = T[T[y][x]][T[y][z]]      for all x, y, z
//! ```
//!
//! and the derived `γ` makes every table involutive. The diagonal
//! `d(x) = T[x][x]` of a finite solution is a bijection, and relabeling by
//! `f` conjugates it, so each isomorphism class has a representative whose
//! diagonal is a fixed representative of its conjugacy class. The remaining
//! freedom is the centralizer of that diagonal; only tables that are
//! lexicographically least (row-major) under it are accepted. Partial
//! tables are pruned as soon as some centralizer element provably produces a
//! smaller table.
//!
//! Cells are filled row-major. After every assignment the braid constraint
//! is propagated: a triple whose four inner cells are known and whose two
//! outer cells are known must agree, and if only one outer cell is known the
//! other is forced.

use alloc::vec;
use alloc::vec::Vec;

use crate::solution::canonical_table;
use crate::{Error, Result};

const UNKNOWN: u8 = u8::MAX;

/// How often (in nodes) the interrupt hook is polled.
const POLL_INTERVAL: u64 = 1 << 12;

/// A relabeling that fixes the diagonal, with its inverse.
#[derive(Clone, Debug)]
struct Symmetry {
    f: Vec<u8>,
    finv: Vec<u8>,
}

/// One diagonal conjugacy class with its search symmetries.
#[derive(Clone, Debug)]
pub struct DiagonalClass {
    /// Cycle lengths, non-increasing.
    pub cycle_type: Vec<usize>,
    diagonal: Vec<u8>,
    symmetries: Vec<Symmetry>,
}

/// An independent slice of the search tree: a diagonal class plus,
/// optionally, the value of the first free cell.
#[derive(Clone, Debug)]
pub struct WorkUnit {
    pub n: usize,
    pub class: usize,
    pub first_choice: Option<(usize, u8)>,
}

/// Result of exhausting one work unit.
#[derive(Clone, Debug, Default)]
pub struct UnitOutcome {
    /// Canonical σ-tables, flattened row-major.
    pub tables: Vec<Vec<u8>>,
    pub nodes: u64,
}

/// Integer partitions of `n` in non-increasing parts, reverse lexicographic.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Conjugacy-class representatives for the diagonal, with the centralizer
/// (identity excluded) of each.
pub fn diagonal_classes(n: usize) -> Vec<DiagonalClass> {
    let all_perms = {
        let mut it = crate::perm::LexPermutations::new(n);
        let mut v: Vec<Vec<u8>> = Vec::new();
        while let Some(p) = it.next_ref() {
            v.push(p.iter().map(|&x| x as u8).collect());
        }
        v
    };
    partitions(n)
        .into_iter()
        .map(|cycle_type| {
            let mut diagonal = vec![0u8; n];
            let mut start = 0;
            for &len in &cycle_type {
                for i in 0..len {
                    diagonal[start + i] = (start + (i + 1) % len) as u8;
                }
                start += len;
            }
            let symmetries = all_perms
                .iter()
                .filter(|f| {
                    f.iter().enumerate().any(|(i, &v)| i as u8 != v)
                        && (0..n).all(|x| f[diagonal[x] as usize] == diagonal[f[x] as usize])
                })
                .map(|f| {
                    let mut finv = vec![0u8; n];
                    for (i, &v) in f.iter().enumerate() {
                        finv[v as usize] = i as u8;
                    }
                    Symmetry { f: f.clone(), finv }
                })
                .collect();
            DiagonalClass {
                cycle_type,
                diagonal,
                symmetries,
            }
        })
        .collect()
}

struct Search<'a> {
    n: usize,
    cell: Vec<u8>,
    inv: Vec<u8>,
    used: Vec<u16>,
    free: Vec<u8>,
    assigned: usize,
    trail: Vec<u16>,
    queue: Vec<u16>,
    symmetries: &'a [Symmetry],
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(n: usize, symmetries: &'a [Symmetry]) -> Self {
        Search {
            n,
            cell: vec![UNKNOWN; n * n],
            inv: vec![UNKNOWN; n * n],
            used: vec![0; n],
            free: vec![n as u8; n],
            assigned: 0,
            trail: Vec::with_capacity(n * n),
            queue: Vec::with_capacity(n * n),
            symmetries,
            nodes: 0,
        }
    }

    #[inline]
    fn get(&self, x: u8, y: u8) -> u8 {
        self.cell[x as usize * self.n + y as usize]
    }

    fn assign(&mut self, c: usize, v: u8) -> bool {
        let current = self.cell[c];
        if current != UNKNOWN {
            return current == v;
        }
        let x = c / self.n;
        let bit = 1u16 << v;
        if self.used[x] & bit != 0 {
            return false;
        }
        self.cell[c] = v;
        self.inv[x * self.n + v as usize] = (c % self.n) as u8;
        self.used[x] |= bit;
        self.free[x] -= 1;
        self.assigned += 1;
        self.trail.push(c as u16);
        self.queue.push(c as u16);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().unwrap() as usize;
            let x = c / self.n;
            let v = self.cell[c];
            self.inv[x * self.n + v as usize] = UNKNOWN;
            self.used[x] &= !(1u16 << v);
            self.free[x] += 1;
            self.assigned -= 1;
            self.cell[c] = UNKNOWN;
        }
        self.queue.clear();
    }

    /// Enforces `T[T[x][y]][T[x][z]] = T[T[y][x]][T[y][z]]` for one triple.
    #[inline]
    fn triple(&mut self, x: u8, y: u8, z: u8) -> bool {
        let a = self.get(x, y);
        let b = self.get(x, z);
        let c = self.get(y, x);
        let d = self.get(y, z);
        if a == UNKNOWN || b == UNKNOWN || c == UNKNOWN || d == UNKNOWN {
            return true;
        }
        let left = self.get(a, b);
        let right = self.get(c, d);
        match (left == UNKNOWN, right == UNKNOWN) {
            (false, false) => left == right,
            (false, true) => self.assign(c as usize * self.n + d as usize, left),
            (true, false) => self.assign(a as usize * self.n + b as usize, right),
            (true, true) => true,
        }
    }

    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(c) = self.queue.pop() {
            let c = c as usize;
            let (p, q) = ((c / n) as u8, (c % n) as u8);
            if self.free[p as usize] == 1 {
                let row = p as usize * n;
                let y = (0..n).find(|&y| self.cell[row + y] == UNKNOWN).unwrap();
                let v = (!self.used[p as usize]).trailing_zeros() as u8;
                if !self.assign(row + y, v) {
                    return false;
                }
            }
            for t in 0..n as u8 {
                if !self.triple(p, q, t)
                    || !self.triple(p, t, q)
                    || !self.triple(q, p, t)
                    || !self.triple(t, p, q)
                {
                    return false;
                }
            }
            // Cells reached as T[a][b] or T[c][d] of some triple.
            for w in 0..n {
                let i = self.inv[w * n + p as usize];
                let j = self.inv[w * n + q as usize];
                if i == UNKNOWN || j == UNKNOWN {
                    continue;
                }
                let w = w as u8;
                if !self.triple(w, i, j) || !self.triple(i, w, j) {
                    return false;
                }
            }
        }
        true
    }

    /// False when some symmetry maps the partial table to a provably
    /// smaller one.
    fn lex_leader(&self) -> bool {
        let n = self.n;
        'syms: for s in self.symmetries {
            for x in 0..n {
                let src_row = s.finv[x] as usize * n;
                for y in 0..n {
                    let t = self.cell[x * n + y];
                    if t == UNKNOWN {
                        continue 'syms;
                    }
                    let src = self.cell[src_row + s.finv[y] as usize];
                    if src == UNKNOWN {
                        continue 'syms;
                    }
                    let image = s.f[src as usize];
                    if image < t {
                        return false;
                    }
                    if image > t {
                        continue 'syms;
                    }
                }
            }
        }
        true
    }

    fn first_free(&self) -> Option<usize> {
        self.cell.iter().position(|&v| v == UNKNOWN)
    }

    /// Assigns the diagonal and propagates; false if that is already
    /// contradictory.
    fn seed(&mut self, diagonal: &[u8]) -> bool {
        for (x, &d) in diagonal.iter().enumerate() {
            if !self.assign(x * self.n + x, d) {
                return false;
            }
        }
        self.propagate() && self.lex_leader()
    }

    fn try_choice(&mut self, c: usize, v: u8) -> bool {
        self.assign(c, v) && self.propagate() && self.lex_leader()
    }

    fn dfs(&mut self, out: &mut Vec<Vec<u8>>, interrupt: &dyn Fn() -> bool) -> Result<()> {
        self.nodes += 1;
        if self.nodes % POLL_INTERVAL == 0 && interrupt() {
            return Err(Error::Interrupted);
        }
        let c = match self.first_free() {
            None => {
                // The inverse rows are exactly the σ-table.
                out.push(canonical_table(self.n, &self.inv));
                return Ok(());
            }
            Some(c) => c,
        };
        let row_used = self.used[c / self.n];
        for v in 0..self.n as u8 {
            if row_used & (1 << v) != 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.try_choice(c, v) {
                self.dfs(out, interrupt)?;
            }
            self.undo_to(mark);
        }
        Ok(())
    }
}

/// Splits the search for size `n` into independent units.
pub fn work_units(n: usize, classes: &[DiagonalClass]) -> Vec<WorkUnit> {
    let mut units = Vec::new();
    for (i, class) in classes.iter().enumerate() {
        let mut search = Search::new(n, &class.symmetries);
        let first = if search.seed(&class.diagonal) {
            search.first_free()
        } else {
            None
        };
        match first {
            Some(c) => {
                for v in 0..n as u8 {
                    units.push(WorkUnit {
                        n,
                        class: i,
                        first_choice: Some((c, v)),
                    });
                }
            }
            None => units.push(WorkUnit {
                n,
                class: i,
                first_choice: None,
            }),
        }
    }
    units
}

/// Exhausts one unit. `interrupt` is polled periodically; returning true
/// aborts with [`Error::Interrupted`].
pub fn run_unit(
    unit: &WorkUnit,
    classes: &[DiagonalClass],
    interrupt: &dyn Fn() -> bool,
) -> Result<UnitOutcome> {
    let class = &classes[unit.class];
    let mut search = Search::new(unit.n, &class.symmetries);
    let mut outcome = UnitOutcome::default();
    if !search.seed(&class.diagonal) {
        return Ok(outcome);
    }
    if let Some((c, v)) = unit.first_choice {
        if !search.try_choice(c, v) {
            return Ok(outcome);
        }
    }
    search.dfs(&mut outcome.tables, interrupt)?;
    outcome.nodes = search.nodes;
    Ok(outcome)
}
