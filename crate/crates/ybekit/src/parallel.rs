//! Multi-threaded driver over the core search's work units.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use ybe_core::enumerate::search::{diagonal_classes, run_unit, work_units};
use ybe_core::enumerate::EnumerationBudget;
use ybe_core::{Error, Result, Solution};

#[derive(Clone, Debug, Default)]
pub struct ParallelConfig {
    /// Worker count; `0` lets rayon decide.
    pub threads: usize,
    pub budget: EnumerationBudget,
    /// Wall-clock limit for the whole run.
    pub time_budget: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct EnumerationRun {
    /// Canonical forms, increasing.
    pub solutions: Vec<Solution>,
    pub units: usize,
    pub nodes: u64,
    /// Tables produced by more than one unit. Zero for a sound partition.
    pub duplicates: u64,
    pub elapsed: Duration,
}

/// Enumerates size `n` in parallel. The result is the same set as the
/// sequential enumerator for any thread count.
pub fn enumerate(n: usize, config: &ParallelConfig) -> Result<EnumerationRun> {
    config.budget.check(n)?;
    let start = Instant::now();
    let deadline = config.time_budget.map(|d| start + d);
    let classes = diagonal_classes(n);
    let units = work_units(n, &classes);

    let found: Mutex<BTreeSet<Vec<u8>>> = Mutex::new(BTreeSet::new());
    let nodes = AtomicU64::new(0);
    let duplicates = AtomicU64::new(0);
    let expired = AtomicBool::new(false);
    let interrupt = || {
        if expired.load(Ordering::Relaxed) {
            return true;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            expired.store(true, Ordering::Relaxed);
            return true;
        }
        false
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| {
        units.par_iter().try_for_each(|unit| -> Result<()> {
            if interrupt() {
                return Err(Error::Interrupted);
            }
            let outcome = run_unit(unit, &classes, &interrupt)?;
            nodes.fetch_add(outcome.nodes, Ordering::Relaxed);
            let mut set = found.lock().expect("merge set poisoned");
            for t in outcome.tables {
                if !set.insert(t) {
                    duplicates.fetch_add(1, Ordering::Relaxed);
                }
            }
            Ok(())
        })
    })?;

    let found = found.into_inner().expect("merge set poisoned");
    Ok(EnumerationRun {
        solutions: found
            .iter()
            .map(|t| {
                Solution::from_rows(
                    t.chunks(n)
                        .map(|r| r.iter().map(|&v| v as usize).collect())
                        .collect(),
                )
            })
            .collect::<Result<_>>()?,
        units: units.len(),
        nodes: nodes.into_inner(),
        duplicates: duplicates.into_inner(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ybe_core::enumerate::fast_enumerate;

    #[test]
    fn matches_sequential_for_any_thread_count() {
        for n in 1..=6 {
            let seq = fast_enumerate(n, EnumerationBudget::default()).unwrap();
            for threads in [1, 3, 4] {
                let run = enumerate(
                    n,
                    &ParallelConfig {
                        threads,
                        ..Default::default()
                    },
                )
                .unwrap();
                assert_eq!(run.solutions, seq, "n = {n}, threads = {threads}");
                assert_eq!(run.duplicates, 0);
            }
        }
    }

    #[test]
    fn zero_time_budget_interrupts() {
        let config = ParallelConfig {
            threads: 2,
            time_budget: Some(Duration::ZERO),
            ..Default::default()
        };
        assert_eq!(enumerate(6, &config).unwrap_err(), Error::Interrupted);
    }

    #[test]
    fn budget_guard() {
        let err = enumerate(8, &ParallelConfig::default()).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { n: 8 });
    }
}
