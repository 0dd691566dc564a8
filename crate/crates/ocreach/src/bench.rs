//! Timing of the tripling iteration against exact propagation on random wide-weight DAGs.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::cover::{cover_table, exact_cover_table};
use crate::error::Result;
use crate::gen::random_wide_acyclic;

/// Default cap on elementary functions held by exact propagation.
pub const DEFAULT_EXACT_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub states: usize,
    pub trial: usize,
    pub fast_ms: f64,
    pub exact_ms: f64,
    pub exact_entries: usize,
    pub guard_hit: bool,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "states,trial,fast_ms,exact_ms,exact_entries,guard_hit";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.3},{:.3},{},{}",
            self.states, self.trial, self.fast_ms, self.exact_ms, self.exact_entries, self.guard_hit
        )
    }
}

/// One timing row for a seeded random automaton with `states` states and two extra edges per state.
pub fn bench_row(states: usize, trial: usize, seed: u64, exact_cap: usize) -> Result<BenchRow> {
    let mut rng = StdRng::seed_from_u64(seed ^ ((states as u64) << 32) ^ trial as u64);
    let a = random_wide_acyclic(&mut rng, states, 2);
    let start = Instant::now();
    let fast = cover_table(&a, 0, states - 1)?;
    let fast_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let exact = exact_cover_table(&a, 0, states - 1, exact_cap)?;
    let exact_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(t) = &exact.table {
        debug_assert_eq!(t, &fast);
    }
    Ok(BenchRow { states, trial, fast_ms, exact_ms, exact_entries: exact.entries, guard_hit: exact.table.is_none() })
}
