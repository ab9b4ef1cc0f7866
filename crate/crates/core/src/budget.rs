use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default work budget for searches, in work units.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Deterministic work counter shared by the branches of one search.
///
/// Work units are counted, not time. If a search finishes within the budget
/// the total is the same for any worker count, so whether a run exceeds the
/// budget does not depend on the machine.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Records `units` of work; returns false once the budget is exhausted.
    pub fn charge(&self, units: u64) -> bool {
        let before = self.used.fetch_add(units, Ordering::Relaxed);
        before.saturating_add(units) <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used() > self.limit
    }

    pub fn check(&self) -> Result<()> {
        if self.exhausted() {
            Err(Error::BudgetExceeded { used: self.used(), budget: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
