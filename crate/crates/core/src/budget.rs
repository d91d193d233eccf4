//! Evaluation budgets.
//!
//! Work is charged in deterministic units (profile evaluations, search
//! nodes), never wall-clock time, so the same input exhausts the same budget
//! on every machine and thread count.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[error("evaluation budget of {limit} exhausted")]
pub struct BudgetExceeded {
    pub limit: u64,
}

#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
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

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used())
    }

    /// Charges `units`; fails once the running total passes the limit.
    pub fn charge(&self, units: u64) -> Result<(), BudgetExceeded> {
        let before = self.used.fetch_add(units, Ordering::Relaxed);
        if before.saturating_add(units) > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Charges a product of factors, treating overflow as exhaustion.
    pub fn charge_product(&self, factors: &[u64]) -> Result<(), BudgetExceeded> {
        let total = factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(f))
            .ok_or(BudgetExceeded { limit: self.limit })?;
        self.charge(total)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
