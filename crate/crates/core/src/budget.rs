use crate::error::{Error, Result};

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of microstates an enumeration may materialise.
    pub microstates: u128,
    /// Largest number of label tuples a path scan may range over.
    pub tuples: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            microstates: 10_000_000,
            tuples: 100_000,
        }
    }
}

impl Budget {
    /// A budget whose two limits are both `limit`.
    pub fn uniform(limit: u128) -> Self {
        Budget {
            microstates: limit,
            tuples: limit,
        }
    }

    pub fn check_microstates(&self, what: &'static str, needed: u128) -> Result<()> {
        check(what, needed, self.microstates)
    }

    pub fn check_tuples(&self, what: &'static str, needed: u128) -> Result<()> {
        check(what, needed, self.tuples)
    }
}

fn check(what: &'static str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded {
            what,
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
