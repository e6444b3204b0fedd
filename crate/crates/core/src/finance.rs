//! Payment arithmetic: compounding, instalments, revenue, NPV and budget
//! matching between the deferred and up-front mechanisms.

use alloc::collections::BTreeMap;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum FinanceError {
    /// The downpayment exceeds the conservation payment, so there is no loan.
    DownpaymentExceedsPayment { downpayment: f64, payment: f64 },
    ZeroInstalments,
    NonFiniteAmount { year: u32 },
    DuplicateYear { year: u32 },
}

impl fmt::Display for FinanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinanceError::DownpaymentExceedsPayment { downpayment, payment } => write!(
                f,
                "downpayment {downpayment:.2} exceeds conservation payment {payment:.2}"
            ),
            FinanceError::ZeroInstalments => f.write_str("instalment count must be >= 1"),
            FinanceError::NonFiniteAmount { year } => write!(f, "non-finite amount in year {year}"),
            FinanceError::DuplicateYear { year } => write!(f, "year {year} appears twice"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FinanceError {}

/// `(1+r)^t`.
pub fn compound_factor(r: f64, t: u32) -> f64 {
    math::powi(1.0 + r, t)
}

/// `(1+d)^-year`.
pub fn discount_factor(delta: f64, year: u32) -> f64 {
    1.0 / math::powi(1.0 + delta, year)
}

fn loan(v1: f64, c: f64) -> Result<f64, FinanceError> {
    if c > v1 {
        Err(FinanceError::DownpaymentExceedsPayment {
            downpayment: c,
            payment: v1,
        })
    } else {
        Ok(v1 - c)
    }
}

/// Annual instalment `m = (1+r)^t (v1 - c) / x`.
pub fn annual_instalment(v1: f64, c: f64, r: f64, t: u32, x: u32) -> Result<f64, FinanceError> {
    if x == 0 {
        return Err(FinanceError::ZeroInstalments);
    }
    Ok(compound_factor(r, t) * loan(v1, c)? / f64::from(x))
}

/// Landowner revenue `R = c + (1+r)^t (v1 - c)`.
pub fn total_revenue(v1: f64, c: f64, r: f64, t: u32) -> Result<f64, FinanceError> {
    Ok(c + compound_factor(r, t) * loan(v1, c)?)
}

/// Year-indexed payments. Years are unique and iterate in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CashflowStream {
    amounts: BTreeMap<u32, f64>,
}

impl CashflowStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a stream from explicit pairs; each year may appear once.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, FinanceError>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut amounts = BTreeMap::new();
        for (year, amount) in pairs {
            if !amount.is_finite() {
                return Err(FinanceError::NonFiniteAmount { year });
            }
            if amounts.insert(year, amount).is_some() {
                return Err(FinanceError::DuplicateYear { year });
            }
        }
        Ok(CashflowStream { amounts })
    }

    /// Adds `amount` to whatever is already booked in `year`.
    pub fn add(&mut self, year: u32, amount: f64) {
        *self.amounts.entry(year).or_insert(0.0) += amount;
    }

    /// The same amount in every year of `years`.
    pub fn level<I: IntoIterator<Item = u32>>(amount: f64, years: I) -> Self {
        let mut s = Self::new();
        for y in years {
            s.add(y, amount);
        }
        s
    }

    pub fn get(&self, year: u32) -> f64 {
        self.amounts.get(&year).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.amounts.iter().map(|(&y, &a)| (y, a))
    }

    pub fn last_year(&self) -> Option<u32> {
        self.amounts.keys().next_back().copied()
    }

    pub fn total(&self) -> f64 {
        self.amounts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.amounts.is_empty()
    }

    /// Element-wise sum of two streams.
    pub fn merged(&self, other: &CashflowStream) -> CashflowStream {
        let mut out = self.clone();
        for (y, a) in other.iter() {
            out.add(y, a);
        }
        out
    }
}

/// `Σ amount_y (1+delta)^-y`; year zero is undiscounted.
pub fn npv(stream: &CashflowStream, delta: f64) -> f64 {
    stream.iter().map(|(y, a)| a * discount_factor(delta, y)).sum()
}

/// Present value of `periods` end-of-year instalments of `m`.
pub fn discounted_instalment_sum(m: f64, periods: u32, delta: f64) -> f64 {
    (1..=periods).map(|i| m * discount_factor(delta, i)).sum()
}

/// `Σ_{y=0}^{horizon-1} (1+delta)^-y`: value of one euro paid at the start of
/// each year.
pub fn annuity_due_factor(horizon: u32, delta: f64) -> f64 {
    (0..horizon).map(|y| discount_factor(delta, y)).sum()
}

/// NPV of a deferred-scheme budget: `initial` in year 0 plus
/// `instalment_cost_per_year` in years `1..=years`.
pub fn deferred_budget_npv(initial: f64, instalment_cost_per_year: f64, years: u32, delta: f64) -> f64 {
    initial + discounted_instalment_sum(instalment_cost_per_year, years, delta)
}

/// Constant annual budget, paid in years `0..horizon`, whose NPV equals the
/// deferred stream's.
pub fn match_upfront_budget(
    initial: f64,
    instalment_cost_per_year: f64,
    years: u32,
    delta: f64,
    horizon: u32,
) -> f64 {
    assert!(horizon >= 1, "horizon must be at least one year");
    deferred_budget_npv(initial, instalment_cost_per_year, years, delta) / annuity_due_factor(horizon, delta)
}
