//! The experiment engine: supply, harvest risk, budget-constrained selection
//! under both payment mechanisms, and NPV accounting.
//!
//! A typical run:
//!
//! 1. [`build_offers`] turns a dataset into the offers of one mechanism;
//! 2. [`draw_harvest_schedule`] decides when unconserved stands get cut;
//! 3. [`rank_benefit_cost`] orders the offers (optionally after
//!    [`select_old_growth`]);
//! 4. [`run_deferred`] or [`run_upfront`] spends the budget year by year and
//!    returns a [`RunOutcome`] with its [`Summary`] already computed by
//!    [`account`].
//!
//! [`run_experiment`] does all of this for both mechanisms, matching the
//! up-front budget to the deferred one.

mod accounting;
mod experiment;
mod harvest;
mod national;
mod offers;
mod selection;

use core::fmt;

use crate::ecology::EcologyError;
use crate::model::ConfigError;

pub use accounting::{account, Summary};
pub use experiment::{run_experiment, Experiment, ExperimentSpec, Ranking, UpfrontBudget};
pub use harvest::{annual_harvest_stats, draw_harvest_schedule, HarvestSchedule, HarvestYearStat};
pub use national::{extrapolate_national, harvest_loss_ha, NationalCost, NationalInputs};
pub use offers::{build_offers, draw_phi, offered_area, Mechanism, Offer, Terms};
pub use selection::{
    rank_benefit_cost, run_deferred, run_upfront, select_old_growth, RunOutcome, SiteOutcome, Status,
    YearRecord,
};

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    InvalidBudget { budget: f64 },
    Config(ConfigError),
    Ecology(EcologyError),
    /// Offers handed to a run were built for the other mechanism.
    MechanismMismatch { expected: Mechanism },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidBudget { budget } => write!(f, "budget must be finite and >= 0, got {budget}"),
            SimError::Config(e) => write!(f, "invalid scheme configuration: {e}"),
            SimError::Ecology(e) => write!(f, "{e}"),
            SimError::MechanismMismatch { expected } => {
                write!(f, "offers were not built for the {expected} mechanism")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SimError {}

impl From<ConfigError> for SimError {
    fn from(e: ConfigError) -> Self {
        SimError::Config(e)
    }
}

impl From<EcologyError> for SimError {
    fn from(e: EcologyError) -> Self {
        SimError::Ecology(e)
    }
}
