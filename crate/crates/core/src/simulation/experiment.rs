use serde::{Deserialize, Serialize};

use super::harvest::{draw_harvest_schedule, HarvestSchedule};
use super::offers::{build_offers, Mechanism, Offer};
use super::selection::{rank_benefit_cost, run_deferred, run_upfront, select_old_growth, RunOutcome};
use super::SimError;
use crate::ecology::EliteTable;
use crate::finance;
use crate::model::{SchemeConfig, SiteRecord};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ranking {
    #[default]
    BenefitCost,
    /// Only old-growth stands, then benefit/cost order.
    OldGrowth,
}

/// How the up-front scheme's annual budget is set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpfrontBudget {
    Fixed(f64),
    /// Same NPV as what the deferred run actually spends.
    MatchSpent,
    /// Same NPV as the deferred initial budget plus the instalments it committed.
    MatchAllotted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub initial_budget: f64,
    pub upfront_budget: UpfrontBudget,
    pub ranking: Ranking,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            initial_budget: 5_000_000.0,
            upfront_budget: UpfrontBudget::MatchSpent,
            ranking: Ranking::BenefitCost,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub deferred: RunOutcome,
    pub upfront: RunOutcome,
    pub upfront_annual_budget: f64,
    pub harvest: HarvestSchedule,
}

fn ranked(offers: &[Offer], ranking: Ranking) -> (alloc::vec::Vec<Offer>, alloc::vec::Vec<usize>) {
    let pool = match ranking {
        Ranking::BenefitCost => offers.to_vec(),
        Ranking::OldGrowth => select_old_growth(offers),
    };
    let order = rank_benefit_cost(&pool);
    (pool, order)
}

/// Runs both mechanisms on one dataset with a shared harvest schedule.
pub fn run_experiment(
    sites: &[SiteRecord],
    cfg: &SchemeConfig,
    table: &EliteTable,
    spec: &ExperimentSpec,
) -> Result<Experiment, SimError> {
    let harvest = draw_harvest_schedule(sites, cfg);

    let (pool, order) = ranked(&build_offers(sites, cfg, table, Mechanism::Deferred)?, spec.ranking);
    let deferred = run_deferred(&pool, cfg, spec.initial_budget, &order, &harvest)?;

    let delta = cfg.discount_rate;
    let horizon = cfg.horizon();
    let upfront_annual_budget = match spec.upfront_budget {
        UpfrontBudget::Fixed(b) => b,
        UpfrontBudget::MatchSpent => {
            finance::npv(&deferred.spending, delta) / finance::annuity_due_factor(horizon, delta)
        }
        UpfrontBudget::MatchAllotted => finance::match_upfront_budget(
            spec.initial_budget,
            deferred.summary.instalment_cost_per_year,
            cfg.instalment_count,
            delta,
            horizon,
        ),
    };

    let (pool, order) = ranked(&build_offers(sites, cfg, table, Mechanism::Upfront)?, spec.ranking);
    let upfront = run_upfront(&pool, cfg, upfront_annual_budget, &order, &harvest)?;

    Ok(Experiment {
        deferred,
        upfront,
        upfront_annual_budget,
        harvest,
    })
}
