use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::accounting::{account, Summary};
use super::harvest::HarvestSchedule;
use super::offers::{Mechanism, Offer};
use super::SimError;
use crate::finance::CashflowStream;
use crate::model::SchemeConfig;

/// Benefit/cost order: `elite · area / cost` descending, then cheaper first,
/// then by site id. Returns indices into `offers`.
pub fn rank_benefit_cost(offers: &[Offer]) -> Vec<usize> {
    let ratio = |o: &Offer| {
        let benefit = o.elite * o.area_ha;
        let cost = o.cost();
        if cost > 0.0 {
            benefit / cost
        } else if benefit > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    let mut order: Vec<usize> = (0..offers.len()).collect();
    order.sort_by(|&a, &b| {
        let (oa, ob) = (&offers[a], &offers[b]);
        ratio(ob)
            .total_cmp(&ratio(oa))
            .then_with(|| oa.cost().total_cmp(&ob.cost()))
            .then_with(|| oa.site_id.cmp(&ob.site_id))
            .then_with(|| a.cmp(&b))
    });
    order
}

/// Keeps the offers on stands meeting the old-growth age criteria.
pub fn select_old_growth(offers: &[Offer]) -> Vec<Offer> {
    offers.iter().filter(|o| o.old_growth).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "year", rename_all = "snake_case")]
pub enum Status {
    Conserved(u32),
    /// Cut while still waiting to be funded.
    Harvested(u32),
    /// Cut before the deferred scheme's only funding round.
    Withdrawn(u32),
    Unselected,
}

/// Everything the ledger needs about one offer after a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteOutcome {
    pub site_id: String,
    pub site_index: usize,
    pub area_ha: f64,
    pub elite: f64,
    pub stand_age: u32,
    pub conservation_payment: f64,
    /// Downpayment (deferred) or full payment (up-front), €/ha.
    pub payment_at_conservation: f64,
    pub instalment: f64,
    pub payment_npv: f64,
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct YearRecord {
    pub year: u32,
    pub budget: f64,
    pub spent: f64,
    pub conserved: Vec<String>,
    pub harvested: Vec<String>,
}

/// The full record of one mechanism's run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub mechanism: Mechanism,
    /// Initial budget (deferred) or annual budget (up-front).
    pub budget: f64,
    pub offered_ha: f64,
    pub years: Vec<YearRecord>,
    pub spending: CashflowStream,
    /// One entry per offer, in offer order.
    pub sites: Vec<SiteOutcome>,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn conserved_ids(&self) -> Vec<&str> {
        self.years
            .iter()
            .flat_map(|y| y.conserved.iter().map(String::as_str))
            .collect()
    }

    pub fn harvested_ids(&self) -> Vec<&str> {
        self.years
            .iter()
            .flat_map(|y| y.harvested.iter().map(String::as_str))
            .collect()
    }
}

fn check_budget(budget: f64) -> Result<(), SimError> {
    if budget.is_finite() && budget >= 0.0 {
        Ok(())
    } else {
        Err(SimError::InvalidBudget { budget })
    }
}

fn check_mechanism(offers: &[Offer], expected: Mechanism) -> Result<(), SimError> {
    if offers.iter().all(|o| o.mechanism() == expected) {
        Ok(())
    } else {
        Err(SimError::MechanismMismatch { expected })
    }
}

fn fits(cost: f64, remaining: f64, budget: f64) -> bool {
    cost <= remaining + 1e-9 * budget.max(1.0)
}

fn site_outcome(o: &Offer, status: Status, cfg: &SchemeConfig) -> SiteOutcome {
    SiteOutcome {
        site_id: o.site_id.clone(),
        site_index: o.site_index,
        area_ha: o.area_ha,
        elite: o.elite,
        stand_age: o.stand_age,
        conservation_payment: o.conservation_payment,
        payment_at_conservation: o.payment_at_conservation(),
        instalment: o.instalment(),
        payment_npv: o.payment_npv(cfg),
        status,
    }
}

fn finish(
    mechanism: Mechanism,
    budget: f64,
    offers: &[Offer],
    status: &[Status],
    years: Vec<YearRecord>,
    spending: CashflowStream,
    cfg: &SchemeConfig,
) -> RunOutcome {
    let sites = offers
        .iter()
        .zip(status)
        .map(|(o, s)| site_outcome(o, *s, cfg))
        .collect();
    let mut outcome = RunOutcome {
        mechanism,
        budget,
        offered_ha: super::offered_area(offers),
        years,
        spending,
        sites,
        summary: Summary::default(),
    };
    outcome.summary = account(&outcome, cfg);
    outcome
}

/// Deferred mechanism: one funding round at year 0 pays downpayments from
/// `initial_budget`, skipping offers that do not fit and continuing down the
/// ranking. Funded sites then draw their instalments in years `1..=x`.
/// Offers harvested in year 0 are withdrawn before the round.
pub fn run_deferred(
    offers: &[Offer],
    cfg: &SchemeConfig,
    initial_budget: f64,
    ranking: &[usize],
    schedule: &HarvestSchedule,
) -> Result<RunOutcome, SimError> {
    check_budget(initial_budget)?;
    check_mechanism(offers, Mechanism::Deferred)?;
    let mut status = vec![Status::Unselected; offers.len()];
    let mut remaining = initial_budget;
    let mut year0 = YearRecord {
        year: 0,
        budget: initial_budget,
        ..YearRecord::default()
    };
    let mut instalments = 0.0;

    for &i in ranking {
        let o = &offers[i];
        if schedule.harvested_by(o.site_index, 0) {
            status[i] = Status::Withdrawn(0);
            continue;
        }
        if initial_budget == 0.0 || !o.fundable(cfg) {
            continue;
        }
        let cost = o.cost();
        if fits(cost, remaining, initial_budget) {
            remaining = (remaining - cost).max(0.0);
            year0.spent += cost;
            instalments += o.instalment() * o.area_ha;
            year0.conserved.push(o.site_id.clone());
            status[i] = Status::Conserved(0);
        }
    }

    let mut spending = CashflowStream::new();
    spending.add(0, year0.spent);
    let last = cfg.horizon().max(cfg.instalment_count + 1);
    let mut years = vec![year0];
    for y in 1..last {
        let paid = if y <= cfg.instalment_count { instalments } else { 0.0 };
        if y <= cfg.instalment_count {
            spending.add(y, paid);
        }
        years.push(YearRecord {
            year: y,
            budget: paid,
            spent: paid,
            ..YearRecord::default()
        });
    }
    Ok(finish(Mechanism::Deferred, initial_budget, offers, &status, years, spending, cfg))
}

/// Up-front mechanism: every year of the horizon, first remove offers whose
/// stands were harvested, then fund ranked offers from that year's budget,
/// skipping the ones that do not fit.
pub fn run_upfront(
    offers: &[Offer],
    cfg: &SchemeConfig,
    annual_budget: f64,
    ranking: &[usize],
    schedule: &HarvestSchedule,
) -> Result<RunOutcome, SimError> {
    check_budget(annual_budget)?;
    check_mechanism(offers, Mechanism::Upfront)?;
    let mut status = vec![Status::Unselected; offers.len()];
    let mut spending = CashflowStream::new();
    let mut years = Vec::new();
    let mut carry = 0.0;

    for y in 0..cfg.horizon() {
        let budget = annual_budget + carry;
        let mut record = YearRecord {
            year: y,
            budget,
            ..YearRecord::default()
        };
        for &i in ranking {
            let o = &offers[i];
            if status[i] == Status::Unselected && schedule.harvested_by(o.site_index, y) {
                status[i] = Status::Harvested(y);
                record.harvested.push(o.site_id.clone());
            }
        }
        let mut remaining = budget;
        if annual_budget > 0.0 {
            for &i in ranking {
                let o = &offers[i];
                if status[i] != Status::Unselected || !o.fundable(cfg) {
                    continue;
                }
                let cost = o.cost();
                if fits(cost, remaining, budget) {
                    remaining = (remaining - cost).max(0.0);
                    record.spent += cost;
                    record.conserved.push(o.site_id.clone());
                    status[i] = Status::Conserved(y);
                }
            }
        }
        spending.add(y, record.spent);
        carry = if cfg.upfront_budget_rollover { remaining } else { 0.0 };
        years.push(record);
    }
    Ok(finish(Mechanism::Upfront, annual_budget, offers, &status, years, spending, cfg))
}
