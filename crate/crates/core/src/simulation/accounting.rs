use serde::{Deserialize, Serialize};

use super::offers::Mechanism;
use super::selection::{RunOutcome, Status};
use crate::finance::{self, discount_factor};
use crate::model::SchemeConfig;

/// Headline figures of one run. Money in €, averages in €/ha over the
/// conserved sites, area-weighted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mechanism: Mechanism,
    /// Initial budget (deferred) or annual budget (up-front).
    pub budget: f64,
    pub instalment_cost_per_year: f64,
    pub offered_ha: f64,
    pub area_ha: f64,
    pub harvested_ha: f64,
    pub bd_index_sum: f64,
    pub avg_stand_age: f64,
    /// Average downpayment; for the up-front scheme, the average payment.
    pub avg_downpayment: f64,
    pub avg_instalment: f64,
    pub avg_total_payment_npv: f64,
    pub costs_npv: f64,
    pub costs_absolute: f64,
    pub benefits_npv: f64,
    /// Benefits of offered stands cut before conservation; never positive.
    pub lost_benefits: f64,
    pub ex_post_net_benefits: f64,
}

impl Default for Summary {
    fn default() -> Self {
        Summary {
            mechanism: Mechanism::Deferred,
            budget: 0.0,
            instalment_cost_per_year: 0.0,
            offered_ha: 0.0,
            area_ha: 0.0,
            harvested_ha: 0.0,
            bd_index_sum: 0.0,
            avg_stand_age: 0.0,
            avg_downpayment: 0.0,
            avg_instalment: 0.0,
            avg_total_payment_npv: 0.0,
            costs_npv: 0.0,
            costs_absolute: 0.0,
            benefits_npv: 0.0,
            lost_benefits: 0.0,
            ex_post_net_benefits: 0.0,
        }
    }
}

/// Costs, benefits and averages of a completed run.
///
/// Benefits are `benefit_per_ha · area` discounted from the year of
/// conservation; lost benefits are the same quantity, negated, for offered
/// stands harvested before they were conserved.
pub fn account(outcome: &RunOutcome, cfg: &SchemeConfig) -> Summary {
    let delta = cfg.discount_rate;
    let mut s = Summary {
        mechanism: outcome.mechanism,
        budget: outcome.budget,
        offered_ha: outcome.offered_ha,
        costs_npv: finance::npv(&outcome.spending, delta),
        costs_absolute: outcome.spending.total(),
        ..Summary::default()
    };
    let (mut age, mut down, mut inst, mut npv) = (0.0, 0.0, 0.0, 0.0);
    for site in &outcome.sites {
        let a = site.area_ha;
        match site.status {
            Status::Conserved(year) => {
                s.area_ha += a;
                s.bd_index_sum += site.elite * a;
                s.instalment_cost_per_year += site.instalment * a;
                s.benefits_npv += cfg.benefit_per_ha * a * discount_factor(delta, year);
                age += f64::from(site.stand_age) * a;
                down += site.payment_at_conservation * a;
                inst += site.instalment * a;
                npv += site.payment_npv * a;
            }
            Status::Harvested(year) => {
                s.harvested_ha += a;
                s.lost_benefits -= cfg.benefit_per_ha * a * discount_factor(delta, year);
            }
            Status::Withdrawn(_) | Status::Unselected => {}
        }
    }
    if s.area_ha > 0.0 {
        s.avg_stand_age = age / s.area_ha;
        s.avg_downpayment = down / s.area_ha;
        s.avg_instalment = inst / s.area_ha;
        s.avg_total_payment_npv = npv / s.area_ha;
    }
    s.ex_post_net_benefits = s.benefits_npv + s.lost_benefits;
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finance::CashflowStream;
    use crate::simulation::SiteOutcome;
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn site(status: Status) -> SiteOutcome {
        SiteOutcome {
            site_id: "s".to_string(),
            site_index: 0,
            area_ha: 10.0,
            elite: 0.5,
            stand_age: 120,
            conservation_payment: 7_000.0,
            payment_at_conservation: 3_000.0,
            instalment: 500.0,
            payment_npv: 7_000.0,
            status,
        }
    }

    fn outcome(sites: Vec<SiteOutcome>, spending: CashflowStream) -> RunOutcome {
        RunOutcome {
            mechanism: Mechanism::Upfront,
            budget: 1.0,
            offered_ha: 10.0 * sites.len() as f64,
            years: Vec::new(),
            spending,
            sites,
            summary: Summary::default(),
        }
    }

    #[test]
    fn everything_at_year_zero_is_undiscounted() {
        let out = outcome(vec![site(Status::Conserved(0)), site(Status::Conserved(0))], CashflowStream::new());
        let s = account(&out, &SchemeConfig::default());
        assert_eq!(s.benefits_npv, 5_980.0 * 20.0);
        assert_eq!(s.ex_post_net_benefits, s.benefits_npv);
        assert_eq!(s.lost_benefits, 0.0);
        assert_eq!(s.bd_index_sum, 10.0);
        assert_eq!(s.instalment_cost_per_year, 10_000.0);
    }

    #[test]
    fn conservation_in_year_five_is_discounted() {
        let out = outcome(vec![site(Status::Conserved(5))], CashflowStream::new());
        let s = account(&out, &SchemeConfig::default());
        assert!((s.benefits_npv - 51_580.0).abs() <= 10.0, "{}", s.benefits_npv);
    }

    #[test]
    fn losses_are_negative_and_netted() {
        let out = outcome(
            vec![site(Status::Conserved(0)), site(Status::Harvested(2)), site(Status::Unselected)],
            CashflowStream::from_pairs([(0, 30_000.0), (1, 5_000.0)]).unwrap(),
        );
        let cfg = SchemeConfig::default();
        let s = account(&out, &cfg);
        let lost = -59_800.0 / 1.03f64.powi(2);
        assert!((s.lost_benefits - lost).abs() < 1e-6);
        assert!((s.ex_post_net_benefits - (59_800.0 + lost)).abs() < 1e-6);
        assert_eq!(s.harvested_ha, 10.0);
        assert_eq!(s.area_ha, 10.0);
        assert!((s.costs_npv - (30_000.0 + 5_000.0 / 1.03)).abs() < 1e-9);
        assert_eq!(s.costs_absolute, 35_000.0);
        assert_eq!(s.avg_stand_age, 120.0);
        assert_eq!(s.avg_downpayment, 3_000.0);
    }
}
