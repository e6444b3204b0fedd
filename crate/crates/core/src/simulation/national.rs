use serde::{Deserialize, Serialize};

use crate::finance::{self, CashflowStream};
use crate::model::SchemeConfig;

/// Per-hectare averages scaled up to a national conservation target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NationalInputs {
    pub area_ha: f64,
    pub avg_downpayment: f64,
    pub avg_instalment: f64,
    /// Average up-front payment, €/ha.
    pub avg_upfront: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NationalCost {
    pub area_ha: f64,
    pub downpayments: f64,
    pub instalments_per_year: f64,
    pub instalment_years: u32,
    pub deferred_npv: f64,
    pub deferred_absolute: f64,
    pub upfront_years: u32,
    pub upfront_area_per_year: f64,
    pub upfront_annual_budget: f64,
    pub upfront_npv: f64,
    pub upfront_absolute: f64,
}

/// Deferred: the whole area at year 0 plus `x` years of instalments.
/// Up-front: the same area bought in equal slices over the horizon.
pub fn extrapolate_national(inputs: &NationalInputs, cfg: &SchemeConfig) -> NationalCost {
    let delta = cfg.discount_rate;
    let x = cfg.instalment_count;
    let downpayments = inputs.area_ha * inputs.avg_downpayment;
    let instalments_per_year = inputs.area_ha * inputs.avg_instalment;
    let mut deferred = CashflowStream::level(instalments_per_year, 1..=x);
    deferred.add(0, downpayments);

    let years = cfg.horizon();
    let upfront_area_per_year = inputs.area_ha / f64::from(years);
    let upfront_annual_budget = upfront_area_per_year * inputs.avg_upfront;
    let upfront = CashflowStream::level(upfront_annual_budget, 0..years);

    NationalCost {
        area_ha: inputs.area_ha,
        downpayments,
        instalments_per_year,
        instalment_years: x,
        deferred_npv: finance::npv(&deferred, delta),
        deferred_absolute: deferred.total(),
        upfront_years: years,
        upfront_area_per_year,
        upfront_annual_budget,
        upfront_npv: finance::npv(&upfront, delta),
        upfront_absolute: upfront.total(),
    }
}

/// Area cut before protection when `share` of it is harvested meanwhile.
pub fn harvest_loss_ha(area_ha: f64, share: f64) -> f64 {
    area_ha * share
}
