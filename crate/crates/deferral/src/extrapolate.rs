//! Scaling per-hectare run averages to a national conservation target.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use deferral_core::simulation::{extrapolate_national, harvest_loss_ha, Mechanism, NationalCost, NationalInputs};
use deferral_core::SchemeConfig;

use crate::error::{Error, Result};
use crate::report::Report;

/// Reads the averages from a `report.json` with both mechanisms.
pub fn inputs_from_report(path: &Path, area_ha: f64) -> Result<NationalInputs> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: Report = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    let find = |m: Mechanism| {
        report
            .runs
            .iter()
            .find(|r| r.mechanism == m)
            .map(|r| &r.summary)
            .ok_or_else(|| Error::format(path, format!("report has no {m} run")))
    };
    let d = find(Mechanism::Deferred)?;
    let u = find(Mechanism::Upfront)?;
    Ok(NationalInputs {
        area_ha,
        avg_downpayment: d.avg_downpayment,
        avg_instalment: d.avg_instalment,
        avg_upfront: u.avg_downpayment,
    })
}

pub fn check_inputs(i: &NationalInputs, harvest_share: f64) -> Result<()> {
    let fields = [
        ("area", i.area_ha),
        ("avg-downpayment", i.avg_downpayment),
        ("avg-instalment", i.avg_instalment),
        ("avg-upfront", i.avg_upfront),
    ];
    for (name, v) in fields {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::config(format!("--{name} must be finite and >= 0, got {v}")));
        }
    }
    if !(0.0..=1.0).contains(&harvest_share) {
        return Err(Error::config(format!("--harvest-share must lie in [0, 1], got {harvest_share}")));
    }
    Ok(())
}

fn meur(x: f64) -> String {
    format!("{:.1} M€", x / 1e6)
}

/// Plain-text summary printed by `deferral extrapolate`.
pub fn render(i: &NationalInputs, cfg: &SchemeConfig, harvest_share: f64) -> (NationalCost, String) {
    let n = extrapolate_national(i, cfg);
    let mut s = String::new();
    let _ = writeln!(s, "Area: {:.0} ha", n.area_ha);
    let _ = writeln!(s, "Deferred payments");
    let _ = writeln!(s, "  downpayments (year 0): {}", meur(n.downpayments));
    let _ = writeln!(s, "  instalments: {} per year for {} years", meur(n.instalments_per_year), n.instalment_years);
    let _ = writeln!(s, "  total NPV: {}", meur(n.deferred_npv));
    let _ = writeln!(s, "  total absolute: {}", meur(n.deferred_absolute));
    let _ = writeln!(s, "Up-front payments");
    let _ = writeln!(
        s,
        "  {:.0} ha per year for {} years: {} per year",
        n.upfront_area_per_year,
        n.upfront_years,
        meur(n.upfront_annual_budget)
    );
    let _ = writeln!(s, "  total NPV: {}", meur(n.upfront_npv));
    let _ = writeln!(s, "  total absolute: {}", meur(n.upfront_absolute));
    let lost = harvest_loss_ha(n.area_ha, harvest_share);
    let _ = writeln!(
        s,
        "Note: at a harvest share of {:.1}%, about {lost:.0} ha would be cut before the up-front scheme reaches it.",
        harvest_share * 100.0
    );
    (n, s)
}
