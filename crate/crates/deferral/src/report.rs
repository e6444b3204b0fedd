//! Run reports.
//!
//! CSV output (numbers rounded to 0.01):
//! - `summary.csv`: one row per mechanism, the [`SUMMARY_COLUMNS`];
//! - `table.csv`: the same figures laid out as a two-column results table;
//! - `timeseries.csv`: annual and cumulative cost, area and harvest losses;
//! - `sites.csv`: per-offer ledger;
//! - `excluded_rows.csv`: input rows left out, when there are any.
//!
//! JSON output is a single `report.json` ([`Report`]) at full precision.

use std::fs;
use std::path::Path;

use deferral_core::simulation::{Mechanism, RunOutcome, Status, Summary};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::RunResult;
use crate::scenario::Format;
use crate::sites::RowIssue;

pub const REPORT_VERSION: u32 = 1;

/// Fixed two-decimal rendering used in every CSV report.
pub fn fmt2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

type Column = (&'static str, &'static str, fn(&Summary) -> f64);

/// `(csv column, table label, value)` for every summary figure.
pub const SUMMARY_COLUMNS: [Column; 15] = [
    ("budget", "Initial budget (deferred) or annual budget (up-front), €", |s| s.budget),
    ("instalment_cost_per_year", "Cost of instalments, €/year", |s| s.instalment_cost_per_year),
    ("offered_ha", "Offered area, ha", |s| s.offered_ha),
    ("area_ha", "Area, ha", |s| s.area_ha),
    ("harvested_ha", "Harvested sites, ha", |s| s.harvested_ha),
    ("bd_index_sum", "BD index, sum", |s| s.bd_index_sum),
    ("avg_stand_age", "Stand age, avg., years", |s| s.avg_stand_age),
    ("avg_downpayment", "Downpayments (deferred) or payments (up-front), avg., €/ha", |s| s.avg_downpayment),
    ("avg_instalment", "Instalments, avg., €/ha/year", |s| s.avg_instalment),
    ("avg_total_payment_npv", "Total payment, NPV, avg., €/ha", |s| s.avg_total_payment_npv),
    ("costs_npv", "Costs, total (NPV), €", |s| s.costs_npv),
    ("costs_absolute", "Costs, total (absolute), €", |s| s.costs_absolute),
    ("benefits_npv", "Benefits, total (NPV), €", |s| s.benefits_npv),
    ("lost_benefits", "Lost benefits in harvests, €", |s| s.lost_benefits),
    ("ex_post_net_benefits", "Ex post net benefits, €", |s| s.ex_post_net_benefits),
];

pub fn summary_values(s: &Summary) -> Vec<String> {
    SUMMARY_COLUMNS.iter().map(|(_, _, f)| fmt2(f(s))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub year: u32,
    pub budget: f64,
    pub spent: f64,
    pub cumulative_cost: f64,
    pub conserved_ha: f64,
    pub cumulative_area_ha: f64,
    pub harvested_ha: f64,
    pub cumulative_harvested_ha: f64,
}

pub fn time_series(out: &RunOutcome) -> Vec<SeriesRow> {
    let mut rows = Vec::with_capacity(out.years.len());
    let (mut cost, mut area, mut lost) = (0.0, 0.0, 0.0);
    for y in &out.years {
        let mut conserved_ha = 0.0;
        let mut harvested_ha = 0.0;
        for s in &out.sites {
            match s.status {
                Status::Conserved(v) if v == y.year => conserved_ha += s.area_ha,
                Status::Harvested(v) if v == y.year => harvested_ha += s.area_ha,
                _ => {}
            }
        }
        cost += y.spent;
        area += conserved_ha;
        lost += harvested_ha;
        rows.push(SeriesRow {
            year: y.year,
            budget: y.budget,
            spent: y.spent,
            cumulative_cost: cost,
            conserved_ha,
            cumulative_area_ha: area,
            harvested_ha,
            cumulative_harvested_ha: lost,
        });
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub site_id: String,
    pub site_index: usize,
    pub area_ha: f64,
    pub elite: f64,
    pub stand_age: u32,
    pub conservation_payment: f64,
    /// Downpayment (deferred) or full payment (up-front), €/ha.
    pub payment: f64,
    pub instalment: f64,
    pub payment_npv: f64,
    pub status: String,
    pub year: Option<u32>,
}

fn status_parts(s: Status) -> (&'static str, Option<u32>) {
    match s {
        Status::Conserved(y) => ("conserved", Some(y)),
        Status::Harvested(y) => ("lost", Some(y)),
        Status::Withdrawn(y) => ("withdrawn", Some(y)),
        Status::Unselected => ("unselected", None),
    }
}

pub fn ledger(out: &RunOutcome) -> Vec<LedgerRow> {
    out.sites
        .iter()
        .map(|s| {
            let (status, year) = status_parts(s.status);
            LedgerRow {
                site_id: s.site_id.clone(),
                site_index: s.site_index,
                area_ha: s.area_ha,
                elite: s.elite,
                stand_age: s.stand_age,
                conservation_payment: s.conservation_payment,
                payment: s.payment_at_conservation,
                instalment: s.instalment,
                payment_npv: s.payment_npv,
                status: status.to_string(),
                year,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MechanismReport {
    pub mechanism: Mechanism,
    pub summary: Summary,
    pub series: Vec<SeriesRow>,
    pub sites: Vec<LedgerRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub seed: u64,
    pub upfront_annual_budget: f64,
    pub excluded_rows: Vec<RowIssue>,
    pub runs: Vec<MechanismReport>,
}

pub fn build_report(result: &RunResult) -> Report {
    Report {
        version: REPORT_VERSION,
        seed: result.scenario.seed(),
        upfront_annual_budget: result.experiment.upfront_annual_budget,
        excluded_rows: result.dataset.issues.clone(),
        runs: result
            .outcomes()
            .into_iter()
            .map(|o| MechanismReport {
                mechanism: o.mechanism,
                summary: o.summary.clone(),
                series: time_series(o),
                sites: ledger(o),
            })
            .collect(),
    }
}

pub(crate) fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing into memory cannot fail.
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub(crate) fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<String> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(name.to_string())
}

pub(crate) fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

/// Writes the report files into `dir` and returns their names.
pub fn write_report(result: &RunResult, dir: &Path, format: Format) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let report = build_report(result);
    match format {
        Format::Json => Ok(vec![write_file(dir, "report.json", &json_bytes(&report))?]),
        Format::Csv => write_csv(&report, dir),
    }
}

fn write_csv(report: &Report, dir: &Path) -> Result<Vec<String>> {
    let mut files = Vec::new();

    let mut header = vec!["mechanism"];
    header.extend(SUMMARY_COLUMNS.iter().map(|c| c.0));
    let rows = report.runs.iter().map(|r| {
        let mut row = vec![r.mechanism.as_str().to_string()];
        row.extend(summary_values(&r.summary));
        row
    });
    files.push(write_file(dir, "summary.csv", &csv_bytes(&header, rows))?);

    let mut header = vec!["item"];
    header.extend(report.runs.iter().map(|r| r.mechanism.as_str()));
    let rows = SUMMARY_COLUMNS.iter().map(|(_, label, f)| {
        let mut row = vec![label.to_string()];
        row.extend(report.runs.iter().map(|r| fmt2(f(&r.summary))));
        row
    });
    files.push(write_file(dir, "table.csv", &csv_bytes(&header, rows))?);

    let header = [
        "mechanism",
        "year",
        "budget",
        "spent",
        "cumulative_cost",
        "conserved_ha",
        "cumulative_area_ha",
        "harvested_ha",
        "cumulative_harvested_ha",
    ];
    let rows = report.runs.iter().flat_map(|r| {
        r.series.iter().map(move |s| {
            vec![
                r.mechanism.as_str().to_string(),
                s.year.to_string(),
                fmt2(s.budget),
                fmt2(s.spent),
                fmt2(s.cumulative_cost),
                fmt2(s.conserved_ha),
                fmt2(s.cumulative_area_ha),
                fmt2(s.harvested_ha),
                fmt2(s.cumulative_harvested_ha),
            ]
        })
    });
    files.push(write_file(dir, "timeseries.csv", &csv_bytes(&header, rows))?);

    let header = [
        "mechanism",
        "site_id",
        "site_index",
        "area_ha",
        "elite",
        "stand_age",
        "conservation_payment",
        "payment",
        "instalment",
        "payment_npv",
        "status",
        "year",
    ];
    let rows = report.runs.iter().flat_map(|r| {
        r.sites.iter().map(move |s| {
            vec![
                r.mechanism.as_str().to_string(),
                s.site_id.clone(),
                s.site_index.to_string(),
                fmt2(s.area_ha),
                fmt2(s.elite),
                s.stand_age.to_string(),
                fmt2(s.conservation_payment),
                fmt2(s.payment),
                fmt2(s.instalment),
                fmt2(s.payment_npv),
                s.status.clone(),
                s.year.map(|y| y.to_string()).unwrap_or_default(),
            ]
        })
    });
    files.push(write_file(dir, "sites.csv", &csv_bytes(&header, rows))?);

    if !report.excluded_rows.is_empty() {
        let rows = report.excluded_rows.iter().map(|i| {
            vec![
                i.line.to_string(),
                i.id.clone().unwrap_or_default(),
                i.problems.join("; "),
            ]
        });
        files.push(write_file(dir, "excluded_rows.csv", &csv_bytes(&["line", "id", "problems"], rows))?);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_decimal_rendering() {
        assert_eq!(fmt2(1_204_900.456), "1204900.46");
        assert_eq!(fmt2(-0.001), "0.00");
        assert_eq!(fmt2(0.0), "0.00");
        assert_eq!(fmt2(-956_800.0), "-956800.00");
    }

    #[test]
    fn summary_columns_are_unique() {
        let mut names: Vec<_> = SUMMARY_COLUMNS.iter().map(|c| c.0).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), SUMMARY_COLUMNS.len());
    }
}
