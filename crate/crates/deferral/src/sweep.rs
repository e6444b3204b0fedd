//! Parameter sweeps over interest rate, lending period, instalment count,
//! bid cap and seed.

use std::path::Path;

use deferral_core::simulation::Summary;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pipeline::execute;
use crate::report::{csv_bytes, fmt2, json_bytes, write_file, SUMMARY_COLUMNS};
use crate::scenario::{Format, Scenario, SweepAxes};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub interest_rate: f64,
    pub lending_period: u32,
    pub instalment_count: u32,
    pub bid_cap_hi: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    /// `None` on success, else the error that stopped this point.
    pub error: Option<String>,
    pub upfront_annual_budget: Option<f64>,
    pub deferred: Option<Summary>,
    pub upfront: Option<Summary>,
}

/// Cartesian product of the axes, nested in the order rate, period,
/// instalments, cap scale, seed. Empty axes keep the scenario's value.
pub fn expand(base: &Scenario, axes: &SweepAxes) -> Vec<SweepPoint> {
    fn or<T: Copy>(v: &[T], d: T) -> Vec<T> {
        if v.is_empty() {
            vec![d]
        } else {
            v.to_vec()
        }
    }
    let cfg = &base.scheme;
    let rates = or(&axes.interest_rate, cfg.interest_rate);
    let periods = or(&axes.lending_period, cfg.lending_period);
    let counts = or(&axes.instalment_count, cfg.instalment_count);
    let scales = or(&axes.bid_cap_scale, 1.0);
    let seeds = or(&axes.seeds, base.seed());

    let mut points = Vec::new();
    for &interest_rate in &rates {
        for &lending_period in &periods {
            for &instalment_count in &counts {
                for &scale in &scales {
                    for &seed in &seeds {
                        points.push(SweepPoint {
                            index: points.len(),
                            interest_rate,
                            lending_period,
                            instalment_count,
                            bid_cap_hi: cfg.bid_cap_hi * scale,
                            seed,
                        });
                    }
                }
            }
        }
    }
    points
}

/// The scenario one point runs.
pub fn point_scenario(base: &Scenario, p: &SweepPoint) -> Scenario {
    let mut s = base.resolved(Some(p.seed));
    s.scheme.interest_rate = p.interest_rate;
    s.scheme.lending_period = p.lending_period;
    s.scheme.instalment_count = p.instalment_count;
    s.scheme.bid_cap_hi = p.bid_cap_hi;
    s
}

fn run_point(base: &Scenario, p: &SweepPoint) -> SweepRow {
    let scenario = point_scenario(base, p);
    match execute(&scenario) {
        Ok(r) => SweepRow {
            point: *p,
            error: None,
            upfront_annual_budget: Some(r.experiment.upfront_annual_budget),
            deferred: scenario.mechanisms.deferred().then(|| r.experiment.deferred.summary.clone()),
            upfront: scenario.mechanisms.upfront().then(|| r.experiment.upfront.summary.clone()),
        },
        Err(e) => SweepRow {
            point: *p,
            error: Some(e.to_string()),
            upfront_annual_budget: None,
            deferred: None,
            upfront: None,
        },
    }
}

/// Runs every point in parallel. A failing point is recorded in its row and
/// does not stop the others; rows come back in point order.
pub fn run_sweep(base: &Scenario) -> Vec<SweepRow> {
    expand(base, &base.sweep).par_iter().map(|p| run_point(base, p)).collect()
}

pub fn sweep_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "point",
        "interest_rate",
        "lending_period",
        "instalment_count",
        "bid_cap_hi",
        "seed",
        "status",
        "upfront_annual_budget",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for m in ["deferred", "upfront"] {
        h.extend(SUMMARY_COLUMNS.iter().map(|c| format!("{m}_{}", c.0)));
    }
    h
}

pub fn sweep_record(row: &SweepRow) -> Vec<String> {
    let p = &row.point;
    let mut r = vec![
        p.index.to_string(),
        p.interest_rate.to_string(),
        p.lending_period.to_string(),
        p.instalment_count.to_string(),
        p.bid_cap_hi.to_string(),
        p.seed.to_string(),
        row.error.clone().map_or_else(|| "ok".to_string(), |e| format!("failed: {e}")),
        row.upfront_annual_budget.map(fmt2).unwrap_or_default(),
    ];
    for s in [&row.deferred, &row.upfront] {
        r.extend(
            SUMMARY_COLUMNS
                .iter()
                .map(|(_, _, f)| s.as_ref().map(|s| fmt2(f(s))).unwrap_or_default()),
        );
    }
    r
}

/// Writes `sweep.csv` or `sweep.json` and returns the file name.
pub fn write_sweep(rows: &[SweepRow], dir: &Path, format: Format) -> Result<String> {
    std::fs::create_dir_all(dir).map_err(|e| crate::error::Error::io(dir, e))?;
    match format {
        Format::Json => write_file(dir, "sweep.json", &json_bytes(&rows)),
        Format::Csv => {
            let header = sweep_header();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            write_file(dir, "sweep.csv", &csv_bytes(&header, rows.iter().map(sweep_record)))
        }
    }
}
