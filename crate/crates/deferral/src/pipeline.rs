use std::collections::HashSet;

use deferral_core::finance;
use deferral_core::simulation::{run_experiment, Experiment, Mechanism, RunOutcome, Status};
use deferral_core::synthetic::generate_synthetic;
use deferral_core::SiteRecord;

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::sites::{load_sites, RowIssue};

/// Dataset rows actually simulated, plus the rows left out.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub sites: Vec<SiteRecord>,
    pub issues: Vec<RowIssue>,
}

pub fn load_dataset(scenario: &Scenario) -> Result<Dataset> {
    match (&scenario.dataset.path, &scenario.dataset.synthetic) {
        (Some(path), _) => {
            let loaded = load_sites(path)?;
            Ok(Dataset {
                sites: loaded.sites,
                issues: loaded.issues,
            })
        }
        (None, profile) => {
            let profile = profile.clone().unwrap_or_default();
            Ok(Dataset {
                sites: generate_synthetic(&profile, scenario.seed())?,
                issues: Vec::new(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub scenario: Scenario,
    pub dataset: Dataset,
    pub experiment: Experiment,
}

impl RunResult {
    /// The outcomes the scenario asked for, deferred first.
    pub fn outcomes(&self) -> Vec<&RunOutcome> {
        let mut v = Vec::new();
        if self.scenario.mechanisms.deferred() {
            v.push(&self.experiment.deferred);
        }
        if self.scenario.mechanisms.upfront() {
            v.push(&self.experiment.upfront);
        }
        v
    }
}

/// Runs a resolved scenario without writing anything.
pub fn execute(scenario: &Scenario) -> Result<RunResult> {
    scenario.validate()?;
    let dataset = load_dataset(scenario)?;
    let table = scenario.elite()?;
    let experiment = run_experiment(&dataset.sites, &scenario.scheme, &table, &scenario.experiment_spec())?;
    check_outcome(&experiment.deferred, scenario)?;
    check_outcome(&experiment.upfront, scenario)?;
    Ok(RunResult {
        scenario: scenario.clone(),
        dataset,
        experiment,
    })
}

fn breach(mechanism: Mechanism, what: String) -> Error {
    Error::Internal(format!("{mechanism} run: {what}"))
}

/// Invariants every outcome must satisfy; a failure is a bug.
fn check_outcome(out: &RunOutcome, scenario: &Scenario) -> Result<()> {
    let m = out.mechanism;
    let mut seen = HashSet::new();
    for id in out.conserved_ids().into_iter().chain(out.harvested_ids()) {
        if !seen.insert(id) {
            return Err(breach(m, format!("site {id} recorded twice")));
        }
    }
    for y in &out.years {
        if y.spent > y.budget * (1.0 + 1e-9) + 1e-6 {
            return Err(breach(m, format!("year {} spent {} of {}", y.year, y.spent, y.budget)));
        }
    }
    let npv = finance::npv(&out.spending, scenario.scheme.discount_rate);
    if (npv - out.summary.costs_npv).abs() > 0.01 {
        return Err(breach(m, format!("cost NPV {} != spending NPV {npv}", out.summary.costs_npv)));
    }
    if m == Mechanism::Deferred {
        let late = out
            .sites
            .iter()
            .any(|s| matches!(s.status, Status::Conserved(y) | Status::Harvested(y) if y > 0));
        if late {
            return Err(breach(m, "site conserved or lost after year 0".into()));
        }
    }
    Ok(())
}
