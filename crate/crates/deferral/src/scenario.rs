//! Scenario files (TOML).
//!
//! Every table and key is optional; omitted values take the defaults below.
//!
//! ```toml
//! seed = 1
//! mechanisms = "both"          # "deferred", "upfront" or "both"
//! ranking = "benefit_cost"     # or "old_growth"
//! elite_table = "elite.csv"    # default ELITE components when absent
//!
//! [dataset]
//! path = "sites.csv"           # or a [dataset.synthetic] table
//!
//! [scheme]
//! interest_rate = 0.03
//! lending_period = 10
//! instalment_count = 10
//! bid_cap_hi = 4000.0
//!
//! [budget]
//! initial = 5000000.0
//! upfront = "npv-matched"      # or an annual amount in euros
//! match_against = "spent"      # or "allotted"
//!
//! [output]
//! dir = "out"
//! format = "csv"               # or "json"
//!
//! [sweep]
//! interest_rate = [0.02, 0.03, 0.04]
//! instalment_count = [10, 20]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use deferral_core::ecology::EliteTable;
use deferral_core::simulation::{ExperimentSpec, Ranking, UpfrontBudget};
use deferral_core::synthetic::SyntheticProfile;
use deferral_core::SchemeConfig;
use serde::{Deserialize, Serialize};

use crate::elite::load_elite_table;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismSet {
    #[default]
    Both,
    Deferred,
    Upfront,
}

impl MechanismSet {
    pub fn deferred(self) -> bool {
        self != MechanismSet::Upfront
    }

    pub fn upfront(self) -> bool {
        self != MechanismSet::Deferred
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticProfile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpfrontMode {
    #[serde(rename = "npv-matched")]
    NpvMatched,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UpfrontSetting {
    Annual(f64),
    Mode(UpfrontMode),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchAgainst {
    #[default]
    Spent,
    Allotted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetSpec {
    /// Deferred scheme's year-0 budget, €.
    pub initial: f64,
    pub upfront: UpfrontSetting,
    pub match_against: MatchAgainst,
}

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec {
            initial: 5_000_000.0,
            upfront: UpfrontSetting::Mode(UpfrontMode::NpvMatched),
            match_against: MatchAgainst::Spent,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub format: Format,
}

/// Axis values of a parameter sweep. Empty axes keep the scenario's value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub interest_rate: Vec<f64>,
    /// Sets the lending period `t` only.
    pub lending_period: Vec<u32>,
    /// Sets the number of instalments `x` only.
    pub instalment_count: Vec<u32>,
    /// Multiplies the scenario's `bid_cap_hi`.
    pub bid_cap_scale: Vec<f64>,
    /// Master seeds; each point uses its value for the dataset and all draws.
    pub seeds: Vec<u64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            interest_rate: vec![0.02, 0.03, 0.04],
            lending_period: Vec::new(),
            instalment_count: vec![10, 20],
            bid_cap_scale: Vec::new(),
            seeds: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    /// Master seed; `scheme.seed` is overwritten with it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub mechanisms: MechanismSet,
    pub ranking: Ranking,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elite_table: Option<PathBuf>,
    pub dataset: DatasetSpec,
    pub scheme: SchemeConfig,
    pub budget: BudgetSpec,
    pub output: OutputSpec,
    pub sweep: SweepAxes,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("scenario: {}", e.message())))
    }

    /// Reads a scenario and makes its relative paths relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = s.dataset.path.as_mut() {
            rebase(p);
        }
        if let Some(p) = s.elite_table.as_mut() {
            rebase(p);
        }
        if let Some(p) = s.output.dir.as_mut() {
            rebase(p);
        }
        Ok(s)
    }

    /// Fixes the seed and the dataset choice so the scenario fully
    /// describes a run.
    pub fn resolved(&self, seed_override: Option<u64>) -> Self {
        let mut s = self.clone();
        let seed = seed_override.or(self.seed).unwrap_or(self.scheme.seed);
        s.seed = Some(seed);
        s.scheme.seed = seed;
        if s.dataset.path.is_none() && s.dataset.synthetic.is_none() {
            s.dataset.synthetic = Some(SyntheticProfile::default());
        }
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(self.scheme.seed)
    }

    pub fn elite(&self) -> Result<EliteTable> {
        match &self.elite_table {
            Some(p) => load_elite_table(p),
            None => Ok(EliteTable::default()),
        }
    }

    pub fn experiment_spec(&self) -> ExperimentSpec {
        let upfront_budget = match (self.budget.upfront, self.budget.match_against) {
            (UpfrontSetting::Annual(b), _) => UpfrontBudget::Fixed(b),
            (UpfrontSetting::Mode(UpfrontMode::NpvMatched), MatchAgainst::Spent) => UpfrontBudget::MatchSpent,
            (UpfrontSetting::Mode(UpfrontMode::NpvMatched), MatchAgainst::Allotted) => UpfrontBudget::MatchAllotted,
        };
        ExperimentSpec {
            initial_budget: self.budget.initial,
            upfront_budget,
            ranking: self.ranking,
        }
    }

    /// Checks everything that can be checked without running.
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.dataset.path.is_some() && self.dataset.synthetic.is_some() {
            return Err(Error::config("dataset: give either `path` or `synthetic`, not both"));
        }
        if let Some(p) = &self.dataset.synthetic {
            p.validate()?;
        }
        let b = &self.budget;
        if !(b.initial.is_finite() && b.initial >= 0.0) {
            return Err(Error::config(format!("budget.initial must be finite and >= 0, got {}", b.initial)));
        }
        match b.upfront {
            UpfrontSetting::Annual(v) if !(v.is_finite() && v >= 0.0) => {
                return Err(Error::config(format!("budget.upfront must be finite and >= 0, got {v}")));
            }
            UpfrontSetting::Mode(UpfrontMode::NpvMatched) if !self.mechanisms.deferred() => {
                return Err(Error::config(
                    "budget.upfront = \"npv-matched\" needs the deferred mechanism in the same scenario",
                ));
            }
            _ => {}
        }
        self.elite()?;
        Ok(())
    }
}
