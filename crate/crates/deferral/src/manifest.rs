//! Run manifests.
//!
//! Every `run` and `sweep` writes `manifest.json` next to its outputs. The
//! manifest holds the fully resolved scenario (seed, dataset, scheme,
//! budgets, sweep axes), so passing it back to the same command reproduces
//! the outputs byte for byte.

use std::fs;
use std::path::{self, Path};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{json_bytes, write_file};
use crate::scenario::Scenario;

pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Run,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub tool_version: String,
    pub command: Command,
    /// Resolved scenario; `output.dir` is left out.
    pub scenario: Scenario,
    /// Files written next to the manifest.
    pub outputs: Vec<String>,
    pub excluded_rows: usize,
}

impl Manifest {
    pub fn new(command: Command, scenario: &Scenario, outputs: Vec<String>, excluded_rows: usize) -> Self {
        let mut scenario = scenario.clone();
        scenario.output.dir = None;
        Manifest {
            format_version: MANIFEST_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            scenario,
            outputs,
            excluded_rows,
        }
    }

    pub fn to_json(&self) -> String {
        String::from_utf8(json_bytes(self)).expect("json is utf-8")
    }

    pub fn write(&self, dir: &Path) -> Result<String> {
        write_file(dir, MANIFEST_FILE, self.to_json().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
        if m.format_version != MANIFEST_VERSION {
            return Err(Error::format(
                path,
                format!("unsupported manifest version {} (expected {MANIFEST_VERSION})", m.format_version),
            ));
        }
        Ok(m)
    }
}

/// Makes input paths absolute so a manifest works from any directory.
pub fn absolutize(scenario: &mut Scenario) -> Result<()> {
    let fix = |p: &mut std::path::PathBuf| -> Result<()> {
        *p = path::absolute(&*p).map_err(|e| Error::io(&*p, e))?;
        Ok(())
    };
    if let Some(p) = scenario.dataset.path.as_mut() {
        fix(p)?;
    }
    if let Some(p) = scenario.elite_table.as_mut() {
        fix(p)?;
    }
    Ok(())
}

/// True when `path` names a manifest rather than a scenario file.
pub fn is_manifest(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}
