//! ELITE component tables as CSV: `component,site_types,weight,reference`,
//! where `site_types` is a `;`-separated list or `all`.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use deferral_core::ecology::{EliteComponent, EliteTable};
use deferral_core::SiteType;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Row {
    component: String,
    site_types: String,
    weight: f64,
    reference: f64,
}

fn parse_types(raw: &str) -> std::result::Result<Vec<SiteType>, String> {
    if raw.trim().eq_ignore_ascii_case("all") {
        return Ok(SiteType::ALL.to_vec());
    }
    raw.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<SiteType>().map_err(|e| e.to_string()))
        .collect()
}

pub fn read_elite_table<R: Read>(reader: R) -> Result<EliteTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut components = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::format("<elite table>", e.to_string()))?;
        let site_types =
            parse_types(&row.site_types).map_err(|e| Error::config(format!("elite table row {}: {e}", i + 1)))?;
        components.push(EliteComponent {
            name: row.component,
            weight: row.weight,
            reference: row.reference,
            site_types,
        });
    }
    let table = EliteTable { components };
    table.validate()?;
    Ok(table)
}

pub fn load_elite_table(path: &Path) -> Result<EliteTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_elite_table(file).map_err(|e| match e {
        Error::Format { message, .. } => Error::format(path, message),
        other => other,
    })
}
