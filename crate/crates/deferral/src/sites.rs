//! Stand datasets as CSV.
//!
//! Required columns: `id, site_type, stand_age, stand_volume,
//! dominant_species, broadleaf_share, deadwood, timber_value,
//! opportunity_cost_v0, commercial_rotation_age`. Optional: `area_ha`
//! (default 10) and `land_payment` (default 400). Column order is free and
//! extra columns are ignored.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use deferral_core::model::{validate_site, DEFAULT_AREA_HA, DEFAULT_LAND_PAYMENT};
use deferral_core::SiteRecord;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REQUIRED_COLUMNS: [&str; 10] = [
    "id",
    "site_type",
    "stand_age",
    "stand_volume",
    "dominant_species",
    "broadleaf_share",
    "deadwood",
    "timber_value",
    "opportunity_cost_v0",
    "commercial_rotation_age",
];

pub const OPTIONAL_COLUMNS: [&str; 2] = ["area_ha", "land_payment"];

/// A data row that was excluded from the dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowIssue {
    /// Line number in the file (the header is line 1).
    pub line: u64,
    pub id: Option<String>,
    pub problems: Vec<String>,
}

impl fmt::Display for RowIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        if let Some(id) = &self.id {
            write!(f, " (id {id})")?;
        }
        write!(f, ": {}", self.problems.join("; "))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadedSites {
    pub sites: Vec<SiteRecord>,
    pub issues: Vec<RowIssue>,
}

impl LoadedSites {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn load_sites(path: &Path) -> Result<LoadedSites> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sites(file).map_err(|e| match e {
        Error::Format { message, .. } => Error::format(path, message),
        other => other,
    })
}

struct Columns(HashMap<String, usize>);

impl Columns {
    fn get<'r>(&self, record: &'r csv::StringRecord, name: &str) -> Option<&'r str> {
        self.0.get(name).and_then(|&i| record.get(i)).map(str::trim)
    }
}

fn field<T: FromStr>(
    cols: &Columns,
    record: &csv::StringRecord,
    name: &str,
    default: Option<T>,
    problems: &mut Vec<String>,
) -> Option<T>
where
    T::Err: fmt::Display,
{
    match cols.get(record, name) {
        None | Some("") => {
            if default.is_none() {
                problems.push(format!("{name}: missing value"));
            }
            default
        }
        Some(raw) => match raw.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                problems.push(format!("{name}: cannot parse `{raw}` ({e})"));
                None
            }
        },
    }
}

/// Parses a dataset. Rows that fail to parse or break a site invariant are
/// reported in [`LoadedSites::issues`] and left out; only structural CSV
/// problems and missing required columns fail the whole read.
pub fn read_sites<R: Read>(reader: R) -> Result<LoadedSites> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::format("<input>", e.to_string()))?
        .clone();
    let cols = Columns(
        headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().trim_start_matches('\u{feff}').to_ascii_lowercase(), i))
            .collect(),
    );
    let missing: Vec<&str> = REQUIRED_COLUMNS
        .iter()
        .copied()
        .filter(|c| !cols.0.contains_key(*c))
        .collect();
    if !missing.is_empty() {
        return Err(Error::format("<input>", format!("missing required column(s): {}", missing.join(", "))));
    }

    let mut out = LoadedSites::default();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::format("<input>", e.to_string()))?;
        let line = record.position().map_or(0, csv::Position::line);
        let mut problems = Vec::new();
        let id: Option<String> = field(&cols, &record, "id", None, &mut problems);
        let area_ha = field(&cols, &record, "area_ha", Some(DEFAULT_AREA_HA), &mut problems);
        let site_type = field(&cols, &record, "site_type", None, &mut problems);
        let stand_age = field(&cols, &record, "stand_age", None, &mut problems);
        let stand_volume = field(&cols, &record, "stand_volume", None, &mut problems);
        let dominant_species = field(&cols, &record, "dominant_species", None, &mut problems);
        let broadleaf_share = field(&cols, &record, "broadleaf_share", None, &mut problems);
        let deadwood = field(&cols, &record, "deadwood", None, &mut problems);
        let timber_value = field(&cols, &record, "timber_value", None, &mut problems);
        let land_payment = field(&cols, &record, "land_payment", Some(DEFAULT_LAND_PAYMENT), &mut problems);
        let opportunity_cost_v0 = field(&cols, &record, "opportunity_cost_v0", None, &mut problems);
        let commercial_rotation_age = field(&cols, &record, "commercial_rotation_age", None, &mut problems);
        let site = (|| {
            Some(SiteRecord {
                id: id.clone()?,
                area_ha: area_ha?,
                site_type: site_type?,
                stand_age: stand_age?,
                stand_volume: stand_volume?,
                dominant_species: dominant_species?,
                broadleaf_share: broadleaf_share?,
                deadwood: deadwood?,
                timber_value: timber_value?,
                land_payment: land_payment?,
                opportunity_cost_v0: opportunity_cost_v0?,
                commercial_rotation_age: commercial_rotation_age?,
            })
        })();
        if let Some(site) = &site {
            problems.extend(validate_site(site).iter().map(ToString::to_string));
            if !seen.insert(site.id.clone()) {
                problems.push("id: duplicate".to_string());
            }
        }
        match site {
            Some(site) if problems.is_empty() => out.sites.push(site),
            _ => out.issues.push(RowIssue { line, id, problems }),
        }
    }
    Ok(out)
}

const WRITE_COLUMNS: [&str; 12] = [
    "id",
    "site_type",
    "stand_age",
    "stand_volume",
    "dominant_species",
    "broadleaf_share",
    "deadwood",
    "timber_value",
    "opportunity_cost_v0",
    "commercial_rotation_age",
    "area_ha",
    "land_payment",
];

/// Writes a dataset with full float precision, so [`read_sites`] gives the
/// same records back.
pub fn write_sites<W: Write>(writer: W, sites: &[SiteRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(WRITE_COLUMNS)?;
    for s in sites {
        w.write_record([
            s.id.clone(),
            s.site_type.as_str().to_string(),
            s.stand_age.to_string(),
            s.stand_volume.to_string(),
            s.dominant_species.as_str().to_string(),
            s.broadleaf_share.to_string(),
            s.deadwood.to_string(),
            s.timber_value.to_string(),
            s.opportunity_cost_v0.to_string(),
            s.commercial_rotation_age.to_string(),
            s.area_ha.to_string(),
            s.land_payment.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_sites(path: &Path, sites: &[SiteRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_sites(std::io::BufWriter::new(file), sites).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    })
}
