//! Ecological valuation: amenity benefits, the ELITE habitat-condition index,
//! old-growth age criteria and landowner typing.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::model::{AmenityParams, LandownerKind, LandownerProfile, SiteRecord, SiteType, Species};

/// Logistic amenity value of a stand aged `h` years:
/// `A(h) = 1 / (1/(phi K_max) + d0 d1^h)`.
pub fn amenity_value(h: f64, phi: f64, params: &AmenityParams) -> f64 {
    1.0 / (1.0 / (phi * params.k_max) + params.d0 * math::powf(params.d1, h))
}

/// `(A0, A1)`: amenity value at the commercial rotation age and fifty years
/// past the current age.
pub fn amenity_pair(site: &SiteRecord, phi: f64, params: &AmenityParams) -> (f64, f64) {
    let a0 = amenity_value(f64::from(site.commercial_rotation_age), phi, params);
    let a1 = amenity_value(f64::from(site.stand_age) + 50.0, phi, params);
    (a0, a1)
}

/// Owners of stands already older than the commercial rotation age are
/// Hartmanian; everyone else is Faustmannian.
pub fn classify_landowner(site: &SiteRecord) -> LandownerKind {
    if site.stand_age > site.commercial_rotation_age {
        LandownerKind::Hartmanian
    } else {
        LandownerKind::Faustmannian
    }
}

/// The owner profile implied by the site and a drawn amenity scale `phi`.
pub fn landowner_profile(site: &SiteRecord, phi: f64, params: &AmenityParams) -> LandownerProfile {
    match classify_landowner(site) {
        LandownerKind::Faustmannian => LandownerProfile::faustmannian(),
        LandownerKind::Hartmanian => {
            let (a0, a1) = amenity_pair(site, phi, params);
            LandownerProfile::hartmanian(phi, a0, a1)
        }
    }
}

/// Minimum stand age for an old-growth stand.
pub fn old_growth_threshold(site_type: SiteType, species: Species) -> u32 {
    use SiteType::*;
    match (site_type, species) {
        (HerbRich, Species::Broadleaf) => 70,
        (HerbRich, Species::Conifer) => 100,
        (HerbRichHeath, Species::Broadleaf) => 80,
        (HerbRichHeath, Species::Conifer) => 100,
        (MesicHeath, Species::Broadleaf) => 80,
        (MesicHeath, Species::Conifer) => 120,
        (SubXericHeath | XericHeath | BarrenHeath, _) => 140,
    }
}

pub fn is_old_growth(site: &SiteRecord) -> bool {
    site.stand_age >= old_growth_threshold(site.site_type, site.dominant_species)
}

/// Which site attribute an index component reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indicator {
    /// m³/ha of dead wood.
    Deadwood,
    /// Stand age, standing in for the count of large trees.
    StandAge,
    BroadleafShare,
    /// Burnt area; no data, always zero.
    BurntArea,
    Unknown(String),
}

impl Indicator {
    pub fn from_name(name: &str) -> Self {
        match name.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "deadwood" | "dead_wood" => Indicator::Deadwood,
            "stand_age" | "age" | "large_trees" => Indicator::StandAge,
            "broadleaf_share" | "broadleaf" | "broad_leaved_trees" => Indicator::BroadleafShare,
            "burnt_area" | "burned_area" => Indicator::BurntArea,
            _ => Indicator::Unknown(name.into()),
        }
    }

    fn current(&self, site: &SiteRecord) -> Option<f64> {
        match self {
            Indicator::Deadwood => Some(site.deadwood),
            Indicator::StandAge => Some(f64::from(site.stand_age)),
            Indicator::BroadleafShare => Some(site.broadleaf_share),
            Indicator::BurntArea => Some(0.0),
            Indicator::Unknown(_) => None,
        }
    }
}

/// One weighted component of the index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliteComponent {
    pub name: String,
    pub weight: f64,
    pub reference: f64,
    pub site_types: Vec<SiteType>,
}

impl EliteComponent {
    pub fn indicator(&self) -> Indicator {
        Indicator::from_name(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EcologyError {
    MissingComponentData { component: String },
    InvalidComponent { component: String, reason: &'static str },
    UncoveredSiteType(SiteType),
}

impl fmt::Display for EcologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcologyError::MissingComponentData { component } => {
                write!(f, "no site data available for index component `{component}`")
            }
            EcologyError::InvalidComponent { component, reason } => {
                write!(f, "index component `{component}`: {reason}")
            }
            EcologyError::UncoveredSiteType(t) => write!(f, "no index component applies to site type {t}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EcologyError {}

/// Component weights and reference states for the ELITE index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliteTable {
    pub components: Vec<EliteComponent>,
}

impl Default for EliteTable {
    /// Implementer-chosen defaults: dead wood (ref 20 m³/ha, weight 0.6) and
    /// stand age (ref 150 years, weight 0.4) everywhere, broadleaf share
    /// (ref 0.2, weight 0.2) on the two herb-rich types.
    fn default() -> Self {
        let all = SiteType::ALL.to_vec();
        EliteTable {
            components: vec![
                EliteComponent {
                    name: "deadwood".into(),
                    weight: 0.6,
                    reference: 20.0,
                    site_types: all.clone(),
                },
                EliteComponent {
                    name: "stand_age".into(),
                    weight: 0.4,
                    reference: 150.0,
                    site_types: all,
                },
                EliteComponent {
                    name: "broadleaf_share".into(),
                    weight: 0.2,
                    reference: 0.2,
                    site_types: vec![SiteType::HerbRich, SiteType::HerbRichHeath],
                },
            ],
        }
    }
}

impl EliteTable {
    pub fn validate(&self) -> Result<(), EcologyError> {
        for c in &self.components {
            if !(c.weight > 0.0 && c.weight <= 1.0) {
                return Err(EcologyError::InvalidComponent {
                    component: c.name.clone(),
                    reason: "weight must lie in (0, 1]",
                });
            }
            if !(c.reference.is_finite() && c.reference > 0.0) {
                return Err(EcologyError::InvalidComponent {
                    component: c.name.clone(),
                    reason: "reference must be > 0",
                });
            }
        }
        for t in SiteType::ALL {
            if !self.components.iter().any(|c| c.site_types.contains(&t)) {
                return Err(EcologyError::UncoveredSiteType(t));
            }
        }
        Ok(())
    }

    pub fn applicable(&self, site_type: SiteType) -> impl Iterator<Item = &EliteComponent> {
        self.components.iter().filter(move |c| c.site_types.contains(&site_type))
    }
}

/// `Π (1 - w (1 - min(ratio, 1)))` over `(weight, current/reference)` pairs.
pub fn elite_from_ratios<I: IntoIterator<Item = (f64, f64)>>(parts: I) -> f64 {
    parts
        .into_iter()
        .map(|(w, ratio)| 1.0 - w * (1.0 - ratio.clamp(0.0, 1.0)))
        .product()
}

/// ELITE index of a site in `[0, 1]`; 1 is the reference (natural) state.
pub fn elite_index(site: &SiteRecord, table: &EliteTable) -> Result<f64, EcologyError> {
    let mut parts = Vec::new();
    for c in table.applicable(site.site_type) {
        let current = c.indicator().current(site).ok_or_else(|| EcologyError::MissingComponentData {
            component: c.name.clone(),
        })?;
        parts.push((c.weight, current / c.reference));
    }
    if parts.is_empty() {
        return Err(EcologyError::UncoveredSiteType(site.site_type));
    }
    Ok(elite_from_ratios(parts))
}
