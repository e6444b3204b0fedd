//! Shared domain types and their invariant checks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::math;

/// Finnish forest site types, ordered from most to least fertile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteType {
    HerbRich,
    HerbRichHeath,
    MesicHeath,
    SubXericHeath,
    XericHeath,
    BarrenHeath,
}

impl SiteType {
    pub const ALL: [SiteType; 6] = [
        SiteType::HerbRich,
        SiteType::HerbRichHeath,
        SiteType::MesicHeath,
        SiteType::SubXericHeath,
        SiteType::XericHeath,
        SiteType::BarrenHeath,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SiteType::HerbRich => "herb_rich",
            SiteType::HerbRichHeath => "herb_rich_heath",
            SiteType::MesicHeath => "mesic_heath",
            SiteType::SubXericHeath => "sub_xeric_heath",
            SiteType::XericHeath => "xeric_heath",
            SiteType::BarrenHeath => "barren_heath",
        }
    }

    /// Position in [`SiteType::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SiteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseEnumError {
    pub kind: &'static str,
    pub value: String,
}

impl fmt::Display for ParseEnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown {} `{}`", self.kind, self.value)
    }
}

fn normalize(s: &str) -> String {
    s.trim()
        .chars()
        .map(|c| match c {
            '-' | ' ' => '_',
            c => c.to_ascii_lowercase(),
        })
        .collect()
}

impl FromStr for SiteType {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalize(s);
        SiteType::ALL
            .into_iter()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| ParseEnumError {
                kind: "site type",
                value: s.into(),
            })
    }
}

/// Dominant tree species group of a stand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    Broadleaf,
    Conifer,
}

impl Species {
    pub fn as_str(self) -> &'static str {
        match self {
            Species::Broadleaf => "broadleaf",
            Species::Conifer => "conifer",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Species {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match normalize(s).as_str() {
            "broadleaf" | "broadleaved" => Ok(Species::Broadleaf),
            "conifer" | "coniferous" => Ok(Species::Conifer),
            _ => Err(ParseEnumError {
                kind: "species",
                value: s.into(),
            }),
        }
    }
}

pub const DEFAULT_AREA_HA: f64 = 10.0;
pub const DEFAULT_LAND_PAYMENT: f64 = 400.0;

/// One forest stand offered (or not) to the programme. Money is €/ha.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub id: String,
    pub area_ha: f64,
    pub site_type: SiteType,
    pub stand_age: u32,
    /// m³/ha
    pub stand_volume: f64,
    pub dominant_species: Species,
    pub broadleaf_share: f64,
    /// m³/ha
    pub deadwood: f64,
    pub timber_value: f64,
    pub land_payment: f64,
    /// Net present value of the owner's own harvesting plan (V0).
    pub opportunity_cost_v0: f64,
    pub commercial_rotation_age: u32,
}

impl SiteRecord {
    /// The contract's face value V1: timber value plus the fixed land payment.
    pub fn conservation_payment(&self) -> f64 {
        conservation_payment(self)
    }
}

pub fn conservation_payment(site: &SiteRecord) -> f64 {
    site.timber_value + site.land_payment
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    NotPositive,
    Negative,
    NotFinite,
    NotAFraction,
    SpeciesShareMismatch,
    Empty,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::NotPositive => "must be > 0",
            Rule::Negative => "must be >= 0",
            Rule::NotFinite => "must be finite",
            Rule::NotAFraction => "must lie in [0, 1]",
            Rule::SpeciesShareMismatch => {
                "broadleaf_share >= 0.5 must coincide with a broadleaf-dominated stand"
            }
            Rule::Empty => "must not be empty",
        })
    }
}

/// A single failed invariant on a [`SiteRecord`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn check_nonneg(out: &mut Vec<Violation>, field: &'static str, v: f64) {
    if !v.is_finite() {
        out.push(Violation { field, rule: Rule::NotFinite });
    } else if v < 0.0 {
        out.push(Violation { field, rule: Rule::Negative });
    }
}

/// Returns every invariant the site breaks; empty when the record is valid.
pub fn validate_site(site: &SiteRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    if site.id.trim().is_empty() {
        out.push(Violation { field: "id", rule: Rule::Empty });
    }
    if !site.area_ha.is_finite() {
        out.push(Violation { field: "area_ha", rule: Rule::NotFinite });
    } else if site.area_ha <= 0.0 {
        out.push(Violation { field: "area_ha", rule: Rule::NotPositive });
    }
    check_nonneg(&mut out, "stand_volume", site.stand_volume);
    check_nonneg(&mut out, "deadwood", site.deadwood);
    check_nonneg(&mut out, "timber_value", site.timber_value);
    check_nonneg(&mut out, "land_payment", site.land_payment);
    check_nonneg(&mut out, "opportunity_cost_v0", site.opportunity_cost_v0);
    if site.commercial_rotation_age == 0 {
        out.push(Violation {
            field: "commercial_rotation_age",
            rule: Rule::NotPositive,
        });
    }
    let share = site.broadleaf_share;
    if !share.is_finite() {
        out.push(Violation { field: "broadleaf_share", rule: Rule::NotFinite });
    } else if !(0.0..=1.0).contains(&share) {
        out.push(Violation { field: "broadleaf_share", rule: Rule::NotAFraction });
    } else if (share >= 0.5) != (site.dominant_species == Species::Broadleaf) {
        out.push(Violation {
            field: "dominant_species",
            rule: Rule::SpeciesShareMismatch,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandownerKind {
    /// Values harvest revenue only.
    Faustmannian,
    /// Also values the amenities of standing old forest.
    Hartmanian,
}

impl fmt::Display for LandownerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LandownerKind::Faustmannian => "faustmannian",
            LandownerKind::Hartmanian => "hartmanian",
        })
    }
}

/// Landowner preferences. `a0` is the amenity value under the owner's own
/// harvest plan, `a1` under conservation (€/ha).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandownerProfile {
    pub kind: LandownerKind,
    pub phi: f64,
    pub a0: f64,
    pub a1: f64,
}

impl LandownerProfile {
    pub fn faustmannian() -> Self {
        LandownerProfile {
            kind: LandownerKind::Faustmannian,
            phi: 1.0,
            a0: 0.0,
            a1: 0.0,
        }
    }

    pub fn hartmanian(phi: f64, a0: f64, a1: f64) -> Self {
        LandownerProfile {
            kind: LandownerKind::Hartmanian,
            phi,
            a0,
            a1,
        }
    }

    /// A1 - A0, zero for a Faustmannian owner whatever the stored fields say.
    pub fn amenity_gain(&self) -> f64 {
        match self.kind {
            LandownerKind::Faustmannian => 0.0,
            LandownerKind::Hartmanian => self.a1 - self.a0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.kind {
            LandownerKind::Faustmannian => {
                if self.a0 != 0.0 || self.a1 != 0.0 {
                    return Err(ConfigError::invalid("a0/a1", "must be zero for a Faustmannian owner"));
                }
            }
            LandownerKind::Hartmanian => {
                if !(self.phi.is_finite() && self.phi > 0.0) {
                    return Err(ConfigError::invalid("phi", "must be finite and > 0"));
                }
                if !(self.a0.is_finite() && self.a1.is_finite()) || self.a0 < 0.0 {
                    return Err(ConfigError::invalid("a0/a1", "must be finite and >= 0"));
                }
                if self.a1 < self.a0 {
                    return Err(ConfigError::invalid("a1", "must be >= a0"));
                }
            }
        }
        Ok(())
    }
}

/// Parameters of the logistic amenity valuation `A(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmenityParams {
    pub d0: f64,
    pub d1: f64,
    /// Cumulative maximum amenity value, €/ha.
    pub k_max: f64,
    pub phi_mean: f64,
    pub phi_sd: f64,
}

impl Default for AmenityParams {
    fn default() -> Self {
        AmenityParams {
            d0: 0.04,
            d1: 0.95,
            k_max: 23_500.0,
            phi_mean: 1.0,
            phi_sd: 0.2,
        }
    }
}

/// Auction rules and accounting parameters shared by one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    /// Interest paid on the landowner's loan, per year.
    pub interest_rate: f64,
    /// Lending period `t`, years.
    pub lending_period: u32,
    /// Number of annual instalments `x`.
    pub instalment_count: u32,
    /// Lower end of the landowners' belief about the downpayment cap.
    pub bid_cap_lo: f64,
    /// The common belief `c̄` of the highest accepted downpayment, €/ha.
    pub bid_cap_hi: f64,
    /// Belief cap for the premium in the up-front auction, €/ha.
    pub upfront_cap_hi: f64,
    /// Government discount rate used in all NPV accounting.
    pub discount_rate: f64,
    /// Landowner discount rate used in the participation constraint.
    pub landowner_discount_rate: f64,
    /// Social benefit of a conserved hectare, €/ha.
    pub benefit_per_ha: f64,
    /// Simulation horizon; `None` means `lending_period + 1`.
    pub horizon_years: Option<u32>,
    /// Every stand past rotation age is harvested within this many years.
    pub harvest_window: u32,
    pub amenity: AmenityParams,
    /// Carry unspent up-front budget into the next year.
    pub upfront_budget_rollover: bool,
    pub seed: u64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            interest_rate: 0.03,
            lending_period: 10,
            instalment_count: 10,
            bid_cap_lo: 0.0,
            bid_cap_hi: 4_000.0,
            upfront_cap_hi: 2_000.0,
            discount_rate: 0.03,
            landowner_discount_rate: 0.03,
            benefit_per_ha: 5_980.0,
            horizon_years: None,
            harvest_window: 40,
            amenity: AmenityParams::default(),
            upfront_budget_rollover: false,
            seed: 0,
        }
    }
}

impl SchemeConfig {
    pub fn horizon(&self) -> u32 {
        self.horizon_years.unwrap_or(self.lending_period + 1)
    }

    /// `(1+r)^t / x`: the instalment paid per euro of loan.
    pub fn instalment_factor(&self) -> f64 {
        math::powi(1.0 + self.interest_rate, self.lending_period) / f64::from(self.instalment_count)
    }

    /// `Ω = 1 - (1+r)^t / x`, unchecked.
    pub fn omega(&self) -> f64 {
        1.0 - self.instalment_factor()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn nonneg(name: &'static str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ConfigError::invalid(name, "must be finite and >= 0"))
            }
        }
        nonneg("interest_rate", self.interest_rate)?;
        nonneg("discount_rate", self.discount_rate)?;
        nonneg("landowner_discount_rate", self.landowner_discount_rate)?;
        nonneg("benefit_per_ha", self.benefit_per_ha)?;
        nonneg("bid_cap_lo", self.bid_cap_lo)?;
        if self.lending_period == 0 {
            return Err(ConfigError::invalid("lending_period", "must be >= 1"));
        }
        if self.instalment_count == 0 {
            return Err(ConfigError::invalid("instalment_count", "must be >= 1"));
        }
        if !(self.bid_cap_hi.is_finite() && self.bid_cap_hi > self.bid_cap_lo) {
            return Err(ConfigError::invalid("bid_cap_hi", "must be finite and > bid_cap_lo"));
        }
        if !(self.upfront_cap_hi.is_finite() && self.upfront_cap_hi > 0.0) {
            return Err(ConfigError::invalid("upfront_cap_hi", "must be finite and > 0"));
        }
        if self.horizon_years == Some(0) {
            return Err(ConfigError::invalid("horizon_years", "must be >= 1"));
        }
        if self.harvest_window == 0 {
            return Err(ConfigError::invalid("harvest_window", "must be >= 1"));
        }
        let a = &self.amenity;
        if !(a.d0.is_finite() && a.d0 > 0.0) {
            return Err(ConfigError::invalid("amenity.d0", "must be > 0"));
        }
        if !(a.d1 > 0.0 && a.d1 < 1.0) {
            return Err(ConfigError::invalid("amenity.d1", "must lie in (0, 1)"));
        }
        if !(a.k_max.is_finite() && a.k_max > 0.0) {
            return Err(ConfigError::invalid("amenity.k_max", "must be > 0"));
        }
        if !(a.phi_mean.is_finite() && a.phi_mean > 0.0) {
            return Err(ConfigError::invalid("amenity.phi_mean", "must be > 0"));
        }
        nonneg("amenity.phi_sd", a.phi_sd)?;
        let omega = self.omega();
        if !(omega > 0.0 && omega < 1.0) {
            return Err(ConfigError::OmegaOutOfRange { omega });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    /// `Ω = 1 - (1+r)^t/x` left the open interval (0, 1).
    OmegaOutOfRange { omega: f64 },
    Invalid { field: &'static str, reason: &'static str },
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, reason: &'static str) -> Self {
        ConfigError::Invalid { field, reason }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::OmegaOutOfRange { omega } => write!(
                f,
                "omega = 1 - (1+r)^t/x = {omega:.6} must lie in (0, 1); lower the interest rate or lending period, or raise the instalment count"
            ),
            ConfigError::Invalid { field, reason } => write!(f, "{field} {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConfigError {}

/// A landowner's bid in the deferred auction, €/ha.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bid {
    pub downpayment: f64,
    /// Annual instalment including interest; zero for non-participants.
    pub instalment: f64,
    pub total_revenue: f64,
    pub participates: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn mesic_site() -> SiteRecord {
        SiteRecord {
            id: "s1".to_string(),
            area_ha: 10.0,
            site_type: SiteType::MesicHeath,
            stand_age: 90,
            stand_volume: 220.0,
            dominant_species: Species::Conifer,
            broadleaf_share: 0.1,
            deadwood: 8.0,
            timber_value: 6_900.0,
            land_payment: 400.0,
            opportunity_cost_v0: 6_000.0,
            commercial_rotation_age: 80,
        }
    }

    #[test]
    fn well_formed_site_has_no_violations() {
        assert!(validate_site(&mesic_site()).is_empty());
    }

    #[test]
    fn zero_area_is_flagged() {
        let site = SiteRecord { area_ha: 0.0, ..mesic_site() };
        assert_eq!(
            validate_site(&site),
            [Violation { field: "area_ha", rule: Rule::NotPositive }]
        );
    }

    #[test]
    fn broadleaf_share_must_match_species() {
        let site = SiteRecord { broadleaf_share: 0.8, ..mesic_site() };
        let v = validate_site(&site);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::SpeciesShareMismatch);
    }

    #[test]
    fn negative_and_nan_money_flagged() {
        let site = SiteRecord {
            timber_value: -1.0,
            opportunity_cost_v0: f64::NAN,
            ..mesic_site()
        };
        let v = validate_site(&site);
        assert!(v.contains(&Violation { field: "timber_value", rule: Rule::Negative }));
        assert!(v.contains(&Violation { field: "opportunity_cost_v0", rule: Rule::NotFinite }));
    }

    #[test]
    fn conservation_payment_sums_components() {
        assert_eq!(mesic_site().conservation_payment(), 7_300.0);
        let bare = SiteRecord { timber_value: 0.0, ..mesic_site() };
        assert_eq!(conservation_payment(&bare), 400.0);
        let dear = SiteRecord { timber_value: 9_600.0, ..mesic_site() };
        assert_eq!(conservation_payment(&dear), 10_000.0);
    }

    #[test]
    fn site_type_parses_loosely() {
        assert_eq!("Sub-xeric heath".parse::<SiteType>().unwrap(), SiteType::SubXericHeath);
        assert_eq!("barren_heath".parse::<SiteType>().unwrap(), SiteType::BarrenHeath);
        assert!("swamp".parse::<SiteType>().is_err());
        for t in SiteType::ALL {
            assert_eq!(t.as_str().parse::<SiteType>().unwrap(), t);
        }
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = SchemeConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.horizon(), 11);
    }

    #[test]
    fn negative_omega_rejected() {
        let cfg = SchemeConfig {
            interest_rate: 0.20,
            lending_period: 10,
            instalment_count: 5,
            ..SchemeConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::OmegaOutOfRange { .. })));
    }

    #[test]
    fn omega_monotone_by_finite_differences() {
        let h = 1e-6;
        for &r in &[0.0, 0.01, 0.02, 0.03, 0.04, 0.05] {
            for t in 1..=20u32 {
                for x in (t.max(2))..=30u32 {
                    let cfg = SchemeConfig {
                        interest_rate: r,
                        lending_period: t,
                        instalment_count: x,
                        ..SchemeConfig::default()
                    };
                    if cfg.validate().is_err() {
                        continue;
                    }
                    let w = cfg.omega();
                    assert!(w > 0.0 && w < 1.0);
                    let up_r = SchemeConfig { interest_rate: r + h, ..cfg.clone() };
                    assert!(up_r.omega() < w, "r={r} t={t} x={x}");
                    let up_t = SchemeConfig { lending_period: t + 1, ..cfg.clone() };
                    if r > 0.0 {
                        assert!(up_t.omega() < w);
                    }
                    let up_x = SchemeConfig { instalment_count: x + 1, ..cfg.clone() };
                    assert!(up_x.omega() > w);
                }
            }
        }
    }

    #[test]
    fn hartmanian_profile_requires_nondecreasing_amenity() {
        assert!(LandownerProfile::hartmanian(1.0, 100.0, 50.0).validate().is_err());
        assert!(LandownerProfile::hartmanian(1.0, 50.0, 100.0).validate().is_ok());
        assert!(LandownerProfile::faustmannian().validate().is_ok());
        let mut f = LandownerProfile::faustmannian();
        f.a1 = 3.0;
        assert!(f.validate().is_err());
        assert_eq!(f.amenity_gain(), 0.0);
    }
}
