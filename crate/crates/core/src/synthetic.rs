//! Synthetic stand datasets.
//!
//! Stand-ins for field data: every attribute is drawn from a simple,
//! documented model whose defaults aim at a conservation-programme dataset
//! with ages 6–230 years and an average conservation payment around
//! 7 300 €/ha. These are calibration targets, not measurements.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::math;
use crate::model::{SiteRecord, SiteType, Species, DEFAULT_AREA_HA, DEFAULT_LAND_PAYMENT};
use crate::rng::{stream_rng, Stream};

/// Knots `(age, m³/ha)` of the growth curve on mesic heath; other site types
/// scale it by their fertility factor.
const VOLUME_KNOTS: [(f64, f64); 8] = [
    (0.0, 0.0),
    (20.0, 30.0),
    (40.0, 110.0),
    (60.0, 180.0),
    (80.0, 230.0),
    (120.0, 270.0),
    (160.0, 285.0),
    (230.0, 290.0),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VolumeModel {
    /// Multiplier of the growth curve per site type, in [`SiteType::ALL`] order.
    pub fertility: [f64; 6],
    /// Standard deviation of the log-normal volume noise.
    pub noise_sd: f64,
}

impl Default for VolumeModel {
    fn default() -> Self {
        VolumeModel {
            fertility: [1.15, 1.1, 1.0, 0.8, 0.6, 0.4],
            noise_sd: 0.25,
        }
    }
}

/// Opportunity cost: `(bare_land_value[type] + stand_share · timber value)`
/// times log-normal noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpportunityCostModel {
    pub bare_land_value: [f64; 6],
    pub stand_share: f64,
    pub noise_sd: f64,
}

impl Default for OpportunityCostModel {
    fn default() -> Self {
        OpportunityCostModel {
            bare_land_value: [6_500.0, 5_750.0, 4_500.0, 2_750.0, 1_500.0, 750.0],
            stand_share: 1.0,
            noise_sd: 0.5,
        }
    }
}

/// Dead wood, m³/ha: `base + scale · (age/100)^exponent`, log-normal noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeadwoodModel {
    pub base: f64,
    pub scale: f64,
    pub exponent: f64,
    pub noise_sd: f64,
}

impl Default for DeadwoodModel {
    fn default() -> Self {
        DeadwoodModel {
            base: 1.5,
            scale: 8.0,
            exponent: 1.6,
            noise_sd: 0.6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticProfile {
    pub n_sites: usize,
    /// Inclusive stand-age bounds, years.
    pub age_range: (u32, u32),
    /// Share of young stands, drawn uniformly from `young_age_range`.
    pub young_share: f64,
    pub young_age_range: (u32, u32),
    /// Other stands: Normal(mean, sd), clipped to `age_range`.
    pub mature_age_mean: f64,
    pub mature_age_sd: f64,
    /// Probability of each site type, in [`SiteType::ALL`] order.
    pub site_type_mix: [f64; 6],
    pub rotation_ages: [u32; 6],
    pub volume: VolumeModel,
    /// Stumpage price €/m³ for conifer- and broadleaf-dominated stands.
    pub conifer_price: f64,
    pub broadleaf_price: f64,
    pub v0_model: OpportunityCostModel,
    pub deadwood_model: DeadwoodModel,
    /// Upper bound of the uniform broadleaf share per site type.
    pub broadleaf_share_max: [f64; 6],
    pub area_ha: f64,
    pub land_payment: f64,
}

impl Default for SyntheticProfile {
    fn default() -> Self {
        SyntheticProfile {
            n_sites: 400,
            age_range: (6, 230),
            young_share: 0.15,
            young_age_range: (6, 60),
            mature_age_mean: 115.0,
            mature_age_sd: 35.0,
            site_type_mix: [0.08, 0.17, 0.40, 0.22, 0.09, 0.04],
            rotation_ages: [70, 70, 80, 90, 110, 140],
            volume: VolumeModel::default(),
            conifer_price: 32.0,
            broadleaf_price: 25.0,
            v0_model: OpportunityCostModel::default(),
            deadwood_model: DeadwoodModel::default(),
            broadleaf_share_max: [0.95, 0.75, 0.55, 0.3, 0.2, 0.1],
            area_ha: DEFAULT_AREA_HA,
            land_payment: DEFAULT_LAND_PAYMENT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileError {
    pub field: &'static str,
    pub reason: &'static str,
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "synthetic profile {}: {}", self.field, self.reason)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProfileError {}

fn bad(field: &'static str, reason: &'static str) -> Result<(), ProfileError> {
    Err(ProfileError { field, reason })
}

impl SyntheticProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        let mix_sum: f64 = self.site_type_mix.iter().sum();
        if self.site_type_mix.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (mix_sum - 1.0).abs() > 1e-9 {
            return bad("site_type_mix", "must be nonnegative and sum to 1");
        }
        let (lo, hi) = self.age_range;
        if lo > hi {
            return bad("age_range", "must be nonempty");
        }
        let (ylo, yhi) = self.young_age_range;
        if ylo > yhi || ylo < lo || yhi > hi {
            return bad("young_age_range", "must be nonempty and inside age_range");
        }
        if !(0.0..=1.0).contains(&self.young_share) {
            return bad("young_share", "must lie in [0, 1]");
        }
        if !(self.mature_age_mean.is_finite() && self.mature_age_sd.is_finite() && self.mature_age_sd >= 0.0) {
            return bad("mature_age", "mean and sd must be finite, sd >= 0");
        }
        if self.rotation_ages.contains(&0) {
            return bad("rotation_ages", "must be > 0");
        }
        if self.volume.fertility.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return bad("volume.fertility", "must be > 0");
        }
        if !(self.conifer_price >= 0.0 && self.broadleaf_price >= 0.0) {
            return bad("prices", "must be >= 0");
        }
        if self.v0_model.bare_land_value.iter().any(|v| !(v.is_finite() && *v >= 0.0))
            || !(self.v0_model.stand_share.is_finite() && self.v0_model.stand_share >= 0.0)
        {
            return bad("v0_model", "values must be >= 0");
        }
        let d = &self.deadwood_model;
        if !(d.base >= 0.0 && d.scale >= 0.0 && d.exponent.is_finite()) {
            return bad("deadwood_model", "base and scale must be >= 0");
        }
        for sd in [self.volume.noise_sd, self.v0_model.noise_sd, d.noise_sd] {
            if !(sd.is_finite() && sd >= 0.0) {
                return bad("noise_sd", "must be finite and >= 0");
            }
        }
        if self.broadleaf_share_max.iter().any(|m| !(0.0..=1.0).contains(m)) {
            return bad("broadleaf_share_max", "must lie in [0, 1]");
        }
        if !(self.area_ha.is_finite() && self.area_ha > 0.0) {
            return bad("area_ha", "must be > 0");
        }
        if !(self.land_payment.is_finite() && self.land_payment >= 0.0) {
            return bad("land_payment", "must be >= 0");
        }
        Ok(())
    }
}

/// Mesic-heath growth curve, linear between knots and flat past the last one.
pub fn base_volume(age: f64) -> f64 {
    for pair in VOLUME_KNOTS.windows(2) {
        let ((a0, v0), (a1, v1)) = (pair[0], pair[1]);
        if age <= a1 {
            return v0 + (v1 - v0) * (age.max(a0) - a0) / (a1 - a0);
        }
    }
    VOLUME_KNOTS[VOLUME_KNOTS.len() - 1].1
}

/// Mean-one log-normal multiplier.
fn lognormal_factor(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    if sd == 0.0 {
        return 1.0;
    }
    let z: f64 = Normal::new(0.0, sd).map(|n| n.sample(rng)).unwrap_or(0.0);
    math::exp(z - sd * sd / 2.0)
}

fn pick_type(rng: &mut ChaCha8Rng, mix: &[f64; 6]) -> SiteType {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (t, p) in SiteType::ALL.iter().zip(mix) {
        acc += p;
        if u < acc {
            return *t;
        }
    }
    // Rounding left a sliver above the last cumulative sum.
    SiteType::ALL
        .iter()
        .zip(mix)
        .rev()
        .find(|(_, p)| **p > 0.0)
        .map(|(t, _)| *t)
        .unwrap_or(SiteType::MesicHeath)
}

fn generate_site(profile: &SyntheticProfile, seed: u64, index: usize) -> SiteRecord {
    let mut rng = stream_rng(seed, Stream::Synthetic, index as u64);
    let site_type = pick_type(&mut rng, &profile.site_type_mix);
    let k = site_type.index();

    let (lo, hi) = profile.age_range;
    let stand_age = if rng.gen::<f64>() < profile.young_share {
        rng.gen_range(profile.young_age_range.0..=profile.young_age_range.1)
    } else {
        let a: f64 = Normal::new(profile.mature_age_mean, profile.mature_age_sd)
            .map(|n| n.sample(&mut rng))
            .unwrap_or(profile.mature_age_mean);
        libm::round(a).clamp(f64::from(lo), f64::from(hi)) as u32
    };

    let broadleaf_share = rng.gen::<f64>() * profile.broadleaf_share_max[k];
    let dominant_species = if broadleaf_share >= 0.5 {
        Species::Broadleaf
    } else {
        Species::Conifer
    };

    let stand_volume = base_volume(f64::from(stand_age))
        * profile.volume.fertility[k]
        * lognormal_factor(&mut rng, profile.volume.noise_sd);
    let price = match dominant_species {
        Species::Conifer => profile.conifer_price,
        Species::Broadleaf => profile.broadleaf_price,
    };
    let timber_value = stand_volume * price;

    let v0m = &profile.v0_model;
    let opportunity_cost_v0 =
        (v0m.bare_land_value[k] + v0m.stand_share * timber_value) * lognormal_factor(&mut rng, v0m.noise_sd);

    let d = &profile.deadwood_model;
    let deadwood = (d.base + d.scale * math::powf(f64::from(stand_age) / 100.0, d.exponent))
        * lognormal_factor(&mut rng, d.noise_sd);

    SiteRecord {
        id: format!("site-{:05}", index + 1),
        area_ha: profile.area_ha,
        site_type,
        stand_age,
        stand_volume,
        dominant_species,
        broadleaf_share,
        deadwood,
        timber_value,
        land_payment: profile.land_payment,
        opportunity_cost_v0,
        commercial_rotation_age: profile.rotation_ages[k],
    }
}

/// Generates `profile.n_sites` stands. Site `i` depends only on `(seed, i)`.
pub fn generate_synthetic(profile: &SyntheticProfile, seed: u64) -> Result<Vec<SiteRecord>, ProfileError> {
    profile.validate()?;
    Ok((0..profile.n_sites).map(|i| generate_site(profile, seed, i)).collect())
}
