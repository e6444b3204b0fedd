use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{SchemeConfig, SiteRecord};
use crate::rng::{stream_rng, Stream};

/// Harvest year of each site (by dataset index), if it is cut within the
/// harvest window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestSchedule {
    pub years: Vec<Option<u32>>,
}

impl HarvestSchedule {
    /// A schedule in which nothing is ever harvested.
    pub fn none(n_sites: usize) -> Self {
        HarvestSchedule {
            years: alloc::vec![None; n_sites],
        }
    }

    pub fn year(&self, site_index: usize) -> Option<u32> {
        self.years.get(site_index).copied().flatten()
    }

    /// True when the site has been cut by the start of `year`'s funding round.
    pub fn harvested_by(&self, site_index: usize, year: u32) -> bool {
        self.year(site_index).is_some_and(|h| h <= year)
    }
}

/// Every stand reaching its commercial rotation age inside the harvest
/// window is cut in a year drawn uniformly between that point and the end of
/// the window. Stand ages advance one year per simulated year.
pub fn draw_harvest_schedule(sites: &[SiteRecord], cfg: &SchemeConfig) -> HarvestSchedule {
    let window = cfg.harvest_window;
    let years = sites
        .iter()
        .enumerate()
        .map(|(i, site)| {
            let first = site.commercial_rotation_age.saturating_sub(site.stand_age);
            (first < window).then(|| stream_rng(cfg.seed, Stream::Harvest, i as u64).gen_range(first..window))
        })
        .collect();
    HarvestSchedule { years }
}

/// Harvests in one simulated year against the stock of stands that have
/// reached rotation age by then (cut or not).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestYearStat {
    pub year: u32,
    pub eligible: usize,
    pub harvested: usize,
}

impl HarvestYearStat {
    pub fn rate(&self) -> f64 {
        if self.eligible == 0 {
            0.0
        } else {
            self.harvested as f64 / self.eligible as f64
        }
    }
}

pub fn annual_harvest_stats(sites: &[SiteRecord], schedule: &HarvestSchedule, years: u32) -> Vec<HarvestYearStat> {
    (0..years)
        .map(|year| {
            let eligible = sites
                .iter()
                .filter(|s| s.stand_age + year >= s.commercial_rotation_age)
                .count();
            let harvested = schedule.years.iter().filter(|h| **h == Some(year)).count();
            HarvestYearStat { year, eligible, harvested }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SiteType, Species};
    use alloc::format;
    use alloc::string::ToString;

    fn site(age: u32, rotation: u32) -> SiteRecord {
        SiteRecord {
            id: "h".to_string(),
            area_ha: 10.0,
            site_type: SiteType::MesicHeath,
            stand_age: age,
            stand_volume: 100.0,
            dominant_species: Species::Conifer,
            broadleaf_share: 0.0,
            deadwood: 1.0,
            timber_value: 1.0,
            land_payment: 400.0,
            opportunity_cost_v0: 1.0,
            commercial_rotation_age: rotation,
        }
    }

    #[test]
    fn young_stands_escape_the_window() {
        let sites: alloc::vec::Vec<_> = (0..50).map(|i| site(i % 30, 80)).collect();
        let s = draw_harvest_schedule(&sites, &SchemeConfig::default());
        assert!(s.years.iter().all(Option::is_none));
    }

    #[test]
    fn mature_stand_harvest_year_is_uniform() {
        let n = 100_000;
        let sites: alloc::vec::Vec<_> = (0..n).map(|_| site(120, 80)).collect();
        let s = draw_harvest_schedule(&sites, &SchemeConfig::default());
        let mut sum = 0u64;
        for y in &s.years {
            let y = y.expect("mature stands are always scheduled");
            assert!(y < 40);
            sum += u64::from(y);
        }
        let mean = sum as f64 / n as f64;
        assert!((mean - 19.5).abs() <= 0.2, "{mean}");
    }

    #[test]
    fn stand_reaching_rotation_later_starts_later() {
        let sites: alloc::vec::Vec<_> = (0..500).map(|_| site(60, 80)).collect();
        let s = draw_harvest_schedule(&sites, &SchemeConfig::default());
        for y in &s.years {
            let y = y.unwrap();
            assert!((20..40).contains(&y), "{}", format!("{y}"));
        }
    }

    #[test]
    fn stats_count_the_eligible_stock() {
        let sites = [site(100, 80), site(79, 80), site(10, 80)];
        let schedule = HarvestSchedule {
            years: alloc::vec![Some(0), Some(3), None],
        };
        let stats = annual_harvest_stats(&sites, &schedule, 4);
        assert_eq!(stats[0], HarvestYearStat { year: 0, eligible: 1, harvested: 1 });
        assert_eq!(stats[1].eligible, 2);
        assert_eq!(stats[3].harvested, 1);
        assert!(schedule.harvested_by(1, 3));
        assert!(!schedule.harvested_by(1, 2));
        assert!(!schedule.harvested_by(2, 100));
    }
}
