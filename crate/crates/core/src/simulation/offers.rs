use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::bidding::{self, UpfrontBid};
use crate::ecology::{self, EliteTable};
use crate::finance;
use crate::model::{AmenityParams, Bid, LandownerProfile, SchemeConfig, SiteRecord};
use crate::rng::{stream_rng, Stream};

const PHI_FLOOR: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    Deferred,
    Upfront,
}

impl Mechanism {
    pub fn as_str(self) -> &'static str {
        match self {
            Mechanism::Deferred => "deferred",
            Mechanism::Upfront => "upfront",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "snake_case")]
pub enum Terms {
    Deferred(Bid),
    Upfront(UpfrontBid),
}

/// A participating landowner's standing offer, valued at year 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Offer {
    pub site_index: usize,
    pub site_id: String,
    pub area_ha: f64,
    pub elite: f64,
    pub stand_age: u32,
    pub old_growth: bool,
    /// V1, €/ha.
    pub conservation_payment: f64,
    pub owner: LandownerProfile,
    pub terms: Terms,
}

impl Offer {
    pub fn mechanism(&self) -> Mechanism {
        match self.terms {
            Terms::Deferred(_) => Mechanism::Deferred,
            Terms::Upfront(_) => Mechanism::Upfront,
        }
    }

    /// Payment due at conservation, €/ha: the downpayment or the full
    /// up-front payment.
    pub fn payment_at_conservation(&self) -> f64 {
        match self.terms {
            Terms::Deferred(b) => b.downpayment,
            Terms::Upfront(u) => u.total_payment,
        }
    }

    /// Cash needed from the conservation-year budget, €.
    pub fn cost(&self) -> f64 {
        self.payment_at_conservation() * self.area_ha
    }

    /// €/ha/year.
    pub fn instalment(&self) -> f64 {
        match self.terms {
            Terms::Deferred(b) => b.instalment,
            Terms::Upfront(_) => 0.0,
        }
    }

    /// NPV of everything the site is paid, €/ha, at conservation time.
    pub fn payment_npv(&self, cfg: &SchemeConfig) -> f64 {
        self.payment_at_conservation()
            + finance::discounted_instalment_sum(self.instalment(), cfg.instalment_count, cfg.discount_rate)
    }

    /// Bids at or above the belief cap have zero acceptance probability and
    /// are never funded.
    pub fn fundable(&self, cfg: &SchemeConfig) -> bool {
        match self.terms {
            Terms::Deferred(b) => b.downpayment < cfg.bid_cap_hi,
            Terms::Upfront(u) => u.premium < cfg.upfront_cap_hi,
        }
    }
}

/// Amenity scale for the owner of site `index`: Normal(phi_mean, phi_sd),
/// floored at 0.1.
pub fn draw_phi(seed: u64, index: usize, params: &AmenityParams) -> f64 {
    let mut rng = stream_rng(seed, Stream::Phi, index as u64);
    let phi = match Normal::new(params.phi_mean, params.phi_sd) {
        Ok(n) => n.sample(&mut rng),
        Err(_) => params.phi_mean,
    };
    phi.max(PHI_FLOOR)
}

/// Bids every site under `mechanism` and keeps the participating ones, in
/// dataset order.
pub fn build_offers(
    sites: &[SiteRecord],
    cfg: &SchemeConfig,
    table: &EliteTable,
    mechanism: Mechanism,
) -> Result<Vec<Offer>, SimError> {
    cfg.validate()?;
    let mut offers = Vec::new();
    for (index, site) in sites.iter().enumerate() {
        let phi = draw_phi(cfg.seed, index, &cfg.amenity);
        let owner = ecology::landowner_profile(site, phi, &cfg.amenity);
        let (terms, participates) = match mechanism {
            Mechanism::Deferred => {
                let bid = bidding::optimal_downpayment(site, &owner, cfg);
                (Terms::Deferred(bid), bid.participates)
            }
            Mechanism::Upfront => {
                let bid = bidding::upfront_bid(site, &owner, cfg.upfront_cap_hi);
                (Terms::Upfront(bid), bid.participates)
            }
        };
        if !participates {
            continue;
        }
        offers.push(Offer {
            site_index: index,
            site_id: site.id.clone(),
            area_ha: site.area_ha,
            elite: ecology::elite_index(site, table)?,
            stand_age: site.stand_age,
            old_growth: ecology::is_old_growth(site),
            conservation_payment: site.conservation_payment(),
            owner,
            terms,
        });
    }
    Ok(offers)
}

pub fn offered_area(offers: &[Offer]) -> f64 {
    offers.iter().map(|o| o.area_ha).sum()
}
