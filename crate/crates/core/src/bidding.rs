//! Landowner bidding in the deferred and up-front auctions.
//!
//! Landowners believe the highest accepted downpayment is uniform on
//! `[lo, hi]` and choose the downpayment that maximises their expected net
//! payoff. The closed-form optimum is
//!
//! ```text
//! c* = hi/2 + (V0 - V1 (1+r)^t / x - (A1 - A0)) / (2 Ω),   Ω = 1 - (1+r)^t / x
//! ```
//!
//! and [`optimal_downpayment_numeric`] recovers the same point by direct
//! search, which also covers beliefs where no closed form exists.

use serde::{Deserialize, Serialize};

use crate::finance;
use crate::model::{Bid, ConfigError, LandownerProfile, SchemeConfig, SiteRecord};

/// Uniform belief about the downpayment cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BidCapBelief {
    pub lo: f64,
    pub hi: f64,
}

impl BidCapBelief {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ConfigError> {
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
            return Err(ConfigError::Invalid {
                field: "bid cap belief",
                reason: "requires 0 <= lo < hi",
            });
        }
        Ok(BidCapBelief { lo, hi })
    }

    pub fn from_config(cfg: &SchemeConfig) -> Self {
        BidCapBelief {
            lo: cfg.bid_cap_lo,
            hi: cfg.bid_cap_hi,
        }
    }
}

pub fn omega(cfg: &SchemeConfig) -> f64 {
    cfg.omega()
}

/// `1 - F(c)` for the uniform belief.
pub fn acceptance_probability(c: f64, belief: &BidCapBelief) -> f64 {
    if c <= belief.lo {
        1.0
    } else if c >= belief.hi {
        0.0
    } else {
        (belief.hi - c) / (belief.hi - belief.lo)
    }
}

/// Expected net payoff of bidding `c`, term for term:
/// `[(V1 - V0) + (A1 - A0) + c + (1+r)^t (V1 - c)/x] (1 - F(c))`.
pub fn expected_payoff(c: f64, site: &SiteRecord, owner: &LandownerProfile, cfg: &SchemeConfig) -> f64 {
    let v1 = site.conservation_payment();
    let v0 = site.opportunity_cost_v0;
    let bracket = (v1 - v0) + owner.amenity_gain() + c + cfg.instalment_factor() * (v1 - c);
    bracket * acceptance_probability(c, &BidCapBelief::from_config(cfg))
}

/// The objective whose first-order condition yields the closed-form bid:
/// `[-V0 + (A1 - A0) + c + (1+r)^t (V1 - c)/x] (1 - F(c))`.
///
/// It differs from [`expected_payoff`] by the constant `V1` inside the
/// bracket. That constant shifts the maximiser, so the optimisers work on
/// this function.
pub fn bid_objective(c: f64, site: &SiteRecord, owner: &LandownerProfile, cfg: &SchemeConfig) -> f64 {
    let v1 = site.conservation_payment();
    let v0 = site.opportunity_cost_v0;
    let bracket = -v0 + owner.amenity_gain() + c + cfg.instalment_factor() * (v1 - c);
    bracket * acceptance_probability(c, &BidCapBelief::from_config(cfg))
}

/// Unclamped closed-form downpayment.
pub fn closed_form_downpayment(v0: f64, v1: f64, amenity_gain: f64, cfg: &SchemeConfig) -> f64 {
    let q = cfg.instalment_factor();
    cfg.bid_cap_hi / 2.0 + (v0 - v1 * q - amenity_gain) / (2.0 * (1.0 - q))
}

/// Optimal deferred-auction bid for this site and owner.
///
/// Negative optima clamp to zero. Optima above the belief cap are kept as
/// they are (their acceptance probability is zero). A downpayment above `V1`
/// leaves no loan and the bid does not participate.
pub fn optimal_downpayment(site: &SiteRecord, owner: &LandownerProfile, cfg: &SchemeConfig) -> Bid {
    let v1 = site.conservation_payment();
    let c = closed_form_downpayment(site.opportunity_cost_v0, v1, owner.amenity_gain(), cfg).max(0.0);
    bid_for_downpayment(c, site, owner, cfg)
}

/// Completes a bid for a given downpayment: instalment, revenue, participation.
pub fn bid_for_downpayment(c: f64, site: &SiteRecord, owner: &LandownerProfile, cfg: &SchemeConfig) -> Bid {
    let v1 = site.conservation_payment();
    let (t, x, r) = (cfg.lending_period, cfg.instalment_count, cfg.interest_rate);
    match (
        finance::annual_instalment(v1, c, r, t, x),
        finance::total_revenue(v1, c, r, t),
    ) {
        (Ok(instalment), Ok(total_revenue)) => {
            let mut bid = Bid {
                downpayment: c,
                instalment,
                total_revenue,
                participates: false,
            };
            bid.participates = participates(&bid, site, owner, cfg);
            bid
        }
        _ => Bid {
            downpayment: c,
            instalment: 0.0,
            total_revenue: c,
            participates: false,
        },
    }
}

/// Result of the direct search for the best downpayment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptimum {
    pub downpayment: f64,
    pub objective: f64,
    /// No downpayment in `[0, hi]` yields a positive objective; the returned
    /// point sits at the cap where the objective reaches zero from below.
    pub degenerate: bool,
}

const MAX_GRID_POINTS: f64 = 2.0e6;

/// Maximises [`bid_objective`] over `[0, hi]`: a grid pass with spacing
/// `grid_step` (coarsened to at most two million points) followed by
/// golden-section refinement around the best grid point.
pub fn optimal_downpayment_numeric(
    site: &SiteRecord,
    owner: &LandownerProfile,
    cfg: &SchemeConfig,
    grid_step: f64,
) -> NumericOptimum {
    assert!(grid_step > 0.0, "grid_step must be positive");
    let hi = cfg.bid_cap_hi;
    let f = |c: f64| bid_objective(c, site, owner, cfg);

    let n = libm::ceil(hi / grid_step).clamp(1.0, MAX_GRID_POINTS) as u64;
    let step = hi / n as f64;
    let (mut best_c, mut best_f) = (0.0, f(0.0));
    for i in 1..=n {
        let c = if i == n { hi } else { i as f64 * step };
        let v = f(c);
        if v > best_f {
            best_c = c;
            best_f = v;
        }
    }

    let (mut a, mut b) = ((best_c - step).max(0.0), (best_c + step).min(hi));
    let inv_phi = (crate::math::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-9 * hi.max(1.0) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let mid = (a + b) / 2.0;
    let fm = f(mid);
    if fm >= best_f {
        best_c = mid;
        best_f = fm;
    }

    NumericOptimum {
        downpayment: best_c,
        objective: best_f,
        degenerate: best_f <= 0.0,
    }
}

/// Participation constraint for a deferred bid: the downpayment plus the
/// discounted instalments over the lending period must exceed `V0 - (A1 - A0)`.
/// A bid whose downpayment exceeds `V1` never participates.
pub fn participates(bid: &Bid, site: &SiteRecord, owner: &LandownerProfile, cfg: &SchemeConfig) -> bool {
    let v1 = site.conservation_payment();
    let c = bid.downpayment;
    let Ok(m) = finance::annual_instalment(v1, c, cfg.interest_rate, cfg.lending_period, cfg.instalment_count)
    else {
        return false;
    };
    let lhs = c + finance::discounted_instalment_sum(m, cfg.lending_period, cfg.landowner_discount_rate);
    lhs > site.opportunity_cost_v0 - owner.amenity_gain()
}

/// Outcome of the up-front auction for one site, €/ha.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpfrontBid {
    pub premium: f64,
    /// `V1` plus the premium; paid in full at conservation.
    pub total_payment: f64,
    pub participates: bool,
}

/// Up-front bid: premium `cap/2 + ((V0 - V1) - (A1 - A0))/2`, floored at zero,
/// on top of the conservation payment.
pub fn upfront_bid(site: &SiteRecord, owner: &LandownerProfile, cap_hi: f64) -> UpfrontBid {
    let v1 = site.conservation_payment();
    let v0 = site.opportunity_cost_v0;
    let gain = owner.amenity_gain();
    let premium = (cap_hi / 2.0 + ((v0 - v1) - gain) / 2.0).max(0.0);
    let total_payment = v1 + premium;
    UpfrontBid {
        premium,
        total_payment,
        participates: total_payment > v0 - gain,
    }
}
