//! Deferred-payment conservation procurement auctions.
//!
//! The government fixes an interest rate `r`, a lending period `t` and an
//! instalment count `x`. Landowners bid the downpayment `c` they want at the
//! time of conservation; the remainder of the conservation payment `V1 - c` is
//! a loan to the government, repaid with interest in `x` annual instalments.
//!
//! This crate is `no_std` (it needs `alloc`) and holds every computation:
//! payment arithmetic ([`finance`]), landowner bidding ([`bidding`]),
//! ecological valuation ([`ecology`]), the multi-year selection engine
//! ([`simulation`]) and the synthetic stand generator ([`synthetic`]).
//! File formats and the command line live in the `deferral` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bidding;
pub mod ecology;
pub mod finance;
mod math;
pub mod model;
pub mod rng;
pub mod simulation;
pub mod synthetic;

pub use model::{
    AmenityParams, Bid, ConfigError, LandownerKind, LandownerProfile, Rule, SchemeConfig,
    SiteRecord, SiteType, Species, Violation,
};
