//! Bundled market instances.

use crate::format::parse_market;
use crate::market::Market;
use crate::scalar::Scalar;

/// Five intermediaries, twelve buyers, three items. Every non-seller edge
/// costs 0 except (s, A), (s, B) and (A, D), which cost 1.
pub const FIG1_MARKET: &str = include_str!("../fixtures/fig1.market");

pub fn fig1() -> Market {
    fig1_as()
}

pub fn fig1_as<S: Scalar>() -> Market<S> {
    parse_market(FIG1_MARKET).expect("bundled fixture is valid")
}

/// Looks up a bundled market by name.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "fig1" => Some(FIG1_MARKET),
        _ => None,
    }
}
