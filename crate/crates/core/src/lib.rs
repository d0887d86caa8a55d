//! Multi-unit diffusion auctions over intermediary networks.
//!
//! A seller with K identical items reaches unit-demand buyers through a
//! network of intermediaries who may withhold the sale from their neighbors.
//! Every hop carries a fixed per-transaction cost. This crate computes the
//! efficient allocation, runs VCG, the critical neighborhood auction (CNA)
//! and the seller-only VCG baseline, and ships brute-force oracles that check
//! incentive compatibility, individual rationality, and the revenue ordering
//! between mechanisms on desk-scale instances.
//!
//! All numeric code is generic over [`Scalar`]; `f64` is the default, and
//! [`Rational`] gives exact results.
//!
//! ```
//! use auction_lab::{fixtures::fig1, Mechanism};
//!
//! let m = fig1();
//! let p = m.truthful_profile();
//! assert_eq!(Mechanism::Cna.run(&m, &p).revenue, 24.0);
//! assert_eq!(Mechanism::Vcg.run(&m, &p).revenue, -22.0);
//! ```

pub mod allocation;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod market;
pub mod mechanisms;
pub mod oracle;
pub mod report;
pub mod scalar;

pub use allocation::{
    cheapest_transaction, efficient_allocation, kth_welfare, social_welfare, total_cost,
    welfare_table, Allocation, Transaction, WelfareTable,
};
pub use error::{Error, Result};
pub use generators::{generate, GeneratorConfig, Topology};
pub use market::{
    build_market, remove_agent, restrict_neighbors, truthful_profile, valid_agents, AgentId,
    AgentKind, AgentRecord, Market, Report, ReportProfile,
};
pub use mechanisms::{
    critical_neighborhood, outcome_summary, run_cna, run_vcg, run_vcg_wi, vcg_winner_payment,
    ComparisonTable, CriticalNeighborhood, Mechanism, MechanismOutcome,
};
pub use scalar::{Rational, Scalar};

pub type MarketF64 = Market<f64>;
pub type MarketF32 = Market<f32>;
pub type MarketExact = Market<Rational>;
pub type ProfileF64 = ReportProfile<f64>;
pub type ProfileExact = ReportProfile<Rational>;
pub type OutcomeF64 = MechanismOutcome<f64>;
pub type OutcomeExact = MechanismOutcome<Rational>;
