use thiserror::Error;

use crate::market::AgentId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("market has no agents")]
    EmptyMarket,
    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(AgentId),
    #[error("agent id `{0}` is reserved for the seller")]
    ReservedId(AgentId),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("agent `{0}` lists itself or the seller as a neighbor")]
    SelfOrSellerNeighbor(AgentId),
    #[error("buyer `{0}` cannot declare neighbors")]
    BuyerWithNeighbors(AgentId),
    #[error("intermediary `{0}` cannot carry a value")]
    IntermediaryWithValue(AgentId),
    #[error("buyer `{0}` has no value")]
    MissingValue(AgentId),
    #[error("agent `{0}` has a negative or non-finite value")]
    InvalidValue(AgentId),
    #[error("edge ({0}, {1}) has a negative or non-finite cost")]
    NegativeCost(AgentId, AgentId),
    #[error("cost entry ({0}, {1}) is not on a declared edge")]
    CostOnNonEdge(AgentId, AgentId),
    #[error("edge ({0}, {1}) has more than one cost entry")]
    DuplicateCost(AgentId, AgentId),
    #[error("edge ({0}, {1}) has no cost entry")]
    MissingCost(AgentId, AgentId),
    #[error("item count must be at least 1")]
    ZeroItems,

    #[error("agent `{0}` is not an intermediary")]
    NotIntermediary(AgentId),
    #[error("agent `{0}` is not a buyer")]
    NotBuyer(AgentId),
    #[error("report for `{0}` does not match the agent kind")]
    ReportKindMismatch(AgentId),
    #[error("intermediary `{0}` declares a neighbor outside its true neighbor set")]
    DeclaredNotSubset(AgentId),
    #[error("restriction for `{0}` is not a subset of its current declaration")]
    RestrictionNotSubset(AgentId),
    #[error("agent `{0}` has no report in the profile")]
    MissingReport(AgentId),
    #[error("the seller cannot be removed")]
    RemoveSeller,

    #[error("agent `{0}` is not valid under the profile")]
    InvalidAgent(AgentId),
    #[error("buyer `{0}` does not win")]
    NotWinner(AgentId),
    #[error("outcomes were computed on different markets or profiles")]
    MismatchedOutcomes,

    #[error("instance has {found} valid buyers, brute force bound is {bound}")]
    BoundExceeded { found: usize, bound: usize },

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
