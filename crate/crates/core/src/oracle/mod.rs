//! Brute-force verification of incentive, participation and revenue
//! properties on small instances.
//!
//! Every check returns a [`VerificationReport`]; a failing report carries a
//! [`Counterexample`] holding the market document, the profile and the
//! violated case, so that [`Counterexample::replay`] reproduces it.

mod brute;
mod checks;
mod deviation;
mod suite;
mod witness;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::format::{MarketDoc, ProfileOverrides, ReportDoc};
use crate::market::{AgentId, Market, ReportProfile};
use crate::mechanisms::Mechanism;
use crate::scalar::Scalar;

/// Neighbor sets up to this size get every subset enumerated.
pub const DEFAULT_MAX_DEGREE: usize = 4;

pub use brute::{brute_force_allocation, enumerate_cheapest_path, DEFAULT_BUYER_BOUND};
pub use checks::{
    check_ic, check_ir, check_lemma1, check_payment_characterization, check_revenue_chain,
    check_value_monotonicity, critical_bid, DEFAULT_RESOLUTION,
};
pub use deviation::{bid_breakpoints, opponent_profiles, subsets_of, DeviationSpace, OpponentMode};
pub use suite::{check_allocation_oracle, run_suite, Suite, SuiteOptions};
pub use witness::{check_non_degenerate, eligible_positions, find_witness, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

/// The case that broke a property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The agent gains by reporting `deviation` instead of its true type.
    ProfitableDeviation {
        agent: AgentId,
        deviation: ReportDoc,
    },
    /// Truthful reporting leaves the agent with negative utility.
    NegativeUtility { agent: AgentId },
    /// The buyer wins at `winning_bid` but loses at the higher `losing_bid`.
    NonMonotone {
        agent: AgentId,
        winning_bid: f64,
        losing_bid: f64,
    },
    /// A winner's payment differs from its critical bid.
    CriticalBid {
        agent: AgentId,
        bid: f64,
        critical_bid: f64,
        payment: f64,
        resolution: f64,
    },
    /// A losing buyer pays a nonzero amount.
    LoserPays { agent: AgentId, bid: f64 },
    /// An intermediary's payment is positive (`larger == smaller`) or grows
    /// when it declares the superset `larger`.
    IntermediaryPayment {
        agent: AgentId,
        larger: Vec<AgentId>,
        smaller: Vec<AgentId>,
    },
    /// No profile was found in which full diffusion strictly beats a subset.
    NoWitness { agent: AgentId },
    /// Revenue of `higher` fell below revenue of `lower` ("zero" stands for 0).
    RevenueOrder { higher: String, lower: String },
    /// The winning path to `buyer` nets less than the K-th welfare without its
    /// first agent; `shared` uses payments divided by transaction counts.
    PathBound { buyer: AgentId, shared: bool },
    /// Engine and brute-force welfare differ.
    WelfareMismatch { engine: f64, brute: f64 },
    /// Per-path aggregation of payments differs from the direct sum.
    Aggregation { against_revenue: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub market: MarketDoc,
    pub profile: ProfileOverrides,
    pub mechanism: Option<String>,
    pub violation: Violation,
    /// Size of the violation in currency units.
    pub magnitude: f64,
}

impl Counterexample {
    pub(crate) fn new<S: Scalar>(
        m: &Market<S>,
        q: &ReportProfile<S>,
        mech: Option<Mechanism>,
        violation: Violation,
        magnitude: S,
    ) -> Self {
        Counterexample {
            market: MarketDoc::from_market(m),
            profile: ProfileOverrides::from_profile(m, q),
            mechanism: mech.map(|x| x.name().to_owned()),
            violation,
            magnitude: magnitude.to_f64_lossy(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counterexample serializes")
    }

    /// Re-evaluates the recorded case; `true` when the violation still holds.
    pub fn replay<S: Scalar>(&self) -> Result<bool> {
        let m: Market<S> = self.market.clone().into_market()?;
        let q = self.profile.apply(&m)?;
        let mech = self.mechanism.as_deref().and_then(Mechanism::parse);
        checks::replay(&m, &q, mech, &self.violation)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: String,
    pub mechanism: Option<String>,
    pub status: Status,
    /// Number of individual comparisons evaluated.
    pub trials: usize,
    pub max_violation: f64,
    pub counterexample: Option<Counterexample>,
    /// Opponent profiles were sampled rather than exhaustive.
    pub sampled: bool,
    /// Every intermediary subset family was complete.
    pub exhaustive: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub(crate) fn new(property: &str, mech: Option<Mechanism>) -> Self {
        VerificationReport {
            property: property.to_owned(),
            mechanism: mech.map(|x| x.name().to_owned()),
            status: Status::Pass,
            trials: 0,
            max_violation: 0.0,
            counterexample: None,
            sampled: false,
            exhaustive: true,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Records a violation; the first one of the worst status keeps its
    /// counterexample.
    pub(crate) fn violate(&mut self, status: Status, cx: Counterexample) {
        self.max_violation = self.max_violation.max(cx.magnitude);
        if status > self.status {
            self.status = status;
            self.counterexample = Some(cx);
        } else if self.counterexample.is_none() {
            self.counterexample = Some(cx);
        }
    }

    /// Folds per-instance reports of one property into a corpus report.
    pub fn merge(property: &str, mech: Option<Mechanism>, parts: Vec<VerificationReport>) -> Self {
        let mut out = VerificationReport::new(property, mech);
        for r in parts {
            out.trials += r.trials;
            out.max_violation = out.max_violation.max(r.max_violation);
            out.sampled |= r.sampled;
            out.exhaustive &= r.exhaustive;
            if r.status > out.status {
                out.status = r.status;
                out.counterexample = r.counterexample;
            } else if out.counterexample.is_none() && r.counterexample.is_some() {
                out.counterexample = r.counterexample;
            }
            out.notes.extend(r.notes);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One-line summary: `PASS ic[cna] trials=...`.
    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Inconclusive => "WARN",
            Status::Fail => "FAIL",
        };
        let mech = self
            .mechanism
            .as_ref()
            .map(|m| format!("[{m}]"))
            .unwrap_or_default();
        let mut line = format!(
            "{status} {}{mech} trials={} max_violation={:.6}",
            self.property, self.trials, self.max_violation
        );
        if self.sampled {
            line.push_str(" opponents=sampled");
        }
        if !self.exhaustive {
            line.push_str(" subsets=partial");
        }
        line
    }
}
