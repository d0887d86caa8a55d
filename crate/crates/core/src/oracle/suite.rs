//! Runs one property over a corpus of markets and folds the results.

use rayon::prelude::*;

use crate::allocation::{efficient_allocation, social_welfare};
use crate::error::Result;
use crate::market::{Market, ReportProfile};
use crate::mechanisms::Mechanism;
use crate::scalar::Scalar;

use super::brute::{brute_force_allocation, DEFAULT_BUYER_BOUND};
use super::checks::{
    check_ic, check_ir, check_lemma1, check_payment_characterization, check_revenue_chain,
    check_value_monotonicity, DEFAULT_RESOLUTION,
};
use super::deviation::{opponent_profiles, DeviationSpace, OpponentMode};
use super::witness::check_non_degenerate;
use super::{Counterexample, Status, VerificationReport, Violation, DEFAULT_MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Allocation,
    Ic,
    Ir,
    Monotone,
    Characterization,
    Nondegenerate,
    Revenue,
    Lemma1,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Allocation,
        Suite::Ic,
        Suite::Ir,
        Suite::Monotone,
        Suite::Characterization,
        Suite::Nondegenerate,
        Suite::Revenue,
        Suite::Lemma1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Allocation => "allocation",
            Suite::Ic => "ic",
            Suite::Ir => "ir",
            Suite::Monotone => "monotone",
            Suite::Characterization => "characterization",
            Suite::Nondegenerate => "nondegenerate",
            Suite::Revenue => "revenue",
            Suite::Lemma1 => "lemma1",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Whether the suite runs once per mechanism.
    pub fn per_mechanism(self) -> bool {
        matches!(
            self,
            Suite::Ic | Suite::Ir | Suite::Characterization | Suite::Nondegenerate
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub max_degree: usize,
    /// Offset around bid breakpoints.
    pub epsilon: f64,
    /// Bisection resolution for critical bids.
    pub resolution: f64,
    pub opponents: OpponentMode,
    pub brute_force_bound: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_degree: DEFAULT_MAX_DEGREE,
            epsilon: 1e-3,
            resolution: DEFAULT_RESOLUTION,
            opponents: OpponentMode::Truthful,
            brute_force_bound: DEFAULT_BUYER_BOUND,
        }
    }
}

/// Engine welfare equals brute-force welfare on profile `p`.
pub fn check_allocation_oracle<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    bound: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("allocation", None);
    report.trials = 1;
    let engine = social_welfare(&efficient_allocation(m, p), p);
    let brute = social_welfare(&brute_force_allocation(m, p, bound)?, p);
    if !engine.approx_eq(brute) {
        let v = Violation::WelfareMismatch {
            engine: engine.to_f64_lossy(),
            brute: brute.to_f64_lossy(),
        };
        report.violate(
            Status::Fail,
            Counterexample::new(m, p, None, v, (engine - brute).abs()),
        );
    }
    Ok(report)
}

fn run_one<S: Scalar>(
    m: &Market<S>,
    suite: Suite,
    mech: Option<Mechanism>,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    let d = DeviationSpace::breakpoints(m, opts.max_degree, S::from_decimal(opts.epsilon));
    let mode = opts.opponents;
    let per_profile = |f: &dyn Fn(&ReportProfile<S>) -> Result<VerificationReport>| {
        let parts = opponent_profiles(m, &d, mode)
            .iter()
            .map(f)
            .collect::<Result<Vec<_>>>()?;
        let mut r = VerificationReport::merge(suite.name(), mech, parts);
        r.sampled = mode.is_sampled();
        Ok::<_, crate::error::Error>(r)
    };
    let mech_or = |default| mech.unwrap_or(default);
    match suite {
        Suite::Allocation => {
            per_profile(&|p| check_allocation_oracle(m, p, opts.brute_force_bound))
        }
        Suite::Ic => Ok(check_ic(m, &d, mech_or(Mechanism::Cna), mode)),
        Suite::Ir => Ok(check_ir(m, &d, mech_or(Mechanism::Cna), mode)),
        Suite::Monotone => Ok(check_value_monotonicity(m, &d, mode)),
        Suite::Characterization => Ok(check_payment_characterization(
            m,
            &d,
            mech_or(Mechanism::Cna),
            mode,
            opts.resolution,
        )),
        Suite::Nondegenerate => Ok(check_non_degenerate(
            m,
            mech_or(Mechanism::Cna),
            opts.max_degree,
        )),
        Suite::Revenue => per_profile(&|p| Ok(check_revenue_chain(m, p))),
        Suite::Lemma1 => per_profile(&|p| Ok(check_lemma1(m, p))),
    }
}

/// Runs `suite` on every market (in parallel) and returns one merged report
/// per mechanism, or a single report for mechanism-independent suites.
pub fn run_suite<S: Scalar>(
    markets: &[Market<S>],
    suite: Suite,
    mechanisms: &[Mechanism],
    opts: &SuiteOptions,
) -> Result<Vec<VerificationReport>> {
    let mechs: Vec<Option<Mechanism>> = if suite.per_mechanism() {
        mechanisms.iter().copied().map(Some).collect()
    } else if suite == Suite::Lemma1 {
        vec![Some(Mechanism::Cna)]
    } else {
        vec![None]
    };
    mechs
        .into_iter()
        .map(|mech| {
            let parts = markets
                .par_iter()
                .map(|m| run_one(m, suite, mech, opts))
                .collect::<Result<Vec<_>>>()?;
            let mut merged = VerificationReport::merge(suite.name(), mech, parts);
            merged.notes.insert(0, format!("markets={}", markets.len()));
            Ok(merged)
        })
        .collect()
}
