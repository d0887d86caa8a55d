//! Serializable run reports: one per mechanism run, attributable to a market
//! by content digest.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::market_digest;
use crate::market::{AgentId, AgentKind, Market};
use crate::mechanisms::MechanismOutcome;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgentRow {
    pub id: AgentId,
    pub kind: AgentKind,
    pub valid: bool,
    pub winner: bool,
    pub payment: f64,
    pub utility: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub market_digest: String,
    pub mechanism: String,
    pub welfare: f64,
    pub revenue: f64,
    pub cost: f64,
    pub buyer_payments: f64,
    pub intermediary_payments: f64,
    pub winners: Vec<AgentId>,
    pub rows: Vec<AgentRow>,
}

impl RunReport {
    pub fn new<S: Scalar>(m: &Market<S>, o: &MechanismOutcome<S>) -> Self {
        let rows = m
            .agents()
            .map(|r| AgentRow {
                id: r.id.clone(),
                kind: r.kind,
                valid: o.valid.contains(&r.id),
                winner: o.allocation.is_winner(&r.id),
                payment: o.payment(&r.id).to_f64_lossy(),
                utility: o.utility(&r.id).to_f64_lossy(),
            })
            .collect();
        // Revenue is recomputed from the payment map rather than copied.
        let revenue = o.payments.values().copied().sum::<S>() - o.cost;
        RunReport {
            market_digest: market_digest(m),
            mechanism: o.mechanism.name().to_owned(),
            welfare: o.welfare.to_f64_lossy(),
            revenue: revenue.to_f64_lossy(),
            cost: o.cost.to_f64_lossy(),
            buyer_payments: o.buyer_payments.to_f64_lossy(),
            intermediary_payments: o.intermediary_payments.to_f64_lossy(),
            winners: o.allocation.winners.iter().cloned().collect(),
            rows,
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let winners: Vec<&str> = self.winners.iter().map(AgentId::as_str).collect();
        let _ = writeln!(out, "mechanism: {}", self.mechanism);
        let _ = writeln!(out, "market:    {}", self.market_digest);
        let _ = writeln!(out, "winners:   {}", winners.join(", "));
        let _ = writeln!(
            out,
            "welfare {}  revenue {}  cost {}  buyers {}  intermediaries {}",
            num(self.welfare),
            num(self.revenue),
            num(self.cost),
            num(self.buyer_payments),
            num(self.intermediary_payments)
        );
        let _ = writeln!(
            out,
            "{:<10} {:<13} {:>5} {:>6} {:>10} {:>10}",
            "agent", "kind", "valid", "winner", "payment", "utility"
        );
        for r in &self.rows {
            let kind = match r.kind {
                AgentKind::Buyer => "buyer",
                AgentKind::Intermediary => "intermediary",
            };
            let _ = writeln!(
                out,
                "{:<10} {:<13} {:>5} {:>6} {:>10} {:>10}",
                r.id.as_str(),
                kind,
                yes_no(r.valid),
                yes_no(r.winner),
                num(r.payment),
                num(r.utility)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Integers print without a fractional part; everything else with up to six
/// decimals.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{x:.0}");
    }
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

/// One CSV document with a row per (mechanism, agent).
pub fn reports_csv(reports: &[RunReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record([
        "market_digest",
        "mechanism",
        "agent",
        "kind",
        "valid",
        "winner",
        "payment",
        "utility",
    ])
    .map_err(io)?;
    for rep in reports {
        for r in &rep.rows {
            let kind = match r.kind {
                AgentKind::Buyer => "buyer",
                AgentKind::Intermediary => "intermediary",
            };
            w.write_record([
                rep.market_digest.as_str(),
                rep.mechanism.as_str(),
                r.id.as_str(),
                kind,
                &r.valid.to_string(),
                &r.winner.to_string(),
                &num(r.payment),
                &num(r.utility),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
