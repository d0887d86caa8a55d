//! Seeded random markets for property suites and experiments.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::market::{build_market, AgentId, AgentRecord, Market};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Topology {
    /// Each intermediary hangs off one uniformly chosen earlier node.
    Tree,
    /// A tree plus extra intermediary-to-intermediary edges, each ordered
    /// pair added independently with the given probability.
    General { extra_edge_probability: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n_intermediaries: RangeInclusive<usize>,
    pub buyers_per_intermediary: RangeInclusive<usize>,
    pub direct_buyers: RangeInclusive<usize>,
    pub value_range: (f64, f64),
    pub cost_range: (f64, f64),
    pub k: usize,
    pub topology: Topology,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            n_intermediaries: 1..=4,
            buyers_per_intermediary: 1..=2,
            direct_buyers: 0..=2,
            value_range: (0.0, 20.0),
            cost_range: (0.0, 3.0),
            k: 2,
            topology: Topology::Tree,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        for (name, r) in [
            ("n_intermediaries", &self.n_intermediaries),
            ("buyers_per_intermediary", &self.buyers_per_intermediary),
            ("direct_buyers", &self.direct_buyers),
        ] {
            if r.is_empty() {
                return bad(&format!("{name} range is empty"));
            }
        }
        if self.n_intermediaries.start() + self.direct_buyers.start() == 0 {
            return bad("market could be empty");
        }
        let (vlo, vhi) = self.value_range;
        if !(vlo.is_finite() && vhi.is_finite()) || vlo < 0.0 || vlo > vhi {
            return bad("value range must be a nonempty interval in [0, inf)");
        }
        let (clo, chi) = self.cost_range;
        if !(clo.is_finite() && chi.is_finite()) || clo < 0.0 || clo > chi {
            return bad("cost range must be a nonempty interval in [0, inf)");
        }
        if self.k < 1 {
            return bad("k must be at least 1");
        }
        if let Topology::General {
            extra_edge_probability: q,
        } = self.topology
        {
            if !(0.0..=1.0).contains(&q) {
                return bad("extra edge probability must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    round2(rng.gen_range(lo..=hi)).clamp(round2(lo), round2(hi))
}

/// Generates a market; identical configs give identical markets.
pub fn generate<S: Scalar>(cfg: &GeneratorConfig) -> Result<Market<S>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seller = AgentId::seller();

    let n = rng.gen_range(cfg.n_intermediaries.clone());
    let inter: Vec<AgentId> = (1..=n).map(|i| AgentId::new(format!("I{i:02}"))).collect();
    let mut neighbors: BTreeMap<AgentId, BTreeSet<AgentId>> =
        inter.iter().map(|i| (i.clone(), BTreeSet::new())).collect();
    let mut seller_neighbors = BTreeSet::new();
    let mut costs: BTreeMap<(AgentId, AgentId), f64> = BTreeMap::new();
    let mut records: Vec<AgentRecord<S>> = Vec::new();

    for (idx, i) in inter.iter().enumerate() {
        let parent = rng.gen_range(0..=idx);
        let from = if parent == 0 {
            seller_neighbors.insert(i.clone());
            seller.clone()
        } else {
            let p = inter[parent - 1].clone();
            neighbors
                .get_mut(&p)
                .expect("earlier intermediary")
                .insert(i.clone());
            p
        };
        costs.insert((from, i.clone()), draw(&mut rng, cfg.cost_range));
    }

    for (idx, i) in inter.iter().enumerate() {
        let count = rng.gen_range(cfg.buyers_per_intermediary.clone());
        for b in 1..=count {
            let id = AgentId::new(format!("i{:02}-{b}", idx + 1));
            let value = draw(&mut rng, cfg.value_range);
            records.push(AgentRecord::buyer(id.clone(), S::from_decimal(value)));
            neighbors
                .get_mut(i)
                .expect("intermediary")
                .insert(id.clone());
            costs.insert((i.clone(), id), draw(&mut rng, cfg.cost_range));
        }
    }

    let direct = rng.gen_range(cfg.direct_buyers.clone());
    for b in 1..=direct {
        let id = AgentId::new(format!("s{b}"));
        let value = draw(&mut rng, cfg.value_range);
        records.push(AgentRecord::buyer(id.clone(), S::from_decimal(value)));
        seller_neighbors.insert(id.clone());
        costs.insert((seller.clone(), id), 0.0);
    }

    if let Topology::General {
        extra_edge_probability: q,
    } = cfg.topology
    {
        for a in &inter {
            for b in &inter {
                if a == b || neighbors[a].contains(b) {
                    continue;
                }
                if rng.gen_bool(q) {
                    neighbors
                        .get_mut(a)
                        .expect("intermediary")
                        .insert(b.clone());
                    if !costs.contains_key(&(b.clone(), a.clone())) {
                        costs.insert((a.clone(), b.clone()), draw(&mut rng, cfg.cost_range));
                    }
                }
            }
        }
    }

    for (i, ns) in neighbors {
        records.push(AgentRecord::intermediary(i, ns));
    }
    build_market(
        records,
        seller_neighbors,
        costs
            .into_iter()
            .map(|((a, b), w)| (a, b, S::from_decimal(w))),
        cfg.k,
    )
}
