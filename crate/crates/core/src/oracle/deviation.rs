use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocation::welfare_table;
use crate::market::{AgentId, Market, Report, ReportProfile};
use crate::scalar::{cmp, Scalar};

/// Finite misreport space used by the exhaustive checks.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationSpace<S = f64> {
    /// Ascending bids per buyer; always contains the true value.
    pub buyer_bid_grid: BTreeMap<AgentId, Vec<S>>,
    /// Declarable neighbor subsets per intermediary; always contains the
    /// full true set.
    pub intermediary_subsets: BTreeMap<AgentId, Vec<BTreeSet<AgentId>>>,
    pub max_degree: usize,
    /// Offset applied on both sides of each welfare breakpoint.
    pub epsilon: S,
    /// False when some intermediary exceeds `max_degree` and only a partial
    /// subset family was enumerated.
    pub exhaustive: bool,
}

/// Subsets of `set`: all of them when `|set| <= max_degree`, otherwise the
/// empty set, singletons, co-singletons and the full set.
pub fn subsets_of(set: &BTreeSet<AgentId>, max_degree: usize) -> (Vec<BTreeSet<AgentId>>, bool) {
    let items: Vec<&AgentId> = set.iter().collect();
    let n = items.len();
    if n <= max_degree {
        let all = (0u32..(1 << n))
            .map(|mask| {
                items
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, id)| (*id).clone())
                    .collect()
            })
            .collect();
        return (all, true);
    }
    let mut family: BTreeSet<BTreeSet<AgentId>> = BTreeSet::new();
    family.insert(BTreeSet::new());
    family.insert(set.clone());
    for id in &items {
        family.insert(std::iter::once((*id).clone()).collect());
        let mut co = set.clone();
        co.remove(*id);
        family.insert(co);
    }
    (family.into_iter().collect(), false)
}

fn sorted_unique<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    v.sort_by(cmp);
    v.dedup_by(|a, b| a == b);
    v
}

/// Bids at which buyer `j`'s outcome can change when the others report `q`:
/// its path cost, path cost plus every other buyer's welfare, and the other
/// bids, each offset by `±eps`, plus zero and the true value.
pub fn bid_breakpoints<S: Scalar>(
    m: &Market<S>,
    q: &ReportProfile<S>,
    j: &AgentId,
    eps: S,
) -> Vec<S> {
    let truth = m.true_value(j).unwrap_or_else(S::zero);
    let mut pts = vec![S::zero(), truth];
    let probe = q.with_bid(j, S::zero());
    let table = welfare_table(m, &probe);
    let mut centers = Vec::new();
    if let Some(t) = table.path.get(j) {
        centers.push(t.cost);
        for (l, w) in &table.per_buyer {
            if l != j {
                centers.push(t.cost + *w);
            }
        }
    }
    for r in m.agents() {
        if &r.id != j {
            if let Some(b) = q.bid(&r.id) {
                centers.push(b);
            }
        }
    }
    for c in centers {
        pts.extend([c - eps, c, c + eps]);
    }
    sorted_unique(pts.into_iter().filter(|b| *b >= S::zero()).collect())
}

impl<S: Scalar> DeviationSpace<S> {
    /// Breakpoint grids computed against the truthful profile.
    pub fn breakpoints(m: &Market<S>, max_degree: usize, epsilon: S) -> Self {
        let truthful = m.truthful_profile();
        let buyer_bid_grid = m
            .buyers()
            .map(|j| (j.clone(), bid_breakpoints(m, &truthful, j, epsilon)))
            .collect();
        Self::with_grids(m, buyer_bid_grid, max_degree, epsilon)
    }

    /// The same explicit grid for every buyer (plus its true value).
    pub fn uniform(m: &Market<S>, grid: &[S], max_degree: usize) -> Self {
        let buyer_bid_grid = m
            .buyers()
            .map(|j| {
                let mut g = grid.to_vec();
                g.push(m.true_value(j).unwrap_or_else(S::zero));
                (j.clone(), sorted_unique(g))
            })
            .collect();
        let eps = S::from_f64(1e-3).unwrap_or_else(S::zero);
        Self::with_grids(m, buyer_bid_grid, max_degree, eps)
    }

    fn with_grids(
        m: &Market<S>,
        buyer_bid_grid: BTreeMap<AgentId, Vec<S>>,
        max_degree: usize,
        epsilon: S,
    ) -> Self {
        let mut exhaustive = true;
        let intermediary_subsets = m
            .intermediaries()
            .map(|i| {
                let (family, full) =
                    subsets_of(m.true_neighbors(i).expect("intermediary"), max_degree);
                exhaustive &= full;
                (i.clone(), family)
            })
            .collect();
        DeviationSpace {
            buyer_bid_grid,
            intermediary_subsets,
            max_degree,
            epsilon,
            exhaustive,
        }
    }

    /// Every alternative report of agent `k` in this space, given that the
    /// others report `q`. Buyer grids are widened with breakpoints under `q`.
    pub fn reports_for(&self, m: &Market<S>, q: &ReportProfile<S>, k: &AgentId) -> Vec<Report<S>> {
        if let Some(grid) = self.buyer_bid_grid.get(k) {
            let mut bids = grid.clone();
            bids.extend(bid_breakpoints(m, q, k, self.epsilon));
            return sorted_unique(bids).into_iter().map(Report::Bid).collect();
        }
        self.intermediary_subsets
            .get(k)
            .map(|f| f.iter().cloned().map(Report::Neighbors).collect())
            .unwrap_or_default()
    }

    pub fn bids_for(&self, m: &Market<S>, q: &ReportProfile<S>, j: &AgentId) -> Vec<S> {
        self.reports_for(m, q, j)
            .into_iter()
            .filter_map(|r| match r {
                Report::Bid(b) => Some(b),
                Report::Neighbors(_) => None,
            })
            .collect()
    }
}

/// How the other agents report while one agent is examined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpponentMode {
    Truthful,
    /// The truthful profile plus `samples` profiles in which every agent
    /// independently keeps its true report or draws one from the space.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

impl OpponentMode {
    pub fn is_sampled(&self) -> bool {
        matches!(self, OpponentMode::Sampled { .. })
    }
}

/// Opponent profiles for the checks; the first is always truthful.
pub fn opponent_profiles<S: Scalar>(
    m: &Market<S>,
    d: &DeviationSpace<S>,
    mode: OpponentMode,
) -> Vec<ReportProfile<S>> {
    let truthful = m.truthful_profile();
    let mut out = vec![truthful.clone()];
    if let OpponentMode::Sampled { samples, seed } = mode {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let mut q = truthful.clone();
            for r in m.agents() {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let choice = if let Some(grid) = d.buyer_bid_grid.get(&r.id) {
                    grid.choose(&mut rng).map(|b| Report::Bid(*b))
                } else {
                    d.intermediary_subsets
                        .get(&r.id)
                        .and_then(|f| f.choose(&mut rng))
                        .map(|s| Report::Neighbors(s.clone()))
                };
                if let Some(rep) = choice {
                    q = q.with_report(&r.id, rep);
                }
            }
            out.push(q);
        }
    }
    out
}
