//! Exhaustive allocation search, independent of the shortest-path engine.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::allocation::{Allocation, Transaction};
use crate::error::{Error, Result};
use crate::market::{AgentId, Market, ReportProfile};
use crate::scalar::Scalar;

pub const DEFAULT_BUYER_BOUND: usize = 12;

/// Enumerates every simple declared path from the seller to `j` over valid
/// agents and returns a cheapest one (ties to the smallest rank sequence).
pub fn enumerate_cheapest_path<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    j: &AgentId,
) -> Option<Transaction<S>> {
    let valid = m.valid_agents(p);
    if !valid.contains(j) {
        return None;
    }
    let mut best: Option<Transaction<S>> = None;
    let mut stack = vec![AgentId::seller()];
    let mut on_path: BTreeSet<AgentId> = BTreeSet::new();
    dfs(
        m,
        p,
        j,
        &valid,
        &mut stack,
        &mut on_path,
        S::zero(),
        &mut best,
    );
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    target: &AgentId,
    valid: &BTreeSet<AgentId>,
    stack: &mut Vec<AgentId>,
    on_path: &mut BTreeSet<AgentId>,
    cost: S,
    best: &mut Option<Transaction<S>>,
) {
    let here = stack.last().expect("nonempty").clone();
    if &here == target {
        let cand = Transaction {
            path: stack.clone(),
            cost,
        };
        let replace = match best {
            None => true,
            Some(b) => match cand.cost.partial_cmp(&b.cost) {
                Some(Ordering::Less) => true,
                Some(Ordering::Equal) => {
                    let ra: Vec<u32> = cand.path.iter().map(|a| m.rank(a)).collect();
                    let rb: Vec<u32> = b.path.iter().map(|a| m.rank(a)).collect();
                    ra < rb
                }
                _ => false,
            },
        };
        if replace {
            *best = Some(cand);
        }
        return;
    }
    let next: Vec<AgentId> = if here.is_seller() {
        m.seller_neighbors().iter().cloned().collect()
    } else {
        match p.declared(&here) {
            Some(set) => set.iter().cloned().collect(),
            None => return,
        }
    };
    for v in next {
        if !valid.contains(&v) || on_path.contains(&v) {
            continue;
        }
        let w = m.cost(&here, &v).expect("edge cost");
        stack.push(v.clone());
        on_path.insert(v.clone());
        dfs(m, p, target, valid, stack, on_path, cost + w, best);
        on_path.remove(&v);
        stack.pop();
    }
}

/// Maximizes welfare over every subset of at most K valid buyers, each served
/// by its cheapest path. Among equal-welfare subsets the larger one wins (so
/// zero-welfare buyers are served), then the smaller rank list.
pub fn brute_force_allocation<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    bound: usize,
) -> Result<Allocation<S>> {
    let buyers: Vec<(Transaction<S>, S)> = m
        .buyers()
        .filter_map(|j| {
            let bid = p.bid(j)?;
            let t = enumerate_cheapest_path(m, p, j)?;
            let w = bid - t.cost;
            Some((t, w))
        })
        .collect();
    if buyers.len() > bound {
        return Err(Error::BoundExceeded {
            found: buyers.len(),
            bound,
        });
    }
    let k = m.item_count();
    let mut best_mask = 0u32;
    let mut best_welfare = S::zero();
    let mut best_ranks: Vec<u32> = Vec::new();
    let mut best_count = 0u32;
    for mask in 1u32..(1 << buyers.len()) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let chosen = || (0..buyers.len()).filter(|b| mask & (1 << b) != 0);
        let welfare: S = chosen().map(|b| buyers[b].1).sum();
        let mut ranks: Vec<u32> = chosen().map(|b| m.rank(buyers[b].0.buyer())).collect();
        ranks.sort_unstable();
        let better = match welfare.partial_cmp(&best_welfare) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => {
                mask.count_ones() > best_count
                    || (mask.count_ones() == best_count && ranks < best_ranks)
            }
            _ => false,
        };
        if better {
            best_mask = mask;
            best_welfare = welfare;
            best_ranks = ranks;
            best_count = mask.count_ones();
        }
    }
    let transactions = (0..buyers.len())
        .filter(|b| best_mask & (1 << b) != 0)
        .map(|b| buyers[b].0.clone())
        .collect();
    Ok(Allocation::from_transactions(transactions))
}
