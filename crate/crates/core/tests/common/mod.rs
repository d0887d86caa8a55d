#![allow(dead_code)]

use auction_lab::{generate, GeneratorConfig, Market, Topology};

/// Up to 5 intermediaries with one buyer each and up to 3 direct buyers.
pub fn sparse(topology: Topology) -> GeneratorConfig {
    GeneratorConfig {
        n_intermediaries: 1..=5,
        buyers_per_intermediary: 1..=1,
        direct_buyers: 0..=3,
        topology,
        ..GeneratorConfig::default()
    }
}

/// Up to 3 intermediaries with one or two buyers each.
pub fn bushy(topology: Topology) -> GeneratorConfig {
    GeneratorConfig {
        n_intermediaries: 1..=3,
        buyers_per_intermediary: 1..=2,
        direct_buyers: 0..=2,
        topology,
        ..GeneratorConfig::default()
    }
}

/// Intermediaries owning at least two buyers each.
pub fn rich() -> GeneratorConfig {
    GeneratorConfig {
        n_intermediaries: 1..=4,
        buyers_per_intermediary: 2..=3,
        direct_buyers: 1..=2,
        ..GeneratorConfig::default()
    }
}

pub fn general() -> Topology {
    Topology::General {
        extra_edge_probability: 0.3,
    }
}

/// The market for `seed`: sparse for even seeds, bushy for odd ones.
pub fn shaped(seed: u64, topology: Topology) -> Market {
    let cfg = if seed.is_multiple_of(2) {
        sparse(topology)
    } else {
        bushy(topology)
    };
    generate(&cfg.with_seed(seed)).expect("valid config")
}

/// `count` markets, alternating between the sparse and bushy shapes.
pub fn mixed(topology: Topology, count: usize) -> Vec<Market> {
    (0..count as u64)
        .map(|seed| shaped(seed, topology))
        .collect()
}

/// The first `count` mixed tree markets whose neighbor sets have at most
/// `max_degree` members, so subset deviations are exhaustive.
pub fn small_degree_trees(count: usize, max_degree: usize) -> Vec<Market> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let m = shaped(seed, Topology::Tree);
        if m.max_degree() <= max_degree {
            out.push(m);
        }
        seed += 1;
    }
    out
}
