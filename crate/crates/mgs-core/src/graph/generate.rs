//! Graph generators: the constructions used by the lower bounds plus
//! standard baseline families for sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Retry cap for G(n,p) conditioned on connectivity.
const GNP_RETRIES: u32 = 100;

/// Generalized star `S_{delta,Delta}`: a clique of `delta` center nodes
/// (IDs `0..delta`) plus `Delta` point nodes (IDs `delta..delta+Delta`),
/// each adjacent to every center and nothing else.
///
/// Has conductance bounded below by a constant, yet under one connection
/// per round at most `delta` points can learn a rumor per round.
pub fn gstar(delta: usize, big_delta: usize) -> Result<Graph> {
    if delta < 1 || delta > big_delta {
        return Err(Error::InvalidParams(format!(
            "gstar requires 1 <= delta <= Delta, got delta={delta}, Delta={big_delta}"
        )));
    }
    let n = delta + big_delta;
    let mut edges = Vec::with_capacity(delta * (delta - 1) / 2 + delta * big_delta);
    for u in 0..delta {
        for v in (u + 1)..delta {
            edges.push((u as NodeId, v as NodeId));
        }
        for p in delta..n {
            edges.push((u as NodeId, p as NodeId));
        }
    }
    Graph::from_edges(n, &edges)
}

/// The expansion lower-bound construction: left half `L` (IDs `0..n/2`) is
/// a clique, right half `R` (IDs `n/2..n`) an independent set, joined by a
/// perfect matching `(i, i + n/2)` and a complete bipartite graph between
/// `R` and the hub `L* = {0..floor(sqrt(n))}`.
///
/// Has constant vertex expansion, but blind PUSH-PULL needs on the order
/// of `sqrt(n)` rounds because `R` is reachable almost only through the
/// hub.
pub fn badgraph(n: usize) -> Result<Graph> {
    if n % 2 != 0 || n < 16 {
        return Err(Error::InvalidParams(format!("badgraph requires even n >= 16, got {n}")));
    }
    let half = n / 2;
    let hub = isqrt(n);
    let mut edges = Vec::new();
    for u in 0..half {
        for v in (u + 1)..half {
            edges.push((u as NodeId, v as NodeId));
        }
    }
    for i in 0..half {
        edges.push((i as NodeId, (i + half) as NodeId));
    }
    for u in 0..hub {
        for r in half..n {
            edges.push((u as NodeId, r as NodeId));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Size of the bad graph hub for a given `n`.
pub fn badgraph_hub(n: usize) -> usize {
    isqrt(n)
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParams("complete graph requires n >= 1".into()));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u as NodeId, v as NodeId));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParams("path requires n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) as NodeId, v as NodeId)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParams("cycle requires n >= 3".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|v| ((v - 1) as NodeId, v as NodeId)).collect();
    edges.push(((n - 1) as NodeId, 0));
    Graph::from_edges(n, &edges)
}

/// Hypercube on `n = 2^d` vertices; vertices adjacent iff their IDs differ
/// in exactly one bit.
pub fn hypercube(n: usize) -> Result<Graph> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParams(format!("hypercube requires n a power of two >= 2, got {n}")));
    }
    let dim = n.trailing_zeros();
    let mut edges = Vec::new();
    for u in 0..n {
        for b in 0..dim {
            let v = u ^ (1 << b);
            if u < v {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Erdos-Renyi G(n,p) conditioned on connectivity: rejection sampling with
/// a fresh edge draw per attempt, deterministic for a fixed seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParams("gnp requires n >= 2".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("gnp requires p in [0,1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for _ in 0..GNP_RETRIES {
        edges.clear();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((u as NodeId, v as NodeId));
                }
            }
        }
        match Graph::from_edges(n, &edges) {
            Ok(g) => return Ok(g),
            Err(Error::DisconnectedGraph) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed(GNP_RETRIES))
}

/// A graph family keyed by size, used by sweeps and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Complete,
    Cycle,
    Path,
    Hypercube,
    Gnp { p: f64 },
    /// Generalized star with a fixed center size; the point count is
    /// `n - delta`.
    Gstar { delta: usize },
    Badgraph,
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Complete => "complete",
            FamilySpec::Cycle => "cycle",
            FamilySpec::Path => "path",
            FamilySpec::Hypercube => "hypercube",
            FamilySpec::Gnp { .. } => "gnp",
            FamilySpec::Gstar { .. } => "gstar",
            FamilySpec::Badgraph => "badgraph",
        }
    }

    /// Generates the family member with `n` vertices. `seed` is only
    /// consumed by randomized families.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Graph> {
        match self {
            FamilySpec::Complete => complete(n),
            FamilySpec::Cycle => cycle(n),
            FamilySpec::Path => path(n),
            FamilySpec::Hypercube => hypercube(n),
            FamilySpec::Gnp { p } => gnp(n, *p, seed),
            FamilySpec::Gstar { delta } => {
                if n <= *delta {
                    return Err(Error::InvalidParams(format!(
                        "gstar family needs n > delta, got n={n}, delta={delta}"
                    )));
                }
                gstar(*delta, n - delta)
            }
            FamilySpec::Badgraph => badgraph(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gstar_examples() {
        let star = gstar(1, 3).unwrap();
        assert_eq!(star.n(), 4);
        assert_eq!(star.degree(0), 3);
        assert_eq!(star.degree(1), 1);

        let g = gstar(2, 4).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.degree(0), 5);
        assert_eq!(g.degree(1), 5);
        for p in 2..6 {
            assert_eq!(g.degree(p), 2);
        }
        // delta*(delta-1)/2 + delta*Delta
        assert_eq!(g.edge_count(), 1 + 8);
        assert_eq!(gstar(3, 9).unwrap().edge_count(), 3 + 27);
    }

    #[test]
    fn gstar_rejects_bad_params() {
        assert!(gstar(0, 3).is_err());
        assert!(gstar(5, 3).is_err());
    }

    #[test]
    fn badgraph_structure() {
        let g = badgraph(16).unwrap();
        assert_eq!(g.n(), 16);
        // hub = 4; edges: C(8,2) + 8 matching + 4*8 bipartite - 4 overlaps
        assert_eq!(g.edge_count(), 28 + 8 + 32 - 4);
        // degree histogram by construction: hub nodes see the whole clique
        // plus all of R; non-hub L keeps clique plus its match; R nodes
        // matched into the hub lose the duplicate edge.
        for u in 0..4 {
            assert_eq!(g.degree(u), 15);
        }
        for u in 4..8 {
            assert_eq!(g.degree(u), 8);
        }
        for r in 8..12 {
            assert_eq!(g.degree(r), 4);
        }
        for r in 12..16 {
            assert_eq!(g.degree(r), 5);
        }
        // matching edges present
        for i in 0..8u32 {
            assert!(g.has_edge(i, i + 8));
        }
    }

    #[test]
    fn badgraph_rejects_bad_params() {
        assert!(badgraph(15).is_err());
        assert!(badgraph(14).is_err());
    }

    #[test]
    fn badgraph_hub_is_floor_sqrt() {
        assert_eq!(badgraph_hub(16), 4);
        assert_eq!(badgraph_hub(64), 8);
        assert_eq!(badgraph_hub(4096), 64);
        assert_eq!(badgraph_hub(18), 4);
    }

    #[test]
    fn families() {
        assert_eq!(complete(4).unwrap().edge_count(), 6);
        let c = cycle(5).unwrap();
        assert_eq!(c.max_degree(), 2);
        assert_eq!(c.min_degree(), 2);
        assert_eq!(path(5).unwrap().edge_count(), 4);
        let h = hypercube(8).unwrap();
        assert_eq!(h.edge_count(), 12);
        assert_eq!(h.max_degree(), 3);
        assert!(cycle(2).is_err());
        assert!(hypercube(6).is_err());
    }

    #[test]
    fn gnp_is_seed_deterministic() {
        let a = gnp(32, 0.3, 1).unwrap();
        let b = gnp(32, 0.3, 1).unwrap();
        assert_eq!(a, b);
        let c = gnp(32, 0.3, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_gives_up_when_impossible() {
        assert!(matches!(gnp(8, 0.0, 7), Err(Error::GenerationFailed(_))));
    }
}
