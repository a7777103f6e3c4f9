//! Bipartite bridge graphs between informed and uninformed partitions.
//!
//! Because every node joins at most one connection per round, the
//! connections realized in a round form a matching, and the maximum
//! matching on the bridge graph `B(S)` caps how many new nodes the
//! informed set `S` can reach in one round. The ratio
//! `gamma = min over S, |S| <= n/2 of nu(B(S)) / |S|` therefore governs
//! the offline-optimal spreading rate, and satisfies
//! `gamma >= alpha / 4` for vertex expansion `alpha`.

use crate::error::{Error, Result};
use crate::graph::{check_subset, Graph, NodeId};
use crate::metrics::{
    check_exact_cap, sampled_min, scan_masks, EvalMode, ExpansionResult, Mode, Ratio,
};

/// Subset enumeration cap for exact `gamma` (a matching solve per subset).
pub const EXACT_GAMMA_CAP: usize = 16;

/// Subset enumeration cap for [`verify_msize`].
pub const EXACT_MSIZE_CAP: usize = 12;

/// The bipartite graph `B(S)` with parts `S` and `V - S` and exactly the
/// edges of the host graph crossing the cut.
#[derive(Debug, Clone)]
pub struct BridgeGraph {
    left: Vec<NodeId>,
    right: Vec<NodeId>,
    /// Left index -> sorted right indices.
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl BridgeGraph {
    /// Nodes of the informed side `S`, sorted.
    pub fn left(&self) -> &[NodeId] {
        &self.left
    }

    /// Nodes of `V - S`, sorted.
    pub fn right(&self) -> &[NodeId] {
        &self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Cross edges as `(u in S, v not in S)` pairs.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (li, targets) in self.adj.iter().enumerate() {
            for &ri in targets {
                out.push((self.left[li], self.right[ri as usize]));
            }
        }
        out
    }
}

/// A matching on a bridge graph: disjoint `(left node, right node)` pairs,
/// each an edge of the bridge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(NodeId, NodeId)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Builds `B(S)` for a nonempty proper subset `S`.
pub fn bridge(g: &Graph, subset: &[NodeId]) -> Result<BridgeGraph> {
    let left = check_subset(g, subset)?;
    let mut in_s = vec![false; g.n()];
    for &v in &left {
        in_s[v as usize] = true;
    }
    let right: Vec<NodeId> = (0..g.n() as NodeId).filter(|&v| !in_s[v as usize]).collect();
    let mut right_index = vec![u32::MAX; g.n()];
    for (i, &v) in right.iter().enumerate() {
        right_index[v as usize] = i as u32;
    }
    let mut edge_count = 0;
    let adj: Vec<Vec<u32>> = left
        .iter()
        .map(|&u| {
            let targets: Vec<u32> = g
                .neighbors(u)
                .iter()
                .filter(|&&v| !in_s[v as usize])
                .map(|&v| right_index[v as usize])
                .collect();
            edge_count += targets.len();
            targets
        })
        .collect();
    Ok(BridgeGraph { left, right, adj, edge_count })
}

/// Maximum-cardinality matching via Hopcroft-Karp (layered BFS plus DFS
/// augmentation). Ties are broken deterministically: left nodes in
/// ascending ID order, neighbors in sorted order.
pub fn max_matching(b: &BridgeGraph) -> Matching {
    let (match_left, _) = hopcroft_karp(&b.adj, b.right.len());
    let pairs = match_left
        .iter()
        .enumerate()
        .filter_map(|(li, &ri)| ri.map(|ri| (b.left[li], b.right[ri as usize])))
        .collect();
    Matching { pairs }
}

/// Core solver over a left-indexed adjacency. Returns the left-side
/// assignment and the matching size.
fn hopcroft_karp(adj: &[Vec<u32>], right_count: usize) -> (Vec<Option<u32>>, usize) {
    const INF: u32 = u32::MAX;
    let left_count = adj.len();
    let mut match_left: Vec<Option<u32>> = vec![None; left_count];
    let mut match_right: Vec<Option<u32>> = vec![None; right_count];
    let mut dist = vec![INF; left_count];
    let mut queue = std::collections::VecDeque::new();
    let mut size = 0usize;

    loop {
        queue.clear();
        for (u, m) in match_left.iter().enumerate() {
            if m.is_none() {
                dist[u] = 0;
                queue.push_back(u as u32);
            } else {
                dist[u] = INF;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u as usize] {
                match match_right[v as usize] {
                    None => reachable_free = true,
                    Some(w) => {
                        if dist[w as usize] == INF {
                            dist[w as usize] = dist[u as usize] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        if !reachable_free {
            break;
        }
        for u in 0..left_count {
            if match_left[u].is_none()
                && augment(u, adj, &mut match_left, &mut match_right, &mut dist)
            {
                size += 1;
            }
        }
    }
    (match_left, size)
}

fn augment(
    u: usize,
    adj: &[Vec<u32>],
    match_left: &mut [Option<u32>],
    match_right: &mut [Option<u32>],
    dist: &mut [u32],
) -> bool {
    for &v in &adj[u] {
        let take = match match_right[v as usize] {
            None => true,
            Some(w) => {
                dist[w as usize] == dist[u].wrapping_add(1)
                    && augment(w as usize, adj, match_left, match_right, dist)
            }
        };
        if take {
            match_left[u] = Some(v);
            match_right[v as usize] = Some(u as u32);
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

/// Matching size of `B(S)` for a bitmask subset; used by the enumerations.
pub(crate) fn matching_size_for_mask(g: &Graph, mask: u32) -> usize {
    let n = g.n();
    let mut right_index = vec![u32::MAX; n];
    let mut right_count = 0u32;
    for v in 0..n {
        if mask & (1 << v) == 0 {
            right_index[v] = right_count;
            right_count += 1;
        }
    }
    let mut adj = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let u = m.trailing_zeros();
        adj.push(
            g.neighbors(u)
                .iter()
                .filter(|&&v| mask & (1 << v) == 0)
                .map(|&v| right_index[v as usize])
                .collect::<Vec<u32>>(),
        );
        m &= m - 1;
    }
    hopcroft_karp(&adj, right_count as usize).1
}

/// The matching-to-set-size ratio
/// `gamma = min over S, 0 < |S| <= n/2 of nu(B(S)) / |S|`.
///
/// Exact mode enumerates all subsets with a matching solve per subset
/// (cap [`EXACT_GAMMA_CAP`]); sampled mode returns an upper bound.
pub fn gamma(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    gamma_impl(g, mode, false)
}

/// Always-sequential variant of [`gamma`].
pub fn gamma_seq(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    gamma_impl(g, mode, true)
}

fn gamma_impl(g: &Graph, mode: Mode, sequential: bool) -> Result<ExpansionResult> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("gamma needs at least two vertices".into()));
    }
    match mode {
        Mode::Exact => {
            check_exact_cap(n, EXACT_GAMMA_CAP)?;
            let best = scan_masks(1u32 << n, sequential, |mask| {
                let size = mask.count_ones() as usize;
                if 2 * size > n {
                    return None;
                }
                Some((matching_size_for_mask(g, mask) as u64, size as u64))
            })
            .expect("n >= 2 has admissible subsets");
            Ok(ExpansionResult {
                value: Ratio::new(best.num, best.den),
                witness: (0..32).filter(|b| best.mask & (1 << b) != 0).collect(),
                mode: EvalMode::Exact,
            })
        }
        Mode::Sampled { samples, seed } => sampled_min(g, samples, seed, |g, s| {
            let b = bridge(g, s).expect("sampled subset is valid");
            let nu = max_matching(&b).len();
            (Ratio::new(nu as u64, s.len() as u64), s.to_vec())
        }),
    }
}

/// One subset's entry in a [`MsizeReport`].
#[derive(Debug, Clone)]
pub struct MsizeViolation {
    pub subset: Vec<NodeId>,
    pub matching_size: usize,
    /// The bound `alpha * |S| / 4` that was not met.
    pub required: Ratio,
}

/// Result of checking `nu(B(S)) >= alpha * |S| / 4` over all subsets.
#[derive(Debug, Clone)]
pub struct MsizeReport {
    pub alpha: Ratio,
    pub subsets_checked: u64,
    /// Expected empty.
    pub violations: Vec<MsizeViolation>,
    /// The minimum of `4 * nu(B(S)) / (alpha * |S|)` observed; the bound
    /// holds exactly when this is at least 1.
    pub tightest: Ratio,
}

impl MsizeReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every subset `S` with `0 < |S| <= n/2`, that the maximum
/// matching on `B(S)` has size at least `alpha * |S| / 4`, using the exact
/// vertex expansion. All comparisons are exact rational arithmetic.
pub fn verify_msize(g: &Graph) -> Result<MsizeReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("verify_msize needs at least two vertices".into()));
    }
    check_exact_cap(n, EXACT_MSIZE_CAP)?;
    let alpha = crate::metrics::vertex_expansion(g, Mode::Exact)?.value;
    let (a_num, a_den) = (*alpha.numer(), *alpha.denom());
    let mut violations = Vec::new();
    let mut tightest: Option<Ratio> = None;
    let mut checked = 0u64;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as u64;
        if 2 * size > n as u64 {
            continue;
        }
        checked += 1;
        let nu = matching_size_for_mask(g, mask) as u64;
        // nu >= alpha |S| / 4  <=>  4 nu a_den >= a_num |S|
        if 4 * nu * a_den < a_num * size {
            violations.push(MsizeViolation {
                subset: (0..32).filter(|b| mask & (1 << b) != 0).collect(),
                matching_size: nu as usize,
                required: Ratio::new(a_num * size, 4 * a_den),
            });
        }
        let ratio = Ratio::new(4 * nu * a_den, a_num * size);
        tightest = Some(match tightest {
            None => ratio,
            Some(t) => t.min(ratio),
        });
    }
    Ok(MsizeReport {
        alpha,
        subsets_checked: checked,
        violations,
        tightest: tightest.expect("at least one subset checked"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    /// Brute-force maximum matching: tries every edge subset. Independent
    /// of the solver; only usable on tiny bridges.
    fn brute_force_matching(b: &BridgeGraph) -> usize {
        let edges = b.edges();
        assert!(edges.len() <= 20, "brute force oracle limited to tiny graphs");
        let mut best = 0;
        for pick in 0u32..(1 << edges.len()) {
            let chosen: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| pick & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            let mut used = std::collections::HashSet::new();
            if chosen.iter().all(|&(u, v)| used.insert(u) && used.insert(v)) {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn bridge_star_center() {
        let g = generate::gstar(1, 3).unwrap();
        let b = bridge(&g, &[0]).unwrap();
        assert_eq!(b.edge_count(), 3);
        assert_eq!(max_matching(&b).len(), 1);
    }

    #[test]
    fn bridge_k4_pair() {
        let g = generate::complete(4).unwrap();
        let b = bridge(&g, &[0, 1]).unwrap();
        assert_eq!(b.edge_count(), 4);
        assert_eq!(max_matching(&b).len(), 2);
    }

    #[test]
    fn bridge_badgraph_left_half() {
        let g = generate::badgraph(16).unwrap();
        let left: Vec<u32> = (0..8).collect();
        let b = bridge(&g, &left).unwrap();
        let edges = b.edges();
        for i in 0..8u32 {
            assert!(edges.contains(&(i, i + 8)), "matching edge ({i},{}) missing", i + 8);
        }
        assert_eq!(max_matching(&b).len(), 8);
    }

    #[test]
    fn matching_pairs_are_valid() {
        let g = generate::badgraph(16).unwrap();
        let b = bridge(&g, &[0, 3, 5, 9, 11]).unwrap();
        let m = max_matching(&b);
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &m.pairs {
            assert!(g.has_edge(u, v));
            assert!(seen.insert(u));
            assert!(seen.insert(v));
        }
    }

    #[test]
    fn matches_brute_force_on_small_bridges() {
        let mut checked = 0;
        for seed in 0..30u64 {
            let g = generate::gnp(7, 0.4, seed).unwrap();
            for subset in [vec![0u32, 1], vec![0, 2, 4], vec![1, 3, 5], vec![0, 1, 2, 3]] {
                let b = bridge(&g, &subset).unwrap();
                if b.edge_count() <= 12 {
                    assert_eq!(max_matching(&b).len(), brute_force_matching(&b));
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn disjoint_edges_match_fully() {
        let g = generate::path(6).unwrap();
        let b = bridge(&g, &[0, 2, 4]).unwrap();
        assert_eq!(max_matching(&b).len(), 3);
    }

    #[test]
    fn gamma_p2() {
        let g = generate::path(2).unwrap();
        let r = gamma(&g, Mode::Exact).unwrap();
        assert_eq!(r.value, Ratio::new(1, 1));
    }

    #[test]
    fn gamma_star_k15() {
        let g = generate::gstar(1, 5).unwrap();
        let r = gamma(&g, Mode::Exact).unwrap();
        assert_eq!(r.value, Ratio::new(1, 3));
        // three leaves attain 1/3, and so does {center, leaf, leaf},
        // which wins the smallest-bitmask tie-break; either way the
        // witness must reproduce the value
        let b = bridge(&g, &r.witness).unwrap();
        let nu = max_matching(&b).len() as u64;
        assert_eq!(Ratio::new(nu, r.witness.len() as u64), r.value);
        assert_eq!(r.witness, vec![0, 1, 2]);
    }

    #[test]
    fn gamma_cap_enforced() {
        let g = generate::path(17).unwrap();
        assert!(matches!(gamma(&g, Mode::Exact), Err(Error::TooLargeForExact { .. })));
    }

    #[test]
    fn gamma_seq_matches() {
        for g in [generate::badgraph(16).unwrap(), generate::gstar(2, 6).unwrap()] {
            assert_eq!(gamma(&g, Mode::Exact).unwrap(), gamma_seq(&g, Mode::Exact).unwrap());
        }
    }

    #[test]
    fn gamma_sampled_upper_bounds() {
        let g = generate::gstar(2, 10).unwrap();
        let exact = gamma(&g, Mode::Exact).unwrap().value;
        let samp = gamma(&g, Mode::Sampled { samples: 100, seed: 4 }).unwrap();
        assert!(samp.value >= exact);
    }

    #[test]
    fn nu_bounded_by_sides_and_boundary() {
        let g = generate::badgraph(16).unwrap();
        for mask in [0b11u32, 0b1010101, 0b11110000, 0x00ff] {
            let subset: Vec<u32> = (0..16).filter(|b| mask & (1 << b) != 0).collect();
            let b = bridge(&g, &subset).unwrap();
            let nu = max_matching(&b).len();
            let report = crate::metrics::cut_report(&g, &subset).unwrap();
            assert!(nu <= subset.len());
            assert!(nu <= 16 - subset.len());
            assert!(nu <= report.boundary_size);
        }
    }

    #[test]
    fn verify_msize_no_violations_on_examples() {
        for g in [
            generate::gstar(1, 5).unwrap(),
            generate::complete(4).unwrap(),
            generate::gstar(2, 4).unwrap(),
        ] {
            let report = verify_msize(&g).unwrap();
            assert!(report.holds(), "violations: {:?}", report.violations);
            assert!(report.tightest >= Ratio::new(1, 1));
        }
    }
}
