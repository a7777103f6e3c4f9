//! Exhaustive enumeration of small connected graphs up to isomorphism.
//!
//! Every connected graph on `n` vertices arises from a connected graph on
//! `n - 1` vertices by attaching one new vertex to a nonempty neighbor
//! set (remove any non-cut vertex to see this). The enumerator grows
//! levels this way and deduplicates with a canonical form: the minimum
//! packed upper-triangle bitstring over all vertex orderings consistent
//! with an iterated degree-refinement coloring. Restricting to
//! color-preserving orderings is sound because isomorphisms preserve the
//! refinement, and it prunes the permutation search to near nothing on
//! irregular graphs.
//!
//! The quantities verified over these suites (expansion, conductance,
//! matching ratios) are isomorphism-invariant, so one representative per
//! class covers all connected graphs of that size.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{generate, Graph, NodeId};

/// Largest size the atlas supports; level 8 has 11117 classes.
pub const MAX_ATLAS_N: usize = 8;

#[derive(Clone, Copy)]
struct Small {
    n: usize,
    rows: [u8; MAX_ATLAS_N],
}

impl Small {
    fn single() -> Small {
        Small { n: 1, rows: [0; MAX_ATLAS_N] }
    }

    fn attach(&self, nb_mask: u8) -> Small {
        let mut child = *self;
        let v = child.n;
        child.rows[v] = nb_mask;
        for u in 0..v {
            if nb_mask & (1 << u) != 0 {
                child.rows[u] |= 1 << v;
            }
        }
        child.n += 1;
        child
    }

    fn to_graph(self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.rows[u] & (1 << v) != 0 {
                    edges.push((u as NodeId, v as NodeId));
                }
            }
        }
        Graph::from_edges(self.n, &edges).expect("atlas graphs are connected by construction")
    }
}

/// All connected graphs on `n` vertices, one per isomorphism class,
/// in canonical-key order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_ATLAS_N {
        return Err(Error::InvalidParams(format!(
            "atlas supports 1..={MAX_ATLAS_N} vertices, got {n}"
        )));
    }
    let mut level: Vec<(u32, Small)> = vec![(0, Small::single())];
    for _ in 1..n {
        let mut seen: HashSet<u32> = HashSet::new();
        let mut next: Vec<(u32, Small)> = Vec::new();
        for &(_, parent) in &level {
            for nb_mask in 1u8..(1 << parent.n) {
                let child = parent.attach(nb_mask);
                let key = canonical_key(&child);
                if seen.insert(key) {
                    next.push((key, child));
                }
            }
        }
        next.sort_unstable_by_key(|&(key, _)| key);
        level = next;
    }
    Ok(level.into_iter().map(|(_, s)| s.to_graph()).collect())
}

/// All connected graphs with between `min_n` and `max_n` vertices.
pub fn connected_graphs_up_to(min_n: usize, max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in min_n..=max_n {
        out.extend(connected_graphs(n)?);
    }
    Ok(out)
}

/// Minimum packed upper-triangle bitstring over color-class-preserving
/// vertex orderings.
fn canonical_key(g: &Small) -> u32 {
    let n = g.n;
    let colors = refine_colors(g);

    // Class c gets the contiguous position range in ascending color order.
    let num_colors = colors.iter().take(n).map(|&c| c + 1).max().unwrap_or(1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); num_colors];
    for (v, &c) in colors.iter().enumerate().take(n) {
        classes[c].push(v);
    }
    classes.retain(|c| !c.is_empty());

    let mut order = [0usize; MAX_ATLAS_N];
    let mut best = u32::MAX;
    assign_classes(g, &classes, 0, 0, &mut order, &mut best);
    best
}

fn assign_classes(
    g: &Small,
    classes: &[Vec<usize>],
    class_idx: usize,
    pos: usize,
    order: &mut [usize; MAX_ATLAS_N],
    best: &mut u32,
) {
    if class_idx == classes.len() {
        *best = (*best).min(pack_key(g, order));
        return;
    }
    let mut members = classes[class_idx].clone();
    permute_into(g, classes, class_idx, pos, &mut members, 0, order, best);
}

#[allow(clippy::too_many_arguments)]
fn permute_into(
    g: &Small,
    classes: &[Vec<usize>],
    class_idx: usize,
    base_pos: usize,
    members: &mut Vec<usize>,
    k: usize,
    order: &mut [usize; MAX_ATLAS_N],
    best: &mut u32,
) {
    if k == members.len() {
        assign_classes(g, classes, class_idx + 1, base_pos + members.len(), order, best);
        return;
    }
    for i in k..members.len() {
        members.swap(k, i);
        order[base_pos + k] = members[k];
        permute_into(g, classes, class_idx, base_pos, members, k + 1, order, best);
        members.swap(k, i);
    }
}

fn pack_key(g: &Small, order: &[usize; MAX_ATLAS_N]) -> u32 {
    let n = g.n;
    let mut key = 0u32;
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if g.rows[order[i]] & (1 << order[j]) != 0 {
                key |= 1 << bit;
            }
            bit += 1;
        }
    }
    key
}

/// Iterated degree refinement: colors start as degrees and are re-ranked
/// by (own color, sorted neighbor colors) for a few rounds. The ranks are
/// isomorphism-invariant because they derive from sorted signatures.
fn refine_colors(g: &Small) -> Vec<usize> {
    let n = g.n;
    let mut colors: Vec<usize> = (0..n).map(|v| g.rows[v].count_ones() as usize).collect();
    for _ in 0..3 {
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nbr: Vec<usize> = (0..n)
                    .filter(|&u| g.rows[v] & (1 << u) != 0)
                    .map(|u| colors[u])
                    .collect();
                nbr.sort_unstable();
                (colors[v], nbr)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let next: Vec<usize> = sigs
            .drain(..)
            .map(|s| uniq.binary_search(&s).expect("signature present"))
            .collect();
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

/// A reproducible suite of random connected graphs with `4..=max_n`
/// vertices, generated by G(n,p) conditioned on connectivity with
/// per-graph derived seeds.
pub fn random_connected_suite(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    assert!(max_n >= 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        let n = 4 + (out.len() % (max_n - 3));
        let p = rng.random_range(0.2..0.9);
        if let Ok(g) = generate::gnp(n, p, seed.wrapping_add(0x1000 + i)) {
            out.push(g);
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_known_values() {
        // numbers of connected graphs on 1..=7 unlabeled vertices
        let expected = [1usize, 1, 2, 6, 21, 112, 853];
        for (i, &want) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(connected_graphs(n).unwrap().len(), want, "n = {n}");
        }
    }

    #[test]
    fn class_count_n8() {
        assert_eq!(connected_graphs(8).unwrap().len(), 11117);
    }

    #[test]
    fn n3_classes_are_path_and_triangle() {
        let graphs = connected_graphs(3).unwrap();
        let mut edge_counts: Vec<_> = graphs.iter().map(Graph::edge_count).collect();
        edge_counts.sort_unstable();
        assert_eq!(edge_counts, vec![2, 3]);
    }

    #[test]
    fn all_graphs_valid_and_distinct() {
        let graphs = connected_graphs(6).unwrap();
        let mut keys = HashSet::new();
        for g in &graphs {
            assert_eq!(g.n(), 6);
            for u in 0..6u32 {
                for &v in g.neighbors(u) {
                    assert_ne!(u, v);
                    assert!(g.has_edge(v, u));
                }
            }
            let edges: Vec<_> = g.edges().collect();
            assert!(keys.insert(edges), "duplicate representative");
        }
    }

    #[test]
    fn isomorphic_inputs_share_a_key() {
        // P5 grown two different ways
        let a = Small::single().attach(1).attach(2).attach(4).attach(8);
        let b = Small::single().attach(1).attach(1).attach(2).attach(4);
        // b: edges 0-1, 2-0, 3-1, 4-2 is also a 5-path
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn random_suite_is_reproducible() {
        let a = random_connected_suite(50, 12, 77);
        let b = random_connected_suite(50, 12, 77);
        assert_eq!(a.len(), 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.n() <= 12 && g.n() >= 4));
    }
}
