//! Static and dynamic graph representations and generators.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

mod dynamic;
pub mod generate;
pub mod io;

pub use dynamic::{DynamicGraph, DynamicsModel, Stability};

/// Dense vertex identifier in `0..n`.
pub type NodeId = u32;

/// Undirected connected graph with sorted adjacency lists.
///
/// Vertices are the IDs `0..n`. Construction enforces the model
/// assumptions: no self-loops, no duplicate edges, connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
    max_degree: usize,
    min_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating and validating.
    ///
    /// Errors with [`Error::InvalidEdge`] on out-of-range endpoints or
    /// self-loops and [`Error::DisconnectedGraph`] if the result is not
    /// connected.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("graph must have at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Self::from_adjacency(adj, set.len());
        if !g.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(g)
    }

    fn from_adjacency(adj: Vec<Vec<NodeId>>, edge_count: usize) -> Self {
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        let min_degree = adj.iter().map(Vec::len).min().unwrap_or(0);
        Graph { adj, edge_count, max_degree, min_degree }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    /// Maximum degree Delta.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Minimum degree delta.
    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0 as NodeId]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Relabels vertices: vertex `u` becomes `perm[u]`.
    ///
    /// `perm` must be a permutation of `0..n`. The result is isomorphic to
    /// `self`, so every degree and expansion quantity is preserved.
    pub fn relabel(&self, perm: &[NodeId]) -> Graph {
        debug_assert_eq!(perm.len(), self.n());
        let mut adj = vec![Vec::new(); self.n()];
        for (u, list) in self.adj.iter().enumerate() {
            let pu = perm[u] as usize;
            adj[pu] = list.iter().map(|&v| perm[v as usize]).collect();
            adj[pu].sort_unstable();
        }
        Self::from_adjacency(adj, self.edge_count)
    }
}

/// Validates a caller-supplied vertex subset: in-range, deduplicated,
/// non-empty and proper. Returns the subset as a sorted vector.
pub(crate) fn check_subset(g: &Graph, subset: &[NodeId]) -> Result<Vec<NodeId>> {
    let mut s: Vec<NodeId> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&v) = s.iter().find(|&&v| v as usize >= g.n()) {
        return Err(Error::InvalidParams(format!("vertex {v} out of range")));
    }
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    if s.len() == g.n() {
        return Err(Error::FullSubset);
    }
    Ok(s)
}
