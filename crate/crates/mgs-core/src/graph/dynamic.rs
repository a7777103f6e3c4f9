//! Dynamic graphs: sequences of static frames with a stability guarantee.
//!
//! A dynamic graph assigns a static frame to every round `r >= 1`. Rounds
//! are partitioned into consecutive intervals of length `tau`; all frames
//! within one interval are identical.

use std::borrow::Cow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Stability parameter `tau`: the minimum length of intervals during which
/// the topology is unchanged. `Unbounded` means the graph never changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Rounds(u64),
    Unbounded,
}

impl Stability {
    /// Index of the stability interval containing 1-indexed `round`.
    pub fn interval_index(self, round: u64) -> u64 {
        debug_assert!(round >= 1);
        match self {
            Stability::Rounds(tau) => (round - 1) / tau,
            Stability::Unbounded => 0,
        }
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stability::Rounds(tau) => write!(f, "{tau}"),
            Stability::Unbounded => write!(f, "inf"),
        }
    }
}

/// How the frame sequence evolves across intervals.
#[derive(Debug, Clone)]
pub enum DynamicsModel {
    /// Every frame is the base graph.
    Static,
    /// Every interval relabels the base graph by a fresh seeded uniform
    /// permutation. Relabeling preserves expansion, conductance, and
    /// degrees exactly, so the only thing that varies is the rate of
    /// change.
    Permute { seed: u64 },
    /// A caller-supplied frame list; rounds past the end hold the last
    /// frame forever.
    Explicit { frames: Vec<Graph> },
}

/// A stability-respecting sequence of connected frames over a fixed
/// vertex set. Immutable after construction; cheap to share across
/// concurrent trials.
#[derive(Debug, Clone)]
pub struct DynamicGraph {
    n: usize,
    tau: Stability,
    base: Graph,
    model: DynamicsModel,
}

impl DynamicGraph {
    /// Wraps a static graph (frame never changes).
    pub fn fixed(base: Graph) -> Self {
        let n = base.n();
        DynamicGraph { n, tau: Stability::Unbounded, base, model: DynamicsModel::Static }
    }

    /// Builds a dynamic graph from a base graph, a stability parameter,
    /// and a dynamics model.
    ///
    /// For `Explicit`, the frame list is validated: every frame must share
    /// the base's vertex count ([`Error::InvalidParams`]) and frames may
    /// only change at interval boundaries ([`Error::StabilityViolation`]).
    pub fn new(base: Graph, tau: Stability, model: DynamicsModel) -> Result<Self> {
        if let Stability::Rounds(t) = tau {
            if t < 1 {
                return Err(Error::InvalidParams("tau must be >= 1".into()));
            }
        }
        if let DynamicsModel::Explicit { frames } = &model {
            if frames.is_empty() {
                return Err(Error::InvalidParams("explicit dynamics require at least one frame".into()));
            }
            for (i, f) in frames.iter().enumerate() {
                if f.n() != base.n() {
                    return Err(Error::InvalidParams(format!(
                        "frame {} has {} vertices, expected {}",
                        i + 1,
                        f.n(),
                        base.n()
                    )));
                }
            }
            for (i, pair) in frames.windows(2).enumerate() {
                let round = (i + 2) as u64; // 1-indexed round of pair[1]
                if tau.interval_index(round) == tau.interval_index(round - 1) && pair[0] != pair[1] {
                    return Err(Error::StabilityViolation(format!(
                        "frame changes at round {round} inside interval {}",
                        tau.interval_index(round)
                    )));
                }
            }
        }
        let n = base.n();
        Ok(DynamicGraph { n, tau, base, model })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> Stability {
        self.tau
    }

    /// The base graph (for `Explicit`, the first frame's template).
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn model(&self) -> &DynamicsModel {
        &self.model
    }

    /// True when every frame equals the base graph.
    pub fn is_static(&self) -> bool {
        matches!(self.model, DynamicsModel::Static)
    }

    /// The frame in effect during 1-indexed `round`.
    pub fn frame(&self, round: u64) -> Cow<'_, Graph> {
        match &self.model {
            DynamicsModel::Static => Cow::Borrowed(&self.base),
            DynamicsModel::Permute { seed } => {
                let k = self.tau.interval_index(round);
                Cow::Owned(self.base.relabel(&interval_permutation(self.n, *seed, k)))
            }
            DynamicsModel::Explicit { frames } => {
                let idx = ((round - 1) as usize).min(frames.len() - 1);
                Cow::Borrowed(&frames[idx])
            }
        }
    }

    /// Distinct frames (with the first round they apply to) up to
    /// `horizon` rounds. Consecutive identical frames are collapsed.
    pub fn distinct_frames(&self, horizon: u64) -> Vec<(u64, Cow<'_, Graph>)> {
        let mut out: Vec<(u64, Cow<'_, Graph>)> = Vec::new();
        let mut round = 1;
        while round <= horizon {
            let f = self.frame(round);
            match out.last() {
                Some((_, prev)) if prev.as_ref() == f.as_ref() => {}
                _ => out.push((round, f)),
            }
            round = match self.tau {
                Stability::Rounds(tau) => (self.tau.interval_index(round) + 1) * tau + 1,
                Stability::Unbounded => break,
            };
        }
        out
    }
}

/// Seeded uniform permutation for one stability interval, independent of
/// every other interval (splitmix-style seed mixing gives random access).
fn interval_permutation(n: usize, seed: u64, interval: u64) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, interval));
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    perm.shuffle(&mut rng);
    perm
}

fn mix_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn static_frames_are_base() {
        let g = generate::complete(4).unwrap();
        let dg = DynamicGraph::fixed(g.clone());
        for r in [1, 2, 10, 1000] {
            assert_eq!(dg.frame(r).as_ref(), &g);
        }
    }

    #[test]
    fn permute_respects_intervals() {
        let base = generate::badgraph(64).unwrap();
        let dg =
            DynamicGraph::new(base.clone(), Stability::Rounds(2), DynamicsModel::Permute { seed: 7 })
                .unwrap();
        assert_eq!(dg.frame(1), dg.frame(2));
        assert_eq!(dg.frame(3), dg.frame(4));
        assert_ne!(dg.frame(1), dg.frame(3));
        // relabelings preserve the degree multiset
        let mut base_degs: Vec<_> = (0..64).map(|u| base.degree(u)).collect();
        base_degs.sort_unstable();
        for r in [1, 3, 9] {
            let f = dg.frame(r);
            let mut degs: Vec<_> = (0..64).map(|u| f.degree(u)).collect();
            degs.sort_unstable();
            assert_eq!(degs, base_degs);
            assert_eq!(f.edge_count(), base.edge_count());
        }
    }

    #[test]
    fn permute_is_deterministic() {
        let base = generate::cycle(12).unwrap();
        let mk = || {
            DynamicGraph::new(base.clone(), Stability::Rounds(3), DynamicsModel::Permute { seed: 9 })
                .unwrap()
        };
        let (a, b) = (mk(), mk());
        for r in 1..=12 {
            assert_eq!(a.frame(r), b.frame(r));
        }
    }

    #[test]
    fn explicit_stability_checked() {
        let k4 = generate::complete(4).unwrap();
        let c4 = generate::cycle(4).unwrap();
        // change at round 2 inside a tau=2 interval
        let err = DynamicGraph::new(
            k4.clone(),
            Stability::Rounds(2),
            DynamicsModel::Explicit { frames: vec![k4.clone(), c4.clone()] },
        )
        .unwrap_err();
        assert!(matches!(err, Error::StabilityViolation(_)));
        // change at the boundary is fine
        let ok = DynamicGraph::new(
            k4.clone(),
            Stability::Rounds(2),
            DynamicsModel::Explicit { frames: vec![k4.clone(), k4.clone(), c4.clone(), c4.clone()] },
        )
        .unwrap();
        assert_eq!(ok.frame(3).as_ref(), &c4);
        // rounds past the list hold the last frame
        assert_eq!(ok.frame(99).as_ref(), &c4);
    }

    #[test]
    fn explicit_rejects_vertex_mismatch() {
        let k4 = generate::complete(4).unwrap();
        let k5 = generate::complete(5).unwrap();
        let err = DynamicGraph::new(
            k4.clone(),
            Stability::Rounds(1),
            DynamicsModel::Explicit { frames: vec![k4, k5] },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn distinct_frames_collapses() {
        let k4 = generate::complete(4).unwrap();
        let dg = DynamicGraph::fixed(k4);
        assert_eq!(dg.distinct_frames(100).len(), 1);

        let base = generate::cycle(8).unwrap();
        let dg = DynamicGraph::new(base, Stability::Rounds(2), DynamicsModel::Permute { seed: 3 })
            .unwrap();
        let frames = dg.distinct_frames(8);
        assert!(frames.len() >= 2 && frames.len() <= 4);
        assert_eq!(frames[0].0, 1);
    }

    #[test]
    fn interval_index() {
        let tau = Stability::Rounds(3);
        assert_eq!(tau.interval_index(1), 0);
        assert_eq!(tau.interval_index(3), 0);
        assert_eq!(tau.interval_index(4), 1);
        assert_eq!(Stability::Unbounded.interval_index(100), 0);
    }
}
