//! Boundary, volume, cut, vertex expansion, and conductance.
//!
//! Vertex expansion `alpha` is the minimum over nonempty subsets `S` with
//! `|S| <= n/2` of `|boundary(S)| / |S|`, where the boundary holds the
//! outside vertices adjacent to `S`. Conductance `phi` is the minimum over
//! subsets with `0 < vol(S) <= vol(V)/2` of `cut(S, V-S) / vol(S)`.
//!
//! Exact values are computed by subset enumeration over bitmasks (capped
//! at `n <= 24`) and carried as exact rationals, so ties and witnesses
//! compare precisely. Sampling only ever over-estimates a minimum, so
//! sampled results are upper bounds and are flagged as such.

use num_rational::Ratio as NumRatio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{check_subset, DynamicGraph, DynamicsModel, Graph, NodeId};

/// Exact nonnegative rational; all expansion quantities fit in u64 parts.
pub type Ratio = NumRatio<u64>;

/// Subset enumeration cap for exact expansion and conductance.
pub const EXACT_EXPANSION_CAP: usize = 24;

/// How a quantity defined as a minimum over subsets is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Full subset enumeration; only valid up to the operation's cap.
    Exact,
    /// Minimum over `samples` random subsets drawn from `seed`; an upper
    /// bound on the true value.
    Sampled { samples: u32, seed: u64 },
}

/// Evaluation mode recorded in a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Sampled(u32),
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalMode::Exact => write!(f, "exact"),
            EvalMode::Sampled(k) => write!(f, "sampled({k})"),
        }
    }
}

/// Cut quantities for one subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub subset: Vec<NodeId>,
    /// Outside vertices adjacent to the subset.
    pub boundary_size: usize,
    /// Edges with exactly one endpoint in the subset.
    pub cut_edges: usize,
    /// Sum of degrees over the subset.
    pub vol: u64,
    /// `boundary_size / |S|`.
    pub alpha: Ratio,
    /// `cut_edges / vol(S)`.
    pub phi: Ratio,
}

/// A minimum over subsets together with a witness subset attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionResult {
    pub value: Ratio,
    pub witness: Vec<NodeId>,
    pub mode: EvalMode,
}

impl ExpansionResult {
    pub fn value_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// Degree extremes and histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub min_degree: usize,
    /// `(degree, count)` pairs in ascending degree order.
    pub histogram: Vec<(usize, usize)>,
}

/// Per-metric results for a dynamic graph over a horizon of rounds.
#[derive(Debug, Clone)]
pub struct DynamicMetrics {
    pub alpha: ExpansionResult,
    pub phi: ExpansionResult,
    pub max_degree: usize,
    pub min_degree: usize,
    /// Distinct frames inspected within the horizon.
    pub frames_inspected: usize,
}

pub fn cut_report(g: &Graph, subset: &[NodeId]) -> Result<CutReport> {
    let subset = check_subset(g, subset)?;
    let mut in_s = vec![false; g.n()];
    for &v in &subset {
        in_s[v as usize] = true;
    }
    let mut cut = 0usize;
    let mut vol = 0u64;
    for &v in &subset {
        vol += g.degree(v) as u64;
        cut += g.neighbors(v).iter().filter(|&&w| !in_s[w as usize]).count();
    }
    let mut boundary = 0usize;
    for v in 0..g.n() {
        if !in_s[v] && g.neighbors(v as NodeId).iter().any(|&w| in_s[w as usize]) {
            boundary += 1;
        }
    }
    Ok(CutReport {
        boundary_size: boundary,
        cut_edges: cut,
        vol,
        alpha: Ratio::new(boundary as u64, subset.len() as u64),
        phi: Ratio::new(cut as u64, vol),
        subset,
    })
}

pub fn degree_stats(g: &Graph) -> DegreeStats {
    let mut counts = vec![0usize; g.n()];
    for v in 0..g.n() {
        counts[g.degree(v as NodeId)] += 1;
    }
    let histogram: Vec<(usize, usize)> =
        counts.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();
    DegreeStats { max_degree: g.max_degree(), min_degree: g.min_degree(), histogram }
}

/// Vertex expansion `alpha`. Exact mode enumerates all subsets with
/// `|S| <= n/2` (cap [`EXACT_EXPANSION_CAP`]); sampled mode returns an
/// upper bound.
pub fn vertex_expansion(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    expansion_impl(g, mode, false)
}

/// Always-sequential variant of [`vertex_expansion`], kept for
/// benchmarking the parallel enumeration against the fallback.
pub fn vertex_expansion_seq(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    expansion_impl(g, mode, true)
}

/// Graph conductance `phi`. Same modes and cap as [`vertex_expansion`],
/// with the minimum taken over `0 < vol(S) <= vol(V)/2`.
pub fn conductance(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    conductance_impl(g, mode, false)
}

/// Always-sequential variant of [`conductance`].
pub fn conductance_seq(g: &Graph, mode: Mode) -> Result<ExpansionResult> {
    conductance_impl(g, mode, true)
}

/// Expansion and conductance of a dynamic graph: the minimum over the
/// frames in effect during rounds `1..=horizon`, plus degree extremes
/// across those frames.
///
/// Permute dynamics preserve every metric exactly, so the base graph's
/// values are returned directly without walking frames.
pub fn dynamic_metrics(dg: &DynamicGraph, horizon: u64, mode: Mode) -> Result<DynamicMetrics> {
    if horizon < 1 {
        return Err(Error::InvalidParams("horizon must be >= 1".into()));
    }
    if matches!(dg.model(), DynamicsModel::Static | DynamicsModel::Permute { .. }) {
        let base = dg.base();
        return Ok(DynamicMetrics {
            alpha: vertex_expansion(base, mode)?,
            phi: conductance(base, mode)?,
            max_degree: base.max_degree(),
            min_degree: base.min_degree(),
            frames_inspected: 1,
        });
    }
    let frames = dg.distinct_frames(horizon);
    let mut best: Option<DynamicMetrics> = None;
    let count = frames.len();
    for (_, frame) in frames {
        let alpha = vertex_expansion(frame.as_ref(), mode)?;
        let phi = conductance(frame.as_ref(), mode)?;
        best = Some(match best {
            None => DynamicMetrics {
                alpha,
                phi,
                max_degree: frame.max_degree(),
                min_degree: frame.min_degree(),
                frames_inspected: count,
            },
            Some(acc) => DynamicMetrics {
                alpha: if alpha.value < acc.alpha.value { alpha } else { acc.alpha },
                phi: if phi.value < acc.phi.value { phi } else { acc.phi },
                max_degree: acc.max_degree.max(frame.max_degree()),
                min_degree: acc.min_degree.min(frame.min_degree()),
                frames_inspected: count,
            },
        });
    }
    Ok(best.expect("horizon >= 1 yields at least one frame"))
}

// ---------------------------------------------------------------------------
// Exact enumeration over bitmask subsets.

/// Best candidate seen: value `num/den` with the lexicographically
/// smallest witness mask among ties.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Best {
    pub num: u64,
    pub den: u64,
    pub mask: u32,
}

impl Best {
    pub(crate) fn min(self, other: Best) -> Best {
        let lhs = (self.num as u128) * (other.den as u128);
        let rhs = (other.num as u128) * (self.den as u128);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.mask <= other.mask {
                    self
                } else {
                    other
                }
            }
        }
    }
}

pub(crate) fn neighbor_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v as NodeId).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect()
}

fn mask_to_nodes(mask: u32) -> Vec<NodeId> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Sequential minimum of `eval` over all masks in `1..limit`.
pub(crate) fn scan_masks_seq<F>(limit: u32, eval: F) -> Option<Best>
where
    F: Fn(u32) -> Option<(u64, u64)>,
{
    let mut best: Option<Best> = None;
    for mask in 1..limit {
        if let Some((num, den)) = eval(mask) {
            let cand = Best { num, den, mask };
            best = Some(match best {
                None => cand,
                Some(b) => b.min(cand),
            });
        }
    }
    best
}

#[cfg(feature = "parallel")]
pub(crate) fn scan_masks_par<F>(limit: u32, eval: F) -> Option<Best>
where
    F: Fn(u32) -> Option<(u64, u64)> + Sync,
{
    use rayon::prelude::*;
    // min with mask tie-break is a total order, so the reduction is
    // deterministic for any split.
    (1..limit)
        .into_par_iter()
        .with_min_len(1 << 12)
        .filter_map(|mask| eval(mask).map(|(num, den)| Best { num, den, mask }))
        .reduce_with(Best::min)
}

pub(crate) fn scan_masks<F>(limit: u32, sequential: bool, eval: F) -> Option<Best>
where
    F: Fn(u32) -> Option<(u64, u64)> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if !sequential {
            return scan_masks_par(limit, eval);
        }
    }
    let _ = sequential;
    scan_masks_seq(limit, eval)
}

pub(crate) fn check_exact_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLargeForExact { n, cap });
    }
    Ok(())
}

fn require_proper_subsets(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::InvalidParams(
            "expansion quantities need at least two vertices".into(),
        ));
    }
    Ok(())
}

fn expansion_impl(g: &Graph, mode: Mode, sequential: bool) -> Result<ExpansionResult> {
    require_proper_subsets(g)?;
    let n = g.n();
    match mode {
        Mode::Exact => {
            check_exact_cap(n, EXACT_EXPANSION_CAP)?;
            let nbr = neighbor_masks(g);
            let best = scan_masks(1u32 << n, sequential, |mask| {
                let size = mask.count_ones() as usize;
                if 2 * size > n {
                    return None;
                }
                let mut reach = 0u32;
                let mut m = mask;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    reach |= nbr[v];
                    m &= m - 1;
                }
                let boundary = (reach & !mask).count_ones() as u64;
                Some((boundary, size as u64))
            })
            .expect("n >= 2 has admissible subsets");
            Ok(ExpansionResult {
                value: Ratio::new(best.num, best.den),
                witness: mask_to_nodes(best.mask),
                mode: EvalMode::Exact,
            })
        }
        Mode::Sampled { samples, seed } => {
            sampled_min(g, samples, seed, |g, s| {
                let r = cut_report(g, s).expect("sampled subset is valid");
                (r.alpha, r.subset)
            })
        }
    }
}

fn conductance_impl(g: &Graph, mode: Mode, sequential: bool) -> Result<ExpansionResult> {
    require_proper_subsets(g)?;
    let n = g.n();
    let total_vol: u64 = 2 * g.edge_count() as u64;
    match mode {
        Mode::Exact => {
            check_exact_cap(n, EXACT_EXPANSION_CAP)?;
            let nbr = neighbor_masks(g);
            let deg: Vec<u64> = (0..n).map(|v| g.degree(v as NodeId) as u64).collect();
            let best = scan_masks(1u32 << n, sequential, |mask| {
                let mut vol = 0u64;
                let mut cut = 0u64;
                let mut m = mask;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    vol += deg[v];
                    cut += (nbr[v] & !mask).count_ones() as u64;
                    m &= m - 1;
                }
                if vol == 0 || 2 * vol > total_vol {
                    return None;
                }
                Some((cut, vol))
            })
            .expect("n >= 2 has admissible subsets");
            Ok(ExpansionResult {
                value: Ratio::new(best.num, best.den),
                witness: mask_to_nodes(best.mask),
                mode: EvalMode::Exact,
            })
        }
        Mode::Sampled { samples, seed } => {
            let complement_if = move |g: &Graph, s: &[NodeId]| -> Vec<NodeId> {
                let vol: u64 = s.iter().map(|&v| g.degree(v) as u64).sum();
                if 2 * vol > total_vol {
                    complement(g.n(), s)
                } else {
                    s.to_vec()
                }
            };
            sampled_min(g, samples, seed, move |g, s| {
                let s = complement_if(g, s);
                let r = cut_report(g, &s).expect("sampled subset is valid");
                (r.phi, r.subset)
            })
        }
    }
}

fn complement(n: usize, s: &[NodeId]) -> Vec<NodeId> {
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v as usize] = true;
    }
    (0..n as NodeId).filter(|&v| !in_s[v as usize]).collect()
}

/// Minimum of `value(subset)` over seeded random subsets. The evaluator
/// may substitute a related subset (e.g. the complement); it returns the
/// value together with the witness actually evaluated.
pub(crate) fn sampled_min<F>(
    g: &Graph,
    samples: u32,
    seed: u64,
    value: F,
) -> Result<ExpansionResult>
where
    F: Fn(&Graph, &[NodeId]) -> (Ratio, Vec<NodeId>),
{
    if samples == 0 {
        return Err(Error::InvalidParams("sample count must be >= 1".into()));
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<NodeId> = (0..n as NodeId).collect();
    let mut best: Option<ExpansionResult> = None;
    for _ in 0..samples {
        let size = rng.random_range(1..=n / 2);
        pool.partial_shuffle(&mut rng, size);
        let mut subset: Vec<NodeId> = pool[..size].to_vec();
        subset.sort_unstable();
        let (v, witness) = value(g, &subset);
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(ExpansionResult { value: v, witness, mode: EvalMode::Sampled(samples) });
        }
    }
    Ok(best.expect("samples >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn exact(g: &Graph) -> (ExpansionResult, ExpansionResult) {
        (vertex_expansion(g, Mode::Exact).unwrap(), conductance(g, Mode::Exact).unwrap())
    }

    #[test]
    fn cut_report_k4_singleton() {
        let g = generate::complete(4).unwrap();
        let r = cut_report(&g, &[0]).unwrap();
        assert_eq!(r.boundary_size, 3);
        assert_eq!(r.cut_edges, 3);
        assert_eq!(r.vol, 3);
        assert_eq!(r.alpha, Ratio::new(3, 1));
        assert_eq!(r.phi, Ratio::new(1, 1));
    }

    #[test]
    fn cut_report_p2() {
        let g = generate::path(2).unwrap();
        let r = cut_report(&g, &[0]).unwrap();
        assert_eq!((r.boundary_size, r.cut_edges, r.vol), (1, 1, 1));
    }

    #[test]
    fn cut_report_star_leaves() {
        // three leaves of K_{1,3}: boundary is the center only
        let g = generate::gstar(1, 3).unwrap();
        let r = cut_report(&g, &[1, 2, 3]).unwrap();
        assert_eq!(r.boundary_size, 1);
        assert_eq!(r.cut_edges, 3);
        assert_eq!(r.vol, 3);
    }

    #[test]
    fn cut_report_rejects_trivial_subsets() {
        let g = generate::complete(3).unwrap();
        assert!(matches!(cut_report(&g, &[]), Err(Error::EmptySubset)));
        assert!(matches!(cut_report(&g, &[0, 1, 2]), Err(Error::FullSubset)));
    }

    #[test]
    fn alpha_k4() {
        let g = generate::complete(4).unwrap();
        let r = vertex_expansion(&g, Mode::Exact).unwrap();
        assert_eq!(r.value, Ratio::new(1, 1));
        // smallest witness mask among pairs
        assert_eq!(r.witness, vec![0, 1]);
    }

    #[test]
    fn alpha_star_k15() {
        let g = generate::gstar(1, 5).unwrap();
        let r = vertex_expansion(&g, Mode::Exact).unwrap();
        assert_eq!(r.value, Ratio::new(1, 3));
        assert_eq!(r.witness, vec![1, 2, 3]);
    }

    #[test]
    fn alpha_p2() {
        let g = generate::path(2).unwrap();
        assert_eq!(vertex_expansion(&g, Mode::Exact).unwrap().value, Ratio::new(1, 1));
    }

    #[test]
    fn phi_p2_and_star() {
        assert_eq!(conductance(&generate::path(2).unwrap(), Mode::Exact).unwrap().value, Ratio::new(1, 1));
        assert_eq!(
            conductance(&generate::gstar(1, 3).unwrap(), Mode::Exact).unwrap().value,
            Ratio::new(1, 1)
        );
    }

    #[test]
    fn phi_gstar_2_4() {
        let g = generate::gstar(2, 4).unwrap();
        let r = conductance(&g, Mode::Exact).unwrap();
        // minimizer is one center plus two points: cut 5, vol 9
        assert_eq!(r.value, Ratio::new(5, 9));
        assert!(r.value >= Ratio::new(1, 4));
        let check = cut_report(&g, &r.witness).unwrap();
        assert_eq!(check.phi, r.value);
    }

    #[test]
    fn witness_reproduces_value() {
        for g in [
            generate::gstar(2, 4).unwrap(),
            generate::badgraph(16).unwrap(),
            generate::hypercube(8).unwrap(),
            generate::cycle(9).unwrap(),
        ] {
            let (a, p) = exact(&g);
            assert_eq!(cut_report(&g, &a.witness).unwrap().alpha, a.value);
            assert_eq!(cut_report(&g, &p.witness).unwrap().phi, p.value);
        }
    }

    #[test]
    fn sampled_upper_bounds_exact() {
        for g in [
            generate::gstar(2, 4).unwrap(),
            generate::badgraph(16).unwrap(),
            generate::cycle(11).unwrap(),
        ] {
            let exact_a = vertex_expansion(&g, Mode::Exact).unwrap().value;
            let exact_p = conductance(&g, Mode::Exact).unwrap().value;
            let samp_a =
                vertex_expansion(&g, Mode::Sampled { samples: 200, seed: 5 }).unwrap();
            let samp_p = conductance(&g, Mode::Sampled { samples: 200, seed: 5 }).unwrap();
            assert!(samp_a.value >= exact_a);
            assert!(samp_p.value >= exact_p);
            assert_eq!(samp_a.mode, EvalMode::Sampled(200));
            // the sampled witness really attains the sampled value
            assert_eq!(cut_report(&g, &samp_a.witness).unwrap().alpha, samp_a.value);
        }
    }

    #[test]
    fn sampled_is_deterministic() {
        let g = generate::badgraph(32).unwrap();
        let a = vertex_expansion(&g, Mode::Sampled { samples: 100, seed: 9 }).unwrap();
        let b = vertex_expansion(&g, Mode::Sampled { samples: 100, seed: 9 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_cap_enforced() {
        let g = generate::path(30).unwrap();
        assert!(matches!(
            vertex_expansion(&g, Mode::Exact),
            Err(Error::TooLargeForExact { n: 30, cap: EXACT_EXPANSION_CAP })
        ));
        assert!(matches!(conductance(&g, Mode::Exact), Err(Error::TooLargeForExact { .. })));
    }

    #[test]
    fn seq_matches_parallel_dispatch() {
        for g in [generate::badgraph(16).unwrap(), generate::gstar(3, 9).unwrap()] {
            assert_eq!(
                vertex_expansion(&g, Mode::Exact).unwrap(),
                vertex_expansion_seq(&g, Mode::Exact).unwrap()
            );
            assert_eq!(
                conductance(&g, Mode::Exact).unwrap(),
                conductance_seq(&g, Mode::Exact).unwrap()
            );
        }
    }

    #[test]
    fn degree_stats_badgraph() {
        let g = generate::badgraph(16).unwrap();
        let s = degree_stats(&g);
        assert_eq!(s.max_degree, 15);
        assert_eq!(s.min_degree, 4);
        assert_eq!(s.histogram, vec![(4, 4), (5, 4), (8, 4), (15, 4)]);
    }

    #[test]
    fn dynamic_metrics_static_and_permute() {
        let k4 = generate::complete(4).unwrap();
        let m = dynamic_metrics(&DynamicGraph::fixed(k4), 10, Mode::Exact).unwrap();
        assert_eq!(m.alpha.value, Ratio::new(1, 1));

        let star = generate::gstar(1, 5).unwrap();
        let dg = DynamicGraph::new(
            star,
            crate::graph::Stability::Rounds(1),
            DynamicsModel::Permute { seed: 11 },
        )
        .unwrap();
        let m = dynamic_metrics(&dg, 10, Mode::Exact).unwrap();
        assert_eq!(m.alpha.value, Ratio::new(1, 3));
        assert_eq!(m.frames_inspected, 1);
    }

    #[test]
    fn dynamic_metrics_explicit_takes_min() {
        let k4 = generate::complete(4).unwrap();
        let p4 = generate::path(4).unwrap();
        let dg = DynamicGraph::new(
            k4.clone(),
            crate::graph::Stability::Rounds(2),
            DynamicsModel::Explicit { frames: vec![k4.clone(), k4.clone(), p4.clone(), p4] },
        )
        .unwrap();
        let m = dynamic_metrics(&dg, 4, Mode::Exact).unwrap();
        // alpha(P4) = 1/2 beats alpha(K4) = 1
        assert_eq!(m.alpha.value, Ratio::new(1, 2));
        assert_eq!(m.max_degree, 3);
        assert_eq!(m.min_degree, 1);
        assert_eq!(m.frames_inspected, 2);

        // horizon inside the first interval sees only K4
        let m = dynamic_metrics(&dg, 2, Mode::Exact).unwrap();
        assert_eq!(m.alpha.value, Ratio::new(1, 1));
    }

    #[test]
    fn permute_frames_keep_base_metrics() {
        let base = generate::gstar(1, 5).unwrap();
        let dg = DynamicGraph::new(
            base.clone(),
            crate::graph::Stability::Rounds(1),
            DynamicsModel::Permute { seed: 3 },
        )
        .unwrap();
        let base_alpha = vertex_expansion(&base, Mode::Exact).unwrap().value;
        let base_phi = conductance(&base, Mode::Exact).unwrap().value;
        for r in 1..=6 {
            let f = dg.frame(r);
            assert_eq!(vertex_expansion(f.as_ref(), Mode::Exact).unwrap().value, base_alpha);
            assert_eq!(conductance(f.as_ref(), Mode::Exact).unwrap().value, base_phi);
        }
    }
}
