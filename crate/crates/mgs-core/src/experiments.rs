//! Monte Carlo harness, scaling sweeps, and the good-phase auditor.
//!
//! Trials are embarrassingly parallel: trial `i` runs on its own RNG
//! stream seeded `seed_base + i`, and results are merged in trial-index
//! order, so aggregates are pure functions of the spec and re-running a
//! spec reproduces its table bit for bit. Timeouts count as `max_rounds`
//! in the aggregates and are reported separately to avoid silent
//! censoring.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, NodeId, Stability};
use crate::sim::{run_trial, ProtocolSpec, TrialRecord};

/// One graph point of an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentPoint {
    /// Family label for reports (e.g. "badgraph", "file").
    pub family: String,
    pub graph: DynamicGraph,
}

/// A full experiment: points x trials under one protocol.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub points: Vec<ExperimentPoint>,
    pub protocol: ProtocolSpec,
    /// Trials per point; trial `i` uses seed `seed_base + i`.
    pub trials: u32,
    pub seed_base: u64,
    /// Round budget per trial; `None` uses [`crate::sim::default_max_rounds`].
    pub max_rounds: Option<u64>,
    pub source: NodeId,
    pub record_traces: bool,
}

impl ExperimentSpec {
    pub fn new(points: Vec<ExperimentPoint>, protocol: ProtocolSpec, trials: u32, seed_base: u64) -> Self {
        ExperimentSpec {
            points,
            protocol,
            trials,
            seed_base,
            max_rounds: None,
            source: 0,
            record_traces: false,
        }
    }
}

/// Aggregates over one point's trials. Headline number is the median;
/// high-probability claims are checked at the 90th percentile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub median: f64,
    pub p90: u64,
    pub mean: f64,
    pub timeouts: u32,
    #[serde(skip)]
    pub min: u64,
    #[serde(skip)]
    pub max: u64,
    #[serde(skip)]
    pub trials: u32,
}

/// Records and aggregates for one point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub family: String,
    pub n: usize,
    pub tau: Stability,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Runs every point of the spec. With the `parallel` feature, trials run
/// concurrently; outputs are ordered by trial index either way.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PointResult>> {
    run_experiment_impl(spec, false)
}

/// Always-sequential variant of [`run_experiment`], kept for benchmarking
/// the parallel harness against the fallback.
pub fn run_experiment_seq(spec: &ExperimentSpec) -> Result<Vec<PointResult>> {
    run_experiment_impl(spec, true)
}

fn run_experiment_impl(spec: &ExperimentSpec, sequential: bool) -> Result<Vec<PointResult>> {
    if spec.trials < 1 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    if spec.points.is_empty() {
        return Err(Error::InvalidParams("experiment needs at least one graph point".into()));
    }
    spec.protocol.validate()?;
    let mut out = Vec::with_capacity(spec.points.len());
    for point in &spec.points {
        let n = point.graph.n();
        let max_rounds = spec.max_rounds.unwrap_or_else(|| crate::sim::default_max_rounds(n));
        let records = run_point(spec, point, max_rounds, sequential)?;
        let summary = summarize(n, &records);
        out.push(PointResult {
            family: point.family.clone(),
            n,
            tau: point.graph.tau(),
            records,
            summary,
        });
    }
    Ok(out)
}

fn run_point(
    spec: &ExperimentSpec,
    point: &ExperimentPoint,
    max_rounds: u64,
    sequential: bool,
) -> Result<Vec<TrialRecord>> {
    let one = |i: u32| {
        run_trial(
            &point.graph,
            spec.source,
            &spec.protocol,
            spec.seed_base + i as u64,
            max_rounds,
            spec.record_traces,
        )
    };
    #[cfg(feature = "parallel")]
    {
        if !sequential {
            use rayon::prelude::*;
            return (0..spec.trials).into_par_iter().map(one).collect();
        }
    }
    let _ = sequential;
    (0..spec.trials).map(one).collect()
}

/// Aggregates a point's rounds-to-completion values.
pub fn summarize(n: usize, records: &[TrialRecord]) -> Summary {
    assert!(!records.is_empty());
    let mut rounds: Vec<u64> = records.iter().map(|r| r.rounds).collect();
    rounds.sort_unstable();
    let k = rounds.len();
    let median = if k % 2 == 1 {
        rounds[k / 2] as f64
    } else {
        (rounds[k / 2 - 1] + rounds[k / 2]) as f64 / 2.0
    };
    // nearest-rank 90th percentile
    let p90 = rounds[((9 * k).div_ceil(10)).max(1) - 1];
    let mean = rounds.iter().sum::<u64>() as f64 / k as f64;
    Summary {
        n,
        median,
        p90,
        mean,
        timeouts: records.iter().filter(|r| !r.completed).count() as u32,
        min: rounds[0],
        max: rounds[k - 1],
        trials: k as u32,
    }
}

/// CSV header for per-trial rows.
pub fn csv_header() -> &'static str {
    "family,n,tau,protocol,b,resolution,seed,rounds,completed"
}

/// One per-trial CSV row.
pub fn csv_row(point: &PointResult, protocol: &ProtocolSpec, record: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        point.family,
        point.n,
        point.tau,
        protocol.strategy,
        protocol.tag_bits,
        protocol.resolution,
        record.seed,
        record.rounds,
        record.completed
    )
}

/// Good-phase audit of one trial's informed-count trajectory.
///
/// Rounds are split into phases of `tau` rounds. Writing `f(tau) =
/// tau * Delta^(1/tau) * log2(n)` and `S_t`, `U_t` for the informed and
/// uninformed counts at the start of phase `t`, a phase is good when
/// `S_{t+1} >= (1 + alpha / (4 f(tau))) * S_t` while `S_t <= n/2`, and
/// `U_{t+1} <= (1 - alpha / (4 f(tau))) * U_t` afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport {
    pub tau: u64,
    pub f_tau: f64,
    /// Good flag per phase, in phase order.
    pub flags: Vec<bool>,
    pub fraction_good: f64,
}

impl PhaseReport {
    pub fn all_good(&self) -> bool {
        self.flags.iter().all(|&b| b)
    }
}

/// The matching approximation factor `f(tau) = tau * Delta^(1/tau) * log2 n`.
///
/// The logarithm base is not pinned down by the asymptotics; base 2 is
/// used throughout.
pub fn f_tau(tau: u64, max_degree: usize, n: usize) -> f64 {
    tau as f64 * (max_degree as f64).powf(1.0 / tau as f64) * (n as f64).log2()
}

/// Audits the per-round informed counts of a whole run.
/// `counts[0]` is the initial informed count and `counts[t]` the count
/// after round `t`. `alpha` must be the exact vertex expansion of the
/// (static or permute) topology.
///
/// Complete phases are always audited; a trailing partial phase is
/// audited only if the run finished inside it. A trace with no full phase
/// and no completion is [`Error::TraceIncomplete`].
pub fn audit_phases(
    counts: &[u64],
    tau: u64,
    max_degree: usize,
    n: usize,
    alpha: f64,
) -> Result<PhaseReport> {
    if tau < 1 {
        return Err(Error::InvalidParams("tau must be >= 1".into()));
    }
    if counts.len() < 2 {
        return Err(Error::TraceIncomplete);
    }
    let rounds = (counts.len() - 1) as u64;
    let completed = *counts.last().expect("nonempty") == n as u64;
    if rounds < tau && !completed {
        return Err(Error::TraceIncomplete);
    }
    let f = f_tau(tau, max_degree, n);
    let growth = alpha / (4.0 * f);
    let mut flags = Vec::new();
    let mut t = 1u64;
    loop {
        let start = (t - 1) * tau;
        let end = t * tau;
        if start >= rounds {
            break;
        }
        if end > rounds && !completed {
            break; // trailing partial phase of a timed-out run
        }
        let s_start = counts[start as usize] as f64;
        let s_end = counts[end.min(rounds) as usize] as f64;
        let good = if 2.0 * s_start <= n as f64 {
            s_end >= (1.0 + growth) * s_start
        } else {
            let u_start = n as f64 - s_start;
            let u_end = n as f64 - s_end;
            u_end <= (1.0 - growth) * u_start
        };
        flags.push(good);
        if end >= rounds {
            break;
        }
        t += 1;
    }
    if flags.is_empty() {
        return Err(Error::TraceIncomplete);
    }
    let fraction_good = flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64;
    Ok(PhaseReport { tau, f_tau: f, flags, fraction_good })
}

/// Least-squares slope of `ln(median)` against `ln(n)`: the fitted
/// exponent of a power law. Scale-invariant in the medians.
pub fn fit_power_law(sizes: &[usize], medians: &[f64]) -> Result<f64> {
    if sizes.len() != medians.len() || sizes.len() < 2 {
        return Err(Error::InvalidParams("fit needs at least two (size, median) pairs".into()));
    }
    if medians.iter().any(|&m| m <= 0.0) || sizes.iter().any(|&s| s == 0) {
        return Err(Error::InvalidParams("fit needs positive sizes and medians".into()));
    }
    let xs: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|&m| m.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    if den == 0.0 {
        return Err(Error::InvalidParams("fit needs at least two distinct sizes".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, DynamicGraph};
    use crate::metrics::{vertex_expansion, Mode};
    use crate::sim::Strategy;

    fn point(g: crate::graph::Graph, family: &str) -> ExperimentPoint {
        ExperimentPoint { family: family.into(), graph: DynamicGraph::fixed(g) }
    }

    #[test]
    fn p2_completes_in_one_round_every_trial() {
        let spec = ExperimentSpec::new(
            vec![point(generate::path(2).unwrap(), "path")],
            ProtocolSpec::ppush(),
            10,
            0,
        );
        let results = run_experiment(&spec).unwrap();
        assert_eq!(results.len(), 1);
        assert!(results[0].records.iter().all(|r| r.completed && r.rounds == 1));
        assert_eq!(results[0].summary.median, 1.0);
        assert_eq!(results[0].summary.timeouts, 0);
    }

    #[test]
    fn experiment_is_reproducible_and_matches_seq() {
        let mk = || {
            ExperimentSpec::new(
                vec![point(generate::badgraph(32).unwrap(), "badgraph")],
                ProtocolSpec::pushpull_alt(),
                8,
                42,
            )
        };
        let a = run_experiment(&mk()).unwrap();
        let b = run_experiment(&mk()).unwrap();
        let c = run_experiment_seq(&mk()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.records, y.records);
        }
        for (x, y) in a.iter().zip(&c) {
            assert_eq!(x.records, y.records);
        }
        // one row per trial, seeds ascending from the base
        assert_eq!(a[0].records.iter().map(|r| r.seed).collect::<Vec<_>>(), (42..50).collect::<Vec<u64>>());
    }

    #[test]
    fn summary_statistics() {
        let rec = |rounds: u64, completed: bool| TrialRecord {
            seed: 0,
            rounds,
            completed,
            informed_counts: vec![],
            trace: None,
        };
        let records: Vec<_> =
            [(5, true), (3, true), (9, true), (7, true), (100, false)].map(|(r, c)| rec(r, c)).into();
        let s = summarize(16, &records);
        assert_eq!(s.median, 7.0);
        assert_eq!(s.p90, 100);
        assert_eq!(s.mean, 124.0 / 5.0);
        assert_eq!(s.timeouts, 1);
        assert_eq!((s.min, s.max), (3, 100));

        let even: Vec<_> = [(2, true), (4, true), (6, true), (8, true)].map(|(r, c)| rec(r, c)).into();
        assert_eq!(summarize(4, &even).median, 5.0);
    }

    #[test]
    fn csv_shape() {
        let spec = ExperimentSpec::new(
            vec![point(generate::path(2).unwrap(), "path")],
            ProtocolSpec::ppush(),
            2,
            7,
        );
        let results = run_experiment(&spec).unwrap();
        let row = csv_row(&results[0], &spec.protocol, &results[0].records[0]);
        assert_eq!(row, "path,2,inf,ppush,1,random,7,1,true");
        assert_eq!(csv_header().split(',').count(), row.split(',').count());
    }

    #[test]
    fn audit_match_greedy_is_all_good() {
        for g in [generate::gstar(1, 5).unwrap(), generate::complete(6).unwrap()] {
            let alpha = vertex_expansion(&g, Mode::Exact).unwrap().value_f64();
            let delta = g.max_degree();
            let n = g.n();
            let dg = DynamicGraph::fixed(g);
            let rec = crate::sim::run_trial(&dg, 0, &ProtocolSpec::match_greedy(), 1, 100, false)
                .unwrap();
            let report = audit_phases(&rec.informed_counts, 1, delta, n, alpha).unwrap();
            assert!(report.all_good(), "flags: {:?}", report.flags);
            assert_eq!(report.fraction_good, 1.0);
        }
    }

    #[test]
    fn audit_flags_a_stalled_phase() {
        // n=10, tau=2, Delta=3: two phases, the second makes no progress
        let counts = [1u64, 2, 4, 4, 4];
        let report = audit_phases(&counts, 2, 3, 10, 0.5).unwrap();
        assert_eq!(report.flags, vec![true, false]);
        assert_eq!(report.fraction_good, 0.5);
    }

    #[test]
    fn audit_handles_completion_inside_a_phase() {
        // completes at round 3 with tau=2: trailing partial phase counts
        let counts = [1u64, 3, 6, 10];
        let report = audit_phases(&counts, 2, 4, 10, 1.0).unwrap();
        assert_eq!(report.flags.len(), 2);
        assert!(report.all_good());
    }

    #[test]
    fn audit_rejects_short_traces() {
        // one recorded round, tau=5, not complete
        let counts = [1u64, 2];
        assert!(matches!(audit_phases(&counts, 5, 3, 10, 0.5), Err(Error::TraceIncomplete)));
    }

    #[test]
    fn fit_recovers_exact_exponents() {
        let sizes = [256usize, 512, 1024, 2048, 4096];
        let sqrt: Vec<f64> = sizes.iter().map(|&s| (s as f64).sqrt()).collect();
        assert!((fit_power_law(&sizes, &sqrt).unwrap() - 0.5).abs() < 1e-9);

        let constant = vec![17.0; sizes.len()];
        assert_eq!(fit_power_law(&sizes, &constant).unwrap(), 0.0);

        let nlogn: Vec<f64> = sizes.iter().map(|&s| s as f64 * (s as f64).ln()).collect();
        let e = fit_power_law(&sizes, &nlogn).unwrap();
        assert!(e > 1.0 && e < 1.2, "exponent {e}");
    }

    #[test]
    fn fit_is_scale_invariant() {
        let sizes = [256usize, 1024, 4096];
        let medians = [20.0, 41.0, 77.0];
        let scaled: Vec<f64> = medians.iter().map(|m| m * 7.0).collect();
        let a = fit_power_law(&sizes, &medians).unwrap();
        let b = fit_power_law(&sizes, &scaled).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(fit_power_law(&[256], &[10.0]).is_err());
        assert!(fit_power_law(&[256, 512], &[0.0, 3.0]).is_err());
        assert!(fit_power_law(&[256, 256], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn f_tau_values() {
        // tau=1: Delta * log2(n)
        assert!((f_tau(1, 9, 10) - 9.0 * (10.0f64).log2()).abs() < 1e-12);
        // P2: f(1) = 1
        assert_eq!(f_tau(1, 1, 2), 1.0);
    }

    #[test]
    fn protocols_all_run_under_harness() {
        for strategy in [
            Strategy::Push,
            Strategy::Rpull,
            Strategy::PushPullAlt,
            Strategy::Ppush,
            Strategy::MatchGreedy,
        ] {
            let spec = ExperimentSpec::new(
                vec![point(generate::gnp(10, 0.4, 3).unwrap(), "gnp")],
                ProtocolSpec::new(strategy),
                4,
                1,
            );
            let results = run_experiment(&spec).unwrap();
            assert!(results[0].records.iter().all(|r| r.completed));
        }
    }
}
