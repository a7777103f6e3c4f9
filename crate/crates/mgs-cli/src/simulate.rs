use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use mgs_core::experiments::{csv_header, csv_row, run_experiment, ExperimentPoint, ExperimentSpec};
use mgs_core::graph::{io, DynamicGraph, DynamicsModel, Stability};
use mgs_core::sim::{run_trial, AcceptanceCap, ProtocolSpec, Resolution, Strategy};

use crate::common::{init_jobs, parse_tau, usage, CliError};

#[derive(Args)]
pub struct SimulateArgs {
    /// Graph or dynamic-graph JSON file
    file: PathBuf,
    /// push | rpull | pushpull | ppush | matchgreedy
    #[arg(long)]
    protocol: Option<String>,
    /// Advertised tag bits (defaults: 1 for ppush, else 0)
    #[arg(long = "b")]
    b: Option<u32>,
    /// random | first-by-id | adversarial-min
    #[arg(long)]
    resolution: Option<String>,
    /// one | unbounded
    #[arg(long)]
    cap: Option<String>,
    /// Stability interval: positive integer or "inf" (static input only)
    #[arg(long)]
    tau: Option<String>,
    /// static | permute (static input only; permute is the default when
    /// --tau is given)
    #[arg(long)]
    dynamics: Option<String>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Source node (default 0)
    #[arg(long)]
    source: Option<u32>,
    #[arg(long = "max-rounds")]
    max_rounds: Option<u64>,
    /// Write the first trial's per-round trace as JSON lines
    #[arg(long)]
    trace: Option<PathBuf>,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for trials (default: MGS_JOBS or all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON config file supplying defaults for the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Config-file counterpart of the flags; explicit flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub protocol: Option<String>,
    pub b: Option<u32>,
    pub resolution: Option<String>,
    pub cap: Option<String>,
    pub tau: Option<serde_json::Value>,
    pub dynamics: Option<String>,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub source: Option<u32>,
    pub max_rounds: Option<u64>,
    pub jobs: Option<usize>,
}

pub fn load_config<T: serde::de::DeserializeOwned + Default>(
    path: Option<&Path>,
) -> Result<T, CliError> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("bad config file: {e}")))
}

pub fn tau_from_config(value: &serde_json::Value) -> Result<Stability, CliError> {
    match value {
        serde_json::Value::Number(k) => {
            parse_tau(&k.to_string())
        }
        serde_json::Value::String(s) => parse_tau(s),
        other => Err(usage(format!("invalid tau in config: {other}"))),
    }
}

/// Builds a protocol spec from flag/config strings, applying per-strategy
/// defaults for unset fields.
pub fn build_protocol(
    protocol: Option<&str>,
    b: Option<u32>,
    resolution: Option<&str>,
    cap: Option<&str>,
) -> Result<ProtocolSpec, CliError> {
    let strategy: Strategy =
        protocol.ok_or_else(|| usage("--protocol is required"))?.parse()?;
    let mut spec = ProtocolSpec::new(strategy);
    if let Some(b) = b {
        spec = spec.with_tag_bits(b);
    }
    if let Some(r) = resolution {
        spec = spec.with_resolution(r.parse::<Resolution>()?);
    }
    if let Some(c) = cap {
        spec = spec.with_cap(c.parse::<AcceptanceCap>()?);
    }
    spec.validate()?;
    Ok(spec)
}

/// Wraps a static input graph according to --tau/--dynamics.
pub fn apply_dynamics(
    dg: DynamicGraph,
    was_dynamic: bool,
    tau: Option<Stability>,
    dynamics: Option<&str>,
    seed: u64,
) -> Result<DynamicGraph, CliError> {
    if was_dynamic {
        if tau.is_some() || dynamics.is_some() {
            return Err(usage("--tau/--dynamics conflict with a dynamic input file"));
        }
        return Ok(dg);
    }
    let model = match (dynamics, tau) {
        (None, None) => return Ok(dg),
        (None, Some(_)) | (Some("permute"), _) => DynamicsModel::Permute { seed },
        (Some("static"), _) => DynamicsModel::Static,
        (Some(other), _) => return Err(usage(format!("unknown dynamics model {other:?}"))),
    };
    if matches!(model, DynamicsModel::Permute { .. }) && tau.is_none() {
        return Err(usage("--dynamics permute requires --tau"));
    }
    let tau = tau.unwrap_or(Stability::Unbounded);
    Ok(DynamicGraph::new(dg.base().clone(), tau, model)?)
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let cfg: SimulateConfig = load_config(args.config.as_deref())?;
    let protocol = build_protocol(
        args.protocol.as_deref().or(cfg.protocol.as_deref()),
        args.b.or(cfg.b),
        args.resolution.as_deref().or(cfg.resolution.as_deref()),
        args.cap.as_deref().or(cfg.cap.as_deref()),
    )?;
    let trials = args.trials.or(cfg.trials).ok_or_else(|| usage("--trials is required"))?;
    let seed = args.seed.or(cfg.seed).ok_or_else(|| usage("--seed is required"))?;
    if trials < 1 {
        return Err(usage("--trials must be >= 1"));
    }
    let tau = match (&args.tau, &cfg.tau) {
        (Some(s), _) => Some(parse_tau(s)?),
        (None, Some(v)) => Some(tau_from_config(v)?),
        (None, None) => None,
    };
    let dynamics = args.dynamics.as_deref().or(cfg.dynamics.as_deref());
    let source = args.source.or(cfg.source).unwrap_or(0);
    let max_rounds = args.max_rounds.or(cfg.max_rounds);
    init_jobs(args.jobs.or(cfg.jobs))?;

    let (dg, was_dynamic) = io::read_graph_or_dynamic(&args.file)?;
    if source as usize >= dg.n() {
        return Err(usage(format!("--source {source} out of range for n={}", dg.n())));
    }
    let dg = apply_dynamics(dg, was_dynamic, tau, dynamics, seed)?;

    let mut spec = ExperimentSpec::new(
        vec![ExperimentPoint { family: "file".into(), graph: dg.clone() }],
        protocol,
        trials,
        seed,
    );
    spec.source = source;
    spec.max_rounds = max_rounds;
    let results = run_experiment(&spec)?;

    let mut csv = String::new();
    csv.push_str(csv_header());
    csv.push('\n');
    for point in &results {
        for record in &point.records {
            csv.push_str(&csv_row(point, &protocol, record));
            csv.push('\n');
        }
    }
    match &args.out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }

    if let Some(trace_path) = &args.trace {
        let budget = max_rounds.unwrap_or_else(|| mgs_core::sim::default_max_rounds(dg.n()));
        let rec = run_trial(&dg, source, &protocol, seed, budget, true)?;
        let mut out = Vec::new();
        for round in rec.trace.expect("trace was requested") {
            serde_json::to_writer(&mut out, &round).expect("trace serialization");
            out.push(b'\n');
        }
        let mut f = fs::File::create(trace_path)?;
        f.write_all(&out)?;
    }
    Ok(())
}
