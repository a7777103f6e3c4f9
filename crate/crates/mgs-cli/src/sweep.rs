use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;
use serde_json::json;

use mgs_core::experiments::{
    csv_header, csv_row, fit_power_law, run_experiment, ExperimentPoint, ExperimentSpec,
};
use mgs_core::graph::{generate::FamilySpec, DynamicGraph};

use crate::common::{init_jobs, parse_tau, usage, CliError};
use crate::simulate::{apply_dynamics, build_protocol, load_config, tau_from_config};

#[derive(Args)]
pub struct SweepArgs {
    /// gstar | badgraph | complete | cycle | path | gnp | hypercube
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated vertex counts, one experiment point each
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// gnp: edge probability
    #[arg(long)]
    p: Option<f64>,
    /// gstar: center clique size (points = n - delta)
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long = "b")]
    b: Option<u32>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    cap: Option<String>,
    /// Stability interval: positive integer or "inf"
    #[arg(long)]
    tau: Option<String>,
    /// static | permute (permute is the default when --tau is given)
    #[arg(long)]
    dynamics: Option<String>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    source: Option<u32>,
    #[arg(long = "max-rounds")]
    max_rounds: Option<u64>,
    /// Fit a log-log power law to the medians and report the exponent
    #[arg(long)]
    fit: bool,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
    /// Also write the summary JSON (always printed to stdout) to a file
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON config file supplying defaults for the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: Option<String>,
    pub sizes: Option<Vec<usize>>,
    pub p: Option<f64>,
    pub delta: Option<usize>,
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
    pub fit: Option<bool>,
    pub jobs: Option<usize>,
}

fn family_spec(name: &str, p: Option<f64>, delta: Option<usize>) -> Result<FamilySpec, CliError> {
    match name {
        "complete" => Ok(FamilySpec::Complete),
        "cycle" => Ok(FamilySpec::Cycle),
        "path" => Ok(FamilySpec::Path),
        "hypercube" => Ok(FamilySpec::Hypercube),
        "badgraph" => Ok(FamilySpec::Badgraph),
        "gnp" => Ok(FamilySpec::Gnp { p: p.ok_or_else(|| usage("gnp requires --p"))? }),
        "gstar" => {
            Ok(FamilySpec::Gstar { delta: delta.ok_or_else(|| usage("gstar requires --delta"))? })
        }
        other => Err(usage(format!("unknown family {other:?}"))),
    }
}

pub fn run(args: SweepArgs) -> Result<(), CliError> {
    let cfg: SweepConfig = load_config(args.config.as_deref())?;
    let family_name = args
        .family
        .as_deref()
        .or(cfg.family.as_deref())
        .ok_or_else(|| usage("--family is required"))?
        .to_string();
    let sizes = if args.sizes.is_empty() { cfg.sizes.clone().unwrap_or_default() } else { args.sizes.clone() };
    if sizes.is_empty() {
        return Err(usage("--sizes must list at least one vertex count"));
    }
    let family = family_spec(&family_name, args.p.or(cfg.p), args.delta.or(cfg.delta))?;
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
    let fit = args.fit || cfg.fit.unwrap_or(false);
    init_jobs(args.jobs.or(cfg.jobs))?;

    let mut points = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let graph = family.generate(n, seed)?;
        if source as usize >= graph.n() {
            return Err(usage(format!("--source {source} out of range for n={}", graph.n())));
        }
        let dg = apply_dynamics(DynamicGraph::fixed(graph), false, tau, dynamics, seed)?;
        points.push(ExperimentPoint { family: family_name.clone(), graph: dg });
    }
    let mut spec = ExperimentSpec::new(points, protocol, trials, seed);
    spec.source = source;
    spec.max_rounds = args.max_rounds.or(cfg.max_rounds);
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
    fs::write(&args.out, csv)?;

    let mut summary = json!({
        "points": results.iter().map(|p| &p.summary).collect::<Vec<_>>(),
    });
    if fit {
        let medians: Vec<f64> = results.iter().map(|p| p.summary.median).collect();
        let exponent = fit_power_law(&sizes, &medians)?;
        summary["exponent"] = json!(exponent);
    }
    let mut text = summary.to_string();
    text.push('\n');
    print!("{text}");
    if let Some(path) = &args.summary {
        fs::write(path, text)?;
    }
    Ok(())
}
