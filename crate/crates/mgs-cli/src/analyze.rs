use std::borrow::Cow;
use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Map, Value};

use mgs_core::graph::{io, DynamicsModel, Graph};
use mgs_core::matching;
use mgs_core::metrics::{self, EvalMode, ExpansionResult, Mode};

use crate::common::{usage, CliError};

const DEFAULT_SAMPLES: u32 = 1000;

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Graph or dynamic-graph JSON file
    file: PathBuf,
    /// Report vertex expansion
    #[arg(long)]
    alpha: bool,
    /// Report conductance
    #[arg(long)]
    phi: bool,
    /// Report the matching-to-set-size ratio
    #[arg(long)]
    gamma: bool,
    /// Force exact enumeration (refused above the per-metric caps)
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Sample K random subsets instead of enumerating
    #[arg(long, value_name = "K")]
    sample: Option<u32>,
    /// Seed for sampled mode
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rounds to inspect for dynamic graphs (default: all listed frames)
    #[arg(long)]
    horizon: Option<u64>,
}

pub fn run(args: AnalyzeArgs) -> Result<(), CliError> {
    let (dg, is_dynamic) = io::read_graph_or_dynamic(&args.file)?;
    if args.horizon.is_some() && !is_dynamic {
        return Err(usage("--horizon requires a dynamic graph file"));
    }
    if let Some(0) = args.sample {
        return Err(usage("--sample must be >= 1"));
    }
    let n = dg.n();
    // permute dynamics preserve all reported quantities, so only
    // explicit frame lists need a walk
    let frames: Vec<Cow<'_, Graph>> = match dg.model() {
        DynamicsModel::Explicit { frames } => {
            let horizon = args.horizon.unwrap_or(frames.len() as u64).max(1);
            dg.distinct_frames(horizon).into_iter().map(|(_, f)| f).collect()
        }
        _ => vec![Cow::Borrowed(dg.base())],
    };

    let mode_for = |cap: usize| -> Result<Mode, CliError> {
        if args.exact {
            Ok(Mode::Exact)
        } else if let Some(samples) = args.sample {
            Ok(Mode::Sampled { samples, seed: args.seed })
        } else if n <= cap {
            Ok(Mode::Exact)
        } else {
            Ok(Mode::Sampled { samples: DEFAULT_SAMPLES, seed: args.seed })
        }
    };

    let (want_alpha, want_phi, want_gamma) = if !args.alpha && !args.phi && !args.gamma {
        (true, true, false)
    } else {
        (args.alpha, args.phi, args.gamma)
    };

    let min_over_frames =
        |compute: &dyn Fn(&Graph) -> mgs_core::Result<ExpansionResult>|
         -> Result<ExpansionResult, CliError> {
            let mut best: Option<ExpansionResult> = None;
            for f in &frames {
                let r = compute(f.as_ref())?;
                best = Some(match best {
                    None => r,
                    Some(b) if r.value < b.value => r,
                    Some(b) => b,
                });
            }
            Ok(best.expect("at least one frame"))
        };

    let mut report = Map::new();
    if want_alpha {
        let mode = mode_for(metrics::EXACT_EXPANSION_CAP)?;
        let r = min_over_frames(&move |g| metrics::vertex_expansion(g, mode))?;
        report.insert("alpha".into(), metric_json(&r));
    }
    if want_phi {
        let mode = mode_for(metrics::EXACT_EXPANSION_CAP)?;
        let r = min_over_frames(&move |g| metrics::conductance(g, mode))?;
        report.insert("phi".into(), metric_json(&r));
    }
    if want_gamma {
        let mode = mode_for(matching::EXACT_GAMMA_CAP)?;
        let r = min_over_frames(&move |g| matching::gamma(g, mode))?;
        report.insert("gamma".into(), metric_json(&r));
    }
    let max_degree = frames.iter().map(|f| f.max_degree()).max().expect("frames nonempty");
    let min_degree = frames.iter().map(|f| f.min_degree()).min().expect("frames nonempty");
    report.insert("Delta".into(), json!(max_degree));
    report.insert("delta".into(), json!(min_degree));

    println!("{}", Value::Object(report));
    Ok(())
}

fn metric_json(r: &ExpansionResult) -> Value {
    let mode = match r.mode {
        EvalMode::Exact => "exact".to_string(),
        EvalMode::Sampled(k) => format!("sampled({k})"),
    };
    json!({
        "num": r.value.numer(),
        "den": r.value.denom(),
        "witness": r.witness,
        "mode": mode,
    })
}
