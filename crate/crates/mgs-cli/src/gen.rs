use std::path::PathBuf;

use clap::Args;

use mgs_core::graph::{generate, io};

use crate::common::{usage, CliError};

#[derive(Args)]
pub struct GenArgs {
    /// gstar | badgraph | complete | cycle | path | gnp | hypercube
    #[arg(long)]
    family: String,
    /// Vertex count (implied by --delta/--Delta for gstar)
    #[arg(long)]
    n: Option<usize>,
    /// gstar: center clique size
    #[arg(long)]
    delta: Option<usize>,
    /// gstar: point count
    #[arg(long = "Delta")]
    big_delta: Option<usize>,
    /// gnp: edge probability
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: GenArgs) -> Result<(), CliError> {
    let reject_unused = |cond: bool, flag: &str| -> Result<(), CliError> {
        if cond {
            Err(usage(format!("--{flag} does not apply to family {:?}", args.family)))
        } else {
            Ok(())
        }
    };
    let need_n = || args.n.ok_or_else(|| usage(format!("family {:?} requires --n", args.family)));

    let graph = match args.family.as_str() {
        "gstar" => {
            reject_unused(args.p.is_some(), "p")?;
            let delta = args.delta.ok_or_else(|| usage("gstar requires --delta"))?;
            let big_delta = args.big_delta.ok_or_else(|| usage("gstar requires --Delta"))?;
            if let Some(n) = args.n {
                if n != delta + big_delta {
                    return Err(usage(format!(
                        "gstar with delta={delta}, Delta={big_delta} has n={}, got --n {n}",
                        delta + big_delta
                    )));
                }
            }
            generate::gstar(delta, big_delta)?
        }
        "gnp" => {
            reject_unused(args.delta.is_some(), "delta")?;
            reject_unused(args.big_delta.is_some(), "Delta")?;
            let p = args.p.ok_or_else(|| usage("gnp requires --p"))?;
            generate::gnp(need_n()?, p, args.seed)?
        }
        "badgraph" | "complete" | "cycle" | "path" | "hypercube" => {
            reject_unused(args.delta.is_some(), "delta")?;
            reject_unused(args.big_delta.is_some(), "Delta")?;
            reject_unused(args.p.is_some(), "p")?;
            let n = need_n()?;
            match args.family.as_str() {
                "badgraph" => generate::badgraph(n)?,
                "complete" => generate::complete(n)?,
                "cycle" => generate::cycle(n)?,
                "path" => generate::path(n)?,
                _ => generate::hypercube(n)?,
            }
        }
        other => return Err(usage(format!("unknown family {other:?}"))),
    };
    io::write_graph(&graph, &args.out)?;
    Ok(())
}
