use std::fmt;
use std::str::FromStr;

use mgs_core::graph::Stability;
use mgs_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters (exit 2).
    Usage(String),
    /// Failure during execution (exit 1).
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses a stability value: a positive integer or "inf".
pub fn parse_tau(s: &str) -> Result<Stability, CliError> {
    if s == "inf" {
        return Ok(Stability::Unbounded);
    }
    match u64::from_str(s) {
        Ok(t) if t >= 1 => Ok(Stability::Rounds(t)),
        _ => Err(usage(format!("invalid tau {s:?}: expected a positive integer or \"inf\""))),
    }
}

/// Installs the global thread pool for `--jobs N` / `MGS_JOBS`.
pub fn init_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    let jobs = match jobs {
        Some(j) => Some(j),
        None => match std::env::var("MGS_JOBS") {
            Ok(v) => Some(
                v.parse::<usize>()
                    .map_err(|_| usage(format!("MGS_JOBS must be a positive integer, got {v:?}")))?,
            ),
            Err(_) => None,
        },
    };
    let Some(jobs) = jobs else { return Ok(()) };
    if jobs == 0 {
        return Err(usage("--jobs must be >= 1"));
    }
    #[cfg(feature = "parallel")]
    {
        // fails only if a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        eprintln!("note: built without the parallel feature; --jobs {jobs} ignored");
    }
    Ok(())
}
