//! JSON file formats for static and dynamic graphs.
//!
//! Static: `{"n": <int>, "edges": [[u,v], ...]}` with edges written
//! `u < v` in lexicographic order, so output is byte-stable.
//!
//! Dynamic: `{"n": <int>, "tau": <int|"inf">, "model":
//! "static"|"permute"|"explicit", "seed": <int>, "base": <graph>|null,
//! "frames": [<graph>, ...]|null}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, DynamicsModel, Graph, NodeId, Stability};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DynamicFile {
    n: usize,
    tau: TauField,
    model: String,
    seed: u64,
    base: Option<GraphFile>,
    frames: Option<Vec<GraphFile>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TauField {
    Finite(u64),
    Marker(String),
}

impl TryFrom<TauField> for Stability {
    type Error = Error;
    fn try_from(t: TauField) -> Result<Stability> {
        match t {
            TauField::Finite(k) if k >= 1 => Ok(Stability::Rounds(k)),
            TauField::Finite(k) => Err(Error::SchemaError(format!("tau must be >= 1, got {k}"))),
            TauField::Marker(s) if s == "inf" => Ok(Stability::Unbounded),
            TauField::Marker(s) => Err(Error::SchemaError(format!("unknown tau marker {s:?}"))),
        }
    }
}

impl From<Stability> for TauField {
    fn from(s: Stability) -> TauField {
        match s {
            Stability::Rounds(k) => TauField::Finite(k),
            Stability::Unbounded => TauField::Marker("inf".into()),
        }
    }
}

fn graph_to_file(g: &Graph) -> GraphFile {
    GraphFile { n: g.n(), edges: g.edges().collect() }
}

fn graph_from_file(f: &GraphFile) -> Result<Graph> {
    Graph::from_edges(f.n, &f.edges).map_err(|e| match e {
        Error::InvalidEdge(u, v) => Error::SchemaError(format!("invalid edge [{u}, {v}]")),
        Error::InvalidParams(m) => Error::SchemaError(m),
        other => other,
    })
}

/// Serializes a graph to its canonical JSON string (trailing newline).
pub fn graph_to_json(g: &Graph) -> String {
    let mut s = serde_json::to_string(&graph_to_file(g)).expect("graph serialization");
    s.push('\n');
    s
}

/// Parses a graph from JSON. Syntax errors become [`Error::ParseError`],
/// structural problems [`Error::SchemaError`] (or
/// [`Error::DisconnectedGraph`]).
pub fn graph_from_json(s: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(s).map_err(|e| Error::ParseError(e.to_string()))?;
    graph_from_file(&file)
}

pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, graph_to_json(g))?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    graph_from_json(&fs::read_to_string(path)?)
}

/// Serializes a dynamic graph to its canonical JSON string.
pub fn dynamic_to_json(dg: &DynamicGraph) -> String {
    let (model, seed, base, frames) = match dg.model() {
        DynamicsModel::Static => ("static", 0, Some(graph_to_file(dg.base())), None),
        DynamicsModel::Permute { seed } => ("permute", *seed, Some(graph_to_file(dg.base())), None),
        DynamicsModel::Explicit { frames } => {
            ("explicit", 0, None, Some(frames.iter().map(graph_to_file).collect()))
        }
    };
    let file = DynamicFile {
        n: dg.n(),
        tau: dg.tau().into(),
        model: model.to_string(),
        seed,
        base,
        frames,
    };
    let mut s = serde_json::to_string(&file).expect("dynamic graph serialization");
    s.push('\n');
    s
}

pub fn dynamic_from_json(s: &str) -> Result<DynamicGraph> {
    let file: DynamicFile =
        serde_json::from_str(s).map_err(|e| Error::ParseError(e.to_string()))?;
    let tau: Stability = file.tau.try_into()?;
    match file.model.as_str() {
        "static" | "permute" => {
            let base = file
                .base
                .as_ref()
                .ok_or_else(|| Error::SchemaError(format!("model {:?} requires a base graph", file.model)))?;
            if base.n != file.n {
                return Err(Error::SchemaError(format!(
                    "base graph has n={}, file says n={}",
                    base.n, file.n
                )));
            }
            let base = graph_from_file(base)?;
            let model = if file.model == "static" {
                DynamicsModel::Static
            } else {
                DynamicsModel::Permute { seed: file.seed }
            };
            DynamicGraph::new(base, tau, model)
        }
        "explicit" => {
            let frames = file
                .frames
                .as_ref()
                .ok_or_else(|| Error::SchemaError("explicit model requires frames".into()))?;
            if frames.is_empty() {
                return Err(Error::SchemaError("explicit model requires at least one frame".into()));
            }
            let mut graphs = Vec::with_capacity(frames.len());
            for (i, f) in frames.iter().enumerate() {
                if f.n != file.n {
                    return Err(Error::SchemaError(format!(
                        "frame {} has n={}, file says n={}",
                        i + 1,
                        f.n,
                        file.n
                    )));
                }
                let g = graph_from_file(f).map_err(|e| match e {
                    Error::DisconnectedGraph => Error::DisconnectedFrame(i + 1),
                    other => other,
                })?;
                graphs.push(g);
            }
            let base = graphs[0].clone();
            DynamicGraph::new(base, tau, DynamicsModel::Explicit { frames: graphs })
        }
        other => Err(Error::SchemaError(format!("unknown dynamics model {other:?}"))),
    }
}

pub fn write_dynamic(dg: &DynamicGraph, path: &Path) -> Result<()> {
    fs::write(path, dynamic_to_json(dg))?;
    Ok(())
}

pub fn read_dynamic(path: &Path) -> Result<DynamicGraph> {
    dynamic_from_json(&fs::read_to_string(path)?)
}

/// Reads a file that may hold either a static graph or a dynamic graph;
/// static graphs are wrapped as fixed dynamic graphs.
pub fn read_graph_or_dynamic(path: &Path) -> Result<(DynamicGraph, bool)> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::ParseError(e.to_string()))?;
    if value.get("model").is_some() {
        Ok((dynamic_from_json(&text)?, true))
    } else {
        Ok((DynamicGraph::fixed(graph_from_json(&text)?), false))
    }
}
