//! The instance file: a JSON document with one edge per line, so diffs stay readable.
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "n": 3,
//!   "edges": [
//!     [0, 1],
//!     [0, 2]
//!   ],
//!   "incompat": {
//!     "0": [
//!       [[0, 1], [0, 2]]
//!     ]
//!   },
//!   "metadata": {}
//! }
//! ```
//!
//! Pairs under key `v` must consist of two distinct edges of the graph that both
//! contain `v`. [`emit_instance`] writes the canonical form: edges ascending,
//! vertices ascending, pairs in edge-id order, empty families omitted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ihs_core::{Graph, IncompatibilitySystem};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Generator parameters, echoed verbatim.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<serde_json::Value>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub system: IncompatibilitySystem,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

type Edge = [usize; 2];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    format_version: u32,
    n: usize,
    edges: Vec<Edge>,
    #[serde(default)]
    incompat: BTreeMap<String, Vec<[Edge; 2]>>,
    #[serde(default)]
    metadata: Metadata,
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance, InstanceError> {
    let raw: RawInstance = serde_json::from_slice(bytes).map_err(|e| InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.format_version != FORMAT_VERSION {
        return Err(schema(
            "format_version",
            format!("unsupported version {}, expected {FORMAT_VERSION}", raw.format_version),
        ));
    }
    let n = raw.n;
    let mut seen = std::collections::BTreeSet::new();
    for (i, &[u, v]) in raw.edges.iter().enumerate() {
        let field = format!("edges[{i}]");
        if u >= n || v >= n {
            return Err(schema(field, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(schema(field, "loops are not allowed"));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(schema(field, format!("duplicate edge [{u}, {v}]")));
        }
    }
    let pairs: Vec<(usize, usize)> = raw.edges.iter().map(|&[u, v]| (u, v)).collect();
    let graph = Graph::new(n, &pairs).map_err(|e| schema("edges", e.to_string()))?;

    let mut system = IncompatibilitySystem::empty(&graph);
    for (key, list) in &raw.incompat {
        let v: usize = key
            .parse()
            .map_err(|_| schema(format!("incompat.\"{key}\""), "key is not a vertex id"))?;
        if v >= n {
            return Err(schema(
                format!("incompat.\"{key}\""),
                format!("vertex out of range for n = {n}"),
            ));
        }
        for (i, pair) in list.iter().enumerate() {
            let field = format!("incompat.\"{key}\"[{i}]");
            let mut ids = [None; 2];
            for (j, &[a, b]) in pair.iter().enumerate() {
                if a >= n || b >= n {
                    return Err(schema(
                        format!("{field}[{j}]"),
                        format!("vertex out of range for n = {n}"),
                    ));
                }
                let Some(id) = graph.edge_id(a, b) else {
                    return Err(schema(format!("{field}[{j}]"), format!("[{a}, {b}] is not an edge")));
                };
                if a != v && b != v {
                    return Err(schema(
                        format!("{field}[{j}]"),
                        format!("edge [{a}, {b}] does not meet vertex {v}"),
                    ));
                }
                ids[j] = Some(id);
            }
            let (Some(x), Some(y)) = (ids[0], ids[1]) else {
                unreachable!()
            };
            system
                .insert(v, x, y)
                .map_err(|e| schema(field.clone(), e.to_string()))?;
        }
    }
    Ok(Instance {
        graph,
        system,
        metadata: raw.metadata,
    })
}

fn edge_text(g: &Graph, e: ihs_core::EdgeId) -> String {
    let (u, v) = g.endpoints(e);
    format!("[{u}, {v}]")
}

/// Canonical text of an instance. Parsing it back and emitting again is the identity.
pub fn emit_instance(g: &Graph, sys: &IncompatibilitySystem, meta: &Metadata) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"format_version\": {FORMAT_VERSION},");
    let _ = writeln!(s, "  \"n\": {},", g.n());
    if g.edges().is_empty() {
        s.push_str("  \"edges\": [],\n");
    } else {
        s.push_str("  \"edges\": [\n");
        let lines: Vec<String> = g.edges().iter().map(|(u, v)| format!("    [{u}, {v}]")).collect();
        s.push_str(&lines.join(",\n"));
        s.push_str("\n  ],\n");
    }
    let families: Vec<usize> = (0..g.n()).filter(|&v| !sys.family(v).is_empty()).collect();
    if families.is_empty() {
        s.push_str("  \"incompat\": {},\n");
    } else {
        s.push_str("  \"incompat\": {\n");
        let blocks: Vec<String> = families
            .iter()
            .map(|&v| {
                let pairs: Vec<String> = sys
                    .family(v)
                    .iter()
                    .map(|&(a, b)| format!("      [{}, {}]", edge_text(g, a), edge_text(g, b)))
                    .collect();
                format!("    \"{v}\": [\n{}\n    ]", pairs.join(",\n"))
            })
            .collect();
        s.push_str(&blocks.join(",\n"));
        s.push_str("\n  },\n");
    }
    s.push_str("  \"metadata\": ");
    s.push_str(&emit_metadata(meta));
    s.push_str("\n}\n");
    s
}

fn emit_metadata(meta: &Metadata) -> String {
    let mut fields = Vec::new();
    if let Some(g) = &meta.generator {
        fields.push(format!("    \"generator\": {}", serde_json::Value::from(g.as_str())));
    }
    if let Some(seed) = meta.seed {
        fields.push(format!("    \"seed\": {seed}"));
    }
    if let Some(k) = meta.k {
        fields.push(format!("    \"k\": {k}"));
    }
    if let Some(spec) = &meta.spec {
        fields.push(format!("    \"spec\": {spec}"));
    }
    if fields.is_empty() {
        "{}".into()
    } else {
        format!("{{\n{}\n  }}", fields.join(",\n"))
    }
}

pub fn read_instance(path: &std::path::Path) -> Result<Instance, crate::CliError> {
    let bytes = std::fs::read(path).map_err(|e| crate::CliError::Io(path.display().to_string(), e))?;
    parse_instance(&bytes).map_err(|e| crate::CliError::Instance(path.display().to_string(), e))
}
