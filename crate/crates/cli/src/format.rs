//! The `er-graph v1` edge-list file format.
//!
//! ```text
//! er-graph v1 n=<n> m=<m>
//! # key: value
//! <u> <v>
//! ```
//!
//! Comment lines carry generator metadata so instances are
//! self-describing. Edge lines have `u < v` and ascend lexicographically;
//! the parser rejects any violation, and the declared `n` and `m` must
//! match the body.

use std::path::Path;

use er_core::graph::{GraphError, GraphModel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Parsed or to-be-written graph file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub n: usize,
    pub m: usize,
    /// `# key: value` comment lines, in order.
    pub metadata: Vec<(String, String)>,
    /// Edges with `u < v`, ascending.
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn from_graph(g: &GraphModel, metadata: Vec<(String, String)>) -> Self {
        GraphFile {
            n: g.vertex_count(),
            m: g.edge_count(),
            metadata,
            edges: g.edges().iter().map(|e| e.endpoints()).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<GraphModel, FormatError> {
        Ok(GraphModel::build(self.n, &self.edges)?)
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let rest = header
            .strip_prefix("er-graph v1 ")
            .ok_or_else(|| parse_err(1, "expected header 'er-graph v1 n=<n> m=<m>'"))?;
        let mut n = None;
        let mut m = None;
        for field in rest.split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("m=") {
                m = v.parse::<usize>().ok();
            } else {
                return Err(parse_err(1, format!("unexpected header field '{field}'")));
            }
        }
        let n = n.ok_or_else(|| parse_err(1, "missing or invalid n="))?;
        let m = m.ok_or_else(|| parse_err(1, "missing or invalid m="))?;

        let mut metadata = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    metadata.push((key.trim().to_string(), value.trim().to_string()));
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(line_no, "expected '<u> <v>'"))?;
            let v: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(line_no, "expected '<u> <v>'"))?;
            if parts.next().is_some() {
                return Err(parse_err(line_no, "trailing tokens on edge line"));
            }
            if u >= v {
                return Err(parse_err(
                    line_no,
                    format!("edge ({u}, {v}) must have u < v"),
                ));
            }
            if v >= n {
                return Err(parse_err(
                    line_no,
                    format!("endpoint {v} out of range for n={n}"),
                ));
            }
            if let Some(&last) = edges.last() {
                if last >= (u, v) {
                    return Err(parse_err(
                        line_no,
                        format!("edge ({u}, {v}) out of ascending order"),
                    ));
                }
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(parse_err(
                0,
                format!("header declares m={m} but body has {} edges", edges.len()),
            ));
        }
        Ok(GraphFile {
            n,
            m,
            metadata,
            edges,
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("er-graph v1 n={} m={}\n", self.n, self.m);
        for (key, value) in &self.metadata {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        Ok(std::fs::write(path, self.render())?)
    }
}

/// Reads a graph file and builds the graph, in one step.
pub fn load_graph(path: &Path) -> Result<(GraphFile, GraphModel), FormatError> {
    let file = GraphFile::read(path)?;
    let graph = file.to_graph()?;
    Ok((file, graph))
}
