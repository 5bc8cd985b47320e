use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// How node labels in an edge list are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelKind {
    /// Labels must parse as signed integers; dense ids follow numeric order.
    #[default]
    Integer,
    /// Any whitespace-free token; dense ids follow lexicographic order.
    Text,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeListOptions {
    pub labels: LabelKind,
}

/// Bookkeeping from [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub records: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl LoadReport {
    pub fn dropped(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Reads a whitespace-separated edge list. Only the first two tokens of a
/// line are used; extra columns (weights, timestamps) are ignored. Lines
/// starting with `#` or `%` are comments.
///
/// Self-loops and repeated edges are dropped and counted in the report.
pub fn load_edge_list<R: BufRead>(reader: R, options: &EdgeListOptions) -> Result<(Graph, LoadReport)> {
    let mut raw: Vec<(String, String)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || is_comment(trimmed) {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected two labels, found `{trimmed}`"),
            });
        };
        let normalize = |tok: &str| -> Result<String> {
            match options.labels {
                LabelKind::Text => Ok(tok.to_string()),
                LabelKind::Integer => tok.parse::<i64>().map(|v| v.to_string()).map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("label `{tok}` is not an integer"),
                }),
            }
        };
        raw.push((normalize(a)?, normalize(b)?));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut labels: Vec<String> = raw
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    match options.labels {
        LabelKind::Integer => labels.sort_by_key(|l| l.parse::<i64>().expect("normalized above")),
        LabelKind::Text => labels.sort_by(|a, b| a.cmp(b)),
    }
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();

    let mut report = LoadReport {
        records: raw.len(),
        ..LoadReport::default()
    };
    let mut seen = HashSet::with_capacity(raw.len());
    let mut edges = Vec::with_capacity(raw.len());
    for (a, b) in &raw {
        let (u, v) = (index[a.as_str()], index[b.as_str()]);
        match u.cmp(&v) {
            Ordering::Equal => report.self_loops += 1,
            _ => {
                let key = (u.min(v), u.max(v));
                if seen.insert(key) {
                    edges.push(key);
                } else {
                    report.duplicates += 1;
                }
            }
        }
    }
    let graph = Graph::with_labels(labels, edges)?;
    Ok((graph, report))
}

/// Writes the graph with dense ids, one `u v` line per edge (`u < v`),
/// sorted lexicographically. Isolated nodes do not appear.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
