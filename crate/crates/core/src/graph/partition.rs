use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// Non-overlapping, covering assignment of nodes to communities `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Wraps an assignment whose ids are already in `0..community_count`.
    /// Ids with no members are allowed here and surface as empty communities.
    pub fn with_count(assignment: Vec<usize>, community_count: usize) -> Result<Self> {
        if let Some(&id) = assignment.iter().find(|&&c| c >= community_count) {
            return Err(Error::CommunityOutOfRange {
                id,
                count: community_count,
            });
        }
        Ok(Partition {
            assignment,
            community_count,
        })
    }

    /// Compacts arbitrary community ids to `0..m`, preserving their order.
    pub fn from_labels(raw: &[usize]) -> Self {
        let distinct: BTreeSet<usize> = raw.iter().copied().collect();
        let dense: HashMap<usize, usize> = distinct.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Partition {
            assignment: raw.iter().map(|c| dense[c]).collect(),
            community_count: distinct.len(),
        }
    }

    /// Everyone in community 0.
    pub fn single(node_count: usize) -> Self {
        Partition {
            assignment: vec![0; node_count],
            community_count: usize::from(node_count > 0),
        }
    }

    /// Every node in its own community.
    pub fn singletons(node_count: usize) -> Self {
        Partition {
            assignment: (0..node_count).collect(),
            community_count: node_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn community(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.community_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            members[c].push(v);
        }
        members
    }

    /// Checks that the partition covers exactly the nodes of `graph`.
    pub fn check_covers(&self, graph: &Graph) -> Result<()> {
        if self.assignment.len() != graph.node_count() {
            return Err(Error::PartitionSize {
                expected: graph.node_count(),
                got: self.assignment.len(),
            });
        }
        Ok(())
    }

    /// Renames communities with `map[old] = new`; `map` must be a permutation.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        Partition::with_count(
            self.assignment.iter().map(|&c| map[c]).collect(),
            self.community_count,
        )
    }
}

/// Parses `node_label community_id` lines against `graph`'s labels.
/// Community ids may be any non-negative integers; they are compacted.
pub fn read_partition<R: BufRead>(reader: R, graph: &Graph) -> Result<Partition> {
    let index: HashMap<&str, usize> = graph
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let integer_labels = graph.labels().iter().all(|l| l.parse::<i64>().is_ok());
    let mut raw: Vec<Option<usize>> = vec![None; graph.node_count()];
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(label), Some(comm)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `node community`, found `{trimmed}`"),
            });
        };
        let community: usize = comm.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("community id `{comm}` is not a non-negative integer"),
        })?;
        // Integer graphs store normalized labels, so "007" must find "7".
        let key = match (integer_labels, label.parse::<i64>()) {
            (true, Ok(v)) => v.to_string(),
            _ => label.to_string(),
        };
        let Some(&v) = index.get(key.as_str()) else {
            return Err(Error::UnknownNode(label.to_string()));
        };
        raw[v] = Some(community);
    }
    let mut assignment = Vec::with_capacity(raw.len());
    for (v, c) in raw.into_iter().enumerate() {
        match c {
            Some(c) => assignment.push(c),
            None => return Err(Error::MissingNode(graph.label(v).to_string())),
        }
    }
    Ok(Partition::from_labels(&assignment))
}

/// Writes `node_label community_id`, one line per node in id order.
pub fn write_partition<W: Write>(graph: &Graph, partition: &Partition, mut out: W) -> Result<()> {
    partition.check_covers(graph)?;
    for v in 0..graph.node_count() {
        writeln!(out, "{} {}", graph.label(v), partition.community(v))?;
    }
    Ok(())
}
