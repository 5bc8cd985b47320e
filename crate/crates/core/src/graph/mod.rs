//! Simple undirected graphs, community partitions and the local/global views
//! derived from them.

mod io;
mod partition;
mod view;

use std::collections::VecDeque;

pub use io::{load_edge_list, write_edge_list, EdgeListOptions, LabelKind, LoadReport};
pub use partition::{read_partition, write_partition, Partition};
pub use view::{SubgraphView, ViewKind};

use crate::error::{Error, Result};

/// Immutable simple undirected graph over dense node ids `0..n`.
///
/// Neighbor lists are sorted and symmetric. Each node keeps the label it had
/// in the source file so results can be reported in the caller's namespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge iterator, dropping self-loops and
    /// duplicate edges. Labels default to the decimal node id.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..node_count).map(|v| v.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange(u));
            }
            if v >= n {
                return Err(Error::NodeOutOfRange(v));
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            labels,
            edge_count: degree_sum / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Dense id of the node carrying `label`, if any.
    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `nodes` (any order), relabeled densely in
    /// ascending order of the original ids. Returns the graph and the
    /// original id of every new node.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> (Graph, Vec<usize>) {
        let mut kept = nodes.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let adjacency = kept
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&u| (new_id[u] != usize::MAX).then_some(new_id[u]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let labels = kept.iter().map(|&v| self.labels[v].clone()).collect();
        (
            Graph {
                adjacency,
                labels,
                edge_count,
            },
            kept,
        )
    }

    /// Induced subgraph on the largest connected component. Size ties go to
    /// the component whose smallest node id is lowest, which is also the one
    /// with the lowest original label since ids follow label order.
    pub fn largest_connected_component(&self) -> Result<Graph> {
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let comps = connected_components(self);
        let mut sizes = vec![0usize; comps.count()];
        for label in comps.labels().iter().flatten() {
            sizes[*label] += 1;
        }
        // Labels are handed out in ascending order of each component's
        // smallest node, so the first maximum wins the tie.
        let mut best = 0;
        for (c, &s) in sizes.iter().enumerate() {
            if s > sizes[best] {
                best = c;
            }
        }
        let nodes: Vec<usize> = (0..self.node_count())
            .filter(|&v| comps.label(v) == Some(best))
            .collect();
        Ok(self.induced_subgraph(&nodes).0)
    }
}

/// Read-only adjacency abstraction shared by whole graphs and subgraph views.
///
/// Node ids always live in the parent graph's id space; nodes outside the
/// scope report `contains(v) == false` and have no neighbors.
pub trait Topology: Sync {
    fn node_count(&self) -> usize;

    fn contains(&self, v: usize) -> bool;

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_;

    fn components(&self) -> Components;
}

impl Topology for Graph {
    fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    fn contains(&self, v: usize) -> bool {
        v < self.adjacency.len()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    fn components(&self) -> Components {
        connected_components(self)
    }
}

/// Connected-component labeling over a [`Topology`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    labels: Vec<Option<usize>>,
    count: usize,
}

impl Components {
    pub fn count(&self) -> usize {
        self.count
    }

    /// Component of `v`, or `None` when `v` is outside the scope.
    pub fn label(&self, v: usize) -> Option<usize> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    /// Members of every component, each list in ascending id order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.count];
        for (v, label) in self.labels.iter().enumerate() {
            if let Some(c) = label {
                members[*c].push(v);
            }
        }
        members
    }
}

/// Labels components by BFS. The component holding the smallest in-scope
/// node gets label 0, the next unvisited smallest node opens label 1, etc.
pub fn connected_components<T: Topology + ?Sized>(topology: &T) -> Components {
    let n = topology.node_count();
    let mut labels = vec![None; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !topology.contains(start) || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(count);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for w in topology.neighbors(u) {
                if labels[w].is_none() {
                    labels[w] = Some(count);
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    Components { labels, count }
}
