use super::{connected_components, Components, Graph, Partition, Topology};
use crate::error::Result;

/// Which edges of the parent a [`SubgraphView`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    /// Intra-community edges; every node is retained.
    Local,
    /// Inter-community edges; only nodes with at least one such edge are retained.
    Global,
}

/// A borrowed edge-filtered view of a graph under a partition.
///
/// No adjacency is copied: neighbors are filtered from the parent on the fly.
/// Component labels are computed once at construction.
#[derive(Debug, Clone)]
pub struct SubgraphView<'g> {
    parent: &'g Graph,
    partition: &'g Partition,
    kind: ViewKind,
    retained: Vec<bool>,
    components: Components,
}

impl<'g> SubgraphView<'g> {
    fn new(parent: &'g Graph, partition: &'g Partition, kind: ViewKind) -> Result<Self> {
        partition.check_covers(parent)?;
        let retained = match kind {
            ViewKind::Local => vec![true; parent.node_count()],
            ViewKind::Global => (0..parent.node_count())
                .map(|v| {
                    parent
                        .neighbors(v)
                        .iter()
                        .any(|&u| partition.community(u) != partition.community(v))
                })
                .collect(),
        };
        let mut view = SubgraphView {
            parent,
            partition,
            kind,
            retained,
            components: Components {
                labels: Vec::new(),
                count: 0,
            },
        };
        view.components = connected_components(&view);
        Ok(view)
    }

    /// The parent graph with every inter-community edge removed.
    pub fn local(parent: &'g Graph, partition: &'g Partition) -> Result<Self> {
        Self::new(parent, partition, ViewKind::Local)
    }

    /// The parent graph with every intra-community edge removed, trimmed of
    /// the nodes left isolated.
    pub fn global(parent: &'g Graph, partition: &'g Partition) -> Result<Self> {
        Self::new(parent, partition, ViewKind::Global)
    }

    pub fn kind(&self) -> ViewKind {
        self.kind
    }

    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    pub fn partition(&self) -> &'g Partition {
        self.partition
    }

    pub fn retained_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.retained
            .iter()
            .enumerate()
            .filter_map(|(v, &keep)| keep.then_some(v))
    }

    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&k| k).count()
    }

    #[inline]
    pub fn keeps_edge(&self, u: usize, v: usize) -> bool {
        let same = self.partition.community(u) == self.partition.community(v);
        match self.kind {
            ViewKind::Local => same,
            ViewKind::Global => !same,
        }
    }

    /// Retained edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.edges().filter(|&(u, v)| self.keeps_edge(u, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn component_labels(&self) -> &Components {
        &self.components
    }

    /// Copies component `c` out as a standalone graph, returning it with the
    /// parent id of every node.
    pub fn component_graph(&self, c: usize) -> (Graph, Vec<usize>) {
        let nodes: Vec<usize> = (0..self.parent.node_count())
            .filter(|&v| self.components.label(v) == Some(c))
            .collect();
        let mut index = vec![usize::MAX; self.parent.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &u in &nodes {
            for w in self.neighbors(u) {
                if u < w {
                    edges.push((index[u], index[w]));
                }
            }
        }
        let labels = nodes.iter().map(|&v| self.parent.label(v).to_string()).collect();
        let graph = Graph::with_labels(labels, edges).expect("indices are in range");
        (graph, nodes)
    }
}

impl Topology for SubgraphView<'_> {
    fn node_count(&self) -> usize {
        self.parent.node_count()
    }

    fn contains(&self, v: usize) -> bool {
        self.retained[v]
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| self.keeps_edge(v, u))
    }

    fn components(&self) -> Components {
        self.components.clone()
    }
}
