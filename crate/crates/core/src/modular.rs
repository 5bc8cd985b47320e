//! Two-component modular centrality.
//!
//! The local component of a node is the chosen centrality computed inside its
//! community once every inter-community link is removed. The global component
//! is the same centrality computed on the connected components formed by the
//! inter-community links alone; nodes without such links score 0.

use std::io::Write;

use crate::centrality::{self, CentralityKind, EigenOptions, Scope, ScoreVector};
use crate::error::Result;
use crate::graph::{Graph, Partition, SubgraphView, Topology};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularScore {
    pub beta_local: f64,
    pub beta_global: f64,
    pub community: usize,
    /// Component of the global network holding the node, `None` when the
    /// node has no inter-community link.
    pub global_component: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularCentrality {
    pub kind: CentralityKind,
    pub scores: Vec<ModularScore>,
}

impl ModularCentrality {
    pub fn local(&self) -> ScoreVector {
        ScoreVector {
            scores: self.scores.iter().map(|s| s.beta_local).collect(),
            scope: Scope::PerComponent,
        }
    }

    pub fn global(&self) -> ScoreVector {
        ScoreVector {
            scores: self.scores.iter().map(|s| s.beta_global).collect(),
            scope: Scope::PerComponent,
        }
    }

    /// CSV with header `node,community,beta_local,beta_global`.
    pub fn write_csv<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        writeln!(out, "node,community,beta_local,beta_global")?;
        for (v, s) in self.scores.iter().enumerate() {
            writeln!(out, "{},{},{},{}", graph.label(v), s.community, s.beta_local, s.beta_global)?;
        }
        Ok(())
    }
}

pub fn modular_centrality(graph: &Graph, partition: &Partition, kind: CentralityKind) -> Result<ModularCentrality> {
    modular_centrality_with(graph, partition, kind, &EigenOptions::default())
}

pub fn modular_centrality_with(
    graph: &Graph,
    partition: &Partition,
    kind: CentralityKind,
    eigen: &EigenOptions,
) -> Result<ModularCentrality> {
    let local_view = SubgraphView::local(graph, partition)?;
    let global_view = SubgraphView::global(graph, partition)?;
    let local = centrality::compute(kind, &local_view, eigen)?;
    let global = centrality::compute(kind, &global_view, eigen)?;
    let components = global_view.components();
    let scores = (0..graph.node_count())
        .map(|v| ModularScore {
            beta_local: local.scores[v],
            beta_global: if global_view.contains(v) { global.scores[v] } else { 0.0 },
            community: partition.community(v),
            global_component: components.label(v),
        })
        .collect();
    Ok(ModularCentrality { kind, scores })
}

pub fn local_component(graph: &Graph, partition: &Partition, kind: CentralityKind) -> Result<ScoreVector> {
    let view = SubgraphView::local(graph, partition)?;
    centrality::compute(kind, &view, &EigenOptions::default())
}

pub fn global_component(graph: &Graph, partition: &Partition, kind: CentralityKind) -> Result<ScoreVector> {
    let view = SubgraphView::global(graph, partition)?;
    centrality::compute(kind, &view, &EigenOptions::default())
}
