//! Modular centrality for networks with non-overlapping community structure.
//!
//! A node's influence in a modular network is split into a local part, measured
//! inside its own community with inter-community links removed, and a global
//! part, measured on the components formed by the inter-community links alone.
//! The crate computes both parts for Degree, Betweenness, Closeness and
//! Eigenvector centrality, collapses them into rankings, and scores rankings by
//! the size of the SIR outbreaks their top nodes trigger.
//!
//! Module map:
//! - [`graph`]: simple undirected graphs, partitions, local/global views, edge-list IO.
//! - [`community`]: Louvain detection, modularity, mixing statistics.
//! - [`centrality`]: the four standard measures over a graph or a view.
//! - [`modular`]: the two-component modular centrality.
//! - [`ranking`]: scalar ranking strategies.
//! - [`epidemic`]: SIR simulation, epidemic threshold, relative outbreak difference.
//! - [`generator`]: LFR-style synthetic modular networks.
//! - [`manifest`]: run manifests and seed derivation for the CLI.

pub mod centrality;
pub mod community;
pub mod epidemic;
pub mod error;
pub mod generator;
pub mod graph;
pub mod manifest;
pub mod modular;
pub mod ranking;

pub use centrality::{CentralityKind, ScoreVector};
pub use community::CommunityStats;
pub use epidemic::{SirConfig, SirOutcome};
pub use error::{Error, Result};
pub use generator::GeneratorConfig;
pub use graph::{Graph, Partition, SubgraphView};
pub use modular::{ModularCentrality, ModularScore};
pub use ranking::{Ranking, RankingStrategy};
