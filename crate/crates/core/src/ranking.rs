//! Scalar rankings derived from standard or modular centrality.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::centrality::{self, CentralityKind, EigenOptions};
use crate::community::CommunityStats;
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::modular::{modular_centrality_with, ModularCentrality, ModularScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankingStrategy {
    /// Whole-graph centrality, ignoring communities.
    Standard,
    LocalOnly,
    GlobalOnly,
    /// Euclidean norm of the (local, global) pair.
    Modulus,
    /// Global over local.
    Tangent,
    /// Local and global mixed by the community's inter-link fraction.
    WeightedModular,
}

impl RankingStrategy {
    pub const ALL: [RankingStrategy; 6] = [
        RankingStrategy::Standard,
        RankingStrategy::LocalOnly,
        RankingStrategy::GlobalOnly,
        RankingStrategy::Modulus,
        RankingStrategy::Tangent,
        RankingStrategy::WeightedModular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RankingStrategy::Standard => "standard",
            RankingStrategy::LocalOnly => "local",
            RankingStrategy::GlobalOnly => "global",
            RankingStrategy::Modulus => "modulus",
            RankingStrategy::Tangent => "tangent",
            RankingStrategy::WeightedModular => "weighted",
        }
    }

    pub fn needs_partition(self) -> bool {
        self != RankingStrategy::Standard
    }
}

impl fmt::Display for RankingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for RankingStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for RankingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "local-only" | "localonly" => "local",
            "global-only" | "globalonly" => "global",
            "weighted-modular" | "weightedmodular" => "weighted",
            other => other,
        };
        RankingStrategy::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| Error::UnknownName {
                what: "ranking strategy",
                value: s.to_string(),
            })
    }
}

pub fn modulus_score(ms: &ModularScore) -> f64 {
    ms.beta_local.hypot(ms.beta_global)
}

/// `β_G / β_L`; `+∞` for pure bridges (`β_L = 0 < β_G`), 0 when both vanish.
pub fn tangent_score(ms: &ModularScore) -> f64 {
    if ms.beta_local == 0.0 {
        if ms.beta_global > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        ms.beta_global / ms.beta_local
    }
}

pub fn weighted_score(ms: &ModularScore, stats: &CommunityStats) -> Result<f64> {
    let mu = stats.mixing_of(ms.community)?;
    Ok((1.0 - mu) * ms.beta_local + mu * ms.beta_global)
}

/// Nodes in descending score order with a per-node score table.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub strategy: RankingStrategy,
    pub order: Vec<usize>,
    pub scores: Vec<f64>,
}

impl Ranking {
    /// Sorts by descending `score`, then descending `secondary`, then
    /// ascending node id.
    pub fn from_scores(strategy: RankingStrategy, scores: Vec<f64>, secondary: Option<&[f64]>) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| {
            scores[b]
                .total_cmp(&scores[a])
                .then_with(|| match secondary {
                    Some(sec) => sec[b].total_cmp(&sec[a]),
                    None => Ordering::Equal,
                })
                .then(a.cmp(&b))
        });
        Ranking { strategy, order, scores }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top(&self, k: usize) -> &[usize] {
        &self.order[..k.min(self.order.len())]
    }

    /// CSV with header `rank,node,score`; `+∞` is written as `inf`.
    pub fn write_csv<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        writeln!(out, "rank,node,score")?;
        for (r, &v) in self.order.iter().enumerate() {
            let s = self.scores[v];
            if s == f64::INFINITY {
                writeln!(out, "{},{},inf", r + 1, graph.label(v))?;
            } else {
                writeln!(out, "{},{},{}", r + 1, graph.label(v), s)?;
            }
        }
        Ok(())
    }
}

/// Ranks by the scalar obtained from each node's modular score.
pub fn rank_modular(modular: &ModularCentrality, strategy: RankingStrategy, stats: Option<&CommunityStats>) -> Result<Ranking> {
    let pairs = &modular.scores;
    let (scores, secondary): (Vec<f64>, Option<Vec<f64>>) = match strategy {
        RankingStrategy::Standard => {
            return Err(Error::InvalidConfig(
                "standard ranking is computed from the whole graph, not a modular score".into(),
            ))
        }
        RankingStrategy::LocalOnly => (pairs.iter().map(|s| s.beta_local).collect(), None),
        RankingStrategy::GlobalOnly => (pairs.iter().map(|s| s.beta_global).collect(), None),
        RankingStrategy::Modulus => (pairs.iter().map(modulus_score).collect(), None),
        RankingStrategy::Tangent => {
            let scores = pairs.iter().map(tangent_score).collect::<Vec<_>>();
            // Only infinite scores can tie on the first key for a reason the
            // ratio cannot see; larger β_G wins there.
            let secondary = pairs
                .iter()
                .zip(&scores)
                .map(|(p, s)| if s.is_infinite() { p.beta_global } else { 0.0 })
                .collect();
            (scores, Some(secondary))
        }
        RankingStrategy::WeightedModular => {
            let stats = stats.ok_or_else(|| {
                Error::InvalidConfig("weighted ranking needs community statistics".into())
            })?;
            let scores = pairs
                .iter()
                .map(|s| weighted_score(s, stats))
                .collect::<Result<Vec<_>>>()?;
            (scores, None)
        }
    };
    Ok(Ranking::from_scores(strategy, scores, secondary.as_deref()))
}

/// Caches everything needed to rank one (graph, partition, kind) triple under
/// any strategy without recomputing centralities.
#[derive(Debug, Clone)]
pub struct Ranker {
    pub kind: CentralityKind,
    pub standard: Vec<f64>,
    pub modular: Option<ModularCentrality>,
    pub stats: Option<CommunityStats>,
}

impl Ranker {
    pub fn new(graph: &Graph, partition: Option<&Partition>, kind: CentralityKind) -> Result<Self> {
        let eigen = EigenOptions::default();
        let standard = centrality::compute(kind, graph, &eigen)?.scores;
        let (modular, stats) = match partition {
            Some(p) => (
                Some(modular_centrality_with(graph, p, kind, &eigen)?),
                Some(CommunityStats::compute(graph, p)?),
            ),
            None => (None, None),
        };
        Ok(Ranker {
            kind,
            standard,
            modular,
            stats,
        })
    }

    pub fn rank(&self, strategy: RankingStrategy) -> Result<Ranking> {
        match strategy {
            RankingStrategy::Standard => Ok(Ranking::from_scores(strategy, self.standard.clone(), None)),
            _ => {
                let modular = self.modular.as_ref().ok_or_else(|| {
                    Error::InvalidConfig(format!("strategy `{strategy}` needs a partition"))
                })?;
                rank_modular(modular, strategy, self.stats.as_ref())
            }
        }
    }
}

pub fn rank(graph: &Graph, partition: &Partition, kind: CentralityKind, strategy: RankingStrategy) -> Result<Ranking> {
    let partition = strategy.needs_partition().then_some(partition);
    Ranker::new(graph, partition, kind)?.rank(strategy)
}
