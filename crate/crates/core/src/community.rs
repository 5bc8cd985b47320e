//! Louvain community detection, Newman–Girvan modularity and mixing
//! statistics.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

/// Per-community composition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunitySummary {
    pub size: usize,
    /// Sum over members of intra-community degree; each intra edge counts twice.
    pub internal_degree_sum: usize,
    pub external_degree_sum: usize,
    /// Fraction of the community's edge endpoints that leave it. 0 for a
    /// community without edges.
    pub mixing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityStats {
    pub communities: Vec<CommunitySummary>,
    /// Network-level mixing parameter (per-node average).
    pub mixing: f64,
    pub modularity: f64,
}

impl CommunityStats {
    pub fn compute(graph: &Graph, partition: &Partition) -> Result<Self> {
        Ok(CommunityStats {
            communities: community_summaries(graph, partition)?,
            mixing: global_mixing(graph, partition, MixingEstimator::NodeAverage)?,
            modularity: modularity(graph, partition)?,
        })
    }

    pub fn mixing_of(&self, community: usize) -> Result<f64> {
        self.communities
            .get(community)
            .map(|c| c.mixing)
            .ok_or(Error::MissingCommunity(community))
    }

    /// CSV with header `community,size,internal_deg,external_deg,mu`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "community,size,internal_deg,external_deg,mu")?;
        for (c, s) in self.communities.iter().enumerate() {
            writeln!(
                out,
                "{c},{},{},{},{}",
                s.size, s.internal_degree_sum, s.external_degree_sum, s.mixing
            )?;
        }
        Ok(())
    }
}

fn community_summaries(graph: &Graph, partition: &Partition) -> Result<Vec<CommunitySummary>> {
    partition.check_covers(graph)?;
    let mut out = vec![
        CommunitySummary {
            size: 0,
            internal_degree_sum: 0,
            external_degree_sum: 0,
            mixing: 0.0,
        };
        partition.community_count()
    ];
    for v in 0..graph.node_count() {
        let c = partition.community(v);
        out[c].size += 1;
        for &u in graph.neighbors(v) {
            if partition.community(u) == c {
                out[c].internal_degree_sum += 1;
            } else {
                out[c].external_degree_sum += 1;
            }
        }
    }
    for s in &mut out {
        let total = s.internal_degree_sum + s.external_degree_sum;
        if total > 0 {
            s.mixing = s.external_degree_sum as f64 / total as f64;
        }
    }
    Ok(out)
}

/// Fraction of inter-community edge endpoints of every community.
pub fn mixing_fraction_per_community(graph: &Graph, partition: &Partition) -> Result<Vec<f64>> {
    Ok(community_summaries(graph, partition)?
        .into_iter()
        .map(|s| s.mixing)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixingEstimator {
    /// Mean over nodes with degree > 0 of `k_inter / k`.
    #[default]
    NodeAverage,
    /// Inter-community edges over all edges.
    EdgeFraction,
}

pub fn global_mixing(graph: &Graph, partition: &Partition, estimator: MixingEstimator) -> Result<f64> {
    partition.check_covers(graph)?;
    let inter = |v: usize| {
        graph
            .neighbors(v)
            .iter()
            .filter(|&&u| partition.community(u) != partition.community(v))
            .count()
    };
    match estimator {
        MixingEstimator::NodeAverage => {
            let mut total = 0.0;
            let mut counted = 0usize;
            for v in 0..graph.node_count() {
                let k = graph.degree(v);
                if k > 0 {
                    total += inter(v) as f64 / k as f64;
                    counted += 1;
                }
            }
            if counted == 0 {
                return Err(Error::NoEdges);
            }
            Ok(total / counted as f64)
        }
        MixingEstimator::EdgeFraction => {
            if graph.edge_count() == 0 {
                return Err(Error::NoEdges);
            }
            let endpoints: usize = (0..graph.node_count()).map(inter).sum();
            Ok(endpoints as f64 / 2.0 / graph.edge_count() as f64)
        }
    }
}

/// `Q = Σ_c [ e_c / E − (d_c / 2E)² ]`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    modularity_with_resolution(graph, partition, 1.0)
}

pub fn modularity_with_resolution(graph: &Graph, partition: &Partition, resolution: f64) -> Result<f64> {
    partition.check_covers(graph)?;
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let m = graph.edge_count() as f64;
    let mut intra = vec![0usize; partition.community_count()];
    let mut degree = vec![0usize; partition.community_count()];
    for (u, v) in graph.edges() {
        if partition.community(u) == partition.community(v) {
            intra[partition.community(u)] += 1;
        }
    }
    for v in 0..graph.node_count() {
        degree[partition.community(v)] += graph.degree(v);
    }
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - resolution * (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LouvainOptions {
    pub seed: u64,
    pub resolution: f64,
    /// A level stops once a full pass gains less than this.
    pub min_pass_gain: f64,
}

impl Default for LouvainOptions {
    fn default() -> Self {
        LouvainOptions {
            seed: 0,
            resolution: 1.0,
            min_pass_gain: 1e-7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LouvainResult {
    pub partition: Partition,
    /// Modularity tracked incrementally from the singleton start.
    pub modularity: f64,
    pub levels: usize,
}

/// Weighted graph used across aggregation levels. `self_loops[i]` is the
/// weight of intra-node links, counted once.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &Graph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = (0..graph.node_count())
            .map(|v| graph.neighbors(v).iter().map(|&u| (u, 1.0)).collect())
            .collect();
        let strength = adjacency.iter().map(|row| row.len() as f64).collect();
        Level {
            adjacency,
            self_loops: vec![0.0; graph.node_count()],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn aggregate(&self, community: &[usize], count: usize) -> Level {
        let mut weights: Vec<HashMap<usize, f64>> = vec![HashMap::new(); count];
        let mut self_loops = vec![0.0; count];
        let mut strength = vec![0.0; count];
        for v in 0..self.len() {
            let cv = community[v];
            self_loops[cv] += self.self_loops[v];
            strength[cv] += self.strength[v];
            for &(u, w) in &self.adjacency[v] {
                let cu = community[u];
                if cu == cv {
                    // Each internal edge is seen from both ends.
                    self_loops[cv] += w / 2.0;
                } else {
                    *weights[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        let adjacency = weights
            .into_iter()
            .map(|m| {
                let mut row: Vec<(usize, f64)> = m.into_iter().collect();
                row.sort_unstable_by_key(|&(u, _)| u);
                row
            })
            .collect();
        Level {
            adjacency,
            self_loops,
            strength,
        }
    }
}

/// One local-moving phase. Returns whether any node moved and the total
/// modularity gain.
fn local_moving(
    level: &Level,
    community: &mut [usize],
    total: &mut [f64],
    order: &[usize],
    m2: f64,
    options: &LouvainOptions,
    until_stable: bool,
) -> (bool, f64) {
    let gamma = options.resolution;
    let mut link = vec![0.0; level.len()];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; level.len()];
    let mut moved_any = false;
    let mut gained = 0.0;
    loop {
        let mut pass_gain = 0.0;
        let mut moved = false;
        for &v in order {
            let own = community[v];
            let k = level.strength[v];
            for &(u, w) in &level.adjacency[v] {
                let c = community[u];
                if !is_touched[c] {
                    is_touched[c] = true;
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= k;
            // Gain of joining c, up to the common factor 2 / m2.
            let score = |c: usize, link_c: f64| link_c - gamma * total[c] * k / m2;
            let stay = score(own, link[own]);
            let mut best = own;
            let mut best_score = stay;
            touched.sort_unstable();
            for &c in &touched {
                if c == own {
                    continue;
                }
                let s = score(c, link[c]);
                // Strict improvement only; ascending scan keeps the lowest id
                // among equal-gain targets.
                if s > best_score + 1e-12 {
                    best = c;
                    best_score = s;
                }
            }
            total[best] += k;
            if best != own {
                community[v] = best;
                moved = true;
                pass_gain += 2.0 * (best_score - stay) / m2;
            }
            for &c in &touched {
                link[c] = 0.0;
                is_touched[c] = false;
            }
            touched.clear();
        }
        gained += pass_gain;
        moved_any |= moved;
        if !moved || (!until_stable && pass_gain < options.min_pass_gain) {
            break;
        }
    }
    (moved_any, gained)
}

fn compact(community: &mut [usize]) -> usize {
    let mut map = HashMap::new();
    for c in community.iter_mut() {
        let next = map.len();
        *c = *map.entry(*c).or_insert(next);
    }
    map.len()
}

/// Multi-level Louvain modularity optimization.
///
/// Node visit order is shuffled per level from `options.seed`. After the
/// last aggregation level the projected partition is polished by single-node
/// moves on the original graph until no move improves modularity, so the
/// result is a local maximum under single-node moves.
pub fn louvain(graph: &Graph, options: &LouvainOptions) -> Result<LouvainResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if graph.edge_count() == 0 {
        return Ok(LouvainResult {
            partition: Partition::singletons(n),
            modularity: 0.0,
            levels: 0,
        });
    }
    let gamma = options.resolution;
    let m2 = 2.0 * graph.edge_count() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let base = Level::from_graph(graph);
    let mut q: f64 = -(0..n).map(|v| gamma * (base.strength[v] / m2).powi(2)).sum::<f64>();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut level = base;
    let mut levels = 0;
    loop {
        let mut community: Vec<usize> = (0..level.len()).collect();
        let mut total = level.strength.clone();
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(&mut rng);
        let (moved, gain) = local_moving(&level, &mut community, &mut total, &order, m2, options, false);
        q += gain;
        if !moved {
            break;
        }
        levels += 1;
        let count = compact(&mut community);
        for c in membership.iter_mut() {
            *c = community[*c];
        }
        level = level.aggregate(&community, count);
        if count == 1 {
            break;
        }
    }

    let base = Level::from_graph(graph);
    let count = compact(&mut membership);
    let mut total = vec![0.0; count.max(n)];
    for v in 0..n {
        total[membership[v]] += base.strength[v];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let (_, gain) = local_moving(&base, &mut membership, &mut total, &order, m2, options, true);
    q += gain;
    let count = compact(&mut membership);
    Ok(LouvainResult {
        partition: Partition::with_count(membership, count)?,
        modularity: q,
        levels,
    })
}
