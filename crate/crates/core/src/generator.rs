//! LFR-style synthetic networks with planted communities.
//!
//! This is an approximation of the LFR benchmark, not the reference
//! algorithm. Degrees and community sizes follow truncated power laws, each
//! node splits its degree into internal and external stubs according to the
//! mixing target, and stubs are paired configuration-model style inside each
//! community and across communities. Self-loops, multi-edges and external
//! edges that landed inside a community are repaired by double-edge swaps;
//! whatever cannot be repaired is dropped and counted.

use std::collections::{BTreeMap, HashMap};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::community::{global_mixing, MixingEstimator};
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Degree distribution exponent.
    pub gamma: f64,
    /// Community size distribution exponent.
    pub beta_c: f64,
    /// Target mixing parameter.
    pub mu: f64,
    pub min_community: usize,
    pub max_community: usize,
    pub seed: u64,
    pub max_rewire_rounds: usize,
}

impl GeneratorConfig {
    /// The usual benchmark setting: `<k> = 7`, `k_max = 80`, `γ = 2.8`,
    /// size exponent 2, sizes in `[15, 200]`.
    pub fn benchmark(n: usize, mu: f64, seed: u64) -> Self {
        GeneratorConfig {
            n,
            avg_degree: 7.0,
            max_degree: 80,
            gamma: 2.8,
            beta_c: 2.0,
            mu,
            min_community: 15,
            max_community: 200,
            seed,
            max_rewire_rounds: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.min_community < 2 || self.min_community > self.max_community {
            return bad(format!(
                "community size range [{}, {}] is empty or below 2",
                self.min_community, self.max_community
            ));
        }
        if self.n < self.min_community {
            return bad(format!("n = {} cannot hold a community of {}", self.n, self.min_community));
        }
        if !(self.avg_degree >= 1.0 && self.avg_degree < self.max_degree as f64) {
            return bad(format!(
                "average degree {} must lie in [1, max_degree = {})",
                self.avg_degree, self.max_degree
            ));
        }
        if self.max_degree >= self.n {
            return bad(format!("max degree {} must be below n = {}", self.max_degree, self.n));
        }
        if !(self.gamma > 1.0) {
            return bad(format!("degree exponent {} must exceed 1", self.gamma));
        }
        if !(self.beta_c > 0.0) {
            return bad(format!("community size exponent {} must be positive", self.beta_c));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return bad(format!("mu {} not in [0, 1)", self.mu));
        }
        Ok(())
    }
}

/// What the generator had to adjust to realize the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub attempts: usize,
    /// Lower cutoff of the continuous degree law that hits the mean.
    pub degree_lower_cutoff: f64,
    pub community_count: usize,
    /// Nodes of an undersized last community spread over the others.
    pub redistributed_nodes: usize,
    pub reassigned_nodes: usize,
    /// Stubs moved between the internal and external pools to fix parity.
    pub parity_moves: usize,
    /// Stubs removed because a pool had odd size and no stub could move.
    pub parity_shaved: usize,
    /// Internal stub count of every community as handed to pairing.
    pub internal_stub_sums: Vec<usize>,
    /// External stub count as handed to pairing.
    pub external_stub_sum: usize,
    pub rewire_rounds: usize,
    pub swaps: usize,
    pub dropped_stubs: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedNetwork {
    pub graph: Graph,
    pub partition: Partition,
    pub report: GenerationReport,
}

/// Inverse-CDF sample of a continuous power law `p(x) ∝ x^-exponent` on `[lo, hi]`.
fn sample_power_law<R: Rng>(rng: &mut R, exponent: f64, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    if (exponent - 1.0).abs() < 1e-12 {
        return lo * (hi / lo).powf(u);
    }
    let e = 1.0 - exponent;
    let (a, b) = (lo.powf(e), hi.powf(e));
    (a + u * (b - a)).powf(1.0 / e)
}

fn power_law_mean(exponent: f64, lo: f64, hi: f64) -> f64 {
    let integral = |p: f64| {
        // ∫ x^p dx on [lo, hi]
        if (p + 1.0).abs() < 1e-12 {
            (hi / lo).ln()
        } else {
            (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / (p + 1.0)
        }
    };
    integral(1.0 - exponent) / integral(-exponent)
}

/// Lower cutoff in `[1, hi)` whose truncated power law has the given mean.
fn lower_cutoff_for_mean(exponent: f64, mean: f64, hi: f64) -> f64 {
    let (mut lo_b, mut hi_b) = (1.0, hi);
    if power_law_mean(exponent, 1.0, hi) >= mean {
        return 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo_b + hi_b);
        if power_law_mean(exponent, mid, hi) < mean {
            lo_b = mid;
        } else {
            hi_b = mid;
        }
    }
    0.5 * (lo_b + hi_b)
}

fn sample_degrees<R: Rng>(config: &GeneratorConfig, rng: &mut R) -> (Vec<usize>, f64) {
    let kmax = config.max_degree as f64;
    let cutoff = lower_cutoff_for_mean(config.gamma, config.avg_degree, kmax);
    let mut degrees: Vec<usize> = (0..config.n)
        .map(|_| {
            let x = sample_power_law(rng, config.gamma, cutoff, kmax);
            (x.round() as usize).clamp(1, config.max_degree)
        })
        .collect();
    // Nudge single degrees until the total matches n·<k>.
    let target = (config.n as f64 * config.avg_degree).round() as usize;
    let mut total: usize = degrees.iter().sum();
    while total != target {
        let v = rng.random_range(0..config.n);
        if total < target && degrees[v] < config.max_degree {
            degrees[v] += 1;
            total += 1;
        } else if total > target && degrees[v] > 1 {
            degrees[v] -= 1;
            total -= 1;
        }
    }
    (degrees, cutoff)
}

fn sample_sizes<R: Rng>(config: &GeneratorConfig, rng: &mut R, report: &mut GenerationReport) -> Vec<usize> {
    let (lo, hi) = (config.min_community as f64, config.max_community as f64);
    let mut sizes = Vec::new();
    let mut total = 0;
    loop {
        let s = (sample_power_law(rng, config.beta_c, lo, hi).round() as usize)
            .clamp(config.min_community, config.max_community);
        if total + s < config.n {
            sizes.push(s);
            total += s;
            continue;
        }
        let rest = config.n - total;
        if rest >= config.min_community || sizes.is_empty() {
            sizes.push(rest);
        } else {
            // Spread the remainder instead of keeping an undersized community.
            report.redistributed_nodes = rest;
            for _ in 0..rest {
                let open: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] < config.max_community).collect();
                let c = if open.is_empty() {
                    rng.random_range(0..sizes.len())
                } else {
                    open[rng.random_range(0..open.len())]
                };
                sizes[c] += 1;
            }
        }
        return sizes;
    }
}

/// Places nodes into communities so that every node's internal degree is
/// strictly below its community's size.
fn assign_nodes<R: Rng>(
    internal: &[usize],
    sizes: &[usize],
    rng: &mut R,
    report: &mut GenerationReport,
) -> Option<Vec<usize>> {
    let n = internal.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]));
    let mut free: Vec<usize> = sizes.to_vec();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    let mut assignment = vec![usize::MAX; n];
    for &v in &order {
        let need = internal[v];
        let weight: usize = (0..sizes.len()).filter(|&c| sizes[c] > need).map(|c| free[c]).sum();
        if weight > 0 {
            let mut pick = rng.random_range(0..weight);
            for c in 0..sizes.len() {
                if sizes[c] <= need {
                    continue;
                }
                if pick < free[c] {
                    free[c] -= 1;
                    members[c].push(v);
                    assignment[v] = c;
                    break;
                }
                pick -= free[c];
            }
            continue;
        }
        // Every large-enough community is full: evict its least demanding
        // member into any open community that can still hold it.
        let mut placed = false;
        for c in (0..sizes.len()).filter(|&c| sizes[c] > need) {
            let Some((pos, &u)) = members[c].iter().enumerate().min_by_key(|(_, &u)| internal[u]) else {
                continue;
            };
            if let Some(d) = (0..sizes.len()).find(|&d| free[d] > 0 && sizes[d] > internal[u]) {
                members[c].swap_remove(pos);
                members[d].push(u);
                assignment[u] = d;
                free[d] -= 1;
                members[c].push(v);
                assignment[v] = c;
                report.reassigned_nodes += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(assignment)
}

type Edge = (usize, usize);

fn key(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

struct Pools {
    /// One pool per community plus the external pool last.
    edges: Vec<Vec<Edge>>,
    counts: HashMap<Edge, u32>,
}

impl Pools {
    fn external(&self) -> usize {
        self.edges.len() - 1
    }

    fn is_bad(&self, pool: usize, e: Edge, community: &[usize]) -> bool {
        e.0 == e.1
            || self.counts.get(&key(e.0, e.1)).copied().unwrap_or(0) > 1
            || (pool == self.external() && community[e.0] == community[e.1])
    }

    fn fits(&self, pool: usize, e: Edge, community: &[usize]) -> bool {
        e.0 != e.1
            && !self.counts.contains_key(&key(e.0, e.1))
            && (pool != self.external() || community[e.0] != community[e.1])
    }

    fn remove(&mut self, e: Edge) {
        let k = key(e.0, e.1);
        let c = self.counts.get_mut(&k).expect("edge present");
        *c -= 1;
        if *c == 0 {
            self.counts.remove(&k);
        }
    }

    fn insert(&mut self, e: Edge) {
        *self.counts.entry(key(e.0, e.1)).or_insert(0) += 1;
    }
}

fn pair_stubs<R: Rng>(stubs: &mut Vec<usize>, rng: &mut R) -> Vec<Edge> {
    stubs.shuffle(rng);
    stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

fn rewire<R: Rng>(pools: &mut Pools, community: &[usize], max_rounds: usize, rng: &mut R, report: &mut GenerationReport) {
    for round in 0..max_rounds {
        let mut any_bad = false;
        for pool in 0..pools.edges.len() {
            let len = pools.edges[pool].len();
            if len < 2 {
                any_bad |= (0..len).any(|i| pools.is_bad(pool, pools.edges[pool][i], community));
                continue;
            }
            for i in 0..len {
                let e = pools.edges[pool][i];
                if !pools.is_bad(pool, e, community) {
                    continue;
                }
                any_bad = true;
                let j = loop {
                    let j = rng.random_range(0..len);
                    if j != i {
                        break j;
                    }
                };
                let f = pools.edges[pool][j];
                let (a, b) = e;
                let (c, d) = f;
                let (x, y) = if rng.random::<bool>() { ((a, c), (b, d)) } else { ((a, d), (b, c)) };
                pools.remove(e);
                pools.remove(f);
                let ok = pools.fits(pool, x, community) && pools.fits(pool, y, community) && key(x.0, x.1) != key(y.0, y.1);
                if ok {
                    pools.insert(x);
                    pools.insert(y);
                    pools.edges[pool][i] = x;
                    pools.edges[pool][j] = y;
                    report.swaps += 1;
                } else {
                    pools.insert(e);
                    pools.insert(f);
                }
            }
        }
        if !any_bad {
            return;
        }
        report.rewire_rounds = round + 1;
    }
}

fn attempt<R: Rng>(config: &GeneratorConfig, rng: &mut R, report: &mut GenerationReport) -> Option<(Vec<Edge>, Vec<usize>, usize)> {
    let (degrees, cutoff) = sample_degrees(config, rng);
    report.degree_lower_cutoff = cutoff;
    let mut internal: Vec<usize> = degrees
        .iter()
        .map(|&k| {
            // Stochastic rounding keeps the population mean of k_ext / k at mu.
            let exact = (1.0 - config.mu) * k as f64;
            let base = exact.floor();
            let up = rng.random::<f64>() < exact - base;
            base as usize + usize::from(up)
        })
        .collect();
    let sizes = sample_sizes(config, rng, report);
    let community = assign_nodes(&internal, &sizes, rng, report)?;
    let m = sizes.len();
    let mut external: Vec<usize> = degrees.iter().zip(&internal).map(|(k, i)| k - i).collect();

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, &c) in community.iter().enumerate() {
        members[c].push(v);
    }
    for (c, group) in members.iter().enumerate() {
        let sum: usize = group.iter().map(|&v| internal[v]).sum();
        if sum % 2 == 0 {
            continue;
        }
        let size = sizes[c];
        let up: Vec<usize> = group.iter().copied().filter(|&v| external[v] > 0 && internal[v] + 1 < size).collect();
        if let Some(&v) = up.choose(rng) {
            internal[v] += 1;
            external[v] -= 1;
            report.parity_moves += 1;
        } else {
            // Moving a stub out would create an inter-community link the
            // target mixing may not allow, so drop it instead.
            let down: Vec<usize> = group.iter().copied().filter(|&v| internal[v] > 0).collect();
            let &v = down.choose(rng)?;
            internal[v] -= 1;
            report.parity_shaved += 1;
        }
    }
    if external.iter().sum::<usize>() % 2 == 1 {
        let candidates: Vec<usize> = (0..config.n).filter(|&v| external[v] > 0).collect();
        let &v = candidates.choose(rng)?;
        external[v] -= 1;
        report.parity_shaved += 1;
    }
    report.internal_stub_sums = members.iter().map(|g| g.iter().map(|&v| internal[v]).sum()).collect();
    report.external_stub_sum = external.iter().sum();

    let mut pools = Pools {
        edges: Vec::with_capacity(m + 1),
        counts: HashMap::new(),
    };
    for group in &members {
        let mut stubs: Vec<usize> = group.iter().flat_map(|&v| std::iter::repeat_n(v, internal[v])).collect();
        pools.edges.push(pair_stubs(&mut stubs, rng));
    }
    let mut stubs: Vec<usize> = (0..config.n).flat_map(|v| std::iter::repeat_n(v, external[v])).collect();
    pools.edges.push(pair_stubs(&mut stubs, rng));
    for pool in &pools.edges {
        for &(u, v) in pool {
            *pools.counts.entry(key(u, v)).or_insert(0) += 1;
        }
    }

    rewire(&mut pools, &community, config.max_rewire_rounds, rng, report);

    let mut edges = Vec::new();
    for pool in 0..pools.edges.len() {
        for i in 0..pools.edges[pool].len() {
            let e = pools.edges[pool][i];
            if pools.is_bad(pool, e, &community) {
                pools.remove(e);
                report.dropped_stubs += 2;
            } else {
                edges.push(key(e.0, e.1));
            }
        }
    }
    Some((edges, community, m))
}

/// Generates a network and its planted partition. Fully determined by the
/// configuration, seed included.
pub fn generate(config: &GeneratorConfig) -> Result<GeneratedNetwork> {
    const ATTEMPTS: usize = 50;
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for attempt_no in 1..=ATTEMPTS {
        let mut report = GenerationReport {
            attempts: attempt_no,
            ..GenerationReport::default()
        };
        if let Some((edges, community, m)) = attempt(config, &mut rng, &mut report) {
            let expected = edges.len();
            let graph = Graph::from_edges(config.n, edges)?;
            debug_assert_eq!(graph.edge_count(), expected, "generated graph must be simple");
            report.community_count = m;
            return Ok(GeneratedNetwork {
                graph,
                partition: Partition::with_count(community, m)?,
                report,
            });
        }
    }
    Err(Error::Infeasible(format!(
        "could not place every node in a community larger than its internal degree after {ATTEMPTS} attempts \
         (mu = {}, max degree = {}, community sizes [{}, {}])",
        config.mu, config.max_degree, config.min_community, config.max_community
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationChecks {
    pub mean_degree: bool,
    pub max_degree: bool,
    pub mixing: bool,
    pub no_empty_community: bool,
    pub community_sizes: bool,
    pub simple: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    /// Discrete power-law MLE over degrees at or above the configured cutoff.
    pub degree_exponent: Option<f64>,
    /// Community size → number of communities of that size.
    pub community_size_histogram: BTreeMap<usize, usize>,
    pub smallest_community: usize,
    pub mixing: f64,
    pub mixing_target: f64,
    pub checks: ValidationChecks,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerances {
    /// Relative tolerance on the mean degree.
    pub mean_degree: f64,
    /// Absolute tolerance on the realized mixing parameter.
    pub mixing: f64,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        ValidationTolerances {
            mean_degree: 0.05,
            mixing: 0.05,
        }
    }
}

pub fn validate(graph: &Graph, partition: &Partition, config: &GeneratorConfig) -> Result<ValidationReport> {
    validate_with(graph, partition, config, &ValidationTolerances::default())
}

pub fn validate_with(
    graph: &Graph,
    partition: &Partition,
    config: &GeneratorConfig,
    tolerances: &ValidationTolerances,
) -> Result<ValidationReport> {
    partition.check_covers(graph)?;
    let n = graph.node_count();
    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mean_degree = degrees.iter().sum::<usize>() as f64 / n.max(1) as f64;
    let max_degree = degrees.iter().copied().max().unwrap_or(0);

    let cutoff = lower_cutoff_for_mean(config.gamma, config.avg_degree, config.max_degree as f64);
    let kmin = cutoff.round().max(1.0);
    let tail: Vec<f64> = degrees.iter().map(|&k| k as f64).filter(|&k| k >= kmin).collect();
    let log_sum: f64 = tail.iter().map(|k| (k / (kmin - 0.5)).ln()).sum();
    let degree_exponent = (log_sum > 0.0).then(|| 1.0 + tail.len() as f64 / log_sum);

    let sizes = partition.sizes();
    let mut community_size_histogram = BTreeMap::new();
    for &s in &sizes {
        *community_size_histogram.entry(s).or_insert(0) += 1;
    }
    let smallest_community = sizes.iter().copied().min().unwrap_or(0);
    let mixing = global_mixing(graph, partition, MixingEstimator::NodeAverage).unwrap_or(0.0);

    let checks = ValidationChecks {
        mean_degree: (mean_degree - config.avg_degree).abs() <= tolerances.mean_degree * config.avg_degree,
        max_degree: max_degree <= config.max_degree,
        mixing: (mixing - config.mu).abs() <= tolerances.mixing,
        no_empty_community: sizes.iter().all(|&s| s > 0),
        community_sizes: sizes
            .iter()
            .all(|&s| s + 1 >= config.min_community && s <= config.max_community),
        simple: graph.edges().all(|(u, v)| u != v),
    };
    let pass = checks.mean_degree
        && checks.max_degree
        && checks.mixing
        && checks.no_empty_community
        && checks.community_sizes
        && checks.simple;
    Ok(ValidationReport {
        nodes: n,
        edges: graph.edge_count(),
        mean_degree,
        max_degree,
        degree_exponent,
        community_size_histogram,
        smallest_community,
        mixing,
        mixing_target: config.mu,
        checks,
        pass,
    })
}
