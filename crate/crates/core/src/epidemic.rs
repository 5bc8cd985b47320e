//! Discrete-time SIR spreading from top-ranked seeds.
//!
//! Updates are synchronous: within a step every node infected at the start
//! of the step contacts its susceptible neighbors, infections made during the
//! step become active at the next one, and then each of the step's infected
//! nodes recovers with probability `sigma`. A run ends when nobody is
//! infected.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::centrality::CentralityKind;
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::ranking::{Ranker, Ranking, RankingStrategy};

/// `<k> / (<k²> − <k>)`.
pub fn epidemic_threshold(graph: &Graph) -> Result<f64> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let (sum, sum_sq) = (0..n).fold((0.0, 0.0), |(s, q), v| {
        let k = graph.degree(v) as f64;
        (s + k, q + k * k)
    });
    let first = sum / n as f64;
    let second = sum_sq / n as f64;
    if second <= first {
        return Err(Error::ThresholdUndefined { first, second });
    }
    Ok(first / (second - first))
}

/// How an infected node reaches its susceptible neighbors in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactModel {
    /// Every susceptible neighbor is contacted independently.
    PerNeighbor,
    /// One susceptible neighbor, chosen uniformly, is contacted.
    #[default]
    SingleNeighbor,
}

impl FromStr for ContactModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-neighbor" => Ok(ContactModel::PerNeighbor),
            "single-neighbor" => Ok(ContactModel::SingleNeighbor),
            _ => Err(Error::UnknownName {
                what: "contact model",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for ContactModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContactModel::PerNeighbor => "per-neighbor",
            ContactModel::SingleNeighbor => "single-neighbor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Susceptible,
    Infected,
    Recovered,
}

/// Compartment sizes after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub susceptible: usize,
    pub infected: usize,
    pub recovered: usize,
}

/// Runs one outbreak, calling `observe` with the compartment sizes at t = 0
/// and after every step. Returns the number of recovered nodes at
/// absorption, seeds excluded.
pub fn sir_trajectory<R: Rng>(
    graph: &Graph,
    seeds: &[usize],
    alpha: f64,
    sigma: f64,
    contact: ContactModel,
    rng: &mut R,
    mut observe: impl FnMut(Census),
) -> usize {
    let n = graph.node_count();
    let mut state = vec![State::Susceptible; n];
    let mut infected: Vec<usize> = seeds.to_vec();
    // Canonical order: equal seed sets consume randomness identically.
    infected.sort_unstable();
    infected.dedup();
    for &s in &infected {
        state[s] = State::Infected;
    }
    let n_seeds = infected.len();
    let mut census = Census {
        susceptible: n - n_seeds,
        infected: n_seeds,
        recovered: 0,
    };
    observe(census);
    let mut next = Vec::new();
    let mut candidates = Vec::new();
    while !infected.is_empty() {
        let mut newly = 0;
        for &v in &infected {
            match contact {
                ContactModel::PerNeighbor => {
                    for &u in graph.neighbors(v) {
                        if state[u] == State::Susceptible && rng.random::<f64>() < alpha {
                            state[u] = State::Infected;
                            next.push(u);
                            newly += 1;
                        }
                    }
                }
                ContactModel::SingleNeighbor => {
                    candidates.clear();
                    candidates.extend(graph.neighbors(v).iter().copied().filter(|&u| state[u] == State::Susceptible));
                    if !candidates.is_empty() {
                        let u = candidates[rng.random_range(0..candidates.len())];
                        if rng.random::<f64>() < alpha {
                            state[u] = State::Infected;
                            next.push(u);
                            newly += 1;
                        }
                    }
                }
            }
        }
        let mut recovered_now = 0;
        for &v in &infected {
            if rng.random::<f64>() < sigma {
                state[v] = State::Recovered;
                recovered_now += 1;
            } else {
                next.push(v);
            }
        }
        census.susceptible -= newly;
        census.infected = census.infected + newly - recovered_now;
        census.recovered += recovered_now;
        observe(census);
        std::mem::swap(&mut infected, &mut next);
        next.clear();
    }
    census.recovered - n_seeds
}

pub fn sir_run<R: Rng>(graph: &Graph, seeds: &[usize], alpha: f64, sigma: f64, contact: ContactModel, rng: &mut R) -> usize {
    sir_trajectory(graph, seeds, alpha, sigma, contact, rng, |_| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SirConfig {
    pub alpha: f64,
    pub sigma: f64,
    pub f0: f64,
    pub runs: usize,
    pub seed: u64,
    pub contact: ContactModel,
}

impl Default for SirConfig {
    fn default() -> Self {
        SirConfig {
            alpha: 0.1,
            sigma: 0.1,
            f0: 0.05,
            runs: 200,
            seed: 0,
            contact: ContactModel::SingleNeighbor,
        }
    }
}

impl SirConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x <= 1.0;
        if !unit(self.alpha) {
            return Err(Error::InvalidConfig(format!("alpha {} not in (0, 1]", self.alpha)));
        }
        if !unit(self.sigma) {
            return Err(Error::InvalidConfig(format!("sigma {} not in (0, 1]", self.sigma)));
        }
        if !(self.f0 > 0.0 && self.f0 < 1.0) {
            return Err(Error::InvalidConfig(format!("f0 {} not in (0, 1)", self.f0)));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        Ok(())
    }

    /// `⌈|V|·f0⌉`, guarding against products like 1000·0.06 landing just
    /// above an integer.
    pub fn seed_count(&self, node_count: usize) -> Result<usize> {
        let raw = node_count as f64 * self.f0;
        if raw < 1.0 - 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "f0 = {} selects {raw:.3} of {node_count} nodes, fewer than one",
                self.f0
            )));
        }
        Ok(((raw - 1e-9).ceil() as usize).min(node_count))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirOutcome {
    pub r_av: f64,
    /// Sample standard deviation; 0 for a single run.
    pub r_dev: f64,
    pub recovered: Vec<usize>,
}

impl SirOutcome {
    pub fn from_counts(recovered: Vec<usize>) -> Self {
        let n = recovered.len() as f64;
        let r_av = recovered.iter().sum::<usize>() as f64 / n;
        let r_dev = if recovered.len() > 1 {
            let ss: f64 = recovered.iter().map(|&r| (r as f64 - r_av).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        SirOutcome { r_av, r_dev, recovered }
    }

    pub fn standard_error(&self) -> f64 {
        self.r_dev / (self.recovered.len() as f64).sqrt()
    }
}

/// RNG for run `run` of a batch seeded with `seed`: one ChaCha stream per run.
pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// Simulates `config.runs` outbreaks from an explicit seed set.
pub fn sir_batch(graph: &Graph, seeds: &[usize], config: &SirConfig) -> SirOutcome {
    let counts = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(config.seed, run);
            sir_run(graph, seeds, config.alpha, config.sigma, config.contact, &mut rng)
        })
        .collect();
    SirOutcome::from_counts(counts)
}

/// Seeds the top `⌈|V|·f0⌉` nodes of `ranking` and aggregates the runs.
pub fn sir_evaluate(graph: &Graph, ranking: &Ranking, config: &SirConfig) -> Result<SirOutcome> {
    config.validate()?;
    let k = config.seed_count(graph.node_count())?;
    Ok(sir_batch(graph, ranking.top(k), config))
}

/// `(R_m − R_s) / R_s` on mean outbreak sizes.
pub fn delta_r(outcome_m: &SirOutcome, outcome_s: &SirOutcome) -> Result<f64> {
    if outcome_s.r_av <= 0.0 {
        return Err(Error::EmptyReference);
    }
    Ok((outcome_m.r_av - outcome_s.r_av) / outcome_s.r_av)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub strategy: RankingStrategy,
    pub kind: CentralityKind,
    pub f0: f64,
    pub r_av: f64,
    pub r_dev: f64,
    /// Against the standard ranking of the same kind at the same `f0`.
    pub delta_r: f64,
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "strategy,kind,f0,r_av,r_dev,delta_r")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.strategy, r.kind, r.f0, r.r_av, r.r_dev, r.delta_r)?;
    }
    Ok(())
}

/// Δr table over an `f0` grid for one centrality kind. The standard ranking
/// is always evaluated as the reference and listed first at every `f0`.
pub fn sweep(
    graph: &Graph,
    partition: Option<&Partition>,
    kind: CentralityKind,
    strategies: &[RankingStrategy],
    f0_grid: &[f64],
    config: &SirConfig,
) -> Result<Vec<SweepRow>> {
    let ranker = Ranker::new(graph, partition, kind)?;
    sweep_with(graph, &ranker, strategies, f0_grid, config)
}

pub fn sweep_with(
    graph: &Graph,
    ranker: &Ranker,
    strategies: &[RankingStrategy],
    f0_grid: &[f64],
    config: &SirConfig,
) -> Result<Vec<SweepRow>> {
    if f0_grid.is_empty() {
        return Err(Error::InvalidConfig("empty f0 grid".into()));
    }
    let mut ordered = vec![RankingStrategy::Standard];
    for &s in strategies {
        if !ordered.contains(&s) {
            ordered.push(s);
        }
    }
    let rankings = ordered
        .iter()
        .map(|&s| ranker.rank(s))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for &f0 in f0_grid {
        let cfg = SirConfig { f0, ..*config };
        cfg.validate()?;
        let k = cfg.seed_count(graph.node_count())?;
        // Outcomes depend only on the seed set, so equal sets share a batch.
        let mut cache: HashMap<Vec<usize>, SirOutcome> = HashMap::new();
        let mut outcomes = Vec::with_capacity(rankings.len());
        for ranking in &rankings {
            let mut key = ranking.top(k).to_vec();
            key.sort_unstable();
            let outcome = cache
                .entry(key)
                .or_insert_with_key(|seeds| sir_batch(graph, seeds, &cfg))
                .clone();
            outcomes.push(outcome);
        }
        let reference = &outcomes[0];
        for (strategy, outcome) in ordered.iter().zip(&outcomes) {
            rows.push(SweepRow {
                strategy: *strategy,
                kind: ranker.kind,
                f0,
                r_av: outcome.r_av,
                r_dev: outcome.r_dev,
                delta_r: delta_r(outcome, reference)?,
            });
        }
    }
    Ok(rows)
}
