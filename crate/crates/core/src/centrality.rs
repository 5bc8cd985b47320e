//! Degree, Betweenness, Closeness and Eigenvector centrality over a whole
//! graph or over the connected components of a [`SubgraphView`].
//!
//! Every measure is computed independently inside each connected component of
//! the scope. Nodes outside the scope score exactly 0.
//!
//! [`SubgraphView`]: crate::graph::SubgraphView

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CentralityKind {
    Degree,
    Betweenness,
    Closeness,
    Eigenvector,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 4] = [
        CentralityKind::Degree,
        CentralityKind::Betweenness,
        CentralityKind::Closeness,
        CentralityKind::Eigenvector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Eigenvector => "eigenvector",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for CentralityKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for CentralityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CentralityKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                what: "centrality kind",
                value: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    WholeGraph,
    PerComponent,
}

/// Per-node centrality scores over the parent graph's id space.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub scope: Scope,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.scores[v]
    }

    /// CSV with header `node,score`, rows in node-id order.
    pub fn write_csv<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        writeln!(out, "node,score")?;
        for (v, s) in self.scores.iter().enumerate() {
            writeln!(out, "{},{}", graph.label(v), s)?;
        }
        Ok(())
    }
}

/// Power-iteration controls for [`eigenvector`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

fn scope_of<T: Topology>(topology: &T) -> Scope {
    if (0..topology.node_count()).all(|v| topology.contains(v))
        && topology.components().count() <= 1
    {
        Scope::WholeGraph
    } else {
        Scope::PerComponent
    }
}

pub fn compute<T: Topology>(kind: CentralityKind, topology: &T, eigen: &EigenOptions) -> Result<ScoreVector> {
    Ok(match kind {
        CentralityKind::Degree => degree(topology),
        CentralityKind::Betweenness => betweenness(topology),
        CentralityKind::Closeness => closeness(topology),
        CentralityKind::Eigenvector => eigenvector(topology, eigen)?,
    })
}

pub fn degree<T: Topology>(topology: &T) -> ScoreVector {
    let scores = (0..topology.node_count())
        .map(|v| {
            if topology.contains(v) {
                topology.neighbors(v).count() as f64
            } else {
                0.0
            }
        })
        .collect();
    ScoreVector {
        scores,
        scope: scope_of(topology),
    }
}

struct BrandesBuffers {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    stack: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesBuffers {
    fn new(n: usize) -> Self {
        BrandesBuffers {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            stack: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Accumulates the dependencies of source `s` into `acc`.
    fn accumulate<T: Topology>(&mut self, topology: &T, s: usize, acc: &mut [f64]) {
        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let dv = self.dist[v];
            for w in topology.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == dv + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        // Predecessors are the neighbors one level closer to the source.
        for &w in self.stack.iter().rev() {
            let dw = self.dist[w];
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for v in topology.neighbors(w) {
                if self.dist[v] == dw - 1 {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
        for &v in &self.stack {
            self.dist[v] = -1;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        self.stack.clear();
    }
}

/// Unnormalized shortest-path betweenness, each unordered pair counted once.
pub fn betweenness<T: Topology>(topology: &T) -> ScoreVector {
    let n = topology.node_count();
    let sources: Vec<usize> = (0..n).filter(|&v| topology.contains(v)).collect();
    // Fixed chunking keeps the floating-point reduction order independent of
    // the worker count.
    let chunk = (sources.len() / 256).max(32);
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(chunk)
        .map(|chunk| {
            let mut buffers = BrandesBuffers::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                buffers.accumulate(topology, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut scores = vec![0.0; n];
    for partial in &partials {
        for (s, p) in scores.iter_mut().zip(partial) {
            *s += p;
        }
    }
    for s in &mut scores {
        *s /= 2.0;
    }
    ScoreVector {
        scores,
        scope: scope_of(topology),
    }
}

fn distance_sum<T: Topology>(topology: &T, source: usize, dist: &mut [i64], queue: &mut VecDeque<usize>, seen: &mut Vec<usize>) -> u64 {
    dist[source] = 0;
    queue.push_back(source);
    let mut total = 0u64;
    while let Some(v) = queue.pop_front() {
        seen.push(v);
        total += dist[v] as u64;
        for w in topology.neighbors(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    for &v in seen.iter() {
        dist[v] = -1;
    }
    seen.clear();
    total
}

/// `1 / Σ d(v, u)` over the other nodes of `v`'s component; 0 when `v` has no
/// reachable peer.
pub fn closeness<T: Topology>(topology: &T) -> ScoreVector {
    let n = topology.node_count();
    let scores = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![-1i64; n], VecDeque::new(), Vec::new()),
            |(dist, queue, seen), v| {
                if !topology.contains(v) {
                    return 0.0;
                }
                match distance_sum(topology, v, dist, queue, seen) {
                    0 => 0.0,
                    total => 1.0 / total as f64,
                }
            },
        )
        .collect();
    ScoreVector {
        scores,
        scope: scope_of(topology),
    }
}

/// Eigenvector of one connected component by power iteration on `A + I`.
///
/// The shift leaves the eigenvectors of `A` unchanged and moves the bottom of
/// the spectrum of bipartite components away from `-λ`, so the iteration does
/// not oscillate. The result is scaled so its largest entry is 1.
fn component_eigenvector(adjacency: &[Vec<usize>], options: &EigenOptions) -> Result<Vec<f64>> {
    let n = adjacency.len();
    let mut x = vec![1.0; n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..options.max_iter {
        for (i, row) in adjacency.iter().enumerate() {
            ax[i] = row.iter().map(|&j| x[j]).sum();
        }
        let xx: f64 = x.iter().map(|v| v * v).sum();
        let lambda = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>() / xx;
        let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        residual = x
            .iter()
            .zip(&ax)
            .fold(0.0f64, |m, (xi, axi)| m.max((axi - lambda * xi).abs()));
        if residual < options.tol * x_norm {
            let scale = x.iter().fold(0.0f64, |m, v| m.max(*v));
            return Ok(x.iter().map(|v| (v / scale).max(0.0)).collect());
        }
        let mut peak = 0.0f64;
        for (xi, axi) in x.iter_mut().zip(&ax) {
            *xi += axi;
            peak = peak.max(xi.abs());
        }
        for xi in &mut x {
            *xi /= peak;
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iter,
        residual,
    })
}

/// Dominant adjacency eigenvector of every component, max entry 1 per
/// component. Single-node components score 0.
pub fn eigenvector<T: Topology>(topology: &T, options: &EigenOptions) -> Result<ScoreVector> {
    let n = topology.node_count();
    let members = topology.components().members();
    let mut local_index = vec![usize::MAX; n];
    for comp in &members {
        for (i, &v) in comp.iter().enumerate() {
            local_index[v] = i;
        }
    }
    let solved: Vec<Result<Vec<f64>>> = members
        .par_iter()
        .map(|comp| {
            if comp.len() < 2 {
                return Ok(vec![0.0; comp.len()]);
            }
            let adjacency: Vec<Vec<usize>> = comp
                .iter()
                .map(|&v| topology.neighbors(v).map(|u| local_index[u]).collect())
                .collect();
            component_eigenvector(&adjacency, options)
        })
        .collect();
    let mut scores = vec![0.0; n];
    for (comp, values) in members.iter().zip(solved) {
        for (&v, x) in comp.iter().zip(values?) {
            scores[v] = x;
        }
    }
    Ok(ScoreVector {
        scores,
        scope: scope_of(topology),
    })
}
