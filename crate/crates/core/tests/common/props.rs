//! Every structural invariant of the library as a deterministic check.
//! Individual test targets call these one by one; the acceptance target runs
//! the whole registry.

use std::collections::HashSet;
use std::process::Command;

use modcent::centrality::{self, CentralityKind, EigenOptions};
use modcent::community::{global_mixing, louvain, modularity, CommunityStats, LouvainOptions, MixingEstimator};
use modcent::epidemic::{run_rng, sir_batch, sir_evaluate, sir_trajectory, Census, ContactModel, SirConfig};
use modcent::generator::{generate, validate, GeneratorConfig};
use modcent::graph::{connected_components, load_edge_list, write_edge_list, EdgeListOptions, SubgraphView, Topology};
use modcent::modular::{modular_centrality, ModularCentrality};
use modcent::ranking::{rank_modular, Ranker, Ranking, RankingStrategy};
use modcent::{Graph, Partition};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::oracles;
use super::{check, partitioned_graph, permute_graph, permute_partition, random_graph, Partitioned};

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const ALL: &[Property] = &[
    ("graph: simple, symmetric, dense ids", graph_is_simple_and_symmetric),
    ("graph: partition covers with dense ids", partition_is_covering),
    ("graph: views keep parent edges between retained nodes", view_edges_are_parent_edges),
    ("graph: local and global edges split the graph", local_global_split),
    ("graph: view membership", view_membership),
    ("graph: component labels match union-find", components_match_union_find),
    ("graph: load after serialize is identity", load_serialize_round_trip),
    ("community: louvain modularity has no drift", louvain_modularity_matches),
    ("community: louvain is a local maximum", louvain_local_maximum),
    ("community: mixing invariant under relabeling", mixing_relabel_invariance),
    ("community: summaries in range, internal sums even", community_summary_ranges),
    ("centrality: betweenness matches brute force", betweenness_matches_oracle),
    ("centrality: closeness and betweenness relabel invariance", centrality_relabel_invariance),
    ("centrality: eigenvector residual", eigenvector_residual),
    ("centrality: view equals extracted component", view_copy_equivalence),
    ("centrality: scores finite, non-negative, zero outside scope", score_vector_ranges),
    ("modular: degree additivity", degree_additivity),
    ("modular: components equal isolated subgraph measures", modular_literal_contract),
    ("modular: degeneration to one community and to singletons", modular_degeneration),
    ("modular: community relabeling leaves scores unchanged", modular_relabel_invariance),
    ("modular: no inter link means zero global score", global_zero_without_bridges),
    ("ranking: scale invariance", ranking_scale_invariance),
    ("ranking: tangent per-node scale invariance", tangent_node_scale_invariance),
    ("ranking: deterministic total order", ranking_total_order),
    ("epidemic: monotone in alpha", sir_monotone_in_alpha),
    ("epidemic: compartments conserve nodes", sir_conservation),
    ("epidemic: runs reproduce", sir_reproducibility),
    ("epidemic: outbreak stays in seed components", sir_bounded_by_components),
    ("epidemic: outcome ranges", sir_outcome_ranges),
    ("generator: partition covers, sizes respected", generator_partition),
    ("generator: simple graph", generator_simple),
    ("generator: even stub pools", generator_parity),
    ("cli: manifest reruns reproduce outputs", cli_manifest_reproduces),
    ("cli: exit codes", cli_exit_codes),
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn with_perm(max_n: usize, max_k: usize) -> impl Strategy<Value = (Partitioned, Vec<usize>)> {
    partitioned_graph(max_n, max_k).prop_flat_map(|pg| {
        let n = pg.graph.n;
        (Just(pg), perm_strategy(n))
    })
}

fn views<'g>(g: &'g Graph, p: &'g Partition) -> [SubgraphView<'g>; 2] {
    [SubgraphView::local(g, p).unwrap(), SubgraphView::global(g, p).unwrap()]
}

// graph

pub fn graph_is_simple_and_symmetric() -> Result<(), String> {
    let noisy = (1usize..30).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..80)));
    check(128, noisy, |(n, edges)| {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        ensure(g.node_count() == n, || "node count".into())?;
        let mut seen = HashSet::new();
        for u in 0..n {
            for &v in g.neighbors(u) {
                ensure(v < n, || "id out of range".into())?;
                ensure(u != v, || format!("self-loop at {u}"))?;
                ensure(seen.insert((u, v)), || format!("duplicate {u}-{v}"))?;
                ensure(g.neighbors(v).contains(&u), || format!("asymmetric {u}-{v}"))?;
            }
        }
        let expected: HashSet<(usize, usize)> =
            edges.iter().filter(|(u, v)| u != v).map(|&(u, v)| (u.min(v), u.max(v))).collect();
        ensure(g.edge_count() == expected.len(), || "edge count".into())
    })
}

pub fn partition_is_covering() -> Result<(), String> {
    check(128, partitioned_graph(30, 6), |pg| {
        let p = pg.partition();
        let g = pg.graph.graph();
        ensure(p.check_covers(&g).is_ok(), || "does not cover".into())?;
        ensure(p.community_count() >= 1, || "no communities".into())?;
        let used: HashSet<usize> = p.assignment().iter().copied().collect();
        ensure(used == (0..p.community_count()).collect(), || "ids not dense".into())
    })
}

pub fn view_edges_are_parent_edges() -> Result<(), String> {
    check(128, partitioned_graph(25, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        for view in views(&g, &p) {
            let retained: HashSet<usize> = view.retained_nodes().collect();
            for (u, v) in view.edges() {
                ensure(g.has_edge(u, v), || format!("{u}-{v} not in parent"))?;
                ensure(retained.contains(&u) && retained.contains(&v), || format!("{u}-{v} endpoint dropped"))?;
            }
        }
        Ok(())
    })
}

pub fn local_global_split() -> Result<(), String> {
    check(128, partitioned_graph(25, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let [local, global] = views(&g, &p);
        let l: HashSet<(usize, usize)> = local.edges().collect();
        let gl: HashSet<(usize, usize)> = global.edges().collect();
        let all: HashSet<(usize, usize)> = g.edges().collect();
        ensure(l.is_disjoint(&gl), || "views share an edge".into())?;
        ensure(l.union(&gl).copied().collect::<HashSet<_>>() == all, || "union differs from the graph".into())
    })
}

pub fn view_membership() -> Result<(), String> {
    check(128, partitioned_graph(25, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let [local, global] = views(&g, &p);
        ensure(local.retained_count() == g.node_count(), || "local view lost nodes".into())?;
        for v in 0..g.node_count() {
            let bridge = g.neighbors(v).iter().any(|&u| p.community(u) != p.community(v));
            ensure(global.contains(v) == bridge, || format!("global membership of {v}"))?;
        }
        Ok(())
    })
}

pub fn components_match_union_find() -> Result<(), String> {
    check(128, partitioned_graph(30, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let whole = connected_components(&g);
        let uf = oracles::union_find(g.node_count(), g.edges());
        for u in 0..g.node_count() {
            for v in 0..g.node_count() {
                ensure((whole.label(u) == whole.label(v)) == (uf[u] == uf[v]), || format!("whole graph {u},{v}"))?;
            }
        }
        for view in views(&g, &p) {
            let comps = view.component_labels();
            let uf = oracles::union_find(g.node_count(), view.edges());
            for u in 0..g.node_count() {
                ensure(comps.label(u).is_some() == view.contains(u), || format!("label presence {u}"))?;
                for v in 0..g.node_count() {
                    if view.contains(u) && view.contains(v) {
                        ensure((comps.label(u) == comps.label(v)) == (uf[u] == uf[v]), || format!("view {u},{v}"))?;
                    }
                }
            }
        }
        Ok(())
    })
}

pub fn load_serialize_round_trip() -> Result<(), String> {
    check(128, random_graph(40), |rg| {
        let g = rg.graph();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        if g.edge_count() == 0 {
            return ensure(buf.is_empty(), || "edgeless graph wrote edges".into());
        }
        let (back, report) = load_edge_list(&buf[..], &EdgeListOptions::default()).unwrap();
        // Isolated nodes have no edge line, so compare on the non-isolated core.
        let core: Vec<usize> = (0..g.node_count()).filter(|&v| g.degree(v) > 0).collect();
        let (expected, _) = g.induced_subgraph(&core);
        ensure(report.dropped() == 0, || "round trip dropped records".into())?;
        ensure(back.node_count() == expected.node_count(), || "node count".into())?;
        ensure(back.edges().eq(expected.edges()), || "edges differ".into())?;
        let relabeled = (0..core.len()).all(|i| back.label(i) == expected.label(i));
        ensure(relabeled, || "labels differ".into())?;
        if core.len() == g.node_count() {
            let mut again = Vec::new();
            write_edge_list(&back, &mut again).unwrap();
            ensure(again == buf, || "second serialization differs".into())?;
        }
        Ok(())
    })
}

// community

fn louvain_inputs() -> impl Strategy<Value = (super::RandomGraph, u64)> {
    (random_graph(60), any::<u64>())
}

pub fn louvain_modularity_matches() -> Result<(), String> {
    check(64, louvain_inputs(), |(rg, seed)| {
        let g = rg.graph();
        let opts = LouvainOptions { seed, ..LouvainOptions::default() };
        let r = louvain(&g, &opts).unwrap();
        if g.edge_count() == 0 {
            // Modularity is undefined without edges; the result is the singleton split.
            return ensure(r.modularity == 0.0 && r.partition == Partition::singletons(g.node_count()), || "edgeless".into());
        }
        let q = modularity(&g, &r.partition).unwrap();
        ensure((q - r.modularity).abs() <= 1e-9, || format!("tracked {} vs recomputed {q}", r.modularity))?;
        let singletons = modularity(&g, &Partition::singletons(g.node_count())).unwrap();
        ensure(q >= singletons - 1e-12, || "worse than singletons".into())?;
        let again = louvain(&g, &opts).unwrap();
        ensure(again.partition == r.partition, || "not deterministic".into())
    })
}

/// Exhaustively tries every move of one node into an adjacent community.
pub fn single_moves_do_not_improve(g: &Graph, p: &Partition) -> Result<(), String> {
    if g.edge_count() == 0 {
        return Ok(());
    }
    let q = modularity(g, p).unwrap();
    let mut assignment = p.assignment().to_vec();
    for v in 0..g.node_count() {
        let own = assignment[v];
        let targets: HashSet<usize> = g.neighbors(v).iter().map(|&u| assignment[u]).filter(|&c| c != own).collect();
        for c in targets {
            assignment[v] = c;
            let moved = Partition::with_count(assignment.clone(), p.community_count()).unwrap();
            let q2 = modularity(g, &moved).unwrap();
            if q2 > q + 1e-10 {
                return Err(format!("moving {v} from {own} to {c} raises Q from {q} to {q2}"));
            }
        }
        assignment[v] = own;
    }
    Ok(())
}

pub fn louvain_local_maximum() -> Result<(), String> {
    check(48, louvain_inputs(), |(rg, seed)| {
        let g = rg.graph();
        let r = louvain(&g, &LouvainOptions { seed, ..LouvainOptions::default() }).unwrap();
        single_moves_do_not_improve(&g, &r.partition).map_err(TestCaseError::fail)
    })?;
    for seed in 0..3 {
        let (g, _) = super::planted(&[50, 50, 50, 50], 0.1, 0.02, seed);
        let r = louvain(&g, &LouvainOptions { seed, ..LouvainOptions::default() }).unwrap();
        single_moves_do_not_improve(&g, &r.partition)?;
    }
    Ok(())
}

pub fn mixing_relabel_invariance() -> Result<(), String> {
    check(128, with_perm(30, 6), |(pg, perm)| {
        let g = pg.graph.graph();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let p = pg.partition();
        let k = p.community_count();
        let comm_perm: Vec<usize> = (0..k).rev().collect();
        let g2 = permute_graph(&g, &perm);
        let p2 = permute_partition(&p.relabel(&comm_perm).unwrap(), &perm);
        for est in [MixingEstimator::NodeAverage, MixingEstimator::EdgeFraction] {
            let a = global_mixing(&g, &p, est).unwrap();
            let b = global_mixing(&g2, &p2, est).unwrap();
            ensure(close(a, b, 1e-12), || format!("{est:?}: {a} vs {b}"))?;
        }
        Ok(())
    })
}

pub fn community_summary_ranges() -> Result<(), String> {
    check(128, partitioned_graph(30, 6), |pg| {
        let g = pg.graph.graph();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let stats = CommunityStats::compute(&g, &pg.partition()).unwrap();
        ensure((0.0..=1.0).contains(&stats.mixing), || "network mixing out of range".into())?;
        for c in &stats.communities {
            ensure((0.0..=1.0).contains(&c.mixing), || "community mixing out of range".into())?;
            ensure(c.internal_degree_sum % 2 == 0, || "odd internal degree sum".into())?;
        }
        Ok(())
    })
}

// centrality

pub fn betweenness_matches_oracle() -> Result<(), String> {
    check(200, random_graph(10), |rg| {
        let g = rg.graph();
        let got = centrality::betweenness(&g).scores;
        let want = oracles::betweenness(&oracles::dense(rg.n, rg.edges.iter().copied()));
        for v in 0..rg.n {
            ensure((got[v] - want[v]).abs() < 1e-9, || format!("node {v}: {} vs {}", got[v], want[v]))?;
        }
        Ok(())
    })
}

pub fn centrality_relabel_invariance() -> Result<(), String> {
    let s = random_graph(25).prop_flat_map(|rg| {
        let n = rg.n;
        (Just(rg), perm_strategy(n))
    });
    check(128, s, |(rg, perm)| {
        let g = rg.graph();
        let g2 = permute_graph(&g, &perm);
        let pairs = [
            (centrality::betweenness(&g).scores, centrality::betweenness(&g2).scores),
            (centrality::closeness(&g).scores, centrality::closeness(&g2).scores),
        ];
        for (a, b) in pairs {
            for v in 0..rg.n {
                ensure(close(a[v], b[perm[v]], 1e-12), || format!("node {v}: {} vs {}", a[v], b[perm[v]]))?;
            }
        }
        Ok(())
    })
}

fn residual_ok(g: &Graph, scores: &[f64], nodes: &[usize], tol: f64) -> bool {
    if nodes.len() < 2 {
        return nodes.iter().all(|&v| scores[v] == 0.0);
    }
    let ax: Vec<f64> = nodes.iter().map(|&v| g.neighbors(v).iter().map(|&u| scores[u]).sum()).collect();
    let num: f64 = nodes.iter().zip(&ax).map(|(&v, a)| a * scores[v]).sum();
    let den: f64 = nodes.iter().map(|&v| scores[v] * scores[v]).sum();
    let lambda = num / den;
    let res = nodes.iter().zip(&ax).map(|(&v, a)| (a - lambda * scores[v]).abs()).fold(0.0, f64::max);
    let xmax = nodes.iter().map(|&v| scores[v].abs()).fold(0.0, f64::max);
    res < tol * xmax
}

pub fn eigenvector_residual() -> Result<(), String> {
    check(96, random_graph(40), |rg| {
        let g = rg.graph();
        let opts = EigenOptions::default();
        let x = centrality::eigenvector(&g, &opts).unwrap().scores;
        for members in connected_components(&g).members() {
            // The stopping rule is applied to the shifted iterate; allow the
            // rescaling to max 1 a little room.
            ensure(residual_ok(&g, &x, &members, 10.0 * opts.tol), || format!("component {members:?}"))?;
            if members.len() > 1 {
                let max = members.iter().map(|&v| x[v]).fold(0.0, f64::max);
                ensure((max - 1.0).abs() < 1e-12, || "not max-normalized".into())?;
            }
        }
        Ok(())
    })
}

pub fn view_copy_equivalence() -> Result<(), String> {
    check(96, partitioned_graph(20, 4), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let eig = EigenOptions::default();
        for view in views(&g, &p) {
            for kind in CentralityKind::ALL {
                let on_view = centrality::compute(kind, &view, &eig).unwrap();
                for c in 0..view.component_labels().count() {
                    let (sub, ids) = view.component_graph(c);
                    let on_copy = centrality::compute(kind, &sub, &eig).unwrap();
                    for (i, &v) in ids.iter().enumerate() {
                        let tol = if kind == CentralityKind::Eigenvector { 1e-8 } else { 1e-12 };
                        ensure(close(on_view.scores[v], on_copy.scores[i], tol), || {
                            format!("{kind} node {v}: view {} copy {}", on_view.scores[v], on_copy.scores[i])
                        })?;
                    }
                }
            }
        }
        Ok(())
    })
}

pub fn score_vector_ranges() -> Result<(), String> {
    check(96, partitioned_graph(25, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let eig = EigenOptions::default();
        let global = SubgraphView::global(&g, &p).unwrap();
        for kind in CentralityKind::ALL {
            let whole = centrality::compute(kind, &g, &eig).unwrap();
            ensure(whole.scores.iter().all(|s| s.is_finite() && *s >= 0.0), || format!("{kind} whole"))?;
            let view = centrality::compute(kind, &global, &eig).unwrap();
            for v in 0..g.node_count() {
                let s = view.scores[v];
                ensure(s.is_finite() && s >= 0.0, || format!("{kind} view {v}"))?;
                ensure(global.contains(v) || s == 0.0, || format!("{kind}: excluded node {v} scored {s}"))?;
            }
        }
        Ok(())
    })
}

// modular

pub fn degree_additivity() -> Result<(), String> {
    check(128, partitioned_graph(30, 6), |pg| {
        let g = pg.graph.graph();
        let m = modular_centrality(&g, &pg.partition(), CentralityKind::Degree).unwrap();
        for (v, s) in m.scores.iter().enumerate() {
            ensure(s.beta_local + s.beta_global == g.degree(v) as f64, || format!("node {v}"))?;
        }
        Ok(())
    })
}

/// β_L against each community's induced subgraph, β_G against each global
/// component's edge set, both computed as standalone graphs.
pub fn modular_literal_contract() -> Result<(), String> {
    check(64, partitioned_graph(18, 4), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let eig = EigenOptions::default();
        for kind in CentralityKind::ALL {
            let m = modular_centrality(&g, &p, kind).unwrap();
            let tol = if kind == CentralityKind::Eigenvector { 1e-8 } else { 1e-12 };
            for members in p.members() {
                let (sub, ids) = g.induced_subgraph(&members);
                let want = centrality::compute(kind, &sub, &eig).unwrap().scores;
                for (i, &v) in ids.iter().enumerate() {
                    ensure(close(m.scores[v].beta_local, want[i], tol), || format!("{kind} local {v}"))?;
                }
            }
            let inter: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| p.community(u) != p.community(v)).collect();
            let bridges: Vec<usize> = (0..g.node_count())
                .filter(|&v| inter.iter().any(|&(a, b)| a == v || b == v))
                .collect();
            let mut index = vec![usize::MAX; g.node_count()];
            for (i, &v) in bridges.iter().enumerate() {
                index[v] = i;
            }
            let trimmed = Graph::from_edges(bridges.len(), inter.iter().map(|&(u, v)| (index[u], index[v]))).unwrap();
            let want = centrality::compute(kind, &trimmed, &eig).unwrap().scores;
            for v in 0..g.node_count() {
                let expected = if index[v] == usize::MAX { 0.0 } else { want[index[v]] };
                ensure(close(m.scores[v].beta_global, expected, tol), || format!("{kind} global {v}"))?;
            }
        }
        Ok(())
    })
}

pub fn modular_degeneration() -> Result<(), String> {
    check(64, random_graph(20), |rg| {
        let g = rg.graph();
        let n = g.node_count();
        let eig = EigenOptions::default();
        let core: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
        let (trimmed, ids) = g.induced_subgraph(&core);
        for kind in CentralityKind::ALL {
            let tol = if kind == CentralityKind::Eigenvector { 1e-8 } else { 1e-12 };
            let standard = centrality::compute(kind, &g, &eig).unwrap().scores;
            let one = modular_centrality(&g, &Partition::single(n), kind).unwrap();
            for v in 0..n {
                ensure(close(one.scores[v].beta_local, standard[v], tol), || format!("{kind} one-community local {v}"))?;
                ensure(one.scores[v].beta_global == 0.0, || format!("{kind} one-community global {v}"))?;
            }
            let on_trimmed = centrality::compute(kind, &trimmed, &eig).unwrap().scores;
            let single = modular_centrality(&g, &Partition::singletons(n), kind).unwrap();
            let mut expected = vec![0.0; n];
            for (i, &v) in ids.iter().enumerate() {
                expected[v] = on_trimmed[i];
            }
            for v in 0..n {
                ensure(single.scores[v].beta_local == 0.0, || format!("{kind} singleton local {v}"))?;
                ensure(close(single.scores[v].beta_global, expected[v], tol), || format!("{kind} singleton global {v}"))?;
            }
        }
        Ok(())
    })
}

pub fn modular_relabel_invariance() -> Result<(), String> {
    check(64, partitioned_graph(20, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let k = p.community_count();
        let map: Vec<usize> = (0..k).map(|c| (c + 1) % k).collect();
        let q = p.relabel(&map).unwrap();
        for kind in CentralityKind::ALL {
            let a = modular_centrality(&g, &p, kind).unwrap();
            let b = modular_centrality(&g, &q, kind).unwrap();
            for v in 0..g.node_count() {
                ensure(
                    a.scores[v].beta_local == b.scores[v].beta_local && a.scores[v].beta_global == b.scores[v].beta_global,
                    || format!("{kind} node {v}"),
                )?;
            }
        }
        Ok(())
    })
}

pub fn global_zero_without_bridges() -> Result<(), String> {
    check(64, partitioned_graph(20, 5), |pg| {
        let g = pg.graph.graph();
        let p = pg.partition();
        for kind in CentralityKind::ALL {
            let m = modular_centrality(&g, &p, kind).unwrap();
            for v in 0..g.node_count() {
                let bridge = g.neighbors(v).iter().any(|&u| p.community(u) != p.community(v));
                if !bridge {
                    ensure(m.scores[v].beta_global == 0.0, || format!("{kind} node {v}"))?;
                    ensure(m.scores[v].global_component.is_none(), || format!("{kind} node {v} component"))?;
                }
            }
        }
        Ok(())
    })
}

// ranking

fn scaled(m: &ModularCentrality, f: impl Fn(usize) -> f64) -> ModularCentrality {
    let mut out = m.clone();
    for (v, s) in out.scores.iter_mut().enumerate() {
        s.beta_local *= f(v);
        s.beta_global *= f(v);
    }
    out
}

const COMBINED: [RankingStrategy; 3] = [RankingStrategy::Modulus, RankingStrategy::Tangent, RankingStrategy::WeightedModular];

pub fn ranking_scale_invariance() -> Result<(), String> {
    // Powers of two scale floating-point values exactly, so even exact ties
    // must survive.
    let s = (partitioned_graph(30, 5), -20i32..20, 0usize..4);
    check(96, s, |(pg, exp, k)| {
        let g = pg.graph.graph();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let p = pg.partition();
        let stats = CommunityStats::compute(&g, &p).unwrap();
        let kind = CentralityKind::ALL[k];
        let m = modular_centrality(&g, &p, kind).unwrap();
        let c = 2f64.powi(exp);
        let m2 = scaled(&m, |_| c);
        for strategy in COMBINED {
            let a = rank_modular(&m, strategy, Some(&stats)).unwrap();
            let b = rank_modular(&m2, strategy, Some(&stats)).unwrap();
            ensure(a.order == b.order, || format!("{strategy} order changed under scale {c}"))?;
        }
        Ok(())
    })
}

pub fn tangent_node_scale_invariance() -> Result<(), String> {
    let s = partitioned_graph(30, 5).prop_flat_map(|pg| {
        let n = pg.graph.n;
        (Just(pg), proptest::collection::vec(-10i32..10, n))
    });
    check(96, s, |(pg, exps)| {
        let g = pg.graph.graph();
        let p = pg.partition();
        let m = modular_centrality(&g, &p, CentralityKind::Closeness).unwrap();
        let m2 = scaled(&m, |v| 2f64.powi(exps[v]));
        let a = rank_modular(&m, RankingStrategy::Tangent, None).unwrap();
        let b = rank_modular(&m2, RankingStrategy::Tangent, None).unwrap();
        for v in 0..g.node_count() {
            ensure(a.scores[v] == b.scores[v], || format!("node {v}: {} vs {}", a.scores[v], b.scores[v]))?;
        }
        Ok(())
    })
}

fn assert_total_order(r: &Ranking, n: usize) -> Result<(), TestCaseError> {
    ensure(r.len() == n, || "length".into())?;
    let mut seen = r.order.clone();
    seen.sort_unstable();
    ensure(seen == (0..n).collect::<Vec<_>>(), || "not a permutation".into())?;
    for w in r.order.windows(2) {
        let (a, b) = (r.scores[w[0]], r.scores[w[1]]);
        ensure(a >= b, || format!("{} before {} out of order", w[0], w[1]))?;
        if a == b && a.is_finite() {
            ensure(w[0] < w[1], || format!("tie {} {} not by id", w[0], w[1]))?;
        }
    }
    Ok(())
}

pub fn ranking_total_order() -> Result<(), String> {
    check(64, (partitioned_graph(25, 5), 0usize..4), |(pg, k)| {
        let g = pg.graph.graph();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let p = pg.partition();
        let kind = CentralityKind::ALL[k];
        let r1 = Ranker::new(&g, Some(&p), kind).unwrap();
        let r2 = Ranker::new(&g, Some(&p), kind).unwrap();
        for strategy in RankingStrategy::ALL {
            let a = r1.rank(strategy).unwrap();
            let b = r2.rank(strategy).unwrap();
            ensure(a == b, || format!("{strategy} not deterministic"))?;
            assert_total_order(&a, g.node_count())?;
        }
        Ok(())
    })
}

// epidemic

fn sir_test_network() -> Graph {
    generate(&GeneratorConfig::benchmark(400, 0.3, 11)).unwrap().graph
}

pub fn sir_monotone_in_alpha() -> Result<(), String> {
    let g = sir_test_network();
    let seeds: Vec<usize> = (0..8).map(|i| i * 37).collect();
    for contact in [ContactModel::PerNeighbor, ContactModel::SingleNeighbor] {
        let outcomes: Vec<_> = [0.05, 0.1, 0.2]
            .iter()
            .map(|&alpha| {
                let cfg = SirConfig { alpha, sigma: 0.1, runs: 600, seed: 5, contact, ..SirConfig::default() };
                sir_batch(&g, &seeds, &cfg)
            })
            .collect();
        for w in outcomes.windows(2) {
            let slack = (w[0].standard_error().powi(2) + w[1].standard_error().powi(2)).sqrt();
            if w[1].r_av + slack < w[0].r_av {
                return Err(format!("{contact}: {} then {} (slack {slack})", w[0].r_av, w[1].r_av));
            }
        }
    }
    Ok(())
}

fn sir_inputs() -> impl Strategy<Value = (super::RandomGraph, Vec<usize>, f64, f64, u64, bool)> {
    random_graph(40).prop_flat_map(|rg| {
        let n = rg.n;
        (
            Just(rg),
            proptest::collection::vec(0..n, 1..=n.min(4)),
            0.0f64..=1.0,
            0.01f64..=1.0,
            any::<u64>(),
            any::<bool>(),
        )
    })
}

fn contact(single: bool) -> ContactModel {
    if single {
        ContactModel::SingleNeighbor
    } else {
        ContactModel::PerNeighbor
    }
}

pub fn sir_conservation() -> Result<(), String> {
    check(128, sir_inputs(), |(rg, seeds, alpha, sigma, seed, single)| {
        let g = rg.graph();
        let mut rng = run_rng(seed, 0);
        let mut ok = true;
        let mut last = None;
        sir_trajectory(&g, &seeds, alpha, sigma, contact(single), &mut rng, |c: Census| {
            ok &= c.susceptible + c.infected + c.recovered == g.node_count();
            last = Some(c);
        });
        ensure(ok, || "population not conserved".into())?;
        ensure(last.is_some_and(|c| c.infected == 0), || "did not absorb".into())
    })
}

pub fn sir_reproducibility() -> Result<(), String> {
    check(64, sir_inputs(), |(rg, seeds, alpha, sigma, seed, single)| {
        let g = rg.graph();
        let trace = |run: usize| {
            let mut rng = run_rng(seed, run);
            let mut steps = Vec::new();
            sir_trajectory(&g, &seeds, alpha, sigma, contact(single), &mut rng, |c| steps.push(c));
            steps
        };
        for run in 0..4 {
            ensure(trace(run) == trace(run), || format!("run {run} differs"))?;
        }
        let cfg = SirConfig { alpha: alpha.max(1e-3), sigma, runs: 16, seed, contact: contact(single), ..SirConfig::default() };
        ensure(sir_batch(&g, &seeds, &cfg) == sir_batch(&g, &seeds, &cfg), || "batch differs".into())
    })
}

pub fn sir_bounded_by_components() -> Result<(), String> {
    check(128, sir_inputs(), |(rg, seeds, alpha, sigma, seed, single)| {
        let g = rg.graph();
        let comps = connected_components(&g);
        let seed_comps: HashSet<Option<usize>> = seeds.iter().map(|&s| comps.label(s)).collect();
        let reach = (0..g.node_count()).filter(|&v| seed_comps.contains(&comps.label(v))).count();
        let distinct: HashSet<usize> = seeds.iter().copied().collect();
        let mut rng = run_rng(seed, 0);
        let r = sir_trajectory(&g, &seeds, alpha, sigma, contact(single), &mut rng, |_| {});
        ensure(r + distinct.len() <= reach, || format!("{r} recovered beyond {reach} reachable"))
    })
}

pub fn sir_outcome_ranges() -> Result<(), String> {
    check(64, (random_graph(30), 1usize..20, any::<u64>()), |(rg, runs, seed)| {
        if rg.n < 2 {
            return Ok(());
        }
        let g = rg.graph();
        let ranking = Ranking::from_scores(RankingStrategy::Standard, centrality::degree(&g).scores, None);
        let cfg = SirConfig { f0: 0.5, runs, seed, ..SirConfig::default() };
        let out = sir_evaluate(&g, &ranking, &cfg).unwrap();
        ensure(out.r_av >= 0.0 && out.r_av <= g.node_count() as f64, || "r_av".into())?;
        ensure(out.r_dev >= 0.0, || "r_dev".into())?;
        ensure(out.recovered.len() == runs, || "run count".into())
    })
}

// generator

fn generator_configs() -> impl Strategy<Value = GeneratorConfig> {
    (200usize..1500, 0.0f64..0.75, any::<u64>()).prop_map(|(n, mu, seed)| GeneratorConfig::benchmark(n, mu, seed))
}

pub fn generator_partition() -> Result<(), String> {
    check(24, generator_configs(), |cfg| {
        let net = generate(&cfg).unwrap();
        ensure(net.partition.check_covers(&net.graph).is_ok(), || "partition does not cover".into())?;
        let smallest = net.partition.sizes().into_iter().min().unwrap();
        ensure(smallest + 1 >= cfg.min_community, || format!("community of size {smallest}"))?;
        let report = validate(&net.graph, &net.partition, &cfg).unwrap();
        ensure(report.smallest_community == smallest, || "smallest community not reported".into())?;
        ensure(report.checks.no_empty_community, || "empty community".into())
    })
}

pub fn generator_simple() -> Result<(), String> {
    check(24, generator_configs(), |cfg| {
        let net = generate(&cfg).unwrap();
        let g = &net.graph;
        let mut seen = HashSet::new();
        for u in 0..g.node_count() {
            for &v in g.neighbors(u) {
                ensure(u != v, || format!("self-loop at {u}"))?;
                ensure(seen.insert((u, v)), || format!("multi-edge {u}-{v}"))?;
            }
        }
        Ok(())
    })
}

pub fn generator_parity() -> Result<(), String> {
    check(24, generator_configs(), |cfg| {
        let net = generate(&cfg).unwrap();
        let r = &net.report;
        ensure(r.internal_stub_sums.len() == net.partition.community_count(), || "one sum per community".into())?;
        ensure(r.internal_stub_sums.iter().all(|s| s % 2 == 0), || format!("odd internal pool {:?}", r.internal_stub_sums))?;
        ensure(r.external_stub_sum % 2 == 0, || "odd external pool".into())?;
        let realized = 2 * net.graph.edge_count() + r.dropped_stubs;
        let planned: usize = r.internal_stub_sums.iter().sum::<usize>() + r.external_stub_sum;
        ensure(realized == planned, || format!("{realized} stubs realized, {planned} planned"))
    })
}

// cli

pub fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modcent"))
}

fn run_ok(args: &[String]) -> Result<(), String> {
    let out = binary().args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

/// Reruns the argument vector recorded in `manifest`, pointing outputs at
/// `from → to` replacements.
fn rerun(manifest: &std::path::Path, from: &str, to: &str) -> Result<(), String> {
    let text = std::fs::read_to_string(manifest).map_err(|e| e.to_string())?;
    let m = modcent::manifest::RunManifest::read(text.as_bytes()).map_err(|e| e.to_string())?;
    let args: Vec<String> = m.args.iter().map(|a| a.replace(from, to)).collect();
    run_ok(&args)
}

fn same_file(a: &std::path::Path, b: &std::path::Path) -> Result<(), String> {
    let (x, y) = (std::fs::read(a).map_err(|e| e.to_string())?, std::fs::read(b).map_err(|e| e.to_string())?);
    if x == y {
        Ok(())
    } else {
        Err(format!("{} and {} differ", a.display(), b.display()))
    }
}

pub fn cli_manifest_reproduces() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let s = |p: &std::path::Path| p.display().to_string();
    run_ok(&["generate".into(), "--n".into(), "300".into(), "--mu".into(), "0.2".into(), "--seed".into(), "4".into(), "-o".into(), s(&a)])?;
    rerun(&a.join("manifest.json"), &s(&a), &s(&b))?;
    for f in ["edges.txt", "partition.txt", "report.json"] {
        same_file(&a.join(f), &b.join(f))?;
    }
    let edges = s(&a.join("edges.txt"));
    let rank_a = dir.path().join("rank_a.csv");
    run_ok(&[
        "centrality".into(), edges.clone(), "--detect".into(), "--seed".into(), "9".into(),
        "--kind".into(), "closeness".into(), "--strategy".into(), "weighted".into(), "-o".into(), s(&rank_a),
    ])?;
    rerun(&dir.path().join("rank_a.csv.manifest.json"), "rank_a", "rank_b")?;
    same_file(&rank_a, &dir.path().join("rank_b.csv"))?;
    let sweep_a = dir.path().join("sweep_a.csv");
    run_ok(&[
        "evaluate".into(), edges, "--partition".into(), s(&a.join("partition.txt")), "--kinds".into(), "degree,betweenness".into(),
        "--runs".into(), "20".into(), "--seed".into(), "3".into(), "-o".into(), s(&sweep_a),
    ])?;
    rerun(&dir.path().join("sweep_a.csv.manifest.json"), "sweep_a", "sweep_b")?;
    same_file(&sweep_a, &dir.path().join("sweep_b.csv"))
}

pub fn cli_exit_codes() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let code = |args: &[&str]| binary().args(args).output().map(|o| o.status.code()).map_err(|e| e.to_string());
    let out = dir.path().join("net").display().to_string();
    let cases: [(&[&str], i32); 4] = [
        (&["generate", "--n", "200", "-o", &out], 0),
        (&["generate", "--mu", "0.1", "-o", &out], 2),
        (&["generate", "--n", "200", "--mu", "0.0", "--max-community", "20", "--min-community", "15", "-o", &out], 1),
        (&["threshold", "/nonexistent/graph.txt"], 1),
    ];
    for (args, want) in cases {
        let got = code(args)?;
        if got != Some(want) {
            return Err(format!("{args:?}: exit {got:?}, expected {want}"));
        }
    }
    Ok(())
}

// oracle equivalence beyond the invariants above

pub fn closeness_matches_oracle() -> Result<(), String> {
    check(200, random_graph(10), |rg| {
        let g = rg.graph();
        let got = centrality::closeness(&g).scores;
        let want = oracles::closeness(&oracles::dense(rg.n, rg.edges.iter().copied()));
        for v in 0..rg.n {
            ensure((got[v] - want[v]).abs() < 1e-9, || format!("node {v}: {} vs {}", got[v], want[v]))?;
        }
        Ok(())
    })
}

pub fn degree_matches_oracle() -> Result<(), String> {
    check(200, random_graph(10), |rg| {
        let got = centrality::degree(&rg.graph()).scores;
        let want = oracles::degree(&oracles::dense(rg.n, rg.edges.iter().copied()));
        ensure(got == want, || format!("{got:?} vs {want:?}"))
    })
}

/// Compares every component of at most eight nodes with the dense
/// solver's Perron vector; isolated nodes score 0 by convention.
pub fn eigenvector_matches_dense_solver() -> Result<(), String> {
    check(200, random_graph(10), |rg| {
        let g = rg.graph();
        let got = centrality::eigenvector(&g, &EigenOptions::default()).unwrap().scores;
        let a = oracles::dense(rg.n, rg.edges.iter().copied());
        let labels = oracles::union_find(rg.n, rg.edges.iter().copied());
        for members in oracles::groups(&labels) {
            if members.len() == 1 {
                ensure(got[members[0]] == 0.0, || "isolated node scored".into())?;
                continue;
            }
            if members.len() > 8 {
                continue;
            }
            let want = oracles::perron_vector(&oracles::restrict(&a, &members));
            for (i, &v) in members.iter().enumerate() {
                ensure((got[v] - want[i]).abs() < 1e-6, || format!("node {v}: {} vs {}", got[v], want[i]))?;
            }
        }
        Ok(())
    })
}
