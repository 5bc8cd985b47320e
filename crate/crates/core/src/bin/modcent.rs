use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use modcent::centrality::CentralityKind;
use modcent::community::{global_mixing, louvain, CommunityStats, LouvainOptions, MixingEstimator};
use modcent::epidemic::{epidemic_threshold, sweep_with, write_sweep_csv, ContactModel, SirConfig};
use modcent::generator::{generate, validate, GeneratorConfig};
use modcent::graph::{load_edge_list, read_partition, write_edge_list, write_partition, EdgeListOptions, LabelKind};
use modcent::manifest::{derive_seed, RunManifest};
use modcent::ranking::{Ranker, RankingStrategy};
use modcent::{Error, Graph, Partition, Result};

#[derive(Parser)]
#[command(name = "modcent", version, about = "Modular centrality and SIR spreading experiments")]
struct Cli {
    /// Worker threads for SIR runs and per-component centrality (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an LFR-style network with a planted partition.
    Generate(GenerateArgs),
    /// Rank nodes by a standard or modular centrality.
    Centrality(CentralityArgs),
    /// Sweep SIR outbreak sizes for ranking strategies over seed fractions.
    Evaluate(EvaluateArgs),
    /// Print the epidemic threshold of a graph.
    Threshold(ThresholdArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 7.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 80)]
    max_degree: usize,
    #[arg(long, default_value_t = 2.8)]
    gamma: f64,
    #[arg(long, default_value_t = 2.0)]
    beta_c: f64,
    #[arg(long, default_value_t = 15)]
    min_community: usize,
    #[arg(long, default_value_t = 200)]
    max_community: usize,
    #[arg(long, default_value_t = 50)]
    max_rewire_rounds: usize,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Integer,
    Text,
}

#[derive(Args)]
struct GraphInput {
    /// Edge list, one edge per line.
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "integer")]
    labels: Labels,
    /// Restrict to the largest connected component.
    #[arg(long)]
    lcc: bool,
}

#[derive(Args)]
struct CommunityInput {
    /// Partition file with "label community" lines.
    #[arg(long, conflicts_with = "detect")]
    partition: Option<PathBuf>,
    /// Detect communities with Louvain.
    #[arg(long)]
    detect: bool,
    #[arg(long, default_value_t = 1.0)]
    resolution: f64,
}

#[derive(Args)]
struct CentralityArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    communities: CommunityInput,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "degree")]
    kind: CentralityKind,
    #[arg(long, default_value = "standard")]
    strategy: RankingStrategy,
    /// Ranking CSV; the manifest goes next to it.
    #[arg(short, long)]
    output: PathBuf,
    /// Also write per-community statistics as CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Also write the (local, global) score pairs as CSV.
    #[arg(long)]
    modular: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    communities: CommunityInput,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "degree")]
    kinds: Vec<CentralityKind>,
    #[arg(long, value_delimiter = ',', default_value = "standard,local,global,modulus,tangent,weighted")]
    strategies: Vec<RankingStrategy>,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.04,0.06,0.08,0.1")]
    f0_grid: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    #[arg(long, default_value_t = 200)]
    runs: usize,
    #[arg(long, default_value = "single-neighbor")]
    contact: ContactModel,
    /// Sweep CSV; the manifest goes next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    input: GraphInput,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a, args),
        Command::Centrality(a) => cmd_centrality(a, args),
        Command::Evaluate(a) => cmd_evaluate(a, args),
        Command::Threshold(a) => cmd_threshold(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn cmd_generate(a: GenerateArgs, args: Vec<String>) -> Result<()> {
    let config = GeneratorConfig {
        n: a.n,
        avg_degree: a.avg_degree,
        max_degree: a.max_degree,
        gamma: a.gamma,
        beta_c: a.beta_c,
        mu: a.mu,
        min_community: a.min_community,
        max_community: a.max_community,
        seed: derive_seed(a.seed, "generation"),
        max_rewire_rounds: a.max_rewire_rounds,
    };
    let net = generate(&config)?;
    let report = validate(&net.graph, &net.partition, &config)?;
    fs::create_dir_all(&a.output)?;
    let edges = a.output.join("edges.txt");
    let partition = a.output.join("partition.txt");
    let report_path = a.output.join("report.json");
    let mut w = create(&edges)?;
    write_edge_list(&net.graph, &mut w)?;
    w.flush()?;
    let mut w = create(&partition)?;
    write_partition(&net.graph, &net.partition, &mut w)?;
    w.flush()?;
    let mut w = create(&report_path)?;
    serde_json::to_writer_pretty(
        &mut w,
        &serde_json::json!({ "generation": net.report, "validation": report }),
    )?;
    writeln!(w)?;
    w.flush()?;

    let mut m = RunManifest::new("generate", args);
    m.parameter("config", &config).seed("master", a.seed).seed("generation", config.seed);
    m.output(&edges).output(&partition).output(&report_path);
    m.summary("nodes", net.graph.node_count())
        .summary("edges", net.graph.edge_count())
        .summary("communities", net.partition.community_count())
        .summary("mixing", report.mixing)
        .summary("validation_pass", report.pass);
    m.write_file(&a.output.join("manifest.json"))?;
    if !report.pass {
        eprintln!("warning: generated network misses its validation targets, see report.json");
    }
    Ok(())
}

fn load_graph(input: &GraphInput, manifest: &mut RunManifest) -> Result<(Graph, Option<Graph>)> {
    let options = EdgeListOptions {
        labels: match input.labels {
            Labels::Integer => LabelKind::Integer,
            Labels::Text => LabelKind::Text,
        },
    };
    let (graph, report) = load_edge_list(BufReader::new(File::open(&input.graph)?), &options)?;
    manifest.input(&input.graph)?;
    manifest
        .parameter(
            "labels",
            match input.labels {
                Labels::Integer => "integer",
                Labels::Text => "text",
            },
        )
        .parameter("lcc", input.lcc);
    if report.dropped() > 0 {
        eprintln!(
            "warning: dropped {} self-loops and {} duplicate edges",
            report.self_loops, report.duplicates
        );
    }
    if input.lcc {
        let lcc = graph.largest_connected_component()?;
        Ok((lcc, Some(graph)))
    } else {
        Ok((graph, None))
    }
}

/// Partition read against the file's full graph, then restricted to `graph`.
fn load_partition(path: &Path, graph: &Graph, full: Option<&Graph>) -> Result<Partition> {
    let reader = || -> Result<BufReader<File>> { Ok(BufReader::new(File::open(path)?)) };
    match full {
        None => read_partition(reader()?, graph),
        Some(full) => {
            let p = read_partition(reader()?, full)?;
            let raw: Vec<usize> = graph
                .labels()
                .iter()
                .map(|l| full.node_by_label(l).map(|v| p.community(v)).ok_or_else(|| Error::UnknownNode(l.clone())))
                .collect::<Result<_>>()?;
            Ok(Partition::from_labels(&raw))
        }
    }
}

fn resolve_partition(
    c: &CommunityInput,
    seed: u64,
    graph: &Graph,
    full: Option<&Graph>,
    manifest: &mut RunManifest,
) -> Result<Option<Partition>> {
    manifest.parameter("resolution", c.resolution).parameter("detect", c.detect);
    if let Some(path) = &c.partition {
        manifest.input(path)?;
        return Ok(Some(load_partition(path, graph, full)?));
    }
    if !c.detect {
        return Ok(None);
    }
    let detection = derive_seed(seed, "detection");
    manifest.seed("detection", detection);
    let result = louvain(
        graph,
        &LouvainOptions {
            seed: detection,
            resolution: c.resolution,
            ..LouvainOptions::default()
        },
    )?;
    manifest
        .summary("community_count", result.partition.community_count())
        .summary("modularity", result.modularity)
        .summary("mixing", global_mixing(graph, &result.partition, MixingEstimator::NodeAverage)?);
    Ok(Some(result.partition))
}

fn cmd_centrality(a: CentralityArgs, args: Vec<String>) -> Result<()> {
    let mut m = RunManifest::new("centrality", args);
    m.seed("master", a.seed)
        .parameter("kind", a.kind)
        .parameter("strategy", a.strategy);
    let (graph, full) = load_graph(&a.input, &mut m)?;
    let partition = resolve_partition(&a.communities, a.seed, &graph, full.as_ref(), &mut m)?;
    if partition.is_none() && (a.strategy.needs_partition() || a.stats.is_some() || a.modular.is_some()) {
        return Err(Error::InvalidConfig(
            "this output needs communities: pass --partition or --detect".into(),
        ));
    }
    let use_partition = partition.as_ref().filter(|_| a.strategy.needs_partition() || a.modular.is_some());
    let ranker = Ranker::new(&graph, use_partition, a.kind)?;
    let ranking = ranker.rank(a.strategy)?;
    let mut w = create(&a.output)?;
    ranking.write_csv(&graph, &mut w)?;
    w.flush()?;
    m.output(&a.output);
    if let Some(path) = &a.stats {
        let p = partition.as_ref().expect("checked above");
        let mut w = create(path)?;
        CommunityStats::compute(&graph, p)?.write_csv(&mut w)?;
        w.flush()?;
        m.output(path);
    }
    if let Some(path) = &a.modular {
        let mut w = create(path)?;
        ranker.modular.as_ref().expect("computed with a partition").write_csv(&graph, &mut w)?;
        w.flush()?;
        m.output(path);
    }
    m.write_file(&manifest_path(&a.output))
}

fn cmd_evaluate(a: EvaluateArgs, args: Vec<String>) -> Result<()> {
    let mut m = RunManifest::new("evaluate", args);
    let sir_seed = derive_seed(a.seed, "sir");
    m.seed("master", a.seed).seed("sir", sir_seed);
    let (graph, full) = load_graph(&a.input, &mut m)?;
    let partition = resolve_partition(&a.communities, a.seed, &graph, full.as_ref(), &mut m)?;
    if partition.is_none() && a.strategies.iter().any(|s| s.needs_partition()) {
        return Err(Error::InvalidConfig(
            "modular strategies need communities: pass --partition or --detect".into(),
        ));
    }
    let config = SirConfig {
        alpha: a.alpha,
        sigma: a.sigma,
        runs: a.runs,
        seed: sir_seed,
        contact: a.contact,
        f0: a.f0_grid.first().copied().unwrap_or(0.05),
    };
    config.validate()?;
    match epidemic_threshold(&graph) {
        Ok(th) if a.alpha <= th => {
            eprintln!("warning: alpha {} does not exceed the epidemic threshold {th:.4}", a.alpha)
        }
        Ok(_) => {}
        Err(e) => eprintln!("warning: {e}"),
    }
    m.parameter("kinds", &a.kinds)
        .parameter("strategies", &a.strategies)
        .parameter("f0_grid", &a.f0_grid)
        .parameter("alpha", a.alpha)
        .parameter("sigma", a.sigma)
        .parameter("runs", a.runs)
        .parameter("contact", a.contact);
    let mut rows = Vec::new();
    for &kind in &a.kinds {
        let ranker = Ranker::new(&graph, partition.as_ref(), kind)?;
        rows.extend(sweep_with(&graph, &ranker, &a.strategies, &a.f0_grid, &config)?);
    }
    let mut w = create(&a.output)?;
    write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    m.output(&a.output);
    m.write_file(&manifest_path(&a.output))
}

fn cmd_threshold(a: ThresholdArgs) -> Result<()> {
    let mut m = RunManifest::new("threshold", Vec::new());
    let (graph, _) = load_graph(&a.input, &mut m)?;
    println!("{:.4}", epidemic_threshold(&graph)?);
    Ok(())
}
