//! Command-line front end: dataset inspection, walk dumps, embedding
//! training, and link-prediction experiments.
//!
//! Exit codes: 0 success, 1 configuration errors, 2 file and parse
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use plexembed::graph::LayerId;
use plexembed::io::{
    append_records, load_labels, load_multilayer, write_embedding, write_walks, ExperimentRecord,
    LoadedNetwork,
};
use plexembed::linkpred::{run_experiment, CandidateMode, Predictor};
use plexembed::methods::{layer_run_params, Method, MethodConfig};
use plexembed::sgns::{concat, train_with_stats, EmbeddingSpace, Metric, TrainConfig, TrainStats};
use plexembed::walk::{graph_walks, multilayer_walks, StartMode, WalkCorpus, WalkParams};
use plexembed::{Error, Result};

/// Multilayer network embeddings and link prediction.
#[derive(Parser)]
#[command(name = "plexembed", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print layer, node, edge, and label statistics for a dataset.
    Info(InfoArgs),
    /// Train node embeddings and write them to a file.
    Embed(EmbedArgs),
    /// Write a layer co-analysis walk corpus as text.
    Walks(WalksArgs),
    /// Run link-prediction experiments over methods and seeds.
    Linkpred(LinkpredArgs),
}

#[derive(Args)]
struct InfoArgs {
    /// Multilayer edge list ("src dst layer" per line).
    dataset: PathBuf,
    /// Optional "node label" file to summarize.
    #[arg(long)]
    labels: Option<PathBuf>,
}

/// Walk flags shared by embed, walks, and linkpred.
#[derive(Args)]
struct WalkFlags {
    /// Return bias: lower values keep the walk near its last node.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    p: f64,
    /// In-out bias: lower values push the walk outward.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    q: f64,
    /// Probability of staying on the current layer at each step.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    r: f64,
    /// Walks started per node.
    #[arg(long, default_value_t = 10)]
    num_walks: usize,
    /// Maximum tokens per walk.
    #[arg(long, default_value_t = 80)]
    walk_length: usize,
}

impl WalkFlags {
    fn to_params(&self, seed: u64) -> WalkParams {
        WalkParams {
            p: self.p,
            q: self.q,
            r: self.r,
            num_walks: self.num_walks,
            walk_length: self.walk_length,
            seed,
            start: StartMode::PerNode,
        }
    }
}

/// Training flags shared by embed and linkpred.
#[derive(Args)]
struct TrainFlags {
    /// Embedding dimension.
    #[arg(long, default_value_t = 128)]
    dim: usize,
    /// Context window radius.
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Negative samples per positive pair.
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    /// Passes over the walk corpus.
    #[arg(long, default_value_t = 1)]
    epochs: usize,
    /// Learning rate at the start of training.
    #[arg(long, default_value_t = 0.025, allow_negative_numbers = true)]
    initial_lr: f64,
    /// Learning rate the linear decay ends at.
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    final_lr: f64,
    /// Worker threads for training (more than one trades determinism
    /// for speed).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Force bit-reproducible runs; rejects --threads above 1.
    #[arg(long)]
    deterministic: bool,
}

impl TrainFlags {
    fn to_config(&self, seed: u64) -> Result<TrainConfig> {
        if self.deterministic && self.threads != 1 {
            return Err(Error::Config(
                "--deterministic requires --threads 1, lock-free training reorders updates"
                    .into(),
            ));
        }
        Ok(TrainConfig {
            dim: self.dim,
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            initial_lr: self.initial_lr,
            final_lr: self.final_lr,
            seed,
            threads: self.threads,
        })
    }
}

#[derive(Args)]
struct EmbedArgs {
    /// Multilayer edge list ("src dst layer" per line).
    dataset: PathBuf,
    /// Embedding method: na, ra, or lc.
    #[arg(long)]
    method: Method,
    /// Where to write the embedding file.
    #[arg(long, short = 'o')]
    output: PathBuf,
    /// Dimension each layer model contributes under ra (defaults to
    /// --dim).
    #[arg(long)]
    per_layer_dim: Option<usize>,
    /// Base seed for walks and training.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    walk: WalkFlags,
    #[command(flatten)]
    train: TrainFlags,
}

#[derive(Args)]
struct WalksArgs {
    /// Multilayer edge list ("src dst layer" per line).
    dataset: PathBuf,
    /// Where to write the corpus, one walk per line.
    #[arg(long, short = 'o')]
    output: PathBuf,
    /// Walk seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    walk: WalkFlags,
}

#[derive(Args)]
struct LinkpredArgs {
    /// Multilayer edge list ("src dst layer" per line).
    dataset: PathBuf,
    /// Comma-separated predictors: cn, jaccard, na, ra, lc.
    #[arg(long, value_delimiter = ',', default_value = "cn,jaccard,na,ra,lc")]
    methods: Vec<Predictor>,
    /// Seeds: a single number, a comma list, or a range like 0..10.
    #[arg(long, default_value = "0..10")]
    seeds: String,
    /// Fraction of merged edges held out for testing.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    test_frac: f64,
    /// Distance ranking embedding candidates: euclidean or cosine.
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    /// Candidate pairs: "all" or "sample:<n>" for n sampled non-edges.
    #[arg(long, default_value = "all")]
    candidate_mode: String,
    /// Append one JSON record per (method, seed) to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Dataset name written into records (defaults to the file stem).
    #[arg(long)]
    dataset_name: Option<String>,
    /// Dimension each layer model contributes under ra (defaults to
    /// --dim).
    #[arg(long)]
    per_layer_dim: Option<usize>,
    #[command(flatten)]
    walk: WalkFlags,
    #[command(flatten)]
    train: TrainFlags,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Info(args) => cmd_info(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Walks(args) => cmd_walks(args),
        Command::Linkpred(args) => cmd_linkpred(args),
    }
}

fn cmd_info(args: InfoArgs) -> Result<()> {
    let loaded = load_multilayer(&args.dataset)?;
    let net = &loaded.net;
    println!(
        "layers={} nodes={} layer_edges={}",
        net.num_layers(),
        net.num_nodes(),
        net.edge_count()
    );
    println!("merged_edges={}", net.merge().edge_count());
    for l in 0..net.num_layers() {
        let layer = LayerId(l as u32);
        println!(
            "layer {}: {} edges",
            loaded.layers.name(layer.0),
            net.layer_edge_count(layer)
        );
    }
    warn_about_drops(&loaded);
    if let Some(path) = &args.labels {
        let labels = load_labels(path, &loaded.nodes)?;
        println!("labeled_nodes={}", labels.len());
        for (label, count) in labels.counts() {
            println!("label {label}: {count} nodes");
        }
    }
    Ok(())
}

fn warn_about_drops(loaded: &LoadedNetwork) {
    let s = loaded.stats;
    if s.self_loops_dropped > 0 || s.duplicates_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loops and {} duplicate edges",
            s.self_loops_dropped, s.duplicates_dropped
        );
    }
    if s.weights_ignored > 0 {
        eprintln!("warning: ignored the weight column on {} lines", s.weights_ignored);
    }
}

fn cmd_embed(args: EmbedArgs) -> Result<()> {
    let cfg = MethodConfig {
        method: args.method,
        walk: args.walk.to_params(args.seed),
        train: args.train.to_config(args.seed)?,
        per_layer_dim: args.per_layer_dim,
    };
    cfg.validate()?;
    let loaded = load_multilayer(&args.dataset)?;
    warn_about_drops(&loaded);
    let n = loaded.net.num_nodes();
    let space = match cfg.method {
        Method::NetworkAggregation => {
            let corpus = graph_walks(&loaded.net.merge(), &cfg.walk)?;
            log_corpus("merged", &corpus, false);
            let (space, stats) = train_with_stats(&corpus, n, &cfg.train)?;
            log_losses("merged", &stats);
            space
        }
        Method::LayerCoanalysis => {
            let corpus = multilayer_walks(&loaded.net, &cfg.walk)?;
            log_corpus("coanalysis", &corpus, true);
            let (space, stats) = train_with_stats(&corpus, n, &cfg.train)?;
            log_losses("coanalysis", &stats);
            space
        }
        Method::ResultsAggregation => {
            let mut spaces: Vec<EmbeddingSpace> = Vec::with_capacity(loaded.net.num_layers());
            for l in 0..loaded.net.num_layers() {
                let scope = format!("layer {}", loaded.layers.name(l as u32));
                let graph = loaded.net.layer_graph(LayerId(l as u32))?;
                let (walk, train_cfg) = layer_run_params(&cfg, l);
                let corpus = graph_walks(&graph, &walk)?;
                log_corpus(&scope, &corpus, false);
                let (space, stats) = train_with_stats(&corpus, n, &train_cfg)?;
                log_losses(&scope, &stats);
                spaces.push(space);
            }
            concat(&spaces)?
        }
    };
    write_embedding(&space, &loaded.nodes, &args.output)?;
    println!(
        "wrote {} nodes x {} dims to {}",
        space.num_nodes(),
        space.dim(),
        args.output.display()
    );
    Ok(())
}

fn log_corpus(scope: &str, corpus: &WalkCorpus, with_switch_rate: bool) {
    let mut line = format!(
        "{scope}: walks={} tokens={} singletons={}",
        corpus.len(),
        corpus.total_tokens,
        corpus.stats.singleton_walks
    );
    if with_switch_rate {
        match corpus.layer_switch_rate() {
            Some(rate) => line.push_str(&format!(" layer_switch_rate={rate:.4}")),
            None => line.push_str(" layer_switch_rate=n/a"),
        }
    }
    println!("{line}");
}

fn log_losses(scope: &str, stats: &TrainStats) {
    let epochs = stats.epoch_losses.len();
    for (i, loss) in stats.epoch_losses.iter().enumerate() {
        println!("{scope}: epoch {}/{epochs} loss={loss:.6}", i + 1);
    }
}

fn cmd_walks(args: WalksArgs) -> Result<()> {
    let params = args.walk.to_params(args.seed);
    params.validate()?;
    let loaded = load_multilayer(&args.dataset)?;
    warn_about_drops(&loaded);
    let corpus = multilayer_walks(&loaded.net, &params)?;
    log_corpus("coanalysis", &corpus, true);
    write_walks(&corpus, &loaded.nodes, &args.output)?;
    println!(
        "wrote {} walks to {}",
        corpus.len() - corpus.stats.singleton_walks,
        args.output.display()
    );
    Ok(())
}

/// Accepts "a..b" (half-open), "x,y,z", or a single number.
fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    let bad = |_| Error::Config(format!("--seeds expects numbers, got {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(bad)?;
        let b: u64 = b.trim().parse().map_err(bad)?;
        if a >= b {
            return Err(Error::Config(format!("--seeds range {text:?} is empty")));
        }
        return Ok((a..b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(bad)).collect()
}

fn parse_candidate_mode(text: &str) -> Result<CandidateMode> {
    if text == "all" {
        return Ok(CandidateMode::All);
    }
    if let Some(n) = text.strip_prefix("sample:") {
        let non_edges = n.parse().map_err(|_| {
            Error::Config(format!("--candidate-mode sample:<n> expects a count, got {n:?}"))
        })?;
        return Ok(CandidateMode::Sampled { non_edges });
    }
    Err(Error::Config(format!(
        "--candidate-mode must be \"all\" or \"sample:<n>\", got {text:?}"
    )))
}

fn cmd_linkpred(args: LinkpredArgs) -> Result<()> {
    let seeds = parse_seeds(&args.seeds)?;
    let mode = parse_candidate_mode(&args.candidate_mode)?;
    if !(args.test_frac > 0.0 && args.test_frac < 1.0) {
        return Err(Error::Config(format!(
            "--test-frac must lie strictly between 0 and 1, got {}",
            args.test_frac
        )));
    }
    // Per-run seeds come from the experiment driver; these carry the
    // remaining flags.
    let walk = args.walk.to_params(0);
    let train = args.train.to_config(0)?;
    let mut predictors = Vec::with_capacity(args.methods.len());
    for predictor in args.methods {
        match predictor {
            Predictor::Embedding(mut cfg) => {
                cfg.walk = walk;
                cfg.train = train;
                cfg.per_layer_dim = args.per_layer_dim;
                cfg.validate()?;
                predictors.push(Predictor::Embedding(cfg));
            }
            baseline => predictors.push(baseline),
        }
    }
    if predictors.is_empty() {
        return Err(Error::Config("--methods must name at least one predictor".into()));
    }

    let loaded = load_multilayer(&args.dataset)?;
    warn_about_drops(&loaded);
    let dataset = args.dataset_name.clone().unwrap_or_else(|| {
        args.dataset.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });

    let mut records: Vec<ExperimentRecord> = Vec::with_capacity(predictors.len() * seeds.len());
    for predictor in &predictors {
        for &seed in &seeds {
            let started = Instant::now();
            let report =
                run_experiment(&loaded.net, predictor, args.test_frac, seed, args.metric, mode)?;
            // Wall time is inherently unrepeatable; deterministic runs
            // zero it so report files compare byte for byte.
            let runtime_ms = if args.train.deterministic {
                0
            } else {
                started.elapsed().as_millis() as u64
            };
            records.push(ExperimentRecord {
                method: predictor.name().to_string(),
                dataset: dataset.clone(),
                seed,
                frac: args.test_frac,
                metric: args.metric.to_string(),
                accuracy: report.accuracy,
                precision: report.precision,
                recall: report.recall,
                f1: report.f1,
                runtime_ms,
            });
        }
    }
    if let Some(path) = &args.report {
        append_records(path, &records)?;
        println!("wrote {} records to {}", records.len(), path.display());
    }

    println!("{:<10} {:<17} {:<17} (mean +- std, {} seeds)", "method", "accuracy", "f1", seeds.len());
    for predictor in &predictors {
        let name = predictor.name();
        let rows: Vec<&ExperimentRecord> =
            records.iter().filter(|r| r.method == name).collect();
        let (acc_mean, acc_std) = mean_std(rows.iter().map(|r| r.accuracy));
        let (f1_mean, f1_std) = mean_std(rows.iter().map(|r| r.f1));
        println!(
            "{name:<10} {:<17} {:<17}",
            format!("{acc_mean:.3} +- {acc_std:.3}"),
            format!("{f1_mean:.3} +- {f1_std:.3}")
        );
    }
    Ok(())
}

/// Population standard deviation; a single sample has deviation 0.
fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.collect();
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
