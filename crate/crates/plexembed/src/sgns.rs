//! Skip-gram training with negative sampling, over walk corpora.
//!
//! Each node keeps two vectors: an input row (the embedding that comes
//! out) and a context row. For every (center, context) pair within the
//! window, the trainer pushes the pair's dot product up and pushes the
//! dot products against `negatives` sampled nodes down. Negatives are
//! drawn from the corpus unigram distribution raised to 3/4.
//!
//! Training is deterministic for a fixed config when `threads == 1`.
//! With more threads, workers apply unsynchronized lock-free updates to
//! the shared matrices (the usual hogwild regime): results are no longer
//! bit-reproducible but keep the same statistical behavior.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::graph::NodeId;
use crate::walk::WalkCorpus;
use crate::{seed, Error, Result};

const PASS_TAG: u64 = 0x7067; // per-(epoch, walk) update streams
const INIT_TAG: u64 = 0x696e; // matrix initialization stream

/// How far apart two embedded nodes are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// `1 - cosine similarity`, in `[0, 2]`. Pairs involving a zero
    /// vector get distance 1, the value at zero similarity.
    CosineDistance,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Euclidean => write!(f, "euclidean"),
            Metric::CosineDistance => write!(f, "cosine"),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Metric> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" | "cosine-distance" => Ok(Metric::CosineDistance),
            other => Err(Error::Config(format!(
                "unknown metric {other:?}, expected euclidean or cosine"
            ))),
        }
    }
}

/// Training hyperparameters.
#[derive(Clone, Copy, Debug)]
pub struct TrainConfig {
    /// Embedding dimensionality.
    pub dim: usize,
    /// Context window radius within a walk.
    pub window: usize,
    /// Negative samples per positive pair.
    pub negatives: usize,
    /// Passes over the corpus.
    pub epochs: usize,
    /// Learning rate at the first token, decayed linearly per center
    /// token down to `final_lr` at the last.
    pub initial_lr: f64,
    pub final_lr: f64,
    pub seed: u64,
    /// Worker count; 1 trains deterministically.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            window: 10,
            negatives: 5,
            epochs: 1,
            initial_lr: 0.025,
            final_lr: 1e-4,
            seed: 0,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dim must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        for (name, v) in [("initial_lr", self.initial_lr), ("final_lr", self.final_lr)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.final_lr > self.initial_lr {
            return Err(Error::Config(format!(
                "final_lr ({}) must not exceed initial_lr ({})",
                self.final_lr, self.initial_lr
            )));
        }
        Ok(())
    }
}

/// Dense node vectors, one row per node of the originating network.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    num_nodes: usize,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingSpace {
    pub fn zeros(num_nodes: usize, dim: usize) -> EmbeddingSpace {
        EmbeddingSpace { num_nodes, dim, data: vec![0.0; num_nodes * dim] }
    }

    /// Wraps row-major data; every entry must be finite.
    pub fn from_data(num_nodes: usize, dim: usize, data: Vec<f64>) -> Result<EmbeddingSpace> {
        if data.len() != num_nodes * dim {
            return Err(Error::Config(format!(
                "embedding data holds {} values, expected {} ({} nodes x dim {})",
                data.len(),
                num_nodes * dim,
                num_nodes,
                dim
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("embedding contains a non-finite value ({bad})")));
        }
        Ok(EmbeddingSpace { num_nodes, dim, data })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, node: NodeId) -> &[f64] {
        &self.data[node.index() * self.dim..(node.index() + 1) * self.dim]
    }

    pub fn row_mut(&mut self, node: NodeId) -> &mut [f64] {
        &mut self.data[node.index() * self.dim..(node.index() + 1) * self.dim]
    }

    /// Distance between two rows under `metric`.
    pub fn distance(&self, a: NodeId, b: NodeId, metric: Metric) -> f64 {
        let (ra, rb) = (self.row(a), self.row(b));
        match metric {
            Metric::Euclidean => {
                ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            Metric::CosineDistance => {
                let na = dot(ra, ra).sqrt();
                let nb = dot(rb, rb).sqrt();
                if na == 0.0 || nb == 0.0 {
                    1.0
                } else {
                    1.0 - dot(ra, rb) / (na * nb)
                }
            }
        }
    }
}

/// Joins spaces over the same node set side by side; the result's
/// dimension is the sum of the parts.
pub fn concat(spaces: &[EmbeddingSpace]) -> Result<EmbeddingSpace> {
    let first = spaces
        .first()
        .ok_or_else(|| Error::Config("concat needs at least one embedding space".into()))?;
    let num_nodes = first.num_nodes;
    for s in spaces {
        if s.num_nodes != num_nodes {
            return Err(Error::NodeSetMismatch(num_nodes, s.num_nodes));
        }
    }
    let dim: usize = spaces.iter().map(|s| s.dim).sum();
    let mut data = Vec::with_capacity(num_nodes * dim);
    for node in 0..num_nodes {
        for s in spaces {
            data.extend_from_slice(s.row(NodeId(node as u32)));
        }
    }
    Ok(EmbeddingSpace { num_nodes, dim, data })
}

/// Which side of the objective a pair sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairLabel {
    Positive,
    Negative,
}

/// Loss and exact gradients of one logistic pair term.
///
/// For `Positive` the loss is `-ln(sigma(u . v))`, for `Negative` it is
/// `-ln(1 - sigma(u . v))`. Returns (loss, dL/du, dL/dv). Computed
/// without the trainer's dot clamp, so the gradients are exact for the
/// returned loss everywhere.
pub fn pair_loss_and_grad(u: &[f64], v: &[f64], label: PairLabel) -> (f64, Vec<f64>, Vec<f64>) {
    assert_eq!(u.len(), v.len(), "pair vectors must share a dimension");
    let d = dot(u, v);
    let (loss, dloss_ddot) = match label {
        PairLabel::Positive => (softplus(-d), sigmoid(d) - 1.0),
        PairLabel::Negative => (softplus(d), sigmoid(d)),
    };
    let grad_u: Vec<f64> = v.iter().map(|x| dloss_ddot * x).collect();
    let grad_v: Vec<f64> = u.iter().map(|x| dloss_ddot * x).collect();
    (loss, grad_u, grad_v)
}

/// Per-epoch diagnostics from a training run.
#[derive(Clone, Debug, Default)]
pub struct TrainStats {
    /// Mean loss per positive pair (negative terms included), one entry
    /// per epoch.
    pub epoch_losses: Vec<f64>,
    /// Total (center, context) pairs processed across all epochs.
    pub pairs_processed: usize,
}

/// Trains an embedding from a walk corpus. Nodes that never appear in
/// a walk of at least two tokens form no training pair and come out as
/// zero vectors.
pub fn train(corpus: &WalkCorpus, num_nodes: usize, cfg: &TrainConfig) -> Result<EmbeddingSpace> {
    Ok(train_with_stats(corpus, num_nodes, cfg)?.0)
}

/// [`train`], also returning per-epoch mean losses.
pub fn train_with_stats(
    corpus: &WalkCorpus,
    num_nodes: usize,
    cfg: &TrainConfig,
) -> Result<(EmbeddingSpace, TrainStats)> {
    cfg.validate()?;
    if corpus.walks.is_empty() || corpus.total_tokens == 0 {
        return Err(Error::EmptyCorpus);
    }
    let mut counts = vec![0u64; num_nodes];
    let mut paired = vec![false; num_nodes];
    for walk in &corpus.walks {
        for &node in walk {
            if node.index() >= num_nodes {
                return Err(Error::InvalidNode { node: node.index(), num_nodes });
            }
            counts[node.index()] += 1;
            // Singleton walks keep a node in the sampling vocabulary but
            // give it no (center, context) pair, so its vector must stay
            // zero.
            paired[node.index()] |= walk.len() >= 2;
        }
    }
    let (vocab, table) = negative_table(&counts);

    let dim = cfg.dim;
    let mut input = vec![0.0f64; num_nodes * dim];
    let mut context = vec![0.0f64; num_nodes * dim];
    let mut rng = seed::rng(cfg.seed, &[INIT_TAG]);
    {
        use rand::Rng;
        let bound = 0.5 / dim as f64;
        for v in input.iter_mut() {
            *v = rng.gen_range(-bound..bound);
        }
    }
    for (node, &has_pair) in paired.iter().enumerate() {
        if !has_pair {
            input[node * dim..(node + 1) * dim].fill(0.0);
        }
    }

    let total_center_visits = corpus.total_tokens * cfg.epochs;
    let stats = if cfg.threads == 1 {
        sequential_passes(corpus, cfg, &vocab, &table, &mut input, &mut context, total_center_visits)
    } else {
        parallel_passes(corpus, cfg, &vocab, &table, &mut input, &mut context, total_center_visits)
    };

    let space = EmbeddingSpace::from_data(num_nodes, dim, input)?;
    Ok((space, stats))
}

/// Sampling vocabulary (nodes with nonzero count) and the alias table
/// over unigram counts raised to 3/4.
fn negative_table(counts: &[u64]) -> (Vec<NodeId>, AliasTable) {
    let vocab: Vec<NodeId> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, _)| NodeId(i as u32))
        .collect();
    let weights: Vec<f64> = vocab.iter().map(|n| (counts[n.index()] as f64).powf(0.75)).collect();
    (vocab, AliasTable::new(&weights))
}

// Keep the dot product inside the trainer's saturation range; gradients
// vanish numerically beyond it anyway.
const DOT_CLAMP: f64 = 6.0;

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`, stable for large |x|.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Dot product with four fixed accumulators; the association order is
/// constant, so results are reproducible while the loop still
/// vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        let j = i * 4;
        acc[0] += a[j] * b[j];
        acc[1] += a[j + 1] * b[j + 1];
        acc[2] += a[j + 2] * b[j + 2];
        acc[3] += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in chunks * 4..a.len() {
        tail += a[j] * b[j];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(dst: &mut [f64], scale: f64, src: &[f64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += scale * s;
    }
}

/// Loss of one (center, target) term plus the update coefficient
/// `-lr * dL/ddot` to apply to both rows.
fn pair_term(dot_uv: f64, positive: bool, lr: f64) -> (f64, f64) {
    let d = dot_uv.clamp(-DOT_CLAMP, DOT_CLAMP);
    let s = sigmoid(d);
    let (loss, dloss_ddot) =
        if positive { (softplus(-d), s - 1.0) } else { (softplus(d), s) };
    (loss, -lr * dloss_ddot)
}

fn lr_at(cfg: &TrainConfig, tokens_done: usize, total: usize) -> f64 {
    let progress = tokens_done as f64 / total as f64;
    cfg.initial_lr + (cfg.final_lr - cfg.initial_lr) * progress
}

fn sequential_passes(
    corpus: &WalkCorpus,
    cfg: &TrainConfig,
    vocab: &[NodeId],
    table: &AliasTable,
    input: &mut [f64],
    context: &mut [f64],
    total_center_visits: usize,
) -> TrainStats {
    let dim = cfg.dim;
    let mut stats = TrainStats::default();
    let mut tokens_done = 0usize;
    let mut center_buf = vec![0.0f64; dim];
    let mut delta = vec![0.0f64; dim];
    for epoch in 0..cfg.epochs {
        let mut loss_sum = 0.0;
        let mut pairs = 0usize;
        for (widx, walk) in corpus.walks.iter().enumerate() {
            let mut rng = seed::rng(cfg.seed, &[PASS_TAG, epoch as u64, widx as u64]);
            for (i, &center) in walk.iter().enumerate() {
                let lr = lr_at(cfg, tokens_done, total_center_visits);
                tokens_done += 1;
                let lo = i.saturating_sub(cfg.window);
                let hi = (i + cfg.window).min(walk.len() - 1);
                let c0 = center.index() * dim;
                for j in lo..=hi {
                    if j == i {
                        continue;
                    }
                    let pos = walk[j];
                    center_buf.copy_from_slice(&input[c0..c0 + dim]);
                    delta.fill(0.0);
                    let mut loss = 0.0;
                    for k in 0..=cfg.negatives {
                        let target = if k == 0 {
                            pos
                        } else {
                            let cand = vocab[table.sample(&mut rng)];
                            if cand == pos {
                                continue;
                            }
                            cand
                        };
                        let t0 = target.index() * dim;
                        let ctx_row = &mut context[t0..t0 + dim];
                        let (term_loss, coef) =
                            pair_term(dot(&center_buf, ctx_row), k == 0, lr);
                        loss += term_loss;
                        axpy(&mut delta, coef, ctx_row);
                        axpy(ctx_row, coef, &center_buf);
                    }
                    axpy(&mut input[c0..c0 + dim], 1.0, &delta);
                    loss_sum += loss;
                    pairs += 1;
                }
            }
        }
        stats.epoch_losses.push(if pairs > 0 { loss_sum / pairs as f64 } else { 0.0 });
        stats.pairs_processed += pairs;
    }
    stats
}

/// Hogwild pass: walks are sharded over threads, updates go to shared
/// atomic cells without synchronization. Lost updates are part of the
/// deal; per-walk RNG streams keep the sampled pairs themselves
/// reproducible.
fn parallel_passes(
    corpus: &WalkCorpus,
    cfg: &TrainConfig,
    vocab: &[NodeId],
    table: &AliasTable,
    input: &mut [f64],
    context: &mut [f64],
    total_center_visits: usize,
) -> TrainStats {
    let dim = cfg.dim;
    let input_cells: Vec<AtomicU64> = input.iter().map(|v| AtomicU64::new(v.to_bits())).collect();
    let context_cells: Vec<AtomicU64> =
        context.iter().map(|v| AtomicU64::new(v.to_bits())).collect();
    let load = |cells: &[AtomicU64], at: usize, buf: &mut [f64]| {
        for (k, slot) in buf.iter_mut().enumerate() {
            *slot = f64::from_bits(cells[at + k].load(Ordering::Relaxed));
        }
    };
    let add = |cells: &[AtomicU64], at: usize, scale: f64, src: &[f64]| {
        for (k, s) in src.iter().enumerate() {
            let cell = &cells[at + k];
            let old = f64::from_bits(cell.load(Ordering::Relaxed));
            cell.store((old + scale * s).to_bits(), Ordering::Relaxed);
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .expect("thread pool construction");
    let tokens_done = AtomicUsize::new(0);
    let mut stats = TrainStats::default();
    for epoch in 0..cfg.epochs {
        let (loss_sum, pairs) = pool.install(|| {
            corpus
                .walks
                .par_iter()
                .enumerate()
                .map(|(widx, walk)| {
                    let mut rng = seed::rng(cfg.seed, &[PASS_TAG, epoch as u64, widx as u64]);
                    let mut center_buf = vec![0.0f64; dim];
                    let mut ctx_buf = vec![0.0f64; dim];
                    let mut delta = vec![0.0f64; dim];
                    let mut loss_sum = 0.0;
                    let mut pairs = 0usize;
                    for (i, &center) in walk.iter().enumerate() {
                        let t = tokens_done.fetch_add(1, Ordering::Relaxed);
                        let lr = lr_at(cfg, t, total_center_visits);
                        let lo = i.saturating_sub(cfg.window);
                        let hi = (i + cfg.window).min(walk.len() - 1);
                        let c0 = center.index() * dim;
                        for j in lo..=hi {
                            if j == i {
                                continue;
                            }
                            let pos = walk[j];
                            load(&input_cells, c0, &mut center_buf);
                            delta.fill(0.0);
                            let mut loss = 0.0;
                            for k in 0..=cfg.negatives {
                                let target = if k == 0 {
                                    pos
                                } else {
                                    let cand = vocab[table.sample(&mut rng)];
                                    if cand == pos {
                                        continue;
                                    }
                                    cand
                                };
                                let t0 = target.index() * dim;
                                load(&context_cells, t0, &mut ctx_buf);
                                let (term_loss, coef) =
                                    pair_term(dot(&center_buf, &ctx_buf), k == 0, lr);
                                loss += term_loss;
                                axpy(&mut delta, coef, &ctx_buf);
                                add(&context_cells, t0, coef, &center_buf);
                            }
                            add(&input_cells, c0, 1.0, &delta);
                            loss_sum += loss;
                            pairs += 1;
                        }
                    }
                    (loss_sum, pairs)
                })
                .reduce(|| (0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        });
        stats.epoch_losses.push(if pairs > 0 { loss_sum / pairs as f64 } else { 0.0 });
        stats.pairs_processed += pairs;
    }
    for (v, cell) in input.iter_mut().zip(&input_cells) {
        *v = f64::from_bits(cell.load(Ordering::Relaxed));
    }
    for (v, cell) in context.iter_mut().zip(&context_cells) {
        *v = f64::from_bits(cell.load(Ordering::Relaxed));
    }
    stats
}
