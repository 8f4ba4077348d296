//! Second-order random walks, on multilayer networks and on flat graphs.
//!
//! A walk state is the step just taken: previous node, current node, and
//! the layer the step used. The next step is drawn from a distribution
//! that combines two biases:
//!
//! * the `p`/`q` bias: a candidate `y` reachable from the current node
//!   `x` gets weight `1/p` if `y` is the previous node, `1` if `y` is
//!   adjacent to the previous node in the candidate's layer, and `1/q`
//!   otherwise;
//! * the layer bias: when `x` has neighbors in more than one layer, the
//!   current layer keeps probability mass `r` and the remaining `1 - r`
//!   is split evenly over the other layers incident to `x`. When `x` has
//!   neighbors in a single layer the walk just uses that layer.
//!
//! [`step_distribution`] exposes this law exactly; the walk generators
//! sample from it. Walks are seeded per (seed, start slot, walk index),
//! so a corpus is reproducible regardless of how many threads build it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, LayerId, MultilayerNetwork, NodeId};
use crate::{seed, Error, Result};

const NODE_SLOT_TAG: u64 = 0x776b; // multilayer walk, per-node start
const EDGE_SLOT_TAG: u64 = 0x7765; // multilayer walk, uniform-edge start
const GRAPH_SLOT_TAG: u64 = 0x7767; // flat-graph walk

/// How walk starting points are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StartMode {
    /// Every node starts `num_walks` walks.
    #[default]
    PerNode,
    /// Each walk starts from a uniformly drawn directed edge occurrence.
    /// The corpus still holds `num_walks * num_nodes` walks.
    UniformEdge,
}

/// Walk generation parameters.
#[derive(Clone, Copy, Debug)]
pub struct WalkParams {
    /// Return bias: weight `1/p` for stepping back to the previous node.
    pub p: f64,
    /// Exploration bias: weight `1/q` for candidates not adjacent to the
    /// previous node.
    pub q: f64,
    /// Probability mass kept on the current layer when others are open.
    pub r: f64,
    /// Walks started per node.
    pub num_walks: usize,
    /// Tokens per walk, start node included.
    pub walk_length: usize,
    pub seed: u64,
    pub start: StartMode,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams {
            p: 0.5,
            q: 0.5,
            r: 0.5,
            num_walks: 10,
            walk_length: 80,
            seed: 0,
            start: StartMode::PerNode,
        }
    }
}

impl WalkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::Config(format!("p must be positive and finite, got {}", self.p)));
        }
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::Config(format!("q must be positive and finite, got {}", self.q)));
        }
        if !(self.r.is_finite() && (0.0..=1.0).contains(&self.r)) {
            return Err(Error::Config(format!("r must lie in [0, 1], got {}", self.r)));
        }
        if self.num_walks == 0 {
            return Err(Error::Config("num_walks must be at least 1".into()));
        }
        if self.walk_length == 0 {
            return Err(Error::Config("walk_length must be at least 1".into()));
        }
        Ok(())
    }
}

/// One taken step: the walker sits at `curr`, having arrived from `prev`
/// through an edge in `layer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub prev: NodeId,
    pub curr: NodeId,
    pub layer: LayerId,
}

/// Counters accumulated while generating a corpus.
///
/// A step is *eligible* for a layer switch when the node it leaves has
/// neighbors in more than one layer; `layer_switches` counts the eligible
/// steps that actually changed layer. The initial move of a walk has no
/// layer to switch from and is never counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub eligible_steps: usize,
    pub layer_switches: usize,
    /// Walks cut to a single token because the start node is isolated.
    pub singleton_walks: usize,
}

/// A bag of walks plus generation counters.
#[derive(Clone, Debug)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<NodeId>>,
    pub total_tokens: usize,
    pub stats: WalkStats,
}

impl WalkCorpus {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// Fraction of eligible steps that switched layer, if any step was
    /// eligible.
    pub fn layer_switch_rate(&self) -> Option<f64> {
        if self.stats.eligible_steps == 0 {
            None
        } else {
            Some(self.stats.layer_switches as f64 / self.stats.eligible_steps as f64)
        }
    }
}

/// The `p`/`q` weight of stepping to `candidate` through an edge in
/// `layer`, having previously been at `z`.
pub fn alpha_pq(
    net: &MultilayerNetwork,
    z: NodeId,
    candidate: NodeId,
    layer: LayerId,
    p: f64,
    q: f64,
) -> f64 {
    if candidate == z {
        1.0 / p
    } else if net.has_edge(z, candidate, layer) {
        1.0
    } else {
        1.0 / q
    }
}

/// Flat-graph variant of [`alpha_pq`].
pub fn graph_alpha(g: &Graph, z: NodeId, candidate: NodeId, p: f64, q: f64) -> f64 {
    if candidate == z {
        1.0 / p
    } else if g.has_edge(z, candidate) {
        1.0
    } else {
        1.0 / q
    }
}

/// The exact next-step distribution from `state`. Entries are ordered by
/// (layer, neighbor), carry strictly positive probabilities, and sum
/// to 1.
///
/// Fails if `state` is not reachable by any walk, i.e. if `state.curr`
/// has no neighbor in `state.layer`.
pub fn step_distribution(
    net: &MultilayerNetwork,
    state: &WalkStep,
    params: &WalkParams,
) -> Result<Vec<(WalkStep, f64)>> {
    params.validate()?;
    for n in [state.prev, state.curr] {
        if n.index() >= net.num_nodes() {
            return Err(Error::InvalidNode { node: n.index(), num_nodes: net.num_nodes() });
        }
    }
    if state.layer.index() >= net.num_layers() {
        return Err(Error::InvalidLayer {
            layer: state.layer.index(),
            num_layers: net.num_layers(),
        });
    }
    if net.neighbors(state.layer, state.curr).is_empty() {
        return Err(Error::Config(format!(
            "node {} has no edges in layer {}; the state is unreachable",
            state.curr, state.layer
        )));
    }
    let sampler = Sampler::new(net, params);
    let mut buf = Vec::new();
    sampler.transitions(state.prev, state.curr, state.layer, &mut buf);
    let total: f64 = buf.iter().map(|e| e.2).sum();
    Ok(buf
        .into_iter()
        .map(|(y, l, w)| (WalkStep { prev: state.curr, curr: y, layer: l }, w / total))
        .collect())
}

/// Draws one transition from `state` through the same weight
/// enumeration and sampling loop the walk generator uses.
pub fn sample_step(
    net: &MultilayerNetwork,
    state: &WalkStep,
    params: &WalkParams,
    rng: &mut ChaCha8Rng,
) -> Result<WalkStep> {
    // Reuse the validation; the distribution itself is recomputed from
    // raw weights below, exactly as extend_walk does.
    step_distribution(net, state, params)?;
    let sampler = Sampler::new(net, params);
    let mut buf = Vec::new();
    sampler.transitions(state.prev, state.curr, state.layer, &mut buf);
    let weights: Vec<f64> = buf.iter().map(|e| e.2).collect();
    let (y, l, _) = buf[sample_index(&weights, rng)];
    Ok(WalkStep { prev: state.curr, curr: y, layer: l })
}

/// Flat-graph next-step distribution, ordered by neighbor and summing
/// to 1. Empty when `curr` is isolated.
pub fn graph_step_distribution(
    g: &Graph,
    prev: NodeId,
    curr: NodeId,
    p: f64,
    q: f64,
) -> Vec<(NodeId, f64)> {
    let weights: Vec<(NodeId, f64)> = g
        .neighbors(curr)
        .iter()
        .map(|&y| (y, graph_alpha(g, prev, y, p, q)))
        .collect();
    let total: f64 = weights.iter().map(|e| e.1).sum();
    weights.into_iter().map(|(y, w)| (y, w / total)).collect()
}

/// Walks that traverse all layers jointly, switching layers according to
/// `params.r`.
pub fn multilayer_walks(net: &MultilayerNetwork, params: &WalkParams) -> Result<WalkCorpus> {
    Ok(multilayer_walks_traced(net, params)?.0)
}

/// Like [`multilayer_walks`], also returning the layer taken at each step
/// of each walk (`traces[w].len() == walks[w].len() - 1`).
pub fn multilayer_walks_traced(
    net: &MultilayerNetwork,
    params: &WalkParams,
) -> Result<(WalkCorpus, Vec<Vec<LayerId>>)> {
    params.validate()?;
    let sampler = Sampler::new(net, params);
    let directed_edges = match params.start {
        StartMode::UniformEdge => {
            let mut dir = Vec::with_capacity(net.edge_count() * 2);
            for l in 0..net.num_layers() {
                let l = LayerId(l as u32);
                for x in 0..net.num_nodes() {
                    let x = NodeId(x as u32);
                    for &y in net.neighbors(l, x) {
                        dir.push((x, y, l));
                    }
                }
            }
            dir
        }
        StartMode::PerNode => Vec::new(),
    };
    let num_slots = params.num_walks * net.num_nodes();
    let outs: Vec<WalkOut> = (0..num_slots)
        .into_par_iter()
        .map(|slot| {
            if params.start == StartMode::UniformEdge && !directed_edges.is_empty() {
                let mut rng = seed::rng(params.seed, &[EDGE_SLOT_TAG, slot as u64]);
                let (x, y, l) = directed_edges[rng.gen_range(0..directed_edges.len())];
                let mut tokens = vec![x, y];
                let mut layers = vec![l];
                tokens.truncate(params.walk_length);
                layers.truncate(tokens.len().saturating_sub(1));
                sampler.extend_walk(tokens, layers, &mut rng)
            } else {
                // Slots sweep the node set once per round.
                let node = NodeId((slot % net.num_nodes()) as u32);
                let round = (slot / net.num_nodes()) as u64;
                let mut rng = seed::rng(params.seed, &[NODE_SLOT_TAG, node.0 as u64, round]);
                sampler.walk_from_node(node, &mut rng)
            }
        })
        .collect();
    Ok(collect_corpus(outs))
}

/// Second-order walks on a flat graph; `params.r` is ignored.
pub fn graph_walks(g: &Graph, params: &WalkParams) -> Result<WalkCorpus> {
    params.validate()?;
    let directed_edges = match params.start {
        StartMode::UniformEdge => g
            .edges()
            .into_iter()
            .flat_map(|(x, y)| [(x, y), (y, x)])
            .collect(),
        StartMode::PerNode => Vec::new(),
    };
    let num_slots = params.num_walks * g.num_nodes();
    let outs: Vec<WalkOut> = (0..num_slots)
        .into_par_iter()
        .map(|slot| {
            let mut tokens;
            let mut rng;
            if params.start == StartMode::UniformEdge && !directed_edges.is_empty() {
                rng = seed::rng(params.seed, &[EDGE_SLOT_TAG, GRAPH_SLOT_TAG, slot as u64]);
                let (x, y) = directed_edges[rng.gen_range(0..directed_edges.len())];
                tokens = vec![x, y];
                tokens.truncate(params.walk_length);
            } else {
                let node = NodeId((slot % g.num_nodes()) as u32);
                let round = (slot / g.num_nodes()) as u64;
                rng = seed::rng(params.seed, &[GRAPH_SLOT_TAG, node.0 as u64, round]);
                tokens = vec![node];
                if g.degree(node) == 0 {
                    return WalkOut::singleton(tokens);
                }
                let ns = g.neighbors(node);
                tokens.push(ns[rng.gen_range(0..ns.len())]);
            }
            let mut weights = Vec::new();
            while tokens.len() < params.walk_length {
                let curr = tokens[tokens.len() - 1];
                let prev = tokens[tokens.len() - 2];
                weights.clear();
                weights.extend(
                    g.neighbors(curr)
                        .iter()
                        .map(|&y| graph_alpha(g, prev, y, params.p, params.q)),
                );
                let pick = sample_index(&weights, &mut rng);
                tokens.push(g.neighbors(curr)[pick]);
            }
            WalkOut { tokens, layers: Vec::new(), eligible: 0, switches: 0, singleton: false }
        })
        .collect();
    Ok(collect_corpus(outs).0)
}

struct WalkOut {
    tokens: Vec<NodeId>,
    layers: Vec<LayerId>,
    eligible: usize,
    switches: usize,
    singleton: bool,
}

impl WalkOut {
    fn singleton(tokens: Vec<NodeId>) -> WalkOut {
        WalkOut { tokens, layers: Vec::new(), eligible: 0, switches: 0, singleton: true }
    }
}

fn collect_corpus(outs: Vec<WalkOut>) -> (WalkCorpus, Vec<Vec<LayerId>>) {
    let mut stats = WalkStats::default();
    let mut total_tokens = 0;
    let mut walks = Vec::with_capacity(outs.len());
    let mut traces = Vec::with_capacity(outs.len());
    for out in outs {
        stats.eligible_steps += out.eligible;
        stats.layer_switches += out.switches;
        stats.singleton_walks += out.singleton as usize;
        total_tokens += out.tokens.len();
        walks.push(out.tokens);
        traces.push(out.layers);
    }
    (WalkCorpus { walks, total_tokens, stats }, traces)
}

/// Draws an index proportionally to `weights` (not necessarily
/// normalized, at least one entry, all non-negative with positive sum).
fn sample_index(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut t = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if t < w {
            return i;
        }
        t -= w;
    }
    weights.len() - 1
}

/// Shared transition enumeration for multilayer walks.
struct Sampler<'a> {
    net: &'a MultilayerNetwork,
    params: &'a WalkParams,
    // connected_layers per node, precomputed once per corpus
    layer_count: Vec<u32>,
}

impl<'a> Sampler<'a> {
    fn new(net: &'a MultilayerNetwork, params: &'a WalkParams) -> Sampler<'a> {
        let layer_count = (0..net.num_nodes())
            .map(|v| net.connected_layers(NodeId(v as u32)) as u32)
            .collect();
        Sampler { net, params, layer_count }
    }

    /// Fills `out` with (candidate, layer, weight) entries for the state
    /// (prev `z`, curr `x`, layer), ordered by (layer, neighbor). Weights
    /// are unnormalized and strictly positive; `out` stays empty only
    /// when `x` is isolated.
    fn transitions(&self, z: NodeId, x: NodeId, layer: LayerId, out: &mut Vec<(NodeId, LayerId, f64)>) {
        out.clear();
        let open = self.layer_count[x.index()];
        let (p, q, r) = (self.params.p, self.params.q, self.params.r);
        if open <= 1 {
            // No layer choice: step within the only layer that has edges.
            for l in 0..self.net.num_layers() {
                let l = LayerId(l as u32);
                for &y in self.net.neighbors(l, x) {
                    out.push((y, l, alpha_pq(self.net, z, y, l, p, q)));
                }
            }
            return;
        }
        for l in 0..self.net.num_layers() {
            let l = LayerId(l as u32);
            let ns = self.net.neighbors(l, x);
            if ns.is_empty() {
                continue;
            }
            let factor = if l == layer { r } else { (1.0 - r) / (open - 1) as f64 };
            if factor == 0.0 {
                continue;
            }
            for &y in ns {
                out.push((y, l, factor * alpha_pq(self.net, z, y, l, p, q)));
            }
        }
    }

    fn walk_from_node(&self, start: NodeId, rng: &mut ChaCha8Rng) -> WalkOut {
        let mut tokens = Vec::with_capacity(self.params.walk_length);
        tokens.push(start);
        if self.layer_count[start.index()] == 0 {
            return WalkOut::singleton(tokens);
        }
        // First move: uniform over the (neighbor, layer) pairs of the start.
        let mut layers = Vec::with_capacity(self.params.walk_length);
        if tokens.len() < self.params.walk_length {
            let total: usize =
                (0..self.net.num_layers()).map(|l| self.net.degree(LayerId(l as u32), start)).sum();
            let mut pick = rng.gen_range(0..total);
            'outer: for l in 0..self.net.num_layers() {
                let l = LayerId(l as u32);
                let ns = self.net.neighbors(l, start);
                if pick < ns.len() {
                    tokens.push(ns[pick]);
                    layers.push(l);
                    break 'outer;
                }
                pick -= ns.len();
            }
        }
        self.extend_walk(tokens, layers, rng)
    }

    /// Continues a started walk to full length with second-order steps.
    fn extend_walk(
        &self,
        mut tokens: Vec<NodeId>,
        mut layers: Vec<LayerId>,
        rng: &mut ChaCha8Rng,
    ) -> WalkOut {
        let mut eligible = 0;
        let mut switches = 0;
        let mut buf = Vec::new();
        let mut weights = Vec::new();
        while tokens.len() < self.params.walk_length {
            let curr = tokens[tokens.len() - 1];
            let prev = tokens[tokens.len() - 2];
            let layer = layers[layers.len() - 1];
            self.transitions(prev, curr, layer, &mut buf);
            weights.clear();
            weights.extend(buf.iter().map(|e| e.2));
            let (y, l, _) = buf[sample_index(&weights, rng)];
            if self.layer_count[curr.index()] > 1 {
                eligible += 1;
                if l != layer {
                    switches += 1;
                }
            }
            tokens.push(y);
            layers.push(l);
        }
        WalkOut { tokens, layers, eligible, switches, singleton: false }
    }
}
