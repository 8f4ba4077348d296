//! The three embedding strategies for multilayer networks.
//!
//! * Network aggregation: merge the layers into one graph, walk it,
//!   train once. Layer identity is discarded before walking.
//! * Results aggregation: walk and train each layer on its own, then
//!   concatenate the per-layer vectors. Layer identity survives into the
//!   result's coordinate blocks.
//! * Layer co-analysis: walk all layers jointly (see
//!   [`crate::walk::multilayer_walks`]), train once on the mixed corpus.
//!
//! All three share [`WalkParams`] and [`TrainConfig`]; per-layer runs in
//! results aggregation derive their own seeds, so the methods stay
//! independently reproducible from one configuration.

use std::str::FromStr;

use rayon::prelude::*;

use crate::graph::MultilayerNetwork;
use crate::sgns::{concat, train, EmbeddingSpace, TrainConfig};
use crate::walk::{graph_walks, multilayer_walks, WalkParams};
use crate::{seed, Error, Result};

const LAYER_RUN_TAG: u64 = 0x7261; // per-layer seed derivation

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    NetworkAggregation,
    ResultsAggregation,
    LayerCoanalysis,
}

impl Method {
    pub const ALL: [Method; 3] =
        [Method::NetworkAggregation, Method::ResultsAggregation, Method::LayerCoanalysis];

    pub fn short_name(&self) -> &'static str {
        match self {
            Method::NetworkAggregation => "na",
            Method::ResultsAggregation => "ra",
            Method::LayerCoanalysis => "lc",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "na" | "network-aggregation" => Ok(Method::NetworkAggregation),
            "ra" | "results-aggregation" => Ok(Method::ResultsAggregation),
            "lc" | "layer-coanalysis" => Ok(Method::LayerCoanalysis),
            other => Err(Error::Config(format!(
                "unknown method {other:?} (expected na, ra, or lc)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Full configuration of one embedding run.
#[derive(Clone, Copy, Debug)]
pub struct MethodConfig {
    pub method: Method,
    pub walk: WalkParams,
    pub train: TrainConfig,
    /// Dimension of each per-layer space in results aggregation; the
    /// concatenated result has `num_layers` times this. Defaults to
    /// `train.dim`, and is ignored by the other methods.
    pub per_layer_dim: Option<usize>,
}

impl MethodConfig {
    pub fn new(method: Method) -> MethodConfig {
        MethodConfig {
            method,
            walk: WalkParams::default(),
            train: TrainConfig::default(),
            per_layer_dim: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.walk.validate()?;
        self.train.validate()?;
        if self.per_layer_dim == Some(0) {
            return Err(Error::Config("per_layer_dim must be at least 1".into()));
        }
        Ok(())
    }
}

/// Runs the configured method.
pub fn embed(net: &MultilayerNetwork, cfg: &MethodConfig) -> Result<EmbeddingSpace> {
    cfg.validate()?;
    match cfg.method {
        Method::NetworkAggregation => network_aggregation(net, cfg),
        Method::ResultsAggregation => results_aggregation(net, cfg),
        Method::LayerCoanalysis => layer_coanalysis(net, cfg),
    }
}

/// Embeds the merged graph.
pub fn network_aggregation(net: &MultilayerNetwork, cfg: &MethodConfig) -> Result<EmbeddingSpace> {
    let corpus = graph_walks(&net.merge(), &cfg.walk)?;
    train(&corpus, net.num_nodes(), &cfg.train)
}

/// Embeds every layer separately and concatenates the results in layer
/// order.
pub fn results_aggregation(net: &MultilayerNetwork, cfg: &MethodConfig) -> Result<EmbeddingSpace> {
    if net.num_layers() == 0 {
        return Err(Error::Config("network has no layers".into()));
    }
    let spaces: Vec<EmbeddingSpace> = (0..net.num_layers())
        .into_par_iter()
        .map(|l| {
            let graph = net.layer_graph(crate::graph::LayerId(l as u32))?;
            let (walk, train_cfg) = layer_run_params(cfg, l);
            train(&graph_walks(&graph, &walk)?, net.num_nodes(), &train_cfg)
        })
        .collect::<Result<_>>()?;
    concat(&spaces)
}

/// Walk and training parameters for one layer of a results-aggregation
/// run: the shared seeds forked per layer, the per-layer dimension
/// applied.
pub fn layer_run_params(cfg: &MethodConfig, layer: usize) -> (WalkParams, TrainConfig) {
    let walk = WalkParams {
        seed: seed::derive(cfg.walk.seed, &[LAYER_RUN_TAG, layer as u64]),
        ..cfg.walk
    };
    let train = TrainConfig {
        dim: cfg.per_layer_dim.unwrap_or(cfg.train.dim),
        seed: seed::derive(cfg.train.seed, &[LAYER_RUN_TAG, layer as u64]),
        ..cfg.train
    };
    (walk, train)
}

/// Embeds the joint walk corpus that moves across layers.
pub fn layer_coanalysis(net: &MultilayerNetwork, cfg: &MethodConfig) -> Result<EmbeddingSpace> {
    let corpus = multilayer_walks(net, &cfg.walk)?;
    train(&corpus, net.num_nodes(), &cfg.train)
}
