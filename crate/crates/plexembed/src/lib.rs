//! Embeddings for multilayer networks.
//!
//! A multilayer network keeps one node set and several edge layers. This
//! crate turns such a network into node vectors three ways:
//!
//! * [`methods::network_aggregation`]: collapse the layers into one graph,
//!   walk it, train a single embedding.
//! * [`methods::results_aggregation`]: embed each layer separately and
//!   concatenate the per-layer vectors.
//! * [`methods::layer_coanalysis`]: walk the layers jointly, switching
//!   layers mid-walk with a tunable stay probability, and train one
//!   embedding from the mixed corpus.
//!
//! Walks are second-order (`p`/`q` biased), training is skip-gram with
//! negative sampling, and [`linkpred`] scores all of it against
//! common-neighbor and Jaccard baselines under a held-out edge split.
//!
//! Every sampling step is seeded; a run is reproducible from its
//! configuration alone. See the `examples/` directory for end-to-end
//! usage of each capability.

pub mod alias;
pub mod error;
pub mod graph;
pub mod io;
pub mod linkpred;
pub mod methods;
pub mod seed;
pub mod sgns;
pub mod walk;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
