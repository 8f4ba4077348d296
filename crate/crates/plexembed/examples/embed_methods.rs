//! Trains all three embedding strategies on the office network and
//! prints each node's nearest neighbors per method, showing how the
//! teams come out as clusters.
//!
//! Run with `cargo run --example embed_methods`.

use plexembed::graph::NodeId;
use plexembed::io::load_multilayer;
use plexembed::methods::{embed, Method, MethodConfig};
use plexembed::sgns::{EmbeddingSpace, Metric, TrainConfig};
use plexembed::walk::WalkParams;

fn nearest(space: &EmbeddingSpace, node: NodeId, k: usize) -> Vec<(NodeId, f64)> {
    let mut scored: Vec<(NodeId, f64)> = (0..space.num_nodes())
        .map(|v| NodeId(v as u32))
        .filter(|&v| v != node)
        .map(|v| (v, space.distance(node, v, Metric::Euclidean)))
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    scored.truncate(k);
    scored
}

fn main() -> plexembed::Result<()> {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let loaded = load_multilayer(format!("{base}/office.edges"))?;
    let name = |n: NodeId| loaded.nodes.name(n.0);

    for method in Method::ALL {
        let cfg = MethodConfig {
            walk: WalkParams { seed: 1, ..WalkParams::default() },
            train: TrainConfig { dim: 32, epochs: 3, seed: 1, ..TrainConfig::default() },
            // Keep the concatenated space comparable in size.
            per_layer_dim: Some(11),
            ..MethodConfig::new(method)
        };
        let space = embed(&loaded.net, &cfg)?;
        println!("{method} ({} dims):", space.dim());
        for probe in ["ana", "eli", "ivy"] {
            let node = NodeId(loaded.nodes.get(probe).unwrap());
            let line: Vec<String> = nearest(&space, node, 3)
                .into_iter()
                .map(|(v, d)| format!("{} ({d:.2})", name(v)))
                .collect();
            println!("  {probe:<4} -> {}", line.join(", "));
        }
        println!();
    }
    Ok(())
}
