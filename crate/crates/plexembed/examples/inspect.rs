//! Loads the bundled office dataset and walks through the structural
//! accessors: layer counts, degrees, incident layers, and the merged
//! view.
//!
//! Run with `cargo run --example inspect`.

use plexembed::graph::{LayerId, NodeId};
use plexembed::io::{load_labels, load_multilayer};

fn main() -> plexembed::Result<()> {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let loaded = load_multilayer(format!("{base}/office.edges"))?;
    let labels = load_labels(format!("{base}/office.labels"), &loaded.nodes)?;
    let net = &loaded.net;

    println!(
        "{} nodes, {} layers, {} layer edges ({} after merging)",
        net.num_nodes(),
        net.num_layers(),
        net.edge_count(),
        net.merge().edge_count()
    );
    for l in 0..net.num_layers() {
        let layer = LayerId(l as u32);
        println!("  layer {:<6} {:>2} edges", loaded.layers.name(layer.0), net.layer_edge_count(layer));
    }

    println!("\nper-node view:");
    let merged = net.merge();
    for v in 0..net.num_nodes() {
        let node = NodeId(v as u32);
        let per_layer: Vec<String> = (0..net.num_layers())
            .map(|l| net.degree(LayerId(l as u32), node).to_string())
            .collect();
        println!(
            "  {:<4} {:<12} merged degree {}, per layer [{}], active in {} layers",
            loaded.nodes.name(node.0),
            labels.get(node).unwrap_or("-"),
            merged.degree(node),
            per_layer.join(", "),
            net.connected_layers(node)
        );
    }

    println!("\nlabel totals:");
    for (label, count) in labels.counts() {
        println!("  {label}: {count}");
    }
    Ok(())
}
