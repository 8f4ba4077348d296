//! Round-trips every file format: edge lists with a pinned layer order,
//! embedding matrices, walk dumps, and experiment records.
//!
//! Run with `cargo run --example file_formats`.

use plexembed::graph::{LayerId, MultilayerNetwork, NodeId};
use plexembed::io::{
    append_records, load_multilayer, read_embedding, read_records, write_embedding,
    write_multilayer, write_walks, ExperimentRecord, NameTable,
};
use plexembed::methods::{embed, Method, MethodConfig};
use plexembed::sgns::TrainConfig;
use plexembed::walk::{multilayer_walks, WalkParams};

fn show(path: &std::path::Path, lines: usize) {
    println!("--- {} (first {lines} lines)", path.file_name().unwrap().to_string_lossy());
    let text = std::fs::read_to_string(path).unwrap();
    for line in text.lines().take(lines) {
        let mut line = line.to_string();
        if line.len() > 72 {
            line.truncate(72);
            line.push_str("...");
        }
        println!("{line}");
    }
    println!();
}

fn main() -> plexembed::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let t = |x, y, l| (NodeId(x), NodeId(y), LayerId(l));
    let (net, _) = MultilayerNetwork::from_triples(
        5,
        2,
        &[t(0, 1, 0), t(1, 2, 0), t(2, 3, 0), t(3, 4, 1), t(0, 4, 1), t(1, 3, 1)],
    )?;
    let mut nodes = NameTable::new();
    for name in ["ada", "ben", "cy", "dot", "ed"] {
        nodes.intern(name);
    }
    let mut layers = NameTable::new();
    layers.intern("wired");
    layers.intern("wireless");

    let edges_path = dir.path().join("net.edges");
    write_multilayer(&net, &nodes, &layers, &edges_path)?;
    show(&edges_path, 4);

    let reloaded = load_multilayer(&edges_path)?;
    assert_eq!(reloaded.net.triples(), net.triples());
    println!("edge list reloads to an identical network\n");

    let cfg = MethodConfig {
        train: TrainConfig { dim: 6, ..TrainConfig::default() },
        walk: WalkParams { num_walks: 5, walk_length: 20, ..WalkParams::default() },
        ..MethodConfig::new(Method::LayerCoanalysis)
    };
    let space = embed(&net, &cfg)?;
    let emb_path = dir.path().join("net.emb");
    write_embedding(&space, &nodes, &emb_path)?;
    show(&emb_path, 3);
    let (back, back_names) = read_embedding(&emb_path)?;
    let drift = (0..net.num_nodes())
        .flat_map(|v| {
            let v = NodeId(v as u32);
            space.row(v).iter().zip(back.row(v)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
        })
        .fold(0.0f64, f64::max);
    println!("embedding round trip: max drift {drift:.1e}, names preserved: {}\n", back_names == nodes);

    let walks_path = dir.path().join("net.walks");
    let corpus = multilayer_walks(&net, &cfg.walk)?;
    write_walks(&corpus, &nodes, &walks_path)?;
    show(&walks_path, 3);

    let records_path = dir.path().join("runs.jsonl");
    append_records(
        &records_path,
        &[ExperimentRecord {
            method: "lc".into(),
            dataset: "demo".into(),
            seed: 0,
            frac: 0.1,
            metric: "euclidean".into(),
            accuracy: 0.25,
            precision: 0.25,
            recall: 0.25,
            f1: 0.4,
            runtime_ms: 3,
        }],
    )?;
    show(&records_path, 1);
    println!("records read back: {}", read_records(&records_path)?.len());
    Ok(())
}
