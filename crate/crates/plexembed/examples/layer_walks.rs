//! Shows the co-analysis walk machinery: the exact transition law at one
//! state, a few sampled walks with their layer traces, and how the stay
//! probability r shapes layer switching.
//!
//! Run with `cargo run --example layer_walks`.

use plexembed::graph::LayerId;
use plexembed::io::load_multilayer;
use plexembed::walk::{multilayer_walks_traced, step_distribution, WalkParams, WalkStep};

fn main() -> plexembed::Result<()> {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let loaded = load_multilayer(format!("{base}/office.edges"))?;
    let net = &loaded.net;
    let name = |n: plexembed::graph::NodeId| loaded.nodes.name(n.0);

    // The walk just moved ana -> dee through the lunch layer; where next?
    let ana = loaded.nodes.get("ana").unwrap();
    let dee = loaded.nodes.get("dee").unwrap();
    let lunch = loaded.layers.get("lunch").unwrap();
    let state = WalkStep {
        prev: plexembed::graph::NodeId(ana),
        curr: plexembed::graph::NodeId(dee),
        layer: LayerId(lunch),
    };
    let params = WalkParams { p: 2.0, q: 0.5, r: 0.5, ..WalkParams::default() };
    println!("next step after ana -> dee (lunch), p=2 q=0.5 r=0.5:");
    for (step, prob) in step_distribution(net, &state, &params)? {
        println!(
            "  {:<4} via {:<6} {:.4}",
            name(step.curr),
            loaded.layers.name(step.layer.0),
            prob
        );
    }

    // A few full walks, layer switches marked.
    let params = WalkParams { num_walks: 1, walk_length: 8, seed: 4, ..params };
    let (corpus, traces) = multilayer_walks_traced(net, &params)?;
    println!("\nsample walks (8 tokens, layer shown between hops):");
    for (walk, trace) in corpus.walks.iter().zip(&traces).take(3) {
        let mut line = String::from("  ");
        line.push_str(name(walk[0]));
        for (node, layer) in walk[1..].iter().zip(trace) {
            line.push_str(&format!(" -[{}]- {}", loaded.layers.name(layer.0), name(*node)));
        }
        println!("{line}");
    }

    println!("\nstay probability vs observed switch rate:");
    for r in [0.0, 0.1, 0.5, 0.9, 1.0] {
        let params = WalkParams { r, num_walks: 50, walk_length: 40, seed: 11, ..params };
        let (corpus, _) = multilayer_walks_traced(net, &params)?;
        println!(
            "  r={r:<4} switch rate {:.3}",
            corpus.layer_switch_rate().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
