//! Full link-prediction benchmark on a synthetic correlated block
//! model: hides a tenth of the merged edges, asks every predictor to
//! propose that many pairs, and tabulates accuracy over several seeds.
//!
//! Run with `cargo run --release --example link_prediction`.

use plexembed::io::{generate_synthetic, SyntheticSpec};
use plexembed::linkpred::{run_experiment, CandidateMode, Predictor};
use plexembed::methods::{Method, MethodConfig};
use plexembed::sgns::{Metric, TrainConfig};

fn main() -> plexembed::Result<()> {
    let spec = SyntheticSpec {
        num_nodes: 60,
        num_layers: 3,
        num_blocks: 2,
        p_in: 0.25,
        p_out: 0.02,
        layer_correlation: 0.5,
        seed: 1,
    };
    let net = generate_synthetic(&spec)?;
    println!(
        "block model: {} nodes, {} layers, {} layer edges, {} merged",
        net.num_nodes(),
        net.num_layers(),
        net.edge_count(),
        net.merge().edge_count()
    );

    let embedding = |method| {
        let mut cfg = MethodConfig::new(method);
        cfg.train = TrainConfig { dim: 32, ..TrainConfig::default() };
        Predictor::Embedding(cfg)
    };
    let predictors = [
        Predictor::CommonNeighbors,
        Predictor::Jaccard,
        embedding(Method::NetworkAggregation),
        embedding(Method::ResultsAggregation),
        embedding(Method::LayerCoanalysis),
    ];
    let seeds: Vec<u64> = (0..5).collect();

    println!("\n{:<10} {:>9} {:>9} {:>9}", "predictor", "accuracy", "std", "f1");
    for predictor in &predictors {
        let mut accs = Vec::new();
        let mut f1s = Vec::new();
        for &seed in &seeds {
            let report = run_experiment(
                &net,
                predictor,
                0.1,
                seed,
                Metric::Euclidean,
                CandidateMode::All,
            )?;
            accs.push(report.accuracy);
            f1s.push(report.f1);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let m = mean(&accs);
        let sd = (accs.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / accs.len() as f64).sqrt();
        println!("{:<10} {m:>9.3} {sd:>9.3} {:>9.3}", predictor.name(), mean(&f1s));
    }
    Ok(())
}
