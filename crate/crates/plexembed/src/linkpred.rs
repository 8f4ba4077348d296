//! Link-prediction evaluation: hold out a fraction of merged edges,
//! re-embed (or score a baseline on) the reduced network, rank candidate
//! pairs, and check how many held-out edges land in the top k.
//!
//! The candidate set contains every node pair absent from the training
//! edges, so it mixes the held-out edges with true non-edges. k equals
//! the held-out count; embeddings rank candidates by ascending distance,
//! baselines by descending similarity, ties broken by canonical pair
//! order either way.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::graph::{Graph, LayerId, MultilayerNetwork, NodeId};
use crate::methods::{embed, Method, MethodConfig};
use crate::sgns::{EmbeddingSpace, Metric};
use crate::{seed, Error, Result};

const SPLIT_TAG: u64 = 0x7370; // edge split shuffling
const CAND_TAG: u64 = 0x6373; // sampled candidate selection
const EXP_WALK_TAG: u64 = 0x6577; // per-experiment walk seed
const EXP_TRAIN_TAG: u64 = 0x6574; // per-experiment train seed

/// A held-out split of a graph's edge set.
#[derive(Clone, Debug)]
pub struct EdgeSplit {
    /// Edges kept for training, canonical orientation, sorted.
    pub train_edges: Vec<(NodeId, NodeId)>,
    /// Edges held out for prediction, canonical orientation, sorted.
    pub test_edges: Vec<(NodeId, NodeId)>,
    pub seed: u64,
}

/// One ranked candidate pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoredPair {
    pub a: NodeId,
    pub b: NodeId,
    /// Distance for embeddings, similarity for baselines.
    pub score: f64,
}

/// Outcome of one experiment run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictionReport {
    pub correct: usize,
    pub predicted: usize,
    pub test_size: usize,
    /// `correct / test_size`.
    pub accuracy: f64,
    /// `correct / predicted`.
    pub precision: f64,
    /// `correct / test_size`.
    pub recall: f64,
    /// `2 * accuracy / (1 + accuracy)`, see [`f1`].
    pub f1: f64,
}

/// Neighborhood-overlap baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Baseline {
    CommonNeighbors,
    Jaccard,
}

/// What produces the ranking in an experiment.
#[derive(Clone, Debug)]
pub enum Predictor {
    CommonNeighbors,
    Jaccard,
    Embedding(MethodConfig),
}

impl Predictor {
    pub fn name(&self) -> &'static str {
        match self {
            Predictor::CommonNeighbors => "cn",
            Predictor::Jaccard => "jaccard",
            Predictor::Embedding(cfg) => cfg.method.short_name(),
        }
    }
}

impl FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Predictor> {
        match s {
            "cn" | "common-neighbors" => Ok(Predictor::CommonNeighbors),
            "jaccard" => Ok(Predictor::Jaccard),
            other => Ok(Predictor::Embedding(MethodConfig::new(other.parse::<Method>()?))),
        }
    }
}

/// Which pairs are ranked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateMode {
    /// Every pair absent from the training edges.
    All,
    /// The test edges plus this many sampled true non-edges; keeps large
    /// networks tractable.
    Sampled { non_edges: usize },
}

fn canonical(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Splits the edge set: `round(frac * |E|)` edges become the test set,
/// drawn uniformly without replacement.
pub fn split_edges(g: &Graph, frac: f64, split_seed: u64) -> Result<EdgeSplit> {
    if !(frac.is_finite() && 0.0 < frac && frac < 1.0) {
        return Err(Error::Config(format!("test fraction must lie in (0, 1), got {frac}")));
    }
    let mut edges = g.edges();
    let k = (frac * edges.len() as f64).round() as usize;
    if k == 0 {
        return Err(Error::DegenerateSplit("test"));
    }
    if k == edges.len() {
        return Err(Error::DegenerateSplit("training"));
    }
    let mut rng = seed::rng(split_seed, &[SPLIT_TAG]);
    edges.shuffle(&mut rng);
    let mut test_edges: Vec<_> = edges[..k].to_vec();
    let mut train_edges: Vec<_> = edges[k..].to_vec();
    test_edges.sort_unstable();
    train_edges.sort_unstable();
    Ok(EdgeSplit { train_edges, test_edges, seed: split_seed })
}

/// Ranks candidates by ascending embedding distance; ties fall back to
/// canonical pair order.
pub fn rank_candidates(
    space: &EmbeddingSpace,
    candidates: &[(NodeId, NodeId)],
    metric: Metric,
) -> Vec<ScoredPair> {
    let mut scored: Vec<ScoredPair> = candidates
        .iter()
        .map(|&(a, b)| {
            let (a, b) = canonical(a, b);
            ScoredPair { a, b, score: space.distance(a, b, metric) }
        })
        .collect();
    scored.sort_by(|x, y| {
        x.score.total_cmp(&y.score).then_with(|| (x.a, x.b).cmp(&(y.a, y.b)))
    });
    scored
}

/// Ranks candidates by descending baseline similarity; ties fall back to
/// canonical pair order.
pub fn rank_baseline(
    g: &Graph,
    candidates: &[(NodeId, NodeId)],
    baseline: Baseline,
) -> Vec<ScoredPair> {
    let mut scored: Vec<ScoredPair> = candidates
        .iter()
        .map(|&(a, b)| {
            let (a, b) = canonical(a, b);
            let score = match baseline {
                Baseline::CommonNeighbors => common_neighbors(g, a, b) as f64,
                Baseline::Jaccard => jaccard(g, a, b),
            };
            ScoredPair { a, b, score }
        })
        .collect();
    scored.sort_by(|x, y| {
        y.score.total_cmp(&x.score).then_with(|| (x.a, x.b).cmp(&(y.a, y.b)))
    });
    scored
}

/// The first `k` pairs of a ranked list.
pub fn predict_links(ranked: &[ScoredPair], k: usize) -> Result<HashSet<(NodeId, NodeId)>> {
    if k > ranked.len() {
        return Err(Error::InsufficientCandidates { requested: k, available: ranked.len() });
    }
    Ok(ranked[..k].iter().map(|sp| (sp.a, sp.b)).collect())
}

/// Fraction of test pairs recovered.
pub fn accuracy(
    predicted: &HashSet<(NodeId, NodeId)>,
    test: &HashSet<(NodeId, NodeId)>,
) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::DegenerateSplit("test"));
    }
    let correct = test.iter().filter(|pair| predicted.contains(*pair)).count();
    Ok(correct as f64 / test.len() as f64)
}

/// F1 over the held-out pairs: with recovery rate `a = |∩|/|test|` this
/// is `2a / (1 + a)`, the harmonic mean of recall `a` and the precision
/// measured over held-out pairs alone (1 whenever anything is
/// recovered). For the plain harmonic mean of externally computed
/// precision and recall use [`f_measure`].
pub fn f1(
    predicted: &HashSet<(NodeId, NodeId)>,
    test: &HashSet<(NodeId, NodeId)>,
) -> Result<f64> {
    let a = accuracy(predicted, test)?;
    Ok(2.0 * a / (1.0 + a))
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Number of shared neighbors.
pub fn common_neighbors(g: &Graph, x: NodeId, y: NodeId) -> usize {
    let (mut xs, mut ys) = (g.neighbors(x).iter(), g.neighbors(y).iter());
    let (mut a, mut b) = (xs.next(), ys.next());
    let mut count = 0;
    while let (Some(va), Some(vb)) = (a, b) {
        match va.cmp(vb) {
            std::cmp::Ordering::Less => a = xs.next(),
            std::cmp::Ordering::Greater => b = ys.next(),
            std::cmp::Ordering::Equal => {
                count += 1;
                a = xs.next();
                b = ys.next();
            }
        }
    }
    count
}

/// Neighborhood Jaccard similarity; 0 when both neighborhoods are empty.
pub fn jaccard(g: &Graph, x: NodeId, y: NodeId) -> f64 {
    let inter = common_neighbors(g, x, y);
    let union = g.degree(x) + g.degree(y) - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Candidate pairs for a training graph under `mode`, in canonical
/// order, deduplicated.
pub fn candidate_pairs(
    train: &Graph,
    test_edges: &[(NodeId, NodeId)],
    mode: CandidateMode,
    cand_seed: u64,
) -> Vec<(NodeId, NodeId)> {
    match mode {
        CandidateMode::All => {
            let n = train.num_nodes() as u32;
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if !train.has_edge(NodeId(a), NodeId(b)) {
                        out.push((NodeId(a), NodeId(b)));
                    }
                }
            }
            out
        }
        CandidateMode::Sampled { non_edges } => {
            let test_set: HashSet<(NodeId, NodeId)> = test_edges.iter().copied().collect();
            let n = train.num_nodes() as u32;
            let mut pool = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    let pair = (NodeId(a), NodeId(b));
                    if !train.has_edge(pair.0, pair.1) && !test_set.contains(&pair) {
                        pool.push(pair);
                    }
                }
            }
            let mut rng = seed::rng(cand_seed, &[CAND_TAG]);
            pool.shuffle(&mut rng);
            pool.truncate(non_edges);
            let mut out: Vec<_> = test_edges.to_vec();
            out.extend(pool);
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

/// Runs the full protocol once: split, retrain on the reduced network,
/// rank, predict, score. The experiment `run_seed` drives the split, the
/// candidate sample, and (for embedding predictors) the walk and
/// training seeds, so one seed pins the whole run while all predictors
/// sharing it see the same split.
pub fn run_experiment(
    net: &MultilayerNetwork,
    predictor: &Predictor,
    frac: f64,
    run_seed: u64,
    metric: Metric,
    mode: CandidateMode,
) -> Result<PredictionReport> {
    let merged = net.merge();
    let split = split_edges(&merged, frac, run_seed)?;
    let test_set: HashSet<(NodeId, NodeId)> = split.test_edges.iter().copied().collect();
    let train_net = net.without_pairs(&test_set);
    let train_merged = train_net.merge();
    let candidates = candidate_pairs(&train_merged, &split.test_edges, mode, run_seed);
    let k = split.test_edges.len();

    let ranked = match predictor {
        Predictor::CommonNeighbors => {
            rank_baseline(&train_merged, &candidates, Baseline::CommonNeighbors)
        }
        Predictor::Jaccard => rank_baseline(&train_merged, &candidates, Baseline::Jaccard),
        Predictor::Embedding(cfg) => {
            let mut cfg = *cfg;
            cfg.walk.seed = seed::derive(run_seed, &[EXP_WALK_TAG]);
            cfg.train.seed = seed::derive(run_seed, &[EXP_TRAIN_TAG]);
            let space = embed(&train_net, &cfg)?;
            rank_candidates(&space, &candidates, metric)
        }
    };
    let predicted = predict_links(&ranked, k)?;
    let correct = test_set.iter().filter(|pair| predicted.contains(*pair)).count();
    let acc = correct as f64 / k as f64;
    Ok(PredictionReport {
        correct,
        predicted: predicted.len(),
        test_size: k,
        accuracy: acc,
        precision: if predicted.is_empty() { 0.0 } else { correct as f64 / predicted.len() as f64 },
        recall: acc,
        f1: 2.0 * acc / (1.0 + acc),
    })
}

/// Per-layer view of a merged prediction: layer `l`'s positives are the
/// test pairs that were edges of `l` in the original network.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerScore {
    pub layer: LayerId,
    pub test_edges: usize,
    pub correct: usize,
    pub recall: f64,
}

pub fn per_layer_breakdown(
    net: &MultilayerNetwork,
    predicted: &HashSet<(NodeId, NodeId)>,
    test: &HashSet<(NodeId, NodeId)>,
) -> Vec<LayerScore> {
    (0..net.num_layers())
        .map(|l| {
            let layer = LayerId(l as u32);
            let layer_test: Vec<_> =
                test.iter().filter(|&&(a, b)| net.has_edge(a, b, layer)).collect();
            let correct =
                layer_test.iter().filter(|&&&pair| predicted.contains(&pair)).count();
            let recall = if layer_test.is_empty() {
                0.0
            } else {
                correct as f64 / layer_test.len() as f64
            };
            LayerScore { layer, test_edges: layer_test.len(), correct, recall }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTriple;

    fn pair(a: u32, b: u32) -> (NodeId, NodeId) {
        (NodeId(a), NodeId(b))
    }

    fn path_graph(n: u32) -> Graph {
        let pairs: Vec<_> = (0..n - 1).map(|i| pair(i, i + 1)).collect();
        Graph::from_pairs(n as usize, &pairs).unwrap()
    }

    #[test]
    fn split_partitions_the_edges() {
        let g = path_graph(11); // 10 edges
        let split = split_edges(&g, 0.1, 3).unwrap();
        assert_eq!(split.test_edges.len(), 1);
        assert_eq!(split.train_edges.len(), 9);
        let mut all: Vec<_> =
            split.train_edges.iter().chain(&split.test_edges).copied().collect();
        all.sort_unstable();
        assert_eq!(all, g.edges());
        let again = split_edges(&g, 0.1, 3).unwrap();
        assert_eq!(again.test_edges, split.test_edges);
        let other = split_edges(&g, 0.1, 4).unwrap();
        assert_eq!(other.test_edges.len(), 1);
    }

    #[test]
    fn split_rejects_degenerate_fractions() {
        let g = path_graph(4);
        assert!(matches!(split_edges(&g, 0.01, 0), Err(Error::DegenerateSplit("test"))));
        assert!(matches!(split_edges(&g, 0.99, 0), Err(Error::DegenerateSplit("training"))));
        assert!(split_edges(&g, 1.5, 0).is_err());
        assert!(split_edges(&g, 0.0, 0).is_err());
    }

    #[test]
    fn baseline_values_by_hand() {
        // 0 and 1 share neighbors {2, 3}; 4 hangs off 1 only.
        let g = Graph::from_pairs(
            5,
            &[pair(0, 2), pair(0, 3), pair(1, 2), pair(1, 3), pair(1, 4)],
        )
        .unwrap();
        assert_eq!(common_neighbors(&g, NodeId(0), NodeId(1)), 2);
        assert_eq!(common_neighbors(&g, NodeId(2), NodeId(4)), 1);
        assert_eq!(common_neighbors(&g, NodeId(0), NodeId(4)), 0);
        assert!((jaccard(&g, NodeId(0), NodeId(1)) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(jaccard(&g, NodeId(2), NodeId(3)), 1.0);
        let lonely = Graph::from_pairs(3, &[pair(0, 1)]).unwrap();
        assert_eq!(jaccard(&lonely, NodeId(2), NodeId(2)), 0.0);
    }

    #[test]
    fn baselines_are_symmetric() {
        let g = Graph::from_pairs(
            6,
            &[pair(0, 1), pair(1, 2), pair(2, 3), pair(3, 0), pair(1, 4)],
        )
        .unwrap();
        for a in 0..6u32 {
            for b in 0..6u32 {
                assert_eq!(
                    common_neighbors(&g, NodeId(a), NodeId(b)),
                    common_neighbors(&g, NodeId(b), NodeId(a))
                );
                assert_eq!(jaccard(&g, NodeId(a), NodeId(b)), jaccard(&g, NodeId(b), NodeId(a)));
            }
        }
    }

    #[test]
    fn ranking_orders_and_breaks_ties() {
        let mut space = EmbeddingSpace::zeros(4, 1);
        space.row_mut(NodeId(0))[0] = 0.0;
        space.row_mut(NodeId(1))[0] = 1.0;
        space.row_mut(NodeId(2))[0] = 1.0;
        space.row_mut(NodeId(3))[0] = 3.0;
        let cands = [pair(0, 3), pair(0, 1), pair(0, 2)];
        let ranked = rank_candidates(&space, &cands, Metric::Euclidean);
        // Distances: (0,1)=1, (0,2)=1 (tie, canonical order), (0,3)=3.
        assert_eq!(ranked[0].a, NodeId(0));
        assert_eq!(ranked[0].b, NodeId(1));
        assert_eq!(ranked[1].b, NodeId(2));
        assert_eq!(ranked[2].b, NodeId(3));
        // Output is a permutation of the input.
        let mut back: Vec<_> = ranked.iter().map(|sp| (sp.a, sp.b)).collect();
        back.sort_unstable();
        let mut orig = cands.to_vec();
        orig.sort_unstable();
        assert_eq!(back, orig);
    }

    #[test]
    fn predict_links_takes_top_k() {
        let ranked = vec![
            ScoredPair { a: NodeId(0), b: NodeId(1), score: 0.1 },
            ScoredPair { a: NodeId(0), b: NodeId(2), score: 0.2 },
        ];
        assert!(predict_links(&ranked, 0).unwrap().is_empty());
        assert_eq!(predict_links(&ranked, 2).unwrap().len(), 2);
        assert!(matches!(
            predict_links(&ranked, 3),
            Err(Error::InsufficientCandidates { requested: 3, available: 2 })
        ));
    }

    #[test]
    fn metric_arithmetic() {
        let predicted: HashSet<_> = [pair(0, 1), pair(2, 3)].into_iter().collect();
        let test: HashSet<_> = [pair(0, 1), pair(4, 5)].into_iter().collect();
        assert_eq!(accuracy(&predicted, &test).unwrap(), 0.5);
        assert!((f1(&predicted, &test).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(accuracy(&test, &test).unwrap(), 1.0);
        assert_eq!(f1(&test, &test).unwrap(), 1.0);
        let empty = HashSet::new();
        assert_eq!(f1(&empty, &test).unwrap(), 0.0);
        assert!(accuracy(&predicted, &empty).is_err());
        assert!((f_measure(0.5, 0.25) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f_measure(0.0, 0.0), 0.0);
    }

    fn two_cliques_net() -> MultilayerNetwork {
        // Two 4-cliques bridged by (3,4), all in one layer.
        let mut triples: Vec<EdgeTriple> = Vec::new();
        for base in [0u32, 4u32] {
            for a in 0..4 {
                for b in a + 1..4 {
                    triples.push((NodeId(base + a), NodeId(base + b), LayerId(0)));
                }
            }
        }
        triples.push((NodeId(3), NodeId(4), LayerId(0)));
        MultilayerNetwork::from_triples(8, 1, &triples).unwrap().0
    }

    #[test]
    fn jaccard_finds_the_held_out_clique_edge() {
        let net = two_cliques_net();
        // 13 edges; frac 0.077 holds out exactly one. Search a seed whose
        // held-out edge is intra-clique, then demand perfect recovery.
        let mut checked = 0;
        for s in 0..20u64 {
            let split = split_edges(&net.merge(), 0.08, s).unwrap();
            let (a, b) = split.test_edges[0];
            let intra = (a.0 < 4 && b.0 < 4) || (a.0 >= 4 && b.0 >= 4);
            if !intra {
                continue;
            }
            let report = run_experiment(
                &net,
                &Predictor::Jaccard,
                0.08,
                s,
                Metric::Euclidean,
                CandidateMode::All,
            )
            .unwrap();
            assert_eq!(report.accuracy, 1.0, "seed {s}");
            assert_eq!(report.f1, 1.0);
            checked += 1;
        }
        assert!(checked > 0, "no intra-clique split among the probed seeds");
    }

    #[test]
    fn experiment_reports_are_consistent_and_deterministic() {
        let net = two_cliques_net();
        let mut cfg = MethodConfig::new(Method::LayerCoanalysis);
        cfg.walk.num_walks = 4;
        cfg.walk.walk_length = 10;
        cfg.train.dim = 8;
        cfg.train.window = 3;
        let predictor = Predictor::Embedding(cfg);
        let a = run_experiment(&net, &predictor, 0.2, 7, Metric::Euclidean, CandidateMode::All)
            .unwrap();
        let b = run_experiment(&net, &predictor, 0.2, 7, Metric::Euclidean, CandidateMode::All)
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.predicted, a.test_size);
        assert!((a.accuracy - a.correct as f64 / a.test_size as f64).abs() < 1e-15);
        assert!((a.f1 - 2.0 * a.accuracy / (1.0 + a.accuracy)).abs() < 1e-15);
        assert!(
            (a.accuracy - a.precision * (a.predicted as f64 / a.test_size as f64)).abs() < 1e-15
        );
    }

    #[test]
    fn sampled_candidates_contain_all_test_edges() {
        let net = two_cliques_net();
        let split = split_edges(&net.merge(), 0.2, 1).unwrap();
        let test_set: HashSet<_> = split.test_edges.iter().copied().collect();
        let train_net = net.without_pairs(&test_set);
        let cands = candidate_pairs(
            &train_net.merge(),
            &split.test_edges,
            CandidateMode::Sampled { non_edges: 3 },
            1,
        );
        for e in &split.test_edges {
            assert!(cands.contains(e));
        }
        assert!(cands.len() <= split.test_edges.len() + 3);
        let all = candidate_pairs(&train_net.merge(), &split.test_edges, CandidateMode::All, 1);
        assert!(cands.len() <= all.len());
        for e in &cands {
            assert!(all.contains(e));
        }
    }

    #[test]
    fn split_restore_reproduces_merged_graph() {
        let net = two_cliques_net();
        let merged = net.merge();
        let split = split_edges(&merged, 0.2, 9).unwrap();
        let test_set: HashSet<_> = split.test_edges.iter().copied().collect();
        let train_net = net.without_pairs(&test_set);
        let mut restored = train_net.merge().edges();
        restored.extend(split.test_edges.iter().copied());
        restored.sort_unstable();
        assert_eq!(restored, merged.edges());
    }

    #[test]
    fn layer_breakdown_counts_per_layer_targets() {
        let (net, _) = MultilayerNetwork::from_triples(
            4,
            2,
            &[
                (NodeId(0), NodeId(1), LayerId(0)),
                (NodeId(1), NodeId(2), LayerId(0)),
                (NodeId(0), NodeId(1), LayerId(1)),
                (NodeId(2), NodeId(3), LayerId(1)),
            ],
        )
        .unwrap();
        let predicted: HashSet<_> = [pair(0, 1)].into_iter().collect();
        let test: HashSet<_> = [pair(0, 1), pair(2, 3)].into_iter().collect();
        let scores = per_layer_breakdown(&net, &predicted, &test);
        assert_eq!(scores[0].test_edges, 1);
        assert_eq!(scores[0].correct, 1);
        assert_eq!(scores[0].recall, 1.0);
        assert_eq!(scores[1].test_edges, 2);
        assert_eq!(scores[1].correct, 1);
        assert_eq!(scores[1].recall, 0.5);
    }
}
