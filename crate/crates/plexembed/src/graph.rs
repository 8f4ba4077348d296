//! Multilayer networks and flat graphs.
//!
//! A [`MultilayerNetwork`] holds one node set shared by every layer and a
//! separate undirected, unweighted edge set per layer. A [`Graph`] is the
//! single-layer case, used for merged views and per-layer views.
//!
//! Adjacency lists are kept sorted, so membership tests are binary
//! searches and all iteration orders are deterministic.

use std::collections::HashSet;

use crate::{Error, Result};

/// Dense node index, `0..num_nodes`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

/// Dense layer index, `0..num_layers`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LayerId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for LayerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge in one layer, in canonical orientation (`x <= y` after
/// normalization, self loops excluded).
pub type EdgeTriple = (NodeId, NodeId, LayerId);

/// What the builders dropped while normalizing raw input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Undirected, unweighted multilayer network over a fixed node set.
///
/// Nodes without edges in a layer simply have empty adjacency there; the
/// node set itself never shrinks.
#[derive(Clone, Debug)]
pub struct MultilayerNetwork {
    num_nodes: usize,
    num_layers: usize,
    // adjacency[layer][node] = sorted neighbor list
    adjacency: Vec<Vec<Vec<NodeId>>>,
    edge_count: usize,
}

impl MultilayerNetwork {
    /// Builds a network from edge triples, dropping self loops and
    /// duplicate edges (an edge listed in both orientations counts as a
    /// duplicate). Triples may arrive in any order.
    pub fn from_triples(
        num_nodes: usize,
        num_layers: usize,
        triples: &[EdgeTriple],
    ) -> Result<(Self, BuildStats)> {
        let mut adjacency = vec![vec![Vec::new(); num_nodes]; num_layers];
        let mut stats = BuildStats::default();
        let mut seen = HashSet::with_capacity(triples.len());
        let mut edge_count = 0usize;
        for &(x, y, l) in triples {
            if l.index() >= num_layers {
                return Err(Error::InvalidLayer { layer: l.index(), num_layers });
            }
            for n in [x, y] {
                if n.index() >= num_nodes {
                    return Err(Error::InvalidNode { node: n.index(), num_nodes });
                }
            }
            if x == y {
                stats.self_loops_dropped += 1;
                continue;
            }
            let (a, b) = if x < y { (x, y) } else { (y, x) };
            if !seen.insert((a, b, l)) {
                stats.duplicates_dropped += 1;
                continue;
            }
            adjacency[l.index()][a.index()].push(b);
            adjacency[l.index()][b.index()].push(a);
            edge_count += 1;
        }
        for layer in &mut adjacency {
            for list in layer {
                list.sort_unstable();
            }
        }
        Ok((Self { num_nodes, num_layers, adjacency, edge_count }, stats))
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    /// Total number of distinct (edge, layer) pairs.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn layer_edge_count(&self, layer: LayerId) -> usize {
        self.adjacency[layer.index()]
            .iter()
            .map(|list| list.len())
            .sum::<usize>()
            / 2
    }

    /// Sorted neighbors of `node` within `layer`.
    pub fn neighbors(&self, layer: LayerId, node: NodeId) -> &[NodeId] {
        &self.adjacency[layer.index()][node.index()]
    }

    pub fn degree(&self, layer: LayerId, node: NodeId) -> usize {
        self.neighbors(layer, node).len()
    }

    pub fn has_edge(&self, x: NodeId, y: NodeId, layer: LayerId) -> bool {
        self.neighbors(layer, x).binary_search(&y).is_ok()
    }

    /// Layers in which `node` has at least one neighbor.
    pub fn incident_layers(&self, node: NodeId) -> Vec<LayerId> {
        (0..self.num_layers)
            .filter(|&l| !self.adjacency[l][node.index()].is_empty())
            .map(|l| LayerId(l as u32))
            .collect()
    }

    /// Number of layers in which `node` has at least one neighbor.
    pub fn connected_layers(&self, node: NodeId) -> usize {
        (0..self.num_layers)
            .filter(|&l| !self.adjacency[l][node.index()].is_empty())
            .count()
    }

    /// Collapses all layers: an edge exists iff it exists in any layer.
    pub fn merge(&self) -> Graph {
        let mut adjacency = vec![Vec::new(); self.num_nodes];
        for node in 0..self.num_nodes {
            let mut all: Vec<NodeId> = self
                .adjacency
                .iter()
                .flat_map(|layer| layer[node].iter().copied())
                .collect();
            all.sort_unstable();
            all.dedup();
            adjacency[node] = all;
        }
        Graph::from_adjacency(self.num_nodes, adjacency)
    }

    /// The graph of a single layer over the full node set.
    pub fn layer_graph(&self, layer: LayerId) -> Result<Graph> {
        if layer.index() >= self.num_layers {
            return Err(Error::InvalidLayer { layer: layer.index(), num_layers: self.num_layers });
        }
        Ok(Graph::from_adjacency(self.num_nodes, self.adjacency[layer.index()].clone()))
    }

    /// All edges in canonical form, sorted by (layer, x, y) with `x < y`.
    pub fn triples(&self) -> Vec<EdgeTriple> {
        let mut out = Vec::with_capacity(self.edge_count);
        for l in 0..self.num_layers {
            for x in 0..self.num_nodes {
                for &y in &self.adjacency[l][x] {
                    if (y.index()) > x {
                        out.push((NodeId(x as u32), y, LayerId(l as u32)));
                    }
                }
            }
        }
        out
    }

    /// A copy with the given node pairs removed from every layer. Pairs
    /// are matched in either orientation.
    pub fn without_pairs(&self, pairs: &HashSet<(NodeId, NodeId)>) -> MultilayerNetwork {
        let banned = |a: NodeId, b: NodeId| pairs.contains(&(a, b)) || pairs.contains(&(b, a));
        let kept: Vec<EdgeTriple> = self
            .triples()
            .into_iter()
            .filter(|&(x, y, _)| !banned(x, y))
            .collect();
        let (net, stats) = MultilayerNetwork::from_triples(self.num_nodes, self.num_layers, &kept)
            .expect("triples come from a valid network");
        debug_assert_eq!(stats, BuildStats::default());
        net
    }
}

/// Undirected, unweighted graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    fn from_adjacency(num_nodes: usize, adjacency: Vec<Vec<NodeId>>) -> Self {
        let edge_count = adjacency.iter().map(|list| list.len()).sum::<usize>() / 2;
        Self { num_nodes, adjacency, edge_count }
    }

    /// Builds a graph from node pairs, dropping self loops and duplicates.
    pub fn from_pairs(num_nodes: usize, pairs: &[(NodeId, NodeId)]) -> Result<Graph> {
        let triples: Vec<EdgeTriple> = pairs.iter().map(|&(x, y)| (x, y, LayerId(0))).collect();
        let (net, _) = MultilayerNetwork::from_triples(num_nodes, 1, &triples)?;
        net.layer_graph(LayerId(0))
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node.index()]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.neighbors(node).len()
    }

    pub fn has_edge(&self, x: NodeId, y: NodeId) -> bool {
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// All edges in canonical form, sorted by (x, y) with `x < y`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for x in 0..self.num_nodes {
            for &y in &self.adjacency[x] {
                if y.index() > x {
                    out.push((NodeId(x as u32), y));
                }
            }
        }
        out
    }
}
