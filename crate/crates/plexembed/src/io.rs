//! File formats and the synthetic network generator.
//!
//! Edge lists are whitespace-separated triples `src dst layer` (node and
//! layer tokens are arbitrary strings), one per line. A fourth numeric
//! column is accepted and ignored, with a count reported. Lines starting
//! with `#` are comments, except an optional `#layers: a b c` header
//! before the first edge, which pins layer ordering.
//!
//! Embedding files hold a `<num_nodes> <dim>` header followed by one
//! `name v1 .. vd` row per node at six decimals, which round-trips
//! within 1e-6. Experiment records are JSON lines, append-safe.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{BuildStats, EdgeTriple, LayerId, MultilayerNetwork, NodeId};
use crate::sgns::EmbeddingSpace;
use crate::walk::WalkCorpus;
use crate::{seed, Error, Result};

const SYN_TAG: u64 = 0x7362; // synthetic generator stream

/// Insertion-ordered bijection between external names and dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl NameTable {
    pub fn new() -> NameTable {
        NameTable::default()
    }

    /// A table naming `0..n` by their decimal representation.
    pub fn numeric(n: usize) -> NameTable {
        let mut table = NameTable::new();
        for i in 0..n {
            table.intern(&i.to_string());
        }
        table
    }

    /// Returns the id for `name`, registering it if new.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }
}

/// Partial node labeling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<Option<String>>,
}

impl LabelMap {
    pub fn get(&self, node: NodeId) -> Option<&str> {
        self.labels.get(node.index()).and_then(|l| l.as_deref())
    }

    /// Number of labeled nodes.
    pub fn len(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// (label, node count) pairs, sorted by label.
    pub fn counts(&self) -> Vec<(String, usize)> {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for label in self.labels.iter().flatten() {
            *counts.entry(label).or_insert(0) += 1;
        }
        let mut out: Vec<(String, usize)> =
            counts.into_iter().map(|(l, c)| (l.to_string(), c)).collect();
        out.sort();
        out
    }
}

/// What the edge-list parser dropped or ignored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
    /// Lines that carried the reserved fourth (weight) column.
    pub weights_ignored: usize,
}

/// A parsed multilayer edge list.
#[derive(Clone, Debug)]
pub struct LoadedNetwork {
    pub net: MultilayerNetwork,
    pub nodes: NameTable,
    pub layers: NameTable,
    pub stats: LoadStats,
}

/// Parses the edge-list format from a file.
pub fn load_multilayer(path: impl AsRef<Path>) -> Result<LoadedNetwork> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_multilayer(&text, path)
}

/// Parses the edge-list format from a string; `origin` names the source
/// in errors.
pub fn parse_multilayer(text: &str, origin: impl Into<PathBuf>) -> Result<LoadedNetwork> {
    let origin = origin.into();
    let mut nodes = NameTable::new();
    let mut layers = NameTable::new();
    let mut raw: Vec<EdgeTriple> = Vec::new();
    let mut weights_ignored = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(names) = rest.trim_start().strip_prefix("layers:") {
                if !raw.is_empty() {
                    return Err(Error::parse(
                        &origin,
                        lineno,
                        "layer header must appear before the first edge",
                    ));
                }
                for name in names.split_whitespace() {
                    layers.intern(name);
                }
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 || tokens.len() > 4 {
            return Err(Error::parse(
                &origin,
                lineno,
                format!("expected 'src dst layer [weight]', found {} fields", tokens.len()),
            ));
        }
        if let Some(w) = tokens.get(3) {
            w.parse::<f64>().map_err(|_| {
                Error::parse(&origin, lineno, format!("weight column is not a number: {w:?}"))
            })?;
            weights_ignored += 1;
        }
        let x = nodes.intern(tokens[0]);
        let y = nodes.intern(tokens[1]);
        let l = layers.intern(tokens[2]);
        raw.push((NodeId(x), NodeId(y), LayerId(l)));
    }
    let (net, build) = MultilayerNetwork::from_triples(nodes.len(), layers.len(), &raw)?;
    Ok(LoadedNetwork {
        net,
        nodes,
        layers,
        stats: LoadStats {
            self_loops_dropped: build.self_loops_dropped,
            duplicates_dropped: build.duplicates_dropped,
            weights_ignored,
        },
    })
}

/// Writes the canonical edge list: a layer header pinning order, then
/// triples sorted by (layer, src, dst).
pub fn write_multilayer(
    net: &MultilayerNetwork,
    nodes: &NameTable,
    layers: &NameTable,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    check_table(nodes, net.num_nodes(), "node")?;
    check_table(layers, net.num_layers(), "layer")?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, s: String| -> Result<()> {
        out.write_all(s.as_bytes()).map_err(|e| Error::io(path, e))
    };
    let header: Vec<&str> = layers.iter().collect();
    write(&mut out, format!("#layers: {}\n", header.join(" ")))?;
    for (x, y, l) in net.triples() {
        write(
            &mut out,
            format!("{} {} {}\n", nodes.name(x.0), nodes.name(y.0), layers.name(l.0)),
        )?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn check_table(table: &NameTable, expected: usize, what: &str) -> Result<()> {
    if table.len() != expected {
        return Err(Error::Config(format!(
            "{what} name table holds {} entries, network has {expected}",
            table.len()
        )));
    }
    Ok(())
}

/// Parses `node label` lines; the label is everything after the first
/// token, so labels may contain spaces.
pub fn load_labels(path: impl AsRef<Path>, nodes: &NameTable) -> Result<LabelMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut labels = vec![None; nodes.len()];
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, label) = match line.split_once(char::is_whitespace) {
            Some((n, l)) if !l.trim().is_empty() => (n, l.trim()),
            _ => {
                return Err(Error::parse(path, lineno, "expected 'node label'"));
            }
        };
        let id = nodes.get(name).ok_or_else(|| Error::UnknownNode(name.to_string()))?;
        labels[id as usize] = Some(label.to_string());
    }
    Ok(LabelMap { labels })
}

/// Writes `<num_nodes> <dim>` then one named row per node at six
/// decimals.
pub fn write_embedding(
    space: &EmbeddingSpace,
    nodes: &NameTable,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    check_table(nodes, space.num_nodes(), "node")?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut line = format!("{} {}\n", space.num_nodes(), space.dim());
    out.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
    for node in 0..space.num_nodes() {
        let node = NodeId(node as u32);
        line.clear();
        line.push_str(nodes.name(node.0));
        for v in space.row(node) {
            line.push_str(&format!(" {v:.6}"));
        }
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads the embedding format back; row order defines the name table.
pub fn read_embedding(path: impl AsRef<Path>) -> Result<(EmbeddingSpace, NameTable)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing '<num_nodes> <dim>' header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (num_nodes, dim) = match fields.as_slice() {
        [n, d] => (
            n.parse::<usize>()
                .map_err(|_| Error::parse(path, 1, format!("bad node count {n:?}")))?,
            d.parse::<usize>()
                .map_err(|_| Error::parse(path, 1, format!("bad dimension {d:?}")))?,
        ),
        _ => return Err(Error::parse(path, 1, "header must be '<num_nodes> <dim>'")),
    };
    let mut nodes = NameTable::new();
    let mut data = Vec::with_capacity(num_nodes * dim);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let name = tokens.next().expect("non-empty line has a first token");
        if nodes.get(name).is_some() {
            return Err(Error::parse(path, lineno, format!("duplicate node {name:?}")));
        }
        nodes.intern(name);
        let mut count = 0usize;
        for tok in tokens {
            let v: f64 = tok.parse().map_err(|_| {
                Error::parse(path, lineno, format!("bad vector component {tok:?}"))
            })?;
            data.push(v);
            count += 1;
        }
        if count != dim {
            return Err(Error::parse(
                path,
                lineno,
                format!("row has {count} components, header says {dim}"),
            ));
        }
        rows += 1;
    }
    if rows != num_nodes {
        return Err(Error::parse(
            path,
            rows + 1,
            format!("file has {rows} rows, header says {num_nodes}"),
        ));
    }
    Ok((EmbeddingSpace::from_data(num_nodes, dim, data)?, nodes))
}

/// Writes one line of node names per walk. Singleton walks are omitted
/// and noted in a trailing comment.
pub fn write_walks(corpus: &WalkCorpus, nodes: &NameTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut omitted = 0usize;
    for walk in &corpus.walks {
        if walk.len() < 2 {
            omitted += 1;
            continue;
        }
        let line: Vec<&str> = walk.iter().map(|n| nodes.name(n.0)).collect();
        out.write_all(line.join(" ").as_bytes()).map_err(|e| Error::io(path, e))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    if omitted > 0 {
        out.write_all(format!("# singleton_walks_omitted={omitted}\n").as_bytes())
            .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// One line of a machine-readable experiment report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub method: String,
    pub dataset: String,
    pub seed: u64,
    pub frac: f64,
    pub metric: String,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub runtime_ms: u64,
}

/// Appends records as JSON lines, creating the file if needed.
pub fn append_records(path: impl AsRef<Path>, records: &[ExperimentRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| Error::Config(format!("record serialization failed: {e}")))?;
        out.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a JSON-lines record file.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, idx + 1, e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

/// Blueprint for a correlated multilayer stochastic block model.
///
/// Nodes split into `num_blocks` contiguous, nearly equal blocks. Layer
/// 0 draws each pair independently (`p_in` within a block, `p_out`
/// across). Every further layer copies layer 0's decision for a pair
/// with probability `layer_correlation` and redraws it otherwise, so
/// each layer is marginally the same block model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub num_nodes: usize,
    pub num_layers: usize,
    pub num_blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub layer_correlation: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            num_nodes: 100,
            num_layers: 3,
            num_blocks: 2,
            p_in: 0.3,
            p_out: 0.02,
            layer_correlation: 0.5,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_nodes == 0 {
            return Err(Error::Config("num_nodes must be at least 1".into()));
        }
        if self.num_layers == 0 {
            return Err(Error::Config("num_layers must be at least 1".into()));
        }
        if self.num_blocks == 0 || self.num_blocks > self.num_nodes {
            return Err(Error::Config(format!(
                "num_blocks must lie in 1..={}, got {}",
                self.num_nodes, self.num_blocks
            )));
        }
        for (name, v) in [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("layer_correlation", self.layer_correlation),
        ] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    /// Block of a node: contiguous ranges of nearly equal size.
    pub fn block_of(&self, node: NodeId) -> usize {
        node.index() * self.num_blocks / self.num_nodes
    }
}

/// Generates the network described by `spec`, deterministically per
/// seed.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<MultilayerNetwork> {
    spec.validate()?;
    let mut rng = seed::rng(spec.seed, &[SYN_TAG]);
    let mut triples: Vec<EdgeTriple> = Vec::new();
    for i in 0..spec.num_nodes {
        for j in i + 1..spec.num_nodes {
            let (a, b) = (NodeId(i as u32), NodeId(j as u32));
            let p = if spec.block_of(a) == spec.block_of(b) { spec.p_in } else { spec.p_out };
            let base = rng.gen_bool(p);
            if base {
                triples.push((a, b, LayerId(0)));
            }
            for l in 1..spec.num_layers {
                let present =
                    if rng.gen_bool(spec.layer_correlation) { base } else { rng.gen_bool(p) };
                if present {
                    triples.push((a, b, LayerId(l as u32)));
                }
            }
        }
    }
    let (net, stats) =
        MultilayerNetwork::from_triples(spec.num_nodes, spec.num_layers, &triples)?;
    debug_assert_eq!(stats, BuildStats::default());
    Ok(net)
}
