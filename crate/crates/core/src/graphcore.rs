//! Finite weighted graphs with exact integer metrics.
//!
//! All weights are doubled: a standard move between model vertices costs
//! [`UNIT_WEIGHT`] = 2, which leaves room for cone apex edges of weight 1
//! (half a unit) without leaving integer arithmetic. Vertex names are opaque
//! strings; construction sorts them so that exports are byte-stable.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scaled cost of one standard move.
pub const UNIT_WEIGHT: u64 = 2;

/// Default cap on how many vertices a lazy ball construction may settle.
pub const DEFAULT_FRONTIER_CAP: usize = 1_000_000;

fn err_validation(message: impl Into<String>) -> Error {
    Error::validation("graphcore", message)
}

fn err_runtime(message: impl Into<String>) -> Error {
    Error::runtime("graphcore", message)
}

/// Undirected graph with positive integer edge weights and string vertex keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    /// Canonical edge list: endpoint indices with `u < v`, sorted.
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String, u64)>,
}

impl MetricGraph {
    /// Builds a graph from vertex keys and weighted edges.
    ///
    /// Rejects duplicate vertices, self loops, zero weights, unknown edge
    /// endpoints and duplicate undirected edges.
    pub fn from_parts(
        vertices: Vec<String>,
        edges: Vec<(String, String, u64)>,
    ) -> Result<MetricGraph> {
        let mut sorted = vertices;
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(err_validation(format!("duplicate vertex '{}'", pair[0])));
            }
        }
        let index: HashMap<&str, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut canon: Vec<(usize, usize, u64)> = Vec::with_capacity(edges.len());
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (a, b, w) in &edges {
            let &ia = index
                .get(a.as_str())
                .ok_or_else(|| err_validation(format!("edge endpoint '{a}' is not a vertex")))?;
            let &ib = index
                .get(b.as_str())
                .ok_or_else(|| err_validation(format!("edge endpoint '{b}' is not a vertex")))?;
            if ia == ib {
                return Err(err_validation(format!("self loop at '{a}'")));
            }
            if *w == 0 {
                return Err(err_validation(format!("zero weight on edge {a} -- {b}")));
            }
            let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
            if !seen.insert((lo, hi)) {
                return Err(err_validation(format!("duplicate edge {a} -- {b}")));
            }
            canon.push((lo, hi, *w));
        }
        canon.sort();
        let mut adj = vec![Vec::new(); sorted.len()];
        for &(u, v, w) in &canon {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort();
        }
        Ok(MetricGraph {
            vertices: sorted,
            edges: canon,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex keys in canonical (sorted) order.
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Canonical edge list as key triples.
    pub fn edge_list(&self) -> Vec<(String, String, u64)> {
        self.edges
            .iter()
            .map(|&(u, v, w)| (self.vertices[u].clone(), self.vertices[v].clone(), w))
            .collect()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.index_of(key).is_some()
    }

    fn index_of(&self, key: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(key)).ok()
    }

    fn dijkstra(&self, source: usize) -> Vec<Option<u64>> {
        let mut dist: Vec<Option<u64>> = vec![None; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(0);
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v] != Some(d) {
                continue;
            }
            for &(u, w) in &self.adj[v] {
                let nd = d + w;
                if dist[u].map_or(true, |old| nd < old) {
                    dist[u] = Some(nd);
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        dist
    }

    /// Exact shortest-path weight between two vertices.
    ///
    /// Unknown vertices are a validation error; a disconnected pair is a
    /// runtime error rather than an invented large value.
    pub fn distance(&self, a: &str, b: &str) -> Result<u64> {
        let ia = self
            .index_of(a)
            .ok_or_else(|| err_validation(format!("unknown vertex '{a}'")))?;
        let ib = self
            .index_of(b)
            .ok_or_else(|| err_validation(format!("unknown vertex '{b}'")))?;
        self.dijkstra(ia)[ib]
            .ok_or_else(|| err_runtime(format!("vertices '{a}' and '{b}' are not connected")))
    }

    /// All-pairs shortest paths; `None` marks unreachable pairs.
    ///
    /// Rows are computed in parallel but the result is indexed by the
    /// canonical vertex order, so output is deterministic.
    pub fn all_pairs(&self) -> Vec<Vec<Option<u64>>> {
        (0..self.vertices.len())
            .into_par_iter()
            .map(|v| self.dijkstra(v))
            .collect()
    }

    /// Adds one apex vertex per subset, joined to each member by an edge of
    /// weight 1 (half a unit). Original vertices and edges are untouched.
    pub fn cone(&self, subsets: &[Vec<String>]) -> Result<MetricGraph> {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edge_list();
        for (i, subset) in subsets.iter().enumerate() {
            let apex = format!("apex:{i}");
            if self.contains(&apex) {
                return Err(err_validation(format!(
                    "apex key '{apex}' collides with an existing vertex"
                )));
            }
            let mut members: Vec<&String> = subset.iter().collect();
            members.sort();
            members.dedup();
            if members.is_empty() {
                return Err(err_validation(format!("cone subset {i} is empty")));
            }
            for m in &members {
                if !self.contains(m) {
                    return Err(err_validation(format!(
                        "cone subset {i} references unknown vertex '{m}'"
                    )));
                }
                edges.push((apex.clone(), (*m).clone(), 1));
            }
            vertices.push(apex);
        }
        MetricGraph::from_parts(vertices, edges)
    }

    /// Serializes to a canonical single-line JSON document.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.vertices.clone(),
            edges: self.edge_list(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<MetricGraph> {
        let doc: GraphDoc = serde_json::from_str(text)
            .map_err(|e| err_validation(format!("malformed graph document: {e}")))?;
        MetricGraph::from_parts(doc.vertices, doc.edges)
    }

    /// Serializes to Graphviz DOT with sorted vertices and edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", escape(v)));
        }
        for &(u, v, w) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [weight={}];\n",
                escape(&self.vertices[u]),
                escape(&self.vertices[v]),
                w
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(key: &str) -> String {
    key.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Limits for lazy ball generation.
#[derive(Debug, Clone, Copy)]
pub struct BallLimits {
    pub frontier_cap: usize,
}

impl Default for BallLimits {
    fn default() -> Self {
        BallLimits {
            frontier_cap: DEFAULT_FRONTIER_CAP,
        }
    }
}

/// Grows the ball of the given unit radius around `center` under a lazy
/// neighbor function and returns the full induced subgraph on it.
///
/// `neighbors` yields `(vertex, scaled edge weight)` pairs and must be
/// symmetric: if it reports `v` from `u` at weight `w` it must report `u`
/// from `v` at the same weight. Violations surface as runtime errors.
pub fn ball<V, F, K>(
    center: &V,
    radius_units: u64,
    mut neighbors: F,
    mut key_of: K,
    limits: BallLimits,
) -> Result<MetricGraph>
where
    V: Ord + Clone,
    F: FnMut(&V) -> Vec<(V, u64)>,
    K: FnMut(&V) -> String,
{
    let scaled_radius = radius_units.saturating_mul(UNIT_WEIGHT);
    let mut dist: BTreeMap<V, u64> = BTreeMap::new();
    let mut settled: BTreeMap<V, u64> = BTreeMap::new();
    let mut heap: BinaryHeap<Reverse<(u64, V)>> = BinaryHeap::new();
    dist.insert(center.clone(), 0);
    heap.push(Reverse((0, center.clone())));
    while let Some(Reverse((d, v))) = heap.pop() {
        match settled.entry(v.clone()) {
            std::collections::btree_map::Entry::Occupied(_) => continue,
            std::collections::btree_map::Entry::Vacant(slot) => slot.insert(d),
        };
        if settled.len() > limits.frontier_cap {
            return Err(err_runtime(format!(
                "frontier cap of {} vertices exceeded while growing ball",
                limits.frontier_cap
            )));
        }
        for (u, w) in neighbors(&v) {
            if w == 0 {
                return Err(err_runtime("neighbor function produced a zero weight"));
            }
            let nd = d + w;
            if nd > scaled_radius {
                continue;
            }
            if dist.get(&u).map_or(true, |&old| nd < old) {
                dist.insert(u.clone(), nd);
                heap.push(Reverse((nd, u)));
            }
        }
    }

    // Induced subgraph: re-query neighbors of every settled vertex and keep
    // edges whose far endpoint was settled too.
    let mut keys: BTreeMap<V, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for v in settled.keys() {
        let k = key_of(v);
        if !used.insert(k.clone()) {
            return Err(err_runtime(format!("duplicate vertex key '{k}' in ball")));
        }
        keys.insert(v.clone(), k);
    }
    let mut edge_weights: HashMap<(String, String), u64> = HashMap::new();
    for v in settled.keys() {
        let kv = keys[v].clone();
        for (u, w) in neighbors(v) {
            if let Some(ku) = keys.get(&u) {
                let pair = if kv < *ku {
                    (kv.clone(), ku.clone())
                } else {
                    (ku.clone(), kv.clone())
                };
                match edge_weights.entry(pair) {
                    Entry::Occupied(slot) => {
                        if *slot.get() != w {
                            return Err(err_runtime(format!(
                                "inconsistent weight between '{}' and '{}'",
                                slot.key().0,
                                slot.key().1
                            )));
                        }
                    }
                    Entry::Vacant(slot) => {
                        slot.insert(w);
                    }
                }
            }
        }
    }
    let vertices: Vec<String> = keys.values().cloned().collect();
    let edges: Vec<(String, String, u64)> = edge_weights
        .into_iter()
        .map(|((a, b), w)| (a, b, w))
        .collect();
    MetricGraph::from_parts(vertices, edges)
}
