//! Multilayer undirected graph: one node universe shared by M simple graphs
//! (layers), with the derived edge sets, neighbourhoods and degree statistics.
//!
//! Degree averages follow the edges-per-node convention: the mean global
//! degree is |union edges| / |V| and the mean core degree is
//! |multiplex edges| / |V| (not 2E/V). This is the convention that matches
//! the reference dataset tables this library reproduces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index. Assigned in first-seen order while building and stable
/// for a given input ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// Index into the graph's layer list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayerId(pub usize);

/// Derived pairwise edge set over two layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSetKind {
    /// Links present on either layer.
    Union,
    /// Multiplex links: present on both layers.
    Intersection,
    /// Links present on the given layer and absent from the other.
    OnlyIn(LayerId),
}

#[derive(Debug, Clone)]
struct Layer {
    name: String,
    /// Sorted neighbour lists indexed by dense node id.
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

/// Immutable multilayer graph. All read operations are safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct MultilayerGraph {
    names: Vec<String>,
    index: HashMap<String, u32>,
    layers: Vec<Layer>,
}

/// Counters for records dropped or collapsed during a build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Node, edge-set and degree statistics of a graph.
///
/// `mean_global_degree` is union edges per node and `mean_core_degree` is
/// multiplex edges per node (see module docs for the convention).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub node_count: usize,
    pub union_edge_count: usize,
    pub multiplex_edge_count: usize,
    /// Per layer: edges present on that layer and on no other layer.
    pub exclusive_edge_counts: Vec<usize>,
    pub per_layer_edge_counts: Vec<usize>,
    pub layer_names: Vec<String>,
    pub mean_global_degree: f64,
    pub mean_core_degree: f64,
}

impl MultilayerGraph {
    /// Build a graph from a node list and `(layer, src, dst)` edge records.
    ///
    /// The node universe is the union of `nodes` and every edge endpoint.
    /// Edges are undirected and deduplicated; self-loops are dropped. Both
    /// drop classes are counted in the returned [`BuildReport`]. An edge
    /// referencing a layer index `>= layer_names.len()` is rejected with the
    /// offending record index.
    pub fn build<S: AsRef<str>>(
        layer_names: &[S],
        nodes: &[S],
        edges: &[(usize, S, S)],
    ) -> Result<(Self, BuildReport)> {
        for (k, name) in layer_names.iter().enumerate() {
            if layer_names[..k].iter().any(|n| n.as_ref() == name.as_ref()) {
                return Err(Error::DuplicateLayerName(name.as_ref().to_string()));
            }
        }
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, u32> = HashMap::new();
        let intern = |name: &str, names: &mut Vec<String>, index: &mut HashMap<String, u32>| {
            if let Some(&id) = index.get(name) {
                return id;
            }
            let id = names.len() as u32;
            names.push(name.to_string());
            index.insert(name.to_string(), id);
            id
        };

        for n in nodes {
            intern(n.as_ref(), &mut names, &mut index);
        }

        let mut per_layer: Vec<Vec<(u32, u32)>> = vec![Vec::new(); layer_names.len()];
        let mut report = BuildReport::default();
        for (record, (layer, src, dst)) in edges.iter().enumerate() {
            if *layer >= layer_names.len() {
                return Err(Error::UnknownLayer {
                    layer: *layer,
                    record,
                });
            }
            let a = intern(src.as_ref(), &mut names, &mut index);
            let b = intern(dst.as_ref(), &mut names, &mut index);
            if a == b {
                report.self_loops_dropped += 1;
                continue;
            }
            per_layer[*layer].push((a.min(b), a.max(b)));
        }

        let n = names.len();
        let mut layers = Vec::with_capacity(layer_names.len());
        for (li, mut pairs) in per_layer.into_iter().enumerate() {
            pairs.sort_unstable();
            let before = pairs.len();
            pairs.dedup();
            report.duplicate_edges_dropped += before - pairs.len();

            let mut adj = vec![Vec::new(); n];
            for &(a, b) in &pairs {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
            for list in &mut adj {
                list.sort_unstable();
            }
            layers.push(Layer {
                name: layer_names[li].as_ref().to_string(),
                adj,
                edge_count: pairs.len(),
            });
        }

        Ok((
            MultilayerGraph {
                names,
                index,
                layers,
            },
            report,
        ))
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_names(&self) -> Vec<&str> {
        self.layers.iter().map(|l| l.name.as_str()).collect()
    }

    /// Resolve a layer by name.
    pub fn layer_by_name(&self, name: &str) -> Result<LayerId> {
        self.layers
            .iter()
            .position(|l| l.name == name)
            .map(LayerId)
            .ok_or_else(|| Error::UnknownLayerName(name.to_string()))
    }

    /// Resolve a node by its external identifier.
    pub fn node_id(&self, name: &str) -> Result<NodeId> {
        self.index
            .get(name)
            .map(|&id| NodeId(id))
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.names[id.0 as usize]
    }

    /// All node ids in dense order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len() as u32).map(NodeId)
    }

    fn check_node(&self, id: NodeId) -> Result<u32> {
        if (id.0 as usize) < self.names.len() {
            Ok(id.0)
        } else {
            Err(Error::NodeOutOfRange(id.0 as usize))
        }
    }

    fn check_layer(&self, layer: LayerId) -> Result<usize> {
        if layer.0 < self.layers.len() {
            Ok(layer.0)
        } else {
            Err(Error::UnknownLayer {
                layer: layer.0,
                record: 0,
            })
        }
    }

    pub fn layer_edge_count(&self, layer: LayerId) -> Result<usize> {
        Ok(self.layers[self.check_layer(layer)?].edge_count)
    }

    /// Sorted neighbour list of `i` on one layer. Nodes absent from a layer
    /// simply have an empty neighbourhood there.
    pub fn layer_neighbours(&self, layer: LayerId, i: NodeId) -> Result<&[u32]> {
        let l = self.check_layer(layer)?;
        let v = self.check_node(i)?;
        Ok(&self.layers[l].adj[v as usize])
    }

    pub fn has_edge(&self, layer: LayerId, i: NodeId, j: NodeId) -> Result<bool> {
        let neigh = self.layer_neighbours(layer, i)?;
        self.check_node(j)?;
        Ok(neigh.binary_search(&j.0).is_ok())
    }

    /// Global neighbourhood: the union of `i`'s neighbours across all
    /// layers, sorted.
    pub fn global_neighbourhood(&self, i: NodeId) -> Result<Vec<u32>> {
        let v = self.check_node(i)?;
        let mut out: Vec<u32> = Vec::new();
        for layer in &self.layers {
            out = sorted_union(&out, &layer.adj[v as usize]);
        }
        Ok(out)
    }

    /// Core neighbourhood: the intersection of `i`'s neighbours across all
    /// layers, sorted. Empty when the graph has fewer than one layer.
    pub fn core_neighbourhood(&self, i: NodeId) -> Result<Vec<u32>> {
        let v = self.check_node(i)?;
        let Some(first) = self.layers.first() else {
            return Ok(Vec::new());
        };
        let mut out = first.adj[v as usize].clone();
        for layer in &self.layers[1..] {
            out = sorted_intersection(&out, &layer.adj[v as usize]);
            if out.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    pub fn global_degree(&self, i: NodeId) -> Result<usize> {
        Ok(self.global_neighbourhood(i)?.len())
    }

    pub fn core_degree(&self, i: NodeId) -> Result<usize> {
        Ok(self.core_neighbourhood(i)?.len())
    }

    /// Fraction of `i`'s global neighbourhood that is also core. Defined as
    /// 0 for isolated nodes (no multiplexity signal to report).
    pub fn multiplex_overlap_ratio(&self, i: NodeId) -> Result<f64> {
        let global = self.global_degree(i)?;
        if global == 0 {
            return Ok(0.0);
        }
        Ok(self.core_degree(i)? as f64 / global as f64)
    }

    /// Canonical `(i, j)` edge list of one layer, sorted, with `i < j`.
    pub fn layer_edges(&self, layer: LayerId) -> Result<Vec<(u32, u32)>> {
        let l = self.check_layer(layer)?;
        let mut out = Vec::with_capacity(self.layers[l].edge_count);
        for (i, neigh) in self.layers[l].adj.iter().enumerate() {
            let i = i as u32;
            for &j in neigh.iter().filter(|&&j| j > i) {
                out.push((i, j));
            }
        }
        Ok(out)
    }

    /// Derived edge set over a pair of distinct layers, canonical order.
    pub fn edge_set(&self, kind: EdgeSetKind, a: LayerId, b: LayerId) -> Result<Vec<(u32, u32)>> {
        self.check_layer(a)?;
        self.check_layer(b)?;
        if a == b {
            return Err(Error::IdenticalLayers(a.0));
        }
        let ea = self.layer_edges(a)?;
        let eb = self.layer_edges(b)?;
        Ok(match kind {
            EdgeSetKind::Union => merge_union(&ea, &eb),
            EdgeSetKind::Intersection => merge_intersection(&ea, &eb),
            EdgeSetKind::OnlyIn(layer) => {
                if layer == a {
                    merge_difference(&ea, &eb)
                } else if layer == b {
                    merge_difference(&eb, &ea)
                } else {
                    return Err(Error::EdgeSetLayerMismatch {
                        kind_layer: layer.0,
                        a: a.0,
                        b: b.0,
                    });
                }
            }
        })
    }

    /// Edges present on every layer (the multiplex set for M = 2).
    pub fn intersection_edges(&self) -> Vec<(u32, u32)> {
        if self.layers.is_empty() {
            return Vec::new();
        }
        let mut out = self.layer_edges(LayerId(0)).expect("layer 0 exists");
        for l in 1..self.layers.len() {
            let next = self.layer_edges(LayerId(l)).expect("layer exists");
            out = merge_intersection(&out, &next);
            if out.is_empty() {
                break;
            }
        }
        out
    }

    /// Edges present on at least one layer.
    pub fn union_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for l in 0..self.layers.len() {
            let next = self.layer_edges(LayerId(l)).expect("layer exists");
            out = merge_union(&out, &next);
        }
        out
    }

    /// Counts and degree averages. Exclusive counts are per layer: edges on
    /// that layer and no other (for two layers these are the familiar
    /// "only on A" / "only on B" columns).
    pub fn dataset_stats(&self) -> DatasetStats {
        let n = self.node_count();
        let union = self.union_edges();
        let intersection = self.intersection_edges();

        let mut exclusive = Vec::with_capacity(self.layers.len());
        for l in 0..self.layers.len() {
            let own = self.layer_edges(LayerId(l)).expect("layer exists");
            let mut others = Vec::new();
            for o in 0..self.layers.len() {
                if o != l {
                    let next = self.layer_edges(LayerId(o)).expect("layer exists");
                    others = merge_union(&others, &next);
                }
            }
            exclusive.push(merge_difference(&own, &others).len());
        }

        let (mean_global, mean_core) = if n == 0 {
            (0.0, 0.0)
        } else {
            (
                union.len() as f64 / n as f64,
                intersection.len() as f64 / n as f64,
            )
        };

        DatasetStats {
            node_count: n,
            union_edge_count: union.len(),
            multiplex_edge_count: intersection.len(),
            exclusive_edge_counts: exclusive,
            per_layer_edge_counts: self.layers.iter().map(|l| l.edge_count).collect(),
            layer_names: self.layers.iter().map(|l| l.name.clone()).collect(),
            mean_global_degree: mean_global,
            mean_core_degree: mean_core,
        }
    }
}

/// Collapse a directed edge list to the undirected pairs that appear in both
/// directions. Output is canonical: deduplicated, `(min, max)`, sorted.
pub fn reciprocal_reduce<S: AsRef<str>>(directed: &[(S, S)]) -> Vec<(String, String)> {
    use std::collections::BTreeSet;
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut out: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (src, dst) in directed {
        let (src, dst) = (src.as_ref(), dst.as_ref());
        if src == dst {
            continue;
        }
        if seen.contains(&(dst, src)) {
            let pair = if src < dst { (src, dst) } else { (dst, src) };
            out.insert(pair);
        }
        seen.insert((src, dst));
    }
    out.into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

pub(crate) fn sorted_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}

pub(crate) fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

fn merge_union(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}

fn merge_intersection(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

fn merge_difference(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() {
        if y >= b.len() {
            out.extend_from_slice(&a[x..]);
            break;
        }
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    out
}
