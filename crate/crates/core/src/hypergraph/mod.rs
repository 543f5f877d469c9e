//! Labeled hypergraphs, edge spaces and degree sequences.

pub mod edges;
pub mod io;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::numeric::{binomial, binomial_f64};

pub use edges::{for_each_subset, Edges, SubsetCursor};

/// A hyperedge: a strictly increasing tuple of 0-based node indices.
///
/// Edges order by size first, then lexicographically, which is the order
/// [`EdgeSpace::edges`] produces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Edge(SmallVec<[usize; 4]>);

impl Edge {
    /// Canonicalises `nodes` (sorts them). A repeated node is an error, not deduplicated.
    pub fn new(nodes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: SmallVec<[usize; 4]> = nodes.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) || v.len() < 2 {
            return Err(Error::EdgeTooSmall { line: 0 });
        }
        Ok(Edge(v))
    }

    pub(crate) fn from_sorted_unchecked(nodes: &[usize]) -> Self {
        Edge(SmallVec::from_slice(nodes))
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// The realizable edges: every subset of `{0, .., n-1}` whose size lies in `sizes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpace {
    n: usize,
    sizes: Vec<usize>,
}

impl EdgeSpace {
    /// `sizes` is sorted and deduplicated; every size must satisfy `2 <= k <= n`.
    pub fn new(n: usize, mut sizes: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpace(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.is_empty() {
            return Err(Error::InvalidSpace("no edge sizes given".into()));
        }
        if let Some(&k) = sizes.iter().find(|&&k| k < 2 || k > n) {
            return Err(Error::InvalidSpace(format!(
                "edge size {k} outside 2..={n}"
            )));
        }
        Ok(Self { n, sizes })
    }

    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        Self::new(n, vec![k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Largest allowed edge size.
    pub fn max_size(&self) -> usize {
        *self.sizes.last().expect("edge space has at least one size")
    }

    pub fn contains_size(&self, k: usize) -> bool {
        self.sizes.binary_search(&k).is_ok()
    }

    /// Total number of edges, `Σ_k C(n, k)`.
    pub fn edge_count(&self) -> usize {
        self.sizes
            .iter()
            .map(|&k| binomial(self.n, k) as usize)
            .sum()
    }

    pub fn layer_count(&self, k: usize) -> usize {
        binomial(self.n, k) as usize
    }

    /// Number of size-k edges containing a given node, `C(n-1, k-1)`.
    pub fn max_degree(&self, k: usize) -> f64 {
        binomial_f64(self.n - 1, k - 1)
    }

    /// Maximum total degree over all sizes.
    pub fn max_total_degree(&self) -> f64 {
        self.sizes.iter().map(|&k| self.max_degree(k)).sum()
    }

    /// Lazily enumerates every edge.
    pub fn edges(&self) -> Edges<'_> {
        Edges::new(self)
    }

    /// Space restricted to a single size.
    pub fn layer(&self, k: usize) -> Result<EdgeSpace> {
        if !self.contains_size(k) {
            return Err(Error::EdgeSizeOutsideSpace {
                size: k,
                allowed: self.sizes.clone(),
            });
        }
        EdgeSpace::uniform(self.n, k)
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.contains_size(edge.len()) && edge.nodes().last().is_some_and(|&v| v < self.n)
    }
}

/// A hypergraph on nodes `0..n` with a set of distinct edges kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a hypergraph, rejecting out-of-range nodes and repeated edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if let Some(&v) = e.nodes().iter().find(|&&v| v >= n) {
                return Err(Error::NodeOutOfRange {
                    line: 0,
                    label: v + 1,
                    n,
                });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge {
                line: 0,
                edge: w[0].nodes().iter().map(|v| v + 1).collect(),
            });
        }
        Ok(Self { n, edges })
    }

    /// Edges must already be canonical, in order, distinct and in range.
    pub(crate) fn from_canonical_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for {} nodes",
                perm.len(),
                self.n
            )));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.nodes().iter().map(|&v| perm[v])))
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(self.n, edges)
    }
}

/// One size layer of a degree sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeLayer {
    pub size: usize,
    pub values: Vec<f64>,
}

/// Per-node (and optionally per-size) average degrees: the sufficient statistic.
///
/// A sequence built from layers carries both the per-size values and their
/// totals; one built from totals alone has no layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSequence {
    n: usize,
    layers: Vec<DegreeLayer>,
    total: Vec<f64>,
}

fn check_values(n: usize, values: &[f64], what: &str) -> Result<()> {
    if values.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected {n} values, got {}",
            values.len()
        )));
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidDegrees(format!(
            "{what}: node {} has degree {v}",
            i + 1
        )));
    }
    Ok(())
}

impl DegreeSequence {
    /// Builds from per-size layers. Each value must lie in `[0, C(n-1, k-1)]`.
    pub fn from_layers(n: usize, layers: Vec<(usize, Vec<f64>)>) -> Result<Self> {
        let mut layers: Vec<DegreeLayer> = layers
            .into_iter()
            .map(|(size, values)| DegreeLayer { size, values })
            .collect();
        layers.sort_by_key(|l| l.size);
        if layers.windows(2).any(|w| w[0].size == w[1].size) {
            return Err(Error::InvalidDegrees("repeated edge size".into()));
        }
        let mut total = vec![0.0; n];
        for layer in &layers {
            if layer.size < 2 || layer.size > n {
                return Err(Error::InvalidDegrees(format!(
                    "edge size {} outside 2..={n}",
                    layer.size
                )));
            }
            check_values(n, &layer.values, &format!("size {}", layer.size))?;
            let max = binomial_f64(n - 1, layer.size - 1);
            if let Some((i, v)) = layer.values.iter().enumerate().find(|(_, v)| **v > max) {
                return Err(Error::InvalidDegrees(format!(
                    "size {}: node {} has degree {v} above the maximum {max}",
                    layer.size,
                    i + 1
                )));
            }
            for (t, v) in total.iter_mut().zip(&layer.values) {
                *t += v;
            }
        }
        Ok(Self { n, layers, total })
    }

    /// Builds from total degrees only.
    pub fn from_totals(total: Vec<f64>) -> Result<Self> {
        let n = total.len();
        check_values(n, &total, "total degrees")?;
        Ok(Self {
            n,
            layers: Vec::new(),
            total,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[DegreeLayer] {
        &self.layers
    }

    pub fn has_layers(&self) -> bool {
        !self.layers.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.size).collect()
    }

    pub fn layer(&self, k: usize) -> Option<&[f64]> {
        self.layers
            .iter()
            .find(|l| l.size == k)
            .map(|l| l.values.as_slice())
    }

    /// `d_i = Σ_k d_i^(k)`.
    pub fn total(&self) -> &[f64] {
        &self.total
    }

    /// Coordinatewise mean of sequences with identical shape.
    pub fn mean<'a>(seqs: impl IntoIterator<Item = &'a DegreeSequence>) -> Result<Self> {
        let mut iter = seqs.into_iter();
        let first = iter.next().ok_or(Error::EmptySampleSet)?;
        let mut acc = first.clone();
        let mut count = 1usize;
        for s in iter {
            if s.n != acc.n || s.sizes() != acc.sizes() {
                return Err(Error::DimensionMismatch(
                    "degree sequences with different shapes".into(),
                ));
            }
            for (a, b) in acc.layers.iter_mut().zip(&s.layers) {
                a.values
                    .iter_mut()
                    .zip(&b.values)
                    .for_each(|(x, y)| *x += y);
            }
            acc.total
                .iter_mut()
                .zip(&s.total)
                .for_each(|(x, y)| *x += y);
            count += 1;
        }
        let c = count as f64;
        for l in &mut acc.layers {
            l.values.iter_mut().for_each(|x| *x /= c);
        }
        if acc.layers.is_empty() {
            acc.total.iter_mut().for_each(|x| *x /= c);
        } else {
            let layers = acc.layers.into_iter().map(|l| (l.size, l.values)).collect();
            return DegreeSequence::from_layers(acc.n, layers);
        }
        Ok(acc)
    }
}

/// Degree sequence of `h`, split by the sizes of `space`.
///
/// Fails with [`Error::EdgeSizeOutsideSpace`] when an edge size is not allowed.
pub fn degrees(h: &Hypergraph, space: &EdgeSpace) -> Result<DegreeSequence> {
    if h.n() != space.n() {
        return Err(Error::DimensionMismatch(format!(
            "hypergraph on {} nodes, edge space on {}",
            h.n(),
            space.n()
        )));
    }
    let mut counts: Vec<Vec<f64>> = vec![vec![0.0; space.n()]; space.sizes().len()];
    for e in h.edges() {
        let layer =
            space
                .sizes()
                .binary_search(&e.len())
                .map_err(|_| Error::EdgeSizeOutsideSpace {
                    size: e.len(),
                    allowed: space.sizes().to_vec(),
                })?;
        for &v in e.nodes() {
            counts[layer][v] += 1.0;
        }
    }
    DegreeSequence::from_layers(
        space.n(),
        space.sizes().iter().copied().zip(counts).collect(),
    )
}
