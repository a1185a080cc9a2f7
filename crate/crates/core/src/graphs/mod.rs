//! Labeled simple graphs, exact stable-set computations and the subdivision
//! gadget.
//!
//! Vertices carry arbitrary nonnegative integer labels. Internally every graph
//! stores its vertices in ascending label order and keeps one adjacency bitset
//! per vertex position, so the hot loops (stable sets, induced search) never
//! touch the labels.

mod density;
mod gadget;
pub mod io;
mod stable;

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use density::{
    max_avg_degree_exhaustive, max_avg_degree_flow, max_avg_degree_induced, EXHAUSTIVE_DENSITY_CAP,
};
pub use gadget::{build_gadget, GadgetGraph, Role};
pub use stable::{
    count_stable_sets, enumerate_stable_sets, maximum_stable_set, stability_number,
    stability_number_brute_force, ALPHA_VERTEX_CAP,
};

/// A vertex label.
pub type Label = usize;

/// A set of vertex labels drawn from the universe `0..VertexSet::CAPACITY`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u128);

impl VertexSet {
    /// Labels must be strictly below this value.
    pub const CAPACITY: usize = 128;

    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub const fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Result<Self> {
        let mut s = VertexSet::empty();
        for l in labels {
            s.insert(l)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, label: Label) -> Result<()> {
        if label >= Self::CAPACITY {
            return Err(Error::InstanceTooLarge {
                what: "vertex set label",
                size: label,
                cap: Self::CAPACITY - 1,
            });
        }
        self.0 |= 1u128 << label;
        Ok(())
    }

    pub fn remove(&mut self, label: Label) {
        if label < Self::CAPACITY {
            self.0 &= !(1u128 << label);
        }
    }

    pub fn contains(self, label: Label) -> bool {
        label < Self::CAPACITY && self.0 >> label & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Labels in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Label> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let l = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(l)
            }
        })
    }

    /// Bitstring over the elements `1..=n`, least significant (rightmost)
    /// character is element 1.
    pub fn to_bitstring(self, n: usize) -> String {
        (1..=n)
            .rev()
            .map(|k| if self.contains(k) { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`VertexSet::to_bitstring`].
    pub fn from_bitstring(s: &str) -> Option<Self> {
        let n = s.len();
        let mut set = VertexSet::empty();
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => set.insert(n - i).ok()?,
                '0' => {}
                _ => return None,
            }
        }
        Some(set)
    }

    /// All subsets of `{1, ..., n}` in increasing order of their bitmask
    /// (bit `k - 1` stands for element `k`).
    pub fn subsets_of_range(n: usize) -> impl Iterator<Item = VertexSet> {
        assert!(n < Self::CAPACITY, "subset universe too large");
        (0u128..(1u128 << n)).map(|m| VertexSet(m << 1))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A labeled simple undirected graph.
///
/// `universe` is the declared label bound `n`: every label is at most `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    universe: usize,
    labels: Vec<Label>,
    adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, validating labels and edges.
    pub fn new<V, E>(universe: usize, vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let set: BTreeSet<Label> = vertices.into_iter().collect();
        if let Some(&max) = set.iter().next_back() {
            if max > universe {
                return Err(Error::InvalidGraph(format!(
                    "vertex {max} lies outside the universe bound {universe}"
                )));
            }
        }
        let labels: Vec<Label> = set.into_iter().collect();
        let mut g = Graph {
            universe,
            adj: vec![FixedBitSet::with_capacity(labels.len()); labels.len()],
            labels,
            edge_count: 0,
        };
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            let i = g.position(a).ok_or(Error::UnknownVertex(a))?;
            let j = g.position(b).ok_or(Error::UnknownVertex(b))?;
            g.add_edge_pos(i, j);
        }
        Ok(g)
    }

    /// Graph whose universe bound is its largest label.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let vs: Vec<Label> = vertices.into_iter().collect();
        let universe = vs.iter().copied().max().unwrap_or(0);
        Graph::new(universe, vs, edges)
    }

    /// Graph on positions `0..order` with the given labels, edges added later
    /// by position. Labels must be strictly increasing.
    pub(crate) fn with_sorted_labels(universe: usize, labels: Vec<Label>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let n = labels.len();
        Graph {
            universe,
            labels,
            adj: vec![FixedBitSet::with_capacity(n); n],
            edge_count: 0,
        }
    }

    pub(crate) fn add_edge_pos(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        if !self.adj[i].contains(j) {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
            self.edge_count += 1;
        }
    }

    /// Edgeless graph on `{1, ..., t}`.
    pub fn edgeless(t: usize) -> Self {
        Graph::with_sorted_labels(t, (1..=t).collect())
    }

    /// Complete graph `K_t` on `{1, ..., t}`.
    pub fn complete(t: usize) -> Self {
        let mut g = Graph::edgeless(t);
        for i in 0..t {
            for j in i + 1..t {
                g.add_edge_pos(i, j);
            }
        }
        g
    }

    /// Path `1 - 2 - ... - t`.
    pub fn path(t: usize) -> Self {
        let mut g = Graph::edgeless(t);
        for i in 1..t {
            g.add_edge_pos(i - 1, i);
        }
        g
    }

    /// Cycle `C_t` on `{1, ..., t}`; requires `t >= 3`.
    pub fn cycle(t: usize) -> Result<Self> {
        if t < 3 {
            return Err(Error::InvalidParameter(format!(
                "a cycle needs at least 3 vertices, got {t}"
            )));
        }
        let mut g = Graph::path(t);
        g.add_edge_pos(0, t - 1);
        Ok(g)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, pos: usize) -> Label {
        self.labels[pos]
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn contains_vertex(&self, label: Label) -> bool {
        self.position(label).is_some()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.adj[i].contains(j),
            _ => false,
        }
    }

    pub(crate) fn adjacent_pos(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub(crate) fn neighbors_pos(&self, i: usize) -> &FixedBitSet {
        &self.adj[i]
    }

    pub fn degree(&self, label: Label) -> Option<usize> {
        self.position(label).map(|i| self.adj[i].count_ones(..))
    }

    /// Edges as label pairs `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for i in 0..self.order() {
            for j in self.adj[i].ones().filter(|&j| j > i) {
                out.push((self.labels[i], self.labels[j]));
            }
        }
        out
    }

    pub fn vertex_set(&self) -> Result<VertexSet> {
        VertexSet::from_labels(self.labels.iter().copied())
    }

    /// Induced subgraph on the given labels; the universe bound is kept.
    pub fn induced<I: IntoIterator<Item = Label>>(&self, labels: I) -> Result<Graph> {
        let mut pos: Vec<usize> = Vec::new();
        for l in labels {
            pos.push(self.position(l).ok_or(Error::UnknownVertex(l))?);
        }
        pos.sort_unstable();
        pos.dedup();
        let mut g = Graph::with_sorted_labels(
            self.universe,
            pos.iter().map(|&p| self.labels[p]).collect(),
        );
        for (a, &pa) in pos.iter().enumerate() {
            for (b, &pb) in pos.iter().enumerate().skip(a + 1) {
                if self.adj[pa].contains(pb) {
                    g.add_edge_pos(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Induced subgraph `G[S]`. Fails if `S` is not a subset of `V(G)`.
    pub fn induced_set(&self, set: VertexSet) -> Result<Graph> {
        self.require_subset(set)?;
        self.induced(set.iter())
    }

    pub(crate) fn require_subset(&self, set: VertexSet) -> Result<()> {
        if let Some(l) = set.iter().find(|&l| !self.contains_vertex(l)) {
            return Err(Error::NotSubset {
                set: set.to_string(),
                of: format!("V(G) (vertex {l} missing)"),
            });
        }
        Ok(())
    }

    /// `|E(G[S])|`, counting only labels of `S` that are vertices.
    pub fn edges_within(&self, set: VertexSet) -> usize {
        let pos: Vec<usize> = set.iter().filter_map(|l| self.position(l)).collect();
        let mut count = 0;
        for (a, &i) in pos.iter().enumerate() {
            for &j in &pos[a + 1..] {
                if self.adj[i].contains(j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Whether `S` contains no edge of the graph.
    pub fn is_stable(&self, set: VertexSet) -> bool {
        self.edges_within(set) == 0
    }

    /// Two-colourability, by breadth-first search from every uncoloured vertex.
    pub fn is_bipartite(&self) -> bool {
        let n = self.order();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            queue.push_back(s);
            while let Some(i) = queue.pop_front() {
                let c = colour[i].unwrap();
                for j in self.adj[i].ones() {
                    match colour[j] {
                        None => {
                            colour[j] = Some(!c);
                            queue.push_back(j);
                        }
                        Some(cj) if cj == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Adjacency rows as 64-bit masks over vertex positions.
    pub(crate) fn adjacency_masks(&self, what: &'static str) -> Result<Vec<u64>> {
        if self.order() > 64 {
            return Err(Error::InstanceTooLarge {
                what,
                size: self.order(),
                cap: 64,
            });
        }
        Ok(self
            .adj
            .iter()
            .map(|row| row.ones().fold(0u64, |m, j| m | 1u64 << j))
            .collect())
    }

    /// Converts a position mask to a vertex set of labels.
    pub(crate) fn mask_to_set(&self, mask: u64) -> Result<VertexSet> {
        let mut s = VertexSet::empty();
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            s.insert(self.labels[p])?;
        }
        Ok(s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("universe", &self.universe)
            .field("vertices", &self.labels)
            .field("edges", &self.edges())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite() {
        assert!(Graph::path(5).is_bipartite());
        assert!(Graph::cycle(6).unwrap().is_bipartite());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        assert!(!Graph::complete(3).is_bipartite());
        assert!(Graph::edgeless(3).is_bipartite());
    }

    #[test]
    fn vertex_set_basics() {
        let s = VertexSet::from_labels([1, 3]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.to_bitstring(3), "101");
        assert_eq!(VertexSet::from_bitstring("101"), Some(s));
        assert_eq!(s.to_string(), "{1,3}");
        assert!(VertexSet::from_labels([128]).is_err());
        assert_eq!(VertexSet::subsets_of_range(3).count(), 8);
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, [1, 2], [(1, 1)]).is_err());
        assert!(Graph::new(3, [1, 2], [(1, 3)]).is_err());
        assert!(Graph::new(2, [1, 5], []).is_err());
        let g = Graph::new(10, [7, 2, 5], [(7, 2), (2, 7)]).unwrap();
        assert_eq!(g.labels(), &[2, 5, 7]);
        assert_eq!(g.size(), 1);
        assert_eq!(g.edges(), vec![(2, 7)]);
    }

    #[test]
    fn standard_families() {
        assert_eq!(Graph::complete(5).size(), 10);
        assert_eq!(Graph::path(3).edges(), vec![(1, 2), (2, 3)]);
        assert_eq!(Graph::cycle(5).unwrap().size(), 5);
        assert!(Graph::cycle(2).is_err());
        assert_eq!(Graph::edgeless(7).size(), 0);
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::cycle(5).unwrap();
        let h = g.induced([1, 2, 3]).unwrap();
        assert_eq!(h.edges(), vec![(1, 2), (2, 3)]);
        assert!(g.induced([9]).is_err());
        let s = VertexSet::from_labels([1, 3]).unwrap();
        assert!(g.is_stable(s));
        assert_eq!(g.edges_within(VertexSet::from_labels([1, 2, 5]).unwrap()), 2);
    }
}
