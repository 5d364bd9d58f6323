//! Simple undirected graphs on at most 64 vertices, one `u64` adjacency row per vertex.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(usize, usize),
    #[error("adjacency rows are not symmetric at {0}-{1}")]
    Asymmetric(usize, usize),
}

/// A set of vertex ids packed into one machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member.
    #[inline]
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the ascending list of members.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(d)?;
        if let Some(&v) = members.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

#[derive(Clone, Debug)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Immutable simple undirected graph with dense vertex ids `0..n`.
///
/// Adjacency is symmetric and loop-free after every constructor. New graphs
/// are derived with [`Graph::with_edge`], which copies.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            adj: vec![VertexSet::EMPTY; n],
            m: 0,
        })
    }

    /// Builds a graph from an edge list. Duplicate edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adj[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.add_edge_unchecked(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, validating symmetry and loops.
    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self, GraphError> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let full = VertexSet::full(n);
        let mut twice_m = 0;
        for (u, &row) in rows.iter().enumerate() {
            if let Some(v) = row.difference(full).first() {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if row.contains(u) {
                return Err(GraphError::SelfLoop(u));
            }
            for v in row {
                if !rows[v].contains(u) {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
            twice_m += row.len();
        }
        Ok(Graph {
            adj: rows,
            m: twice_m / 2,
        })
    }

    /// Copy of `self` with the edge `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u].contains(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.add_edge_unchecked(u, v);
        Ok(g)
    }

    /// Copy of `self` with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Result<Self, GraphError> {
        let n = self.n() + extra;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = self.clone();
        g.adj.resize(n, VertexSet::EMPTY);
        Ok(g)
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.adj[u].contains(v));
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
    }

    pub(crate) fn remove_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(self.adj[u].contains(v));
        self.adj[u].remove(v);
        self.adj[v].remove(u);
        self.m -= 1;
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    fn check_set(&self, s: VertexSet) -> Result<(), GraphError> {
        match s.difference(self.vertices()).first() {
            None => Ok(()),
            Some(v) => Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() }),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Neighbourhood of `v`. Panics if `v >= n`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|r| r.len()).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(|r| r.len()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(|r| r.len()).max()
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        (0..self.n()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn reachable_within(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(self.adj[v]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Connected components of the subgraph induced by `within`, ordered by smallest vertex.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let c = self.reachable_within(v, within);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices())
    }

    /// True when the graph has at most one component. The null graph counts as connected.
    pub fn is_connected(&self) -> bool {
        match self.vertices().first() {
            None => true,
            Some(v) => self.reachable_within(v, self.vertices()).len() == self.n(),
        }
    }

    /// Induced subgraph on `s`, relabelled so the `i`-th smallest member of `s` becomes vertex `i`.
    pub fn induced(&self, s: VertexSet) -> Result<Graph, GraphError> {
        self.check_set(s)?;
        let members: Vec<usize> = s.iter().collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in members.iter().enumerate() {
            pos[v] = i;
        }
        let rows = members
            .iter()
            .map(|&v| self.adj[v].intersection(s).iter().map(|u| pos[u]).collect())
            .collect();
        Ok(Graph {
            adj: rows,
            m: self.count_internal(s),
        })
    }

    fn count_internal(&self, s: VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection(s).len()).sum::<usize>() / 2
    }

    /// Number of edges with one end in `x` and the other in `y`, each edge counted once.
    /// `edge_count_between(x, x)` is the number of edges inside `x`.
    pub fn edge_count_between(&self, x: VertexSet, y: VertexSet) -> Result<usize, GraphError> {
        self.check_set(x)?;
        self.check_set(y)?;
        let ordered: usize = x.iter().map(|v| self.adj[v].intersection(y).len()).sum();
        Ok(ordered - self.count_internal(x.intersection(y)))
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut rows = vec![VertexSet::EMPTY; self.n()];
        for (v, row) in self.adj.iter().enumerate() {
            rows[perm[v]] = row.iter().map(|u| perm[u]).collect();
        }
        Graph { adj: rows, m: self.m }
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| self.adj[u].is_disjoint(self.adj[v]))
    }

    /// Proper 2-colouring as a side set, if the graph is bipartite.
    pub fn bipartition(&self) -> Option<VertexSet> {
        let mut side = VertexSet::EMPTY;
        let mut seen = VertexSet::EMPTY;
        for root in 0..self.n() {
            if seen.contains(root) {
                continue;
            }
            seen.insert(root);
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                let same = side.contains(v);
                for u in self.adj[v] {
                    if seen.contains(u) {
                        if side.contains(u) == same {
                            return None;
                        }
                    } else {
                        seen.insert(u);
                        if !same {
                            side.insert(u);
                        }
                        stack.push(u);
                    }
                }
            }
        }
        Some(side)
    }

    /// Part sizes `(s, t)` with `s <= t` if the graph is complete bipartite with no isolated vertices.
    pub fn complete_bipartite_parts(&self) -> Option<(usize, usize)> {
        if self.n() < 2 || !self.isolated_vertices().is_empty() {
            return None;
        }
        let a = self.bipartition()?;
        let b = self.vertices().difference(a);
        if a.is_empty() || b.is_empty() || self.m != a.len() * b.len() {
            return None;
        }
        Some((a.len().min(b.len()), a.len().max(b.len())))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, m={}, {})",
            self.n(),
            self.m,
            crate::graph6::to_graph6(self)
        )
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::graph6::to_graph6(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::graph6::from_graph6(&text).map_err(serde::de::Error::custom)
    }
}
