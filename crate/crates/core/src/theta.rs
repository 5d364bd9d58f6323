//! θ_{r,p,q} subgraph detection with explicit witnesses.
//!
//! A theta graph is two hubs joined by three internally disjoint paths of
//! lengths r ≤ p ≤ q. Containment is as a (not necessarily induced)
//! subgraph, so chords between witness vertices are allowed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub mod oracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaSpecError {
    #[error("invalid theta spec ({r},{p},{q}): path lengths need q≥p≥r≥1 and p≥2")]
    Constraint { r: usize, p: usize, q: usize },
    #[error("cannot parse theta spec `{0}`, expected R,P,Q")]
    Parse(String),
}

/// Path lengths of a theta graph, stored sorted so that `r <= p <= q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct ThetaSpec {
    r: usize,
    p: usize,
    q: usize,
}

impl ThetaSpec {
    /// Accepts the three lengths in any order.
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self, ThetaSpecError> {
        let mut l = [a, b, c];
        l.sort_unstable();
        let [r, p, q] = l;
        if r < 1 || p < 2 {
            return Err(ThetaSpecError::Constraint { r, p, q });
        }
        Ok(ThetaSpec { r, p, q })
    }

    /// θ_{2,2,3}.
    pub fn t223() -> Self {
        ThetaSpec { r: 2, p: 2, q: 3 }
    }

    pub fn lengths(self) -> [usize; 3] {
        [self.r, self.p, self.q]
    }

    pub fn r(self) -> usize {
        self.r
    }
    pub fn p(self) -> usize {
        self.p
    }
    pub fn q(self) -> usize {
        self.q
    }

    /// Vertex count of the theta graph itself.
    pub fn order(self) -> usize {
        self.r + self.p + self.q - 1
    }

    /// Edge count of the theta graph itself.
    pub fn size(self) -> usize {
        self.r + self.p + self.q
    }

    /// θ_{r,p,q} as a graph: hubs 0 and 1, internal vertices numbered path by path.
    pub fn graph(self) -> Graph {
        let mut edges = Vec::with_capacity(self.size());
        let mut next = 2;
        for len in self.lengths() {
            let mut prev = 0;
            for _ in 1..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, 1));
        }
        Graph::from_edges(self.order(), edges).expect("theta graph is simple")
    }
}

impl TryFrom<[usize; 3]> for ThetaSpec {
    type Error = ThetaSpecError;
    fn try_from([a, b, c]: [usize; 3]) -> Result<Self, Self::Error> {
        ThetaSpec::new(a, b, c)
    }
}

impl From<ThetaSpec> for [usize; 3] {
    fn from(s: ThetaSpec) -> Self {
        s.lengths()
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.r, self.p, self.q)
    }
}

impl FromStr for ThetaSpec {
    type Err = ThetaSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| ThetaSpecError::Parse(s.to_string()))?;
        match parts[..] {
            [a, b, c] => ThetaSpec::new(a, b, c),
            _ => Err(ThetaSpecError::Parse(s.to_string())),
        }
    }
}

/// Two hubs and three hub-to-hub paths, of lengths r, p, q in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaWitness {
    pub hubs: [usize; 2],
    pub paths: [Vec<usize>; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("hubs must be two distinct vertices of the graph")]
    BadHubs,
    #[error("path {0} does not run from hub to hub")]
    Endpoints(usize),
    #[error("path {path} has length {got}, expected {expected}")]
    Length { path: usize, got: usize, expected: usize },
    #[error("path {path} uses non-edge {u}-{v}")]
    MissingEdge { path: usize, u: usize, v: usize },
    #[error("internal vertex {0} repeated or equal to a hub")]
    NotDisjoint(usize),
}

impl ThetaWitness {
    /// Checks adjacency along each path, exact lengths, and that internal
    /// vertices are distinct, pairwise disjoint across paths and avoid both hubs.
    pub fn validate(&self, g: &Graph, spec: ThetaSpec) -> Result<(), WitnessError> {
        let [a, b] = self.hubs;
        if a == b || a >= g.n() || b >= g.n() {
            return Err(WitnessError::BadHubs);
        }
        let mut used = VertexSet::singleton(a).union(VertexSet::singleton(b));
        for (i, (path, len)) in self.paths.iter().zip(spec.lengths()).enumerate() {
            if path.first() != Some(&a) || path.last() != Some(&b) {
                return Err(WitnessError::Endpoints(i));
            }
            if path.len() != len + 1 {
                return Err(WitnessError::Length {
                    path: i,
                    got: path.len().saturating_sub(1),
                    expected: len,
                });
            }
            for w in path.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(WitnessError::MissingEdge {
                        path: i,
                        u: w[0],
                        v: w[1],
                    });
                }
            }
            for &v in &path[1..path.len() - 1] {
                if v >= g.n() || used.contains(v) {
                    return Err(WitnessError::NotDisjoint(v));
                }
                used.insert(v);
            }
        }
        Ok(())
    }

    /// All vertices used by the witness.
    pub fn vertex_set(&self) -> VertexSet {
        self.paths.iter().flatten().copied().collect()
    }
}

/// Searches for θ_{r,p,q} in `g`.
///
/// Hub pairs `(a, b)` with `a < b` are tried in lexicographic order; for
/// each, every simple a-b path of length r is tried, then paths of length p
/// avoiding its interior, then paths of length q avoiding both interiors.
/// Neighbours are visited in increasing order, so the witness returned is
/// deterministic.
pub fn contains_theta(g: &Graph, spec: ThetaSpec) -> Option<ThetaWitness> {
    if g.n() < spec.order() || g.m() < spec.size() {
        return None;
    }
    let hubs: VertexSet = (0..g.n()).filter(|&v| g.neighbors(v).len() >= 3).collect();
    for a in hubs {
        for b in hubs.iter().filter(|&b| b > a) {
            if let Some(paths) = search_pair(g, spec, a, b) {
                return Some(ThetaWitness { hubs: [a, b], paths });
            }
        }
    }
    None
}

pub fn is_theta_free(g: &Graph, spec: ThetaSpec) -> bool {
    contains_theta(g, spec).is_none()
}

fn search_pair(g: &Graph, spec: ThetaSpec, a: usize, b: usize) -> Option<[Vec<usize>; 3]> {
    let [r, p, q] = spec.lengths();
    let hubs = VertexSet::singleton(a).union(VertexSet::singleton(b));
    let mut found = None;
    let mut first = vec![a];
    let mut on_first = |g: &Graph, first: &[usize], blocked: VertexSet| -> bool {
        let mut second = vec![a];
        let mut on_second = |g: &Graph, second: &[usize], blocked: VertexSet| -> bool {
            let mut third = vec![a];
            let mut on_third = |_: &Graph, third: &[usize], _: VertexSet| -> bool {
                found = Some([first.to_vec(), second.to_vec(), third.to_vec()]);
                true
            };
            paths_of_length(g, b, q, blocked, &mut third, &mut on_third)
        };
        paths_of_length(g, b, p, blocked, &mut second, &mut on_second)
    };
    if r == 1 {
        if g.has_edge(a, b) {
            first.push(b);
            on_first(g, &first, hubs);
        }
    } else {
        paths_of_length(g, b, r, hubs, &mut first, &mut on_first);
    }
    found
}

/// Extends `path` (which starts at a hub) to every simple path ending at
/// `target` with exactly `len` edges whose interior avoids `blocked`. Calls
/// `visit` with the completed path and the blocked set grown by its interior;
/// stops as soon as `visit` returns true.
fn paths_of_length<F>(
    g: &Graph,
    target: usize,
    len: usize,
    blocked: VertexSet,
    path: &mut Vec<usize>,
    visit: &mut F,
) -> bool
where
    F: FnMut(&Graph, &[usize], VertexSet) -> bool,
{
    let tail = *path.last().unwrap();
    let steps = path.len() - 1;
    if steps + 1 == len {
        if g.has_edge(tail, target) {
            path.push(target);
            let done = visit(g, path, blocked);
            path.pop();
            return done;
        }
        return false;
    }
    for v in g.neighbors(tail).difference(blocked) {
        path.push(v);
        let done = paths_of_length(g, target, len, blocked.union(VertexSet::singleton(v)), path, visit);
        path.pop();
        if done {
            return true;
        }
    }
    false
}

/// S₁,₂ found on the edge `u`-`v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStarWitness {
    pub u: usize,
    pub v: usize,
    pub leaf_u: usize,
    pub leaves_v: [usize; 2],
}

/// Finds an edge `uv`, a neighbour of `u` and two neighbours of `v`, all five distinct.
pub fn contains_double_star(g: &Graph) -> Option<DoubleStarWitness> {
    for (x, y) in g.edges() {
        for (u, v) in [(x, y), (y, x)] {
            let pair = VertexSet::singleton(u).union(VertexSet::singleton(v));
            let at_u = g.neighbors(u).difference(pair);
            let at_v = g.neighbors(v).difference(pair);
            for leaf_u in at_u {
                let mut rest = at_v.difference(VertexSet::singleton(leaf_u)).iter();
                if let (Some(l1), Some(l2)) = (rest.next(), rest.next()) {
                    return Some(DoubleStarWitness {
                        u,
                        v,
                        leaf_u,
                        leaves_v: [l1, l2],
                    });
                }
            }
        }
    }
    None
}

/// Two vertices with three common neighbours, i.e. a K₂,₃ subgraph.
pub fn k23_hubs(g: &Graph) -> Option<(usize, usize)> {
    (0..g.n())
        .flat_map(|a| (a + 1..g.n()).map(move |b| (a, b)))
        .find(|&(a, b)| g.neighbors(a).intersection(g.neighbors(b)).len() >= 3)
}
