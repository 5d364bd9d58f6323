//! Brute-force containment check used to cross-validate [`contains_theta`](super::contains_theta).
//!
//! Tries injections of the abstract θ_{r,p,q} vertex set into the host and
//! checks that every pattern edge lands on a host edge. Pattern vertices are
//! placed one at a time and a partial injection is dropped as soon as an
//! already-placed pattern edge is missing; this only skips injections that
//! would fail the final edge check anyway.

use thiserror::Error;

use super::ThetaSpec;
use crate::graph::{Graph, VertexSet};

/// Host size limit for the factorial-cost search.
pub const ORACLE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("oracle limited to {ORACLE_MAX_VERTICES} vertices, host has {0}")]
pub struct OracleSizeError(pub usize);

pub fn oracle_contains_theta(g: &Graph, spec: ThetaSpec) -> Result<bool, OracleSizeError> {
    if g.n() > ORACLE_MAX_VERTICES {
        return Err(OracleSizeError(g.n()));
    }
    Ok(embeds(&spec.graph(), g))
}

/// Whether `pattern` is isomorphic to a subgraph of `host`.
pub fn embeds(pattern: &Graph, host: &Graph) -> bool {
    if pattern.n() > host.n() {
        return false;
    }
    let mut image = vec![usize::MAX; pattern.n()];
    place(pattern, host, 0, VertexSet::EMPTY, &mut image)
}

fn place(pattern: &Graph, host: &Graph, next: usize, used: VertexSet, image: &mut [usize]) -> bool {
    if next == pattern.n() {
        return pattern.edges().all(|(a, b)| host.has_edge(image[a], image[b]));
    }
    for h in host.vertices().difference(used) {
        let ok = pattern
            .neighbors(next)
            .iter()
            .filter(|&a| a < next)
            .all(|a| host.has_edge(image[a], h));
        if ok {
            image[next] = h;
            if place(pattern, host, next + 1, used.union(VertexSet::singleton(h)), image) {
                return true;
            }
        }
    }
    false
}
