//! Isomorph-free generation of graphs by edge count, and extremal searches over θ-free classes.
//!
//! Graphs with m edges and no isolated vertices are grown from those with
//! m − 1 edges by adding one edge: between two existing vertices, from an
//! existing vertex to a new one, or between two new vertices. A child is kept
//! only when the added edge lies in the automorphism orbit of the child's
//! canonical deletion edge, so every class has exactly one accepted parent
//! class. Isomorphic children of one parent are merged by canonical label.
//!
//! Deleting an edge and dropping any vertex it leaves isolated always gives a
//! graph with m − 1 edges and no isolated vertices. For connected graphs the
//! canonical deletion edge is chosen among edges whose deletion keeps the
//! remainder connected (a pendant edge or an edge on a cycle always exists),
//! so connected classes descend from connected parents and connected-only
//! runs never leave the connected classes.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonize, marked_label, CanonicalLabel};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};
use crate::json::sig17;
use crate::spectral::{self, bound_value, tol, SpectralError};
use crate::theta::{is_theta_free, ThetaSpec};

/// Default cap on the edge count for enumeration.
pub const DEFAULT_EDGE_BUDGET: usize = 12;
/// Largest order accepted by the by-order counters without an override.
pub const DEFAULT_ORDER_BUDGET: usize = 8;
/// Runner-ups kept in an [`ExtremalRecord`].
pub const RUNNER_UPS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumerateError {
    #[error("edge count {m} exceeds the enumeration budget of {limit}")]
    EdgeBudget { m: usize, limit: usize },
    #[error("order {n} exceeds the enumeration budget of {limit}")]
    OrderBudget { n: usize, limit: usize },
    #[error("edge count must be at least 1")]
    NoEdges,
    #[error("no theta-free graph with {m} edges among the candidates")]
    EmptyClass { m: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub connected_only: bool,
    pub edge_budget: usize,
    /// Drop graphs with more vertices than this (orders never shrink under augmentation).
    pub max_order: usize,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            connected_only: false,
            edge_budget: DEFAULT_EDGE_BUDGET,
            max_order: MAX_VERTICES,
            threads: 0,
        }
    }
}

impl EnumOptions {
    pub fn connected(connected_only: bool) -> Self {
        EnumOptions {
            connected_only,
            ..Default::default()
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.threads == 0 {
            f()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .expect("thread pool")
                .install(f)
        }
    }
}

/// One representative (in canonical form) per isomorphism class of graphs
/// with `m` edges and no isolated vertices, sorted by canonical label.
pub fn enumerate_by_edges(m: usize, connected_only: bool) -> Result<Vec<Graph>, EnumerateError> {
    enumerate_with(m, &EnumOptions::connected(connected_only))
}

pub fn enumerate_with(m: usize, opts: &EnumOptions) -> Result<Vec<Graph>, EnumerateError> {
    Ok(enumerate_labelled(m, opts)?.into_iter().map(|(_, g)| g).collect())
}

/// Like [`enumerate_with`] but keeps each graph's canonical label.
pub fn enumerate_labelled(m: usize, opts: &EnumOptions) -> Result<Vec<(CanonicalLabel, Graph)>, EnumerateError> {
    if m == 0 {
        return Err(EnumerateError::NoEdges);
    }
    if m > opts.edge_budget {
        return Err(EnumerateError::EdgeBudget {
            m,
            limit: opts.edge_budget,
        });
    }
    let mut out = Vec::new();
    for_each_level(opts, m, |level, graphs| {
        if level == m {
            out = graphs.to_vec();
        }
    });
    Ok(out)
}

/// Runs the augmentation level by level up to `max_m` edges (or until a
/// level is empty), handing each level to `visit`. No budget check.
fn for_each_level<F>(opts: &EnumOptions, max_m: usize, mut visit: F)
where
    F: FnMut(usize, &[(CanonicalLabel, Graph)]),
{
    let null = Graph::empty(0).expect("null graph");
    let mut level = vec![(canonize(&null).label, null)];
    for m in 1..=max_m {
        level = opts.run(|| next_level(&level, opts));
        if level.is_empty() {
            break;
        }
        visit(m, &level);
    }
}

fn next_level(parents: &[(CanonicalLabel, Graph)], opts: &EnumOptions) -> Vec<(CanonicalLabel, Graph)> {
    let mut level: Vec<(CanonicalLabel, Graph)> =
        parents.par_iter().flat_map_iter(|(_, p)| children(p, opts)).collect();
    level.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    level
}

/// Accepted children of one parent, in canonical form.
fn children(parent: &Graph, opts: &EnumOptions) -> Vec<(CanonicalLabel, Graph)> {
    let n = parent.n();
    let limit = opts.max_order.min(MAX_VERTICES);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut offer = |child: Graph, a: usize, b: usize| {
        if let Some((label, form)) = accept(&child, a, b) {
            if seen.insert(label.clone()) {
                out.push((label, form));
            }
        }
    };
    for a in 0..n {
        for b in parent.vertices().difference(parent.neighbors(a)).iter() {
            if b > a {
                offer(parent.with_edge(a, b).expect("non-edge"), a, b);
            }
        }
    }
    if n < limit {
        let grown = parent.with_isolated(1).expect("within limit");
        for a in 0..n {
            offer(grown.with_edge(a, n).expect("new vertex"), a, n);
        }
    }
    if n + 2 <= limit && (!opts.connected_only || n == 0) {
        let grown = parent.with_isolated(2).expect("within limit");
        offer(grown.with_edge(n, n + 1).expect("new vertices"), n, n + 1);
    }
    out
}

/// Isomorphism invariant used to pick the canonical deletion edge; larger wins.
fn edge_rank(g: &Graph, connected: bool, u: usize, v: usize) -> (bool, usize, usize, usize) {
    let (du, dv) = (g.neighbors(u).len(), g.neighbors(v).len());
    let keeps = !connected || deletion_keeps_connected(g, u, v);
    let common = g.neighbors(u).intersection(g.neighbors(v)).len();
    (keeps, du.min(dv), du.max(dv), common)
}

/// Whether removing `uv`, then any vertex left isolated, leaves a connected graph.
fn deletion_keeps_connected(g: &Graph, u: usize, v: usize) -> bool {
    let mut h = g.clone();
    h.remove_edge_unchecked(u, v);
    let alive = h.vertices().difference(h.isolated_vertices());
    match alive.first() {
        None => true,
        Some(s) => h.reachable_within(s, alive) == alive,
    }
}

/// Canonical-deletion test for the child obtained by adding `ab`.
/// Returns the child's label and canonical form when accepted.
fn accept(child: &Graph, a: usize, b: usize) -> Option<(CanonicalLabel, Graph)> {
    let connected = child.is_connected();
    let target = edge_rank(child, connected, a, b);
    let mut candidates = Vec::new();
    for (u, v) in child.edges() {
        match edge_rank(child, connected, u, v).cmp(&target) {
            Ordering::Greater => return None,
            Ordering::Equal => candidates.push((u, v)),
            Ordering::Less => {}
        }
    }
    let canon = canonize(child);
    if candidates.len() > 1 {
        let pos = &canon.position;
        let key = |&(u, v): &(usize, usize)| {
            let (x, y) = (pos[u], pos[v]);
            (x.max(y), x.min(y))
        };
        let chosen = *candidates.iter().max_by_key(|e| key(e)).unwrap();
        let added = (a.min(b), a.max(b));
        if chosen != added {
            let mark = |(u, v): (usize, usize)| VertexSet::singleton(u).union(VertexSet::singleton(v));
            if marked_label(child, mark(added)) != marked_label(child, mark(chosen)) {
                return None;
            }
        }
    }
    let form = canon.form(child);
    Some((canon.label, form))
}

/// Connected isomorphism classes on exactly `n` vertices.
pub fn count_connected_by_order(n: usize) -> Result<usize, EnumerateError> {
    count_connected_by_order_with(n, DEFAULT_ORDER_BUDGET)
}

pub fn count_connected_by_order_with(n: usize, limit: usize) -> Result<usize, EnumerateError> {
    if n > limit {
        return Err(EnumerateError::OrderBudget { n, limit });
    }
    match n {
        0 => return Ok(0),
        1 => return Ok(1),
        _ => {}
    }
    let opts = EnumOptions {
        connected_only: true,
        max_order: n,
        ..Default::default()
    };
    let mut count = 0;
    for_each_level(&opts, n * (n - 1) / 2, |_, level| {
        count += level.iter().filter(|(_, g)| g.n() == n).count();
    });
    Ok(count)
}

/// Every isomorphism class on exactly `n` vertices, isolated vertices
/// included, in canonical form.
pub fn graphs_by_order(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > DEFAULT_ORDER_BUDGET {
        return Err(EnumerateError::OrderBudget {
            n,
            limit: DEFAULT_ORDER_BUDGET,
        });
    }
    let opts = EnumOptions {
        max_order: n,
        ..Default::default()
    };
    let mut out = vec![Graph::empty(n).expect("n within budget")];
    for_each_level(&opts, n * n.saturating_sub(1) / 2, |_, level| {
        out.extend(
            level
                .iter()
                .map(|(_, g)| crate::canon::canonical_form(&g.with_isolated(n - g.n()).expect("n within budget"))),
        );
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunnerUp {
    pub graph: Graph,
    #[serde(serialize_with = "sig17")]
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub m: usize,
    pub spec: ThetaSpec,
    pub connected_only: bool,
    pub best_graph: Graph,
    pub best_n: usize,
    #[serde(serialize_with = "sig17")]
    pub best_lambda: f64,
    /// Isomorphism classes examined.
    pub num_candidates: usize,
    /// Classes that are free of the theta graph.
    pub num_free: usize,
    pub runner_ups: Vec<RunnerUp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub connected_only: bool,
    pub edge_budget: usize,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            connected_only: true,
            edge_budget: DEFAULT_EDGE_BUDGET,
            threads: 0,
        }
    }
}

/// Largest spectral radius among θ-free graphs with `m` edges and no isolated vertices.
///
/// Ties within [`tol::COMPARE`] of the maximum go to the smaller order, then
/// to the smaller canonical label. Runner-ups follow by decreasing λ with the
/// same secondary keys.
pub fn extremal_search(m: usize, spec: ThetaSpec, opts: &SearchOptions) -> Result<ExtremalRecord, EnumerateError> {
    let eopts = EnumOptions {
        connected_only: opts.connected_only,
        edge_budget: opts.edge_budget,
        max_order: MAX_VERTICES,
        threads: opts.threads,
    };
    let classes = enumerate_labelled(m, &eopts)?;
    let num_candidates = classes.len();
    let scored: Vec<(f64, CanonicalLabel, Graph)> = eopts.run(|| {
        classes
            .into_par_iter()
            .filter(|(_, g)| is_theta_free(g, spec))
            .map(|(label, g)| {
                let lambda = if g.is_connected() {
                    spectral::spectral_radius(&g)?.lambda
                } else {
                    spectral::radius_by_components(&g)?
                };
                Ok((lambda, label, g))
            })
            .collect::<Result<Vec<_>, SpectralError>>()
    })?;
    let num_free = scored.len();
    let top = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let secondary = |a: &(f64, CanonicalLabel, Graph), b: &(f64, CanonicalLabel, Graph)| {
        a.2.n().cmp(&b.2.n()).then_with(|| a.1.cmp(&b.1))
    };
    let best_idx = scored
        .iter()
        .enumerate()
        .filter(|(_, s)| s.0 >= top - tol::COMPARE)
        .min_by(|(_, a), (_, b)| secondary(a, b))
        .map(|(i, _)| i)
        .ok_or(EnumerateError::EmptyClass { m })?;
    let mut rest = scored;
    let (best_lambda, _, best_graph) = rest.swap_remove(best_idx);
    rest.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| secondary(a, b)));
    let runner_ups = rest
        .into_iter()
        .take(RUNNER_UPS)
        .map(|(lambda, _, graph)| RunnerUp { graph, lambda })
        .collect();
    Ok(ExtremalRecord {
        m,
        spec,
        connected_only: opts.connected_only,
        best_n: best_graph.n(),
        best_graph,
        best_lambda,
        num_candidates,
        num_free,
        runner_ups,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: usize,
    #[serde(serialize_with = "sig17")]
    pub best_lambda: f64,
    #[serde(serialize_with = "sig17")]
    pub bound: f64,
    /// bound − best λ; negative values are possible at small m.
    #[serde(serialize_with = "sig17")]
    pub gap: f64,
    pub best_graph6: String,
}

pub fn extremal_table(
    ms: impl IntoIterator<Item = usize>,
    spec: ThetaSpec,
    opts: &SearchOptions,
) -> Result<Vec<TableRow>, EnumerateError> {
    ms.into_iter()
        .map(|m| {
            let rec = extremal_search(m, spec, opts)?;
            let bound = bound_value(m);
            Ok(TableRow {
                m,
                best_lambda: rec.best_lambda,
                bound,
                gap: bound - rec.best_lambda,
                best_graph6: crate::graph6::to_graph6(&rec.best_graph),
            })
        })
        .collect()
}
