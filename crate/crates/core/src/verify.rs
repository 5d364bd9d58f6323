//! Neighbourhood decomposition around the extremal vertex, structural checks
//! on it, and the end-to-end certificate for a single graph.
//!
//! With u* fixed, U = N(u*), W = V ∖ N[u*], U₀ is the set of vertices of U
//! with no neighbour inside U and U₊ = U ∖ U₀. Every edge either touches u*,
//! lies inside U₊, joins U to W, or lies inside W, so
//! m = |U| + e(U₊) + e(U, W) + e(W).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::graph6::to_graph6;
use crate::json::sig17_opt;
use crate::spectral::{self, bound_value, extremal_vertex, tol, SpectralError, SpectralResult};
use crate::theta::{contains_double_star, contains_theta, DoubleStarWitness, ThetaSpec, ThetaWitness};

/// Slack tolerance for the edge-weighted inequality.
pub const SLACK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("graph contains theta({spec}): hubs {hubs:?}", hubs = .witness.hubs)]
    ContainsTheta {
        spec: ThetaSpec,
        witness: Box<ThetaWitness>,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "snake_case")]
pub enum ComponentClass {
    /// K₁,r with r ≥ 1 (K₂ and P₃ included).
    Star(usize),
    /// The paw, K₁,₃ plus one edge.
    StarPlusEdge,
    /// Pₖ with k ≥ 4 vertices.
    Path(usize),
    /// Cₗ with l ≥ 3.
    Cycle(usize),
    K4,
    K4MinusE,
    Other,
}

/// Classifies the subgraph of `g` induced by the connected vertex set `comp` (at least two vertices).
pub fn classify(g: &Graph, comp: VertexSet) -> ComponentClass {
    let k = comp.len();
    let degrees: Vec<usize> = comp.iter().map(|v| g.neighbors(v).intersection(comp).len()).collect();
    let e = degrees.iter().sum::<usize>() / 2;
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    match (k, e) {
        (4, 6) => ComponentClass::K4,
        (4, 5) => ComponentClass::K4MinusE,
        (4, 4) if sorted == [1, 2, 2, 3] => ComponentClass::StarPlusEdge,
        _ if e + 1 == k && max == k - 1 => ComponentClass::Star(k - 1),
        _ if e + 1 == k && max == 2 => ComponentClass::Path(k),
        _ if e == k && degrees.iter().all(|&d| d == 2) => ComponentClass::Cycle(k),
        _ => ComponentClass::Other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLedger {
    pub size_u: usize,
    pub e_u_plus: usize,
    pub e_uw: usize,
    pub e_w: usize,
    pub m: usize,
}

impl EdgeLedger {
    pub fn balances(&self) -> bool {
        self.size_u + self.e_u_plus + self.e_uw + self.e_w == self.m
    }
}

/// A non-trivial component H of G[U].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: VertexSet,
    pub class: ComponentClass,
    /// Vertices of W adjacent to H.
    pub w_h: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub ustar: usize,
    pub u: VertexSet,
    pub w: VertexSet,
    pub u0: VertexSet,
    pub u_plus: VertexSet,
    pub components: Vec<Component>,
    pub ledger: EdgeLedger,
}

impl DecompositionReport {
    /// d_U(v): neighbours of `v` inside U.
    pub fn d_u(&self, g: &Graph, v: usize) -> usize {
        g.neighbors(v).intersection(self.u).len()
    }
}

/// Decomposition around the extremal vertex of `res`.
pub fn decompose(g: &Graph, res: &SpectralResult) -> Result<DecompositionReport, VerifyError> {
    if g.n() == 0 {
        return Err(VerifyError::Empty);
    }
    if !g.is_connected() {
        return Err(VerifyError::Disconnected);
    }
    Ok(decompose_at(g, extremal_vertex(res)))
}

/// Decomposition around an arbitrary vertex. Panics if `ustar` is out of range.
pub fn decompose_at(g: &Graph, ustar: usize) -> DecompositionReport {
    let u = g.neighbors(ustar);
    let w = g.vertices().difference(u).difference(VertexSet::singleton(ustar));
    let u0: VertexSet = u.iter().filter(|&v| g.neighbors(v).is_disjoint(u)).collect();
    let u_plus = u.difference(u0);
    let components = g
        .components_within(u_plus)
        .into_iter()
        .map(|c| Component {
            vertices: c,
            class: classify(g, c),
            w_h: c
                .iter()
                .fold(VertexSet::EMPTY, |acc, v| acc.union(g.neighbors(v)))
                .intersection(w),
        })
        .collect();
    let inside = |s: VertexSet| s.iter().map(|v| g.neighbors(v).intersection(s).len()).sum::<usize>() / 2;
    let ledger = EdgeLedger {
        size_u: u.len(),
        e_u_plus: inside(u_plus),
        e_uw: u.iter().map(|v| g.neighbors(v).intersection(w).len()).sum(),
        e_w: inside(w),
        m: g.m(),
    };
    DecompositionReport {
        ustar,
        u,
        w,
        u0,
        u_plus,
        components,
        ledger,
    }
}

/// Vertex sets of the blocks (maximal 2-connected pieces and bridges) of G[`within`].
pub fn blocks(g: &Graph, within: VertexSet) -> Vec<VertexSet> {
    struct Dfs<'a> {
        g: &'a Graph,
        within: VertexSet,
        disc: Vec<usize>,
        low: Vec<usize>,
        clock: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<VertexSet>,
    }

    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.clock += 1;
            self.disc[u] = self.clock;
            self.low[u] = self.clock;
            for v in self.g.neighbors(u).intersection(self.within) {
                if self.disc[v] == 0 {
                    self.stack.push((u, v));
                    self.visit(v, Some(u));
                    self.low[u] = self.low[u].min(self.low[v]);
                    if self.low[v] >= self.disc[u] {
                        let mut block = VertexSet::EMPTY;
                        while let Some((a, b)) = self.stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        self.out.push(block);
                    }
                } else if Some(v) != parent && self.disc[v] < self.disc[u] {
                    self.stack.push((u, v));
                    self.low[u] = self.low[u].min(self.disc[v]);
                }
            }
        }
    }

    let mut dfs = Dfs {
        g,
        within,
        disc: vec![0; g.n()],
        low: vec![0; g.n()],
        clock: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for s in within {
        if dfs.disc[s] == 0 {
            dfs.visit(s, None);
        }
    }
    dfs.out
}

/// A block of G[`within`] with at least four vertices, which exists iff G[`within`] has a cycle of length ≥ 4.
pub fn long_cycle_block(g: &Graph, within: VertexSet) -> Option<VertexSet> {
    blocks(g, within).into_iter().find(|b| b.len() >= 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Vertex {
        vertex: usize,
    },
    Edge {
        u: usize,
        v: usize,
    },
    Vertices {
        vertices: VertexSet,
    },
    Attachment {
        component: VertexSet,
        vertex: usize,
        d_u: usize,
    },
    Component {
        vertices: VertexSet,
        class: ComponentClass,
    },
    DoubleStar(DoubleStarWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaEntry {
    pub id: String,
    pub description: String,
    pub holds: bool,
    /// A failing entry here is not evidence against anything; see [`check_lemma_conclusions`].
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaChecklist {
    pub entries: Vec<LemmaEntry>,
}

impl LemmaChecklist {
    /// Every non-informational entry holds.
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds || e.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }

    pub fn get(&self, id: &str) -> Option<&LemmaEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Structural conclusions expected of a θ₂,₂,₃-free graph of maximum spectral radius,
/// evaluated on `g` and its decomposition. Entries can fail on graphs that are
/// not maximizers; they are reported, not raised.
///
/// `long_cycle_attachment` is informational: its hypothesis only makes sense
/// part-way through an extremal argument.
pub fn check_lemma_conclusions(g: &Graph, report: &DecompositionReport) -> Result<LemmaChecklist, VerifyError> {
    if g.n() == 0 {
        return Err(VerifyError::Empty);
    }
    if !g.is_connected() {
        return Err(VerifyError::Disconnected);
    }
    let spec = ThetaSpec::t223();
    if let Some(witness) = contains_theta(g, spec) {
        return Err(VerifyError::ContainsTheta {
            spec,
            witness: Box::new(witness),
        });
    }

    let mut entries = Vec::new();
    let mut push = |id: &str, description: &str, informational: bool, witness: Option<Witness>| {
        entries.push(LemmaEntry {
            id: id.to_string(),
            description: description.to_string(),
            holds: witness.is_none(),
            informational,
            witness,
        })
    };

    push(
        "outer_degree",
        "every vertex outside N[u*] has degree at least 2",
        false,
        report
            .w
            .iter()
            .find(|&v| g.neighbors(v).len() < 2)
            .map(|vertex| Witness::Vertex { vertex }),
    );

    let long: Vec<(&Component, VertexSet)> = report
        .components
        .iter()
        .filter_map(|c| long_cycle_block(g, c.vertices).map(|b| (c, b)))
        .collect();
    push(
        "long_cycle_attachment",
        "W-neighbours of a component of G[U] with a cycle of length >= 4 have at most 2 neighbours in U",
        true,
        long.iter().find_map(|(c, _)| {
            c.w_h
                .iter()
                .map(|w| (w, report.d_u(g, w)))
                .find(|&(_, d)| d > 2)
                .map(|(vertex, d_u)| Witness::Attachment {
                    component: c.vertices,
                    vertex,
                    d_u,
                })
        }),
    );
    push(
        "no_long_cycle",
        "G[U] has no cycle of length >= 4",
        false,
        long.first().map(|&(_, b)| Witness::Vertices { vertices: b }),
    );
    push(
        "outer_independent",
        "W spans no edge",
        false,
        report.w.iter().find_map(|a| {
            g.neighbors(a)
                .intersection(report.w)
                .iter()
                .find(|&b| b > a)
                .map(|b| Witness::Edge { u: a, v: b })
        }),
    );

    let find_class = |pred: fn(ComponentClass) -> bool| {
        report
            .components
            .iter()
            .find(|c| pred(c.class))
            .map(|c| Witness::Component {
                vertices: c.vertices,
                class: c.class,
            })
    };
    push(
        "no_paw",
        "no component of G[U] is K_{1,3}+e",
        false,
        find_class(|c| c == ComponentClass::StarPlusEdge),
    );
    push(
        "no_triangle_component",
        "no component of G[U] is a triangle",
        false,
        find_class(|c| c == ComponentClass::Cycle(3)),
    );
    push(
        "no_long_path",
        "no component of G[U] is a path on 4 or more vertices",
        false,
        find_class(|c| matches!(c, ComponentClass::Path(k) if k >= 4)),
    );

    let local: Vec<usize> = report.u.iter().collect();
    let gu = g.induced(report.u).expect("U is in range");
    push(
        "no_double_star",
        "G[U] contains no double star S_{1,2}",
        false,
        contains_double_star(&gu).map(|s| {
            Witness::DoubleStar(DoubleStarWitness {
                u: local[s.u],
                v: local[s.v],
                leaf_u: local[s.leaf_u],
                leaves_v: s.leaves_v.map(|x| local[x]),
            })
        }),
    );
    push(
        "all_stars",
        "every non-trivial component of G[U] is a star",
        false,
        find_class(|c| !matches!(c, ComponentClass::Star(_))),
    );

    Ok(LemmaChecklist { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityOne {
    /// λ² − λ ≥ m − 1, up to 1e−9.
    pub applicable: bool,
    #[serde(serialize_with = "sig17_opt")]
    pub lhs: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub rhs: Option<f64>,
    /// lhs − rhs.
    #[serde(serialize_with = "sig17_opt")]
    pub slack: Option<f64>,
}

/// Weighted edge inequality, normalized by x(u*):
///
/// lhs = Σ_{u∈U₊} (d_U(u) − 1)·x(u) + Σ_{w∈W} d_U(w)·x(w),
/// rhs = e(U₊) + e(U,W) + e(W) + Σ_{u∈U₀} x(u) − 1.
///
/// Only evaluated when λ² − λ ≥ m − 1.
pub fn inequality_one_check(g: &Graph, report: &DecompositionReport, res: &SpectralResult) -> InequalityOne {
    let lambda = res.lambda;
    let applicable = lambda * lambda - lambda >= g.m() as f64 - 1.0 - tol::COMPARE;
    if !applicable {
        return InequalityOne {
            applicable,
            lhs: None,
            rhs: None,
            slack: None,
        };
    }
    let x = &res.perron;
    let scale = x[report.ustar];
    let d_u = |v: usize| report.d_u(g, v) as f64;
    let lhs = report.u_plus.iter().map(|u| (d_u(u) - 1.0) * x[u]).sum::<f64>() / scale
        + report.w.iter().map(|w| d_u(w) * x[w]).sum::<f64>() / scale;
    let l = &report.ledger;
    let rhs = (l.e_u_plus + l.e_uw + l.e_w) as f64 + report.u0.iter().map(|u| x[u]).sum::<f64>() / scale - 1.0;
    InequalityOne {
        applicable,
        lhs: Some(lhs),
        rhs: Some(rhs),
        slack: Some(lhs - rhs),
    }
}

/// The number of pages k if `g` is K₂ ∨ kK₁: two adjacent vertices, every
/// other vertex adjacent to exactly those two, and m = 2k + 1.
pub fn book_pages(g: &Graph) -> Option<usize> {
    let m = g.m();
    if m.is_multiple_of(2) || g.n() < 3 {
        return None;
    }
    let k = (m - 1) / 2;
    if g.n() != k + 2 {
        return None;
    }
    let hubs: VertexSet = g.vertices().iter().filter(|&v| g.neighbors(v).len() == k + 1).collect();
    let pair = match k {
        // K₃: every vertex qualifies as a hub
        1 => VertexSet::singleton(0).union(VertexSet::singleton(1)),
        _ if hubs.len() == 2 => hubs,
        _ => return None,
    };
    let mut it = pair.iter();
    let (a, b) = (it.next()?, it.next()?);
    let pages_ok = g.vertices().difference(pair).iter().all(|v| g.neighbors(v) == pair);
    (g.has_edge(a, b) && pages_ok).then_some(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityCase {
    /// |λ − bound| ≤ 1e−9.
    pub claimed: bool,
    pub iso_to_book: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub vertices: VertexSet,
    pub class: ComponentClass,
}

/// Every step of the pipeline on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub spec: ThetaSpec,
    pub connected: bool,
    /// Largest component radius for disconnected graphs; absent without edges.
    #[serde(serialize_with = "sig17_opt")]
    pub lambda: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub bound: Option<f64>,
    pub theta_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ThetaWitness>,
    /// λ ≤ bound + 1e−9; absent when the graph is not free or has no edges.
    pub within_bound: Option<bool>,
    pub ustar: Option<usize>,
    pub ledger: Option<EdgeLedger>,
    pub components: Vec<ComponentEntry>,
    /// Empty unless the graph is connected and θ₂,₂,₃-free.
    pub lemmas: Vec<LemmaEntry>,
    pub inequality1: Option<InequalityOne>,
    pub equality_case: Option<EqualityCase>,
}

impl Certificate {
    /// False when a free graph exceeds the bound, or meets it without being a book.
    pub fn conforms(&self) -> bool {
        if !self.theta_free {
            return true;
        }
        let exceeded = self.within_bound == Some(false);
        let bad_equality = self.equality_case.is_some_and(|e| e.claimed && !e.iso_to_book);
        !exceeded && !bad_equality
    }
}

pub fn verify_theorem_instance(g: &Graph) -> Result<Certificate, VerifyError> {
    verify_with_spec(g, ThetaSpec::t223())
}

/// Runs freeness, spectral radius, bound comparison, decomposition,
/// checklist and equality test. Failed checks are recorded, not raised;
/// errors come only from the eigensolver.
pub fn verify_with_spec(g: &Graph, spec: ThetaSpec) -> Result<Certificate, VerifyError> {
    let m = g.m();
    let witness = contains_theta(g, spec);
    let theta_free = witness.is_none();
    let connected = g.n() > 0 && g.is_connected();
    let mut cert = Certificate {
        graph6: to_graph6(g),
        n: g.n(),
        m,
        spec,
        connected,
        lambda: None,
        bound: (m >= 1).then(|| bound_value(m)),
        theta_free,
        witness,
        within_bound: None,
        ustar: None,
        ledger: None,
        components: Vec::new(),
        lemmas: Vec::new(),
        inequality1: None,
        equality_case: None,
    };
    if m == 0 {
        return Ok(cert);
    }

    let mut spectral_result = None;
    if connected {
        let res = spectral::spectral_radius(g)?;
        cert.lambda = Some(res.lambda);
        spectral_result = Some(res);
    } else {
        cert.lambda = Some(spectral::radius_by_components(g)?);
    }

    if let Some(res) = &spectral_result {
        let report = decompose(g, res)?;
        cert.ustar = Some(report.ustar);
        cert.ledger = Some(report.ledger);
        cert.components = report
            .components
            .iter()
            .map(|c| ComponentEntry {
                vertices: c.vertices,
                class: c.class,
            })
            .collect();
        cert.inequality1 = Some(inequality_one_check(g, &report, res));
        match check_lemma_conclusions(g, &report) {
            Ok(list) => cert.lemmas = list.entries,
            Err(VerifyError::ContainsTheta { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    if theta_free {
        let (lambda, bound) = (cert.lambda.unwrap(), cert.bound.unwrap());
        cert.within_bound = Some(lambda <= bound + tol::COMPARE);
        cert.equality_case = Some(EqualityCase {
            claimed: (lambda - bound).abs() <= tol::COMPARE,
            iso_to_book: book_pages(g).is_some(),
        });
    }
    Ok(cert)
}
