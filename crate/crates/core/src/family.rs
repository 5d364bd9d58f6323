//! Named graph families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: &'static str, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown family `{0}`")]
    Unknown(String),
}

fn invalid(family: &'static str, reason: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParams {
        family,
        reason: reason.into(),
    }
}

/// A named family with its parameters. Vertex counts are totals, so
/// `Star { n: 5 }` is K₁,₄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    Star { n: usize },
    StarPlusEdge { n: usize },
    Complete { n: usize },
    CompleteMinusEdge { n: usize },
    CompleteBipartite { s: usize, t: usize },
    Path { n: usize },
    Cycle { n: usize },
    Book { k: usize },
}

impl Family {
    pub fn build(self) -> Result<Graph, FamilyError> {
        match self {
            Family::Star { n } => star(n),
            Family::StarPlusEdge { n } => star_plus_edge(n),
            Family::Complete { n } => complete(n),
            Family::CompleteMinusEdge { n } => complete_minus_edge(n),
            Family::CompleteBipartite { s, t } => complete_bipartite(s, t),
            Family::Path { n } => path(n),
            Family::Cycle { n } => cycle(n),
            Family::Book { k } => book(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Star { .. } => "star",
            Family::StarPlusEdge { .. } => "star_plus_edge",
            Family::Complete { .. } => "complete",
            Family::CompleteMinusEdge { .. } => "complete_minus_edge",
            Family::CompleteBipartite { .. } => "complete_bipartite",
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Book { .. } => "book",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::CompleteBipartite { s, t } => write!(f, "{}({s},{t})", self.name()),
            Family::Book { k } => write!(f, "book({k})"),
            Family::Star { n }
            | Family::StarPlusEdge { n }
            | Family::Complete { n }
            | Family::CompleteMinusEdge { n }
            | Family::Path { n }
            | Family::Cycle { n } => write!(f, "{}({n})", self.name()),
        }
    }
}

/// Parses `name(a)` or `name(a,b)`, e.g. `cycle(5)` or `complete_bipartite(2,4)`.
impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::Unknown(s.to_string());
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let one = || match args[..] {
            [a] => Ok(a),
            _ => Err(bad()),
        };
        Ok(match name.trim() {
            "star" => Family::Star { n: one()? },
            "star_plus_edge" => Family::StarPlusEdge { n: one()? },
            "complete" => Family::Complete { n: one()? },
            "complete_minus_edge" => Family::CompleteMinusEdge { n: one()? },
            "path" => Family::Path { n: one()? },
            "cycle" => Family::Cycle { n: one()? },
            "book" => Family::Book { k: one()? },
            "complete_bipartite" => match args[..] {
                [s, t] => Family::CompleteBipartite { s, t },
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        })
    }
}

/// K₂ ∨ kK₁: hubs 0 and 1 adjacent to each other and to pages `2..k+2`.
pub fn book(k: usize) -> Result<Graph, FamilyError> {
    if k == 0 {
        return Err(invalid("book", "k must be at least 1"));
    }
    let edges = std::iter::once((0, 1)).chain((2..k + 2).flat_map(|p| [(0, p), (1, p)]));
    Ok(Graph::from_edges(k + 2, edges)?)
}

/// Neighbour lists of [`book`] with the same labelling, for k beyond the
/// bitset vertex limit.
pub fn book_lists(k: usize) -> Result<Vec<Vec<usize>>, FamilyError> {
    if k == 0 {
        return Err(invalid("book", "k must be at least 1"));
    }
    let pages = 2..k + 2;
    let mut adj = vec![std::iter::once(1).chain(pages.clone()).collect::<Vec<_>>()];
    adj.push(std::iter::once(0).chain(pages.clone()).collect());
    adj.extend(pages.map(|_| vec![0, 1]));
    Ok(adj)
}

/// K₁,ₙ₋₁ centred at vertex 0.
pub fn star(n: usize) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("star", "needs at least 2 vertices"));
    }
    Ok(Graph::from_edges(n, (1..n).map(|v| (0, v)))?)
}

/// K₁,ₙ₋₁ plus the edge between leaves 1 and 2.
pub fn star_plus_edge(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(invalid("star_plus_edge", "needs at least 3 vertices"));
    }
    Ok(star(n)?.with_edge(1, 2)?)
}

pub fn complete(n: usize) -> Result<Graph, FamilyError> {
    if n < 1 {
        return Err(invalid("complete", "needs at least 1 vertex"));
    }
    Ok(Graph::from_edges(
        n,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
    )?)
}

/// Kₙ without the edge 0-1.
pub fn complete_minus_edge(n: usize) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("complete_minus_edge", "needs at least 2 vertices"));
    }
    Ok(Graph::from_edges(
        n,
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&e| e != (0, 1)),
    )?)
}

/// K_{s,t} with parts `0..s` and `s..s+t`.
pub fn complete_bipartite(s: usize, t: usize) -> Result<Graph, FamilyError> {
    if s == 0 || t == 0 {
        return Err(invalid("complete_bipartite", "both parts must be non-empty"));
    }
    Ok(Graph::from_edges(
        s + t,
        (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v))),
    )?)
}

pub fn path(n: usize) -> Result<Graph, FamilyError> {
    if n < 1 {
        return Err(invalid("path", "needs at least 1 vertex"));
    }
    Ok(Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))?)
}

pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(invalid("cycle", "length must be at least 3"));
    }
    Ok(Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))?)
}
