//! Canonical labelling by partition refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, individualize each vertex of the first non-singleton cell,
//! recurse. Every discrete leaf induces a relabelled adjacency matrix and the
//! lexicographically least one is the certificate. Two prunings keep the tree
//! small on symmetric graphs, both driven only by automorphisms found at
//! leaves: children in the same orbit of the path stabiliser are skipped, and
//! a leaf equivalent to the first or best leaf backjumps to the divergence
//! point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet, MAX_VERTICES};

/// Isomorphism-class certificate: vertex count followed by the canonical
/// adjacency rows, big-endian. Ordered bytewise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn from_rows(n: usize, rows: &[u64]) -> Self {
        let mut bytes = Vec::with_capacity(1 + 8 * rows.len());
        bytes.push(n as u8);
        for r in rows {
            bytes.extend_from_slice(&r.to_be_bytes());
        }
        CanonicalLabel(bytes)
    }
}

impl fmt::Debug for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalLabel(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Result of canonization.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// `position[v]` is the canonical index of vertex `v`.
    pub position: Vec<usize>,
    pub label: CanonicalLabel,
}

impl Canonical {
    /// The input graph relabelled into canonical order.
    pub fn form(&self, g: &Graph) -> Graph {
        g.permuted(&self.position)
    }
}

pub fn canonical_label(g: &Graph) -> CanonicalLabel {
    canonize(g).label
}

/// Canonical representative of the isomorphism class of `g`.
pub fn canonical_form(g: &Graph) -> Graph {
    canonize(g).form(g)
}

pub fn canonize(g: &Graph) -> Canonical {
    let cells = if g.n() == 0 { Vec::new() } else { vec![g.vertices()] };
    canonize_colored(g, cells)
}

/// Canonizes with an ordered initial colouring. Isomorphisms are required to
/// map each initial cell onto the cell at the same position, so the cells
/// must cover every vertex exactly once.
pub fn canonize_colored(g: &Graph, cells: Vec<VertexSet>) -> Canonical {
    debug_assert_eq!(cells.iter().fold(VertexSet::EMPTY, |a, &c| a.union(c)), g.vertices());
    let cells: Vec<VertexSet> = cells.into_iter().filter(|c| !c.is_empty()).collect();
    let mut search = Search {
        g,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    let mut path = Vec::new();
    search.descend(cells, &mut path);
    let best = search.best.expect("search visits at least one leaf");
    let mut position = vec![0; g.n()];
    for (i, &v) in best.order.iter().enumerate() {
        position[v] = i;
    }
    Canonical {
        position,
        label: CanonicalLabel::from_rows(g.n(), &best.cert),
    }
}

/// Canonical label of `g` with the vertices of `marked` distinguished.
pub(crate) fn marked_label(g: &Graph, marked: VertexSet) -> CanonicalLabel {
    canonize_colored(g, vec![g.vertices().difference(marked), marked]).label
}

/// Relabelled adjacency rows: bit `63 - j` of row `i` is set when the
/// vertices at positions `i` and `j` are adjacent.
pub(crate) fn certificate(g: &Graph, order: &[usize]) -> Vec<u64> {
    let mut pos = [0usize; MAX_VERTICES];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u64, |row, u| row | 1u64 << (63 - pos[u])))
        .collect()
}

/// Refines an ordered partition until it is equitable: every vertex of a
/// cell has the same number of neighbours in every cell. Split cells are
/// replaced in place by their parts ordered by that count, which keeps the
/// procedure label-invariant.
pub(crate) fn refine(g: &Graph, mut cells: Vec<VertexSet>) -> Vec<VertexSet> {
    let mut buckets = [0u64; MAX_VERTICES + 1];
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s];
            let mut next: Option<Vec<VertexSet>> = None;
            for (ci, &cell) in cells.iter().enumerate() {
                if cell.len() > 1 {
                    let (mut lo, mut hi) = (usize::MAX, 0);
                    for v in cell {
                        let c = g.neighbors(v).intersection(splitter).len();
                        buckets[c] |= 1u64 << v;
                        lo = lo.min(c);
                        hi = hi.max(c);
                    }
                    if lo != hi {
                        let out = next.get_or_insert_with(|| cells[..ci].to_vec());
                        for b in &mut buckets[lo..=hi] {
                            if *b != 0 {
                                out.push(VertexSet(*b));
                                *b = 0;
                            }
                        }
                        continue;
                    }
                    buckets[lo] = 0;
                }
                if let Some(out) = next.as_mut() {
                    out.push(cell);
                }
            }
            if let Some(out) = next {
                cells = out;
                changed = true;
            }
            s += 1;
        }
        if !changed {
            return cells;
        }
    }
}

struct Leaf {
    path: Vec<usize>,
    order: Vec<usize>,
    cert: Vec<u64>,
}

struct Search<'g> {
    g: &'g Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<u8>>,
}

impl Search<'_> {
    /// Explores the subtree below `cells`. Returns `Some(d)` to abandon every
    /// node deeper than `d` and resume the loop at depth `d`.
    fn descend(&mut self, cells: Vec<VertexSet>, path: &mut Vec<usize>) -> Option<usize> {
        let cells = refine(self.g, cells);
        let Some(ti) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells, path);
        };
        let target = cells[ti];
        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for v in target {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, path) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(VertexSet::singleton(v));
            child.push(target.difference(VertexSet::singleton(v)));
            child.extend_from_slice(&cells[ti + 1..]);
            path.push(v);
            let jump = self.descend(child, path);
            path.pop();
            explored.push(v);
            if let Some(d) = jump {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn in_explored_orbit(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if path.iter().any(|&p| gamma[p] as usize != p) {
                continue;
            }
            any = true;
            for (x, &y) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, cells: &[VertexSet], path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.first().unwrap()).collect();
        let cert = certificate(self.g, &order);
        let leaf = Leaf {
            path: path.to_vec(),
            order,
            cert,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                order: leaf.order.clone(),
                cert: leaf.cert.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if leaf.cert == first.cert {
            let gamma = mapping(&first.order, &leaf.order);
            let jump = backjump(&first.path, &leaf.path, &gamma);
            self.automorphisms.push(gamma);
            return jump;
        }
        let best = self.best.as_ref().unwrap();
        match leaf.cert.cmp(&best.cert) {
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Equal => {
                let gamma = mapping(&best.order, &leaf.order);
                let jump = backjump(&best.path, &leaf.path, &gamma);
                self.automorphisms.push(gamma);
                jump
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn mapping(from: &[usize], to: &[usize]) -> Vec<u8> {
    let mut gamma = vec![0u8; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b as u8;
    }
    gamma
}

/// If `gamma` carries the earlier path onto the current one, the current
/// subtree below their divergence point is the image of an explored subtree.
fn backjump(earlier: &[usize], current: &[usize], gamma: &[u8]) -> Option<usize> {
    if earlier.len() != current.len() || earlier.iter().zip(current).any(|(&a, &b)| gamma[a] as usize != b) {
        return None;
    }
    let d = earlier.iter().zip(current).take_while(|(a, b)| a == b).count();
    (d < current.len()).then_some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family;

    fn relabel(g: &Graph, seed: u64) -> Graph {
        // small deterministic shuffle, enough for unit tests
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (s >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        g.permuted(&perm)
    }

    #[test]
    fn cycle_relabelings_agree() {
        let c5 = family::cycle(5).unwrap();
        let l = canonical_label(&c5);
        for seed in 0..50 {
            assert_eq!(canonical_label(&relabel(&c5, seed)), l);
        }
    }

    #[test]
    fn path_and_star_differ() {
        let p4 = family::path(4).unwrap();
        let k13 = family::star(4).unwrap();
        assert_eq!(p4.m(), k13.m());
        assert_ne!(canonical_label(&p4), canonical_label(&k13));
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        for g in [
            family::book(6).unwrap(),
            family::complete_bipartite(3, 4).unwrap(),
            family::cycle(9).unwrap(),
            Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap(),
        ] {
            let f = canonical_form(&g);
            assert_eq!(canonical_form(&f), f);
            assert_eq!(canonical_label(&f), canonical_label(&g));
        }
    }

    #[test]
    fn highly_symmetric_graphs_finish() {
        for g in [
            family::complete(40).unwrap(),
            Graph::empty(64).unwrap(),
            family::book(50).unwrap(),
            family::complete_bipartite(20, 30).unwrap(),
        ] {
            let a = canonical_label(&g);
            assert_eq!(canonical_label(&relabel(&g, 7)), a);
        }
    }

    #[test]
    fn refine_splits_by_degree() {
        let g = family::book(3).unwrap();
        let cells = refine(&g, vec![g.vertices()]);
        assert_eq!(cells, vec![VertexSet(0b11100), VertexSet(0b00011)]);
    }

    #[test]
    fn marked_edges_distinguish_orbits() {
        // P4: the two end edges are equivalent, the middle one is not
        let p4 = family::path(4).unwrap();
        let e01 = marked_label(&p4, VertexSet(0b0011));
        let e23 = marked_label(&p4, VertexSet(0b1100));
        let e12 = marked_label(&p4, VertexSet(0b0110));
        assert_eq!(e01, e23);
        assert_ne!(e01, e12);
    }

    #[test]
    fn null_graph() {
        let g = Graph::empty(0).unwrap();
        assert_eq!(canonical_label(&g).as_bytes(), &[0]);
    }
}
