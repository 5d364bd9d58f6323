//! Fixed inputs shared by the benchmarks.

use spectheta::family;
use spectheta::Graph;

/// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
pub fn petersen() -> Graph {
    let edges = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
    Graph::from_edges(10, edges).unwrap()
}

/// Grid graph on `w` x `h` vertices, row-major.
pub fn grid(w: usize, h: usize) -> Graph {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_edges(w * h, edges).unwrap()
}

/// Named graphs of assorted size and symmetry.
pub fn fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("petersen", petersen()),
        ("book28", family::book(28).unwrap()),
        ("grid8x8", grid(8, 8)),
        ("k8_8", family::complete_bipartite(8, 8).unwrap()),
        ("cycle40", family::cycle(40).unwrap()),
        ("k20", family::complete(20).unwrap()),
    ]
}
