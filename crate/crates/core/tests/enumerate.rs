mod common;

use std::collections::BTreeSet;

use spectheta::enumerate::{count_connected_by_order, graphs_by_order, EnumOptions};
use spectheta::{canonical_label, enumerate_by_edges, enumerate_with, CanonicalLabel, Graph};

const CONNECTED_BY_EDGES: [usize; 10] = [1, 1, 3, 5, 12, 30, 79, 227, 710, 2322];
const NO_ISOLATED_BY_EDGES: [usize; 10] = [1, 2, 5, 11, 26, 68, 177, 497, 1476, 4613];

#[test]
fn connected_counts_by_edges() {
    for (i, &want) in CONNECTED_BY_EDGES.iter().enumerate() {
        let m = i + 1;
        assert_eq!(enumerate_by_edges(m, true).unwrap().len(), want, "m = {m}");
    }
}

#[test]
fn counts_without_isolated_vertices() {
    for (i, &want) in NO_ISOLATED_BY_EDGES.iter().enumerate() {
        let m = i + 1;
        assert_eq!(enumerate_by_edges(m, false).unwrap().len(), want, "m = {m}");
    }
}

#[test]
fn connected_counts_by_order() {
    let got: Vec<usize> = (1..=7).map(|n| count_connected_by_order(n).unwrap()).collect();
    assert_eq!(got, vec![1, 1, 2, 6, 21, 112, 853]);
}

#[test]
fn all_graphs_by_order() {
    let got: Vec<usize> = (0..=7).map(|n| graphs_by_order(n).unwrap().len()).collect();
    assert_eq!(got, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
}

/// Canonical labels of every labelled graph with `m` edges and no isolated vertices.
fn labelled_oracle(m: usize) -> BTreeSet<CanonicalLabel> {
    let mut out = BTreeSet::new();
    for n in 2..=2 * m {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut pick = Vec::with_capacity(m);
        choose(&pairs, m, 0, &mut pick, &mut |edges| {
            let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
            if g.isolated_vertices().is_empty() {
                out.insert(canonical_label(&g));
            }
        });
    }
    out
}

fn choose(
    pairs: &[(usize, usize)],
    k: usize,
    start: usize,
    pick: &mut Vec<(usize, usize)>,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..pairs.len() {
        if pairs.len() - i < k - pick.len() {
            break;
        }
        pick.push(pairs[i]);
        choose(pairs, k, i + 1, pick, f);
        pick.pop();
    }
}

#[test]
fn matches_labelled_oracle() {
    for m in 1..=5 {
        let oracle = labelled_oracle(m);
        let got: Vec<CanonicalLabel> = enumerate_by_edges(m, false)
            .unwrap()
            .iter()
            .map(canonical_label)
            .collect();
        let set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "duplicate classes at m = {m}");
        assert_eq!(set, oracle, "m = {m}");
    }
}

#[test]
fn output_is_canonical_and_sorted() {
    let graphs = enumerate_by_edges(7, false).unwrap();
    let labels: Vec<_> = graphs.iter().map(canonical_label).collect();
    assert!(labels.windows(2).all(|w| w[0] < w[1]));
    for g in &graphs {
        assert_eq!(&spectheta::canonical_form(g), g);
        assert!(g.isolated_vertices().is_empty());
        assert_eq!(g.m(), 7);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let opts = |threads| EnumOptions {
        connected_only: true,
        threads,
        ..Default::default()
    };
    let one = enumerate_with(8, &opts(1)).unwrap();
    let four = enumerate_with(8, &opts(4)).unwrap();
    assert_eq!(one, four);
}

#[test]
fn connected_mode_is_the_connected_part() {
    for m in 1..=7 {
        let all = enumerate_by_edges(m, false).unwrap();
        let connected: Vec<Graph> = all.into_iter().filter(|g| g.is_connected()).collect();
        assert_eq!(connected, enumerate_by_edges(m, true).unwrap(), "m = {m}");
    }
}
