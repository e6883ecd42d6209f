//! Small presentations used throughout tests, scenarios and docs.

use super::graph::{Edge, LabeledGraph};
use crate::words::{Alphabet, Block};

/// One vertex with a loop per symbol.
pub fn full_shift(alphabet: &Alphabet) -> LabeledGraph {
    let edges = alphabet
        .symbols()
        .iter()
        .map(|&s| Edge { src: 0, dst: 0, label: s })
        .collect();
    LabeledGraph::new(alphabet.clone(), vec!["v".into()], edges).expect("valid")
}

/// Binary blocks without `11`: `a -0-> a`, `a -1-> b`, `b -0-> a`.
pub fn golden_mean() -> LabeledGraph {
    LabeledGraph::from_triples(
        Alphabet::binary(),
        &[("a", "a", '0'), ("a", "b", '1'), ("b", "a", '0')],
    )
    .expect("valid")
}

/// Even number of `0`s between consecutive `1`s.
pub fn even_shift() -> LabeledGraph {
    LabeledGraph::from_triples(
        Alphabet::binary(),
        &[("v1", "v1", '1'), ("v1", "v2", '0'), ("v2", "v1", '0')],
    )
    .expect("valid")
}

/// A single simple cycle reading `label`.
pub fn cycle(alphabet: &Alphabet, label: &Block) -> LabeledGraph {
    let n = label.len();
    let names = (0..n).map(|i| format!("c{i}")).collect();
    let edges = label
        .as_bytes()
        .iter()
        .enumerate()
        .map(|(i, &s)| Edge {
            src: i,
            dst: (i + 1) % n,
            label: s,
        })
        .collect();
    LabeledGraph::new(alphabet.clone(), names, edges).expect("valid")
}

/// Two self-loops on separate vertices; not irreducible.
pub fn disjoint_loops() -> LabeledGraph {
    LabeledGraph::from_triples(Alphabet::binary(), &[("a", "a", '0'), ("b", "b", '1')]).expect("valid")
}
