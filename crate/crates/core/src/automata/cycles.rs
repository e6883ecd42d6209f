use serde::Serialize;

use super::graph::LabeledGraph;
use crate::error::{Error, Result};
use crate::words::{gcd, Block};

/// A closed walk given by edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedWalk {
    pub start: usize,
    pub edges: Vec<usize>,
    pub label: Block,
}

impl ClosedWalk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Two closed walks with coprime lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub first: ClosedWalk,
    pub second: ClosedWalk,
}

impl CycleWitness {
    pub fn lengths(&self) -> (usize, usize) {
        (self.first.len(), self.second.len())
    }
}

/// Closed walks through vertex 0 with coprime lengths `l1 < l2`, smallest
/// `l2` first, then smallest `l1`.
///
/// Walk lengths are tracked level by level as reachable-vertex bitsets. This
/// does not consult the period: if the graph is primitive, every length from
/// `(n-1)^2 + 1` on is a closed-walk length, so a pair shows up by
/// `(n-1)^2 + 2`; otherwise every closed length is a multiple of the period
/// and the search comes back empty.
pub fn coprime_cycles(graph: &LabeledGraph) -> Result<Option<CycleWitness>> {
    if !graph.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let n = graph.vertex_count();
    let words = n.div_ceil(64);
    let bound = (n - 1) * (n - 1) + 2;
    let mut levels: Vec<Vec<u64>> = Vec::with_capacity(bound + 1);
    let mut first = vec![0u64; words];
    first[0] |= 1;
    levels.push(first);
    let mut closed: Vec<usize> = Vec::new();
    let mut common = 0usize;
    for len in 1..=bound {
        let prev = &levels[len - 1];
        let mut cur = vec![0u64; words];
        for e in graph.edges() {
            if prev[e.src / 64] >> (e.src % 64) & 1 == 1 {
                cur[e.dst / 64] |= 1 << (e.dst % 64);
            }
        }
        let is_closed = cur[0] & 1 == 1;
        levels.push(cur);
        if !is_closed {
            continue;
        }
        // A common factor of every earlier length and `len` rules out a
        // partner without scanning.
        let shared = gcd(common, len);
        common = shared;
        if shared > 1 {
            closed.push(len);
            continue;
        }
        if let Some(&l1) = closed.iter().find(|&&l1| gcd(l1, len) == 1) {
            return Ok(Some(CycleWitness {
                first: trace_back(graph, &levels, l1),
                second: trace_back(graph, &levels, len),
            }));
        }
        closed.push(len);
    }
    Ok(None)
}

/// Rebuilds a closed walk of length `len` at vertex 0, taking the lowest
/// numbered admissible edge at each step backwards.
fn trace_back(graph: &LabeledGraph, levels: &[Vec<u64>], len: usize) -> ClosedWalk {
    let mut cur = 0usize;
    let mut edges = Vec::with_capacity(len);
    for t in (1..=len).rev() {
        let prev = &levels[t - 1];
        let &i = graph
            .in_edges(cur)
            .iter()
            .find(|&&i| {
                let s = graph.edge(i).src;
                prev[s / 64] >> (s % 64) & 1 == 1
            })
            .expect("reachable level has a predecessor");
        edges.push(i);
        cur = graph.edge(i).src;
    }
    edges.reverse();
    ClosedWalk {
        start: 0,
        label: graph.path_label(&edges),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{flower, samples};
    use crate::words::Alphabet;

    #[test]
    fn coprime_examples() {
        let w = coprime_cycles(&samples::golden_mean()).unwrap().unwrap();
        assert_eq!(w.lengths(), (1, 2));
        assert_eq!(w.first.label.as_str(), "0");

        let a = Alphabet::binary();
        let petals = flower(&a, &[Block::from("01"), Block::from("011")]).unwrap();
        assert_eq!(coprime_cycles(&petals).unwrap().unwrap().lengths(), (2, 3));

        let even = flower(&a, &[Block::from("01"), Block::from("0110")]).unwrap();
        assert_eq!(coprime_cycles(&even).unwrap(), None);
        assert_eq!(coprime_cycles(&samples::disjoint_loops()), Err(Error::NotIrreducible));
    }

    #[test]
    fn witnesses_are_closed_walks() {
        let g = samples::even_shift();
        let w = coprime_cycles(&g).unwrap().unwrap();
        for walk in [&w.first, &w.second] {
            assert!(g.is_closed_walk(&walk.edges));
            assert_eq!(g.path_label(&walk.edges), walk.label);
        }
        let (l1, l2) = w.lengths();
        assert_eq!(gcd(l1, l2), 1);
    }
}
