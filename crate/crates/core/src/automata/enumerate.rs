//! Exhaustive enumeration of small irreducible binary graphs, up to vertex
//! relabeling.

use std::collections::HashSet;

use sha2::{Digest, Sha256};

use super::graph::{Edge, LabeledGraph};
use crate::words::Alphabet;

type Triple = (u8, u8, u8);

/// Every irreducible graph over `{0,1}` with at most `max_vertices` vertices
/// and at most `max_edges` edges, one per isomorphism class. Parallel edges
/// are allowed only when their labels differ. Output order: vertex count,
/// then canonical edge list.
pub fn irreducible_binary_graphs(max_vertices: usize, max_edges: usize) -> Vec<LabeledGraph> {
    let mut forms: Vec<(usize, Vec<Triple>)> = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        let triples: Vec<Triple> = (0..n as u8)
            .flat_map(|s| (0..n as u8).flat_map(move |d| [(s, d, 0u8), (s, d, 1u8)]))
            .collect();
        let mut seen: HashSet<Vec<Triple>> = HashSet::new();
        let mut chosen = Vec::new();
        for k in n..=max_edges.min(triples.len()) {
            combinations(triples.len(), k, &mut chosen, 0, &mut |idx| {
                let edges: Vec<Triple> = idx.iter().map(|&i| triples[i]).collect();
                if !strongly_connected(n, &edges) {
                    return;
                }
                let canon = canonical_form(&edges, &perms);
                if seen.insert(canon.clone()) {
                    forms.push((n, canon));
                }
            });
        }
    }
    forms.sort();
    forms
        .into_iter()
        .map(|(n, edges)| to_graph(n, &edges))
        .collect()
}

fn to_graph(n: usize, edges: &[Triple]) -> LabeledGraph {
    let names = (0..n).map(|i| i.to_string()).collect();
    let edges = edges
        .iter()
        .map(|&(s, d, l)| Edge {
            src: s as usize,
            dst: d as usize,
            label: b'0' + l,
        })
        .collect();
    LabeledGraph::new(Alphabet::binary(), names, edges).expect("valid")
}

/// Lexicographically least sorted edge list over all vertex relabelings.
pub fn canonical_form(edges: &[Triple], perms: &[Vec<u8>]) -> Vec<Triple> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<Triple> = edges
                .iter()
                .map(|&(s, d, l)| (p[s as usize], p[d as usize], l))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// Digest of a graph's isomorphism class (binary graphs on at most 8 vertices).
pub fn canonical_digest(graph: &LabeledGraph) -> String {
    let n = graph.vertex_count();
    let edges: Vec<Triple> = graph
        .edges()
        .iter()
        .map(|e| {
            let l = graph.alphabet().rank(e.label).expect("label") as u8;
            (e.src as u8, e.dst as u8, l)
        })
        .collect();
    let canon = canonical_form(&edges, &permutations(n));
    let text: String = canon.iter().map(|(s, d, l)| format!("{s} {d} {l}\n")).collect();
    hex::encode(Sha256::digest(format!("n={n}\n{text}").as_bytes()))
}

fn strongly_connected(n: usize, edges: &[Triple]) -> bool {
    let mut fwd = vec![0u32; n];
    let mut bwd = vec![0u32; n];
    for &(s, d, _) in edges {
        fwd[s as usize] |= 1 << d;
        bwd[d as usize] |= 1 << s;
    }
    let full = (1u32 << n) - 1;
    let closure = |adj: &[u32]| {
        let mut seen = 1u32;
        loop {
            let mut next = seen;
            for (v, &a) in adj.iter().enumerate() {
                if seen >> v & 1 == 1 {
                    next |= a;
                }
            }
            if next == seen {
                return seen;
            }
            seen = next;
        }
    };
    closure(&fwd) == full && closure(&bwd) == full
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn combinations(n: usize, k: usize, cur: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let need = k - cur.len();
    for i in start..=(n - need) {
        cur.push(i);
        combinations(n, k, cur, i + 1, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vertex_classes() {
        // loops: {0}, {1}, {0,1}
        let gs = irreducible_binary_graphs(1, 6);
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(|g| g.is_irreducible()));
    }

    #[test]
    fn two_vertex_count_matches_brute_force() {
        let gs = irreducible_binary_graphs(2, 3);
        let two: Vec<_> = gs.iter().filter(|g| g.vertex_count() == 2).collect();
        // Oracle: every 2- or 3-subset of the 8 possible triples, filtered for
        // strong connectivity, deduplicated by swapping the two vertices.
        let triples: Vec<Triple> = (0..2u8)
            .flat_map(|s| (0..2u8).flat_map(move |d| [(s, d, 0), (s, d, 1)]))
            .collect();
        let mut classes = HashSet::new();
        for mask in 0u32..256 {
            let k = mask.count_ones();
            if !(2..=3).contains(&k) {
                continue;
            }
            let e: Vec<Triple> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| triples[i]).collect();
            let has = |s, d| e.iter().any(|t| t.0 == s && t.1 == d);
            if !(has(0, 1) && has(1, 0)) {
                continue;
            }
            let mut a = e.clone();
            a.sort();
            let mut b: Vec<Triple> = e.iter().map(|&(s, d, l)| (1 - s, 1 - d, l)).collect();
            b.sort();
            classes.insert(a.min(b));
        }
        assert_eq!(two.len(), classes.len());
    }

    #[test]
    fn digest_ignores_relabeling() {
        let g1 = LabeledGraph::parse("alphabet 01\nx x 0\nx y 1\ny x 0\n").unwrap();
        let g2 = LabeledGraph::parse("alphabet 01\ny x 1\nx y 0\nx x 0\n").unwrap();
        // g3 is g1 with x and y exchanged; g2 puts the 1 on the return edge.
        let g3 = LabeledGraph::parse("alphabet 01\ny y 0\ny x 1\nx y 0\n").unwrap();
        assert_eq!(canonical_digest(&g1), canonical_digest(&g3));
        assert_ne!(canonical_digest(&g1), canonical_digest(&g2));
    }
}
