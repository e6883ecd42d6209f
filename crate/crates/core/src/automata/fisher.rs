//! Minimal right-resolving presentation of an irreducible sofic shift.

use super::cover::{determinize_from_full, DeterministicCover};
use super::graph::{Edge, LabeledGraph};
use crate::error::{Error, Result};

/// Fisher cover of the shift presented by `graph`.
///
/// Determinizes from the full vertex set, merges states with equal follower
/// languages by partition refinement, and keeps the unique terminal strongly
/// connected component of the quotient; that component holds the follower
/// sets of synchronizing words. Vertices are named `q0, q1, …` in order of
/// first discovery.
pub fn fisher_cover(graph: &LabeledGraph) -> Result<LabeledGraph> {
    let g = graph.normalized();
    if !g.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let cover = determinize_from_full(&g);
    let class = follower_classes(&cover);
    let nclass = class.iter().max().map_or(0, |m| m + 1);
    let k = g.alphabet().len();

    let mut qtrans = vec![vec![None; k]; nclass];
    for s in 0..cover.len() {
        for (r, slot) in qtrans[class[s]].iter_mut().enumerate() {
            *slot = cover.step_rank(s, r).map(|t| class[t]);
        }
    }

    let comp = scc(&qtrans);
    let ncomp = comp.iter().max().map_or(0, |m| m + 1);
    let mut is_sink = vec![true; ncomp];
    for (c, row) in qtrans.iter().enumerate() {
        for t in row.iter().flatten() {
            if comp[*t] != comp[c] {
                is_sink[comp[c]] = false;
            }
        }
    }
    let sinks: Vec<usize> = (0..ncomp).filter(|&c| is_sink[c]).collect();
    if sinks.len() != 1 {
        return Err(Error::Precondition(format!(
            "expected a unique terminal component, found {}",
            sinks.len()
        )));
    }
    let keep: Vec<usize> = (0..nclass).filter(|&c| comp[c] == sinks[0]).collect();
    let mut remap = vec![usize::MAX; nclass];
    for (i, &c) in keep.iter().enumerate() {
        remap[c] = i;
    }
    let names = (0..keep.len()).map(|i| format!("q{i}")).collect();
    let mut edges = Vec::new();
    for &c in &keep {
        for (r, t) in qtrans[c].iter().enumerate() {
            if let Some(t) = t {
                edges.push(Edge {
                    src: remap[c],
                    dst: remap[*t],
                    label: g.alphabet().symbol(r),
                });
            }
        }
    }
    LabeledGraph::new(g.alphabet().clone(), names, edges)
}

/// Moore refinement on a partial DFA in which every state accepts. Class ids
/// are numbered by first occurrence in state order.
fn follower_classes(cover: &DeterministicCover) -> Vec<usize> {
    let k = cover.alphabet().len();
    let n = cover.len();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: std::collections::HashMap<(usize, Vec<Option<usize>>), usize> =
            std::collections::HashMap::new();
        let mut next = vec![0usize; n];
        for s in 0..n {
            let sig: Vec<Option<usize>> = (0..k).map(|r| cover.step_rank(s, r).map(|t| class[t])).collect();
            let len = ids.len();
            next[s] = *ids.entry((class[s], sig)).or_insert(len);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// Strongly connected components (Tarjan, iterative) of a partial
/// deterministic transition table.
pub(crate) fn scc(trans: &[Vec<Option<usize>>]) -> Vec<usize> {
    let n = trans.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < trans[v].len() {
                let r = top.1;
                top.1 += 1;
                if let Some(w) = trans[v][r] {
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::cover::language_window;
    use crate::automata::{flower, samples};
    use crate::words::{Alphabet, Block};

    #[test]
    fn fisher_examples() {
        let a = Alphabet::binary();
        let f = fisher_cover(&samples::full_shift(&a)).unwrap();
        assert_eq!((f.vertex_count(), f.edge_count()), (1, 2));

        let f = fisher_cover(&samples::even_shift()).unwrap();
        assert_eq!(f.vertex_count(), 2);
        let f = fisher_cover(&samples::golden_mean()).unwrap();
        assert_eq!(f.vertex_count(), 2);

        assert_eq!(fisher_cover(&samples::disjoint_loops()), Err(Error::NotIrreducible));
    }

    #[test]
    fn redundant_presentation_collapses() {
        // Full shift presented on a 2-cycle with doubled labels.
        let g = LabeledGraph::parse("alphabet 01\na b 0\na b 1\nb a 0\nb a 1\n").unwrap();
        let f = fisher_cover(&g).unwrap();
        assert_eq!(f.vertex_count(), 1);
        assert_eq!(f.period().unwrap(), 1);
        // (01)^∞ on a 4-cycle collapses to the 2-cycle.
        let c = samples::cycle(&a(), &Block::from("0101"));
        assert_eq!(fisher_cover(&c).unwrap().vertex_count(), 2);
    }

    fn a() -> Alphabet {
        Alphabet::binary()
    }

    #[test]
    fn fisher_preserves_language() {
        let gens = [Block::from("01"), Block::from("011"), Block::from("0")];
        let graphs = [
            samples::golden_mean(),
            samples::even_shift(),
            samples::full_shift(&a()),
            flower(&a(), &gens).unwrap(),
        ];
        for g in &graphs {
            let f = fisher_cover(g).unwrap();
            for l in 1..=8 {
                assert_eq!(language_window(g, l), language_window(&f, l));
            }
        }
    }

    #[test]
    fn scc_on_chain_and_cycle() {
        // 0 -> 1 -> 2 -> 1
        let t = vec![vec![Some(1)], vec![Some(2)], vec![Some(1)]];
        let c = scc(&t);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[0], c[1]);
    }
}
