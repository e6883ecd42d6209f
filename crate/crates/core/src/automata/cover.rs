//! Subset construction over a labeled graph and the searches that run on it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::graph::LabeledGraph;
use crate::words::{is_lyndon, Alphabet, Block, Exactness, LanguageWindow};

/// Right-resolving cover whose states are nonempty vertex sets of a base
/// graph. The transition on symbol `a` from a set `S` is the set of endpoints
/// of `a`-labeled edges leaving `S`; empty targets are omitted.
#[derive(Clone, Debug)]
pub struct DeterministicCover {
    base: LabeledGraph,
    states: Vec<Vec<u32>>,
    trans: Vec<Vec<Option<u32>>>,
    full: Option<usize>,
}

impl DeterministicCover {
    pub fn base(&self) -> &LabeledGraph {
        &self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.base.alphabet()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Vertex set (sorted base-vertex indices) of a state.
    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    /// The state holding every base vertex, if the base is nonempty.
    pub fn full_state(&self) -> Option<usize> {
        self.full
    }

    pub fn index_of(&self, set: &[u32]) -> Option<usize> {
        self.states.iter().position(|s| s == set)
    }

    pub fn step_rank(&self, state: usize, rank: usize) -> Option<usize> {
        self.trans[state][rank].map(|s| s as usize)
    }

    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        let rank = self.alphabet().rank(symbol)?;
        self.step_rank(state, rank)
    }

    pub fn run(&self, state: usize, word: &Block) -> Option<usize> {
        word.as_bytes().iter().try_fold(state, |s, &a| self.step(s, a))
    }

    /// Whether `word` labels some path of the base graph.
    pub fn accepts(&self, word: &Block) -> bool {
        self.full.is_some_and(|f| self.run(f, word).is_some())
    }

    /// The cover itself as a labeled graph; state names list their vertices.
    pub fn to_graph(&self) -> LabeledGraph {
        let names = self
            .states
            .iter()
            .map(|s| {
                let inner: Vec<&str> = s.iter().map(|&v| self.base.name(v as usize)).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        let mut edges = Vec::new();
        for (i, row) in self.trans.iter().enumerate() {
            for (r, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    edges.push(super::graph::Edge {
                        src: i,
                        dst: *t as usize,
                        label: self.alphabet().symbol(r),
                    });
                }
            }
        }
        LabeledGraph::new(self.alphabet().clone(), names, edges).expect("cover graph is valid")
    }
}

/// Successor sets per `(vertex, symbol rank)`.
pub(crate) fn successor_table(graph: &LabeledGraph) -> Vec<Vec<Vec<u32>>> {
    let k = graph.alphabet().len();
    let mut table = vec![vec![Vec::new(); k]; graph.vertex_count()];
    for e in graph.edges() {
        let r = graph.alphabet().rank(e.label).expect("label in alphabet");
        table[e.src][r].push(e.dst as u32);
    }
    table
}

pub(crate) fn set_step(table: &[Vec<Vec<u32>>], set: &[u32], rank: usize) -> Vec<u32> {
    let mut out: Vec<u32> = set
        .iter()
        .flat_map(|&v| table[v as usize][rank].iter().copied())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn subset_construction(graph: &LabeledGraph, seeds: Vec<Vec<u32>>) -> DeterministicCover {
    let table = successor_table(graph);
    let k = graph.alphabet().len();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut states: Vec<Vec<u32>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if !s.is_empty() && !index.contains_key(&s) {
            index.insert(s.clone(), states.len() as u32);
            queue.push_back(states.len());
            states.push(s);
        }
    }
    let mut trans: Vec<Vec<Option<u32>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        if trans.len() <= i {
            trans.resize(i + 1, Vec::new());
        }
        let mut row = vec![None; k];
        for (r, slot) in row.iter_mut().enumerate() {
            let t = set_step(&table, &states[i], r);
            if t.is_empty() {
                continue;
            }
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    index.insert(t.clone(), id);
                    states.push(t);
                    queue.push_back(id as usize);
                    id
                }
            };
            *slot = Some(id);
        }
        trans[i] = row;
    }
    let full = if graph.vertex_count() > 0 { Some(0) } else { None };
    DeterministicCover {
        base: graph.clone(),
        states,
        trans,
        full,
    }
}

/// Subset construction seeded with the full vertex set and every singleton.
pub fn determinize(graph: &LabeledGraph) -> DeterministicCover {
    let n = graph.vertex_count() as u32;
    let mut seeds = vec![(0..n).collect::<Vec<u32>>()];
    seeds.extend((0..n).map(|v| vec![v]));
    subset_construction(graph, seeds)
}

/// Subset construction seeded with the full vertex set only: its states are
/// the vertex sets `δ(V, w)` for words `w` of the language.
pub fn determinize_from_full(graph: &LabeledGraph) -> DeterministicCover {
    let n = graph.vertex_count() as u32;
    subset_construction(graph, vec![(0..n).collect()])
}

/// A primitive periodic block found in the presented shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicBlock {
    /// Least rotation of the orbit's period word.
    pub block: Block,
    /// Prime period of `block^∞`, equal to `block.len()`.
    pub period: usize,
    /// A cover state `s` with `δ(s, block^exponent) = s`.
    pub state: usize,
    pub exponent: usize,
}

/// Every periodic orbit of prime period at most `max_period`, one Lyndon
/// representative per orbit, in canonical order.
///
/// `w^∞` lies in the shift iff the partial map `s ↦ δ(s, w)` on cover states
/// has a cycle; any such cycle has length at most the number of states. The
/// search walks the word tree and prunes words that no state can read.
pub fn periodic_blocks(cover: &DeterministicCover, max_period: usize) -> Vec<PeriodicBlock> {
    let mut out = Vec::new();
    if cover.is_empty() || max_period == 0 {
        return out;
    }
    let root: Vec<(u32, u32)> = (0..cover.len() as u32).map(|s| (s, s)).collect();
    let mut word = Vec::new();
    periodic_dfs(cover, &root, &mut word, max_period, &mut out);
    let alphabet = cover.alphabet().clone();
    out.sort_by(|a, b| alphabet.canonical_cmp(&a.block, &b.block));
    out
}

fn periodic_dfs(
    cover: &DeterministicCover,
    pairs: &[(u32, u32)],
    word: &mut Vec<u8>,
    max_period: usize,
    out: &mut Vec<PeriodicBlock>,
) {
    if !word.is_empty() {
        let w = Block::new(word.clone());
        if is_lyndon(&w) {
            if let Some((state, exponent)) = functional_cycle(pairs) {
                out.push(PeriodicBlock {
                    period: w.len(),
                    block: w,
                    state,
                    exponent,
                });
            }
        }
    }
    if word.len() == max_period {
        return;
    }
    for r in 0..cover.alphabet().len() {
        let next: Vec<(u32, u32)> = pairs
            .iter()
            .filter_map(|&(s, c)| cover.step_rank(c as usize, r).map(|t| (s, t as u32)))
            .collect();
        if next.is_empty() {
            continue;
        }
        word.push(cover.alphabet().symbol(r));
        periodic_dfs(cover, &next, word, max_period, out);
        word.pop();
    }
}

/// Finds a cycle in the partial map given by `(start, image)` pairs sorted by
/// start. Returns a state on the cycle and the cycle length.
fn functional_cycle(pairs: &[(u32, u32)]) -> Option<(usize, usize)> {
    let lookup = |s: u32| pairs.binary_search_by_key(&s, |p| p.0).ok();
    let mut color = vec![0u8; pairs.len()];
    for i in 0..pairs.len() {
        if color[i] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut j = i;
        loop {
            color[j] = 1;
            path.push(j);
            match lookup(pairs[j].1) {
                Some(k) if color[k] == 1 => {
                    let pos = path.iter().position(|&p| p == k).expect("on path");
                    return Some((pairs[k].0 as usize, path.len() - pos));
                }
                Some(k) if color[k] == 0 => j = k,
                _ => break,
            }
        }
        for p in path {
            color[p] = 2;
        }
    }
    None
}

/// Shortest word, least in canonical order among the shortest, taking the
/// full-vertex-set state to a singleton. `None` means nothing was found up to
/// `max_len`; it is not a proof that no such word exists.
pub fn synchronizing_word(cover: &DeterministicCover, max_len: usize) -> Option<Block> {
    let start = cover.full_state()?;
    let mut parent: HashMap<usize, (usize, u8)> = HashMap::new();
    let mut depth = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        if cover.state(s).len() == 1 {
            let mut word = Vec::new();
            let mut cur = s;
            while let Some(&(p, a)) = parent.get(&cur) {
                word.push(a);
                cur = p;
            }
            word.reverse();
            return Some(Block::new(word));
        }
        let d = depth[&s];
        if d == max_len {
            continue;
        }
        for r in 0..cover.alphabet().len() {
            if let Some(t) = cover.step_rank(s, r) {
                if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(t) {
                    e.insert(d + 1);
                    parent.insert(t, (s, cover.alphabet().symbol(r)));
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Whether `word` takes the full-vertex-set state to a singleton.
pub fn is_synchronizing(cover: &DeterministicCover, word: &Block) -> bool {
    cover
        .full_state()
        .and_then(|f| cover.run(f, word))
        .is_some_and(|s| cover.state(s).len() == 1)
}

/// Exact window of path labels of length at most `max_len`. Transient
/// vertices are pruned first so every listed block extends bi-infinitely.
pub fn language_window(graph: &LabeledGraph, max_len: usize) -> LanguageWindow {
    let g = graph.normalized();
    let table = successor_table(&g);
    let mut blocks = BTreeSet::new();
    if g.vertex_count() > 0 {
        let full: Vec<u32> = (0..g.vertex_count() as u32).collect();
        let mut word = Vec::new();
        window_dfs(&g, &table, &full, &mut word, max_len, &mut blocks);
    } else {
        blocks.insert(Block::empty());
    }
    LanguageWindow::from_closed_set(g.alphabet().clone(), max_len, blocks, Exactness::Exact)
}

fn window_dfs(
    g: &LabeledGraph,
    table: &[Vec<Vec<u32>>],
    set: &[u32],
    word: &mut Vec<u8>,
    max_len: usize,
    out: &mut BTreeSet<Block>,
) {
    out.insert(Block::new(word.clone()));
    if word.len() == max_len {
        return;
    }
    for r in 0..g.alphabet().len() {
        let next = set_step(table, set, r);
        if next.is_empty() {
            continue;
        }
        word.push(g.alphabet().symbol(r));
        window_dfs(g, table, &next, word, max_len, out);
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{flower, samples};

    fn b(s: &str) -> Block {
        Block::from(s)
    }

    #[test]
    fn determinize_examples() {
        let a = Alphabet::binary();
        let c = determinize(&samples::full_shift(&a));
        assert_eq!(c.len(), 1);

        let c = determinize(&samples::golden_mean());
        for set in [&[0u32, 1][..], &[0], &[1]] {
            assert!(c.index_of(set).is_some(), "missing {set:?}");
        }
        let full = c.full_state().unwrap();
        assert_eq!(c.state(c.step(full, b'1').unwrap()), &[1]);

        let c = determinize(&samples::even_shift());
        let full = c.full_state().unwrap();
        assert_eq!(c.state(c.step(full, b'1').unwrap()), &[0]);
        assert_eq!(c.state(c.step(full, b'0').unwrap()), &[0, 1]);
    }

    #[test]
    fn cover_is_right_resolving_and_consistent() {
        let g = samples::even_shift();
        let c = determinize(&g);
        let table = successor_table(&g);
        for i in 0..c.len() {
            for r in 0..2 {
                let expect = set_step(&table, c.state(i), r);
                match c.step_rank(i, r) {
                    Some(t) => assert_eq!(c.state(t), &expect[..]),
                    None => assert!(expect.is_empty()),
                }
            }
        }
    }

    #[test]
    fn periodic_blocks_examples() {
        let a = Alphabet::binary();
        let got: Vec<String> = periodic_blocks(&determinize(&samples::full_shift(&a)), 2)
            .iter()
            .map(|p| p.block.to_string())
            .collect();
        assert_eq!(got, ["0", "1", "01"]);

        let g = flower(&a, &[b("01")]).unwrap();
        let got = periodic_blocks(&determinize(&g), 6);
        assert_eq!(got.len(), 1);
        assert_eq!((got[0].block.as_str(), got[0].period), ("01", 2));

        // golden mean: 0, 01, 001, 0001, 00101, ...
        let got = periodic_blocks(&determinize(&samples::golden_mean()), 4);
        let names: Vec<String> = got.iter().map(|p| p.block.to_string()).collect();
        assert_eq!(names, ["0", "01", "001", "0001"]);
    }

    #[test]
    fn periodic_reports_reverify() {
        let g = samples::even_shift();
        let c = determinize(&g);
        for p in periodic_blocks(&c, 8) {
            let w = p.block.repeat(p.exponent);
            assert_eq!(c.run(p.state, &w), Some(p.state));
        }
    }

    #[test]
    fn synchronizing_examples() {
        let a = Alphabet::binary();
        let gm = determinize(&samples::golden_mean());
        // "0" already focuses {a,b} to {a}; "1" focuses to {b}.
        assert_eq!(synchronizing_word(&gm, 4), Some(b("0")));
        assert!(is_synchronizing(&gm, &b("1")));
        let ev = determinize(&samples::even_shift());
        assert_eq!(synchronizing_word(&ev, 4), Some(b("1")));
        assert!(!is_synchronizing(&ev, &b("00")));
        let full = determinize(&samples::full_shift(&a));
        assert_eq!(synchronizing_word(&full, 4), Some(Block::empty()));
        // Full shift on a 2-cycle: every word leaves both vertices possible.
        let twin = LabeledGraph::parse("alphabet 01\na b 0\na b 1\nb a 0\nb a 1\n").unwrap();
        assert_eq!(synchronizing_word(&determinize(&twin), 6), None);
    }

    #[test]
    fn language_window_examples() {
        let a = Alphabet::binary();
        let gm = language_window(&samples::golden_mean(), 3);
        let expect: Vec<Block> = (0..=3)
            .flat_map(|n| a.all_blocks(n))
            .filter(|w| !w.contains(&b("11")))
            .collect();
        assert_eq!(gm.len(), expect.len());
        assert!(expect.iter().all(|w| gm.contains(w)));

        let fl = language_window(&flower(&a, &[b("01")]).unwrap(), 4);
        let got: Vec<String> = fl.canonical().iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["", "0", "1", "01", "10", "010", "101", "0101", "1010"]);

        let ev = language_window(&samples::even_shift(), 3);
        let all: Vec<Block> = (0..=3).flat_map(|n| a.all_blocks(n)).collect();
        for w in &all {
            assert_eq!(ev.contains(w), w.as_str() != "101", "{w:?}");
        }
        assert!(ev.is_factor_closed());
    }
}
