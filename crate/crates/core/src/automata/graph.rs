use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::words::{gcd, Alphabet, Block};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Symbol byte, always a member of the graph's alphabet.
    pub label: u8,
}

/// Finite directed multigraph with symbol-labeled edges.
///
/// Edges are kept sorted by `(src, dst, label rank)` so that text output is
/// stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, names: Vec<String>, mut edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        for e in &edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::IndexOutOfRange {
                    index: e.src.max(e.dst),
                    limit: n,
                });
            }
            if !alphabet.contains(e.label) {
                return Err(Error::InvalidSymbol {
                    symbol: e.label as char,
                    alphabet: alphabet.as_str().to_string(),
                });
            }
        }
        edges.sort_by_key(|e| (e.src, e.dst, alphabet.rank(e.label)));
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out[e.src].push(i);
            inc[e.dst].push(i);
        }
        Ok(Self {
            alphabet,
            names,
            edges,
            out,
            inc,
        })
    }

    /// Convenience constructor from `(src, dst, label)` name triples; vertices
    /// are numbered in order of first appearance.
    pub fn from_triples(alphabet: Alphabet, triples: &[(&str, &str, char)]) -> Result<Self> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut id = |name: &str, names: &mut Vec<String>| {
            *ids.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let mut edges = Vec::new();
        for &(s, d, l) in triples {
            let src = id(s, &mut names);
            let dst = id(d, &mut names);
            edges.push(Edge {
                src,
                dst,
                label: l as u8,
            });
        }
        Self::new(alphabet, names, edges)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    /// Indices of edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Indices of edges entering `v`.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Removes, until none remain, vertices with no incoming or no outgoing
    /// edge. What is left is exactly the set of vertices on bi-infinite paths.
    pub fn normalized(&self) -> LabeledGraph {
        let n = self.vertex_count();
        let mut alive = vec![true; n];
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for e in &self.edges {
            outdeg[e.src] += 1;
            indeg[e.dst] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &i in &self.out[v] {
                let d = self.edges[i].dst;
                if alive[d] {
                    indeg[d] -= 1;
                    if indeg[d] == 0 {
                        queue.push_back(d);
                    }
                }
            }
            for &i in &self.inc[v] {
                let s = self.edges[i].src;
                if alive[s] {
                    outdeg[s] -= 1;
                    if outdeg[s] == 0 {
                        queue.push_back(s);
                    }
                }
            }
        }
        self.induced(&alive)
    }

    /// Subgraph on the vertices flagged `keep`, order preserved.
    pub fn induced(&self, keep: &[bool]) -> LabeledGraph {
        let mut remap = vec![usize::MAX; self.vertex_count()];
        let mut names = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = names.len();
                names.push(self.names[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.src] && keep[e.dst])
            .map(|e| Edge {
                src: remap[e.src],
                dst: remap[e.dst],
                label: e.label,
            })
            .collect();
        LabeledGraph::new(self.alphabet.clone(), names, edges).expect("induced subgraph is valid")
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.vertex_count()).all(|v| !self.out[v].is_empty() && !self.inc[v].is_empty())
    }

    /// Vertices reachable from `start` following edges forward (or backward).
    pub fn reachable(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            let adj = if forward { &self.out[v] } else { &self.inc[v] };
            for &i in adj {
                let e = self.edges[i];
                let w = if forward { e.dst } else { e.src };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Strong connectivity. The graph with no vertices is not irreducible.
    pub fn is_irreducible(&self) -> bool {
        if self.vertex_count() == 0 || self.edges.is_empty() {
            return false;
        }
        self.reachable(0, true).iter().all(|&b| b) && self.reachable(0, false).iter().all(|&b| b)
    }

    /// BFS levels from vertex 0 along outgoing edges.
    pub(crate) fn bfs_levels(&self) -> Vec<Option<usize>> {
        let mut level = vec![None; self.vertex_count()];
        if self.vertex_count() == 0 {
            return level;
        }
        level[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].expect("queued vertices have a level");
            for &i in &self.out[v] {
                let d = self.edges[i].dst;
                if level[d].is_none() {
                    level[d] = Some(lv + 1);
                    queue.push_back(d);
                }
            }
        }
        level
    }

    /// The gcd of all cycle lengths, read off BFS levels: the gcd of
    /// `level(u) + 1 - level(v)` over all edges `u -> v`.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let level = self.bfs_levels();
        let p = self.edges.iter().fold(0usize, |g, e| {
            let lu = level[e.src].expect("irreducible") as isize;
            let lv = level[e.dst].expect("irreducible") as isize;
            gcd(g, (lu + 1 - lv).unsigned_abs())
        });
        Ok(p)
    }

    /// Label of a path given as edge indices.
    pub fn path_label(&self, path: &[usize]) -> Block {
        Block::new(path.iter().map(|&i| self.edges[i].label).collect())
    }

    /// True when the edge indices form a walk that returns to its start.
    pub fn is_closed_walk(&self, path: &[usize]) -> bool {
        if path.is_empty() {
            return false;
        }
        let connected = path
            .windows(2)
            .all(|w| self.edges[w[0]].dst == self.edges[w[1]].src);
        connected && self.edges[path[path.len() - 1]].dst == self.edges[path[0]].src
    }

    /// Line-oriented text form: `alphabet <symbols>` then `src dst label`.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {}\n", self.alphabet.as_str());
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {}",
                self.names[e.src], self.names[e.dst], e.label as char
            );
        }
        out
    }

    /// Parses the text form. `#` starts a comment; vertex names are numbered
    /// in order of first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut triples: Vec<(String, String, u8)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            if toks[0] == "alphabet" {
                if alphabet.is_some() {
                    return Err(err("duplicate alphabet header".into()));
                }
                alphabet = Some(Alphabet::new(&toks[1..].concat()).map_err(|e| err(e.to_string()))?);
                continue;
            }
            if alphabet.is_none() {
                return Err(err("edge before `alphabet` header".into()));
            }
            if toks.len() != 3 || toks[2].len() != 1 {
                return Err(err(format!("expected `src dst label`, got {line:?}")));
            }
            triples.push((toks[0].to_string(), toks[1].to_string(), toks[2].as_bytes()[0]));
        }
        let alphabet = alphabet.ok_or(Error::Parse {
            line: 0,
            message: "missing `alphabet` header".into(),
        })?;
        let borrowed: Vec<(&str, &str, char)> = triples
            .iter()
            .map(|(s, d, l)| (s.as_str(), d.as_str(), *l as char))
            .collect();
        Self::from_triples(alphabet, &borrowed)
    }

    /// SHA-256 of the text form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Petal presentation: one center vertex and, for each generator `w`, a simple
/// cycle of `|w|` edges through the center labeled by `w`.
pub fn flower(alphabet: &Alphabet, generators: &[Block]) -> Result<LabeledGraph> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut names = vec!["c".to_string()];
    let mut edges = Vec::new();
    for (j, w) in generators.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::EmptyWord(j));
        }
        alphabet.check(w)?;
        let mut prev = 0;
        for (i, &sym) in w.as_bytes().iter().enumerate() {
            let next = if i + 1 == w.len() {
                0
            } else {
                names.push(format!("p{j}_{}", i + 1));
                names.len() - 1
            };
            edges.push(Edge {
                src: prev,
                dst: next,
                label: sym,
            });
            prev = next;
        }
    }
    LabeledGraph::new(alphabet.clone(), names, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::samples;

    #[test]
    fn flower_shapes() {
        let a = Alphabet::binary();
        let g = flower(&a, &[Block::from("01")]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 2));
        assert_eq!(g.period().unwrap(), 2);

        let g = flower(&a, &[Block::from("1"), Block::from("10")]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 3));
        assert_eq!(g.period().unwrap(), 1);

        assert_eq!(flower(&a, &[]), Err(Error::EmptyGenerators));
        assert_eq!(flower(&a, &[Block::from("0"), Block::empty()]), Err(Error::EmptyWord(1)));
    }

    #[test]
    fn period_examples() {
        let a = Alphabet::binary();
        assert_eq!(samples::cycle(&a, &Block::from("01")).period().unwrap(), 2);
        let petals = flower(&a, &[Block::from("01"), Block::from("011")]).unwrap();
        assert_eq!(petals.period().unwrap(), 1);
        assert_eq!(samples::cycle(&a, &Block::from("0001")).period().unwrap(), 4);
        assert_eq!(samples::disjoint_loops().period(), Err(Error::NotIrreducible));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(samples::golden_mean().is_irreducible());
        assert!(!samples::disjoint_loops().is_irreducible());
        let a = Alphabet::binary();
        assert!(flower(&a, &[Block::from("0"), Block::from("0110")]).unwrap().is_irreducible());
    }

    #[test]
    fn normalization_prunes_transients() {
        // x feeds into the loop at a, y hangs off it; both must go.
        let g = LabeledGraph::parse("alphabet 01\nx a 1\na a 0\na y 1\n").unwrap();
        let n = g.normalized();
        assert_eq!(n.vertex_count(), 1);
        assert_eq!(n.to_text(), "alphabet 01\na a 0\n");
        assert!(n.is_normalized());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = samples::even_shift();
        let back = LabeledGraph::parse(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.digest(), g.digest());
        assert!(LabeledGraph::parse("a b 0\n").is_err());
        assert!(LabeledGraph::parse("alphabet 01\na b 2\n").is_err());
        assert!(LabeledGraph::parse("alphabet 01\na b\n").is_err());
        let commented = LabeledGraph::parse("# golden mean\nalphabet 0 1\na a 0 # loop\na b 1\nb a 0\n").unwrap();
        assert_eq!(commented, samples::golden_mean());
    }

    #[test]
    fn output_order_is_stable() {
        let g1 = LabeledGraph::parse("alphabet 01\na b 1\na a 0\nb a 0\n").unwrap();
        let g2 = LabeledGraph::parse("alphabet 01\na a 0\nb a 0\na b 1\n").unwrap();
        assert_eq!(g1.to_text(), g2.to_text());
    }
}
