use serde::Serialize;

use crate::automata::{determinize_from_full, language_window, DeterministicCover, LabeledGraph};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Block, Exactness, LanguageWindow};

/// Membership oracle over a shift's language.
pub trait Language {
    fn alphabet(&self) -> &Alphabet;
    /// `None` when the source cannot decide a block of this length.
    fn contains(&self, block: &Block) -> Option<bool>;
    fn blocks_of_len(&self, n: usize) -> Vec<Block>;
    fn exactness(&self) -> Exactness;
}

impl Language for LanguageWindow {
    fn alphabet(&self) -> &Alphabet {
        LanguageWindow::alphabet(self)
    }

    fn contains(&self, block: &Block) -> Option<bool> {
        (block.len() <= self.max_len()).then(|| LanguageWindow::contains(self, block))
    }

    fn blocks_of_len(&self, n: usize) -> Vec<Block> {
        LanguageWindow::blocks_of_len(self, n)
    }

    fn exactness(&self) -> Exactness {
        LanguageWindow::exactness(self)
    }
}

/// Exact language of a graph presentation, any length.
pub struct GraphLanguage {
    graph: LabeledGraph,
    cover: DeterministicCover,
}

impl GraphLanguage {
    pub fn new(graph: &LabeledGraph) -> Self {
        let graph = graph.normalized();
        let cover = determinize_from_full(&graph);
        Self { graph, cover }
    }
}

impl Language for GraphLanguage {
    fn alphabet(&self) -> &Alphabet {
        self.graph.alphabet()
    }

    fn contains(&self, block: &Block) -> Option<bool> {
        Some(block.is_empty() || self.cover.accepts(block))
    }

    fn blocks_of_len(&self, n: usize) -> Vec<Block> {
        language_window(&self.graph, n).blocks_of_len(n)
    }

    fn exactness(&self) -> Exactness {
        Exactness::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueEntry {
    pub x: Block,
    pub y: Block,
    pub w: Block,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyPWitness {
    pub p: usize,
    /// Common glue length.
    pub n: usize,
    pub table: Vec<GlueEntry>,
    pub n_max: usize,
    /// Interleavings `x_1 w x_2 w … x_N` checked, over all `N ≤ n_max`.
    pub interleavings_checked: u64,
    pub exactness: Exactness,
}

/// Searches for a glue length `n ≤ glue_budget` and a table `w(x, y)` of
/// words of length `n` with `x·w(x,y)·y` in the language for all length-`p`
/// blocks `x, y`, then checks every interleaving
/// `x_1 w(x_1,x_2) x_2 … x_N` for `N ≤ n_max`. The check is exhaustive over
/// `|B_p|^N` sequences, so it is for small instances only.
pub fn property_p_witness(lang: &dyn Language, p: usize, n_max: usize, glue_budget: usize) -> Result<PropertyPWitness> {
    let blocks = lang.blocks_of_len(p);
    if blocks.is_empty() {
        return Err(Error::Precondition(format!("no blocks of length {p}")));
    }
    let decide = |b: &Block| {
        lang.contains(b)
            .ok_or_else(|| Error::Precondition(format!("source cannot decide blocks of length {}", b.len())))
    };
    'lengths: for n in 0..=glue_budget {
        let fillers = lang.alphabet().all_blocks(n);
        let mut table = Vec::with_capacity(blocks.len() * blocks.len());
        for x in &blocks {
            for y in &blocks {
                let mut found = None;
                for w in &fillers {
                    if decide(&x.concat(w).concat(y))? {
                        found = Some(w.clone());
                        break;
                    }
                }
                match found {
                    Some(w) => table.push(w),
                    None => continue 'lengths,
                }
            }
        }
        let b = blocks.len();
        let glue = |i: usize, j: usize| &table[i * b + j];
        let mut checked = 0u64;
        for count in 1..=n_max {
            let mut idx = vec![0usize; count];
            loop {
                let mut word = blocks[idx[0]].clone();
                for t in 1..count {
                    word = word.concat(glue(idx[t - 1], idx[t])).concat(&blocks[idx[t]]);
                }
                if !decide(&word)? {
                    continue 'lengths;
                }
                checked += 1;
                if !advance(&mut idx, b) {
                    break;
                }
            }
        }
        let entries = blocks
            .iter()
            .enumerate()
            .flat_map(|(i, x)| {
                blocks.iter().enumerate().map(move |(j, y)| (i, x, j, y))
            })
            .map(|(i, x, j, y)| GlueEntry {
                x: x.clone(),
                y: y.clone(),
                w: glue(i, j).clone(),
            })
            .collect();
        return Ok(PropertyPWitness {
            p,
            n,
            table: entries,
            n_max,
            interleavings_checked: checked,
            exactness: lang.exactness(),
        });
    }
    Err(Error::NotFoundInBudget(glue_budget))
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{flower, samples};

    #[test]
    fn golden_mean_glues_with_zero() {
        let lang = GraphLanguage::new(&samples::golden_mean());
        let w = property_p_witness(&lang, 2, 4, 4).unwrap();
        assert_eq!(w.n, 1);
        assert!(w.table.iter().all(|e| e.w.as_str() == "0"));
        assert_eq!(w.table.len(), 9);
        assert_eq!(w.interleavings_checked, 3 + 9 + 27 + 81);
    }

    #[test]
    fn window_source_agrees() {
        let g = samples::golden_mean();
        let window = language_window(&g, 2 * 4 + 3);
        let w = property_p_witness(&window, 2, 4, 1).unwrap();
        assert_eq!(w.n, 1);
        let short = language_window(&g, 5);
        assert!(matches!(property_p_witness(&short, 2, 4, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn full_shift_needs_no_glue() {
        let lang = GraphLanguage::new(&samples::full_shift(&Alphabet::binary()));
        assert_eq!(property_p_witness(&lang, 1, 3, 2).unwrap().n, 0);
    }

    #[test]
    fn periodic_orbit_has_no_common_length() {
        let g = flower(&Alphabet::binary(), &[Block::from("01")]).unwrap();
        let lang = GraphLanguage::new(&g);
        assert_eq!(property_p_witness(&lang, 2, 3, 6), Err(Error::NotFoundInBudget(6)));
    }
}
