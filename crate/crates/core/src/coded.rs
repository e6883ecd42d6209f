//! The marker-and-payload generator recursion for a mixing coded system
//! without odd periodic points, with decoding, concatenation windows and
//! flower approximations.
//!
//! Step 1 sets `a_0 = 01` and `L_1 = {a_0}`. Step `n ≥ 2` enumerates
//! `L_{n-1}` in length-lexicographic order as `w_{s_n}, w_{s_n+1}, …`, adds
//!
//! ```text
//! a_j = 01110 · t[0, 4j-2) · 011110 · w_j · 011110 · t[0, 4j) · 01110
//! ```
//!
//! for each of them, sets `s_{n+1} = s_n + |L_{n-1}|`, and forms
//! `L_n = ⋃_{k=1..n} (L_{n-1} ∪ A_n)^k` where `A_n` holds the new generators.
//! Reading `L_n^k` as powers of `L_n` itself would make every `L_n` infinite;
//! the reading used here keeps each `L_n` finite and nested.
//!
//! Words of `L_n` are stored as generator-index sequences. The generator set
//! is a code (markers pin down every factorization), so distinct sequences
//! are distinct words.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::automata::{flower, LabeledGraph};
use crate::error::{Error, Result};
use crate::words::{thue_morse_prefix, Alphabet, Block, Exactness, LanguageWindow};

/// Interpretation tag written into generator files.
pub const INTERPRETATION: &str = "Ln=concat(prev ∪ new)";

/// Upper bound on the number of candidate index sequences considered when
/// enumerating one `L_n`. Past it the language is left unenumerated and the
/// system is flagged incomplete.
pub const LANGUAGE_CAP: usize = 200_000;

const SHORT_MARKER: &str = "01110";
const LONG_MARKER: &str = "011110";

/// A word of some `L_n`, as the indices of its generator factorization.
pub type Word = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub len: usize,
    /// Factorization of the payload `w_j`; empty for `a_0`.
    pub payload: Word,
    /// Materialized text, present when `len` is within the word budget.
    pub block: Option<Block>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSystem {
    generators: Vec<Generator>,
    /// `s[n-1]` is `s_n`.
    s: Vec<usize>,
    /// `languages[n-1]` is `L_n` in canonical order.
    languages: Vec<Vec<Word>>,
    step: usize,
    requested_steps: usize,
    max_word_len: usize,
}

impl GeneratorSystem {
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::binary()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> Option<&Generator> {
        self.generators.get(j)
    }

    /// Materialized text of `a_j`, if within budget.
    pub fn block(&self, j: usize) -> Option<&Block> {
        self.generators.get(j)?.block.as_ref()
    }

    /// Text of `a_j`, rebuilt from the recursion when it was stubbed.
    pub fn expand(&self, j: usize) -> Result<Block> {
        let g = self.generators.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            limit: self.generators.len(),
        })?;
        if let Some(b) = &g.block {
            return Ok(b.clone());
        }
        let w = self.word_text(&g.payload)?;
        Ok(generator_text(j, &w))
    }

    pub fn word_text(&self, word: &[u32]) -> Result<Block> {
        let mut out = Vec::new();
        for &j in word {
            out.extend_from_slice(self.expand(j as usize)?.as_bytes());
        }
        Ok(Block::new(out))
    }

    pub fn word_len(&self, word: &[u32]) -> usize {
        word.iter().map(|&j| self.generators[j as usize].len).sum()
    }

    /// `s_1, s_2, …, s_{step+1}`.
    pub fn s_table(&self) -> &[usize] {
        &self.s
    }

    /// `s_n` for `1 ≤ n ≤ step + 1`.
    pub fn s(&self, n: usize) -> Option<usize> {
        n.checked_sub(1).and_then(|i| self.s.get(i).copied())
    }

    /// `L_n`, if it was enumerated.
    pub fn language(&self, n: usize) -> Option<&[Word]> {
        n.checked_sub(1)
            .and_then(|i| self.languages.get(i))
            .map(Vec::as_slice)
    }

    /// Number of enumerated languages `L_1, …`.
    pub fn language_steps(&self) -> usize {
        self.languages.len()
    }

    /// Last step whose generators were all added.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    /// Whether every requested step ran and every `L_n` was enumerated.
    pub fn is_complete(&self) -> bool {
        self.step == self.requested_steps && self.languages.len() == self.step
    }

    /// Generators file: a commented header, then one line per generator, a
    /// block or `*LEN` for a stub.
    pub fn to_text(&self) -> String {
        let s: Vec<String> = self.s.iter().map(usize::to_string).collect();
        let mut out = format!(
            "# steps={}\n# interpretation={}\n# s={}\n# max_word_len={}\n# complete={}\n",
            self.step,
            INTERPRETATION,
            s.join(","),
            self.max_word_len,
            self.is_complete()
        );
        for g in &self.generators {
            match &g.block {
                Some(b) => out.push_str(b.as_str()),
                None => out.push_str(&format!("*{}", g.len)),
            }
            out.push('\n');
        }
        out
    }
}

fn generator_text(j: usize, payload: &Block) -> Block {
    if j == 0 {
        return Block::from("01");
    }
    let mut out = Vec::with_capacity(8 * j + 20 + payload.len());
    out.extend_from_slice(SHORT_MARKER.as_bytes());
    out.extend_from_slice(thue_morse_prefix(4 * j - 2).as_bytes());
    out.extend_from_slice(LONG_MARKER.as_bytes());
    out.extend_from_slice(payload.as_bytes());
    out.extend_from_slice(LONG_MARKER.as_bytes());
    out.extend_from_slice(thue_morse_prefix(4 * j).as_bytes());
    out.extend_from_slice(SHORT_MARKER.as_bytes());
    Block::new(out)
}

/// Runs the recursion for `steps` steps. Generators longer than
/// `max_word_len` are kept as length-only stubs. If some `L_n` is too large
/// to enumerate the recursion stops there and the result reports itself
/// incomplete.
pub fn construct_generators(steps: usize, max_word_len: usize) -> Result<GeneratorSystem> {
    if steps == 0 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let a0 = Block::from("01");
    let mut sys = GeneratorSystem {
        generators: vec![Generator {
            len: 2,
            payload: Vec::new(),
            block: (max_word_len >= 2).then_some(a0),
        }],
        s: vec![0, 1],
        languages: vec![vec![vec![0]]],
        step: 1,
        requested_steps: steps,
        max_word_len,
    };
    for n in 2..=steps {
        let Some(prev) = sys.languages.get(n - 2).cloned() else {
            break;
        };
        let sn = sys.s[n - 1];
        for (i, w) in prev.iter().enumerate() {
            let j = sn + i;
            let len = 8 * j + 20 + sys.word_len(w);
            let block = if len <= max_word_len {
                Some(generator_text(j, &sys.word_text(w)?))
            } else {
                None
            };
            sys.generators.push(Generator {
                len,
                payload: w.clone(),
                block,
            });
        }
        sys.s.push(sn + prev.len());
        sys.step = n;

        let mut base: Vec<Word> = prev.clone();
        base.extend((sn..sn + prev.len()).map(|j| vec![j as u32]));
        if !within_cap(base.len(), n) {
            break;
        }
        let lang = concatenation_closure(&base, n);
        let lang = sort_canonical(&sys, lang)?;
        sys.languages.push(lang);
    }
    Ok(sys)
}

fn within_cap(base: usize, n: usize) -> bool {
    let mut total = 0usize;
    let mut power = 1usize;
    for _ in 0..n {
        power = match power.checked_mul(base) {
            Some(p) => p,
            None => return false,
        };
        total = total.saturating_add(power);
    }
    total <= LANGUAGE_CAP
}

/// All concatenations of 1 to `n` words of `base`, deduplicated.
fn concatenation_closure(base: &[Word], n: usize) -> Vec<Word> {
    let mut all: HashSet<Word> = base.iter().cloned().collect();
    let mut frontier: Vec<Word> = all.iter().cloned().collect();
    for _ in 2..=n {
        let mut next = HashSet::new();
        for x in &frontier {
            for y in base {
                let mut z = x.clone();
                z.extend_from_slice(y);
                next.insert(z);
            }
        }
        frontier = next.into_iter().collect();
        all.extend(frontier.iter().cloned());
    }
    all.into_iter().collect()
}

fn sort_canonical(sys: &GeneratorSystem, words: Vec<Word>) -> Result<Vec<Word>> {
    let mut keyed = words
        .into_iter()
        .map(|w| Ok((sys.word_text(&w)?, w)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, w)| w).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SegmentKind {
    /// The marker-free generator `a_0`.
    Plain,
    Marker,
    ThueMorse,
    Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub offset: usize,
    pub block: Block,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkerParse {
    pub j: usize,
    pub segments: Vec<Segment>,
}

impl MarkerParse {
    /// Concatenation of the segments.
    pub fn reassemble(&self) -> Block {
        Block::new(
            self.segments
                .iter()
                .flat_map(|s| s.block.as_bytes().iter().copied())
                .collect(),
        )
    }

    pub fn payload(&self) -> Option<&Block> {
        self.segments
            .iter()
            .find(|s| s.kind == SegmentKind::Payload)
            .map(|s| &s.block)
    }
}

/// Recovers the index `j` with `u = a_j`.
///
/// Thue–Morse blocks never contain `111`, so every run of three or more 1s
/// is the core of a marker. The outer frame is short marker, t-block, long
/// marker, payload, long marker, t-block, short marker; the trailing t-block
/// is the longest gap between consecutive markers and has length `4j`.
pub fn decode_generator(u: &Block, sys: &GeneratorSystem) -> Result<MarkerParse> {
    let fail = |why: &str| Error::NotAGenerator(format!("{}: {why}", u.as_str()));
    if u.as_str() == "01" {
        return Ok(MarkerParse {
            j: 0,
            segments: vec![Segment {
                kind: SegmentKind::Plain,
                offset: 0,
                block: u.clone(),
            }],
        });
    }
    let markers = find_markers(u).ok_or_else(|| fail("malformed run of 1s"))?;
    if markers.len() < 4 {
        return Err(fail("fewer than four markers"));
    }
    let m = markers.len();
    let (first, second, penult, last) = (markers[0], markers[1], markers[m - 2], markers[m - 1]);
    if first != (0, 5) || last != (u.len() - 5, u.len()) {
        return Err(fail("not framed by short markers"));
    }
    if second.1 - second.0 != 6 || penult.1 - penult.0 != 6 || second.1 > penult.0 {
        return Err(fail("inner frame is not a pair of long markers"));
    }
    let longest = markers.windows(2).map(|w| w[1].0 - w[0].1).max().unwrap_or(0);
    let (head, tail) = (u.slice(5, second.0), u.slice(penult.1, last.0));
    if tail.len() != longest || longest == 0 || longest % 4 != 0 {
        return Err(fail("trailing t-block is not the longest gap of length 4j"));
    }
    let j = longest / 4;
    if head.len() != 4 * j - 2 || head != thue_morse_prefix(head.len()) || tail != thue_morse_prefix(tail.len()) {
        return Err(fail("t-blocks are not the expected Thue–Morse prefixes"));
    }
    match sys.generator(j) {
        Some(g) if g.len == u.len() && sys.expand(j)? == *u => {}
        Some(_) => return Err(fail("payload differs from the recursion")),
        None => return Err(fail("index beyond the constructed generators")),
    }
    let seg = |kind, a: usize, b: usize| Segment {
        kind,
        offset: a,
        block: u.slice(a, b),
    };
    Ok(MarkerParse {
        j,
        segments: vec![
            seg(SegmentKind::Marker, 0, 5),
            seg(SegmentKind::ThueMorse, 5, second.0),
            seg(SegmentKind::Marker, second.0, second.1),
            seg(SegmentKind::Payload, second.1, penult.0),
            seg(SegmentKind::Marker, penult.0, penult.1),
            seg(SegmentKind::ThueMorse, penult.1, last.0),
            seg(SegmentKind::Marker, last.0, last.1),
        ],
    })
}

/// Spans `[start, end)` of every marker, or `None` if some run of at least
/// three 1s is not a marker.
fn find_markers(u: &Block) -> Option<Vec<(usize, usize)>> {
    let b = u.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'1' {
            i += 1;
            continue;
        }
        let start = i;
        while i < b.len() && b[i] == b'1' {
            i += 1;
        }
        let run = i - start;
        if run < 3 {
            continue;
        }
        if !(3..=4).contains(&run) || start == 0 || i == b.len() || b[start - 1] != b'0' || b[i] != b'0' {
            return None;
        }
        out.push((start - 1, i + 1));
    }
    if out.windows(2).any(|w| w[1].0 < w[0].1) {
        return None;
    }
    Some(out)
}

/// Under-approximate window: every factor of length at most `factor_len` of
/// every concatenation of the selected generators of total length at most
/// `total_len`.
///
/// A factor is grown from a start offset inside one generator through whole
/// generators; it is realizable exactly when the generators it touches fit
/// in `total_len`.
pub fn concatenation_window(
    sys: &GeneratorSystem,
    gen_indices: &[usize],
    total_len: usize,
    factor_len: usize,
) -> Result<LanguageWindow> {
    if factor_len > total_len {
        return Err(Error::Precondition("factor_len exceeds total_len".into()));
    }
    let mut gens = Vec::new();
    for &j in gen_indices {
        let len = sys
            .generator(j)
            .ok_or(Error::IndexOutOfRange {
                index: j,
                limit: sys.len(),
            })?
            .len;
        if len <= total_len {
            gens.push(sys.expand(j)?);
        }
    }
    Ok(blocks_window(&gens, total_len, factor_len))
}

/// [`concatenation_window`] over explicit generator blocks.
pub fn blocks_window(gens: &[Block], total_len: usize, factor_len: usize) -> LanguageWindow {
    let mut out = BTreeSet::from([Block::empty()]);
    for g in gens.iter().filter(|g| g.len() <= total_len) {
        for o in 0..g.len() {
            let mut text = g.as_bytes()[o..].to_vec();
            grow(gens, &mut text, g.len(), total_len, factor_len, 0, &mut out);
        }
    }
    LanguageWindow::from_closed_set(Alphabet::binary(), factor_len, out, Exactness::UnderApprox)
}

fn grow(
    gens: &[Block],
    text: &mut Vec<u8>,
    used: usize,
    total_len: usize,
    factor_len: usize,
    emitted: usize,
    out: &mut BTreeSet<Block>,
) {
    let top = text.len().min(factor_len);
    for l in emitted + 1..=top {
        out.insert(Block::new(text[..l].to_vec()));
    }
    if text.len() >= factor_len {
        return;
    }
    for g in gens {
        if used + g.len() > total_len {
            continue;
        }
        let keep = text.len();
        text.extend_from_slice(g.as_bytes());
        grow(gens, text, used + g.len(), total_len, factor_len, top, out);
        text.truncate(keep);
    }
}

/// Flower presentation of `Y_n`, the sofic shift generated by `L_n`. Since
/// every word of `L_n` factors over `a_0, …, a_{s_{n+1}-1}` and each of those
/// lies in `L_n`, the two sets generate the same shift.
pub fn approx_yn(sys: &GeneratorSystem, n: usize) -> Result<LabeledGraph> {
    if n == 0 || n > sys.step() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: sys.step() + 1,
        });
    }
    let upto = sys.s(n + 1).expect("s-table covers step + 1");
    let gens = (0..upto).map(|j| sys.expand(j)).collect::<Result<Vec<_>>>()?;
    flower(&sys.alphabet(), &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddPeriodWitness {
    /// `u·u·w` for a non-constant concatenation `u` and an odd generator `w`.
    pub block: Block,
    pub u: Block,
    pub w: Block,
    /// Prime period of `block^∞`; odd and greater than one.
    pub prime_period: usize,
}

/// A periodic point of odd prime period built from the generators, if some
/// generator has odd length.
pub fn odd_period_witness(generators: &[Block]) -> Option<OddPeriodWitness> {
    let w = generators.iter().find(|g| g.len() % 2 == 1)?;
    let u = generators.iter().find(|g| !g.is_constant()).cloned().or_else(|| {
        generators
            .iter()
            .flat_map(|x| generators.iter().map(move |y| x.concat(y)))
            .find(|c| !c.is_constant())
    })?;
    let block = u.concat(&u).concat(w);
    let prime_period = block.primitive_root_len();
    debug_assert!(prime_period % 2 == 1 && prime_period > 1);
    Some(OddPeriodWitness {
        prime_period,
        u,
        w: w.clone(),
        block,
    })
}
