//! Finite words over a small ordered alphabet.
//!
//! A [`Block`] stores raw symbol bytes; the [`Alphabet`] supplies the symbol
//! order used for canonical (length-lexicographic) enumeration. Offsets are
//! 0-based throughout.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordered set of distinct printable ASCII symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
    rank: Vec<Option<u8>>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes = symbols.as_bytes();
        if bytes.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least two symbols, got {symbols:?}"
            )));
        }
        let mut rank = vec![None; 256];
        for (i, &b) in bytes.iter().enumerate() {
            if !b.is_ascii_graphic() || b == b'#' || b == b'*' {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {:?} is not usable",
                    b as char
                )));
            }
            if rank[b as usize].is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate symbol {:?}",
                    b as char
                )));
            }
            rank[b as usize] = Some(i as u8);
        }
        Ok(Self {
            symbols: bytes.to_vec(),
            rank,
        })
    }

    /// The alphabet `{0, 1}` used by every binary construction.
    pub fn binary() -> Self {
        Self::new("01").expect("binary alphabet")
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.symbols).expect("ascii alphabet")
    }

    pub fn rank(&self, symbol: u8) -> Option<usize> {
        self.rank[symbol as usize].map(usize::from)
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.rank(symbol).is_some()
    }

    pub fn symbol(&self, rank: usize) -> u8 {
        self.symbols[rank]
    }

    /// Parses a symbol string, rejecting symbols outside the alphabet.
    pub fn parse(&self, text: &str) -> Result<Block> {
        let block = Block::from(text);
        self.check(&block)?;
        Ok(block)
    }

    pub fn check(&self, block: &Block) -> Result<()> {
        match block.as_bytes().iter().find(|&&b| !self.contains(b)) {
            Some(&b) => Err(Error::InvalidSymbol {
                symbol: b as char,
                alphabet: self.as_str().to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Length-lexicographic order using this alphabet's symbol order.
    pub fn canonical_cmp(&self, a: &Block, b: &Block) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            let ra = a.as_bytes().iter().map(|&s| self.rank(s));
            let rb = b.as_bytes().iter().map(|&s| self.rank(s));
            ra.cmp(rb)
        })
    }

    /// All blocks of length exactly `n`, in canonical order.
    pub fn all_blocks(&self, n: usize) -> Vec<Block> {
        let mut out = vec![Block::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|b| self.symbols.iter().map(move |&s| b.push(s)))
                .collect();
        }
        out
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.as_str())
    }
}

/// A finite word. The empty block is a valid value.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Block(Vec<u8>);

impl Block {
    pub fn new(symbols: Vec<u8>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn slice(&self, start: usize, end: usize) -> Block {
        Block(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Block) -> Block {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Block(v)
    }

    pub fn push(&self, symbol: u8) -> Block {
        let mut v = self.0.clone();
        v.push(symbol);
        Block(v)
    }

    pub fn repeat(&self, n: usize) -> Block {
        Block(self.0.repeat(n))
    }

    pub fn reversed(&self) -> Block {
        Block(self.0.iter().rev().copied().collect())
    }

    pub fn starts_with(&self, prefix: &Block) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Block) -> bool {
        self.0.ends_with(&suffix.0)
    }

    pub fn contains(&self, pattern: &Block) -> bool {
        pattern.is_empty() || self.0.windows(pattern.len()).any(|w| w == pattern.as_bytes())
    }

    /// True when all symbols are equal (the empty block counts as constant).
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Length of the shortest `r` with `self = r^k`.
    pub fn primitive_root_len(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]))
            .unwrap_or(0)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_empty() && self.primitive_root_len() == self.len()
    }

    /// Cyclic rotation starting at offset `k`.
    pub fn rotation(&self, k: usize) -> Block {
        let k = k % self.len().max(1);
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Block(v)
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).unwrap_or("<non-ascii>")
    }
}

/// Shortlex on raw bytes; agrees with canonical order for byte-sorted alphabets.
impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&str> for Block {
    fn from(s: &str) -> Self {
        Block(s.as_bytes().to_vec())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("⊥")
        } else {
            write!(f, "{:?}", self.as_str())
        }
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exactness {
    Exact,
    UnderApprox,
}

impl Exactness {
    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }

    /// Exact only if both inputs are.
    pub fn meet(self, other: Exactness) -> Exactness {
        if self.is_exact() && other.is_exact() {
            Exactness::Exact
        } else {
            Exactness::UnderApprox
        }
    }
}

/// All blocks of length at most `max_len` of some language, factor-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageWindow {
    alphabet: Alphabet,
    max_len: usize,
    blocks: BTreeSet<Block>,
    exactness: Exactness,
}

impl LanguageWindow {
    /// Builds a window from arbitrary blocks, closing them under factors.
    pub fn from_blocks<I>(alphabet: Alphabet, max_len: usize, blocks: I, exactness: Exactness) -> Self
    where
        I: IntoIterator<Item = Block>,
    {
        let mut set = BTreeSet::new();
        set.insert(Block::empty());
        let mut seen: HashSet<Block> = HashSet::new();
        for b in blocks {
            if !seen.insert(b.clone()) {
                continue;
            }
            add_factors(&b, max_len, &mut set);
        }
        Self {
            alphabet,
            max_len,
            blocks: set,
            exactness,
        }
    }

    pub(crate) fn from_closed_set(
        alphabet: Alphabet,
        max_len: usize,
        blocks: BTreeSet<Block>,
        exactness: Exactness,
    ) -> Self {
        Self {
            alphabet,
            max_len,
            blocks,
            exactness,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn contains(&self, block: &Block) -> bool {
        self.blocks.contains(block)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter()
    }

    pub fn blocks_of_len(&self, n: usize) -> Vec<Block> {
        let mut v: Vec<Block> = self.blocks.iter().filter(|b| b.len() == n).cloned().collect();
        v.sort_by(|a, b| self.alphabet.canonical_cmp(a, b));
        v
    }

    /// Members in canonical order.
    pub fn canonical(&self) -> Vec<&Block> {
        let mut v: Vec<&Block> = self.blocks.iter().collect();
        v.sort_by(|a, b| self.alphabet.canonical_cmp(a, b));
        v
    }

    /// Restriction to blocks of length at most `max_len`.
    pub fn truncate(&self, max_len: usize) -> LanguageWindow {
        let max_len = max_len.min(self.max_len);
        let blocks = self.blocks.iter().filter(|b| b.len() <= max_len).cloned().collect();
        Self::from_closed_set(self.alphabet.clone(), max_len, blocks, self.exactness)
    }

    pub fn is_factor_closed(&self) -> bool {
        self.blocks.iter().all(|b| {
            b.is_empty()
                || (self.blocks.contains(&b.slice(1, b.len()))
                    && self.blocks.contains(&b.slice(0, b.len() - 1)))
        })
    }

    /// Header `alphabet=..`, `exact=..`, then one block per line in canonical
    /// order (the empty block is the blank first line).
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "alphabet={}\nexact={}\n",
            self.alphabet.as_str(),
            self.exactness.is_exact()
        );
        for b in self.canonical() {
            out.push_str(b.as_str());
            out.push('\n');
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). The maximal length is taken to
    /// be the longest member.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = |line: Option<&str>, key: &str, n: usize| -> Result<String> {
            line.and_then(|l| l.strip_prefix(key))
                .map(str::to_string)
                .ok_or_else(|| Error::Parse {
                    line: n,
                    message: format!("expected `{key}` header"),
                })
        };
        let alphabet = Alphabet::new(&header(lines.next(), "alphabet=", 1)?)?;
        let exactness = match header(lines.next(), "exact=", 2)?.as_str() {
            "true" => Exactness::Exact,
            "false" => Exactness::UnderApprox,
            other => {
                return Err(Error::Parse {
                    line: 2,
                    message: format!("bad exactness flag {other:?}"),
                })
            }
        };
        let mut blocks = BTreeSet::new();
        for (i, line) in lines.enumerate() {
            let b = alphabet.parse(line).map_err(|e| Error::Parse {
                line: i + 3,
                message: e.to_string(),
            })?;
            blocks.insert(b);
        }
        blocks.insert(Block::empty());
        let max_len = blocks.iter().map(Block::len).max().unwrap_or(0);
        let w = Self::from_closed_set(alphabet, max_len, blocks, exactness);
        if !w.is_factor_closed() {
            return Err(Error::Parse {
                line: 0,
                message: "window is not factor-closed".into(),
            });
        }
        Ok(w)
    }
}

fn add_factors(b: &Block, max_len: usize, set: &mut BTreeSet<Block>) {
    let n = b.len();
    for i in 0..n {
        for j in (i + 1)..=n.min(i + max_len) {
            let f = b.slice(i, j);
            set.insert(f);
        }
    }
}

/// `t_0 t_1 … t_{n-1}` of the Thue–Morse sequence with `t_0 = 1`,
/// `t_{2i} = t_i`, `t_{2i+1} = 1 - t_i`.
pub fn thue_morse_prefix(n: usize) -> Block {
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let bit = if i == 0 {
            1
        } else if i % 2 == 0 {
            t[i / 2]
        } else {
            1 - t[i / 2]
        };
        t.push(bit);
    }
    Block(t.into_iter().map(|b| b'0' + b).collect())
}

/// Every factor of length at most `max_len` of the given blocks.
pub fn factors<'a, I>(alphabet: &Alphabet, sources: I, max_len: usize) -> LanguageWindow
where
    I: IntoIterator<Item = &'a Block>,
{
    LanguageWindow::from_blocks(
        alphabet.clone(),
        max_len,
        sources.into_iter().cloned(),
        Exactness::Exact,
    )
}

/// Pairwise distances between positions holding the symbol `1`.
pub fn difference_set(u: &Block) -> BTreeSet<usize> {
    let ones: Vec<usize> = u
        .as_bytes()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == b'1')
        .map(|(i, _)| i)
        .collect();
    let mut out = BTreeSet::new();
    for (k, &i) in ones.iter().enumerate() {
        for &j in &ones[..k] {
            out.insert(i - j);
        }
    }
    out
}

/// No nonempty `w` with `www` a factor. Brute force over all positions and
/// periods.
pub fn is_cube_free(u: &Block) -> bool {
    let s = u.as_bytes();
    let n = s.len();
    for start in 0..n {
        let mut p = 1;
        while start + 3 * p <= n {
            if (start + p..start + 3 * p).all(|i| s[i] == s[i - p]) {
                return false;
            }
            p += 1;
        }
    }
    true
}

/// Start offsets of `pattern` in `text`, overlaps included.
pub fn occurrences(pattern: &Block, text: &Block) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    text.as_bytes()
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern.as_bytes())
        .map(|(i, _)| i)
        .collect()
}

/// Lyndon test: primitive and strictly smaller than every proper rotation
/// (byte order).
pub fn is_lyndon(w: &Block) -> bool {
    let n = w.len();
    n > 0 && (1..n).all(|k| w.as_bytes() < w.rotation(k).as_bytes())
}

/// Lexicographically least rotation (byte order).
pub fn least_rotation(w: &Block) -> Block {
    (0..w.len().max(1))
        .map(|k| w.rotation(k))
        .min_by(|a, b| a.as_bytes().cmp(b.as_bytes()))
        .unwrap_or_default()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
