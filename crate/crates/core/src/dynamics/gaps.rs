use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::automata::{set_step, successor_table, LabeledGraph};
use crate::words::{Block, Exactness, LanguageWindow};

/// Windowed verdict on a set `N(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Every length from `N` to the end of the window was witnessed, and that
    /// run covers at least half of the window.
    CofiniteFrom(usize),
    /// Lengths proved absent from an exact source.
    Gaps(Vec<usize>),
    Inconclusive,
}

impl Verdict {
    pub fn is_cofinite(&self) -> bool {
        matches!(self, Verdict::CofiniteFrom(_))
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Verdict::Gaps(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CofiniteFrom(n) => write!(f, "COFINITE_FROM({n})"),
            Verdict::Gaps(g) => {
                let shown: Vec<String> = g.iter().take(12).map(usize::to_string).collect();
                let more = if g.len() > 12 { ",…" } else { "" };
                write!(f, "GAPS({}{more})", shown.join(","))
            }
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Lengths `ℓ = |uw| ≤ window` with `uwv` in the language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub u: Block,
    pub v: Block,
    pub window: usize,
    /// Largest `ℓ` the source can decide.
    pub effective_window: usize,
    pub witnessed: BTreeSet<usize>,
    pub source_exactness: Exactness,
    pub verdict: Verdict,
}

impl GapReport {
    /// Longest run of consecutive witnessed lengths.
    pub fn longest_run(&self) -> usize {
        let (mut best, mut run, mut prev) = (0, 0, None);
        for &l in &self.witnessed {
            run = if prev == Some(l.wrapping_sub(1)) { run + 1 } else { 1 };
            best = best.max(run);
            prev = Some(l);
        }
        best
    }

    /// Least witnessed length divisible by `n`.
    pub fn multiple_of(&self, n: usize) -> Option<usize> {
        self.witnessed.iter().copied().find(|l| l % n == 0)
    }

    /// Whether every length in `[|u|, window]` was decidable from an exact
    /// source, so absences are real.
    pub fn absences_are_sound(&self) -> bool {
        self.source_exactness.is_exact() && self.effective_window == self.window
    }
}

fn classify(u_len: usize, window: usize, effective: usize, witnessed: &BTreeSet<usize>, exact: bool) -> Verdict {
    let lo = u_len.max(1);
    if effective >= lo {
        let mut n = effective + 1;
        while n > lo && witnessed.contains(&(n - 1)) {
            n -= 1;
        }
        let run = effective + 1 - n;
        let range = effective + 1 - lo;
        if run >= 1 && 2 * run >= range {
            return Verdict::CofiniteFrom(n);
        }
    }
    if exact && effective == window {
        Verdict::Gaps((lo..=window).filter(|l| !witnessed.contains(l)).collect())
    } else {
        Verdict::Inconclusive
    }
}

/// `N(u, v)` restricted to `[1, w]`, read off a language window.
///
/// Lengths whose witness `uwv` would be longer than the window's `max_len`
/// cannot be decided; they shrink the effective window, and only an exact
/// source with a full effective window yields a `GAPS` verdict.
pub fn gap_set(lang: &LanguageWindow, u: &Block, v: &Block, w: usize) -> GapReport {
    let effective = w.min(lang.max_len().saturating_sub(v.len()));
    let witnessed: BTreeSet<usize> = lang
        .iter()
        .filter(|b| b.len() >= u.len() + v.len() && b.starts_with(u) && b.ends_with(v))
        .map(|b| b.len() - v.len())
        .filter(|&l| l >= 1 && l <= w)
        .collect();
    let exact = lang.exactness().is_exact();
    GapReport {
        u: u.clone(),
        v: v.clone(),
        window: w,
        effective_window: effective,
        verdict: classify(u.len(), w, effective, &witnessed, exact),
        witnessed,
        source_exactness: lang.exactness(),
    }
}

/// `N(u, v)` restricted to `[1, w]`, computed on a graph presentation.
///
/// Collects the vertices where `u`-paths end, advances them one arbitrary
/// edge at a time, and records a length whenever the frontier meets a vertex
/// from which `v` can be read. Exact for every `ℓ ≤ w`.
pub fn gap_set_graph(graph: &LabeledGraph, u: &Block, v: &Block, w: usize) -> GapReport {
    let g = graph.normalized();
    let n = g.vertex_count();
    let table = successor_table(&g);
    let alphabet = g.alphabet();
    let run = |start: Vec<u32>, word: &Block| -> Vec<u32> {
        word.as_bytes().iter().fold(start, |set, &a| match alphabet.rank(a) {
            Some(r) if !set.is_empty() => set_step(&table, &set, r),
            _ => Vec::new(),
        })
    };
    let ends = run((0..n as u32).collect(), u);
    let reads_v: Vec<bool> = (0..n as u32).map(|x| !run(vec![x], v).is_empty()).collect();

    let mut witnessed = BTreeSet::new();
    let mut frontier = vec![false; n];
    for &x in &ends {
        frontier[x as usize] = true;
    }
    let mut l = u.len();
    while l <= w && frontier.iter().any(|&b| b) {
        if l >= 1 && frontier.iter().zip(&reads_v).any(|(&f, &r)| f && r) {
            witnessed.insert(l);
        }
        let mut next = vec![false; n];
        for e in g.edges() {
            if frontier[e.src] {
                next[e.dst] = true;
            }
        }
        frontier = next;
        l += 1;
    }
    GapReport {
        u: u.clone(),
        v: v.clone(),
        window: w,
        effective_window: w,
        verdict: classify(u.len(), w, w, &witnessed, true),
        witnessed,
        source_exactness: Exactness::Exact,
    }
}

/// Positive, negative, or undecided evidence for a dynamical property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Indicator {
    Positive,
    Negative,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "length", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Evidence {
    Witnessed(usize),
    AbsentInWindow,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusEvidence {
    pub modulus: usize,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEvidence {
    pub gap: GapReport,
    /// Some witnessed `ℓ` divisible by each modulus.
    pub total_transitivity: Vec<ModulusEvidence>,
    /// Longest run of consecutive witnessed lengths.
    pub longest_run: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HierarchyReport {
    pub pairs: Vec<PairEvidence>,
    pub max_modulus: usize,
    pub mixing: Indicator,
    pub total_transitivity: Indicator,
    /// Least, over pairs, of the longest witnessed run.
    pub weak_mixing_run: usize,
}

/// Mixing, total transitivity and weak mixing evidence from gap reports.
pub fn hierarchy_from_gaps(gaps: Vec<GapReport>, max_modulus: usize) -> HierarchyReport {
    let pairs: Vec<PairEvidence> = gaps
        .into_iter()
        .map(|gap| {
            let total_transitivity = (1..=max_modulus)
                .map(|n| ModulusEvidence {
                    modulus: n,
                    evidence: match gap.multiple_of(n) {
                        Some(l) => Evidence::Witnessed(l),
                        None if gap.absences_are_sound() => Evidence::AbsentInWindow,
                        None => Evidence::Inconclusive,
                    },
                })
                .collect();
            PairEvidence {
                longest_run: gap.longest_run(),
                total_transitivity,
                gap,
            }
        })
        .collect();
    let combine = |neg: bool, pos: bool| {
        if neg {
            Indicator::Negative
        } else if pos {
            Indicator::Positive
        } else {
            Indicator::Inconclusive
        }
    };
    let mixing = combine(
        pairs.iter().any(|p| p.gap.verdict.is_negative()),
        pairs.iter().all(|p| p.gap.verdict.is_cofinite()),
    );
    let tt_all = |e: Evidence| {
        pairs
            .iter()
            .flat_map(|p| &p.total_transitivity)
            .any(|m| m.evidence == e)
    };
    let total_transitivity = combine(
        tt_all(Evidence::AbsentInWindow),
        !tt_all(Evidence::AbsentInWindow) && !tt_all(Evidence::Inconclusive),
    );
    HierarchyReport {
        weak_mixing_run: pairs.iter().map(|p| p.longest_run).min().unwrap_or(0),
        pairs,
        max_modulus,
        mixing,
        total_transitivity,
    }
}

/// [`hierarchy_from_gaps`] over [`gap_set`] for each pair.
pub fn hierarchy_report(lang: &LanguageWindow, pairs: &[(Block, Block)], w: usize, max_modulus: usize) -> HierarchyReport {
    let gaps = pairs.iter().map(|(u, v)| gap_set(lang, u, v, w)).collect();
    hierarchy_from_gaps(gaps, max_modulus)
}
