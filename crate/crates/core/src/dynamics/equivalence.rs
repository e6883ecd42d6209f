use rayon::prelude::*;
use serde::Serialize;

use super::decomposition::{periodic_decomposition, DecompositionReport};
use super::gaps::{gap_set_graph, hierarchy_from_gaps, HierarchyReport, Indicator};
use crate::automata::{
    coprime_cycles, determinize, determinize_from_full, fisher_cover, periodic_blocks, synchronizing_word,
    CycleWitness, LabeledGraph, PeriodicBlock,
};
use crate::error::Result;
use crate::words::{gcd, Block};

/// Largest period searched for periodic orbits.
pub const PERIODIC_SEARCH_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicPair {
    pub first: PeriodicBlock,
    pub second: PeriodicBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "pair", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PeriodicEvidence {
    Found(PeriodicPair),
    /// No pair with prime periods up to the bound.
    BoundedAbsence(usize),
}

impl PeriodicEvidence {
    pub fn is_found(&self) -> bool {
        matches!(self, PeriodicEvidence::Found(_))
    }
}

/// Independent indicators of mixing for an irreducible sofic shift, all
/// computed on its Fisher cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub instance_digest: String,
    pub fisher_states: usize,
    pub fisher_edges: usize,
    /// A single fixed point; every indicator is vacuous.
    pub trivial: bool,
    pub period: usize,
    pub coprime_cycles: Option<CycleWitness>,
    pub synchronizing_word: Block,
    /// Two orbits through the synchronizing word with coprime prime periods.
    pub coprime_periodic: PeriodicEvidence,
    /// Two orbits with coprime prime periods, with no restriction. For sofic
    /// shifts this does not imply mixing: in the shift where every other
    /// symbol is 0, `0^∞` and `(10)^∞` have periods 1 and 2.
    pub coprime_periodic_unrestricted: PeriodicEvidence,
    pub window: usize,
    pub hierarchy: HierarchyReport,
    pub decomposition: DecompositionReport,
    pub inconsistencies: Vec<String>,
}

impl EquivalenceReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    /// Mixing according to each indicator, in the order period, cycles,
    /// periodic points, gap sets, total transitivity, weak-mixing run.
    pub fn indicators(&self) -> [(&'static str, bool); 6] {
        [
            ("period_one", self.period == 1),
            ("coprime_cycles", self.coprime_cycles.is_some()),
            ("coprime_periodic", self.coprime_periodic.is_found()),
            ("gaps_cofinite", self.hierarchy.mixing == Indicator::Positive),
            ("totally_transitive", self.hierarchy.total_transitivity == Indicator::Positive),
            ("weak_mixing_run", self.hierarchy.weak_mixing_run >= 2),
        ]
    }

    pub fn is_mixing(&self) -> bool {
        self.period == 1
    }
}

/// Gap window used when none is given: `2·(states)² + 8`.
pub fn default_window(fisher_states: usize) -> usize {
    2 * fisher_states * fisher_states + 8
}

/// Probe pairs on a Fisher cover with synchronizing word `m`: `(m, m)`,
/// `(m, y·m)` for the least symbol `y` that can precede `m`, and `(a, a)`
/// for every other symbol. Over a period-`p` cover the first two pairs have all
/// their gap lengths in the residues 0 and −1 mod `p`.
pub fn probe_pairs(fisher: &LabeledGraph, m: &Block) -> Vec<(Block, Block)> {
    let cover = determinize_from_full(fisher);
    let mut pairs = vec![(m.clone(), m.clone())];
    if let Some(ym) = fisher
        .alphabet()
        .symbols()
        .iter()
        .map(|&y| Block::new(vec![y]).concat(m))
        .find(|ym| cover.accepts(ym))
    {
        pairs.push((m.clone(), ym));
    }
    for &a in fisher.alphabet().symbols() {
        let a = Block::new(vec![a]);
        if cover.accepts(&a) && a != *m {
            pairs.push((a.clone(), a));
        }
    }
    pairs
}

fn coprime_pair(blocks: &[&PeriodicBlock]) -> Option<PeriodicPair> {
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate().skip(i + 1) {
            if gcd(a.period, b.period) == 1 {
                let key = (a.period.max(b.period), a.period.min(b.period), i, j);
                if best.is_none_or(|k| key < k) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|(_, _, i, j)| PeriodicPair {
        first: blocks[i].clone(),
        second: blocks[j].clone(),
    })
}

/// Whether the orbit of `block^∞` contains `m`.
fn orbit_contains(block: &Block, m: &Block) -> bool {
    block.repeat(m.len() / block.len() + 2).contains(m)
}

/// Synchronizing word of a Fisher cover, or its first edge label if the
/// cover has none.
fn magic_word(fisher: &LabeledGraph) -> Block {
    let follower = determinize_from_full(fisher);
    match synchronizing_word(&follower, follower.len()) {
        Some(m) if !m.is_empty() => m,
        _ => Block::new(vec![fisher.edge(0).label]),
    }
}

fn cover_hierarchy(fisher: &LabeledGraph, m: &Block, window: usize) -> HierarchyReport {
    let gaps = probe_pairs(fisher, m)
        .iter()
        .map(|(u, v)| gap_set_graph(fisher, u, v, window))
        .collect();
    hierarchy_from_gaps(gaps, fisher.vertex_count().max(2))
}

/// Mixing, total transitivity and weak-mixing evidence for an irreducible
/// sofic shift, from exact gap sets of the [`probe_pairs`] on its Fisher
/// cover.
pub fn sofic_hierarchy(graph: &LabeledGraph, window: usize) -> Result<HierarchyReport> {
    let fisher = fisher_cover(graph)?;
    let m = magic_word(&fisher);
    Ok(cover_hierarchy(&fisher, &m, window))
}

/// Computes every indicator independently and lists any disagreement.
pub fn equivalence_report(graph: &LabeledGraph, window: usize) -> Result<EquivalenceReport> {
    let fisher = fisher_cover(graph)?;
    let states = fisher.vertex_count();
    let trivial = states == 1 && fisher.edge_count() == 1;
    let period = fisher.period()?;
    let cycles = coprime_cycles(&fisher)?;
    let decomposition = periodic_decomposition(&fisher)?;

    let m = magic_word(&fisher);

    // Widen the period bound until a pair through `m` turns up.
    let full = determinize(&fisher);
    let cap = (states * states + 2 * m.len() + 2).min(PERIODIC_SEARCH_CAP);
    let mut bound = cap.min(4);
    let (orbits, synced_pair) = loop {
        let orbits = periodic_blocks(&full, bound);
        let synced: Vec<&PeriodicBlock> = orbits.iter().filter(|o| orbit_contains(&o.block, &m)).collect();
        let pair = coprime_pair(&synced);
        if pair.is_some() || bound == cap {
            break (orbits, pair);
        }
        bound = (bound + 4).min(cap);
    };
    let all: Vec<&PeriodicBlock> = orbits.iter().collect();
    let evidence = |pair: Option<PeriodicPair>| match pair {
        Some(p) => PeriodicEvidence::Found(p),
        None => PeriodicEvidence::BoundedAbsence(bound),
    };
    let coprime_periodic = evidence(synced_pair);
    let coprime_periodic_unrestricted = evidence(coprime_pair(&all));

    let hierarchy = cover_hierarchy(&fisher, &m, window);

    let mut report = EquivalenceReport {
        instance_digest: graph.digest(),
        fisher_states: states,
        fisher_edges: fisher.edge_count(),
        trivial,
        period,
        coprime_cycles: cycles,
        synchronizing_word: m,
        coprime_periodic,
        coprime_periodic_unrestricted,
        window,
        hierarchy,
        decomposition,
        inconsistencies: Vec::new(),
    };
    if !trivial {
        let mixing = report.is_mixing();
        let mut bad: Vec<String> = report
            .indicators()
            .iter()
            .filter(|(_, v)| *v != mixing)
            .map(|(name, v)| format!("{name}={v} but period={period}"))
            .collect();
        if report.hierarchy.mixing == Indicator::Inconclusive {
            bad.push("gap verdicts inconclusive".into());
        }
        if report.decomposition.period != period {
            bad.push("decomposition length differs from the period".into());
        }
        report.inconsistencies = bad;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub instances: usize,
    pub trivial: usize,
    pub mixing: usize,
    pub non_mixing: usize,
    /// Digests and findings of every instance with a disagreement.
    pub inconsistent: Vec<(String, Vec<String>)>,
    /// Non-mixing instances that still have two orbits with coprime prime
    /// periods once the synchronizing-word restriction is dropped.
    pub unrestricted_periodic_counterexamples: Vec<String>,
}

/// Equivalence reports for every graph, evaluated in parallel with the
/// default window and merged in input order.
pub fn fuzz_equivalences(graphs: &[LabeledGraph]) -> Result<(Vec<EquivalenceReport>, FuzzSummary)> {
    let reports: Vec<EquivalenceReport> = graphs
        .par_iter()
        .map(|g| {
            let states = fisher_cover(g)?.vertex_count();
            equivalence_report(g, default_window(states))
        })
        .collect::<Result<_>>()?;
    let nontrivial = || reports.iter().filter(|r| !r.trivial);
    let summary = FuzzSummary {
        instances: reports.len(),
        trivial: reports.iter().filter(|r| r.trivial).count(),
        mixing: nontrivial().filter(|r| r.is_mixing()).count(),
        non_mixing: nontrivial().filter(|r| !r.is_mixing()).count(),
        inconsistent: reports
            .iter()
            .filter(|r| !r.is_consistent())
            .map(|r| (r.instance_digest.clone(), r.inconsistencies.clone()))
            .collect(),
        unrestricted_periodic_counterexamples: nontrivial()
            .filter(|r| !r.is_mixing() && r.coprime_periodic_unrestricted.is_found())
            .map(|r| r.instance_digest.clone())
            .collect(),
    };
    Ok((reports, summary))
}
