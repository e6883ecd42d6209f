//! Transitivity-hierarchy checks on windows and presentations: gap sets
//! `N(u, v)`, periodic decompositions, numerical semigroups, congruent
//! embeddings, the strong property P and the sofic equivalence report.

mod decomposition;
mod embedding;
mod equivalence;
mod gaps;
mod property_p;
mod semigroup;

pub use decomposition::{periodic_decomposition, DecompositionReport};
pub use embedding::{mod_embedding, Embedding};
pub use equivalence::{
    default_window, equivalence_report, fuzz_equivalences, probe_pairs, sofic_hierarchy, EquivalenceReport, FuzzSummary,
    PeriodicEvidence, PeriodicPair, PERIODIC_SEARCH_CAP,
};
pub use gaps::{
    gap_set, gap_set_graph, hierarchy_from_gaps, hierarchy_report, Evidence, GapReport, HierarchyReport, Indicator,
    ModulusEvidence, PairEvidence, Verdict,
};
pub use property_p::{property_p_witness, GlueEntry, GraphLanguage, Language, PropertyPWitness};
pub use semigroup::{frobenius, representable_up_to, SemigroupReport};
