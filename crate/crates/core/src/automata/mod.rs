//! Labeled-graph presentations of sofic shifts and the automata algorithms
//! that run on them.

mod cover;
mod cycles;
pub mod enumerate;
mod fisher;
mod graph;
pub mod samples;

pub use cover::{
    determinize, determinize_from_full, is_synchronizing, language_window, periodic_blocks,
    synchronizing_word, DeterministicCover, PeriodicBlock,
};
pub use cycles::{coprime_cycles, ClosedWalk, CycleWitness};
pub use fisher::fisher_cover;
pub use graph::{flower, Edge, LabeledGraph};

pub(crate) use cover::{set_step, successor_table};

/// Strong connectivity of `graph`.
pub fn is_irreducible(graph: &LabeledGraph) -> bool {
    graph.is_irreducible()
}

/// The gcd of all cycle lengths of an irreducible graph.
pub fn period(graph: &LabeledGraph) -> crate::Result<usize> {
    graph.period()
}
