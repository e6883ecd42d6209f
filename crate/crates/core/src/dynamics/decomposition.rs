use serde::Serialize;

use crate::automata::LabeledGraph;
use crate::error::{Error, Result};

/// Cyclic partition of the vertices: every edge runs from class `i` to class
/// `i + 1 mod period`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub period: usize,
    /// Class of each vertex, indexed like the graph's vertices.
    pub classes: Vec<usize>,
    pub names: Vec<String>,
}

impl DecompositionReport {
    /// Vertex names grouped by class.
    pub fn members(&self) -> Vec<Vec<&str>> {
        let mut out = vec![Vec::new(); self.period];
        for (v, &c) in self.classes.iter().enumerate() {
            out[c].push(self.names[v].as_str());
        }
        out
    }
}

/// Classes are BFS levels from vertex 0 taken modulo the period.
pub fn periodic_decomposition(graph: &LabeledGraph) -> Result<DecompositionReport> {
    let period = graph.period()?;
    let classes: Vec<usize> = graph
        .bfs_levels()
        .into_iter()
        .map(|l| l.expect("irreducible") % period)
        .collect();
    if let Some(e) = graph
        .edges()
        .iter()
        .find(|e| (classes[e.src] + 1) % period != classes[e.dst])
    {
        return Err(Error::Precondition(format!(
            "edge {} -> {} breaks the cyclic order",
            graph.name(e.src),
            graph.name(e.dst)
        )));
    }
    Ok(DecompositionReport {
        period,
        classes,
        names: graph.names().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{flower, samples};
    use crate::words::{Alphabet, Block};

    #[test]
    fn decomposition_examples() {
        let a = Alphabet::binary();
        let f = flower(&a, &[Block::from("01"), Block::from("0110")]).unwrap();
        let d = periodic_decomposition(&f).unwrap();
        assert_eq!(d.period, 2);
        assert_eq!(d.classes[0], 0);

        let d = periodic_decomposition(&samples::golden_mean()).unwrap();
        assert_eq!((d.period, d.members().len()), (1, 1));

        let c = samples::cycle(&a, &Block::from("0001"));
        let d = periodic_decomposition(&c).unwrap();
        assert_eq!(d.period, 4);
        assert_eq!(d.classes, vec![0, 1, 2, 3]);

        assert_eq!(periodic_decomposition(&samples::disjoint_loops()), Err(Error::NotIrreducible));
    }
}
