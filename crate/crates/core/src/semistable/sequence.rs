use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::RibbonGraph;
use crate::subsets::{self, is_semistable, max_semistable, quotient, EdgeSet, Labeling, SubsetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error("stage {0} is not strictly contained in the previous stage")]
    NotStrict(usize),
    #[error("stage {0} is not semistable")]
    NotSemistable(usize),
    #[error("stage {0} is empty")]
    EmptyStage(usize),
    #[error("the base graph must be connected")]
    Disconnected,
}

/// A labeled ribbon graph with a strictly decreasing chain of semistable edge
/// sets `E ⊋ Z_1 ⊋ … ⊋ Z_k`; `stages` holds `Z_1..Z_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermissibleSequence {
    pub graph: RibbonGraph,
    pub labels: Labeling,
    pub stages: Vec<EdgeSet>,
}

impl PermissibleSequence {
    pub fn new(graph: RibbonGraph, labels: Labeling, stages: Vec<EdgeSet>) -> Result<Self, SequenceError> {
        labels.validate(&graph)?;
        if !graph.is_connected() {
            return Err(SequenceError::Disconnected);
        }
        let mut previous: EdgeSet = (0..graph.edge_count()).collect();
        for (i, z) in stages.iter().enumerate() {
            subsets::check_edges(&graph, z)?;
            if z.is_empty() {
                return Err(SequenceError::EmptyStage(i + 1));
            }
            if !(z.is_subset(&previous) && z.len() < previous.len()) {
                return Err(SequenceError::NotStrict(i + 1));
            }
            if !is_semistable(&graph, &labels, z) {
                return Err(SequenceError::NotSemistable(i + 1));
            }
            previous = z.clone();
        }
        Ok(Self { graph, labels, stages })
    }

    /// The trivial sequence `(E)`.
    pub fn trivial(graph: RibbonGraph, labels: Labeling) -> Result<Self, SequenceError> {
        Self::new(graph, labels, Vec::new())
    }

    /// Collapses the negligible excess `Z_i − Z_i^sst` of every stage, first to
    /// last, and renumbers the remaining edges.
    pub fn normalize(graph: RibbonGraph, labels: Labeling, stages: Vec<EdgeSet>) -> Result<Self, SequenceError> {
        labels.validate(&graph)?;
        let mut graph = graph;
        let mut labels = labels;
        let mut stages = stages;
        for i in 0..stages.len() {
            let z = &stages[i];
            let sst = max_semistable(&graph, &labels, z)?;
            let excess: EdgeSet = z.difference(&sst).copied().collect();
            if excess.is_empty() {
                continue;
            }
            let q = quotient(&graph, &labels, &excess)?;
            stages = stages
                .iter()
                .map(|s| s.iter().filter_map(|e| q.edge_map.get(e).copied()).collect())
                .collect();
            graph = q.induced.graph;
            labels = q.labels;
        }
        Self::new(graph, labels, stages)
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// `Z_i` with `Z_0 = E` and `Z_{k+1} = ∅`.
    pub fn stage(&self, i: usize) -> EdgeSet {
        if i == 0 {
            (0..self.graph.edge_count()).collect()
        } else if i <= self.stages.len() {
            self.stages[i - 1].clone()
        } else {
            EdgeSet::new()
        }
    }

    /// The deepest `i` with `e ∈ Z_i`.
    pub fn stage_of_edge(&self, e: usize) -> usize {
        self.stages.iter().take_while(|z| z.contains(&e)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::theta;
    use crate::graph::Point;

    fn labels() -> Labeling {
        Labeling::from_pairs([("p", Point::Cusp(0))]).unwrap()
    }

    #[test]
    fn theta_sequences() {
        let s = PermissibleSequence::new(theta(), labels(), vec![EdgeSet::from([0, 1])]).unwrap();
        assert_eq!(s.stage_of_edge(0), 1);
        assert_eq!(s.stage_of_edge(2), 0);
        assert_eq!(
            PermissibleSequence::new(theta(), labels(), vec![EdgeSet::from([2])]),
            Err(SequenceError::NotSemistable(1))
        );
        assert_eq!(
            PermissibleSequence::new(theta(), labels(), vec![EdgeSet::from([0, 1]), EdgeSet::from([0, 1])]),
            Err(SequenceError::NotStrict(2))
        );
    }

    #[test]
    fn normalize_collapses_negligible_excess() {
        // theta with e3 in a stage: {e3} is negligible, so the stage becomes empty
        let r = PermissibleSequence::normalize(theta(), labels(), vec![EdgeSet::from([2])]);
        assert_eq!(r, Err(SequenceError::EmptyStage(1)));
    }
}
