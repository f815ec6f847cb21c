use std::collections::BTreeMap;

use thiserror::Error;

use crate::semistable::{PermissibleSequence, SequenceError};
use crate::subsets::{max_semistable, quotient, EdgeSet, SubsetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("edge {edge} does not belong to stage {stage}")]
    NotInStage { stage: usize, edge: usize },
    #[error("stage {0} would become empty")]
    EmptiesStage(usize),
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceKind {
    /// The edge was collapsed; edge ids were renumbered.
    Collapse,
    /// A new stage was inserted after stage `k`.
    NewStage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub cell: PermissibleSequence,
    pub kind: FaceKind,
    /// Old edge id to new edge id for the edges that survive.
    pub edge_map: BTreeMap<usize, usize>,
}

/// The face reached by sending the stage-`k` length of `e` to zero.
pub fn cell_faces(cell: &PermissibleSequence, k: usize, e: usize) -> Result<Face, FaceError> {
    let own = cell.stage(k);
    let next = cell.stage(k + 1);
    if !own.contains(&e) || next.contains(&e) {
        return Err(FaceError::NotInStage { stage: k, edge: e });
    }
    let mut y = next.clone();
    y.insert(e);
    if y == own {
        return Err(FaceError::EmptiesStage(k));
    }
    let identity: BTreeMap<usize, usize> = (0..cell.graph.edge_count()).map(|x| (x, x)).collect();
    if max_semistable(&cell.graph, &cell.labels, &y)? == y {
        let mut stages = cell.stages.clone();
        stages.insert(k, y);
        let seq = PermissibleSequence::new(cell.graph.clone(), cell.labels.clone(), stages)?;
        return Ok(Face { cell: seq, kind: FaceKind::NewStage, edge_map: identity });
    }
    let q = quotient(&cell.graph, &cell.labels, &EdgeSet::from([e]))?;
    let stages: Vec<EdgeSet> =
        cell.stages.iter().map(|z| z.iter().filter_map(|x| q.edge_map.get(x).copied()).collect()).collect();
    let seq = PermissibleSequence::new(q.induced.graph, q.labels, stages).map_err(|err| match err {
        SequenceError::NotStrict(i) | SequenceError::EmptyStage(i) => FaceError::EmptiesStage(i - 1),
        other => other.into(),
    })?;
    Ok(Face { cell: seq, kind: FaceKind::Collapse, edge_map: q.edge_map })
}
