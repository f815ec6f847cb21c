//! Line-oriented text format for labeled ribbon graphs, permissible sequences,
//! metrics and semistable ribbon graphs.
//!
//! ```text
//! format ribbon/1
//! halfedges h1 h2 h3 h4 h5 h6
//! vertex h1 h5 h3
//! vertex h2 h6 h4
//! edge h1 h2
//! edge h3 h4
//! edge h5 h6
//! label p cusp h1
//! ```
//!
//! See `docs/format.md` for the grammar.

mod parse;
mod write;

pub use parse::parse;
pub use write::{to_machine, to_text};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::RibbonGraph;
use crate::metric::Rational;
use crate::semistable::{SemistableRibbonGraph, TangentDecoration};
use crate::subsets::{EdgeSet, Labeling};

pub const HEADER: &str = "format ribbon/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorKind {
    Syntax,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{line}:{column}: {rule}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub rule: String,
    pub message: String,
    pub kind: ErrorKind,
}

/// A labeled ribbon graph with optional stages and edge lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub names: Vec<String>,
    pub graph: RibbonGraph,
    pub labels: Labeling,
    /// `Z_1 ⊋ Z_2 ⊋ …`.
    pub stages: Vec<EdgeSet>,
    /// One length per edge, in edge order.
    pub lengths: Option<Vec<Rational>>,
}

impl GraphDocument {
    pub fn new(graph: RibbonGraph, labels: Labeling) -> Self {
        let names = default_names(graph.half_edge_count());
        Self { names, graph, labels, stages: Vec::new(), lengths: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemistableDocument {
    pub component_names: Vec<String>,
    pub half_edge_names: Vec<Vec<String>>,
    pub semistable: SemistableRibbonGraph,
    /// Names of the half-edges of the primitive graph the decoration refers to.
    pub originals: Vec<String>,
    pub decoration: Option<TangentDecoration>,
}

impl SemistableDocument {
    /// Names component half-edges after the primitive half-edges they came from.
    pub fn from_decorated(s: SemistableRibbonGraph, t: TangentDecoration, originals: Vec<String>) -> Self {
        let half_edge_names = t.origins.iter().map(|o| o.iter().map(|&h| originals[h].clone()).collect()).collect();
        let component_names = (0..s.components.len()).map(|c| format!("C{c}")).collect();
        Self { component_names, half_edge_names, semistable: s, originals, decoration: Some(t) }
    }

    pub fn new(s: SemistableRibbonGraph) -> Self {
        let component_names = (0..s.components.len()).map(|c| format!("C{c}")).collect();
        let half_edge_names = s
            .components
            .iter()
            .enumerate()
            .map(|(c, g)| (0..g.half_edge_count()).map(|h| format!("c{c}h{}", h + 1)).collect())
            .collect();
        Self { component_names, half_edge_names, semistable: s, originals: Vec::new(), decoration: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Document {
    Graph(GraphDocument),
    Semistable(SemistableDocument),
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("h{i}")).collect()
}

#[cfg(test)]
mod tests;
