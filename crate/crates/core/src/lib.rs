//! Ribbon graphs, semistable ribbon graphs and the cell complexes they build.

pub mod cli;
pub mod complex;
pub mod config;
pub mod format;
pub mod graph;
pub mod metric;
pub mod perm;
pub mod polytope;
pub mod semistable;
pub mod subsets;

pub use graph::{GraphError, Point, RibbonGraph};
pub use perm::Permutation;
pub use subsets::{EdgeSet, Labeling};
