//! Orbicell complexes built from labeled ribbon graphs and their permissible
//! sequences.

mod canon;
mod enumerate;
mod faces;

pub use canon::{
    automorphism_report, automorphism_report_colored, automorphisms, canonical_form, canonical_form_colored,
    canonical_form_staged, relabel_graph, semistable_canonical_form, AutReport, CanonicalForm, SemistableForm,
};
pub use enumerate::{enumerate_by_cycle_type, enumerate_naive, label_names, permutations, GraphFilter};
pub use faces::{cell_faces, Face, FaceError, FaceKind};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::RibbonGraph;
use crate::metric::Rational;
use crate::semistable::{from_permissible, PermissibleSequence};
use crate::subsets::{is_semistable, EdgeSet, Labeling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("no stable surface of genus {genus} with {labels} labeled points")]
    Infeasible { genus: u32, labels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    pub min_valence: usize,
    pub compactified: bool,
    /// Keep tangent decorations; otherwise identify cells with the same semistable graph.
    pub decorated: bool,
    pub max_half_edges: usize,
    pub vertex_labels: bool,
    /// Open cells get dimension `|E| - 1` instead of `|E|`.
    pub unital: bool,
    /// Use the oracle generator instead of the cycle-type sweep.
    pub naive: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            min_valence: 3,
            compactified: false,
            decorated: true,
            max_half_edges: 12,
            vertex_labels: false,
            unital: false,
            naive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    Full,
    EdgeImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKey {
    Primitive(CanonicalForm),
    Semistable(SemistableForm),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbiCell {
    pub datum: PermissibleSequence,
    pub key: CellKey,
    pub dimension: usize,
    pub aut: AutReport,
    pub decorated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplex {
    pub genus: u32,
    pub labels: usize,
    pub options: EnumerateOptions,
    /// Sorted by dimension, then key.
    pub cells: Vec<OrbiCell>,
    /// Indices of the faces of each cell that lie in the complex.
    pub incidence: Vec<Vec<usize>>,
    /// False when `max_half_edges` was below the bound for this type.
    pub complete: bool,
}

impl CellComplex {
    pub fn counts_by_dimension(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.dimension).or_insert(0) += 1;
        }
        out
    }
}

/// Largest half-edge count of a graph of type `(g, n)` whose unlabeled vertices are at least trivalent.
pub fn half_edge_bound(genus: u32, labels: usize) -> usize {
    (12 * genus as usize + 6 * labels).saturating_sub(12)
}

/// Every proper nonempty semistable edge subset.
fn semistable_subsets(graph: &RibbonGraph, labels: &Labeling) -> Vec<EdgeSet> {
    let m = graph.edge_count();
    (1u64..(1u64 << m) - 1)
        .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect::<EdgeSet>())
        .filter(|z| is_semistable(graph, labels, z))
        .collect()
}

/// All permissible sequences on a labeled graph.
pub fn permissible_sequences(graph: &RibbonGraph, labels: &Labeling) -> Vec<PermissibleSequence> {
    let subsets = semistable_subsets(graph, labels);
    let mut out = Vec::new();
    let mut chain: Vec<EdgeSet> = Vec::new();
    fn extend(
        subsets: &[EdgeSet],
        graph: &RibbonGraph,
        labels: &Labeling,
        chain: &mut Vec<EdgeSet>,
        out: &mut Vec<PermissibleSequence>,
    ) {
        out.push(PermissibleSequence::new(graph.clone(), labels.clone(), chain.clone()).expect("chain is permissible"));
        let last_len = chain.last().map_or(graph.edge_count(), |z| z.len());
        for z in subsets {
            let inside = chain.last().is_none_or(|last| z.is_subset(last));
            if inside && z.len() < last_len {
                chain.push(z.clone());
                extend(subsets, graph, labels, chain, out);
                chain.pop();
            }
        }
    }
    extend(&subsets, graph, labels, &mut chain, &mut out);
    out
}

fn stage_colors(seq: &PermissibleSequence) -> Vec<u32> {
    (0..seq.graph.edge_count()).map(|e| seq.stage_of_edge(e) as u32).collect()
}

/// `Σ_k (|Z_k − Z_{k+1}| − 1)`.
pub fn stratified_dimension(seq: &PermissibleSequence) -> usize {
    (0..=seq.depth()).map(|k| seq.stage(k).len() - seq.stage(k + 1).len() - 1).sum()
}

fn cell_of(seq: PermissibleSequence, options: &EnumerateOptions) -> OrbiCell {
    if !options.compactified {
        let (key, relabel) = canonical_form(&seq.graph, &seq.labels);
        let (g, x) = relabel_graph(&seq.graph, &seq.labels, &relabel);
        let aut = automorphism_report(&g, &x);
        let dimension = g.edge_count() - usize::from(options.unital);
        let datum = PermissibleSequence::trivial(g, x).expect("open cells are valid");
        return OrbiCell { datum, key: CellKey::Primitive(key), dimension, aut, decorated: true };
    }
    let (key, relabel) = canonical_form_staged(&seq);
    let (g, x) = relabel_graph(&seq.graph, &seq.labels, &relabel);
    let index = g.edge_index();
    let old_edges = seq.graph.edges();
    let stages: Vec<EdgeSet> = seq
        .stages
        .iter()
        .map(|z| z.iter().map(|&e| index[relabel[old_edges[e][0]]]).collect())
        .collect();
    let datum = PermissibleSequence::new(g, x, stages).expect("relabeling preserves permissibility");
    if options.decorated {
        let aut = automorphism_report_colored(&datum.graph, &datum.labels, &stage_colors(&datum));
        let dimension = stratified_dimension(&datum);
        return OrbiCell { datum, key: CellKey::Primitive(key), dimension, aut, decorated: true };
    }
    let (s, _) = from_permissible(&datum).expect("permissible sequences map to semistable graphs");
    let (form, aut) = semistable_canonical_form(&s);
    let dimension = s
        .level_sizes()
        .iter()
        .enumerate()
        .map(|(k, _)| {
            s.order.level(k as u32).iter().map(|&c| s.components[c].edge_count()).sum::<usize>() - 1
        })
        .sum();
    OrbiCell { datum, key: CellKey::Semistable(form), dimension, aut, decorated: false }
}

/// The orbicells of type `(g, n)`, open or compactified.
pub fn enumerate_cells(genus: u32, labels: usize, options: &EnumerateOptions) -> Result<CellComplex, ComplexError> {
    if 2 * genus as i64 - 2 + labels as i64 <= 0 {
        return Err(ComplexError::Infeasible { genus, labels });
    }
    let filter =
        GraphFilter { genus, labels, min_valence: options.min_valence, vertex_labels: options.vertex_labels };
    let graphs = if options.naive {
        enumerate_naive(&filter, options.max_half_edges)
    } else {
        enumerate_by_cycle_type(&filter, options.max_half_edges)
    };
    let mut cells: BTreeMap<CellKey, OrbiCell> = BTreeMap::new();
    for (_, (g, x)) in graphs {
        let sequences = if options.compactified {
            permissible_sequences(&g, &x)
        } else {
            vec![PermissibleSequence::trivial(g, x).expect("enumerated graphs are valid")]
        };
        for seq in sequences {
            let cell = cell_of(seq, options);
            cells.entry(cell.key.clone()).or_insert(cell);
        }
    }
    let mut cells: Vec<OrbiCell> = cells.into_values().collect();
    cells.sort_by(|a, b| (a.dimension, &a.key).cmp(&(b.dimension, &b.key)));
    let position: BTreeMap<CellKey, usize> = cells.iter().enumerate().map(|(i, c)| (c.key.clone(), i)).collect();
    let incidence = cells
        .iter()
        .map(|cell| {
            let mut faces = Vec::new();
            let seq = &cell.datum;
            for k in 0..=seq.depth() {
                for &e in seq.stage(k).difference(&seq.stage(k + 1)) {
                    if let Ok(face) = cell_faces(seq, k, e) {
                        if !options.compactified && face.kind != FaceKind::Collapse {
                            continue;
                        }
                        let key = cell_of(face.cell, options).key;
                        if let Some(&i) = position.get(&key) {
                            if !faces.contains(&i) {
                                faces.push(i);
                            }
                        }
                    }
                }
            }
            faces.sort_unstable();
            faces
        })
        .collect();
    Ok(CellComplex {
        genus,
        labels,
        options: *options,
        cells,
        incidence,
        complete: options.max_half_edges >= half_edge_bound(genus, labels),
    })
}

/// `Σ (−1)^dim / |Aut|` over all cells.
pub fn orbifold_euler_characteristic(complex: &CellComplex, convention: Convention) -> Rational {
    complex.cells.iter().fold(Rational::zero(), |acc, cell| {
        let order = match convention {
            Convention::Full => cell.aut.full_order,
            Convention::EdgeImage => cell.aut.edge_image_order,
        };
        let sign: i64 = if cell.dimension % 2 == 0 { 1 } else { -1 };
        acc + Rational::new(sign.into(), (order as i64).into())
    })
}
