//! Labelings, edge subsets, and the graphs they induce.
//!
//! For a proper edge subset `Z` the subgraph `Γ_Z` lives on the half-edges of
//! `Z` with `sigma0` given by first return, and the quotient `Γ/Γ_Z` lives on the
//! remaining half-edges with `sigma_inf` given by first return. Both carry the
//! list of parent half-edges they were cut from.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{orbit, Point, RibbonGraph};
use crate::perm::Permutation;

/// Edge ids index into [`RibbonGraph::edges`].
pub type EdgeSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("edge subset must be proper")]
    NotProper,
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("labels {0} and {1} collide on one vertex after collapsing")]
    LabelCollision(String, String),
    #[error("label {0} is on a collapsed component with no resulting vertex")]
    LabelLost(String),
    #[error("label {0} sits on a component that collapses to several vertices")]
    LabelSplit(String),
    #[error("ambiguous exceptional pairing at the quotient vertex containing half-edge {0}")]
    AmbiguousPairing(usize),
    #[error("label {0} is used twice")]
    DuplicateLabel(String),
    #[error("point {0:?} carries two labels")]
    DoubleLabel(Point),
    #[error("label {0} names a point that does not exist")]
    MissingPoint(String),
    #[error("distinguished point {0:?} is not labeled")]
    UnlabeledDistinguished(Point),
}

/// An injective assignment of label names to vertices and cusps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    entries: BTreeMap<String, Point>,
}

impl Labeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Point)>) -> Result<Self, SubsetError> {
        let mut labeling = Self::new();
        for (name, point) in pairs {
            labeling.insert(name.into(), point)?;
        }
        Ok(labeling)
    }

    pub fn insert(&mut self, name: String, point: Point) -> Result<(), SubsetError> {
        if self.entries.contains_key(&name) {
            return Err(SubsetError::DuplicateLabel(name));
        }
        if self.entries.values().any(|&p| p == point) {
            return Err(SubsetError::DoubleLabel(point));
        }
        self.entries.insert(name, point);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Point)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn get(&self, name: &str) -> Option<Point> {
        self.entries.get(name).copied()
    }

    pub fn label_at(&self, point: Point) -> Option<&str> {
        self.entries.iter().find(|(_, &p)| p == point).map(|(k, _)| k.as_str())
    }

    pub fn is_labeled(&self, point: Point) -> bool {
        self.entries.values().any(|&p| p == point)
    }

    /// Points exist and every cusp and every vertex of valence one or two is labeled.
    pub fn validate(&self, graph: &RibbonGraph) -> Result<(), SubsetError> {
        self.validate_points(graph)?;
        for point in distinguished_points(graph) {
            if !self.is_labeled(point) {
                return Err(SubsetError::UnlabeledDistinguished(point));
            }
        }
        Ok(())
    }

    pub fn validate_points(&self, graph: &RibbonGraph) -> Result<(), SubsetError> {
        for (name, &point) in &self.entries {
            if !graph.has_point(point) {
                return Err(SubsetError::MissingPoint(name.clone()));
            }
        }
        Ok(())
    }

    /// Renames points through `map`, dropping labels whose point maps to `None`.
    pub fn map_points(&self, mut map: impl FnMut(Point) -> Option<Point>) -> Self {
        let entries = self.entries.iter().filter_map(|(k, &p)| map(p).map(|q| (k.clone(), q))).collect();
        Self { entries }
    }
}

/// Cusps and vertices of valence one or two.
pub fn distinguished_points(graph: &RibbonGraph) -> Vec<Point> {
    if graph.is_circle() {
        return vec![Point::CircleSide(0), Point::CircleSide(1)];
    }
    let mut points: Vec<Point> =
        graph.vertices().iter().filter(|v| v.len() <= 2).map(|v| Point::Vertex(v[0])).collect();
    points.extend(graph.cusps().iter().map(|c| Point::Cusp(c[0])));
    points
}

/// Euler characteristic of the graph minus the number of vertices of valence one or two.
pub fn labeled_euler_characteristic(graph: &RibbonGraph, _labels: &Labeling) -> i64 {
    let low = graph.vertices().iter().filter(|v| v.len() <= 2).count() as i64;
    graph.vertex_count() as i64 - graph.edge_count() as i64 - low
}

/// A graph cut out of a parent graph; `half_edges[i]` is the parent half-edge of local `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub graph: RibbonGraph,
    pub half_edges: Vec<usize>,
}

impl Induced {
    /// Parent-side edge ids of the local edges, in local edge order.
    pub fn parent_edges(&self, parent: &RibbonGraph) -> Vec<usize> {
        let index = parent.edge_index();
        self.graph.edges().iter().map(|[a, _]| index[self.half_edges[*a]]).collect()
    }

    pub fn local_of(&self, parent_half_edge: usize) -> Option<usize> {
        self.half_edges.binary_search(&parent_half_edge).ok()
    }
}

pub(crate) fn check_edges(graph: &RibbonGraph, z: &EdgeSet) -> Result<(), SubsetError> {
    if let Some(&e) = z.iter().find(|&&e| e >= graph.edge_count()) {
        return Err(SubsetError::UnknownEdge(e));
    }
    Ok(())
}

fn check_proper(graph: &RibbonGraph, z: &EdgeSet) -> Result<(), SubsetError> {
    check_edges(graph, z)?;
    if graph.edge_count() > 0 && z.len() == graph.edge_count() {
        return Err(SubsetError::NotProper);
    }
    Ok(())
}

pub(crate) fn half_edge_mask(graph: &RibbonGraph, z: &EdgeSet) -> Vec<bool> {
    let index = graph.edge_index();
    (0..graph.half_edge_count()).map(|h| z.contains(&index[h])).collect()
}

fn first_return(p: &Permutation, keep: &[bool], h: usize) -> usize {
    let mut x = p.apply(h);
    while !keep[x] {
        x = p.apply(x);
    }
    x
}

fn restrict(graph: &RibbonGraph, keep: &[bool], via_boundary: bool) -> Induced {
    let kept: Vec<usize> = (0..graph.half_edge_count()).filter(|&h| keep[h]).collect();
    let mut local = vec![usize::MAX; graph.half_edge_count()];
    for (i, &h) in kept.iter().enumerate() {
        local[h] = i;
    }
    let s1 = Permutation::from_images(kept.iter().map(|&h| local[graph.sigma1().apply(h)]).collect())
        .expect("edge subsets are closed under sigma1");
    let walker = if via_boundary { graph.sigma_inf() } else { graph.sigma0() };
    let s = Permutation::from_images(kept.iter().map(|&h| local[first_return(walker, keep, h)]).collect())
        .expect("first return is a permutation");
    let g = if via_boundary { RibbonGraph::from_boundary(s, s1) } else { RibbonGraph::from_permutations(s, s1) }
        .expect("restriction of a valid graph is valid");
    Induced { graph: g, half_edges: kept }
}

/// `Γ_Z` for any edge subset (properness not required).
pub(crate) fn subgraph_unchecked(graph: &RibbonGraph, z: &EdgeSet) -> Induced {
    restrict(graph, &half_edge_mask(graph, z), false)
}

/// `Γ/Γ_Z` without label transport.
pub(crate) fn quotient_unchecked(graph: &RibbonGraph, z: &EdgeSet) -> Induced {
    let keep: Vec<bool> = half_edge_mask(graph, z).into_iter().map(|b| !b).collect();
    restrict(graph, &keep, true)
}

pub fn subgraph(graph: &RibbonGraph, z: &EdgeSet) -> Result<Induced, SubsetError> {
    check_proper(graph, z)?;
    Ok(subgraph_unchecked(graph, z))
}

/// A quotient vertex paired with the boundary cycle of `Γ_Z` it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalPair {
    /// Parent half-edges of the quotient vertex, in its cyclic order.
    pub vertex: Vec<usize>,
    /// Parent half-edges of the boundary cycle of `Γ_Z`, in its cyclic order.
    pub cycle: Vec<usize>,
}

/// Pairs every exceptional vertex of `Γ/Γ_Z` with the boundary cycle of `Γ_Z`
/// containing the `sigma0`-predecessors of its half-edges.
pub fn exceptional_pairing(graph: &RibbonGraph, z: &EdgeSet) -> Result<Vec<ExceptionalPair>, SubsetError> {
    check_proper(graph, z)?;
    let sub = subgraph_unchecked(graph, z);
    let quot = quotient_unchecked(graph, z);
    Ok(pairing_of(graph, &sub, &quot)?)
}

pub(crate) fn pairing_of(
    graph: &RibbonGraph,
    sub: &Induced,
    quot: &Induced,
) -> Result<Vec<ExceptionalPair>, SubsetError> {
    let in_z: Vec<bool> = {
        let mut m = vec![false; graph.half_edge_count()];
        for &h in &sub.half_edges {
            m[h] = true;
        }
        m
    };
    let sub_cycle = sub.graph.sigma_inf().cycle_index();
    let sub_cycles = sub.graph.cusps();
    let inv0 = graph.sigma0().inverse();
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for vertex in quot.graph.vertices() {
        let parent: Vec<usize> = vertex.iter().map(|&h| quot.half_edges[h]).collect();
        let mut cycles = BTreeSet::new();
        for &h in &parent {
            let pred = inv0.apply(h);
            if in_z[pred] {
                cycles.insert(sub_cycle[sub.local_of(pred).unwrap()]);
            }
        }
        match cycles.len() {
            0 => {}
            1 => {
                let c = *cycles.iter().next().unwrap();
                if !used.insert(c) {
                    return Err(SubsetError::AmbiguousPairing(parent[0]));
                }
                let cycle = sub_cycles[c].iter().map(|&h| sub.half_edges[h]).collect();
                pairs.push(ExceptionalPair { vertex: parent, cycle });
            }
            _ => return Err(SubsetError::AmbiguousPairing(parent[0])),
        }
    }
    Ok(pairs)
}

/// Summary of one connected component of `Γ_Z`, in parent half-edges.
#[derive(Debug, Clone)]
pub struct ComponentSummary {
    pub half_edges: Vec<usize>,
    pub edges: EdgeSet,
    pub vertices: usize,
    pub labeled_vertices: usize,
    pub unlabeled_leaves: usize,
    pub all_valence_two: bool,
    pub contains_boundary_cycle: bool,
}

impl ComponentSummary {
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices
    }

    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices as i64 + 1
    }

    pub fn is_topological_circle(&self) -> bool {
        self.all_valence_two
    }

    pub fn is_negligible(&self) -> bool {
        (self.is_tree() && self.labeled_vertices <= 1)
            || (self.betti() == 1 && self.labeled_vertices == 0 && self.contains_boundary_cycle)
    }
}

/// Connected components of `Γ_Z` with label and boundary information.
pub fn components_of(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> Vec<ComponentSummary> {
    let sub = subgraph_unchecked(graph, z);
    let parent_edge = graph.edge_index();
    let cusps = graph.cusps();
    let mut out = Vec::new();
    for members in sub.graph.components() {
        let parent: Vec<usize> = members.iter().map(|&h| sub.half_edges[h]).collect();
        let in_comp: BTreeSet<usize> = parent.iter().copied().collect();
        let local_vertices: Vec<Vec<usize>> =
            sub.graph.vertices().into_iter().filter(|v| in_comp.contains(&sub.half_edges[v[0]])).collect();
        let mut labeled = 0;
        let mut leaves = 0;
        for v in &local_vertices {
            let is_labeled = labels.is_labeled(graph.vertex_point(sub.half_edges[v[0]]));
            if is_labeled {
                labeled += 1;
            }
            if v.len() == 1 && !is_labeled {
                leaves += 1;
            }
        }
        out.push(ComponentSummary {
            edges: parent.iter().map(|&h| parent_edge[h]).collect(),
            vertices: local_vertices.len(),
            labeled_vertices: labeled,
            unlabeled_leaves: leaves,
            all_valence_two: local_vertices.iter().all(|v| v.len() == 2),
            contains_boundary_cycle: cusps.iter().any(|c| c.iter().all(|h| in_comp.contains(h))),
            half_edges: parent,
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsetClass {
    Negligible,
    Semistable,
    Stable,
    Neither,
}

pub fn is_negligible(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> bool {
    components_of(graph, labels, z).iter().all(ComponentSummary::is_negligible)
}

/// True for the empty set.
pub fn is_semistable(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> bool {
    if graph.edge_count() > 0 && z.len() == graph.edge_count() {
        return false;
    }
    components_of(graph, labels, z).iter().all(|c| !c.is_negligible() && c.unlabeled_leaves == 0)
}

pub fn is_stable(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> bool {
    is_semistable(graph, labels, z)
        && components_of(graph, labels, z)
            .iter()
            .all(|c| !c.is_topological_circle() || c.labeled_vertices > 0)
}

/// The empty set classifies as negligible.
pub fn classify_subset(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> Result<SubsetClass, SubsetError> {
    check_proper(graph, z)?;
    Ok(if is_negligible(graph, labels, z) {
        SubsetClass::Negligible
    } else if is_stable(graph, labels, z) {
        SubsetClass::Stable
    } else if is_semistable(graph, labels, z) {
        SubsetClass::Semistable
    } else {
        SubsetClass::Neither
    })
}

/// The unique maximal semistable subset of `z`.
pub fn max_semistable(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> Result<EdgeSet, SubsetError> {
    check_proper(graph, z)?;
    let order: Vec<usize> = z.iter().copied().collect();
    Ok(max_semistable_in_order(graph, labels, z, &order))
}

/// Strips edges one at a time, scanning `order`; the result does not depend on `order`.
pub fn max_semistable_in_order(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet, order: &[usize]) -> EdgeSet {
    let edges = graph.edges();
    let vertex_index = graph.sigma0().cycle_index();
    let vertices = graph.vertices();
    let mut current = z.clone();
    'strip: loop {
        let mut degree = vec![0usize; vertices.len()];
        for &e in &current {
            for h in edges[e] {
                degree[vertex_index[h]] += 1;
            }
        }
        for &e in order {
            if !current.contains(&e) {
                continue;
            }
            let strip = edges[e].iter().any(|&h| {
                let v = vertex_index[h];
                degree[v] == 1 && !labels.is_labeled(Point::Vertex(vertices[v][0]))
            });
            if strip {
                current.remove(&e);
                continue 'strip;
            }
        }
        break;
    }
    for comp in components_of(graph, labels, &current) {
        if comp.is_topological_circle() && comp.labeled_vertices == 0 && comp.contains_boundary_cycle {
            for e in &comp.edges {
                current.remove(e);
            }
        }
    }
    current
}

/// `Z^sst` minus its unlabeled topological circles.
pub fn max_stable(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> Result<EdgeSet, SubsetError> {
    let mut current = max_semistable(graph, labels, z)?;
    for comp in components_of(graph, labels, &current) {
        if comp.is_topological_circle() && comp.labeled_vertices == 0 {
            for e in &comp.edges {
                current.remove(e);
            }
        }
    }
    Ok(current)
}

/// Result of a quotient with labels carried over.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub induced: Induced,
    pub labels: Labeling,
    /// For each surviving parent edge, its edge id in the quotient.
    pub edge_map: BTreeMap<usize, usize>,
}

/// `Γ/Γ_Z` with labels transported: labels on a collapsed component move to the
/// single vertex it collapses to, and so does the label of a boundary cycle that
/// lies entirely inside `Γ_Z`.
pub fn quotient(graph: &RibbonGraph, labels: &Labeling, z: &EdgeSet) -> Result<Quotient, SubsetError> {
    check_proper(graph, z)?;
    let sub = subgraph_unchecked(graph, z);
    let quot = quotient_unchecked(graph, z);
    let pairs = pairing_of(graph, &sub, &quot)?;
    let in_z = half_edge_mask(graph, z);

    let point_of_parent_vertex = |parent_h: usize| -> Point { quot.graph.vertex_point(quot.local_of(parent_h).unwrap()) };

    let mut new_labels: Vec<(String, Point)> = Vec::new();
    let comps = components_of(graph, labels, z);
    let comp_of = |h: usize| comps.iter().position(|c| c.half_edges.binary_search(&h).is_ok());
    // quotient vertices produced by each component of Γ_Z
    let mut produced: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for pair in &pairs {
        let c = comp_of(pair.cycle[0]).unwrap();
        produced[c].push(pair.vertex[0]);
    }
    for (name, point) in labels.iter() {
        let target = match point {
            Point::Vertex(h) => {
                let vertex = graph.vertex_of(h);
                if let Some(&outside) = vertex.iter().find(|&&x| !in_z[x]) {
                    if vertex.iter().all(|&x| !in_z[x]) {
                        point_of_parent_vertex(outside)
                    } else {
                        collapsed_target(name, comp_of(*vertex.iter().find(|&&x| in_z[x]).unwrap()), &produced)
                            .map(point_of_parent_vertex)?
                    }
                } else {
                    collapsed_target(name, comp_of(h), &produced).map(point_of_parent_vertex)?
                }
            }
            Point::Cusp(h) => {
                let cusp = graph.cusp_of(h);
                match cusp.iter().find(|&&x| !in_z[x]) {
                    Some(&outside) => quot.graph.cusp_point(quot.local_of(outside).unwrap()),
                    None => collapsed_target(name, comp_of(h), &produced).map(point_of_parent_vertex)?,
                }
            }
            Point::CircleSide(_) => unreachable!("ordinary graphs have no circle sides"),
        };
        if let Some((other, _)) = new_labels.iter().find(|(_, p)| *p == target) {
            return Err(SubsetError::LabelCollision(other.clone(), name.to_string()));
        }
        new_labels.push((name.to_string(), target));
    }
    let parent_index = graph.edge_index();
    let edge_map = quot
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(local, [a, _])| (parent_index[quot.half_edges[*a]], local))
        .collect();
    let labels = Labeling::from_pairs(new_labels)?;
    Ok(Quotient { induced: quot, labels, edge_map })
}

fn collapsed_target(name: &str, comp: Option<usize>, produced: &[Vec<usize>]) -> Result<usize, SubsetError> {
    let comp = comp.expect("collapsed point lies in a component of the subgraph");
    match produced[comp].as_slice() {
        [] => Err(SubsetError::LabelLost(name.to_string())),
        [single] => Ok(*single),
        _ => Err(SubsetError::LabelSplit(name.to_string())),
    }
}

/// One connected component after deleting unmarked vertices of valence two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedComponent {
    /// Becomes a semistable circle when every vertex was deleted.
    pub graph: RibbonGraph,
    /// Input half-edge of each reduced half-edge.
    pub origin: Vec<usize>,
    /// Input half-edges along each spliced edge, keyed by the smaller reduced
    /// half-edge of that edge and running from it to its partner. For a circle
    /// the single entry (key 0) is the cyclic chain starting at its least
    /// half-edge.
    pub chains: BTreeMap<usize, Vec<usize>>,
}

/// Deletes every vertex of valence two for which `keep` is false, splicing its edges.
pub fn reduce(graph: &RibbonGraph, keep: impl Fn(Point) -> bool) -> Vec<ReducedComponent> {
    let n = graph.half_edge_count();
    let mut deleted = vec![false; n];
    for v in graph.vertices() {
        if v.len() == 2 && !keep(Point::Vertex(v[0])) {
            for &h in &v {
                deleted[h] = true;
            }
        }
    }
    let s0 = graph.sigma0();
    let s1 = graph.sigma1();
    let mut out = Vec::new();
    for members in graph.components() {
        let kept: Vec<usize> = members.iter().copied().filter(|&h| !deleted[h]).collect();
        if kept.is_empty() {
            let start = members[0];
            let mut chain = vec![start];
            let mut h = s1.apply(start);
            while h != start {
                chain.push(h);
                let next = s0.apply(h);
                if next == start {
                    break;
                }
                chain.push(next);
                h = s1.apply(next);
            }
            out.push(ReducedComponent {
                graph: RibbonGraph::circle(),
                origin: vec![],
                chains: BTreeMap::from([(0, chain)]),
            });
            continue;
        }
        let mut local = vec![usize::MAX; n];
        for (i, &h) in kept.iter().enumerate() {
            local[h] = i;
        }
        let mut sigma1 = vec![usize::MAX; kept.len()];
        let mut chains = BTreeMap::new();
        for &a in &kept {
            if sigma1[local[a]] != usize::MAX {
                continue;
            }
            let mut chain = vec![a];
            let mut h = s1.apply(a);
            chain.push(h);
            while deleted[h] {
                h = s0.apply(h);
                chain.push(h);
                h = s1.apply(h);
                chain.push(h);
            }
            sigma1[local[a]] = local[h];
            sigma1[local[h]] = local[a];
            if chain.len() > 2 {
                chains.insert(local[a].min(local[h]), if local[a] < local[h] {
                    chain
                } else {
                    chain.into_iter().rev().collect()
                });
            }
        }
        let sigma0: Vec<usize> = kept.iter().map(|&h| local[s0.apply(h)]).collect();
        let g = RibbonGraph::from_permutations(
            Permutation::from_images(sigma0).unwrap(),
            Permutation::from_images(sigma1).unwrap(),
        )
        .expect("reduction of a valid graph is valid");
        out.push(ReducedComponent { graph: g, origin: kept, chains });
    }
    out
}

/// Deletes unlabeled vertices of valence two.
pub fn reduction(graph: &RibbonGraph, labels: &Labeling) -> Vec<ReducedComponent> {
    reduce(graph, |p| labels.is_labeled(p))
}

/// The cyclic sequence of half-edges visited by `p` from `h`.
pub fn cycle_from(p: &Permutation, h: usize) -> Vec<usize> {
    orbit(p, h)
}
