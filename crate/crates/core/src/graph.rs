//! Permutation-encoded ribbon graphs.
//!
//! A ribbon graph on the half-edges `0..n` is a pair of permutations:
//! `sigma0`, whose cycles are the vertices with their cyclic orders, and the
//! fixed-point-free involution `sigma1`, whose cycles are the edges. The
//! boundary cycles (cusps) are the cycles of `sigma_inf = sigma0⁻¹ ∘ sigma1`,
//! where `sigma1` is applied first.
//!
//! The semistable circle, a single edge with no vertices, has no half-edges and
//! is a dedicated variant (see [`RibbonGraph::circle`]).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("half-edge {0} is out of range")]
    OutOfRange(usize),
    #[error("half-edge {0} appears in two vertex cycles")]
    OverlappingCycles(usize),
    #[error("half-edge {0} is paired with itself")]
    EdgeFixedPoint(usize),
    #[error("half-edge {0} appears in two edges")]
    OverlappingEdges(usize),
    #[error("half-edge {0} is not in any vertex cycle")]
    NotInVertex(usize),
    #[error("half-edge {0} is not in any edge")]
    NotInEdge(usize),
    #[error("sigma0 and sigma1 act on different numbers of half-edges")]
    SizeMismatch,
    #[error("sigma1 is not a fixed-point-free involution")]
    NotAnInvolution,
}

/// A point of a ribbon graph that may carry a label or be a node.
///
/// Vertices and cusps are named by the least half-edge of their orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Vertex(usize),
    Cusp(usize),
    /// One of the two boundary cycles of a semistable circle.
    CircleSide(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentType {
    pub genus: u32,
    pub cusps: usize,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologicalType {
    pub genus: u32,
    pub cusp_count: usize,
    pub components: Vec<ComponentType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<Vec<usize>>,
    pub cusps: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct RibbonGraph {
    sigma0: Permutation,
    sigma1: Permutation,
    sigma_inf: Permutation,
    circle: bool,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    sigma0: Vec<usize>,
    sigma1: Vec<usize>,
    circle: bool,
}

impl From<RibbonGraph> for RawGraph {
    fn from(g: RibbonGraph) -> Self {
        Self { sigma0: g.sigma0.images().to_vec(), sigma1: g.sigma1.images().to_vec(), circle: g.circle }
    }
}

impl TryFrom<RawGraph> for RibbonGraph {
    type Error = String;

    fn try_from(raw: RawGraph) -> Result<Self, String> {
        if raw.circle {
            return Ok(Self::circle());
        }
        let s0 = Permutation::from_images(raw.sigma0).map_err(|e| e.to_string())?;
        let s1 = Permutation::from_images(raw.sigma1).map_err(|e| e.to_string())?;
        Self::from_permutations(s0, s1).map_err(|e| e.to_string())
    }
}

impl std::fmt::Debug for RibbonGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.circle {
            return write!(f, "RibbonGraph(circle)");
        }
        write!(f, "RibbonGraph {{ sigma0: {}, sigma1: {} }}", self.sigma0, self.sigma1)
    }
}

impl RibbonGraph {
    /// Validates vertex cycles and edge pairs on `0..half_edge_count`.
    pub fn build(
        half_edge_count: usize,
        vertex_cycles: &[Vec<usize>],
        edge_pairs: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let n = half_edge_count;
        let mut in_vertex = vec![false; n];
        let mut sigma0 = vec![usize::MAX; n];
        for cycle in vertex_cycles {
            for (pos, &h) in cycle.iter().enumerate() {
                if h >= n {
                    return Err(GraphError::OutOfRange(h));
                }
                if in_vertex[h] {
                    return Err(GraphError::OverlappingCycles(h));
                }
                in_vertex[h] = true;
                sigma0[h] = cycle[(pos + 1) % cycle.len()];
            }
        }
        let mut sigma1 = vec![usize::MAX; n];
        for &(a, b) in edge_pairs {
            for h in [a, b] {
                if h >= n {
                    return Err(GraphError::OutOfRange(h));
                }
            }
            if a == b {
                return Err(GraphError::EdgeFixedPoint(a));
            }
            for h in [a, b] {
                if sigma1[h] != usize::MAX {
                    return Err(GraphError::OverlappingEdges(h));
                }
            }
            sigma1[a] = b;
            sigma1[b] = a;
        }
        if let Some(h) = (0..n).find(|&h| !in_vertex[h]) {
            return Err(GraphError::NotInVertex(h));
        }
        if let Some(h) = (0..n).find(|&h| sigma1[h] == usize::MAX) {
            return Err(GraphError::NotInEdge(h));
        }
        let sigma0 = Permutation::from_images(sigma0).expect("vertex cycles form a permutation");
        let sigma1 = Permutation::from_images(sigma1).expect("edge pairs form a permutation");
        Self::from_permutations(sigma0, sigma1)
    }

    pub fn from_permutations(sigma0: Permutation, sigma1: Permutation) -> Result<Self, GraphError> {
        if sigma0.size() != sigma1.size() {
            return Err(GraphError::SizeMismatch);
        }
        if !sigma1.is_involution_without_fixed_points() {
            return Err(GraphError::NotAnInvolution);
        }
        let sigma_inf = sigma0.inverse().compose(&sigma1);
        Ok(Self { sigma0, sigma1, sigma_inf, circle: false })
    }

    /// Same as [`RibbonGraph::from_permutations`] but starting from `sigma_inf`,
    /// using `sigma0 = sigma1 ∘ sigma_inf⁻¹`.
    pub fn from_boundary(sigma_inf: Permutation, sigma1: Permutation) -> Result<Self, GraphError> {
        if sigma_inf.size() != sigma1.size() {
            return Err(GraphError::SizeMismatch);
        }
        let sigma0 = sigma1.compose(&sigma_inf.inverse());
        Self::from_permutations(sigma0, sigma1)
    }

    /// The semistable circle: one edge, no vertices, two boundary cycles.
    pub fn circle() -> Self {
        Self {
            sigma0: Permutation::identity(0),
            sigma1: Permutation::identity(0),
            sigma_inf: Permutation::identity(0),
            circle: true,
        }
    }

    pub fn empty() -> Self {
        Self {
            sigma0: Permutation::identity(0),
            sigma1: Permutation::identity(0),
            sigma_inf: Permutation::identity(0),
            circle: false,
        }
    }

    #[inline]
    pub fn is_circle(&self) -> bool {
        self.circle
    }

    #[inline]
    pub fn half_edge_count(&self) -> usize {
        self.sigma0.size()
    }

    pub fn sigma0(&self) -> &Permutation {
        &self.sigma0
    }

    pub fn sigma1(&self) -> &Permutation {
        &self.sigma1
    }

    pub fn sigma_inf(&self) -> &Permutation {
        &self.sigma_inf
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.sigma0.cycles()
    }

    /// Edges ordered by least half-edge, each as `[least, partner]`.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.half_edge_count())
            .filter(|&h| h < self.sigma1.apply(h))
            .map(|h| [h, self.sigma1.apply(h)])
            .collect()
    }

    pub fn cusps(&self) -> Vec<Vec<usize>> {
        self.sigma_inf.cycles()
    }

    /// Edge index (position in [`RibbonGraph::edges`]) of every half-edge.
    pub fn edge_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.half_edge_count()];
        for (e, [a, b]) in self.edges().into_iter().enumerate() {
            index[a] = e;
            index[b] = e;
        }
        index
    }

    pub fn orbits(&self) -> Orbits {
        if self.circle {
            return Orbits { vertices: vec![], edges: vec![vec![]], cusps: vec![vec![], vec![]] };
        }
        Orbits {
            vertices: self.vertices(),
            edges: self.edges().into_iter().map(|e| e.to_vec()).collect(),
            cusps: self.cusps(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma0.cycles().len()
    }

    pub fn edge_count(&self) -> usize {
        if self.circle {
            1
        } else {
            self.half_edge_count() / 2
        }
    }

    pub fn cusp_count(&self) -> usize {
        if self.circle {
            2
        } else {
            self.sigma_inf.cycles().len()
        }
    }

    /// Valence of the vertex containing `h`.
    pub fn valence(&self, h: usize) -> usize {
        self.vertex_of(h).len()
    }

    pub fn vertex_of(&self, h: usize) -> Vec<usize> {
        orbit(&self.sigma0, h)
    }

    pub fn cusp_of(&self, h: usize) -> Vec<usize> {
        orbit(&self.sigma_inf, h)
    }

    /// The canonical point for the vertex containing `h`.
    pub fn vertex_point(&self, h: usize) -> Point {
        Point::Vertex(*self.vertex_of(h).iter().min().unwrap())
    }

    pub fn cusp_point(&self, h: usize) -> Point {
        Point::Cusp(*self.cusp_of(h).iter().min().unwrap())
    }

    /// Every vertex and cusp as a canonical point, vertices first.
    pub fn points(&self) -> Vec<Point> {
        if self.circle {
            return vec![Point::CircleSide(0), Point::CircleSide(1)];
        }
        let mut points: Vec<Point> = self.vertices().iter().map(|v| Point::Vertex(v[0])).collect();
        points.extend(self.cusps().iter().map(|c| Point::Cusp(c[0])));
        points
    }

    /// Whether `point` names an existing vertex or cusp in canonical form.
    pub fn has_point(&self, point: Point) -> bool {
        match point {
            Point::CircleSide(side) => self.circle && side < 2,
            Point::Vertex(h) => !self.circle && h < self.half_edge_count() && self.vertex_point(h) == point,
            Point::Cusp(h) => !self.circle && h < self.half_edge_count() && self.cusp_point(h) == point,
        }
    }

    /// Half-edge sets of the connected components, ordered by least half-edge.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.half_edge_count();
        let mut comp = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let h = members[i];
                i += 1;
                for next in [self.sigma0.apply(h), self.sigma1.apply(h)] {
                    if comp[next] == usize::MAX {
                        comp[next] = id;
                        members.push(next);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.circle || self.components().len() <= 1
    }

    /// Per-component Euler characteristic, cusp count and genus.
    pub fn topological_type(&self) -> TopologicalType {
        if self.circle {
            let c = ComponentType { genus: 0, cusps: 2, euler: 0 };
            return TopologicalType { genus: 0, cusp_count: 2, components: vec![c] };
        }
        let vertex_index = self.sigma0.cycle_index();
        let cusp_index = self.sigma_inf.cycle_index();
        let mut components = Vec::new();
        for members in self.components() {
            let mut vertices: Vec<usize> = members.iter().map(|&h| vertex_index[h]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let mut cusps: Vec<usize> = members.iter().map(|&h| cusp_index[h]).collect();
            cusps.sort_unstable();
            cusps.dedup();
            let euler = vertices.len() as i64 - (members.len() / 2) as i64;
            let twice_genus = 2 - euler - cusps.len() as i64;
            assert!(
                twice_genus >= 0 && twice_genus % 2 == 0,
                "corrupted ribbon graph: 2 - chi - n = {twice_genus}"
            );
            components.push(ComponentType { genus: (twice_genus / 2) as u32, cusps: cusps.len(), euler });
        }
        TopologicalType {
            genus: components.iter().map(|c| c.genus).sum(),
            cusp_count: components.iter().map(|c| c.cusps).sum(),
            components,
        }
    }

    /// Swaps the roles of vertices and boundary cycles.
    pub fn dual(&self) -> Self {
        if self.circle {
            return self.clone();
        }
        Self::from_permutations(self.sigma_inf.clone(), self.sigma1.clone())
            .expect("dual of a valid ribbon graph is valid")
    }

    /// Renames half-edge `h` to `relabel[h]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Self {
        if self.circle {
            return self.clone();
        }
        Self::from_permutations(self.sigma0.relabeled(relabel), self.sigma1.relabeled(relabel))
            .expect("relabeling preserves validity")
    }

    /// The subgraph spanned by a union of components, renumbered densely in
    /// increasing order of the original half-edges, which are returned alongside.
    pub fn induced(&self, half_edges: &[usize]) -> (Self, Vec<usize>) {
        let mut kept = half_edges.to_vec();
        kept.sort_unstable();
        let mut local = vec![usize::MAX; self.half_edge_count()];
        for (i, &h) in kept.iter().enumerate() {
            local[h] = i;
        }
        let s0 = kept.iter().map(|&h| local[self.sigma0.apply(h)]).collect();
        let s1 = kept.iter().map(|&h| local[self.sigma1.apply(h)]).collect();
        let graph = Self::from_permutations(
            Permutation::from_images(s0).expect("closed under sigma0"),
            Permutation::from_images(s1).expect("closed under sigma1"),
        )
        .expect("induced subgraph is valid");
        (graph, kept)
    }
}

pub(crate) fn orbit(p: &Permutation, h: usize) -> Vec<usize> {
    let mut out = vec![h];
    let mut x = p.apply(h);
    while x != h {
        out.push(x);
        x = p.apply(x);
    }
    out
}

/// Small graphs used throughout the examples and tests.
pub mod fixtures {
    use super::*;

    /// The theta graph with h1..h6 mapped to 0..5.
    pub fn theta() -> RibbonGraph {
        RibbonGraph::build(6, &[vec![0, 4, 2], vec![1, 5, 3]], &[(0, 1), (2, 3), (4, 5)]).unwrap()
    }

    pub fn single_edge() -> RibbonGraph {
        RibbonGraph::build(2, &[vec![0], vec![1]], &[(0, 1)]).unwrap()
    }

    pub fn loop_graph() -> RibbonGraph {
        RibbonGraph::build(2, &[vec![0, 1]], &[(0, 1)]).unwrap()
    }
}
