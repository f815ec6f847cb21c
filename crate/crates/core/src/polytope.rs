//! Real blowups of simplices along face filtrations, realized as iterated truncations
//! in exact rational barycentric coordinates.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("simplex needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("element {element} of a face is outside 1..={n}")]
    OutOfRange { element: usize, n: usize },
    #[error("empty face")]
    EmptyFace,
}

/// Faces of `Δ^{n−1}` to blow up, indexed by their vertex sets in `1..=n` and
/// ordered by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupFiltration {
    pub n: usize,
    pub subsets: Vec<BTreeSet<usize>>,
}

impl BlowupFiltration {
    /// Returns the filtration and the subsets dropped for having more than `n − 2` elements.
    pub fn new(
        n: usize,
        subsets: impl IntoIterator<Item = BTreeSet<usize>>,
    ) -> Result<(Self, Vec<BTreeSet<usize>>), PolytopeError> {
        if n < 2 {
            return Err(PolytopeError::TooSmall(n));
        }
        let mut kept = BTreeSet::new();
        let mut dropped = Vec::new();
        for s in subsets {
            if s.is_empty() {
                return Err(PolytopeError::EmptyFace);
            }
            if let Some(&element) = s.iter().find(|&&i| i == 0 || i > n) {
                return Err(PolytopeError::OutOfRange { element, n });
            }
            if s.len() > n - 2 {
                log::info!("dropping {s:?}: blowing up a face of codimension < 2 does nothing");
                dropped.push(s);
            } else {
                kept.insert((s.len(), s.into_iter().collect::<Vec<_>>()));
            }
        }
        let subsets = kept.into_iter().map(|(_, s)| s.into_iter().collect()).collect();
        Ok((Self { n, subsets }, dropped))
    }

    /// Every nonempty subset of `[n]`.
    pub fn full(n: usize) -> Result<(Self, Vec<BTreeSet<usize>>), PolytopeError> {
        let all = (1u64..1 << n).map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect());
        Self::new(n, all)
    }

    pub fn empty(n: usize) -> Result<Self, PolytopeError> {
        Ok(Self::new(n, [])?.0)
    }
}

/// Truncation depth `scale · 3^{−(s+2)} · (1 − 1/(2p_i))` for the `i`-th cut, a face of
/// dimension `s`, where `p_i` is the `i`-th odd prime. The prime factors keep the cutting
/// hyperplanes in general position; without them distinct cuts can meet in one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthSchedule {
    pub scale: Rational,
}

impl Default for DepthSchedule {
    fn default() -> Self {
        Self { scale: Rational::one() }
    }
}

impl DepthSchedule {
    pub fn depth(&self, dimension: usize, index: usize) -> Rational {
        let p = Rational::from_integer(odd_prime(index).into());
        let factor = Rational::one() - (Rational::from_integer(2.into()) * p).recip();
        self.scale.clone() * factor / Rational::from_integer(3.into()).pow(dimension as i32 + 2)
    }

    pub fn halved(&self) -> Self {
        Self { scale: self.scale.clone() / Rational::from_integer(2.into()) }
    }
}

fn odd_prime(index: usize) -> u64 {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)).nth(index).unwrap()
}

/// Halfspace `Σ_{i ∈ support} x_i ≥ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub support: BTreeSet<usize>,
    pub bound: Rational,
}

impl Halfspace {
    fn slack(&self, x: &[Rational]) -> Rational {
        self.support.iter().map(|&i| &x[i]).sum::<Rational>() - &self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    pub dimension: usize,
    pub coordinates: Vec<Vec<Rational>>,
    /// Halfspaces tight at each vertex.
    pub tight: Vec<BTreeSet<usize>>,
    pub halfspaces: Vec<Halfspace>,
    /// Proper faces by dimension, each a sorted vertex list.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// For every face, the indices of the faces one dimension lower that it contains.
    pub incidence: Vec<Vec<Vec<usize>>>,
}

pub fn f_vector(lattice: &FaceLattice) -> Vec<usize> {
    lattice.faces.iter().map(Vec::len).collect()
}

impl FaceLattice {
    pub fn f_vector(&self) -> Vec<usize> {
        f_vector(self)
    }

    /// `Σ (−1)^i f_i = 1 − (−1)^d`.
    pub fn satisfies_euler(&self) -> bool {
        let d = self.dimension as i64;
        let alt: i64 = self.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
        alt == 1 - if d % 2 == 0 { 1 } else { -1 }
    }

    /// Every vertex lies on exactly `dimension` facets.
    pub fn is_simple(&self) -> bool {
        self.tight.iter().all(|t| t.len() == self.dimension)
    }

    /// Faces described by the halfspaces tight at their vertices; independent of coordinates.
    pub fn signature(&self) -> Vec<BTreeSet<Vec<BTreeSet<usize>>>> {
        self.faces
            .iter()
            .map(|faces| {
                faces
                    .iter()
                    .map(|f| {
                        let mut labels: Vec<_> = f.iter().map(|&v| self.tight[v].clone()).collect();
                        labels.sort();
                        labels
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks the face poset: unique top, every face of dimension `k > 0` covers at
    /// least `k + 1` faces, and every vertex set is the intersection of the facets containing it.
    pub fn is_graded_lattice(&self) -> bool {
        let d = self.dimension;
        if d == 0 || self.faces.len() != d {
            return false;
        }
        let facets: Vec<BTreeSet<usize>> = self.faces[d - 1].iter().map(|f| f.iter().copied().collect()).collect();
        for (k, faces) in self.faces.iter().enumerate() {
            for (i, f) in faces.iter().enumerate() {
                if k > 0 && self.incidence[k][i].len() < k + 1 {
                    return false;
                }
                let set: BTreeSet<usize> = f.iter().copied().collect();
                let mut meet: Option<BTreeSet<usize>> = None;
                for facet in facets.iter().filter(|x| set.is_subset(x)) {
                    meet = Some(match meet {
                        None => facet.clone(),
                        Some(m) => m.intersection(facet).copied().collect(),
                    });
                }
                if meet.is_some_and(|m| m != set) {
                    return false;
                }
            }
        }
        true
    }
}

/// Affine rank of a point set.
fn affine_rank(points: &[&Vec<Rational>]) -> usize {
    let Some((first, rest)) = points.split_first() else { return 0 };
    let mut rows: Vec<Vec<Rational>> =
        rest.iter().map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect()).collect();
    let cols = first.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &rows[rank][c];
                for j in c..cols {
                    let delta = &factor * &rows[rank][j];
                    rows[r][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

struct Cutter {
    points: Vec<Vec<Rational>>,
    tight: Vec<BTreeSet<usize>>,
    dimension: usize,
}

impl Cutter {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        let common: BTreeSet<usize> = self.tight[u].intersection(&self.tight[v]).copied().collect();
        common.len() + 1 >= self.dimension
            && (0..self.points.len()).all(|w| w == u || w == v || !common.is_subset(&self.tight[w]))
    }

    fn cut(&mut self, index: usize, h: &Halfspace) {
        let slack: Vec<Rational> = self.points.iter().map(|p| h.slack(p)).collect();
        assert!(slack.iter().any(Signed::is_negative), "truncation of {:?} removes nothing", h.support);
        assert!(slack.iter().any(Signed::is_positive), "truncation of {:?} removes everything", h.support);
        let mut points = Vec::new();
        let mut tight = Vec::new();
        for (v, s) in slack.iter().enumerate() {
            if !s.is_negative() {
                let mut t = self.tight[v].clone();
                if s.is_zero() {
                    t.insert(index);
                }
                points.push(self.points[v].clone());
                tight.push(t);
            }
        }
        for u in 0..self.points.len() {
            for v in 0..self.points.len() {
                if slack[u].is_positive() && slack[v].is_negative() && self.adjacent(u, v) {
                    let t = &slack[u] / (&slack[u] - &slack[v]);
                    let p = self.points[u].iter().zip(&self.points[v]).map(|(a, b)| a + &t * (b - a)).collect();
                    let mut common: BTreeSet<usize> = self.tight[u].intersection(&self.tight[v]).copied().collect();
                    common.insert(index);
                    points.push(p);
                    tight.push(common);
                }
            }
        }
        self.points = points;
        self.tight = tight;
    }
}

pub fn blowup_simplex(filtration: &BlowupFiltration) -> FaceLattice {
    blowup_simplex_with(filtration, &DepthSchedule::default())
}

/// Truncates `Δ^{n−1}` along each face of the filtration in order, then reads off the face lattice.
pub fn blowup_simplex_with(filtration: &BlowupFiltration, schedule: &DepthSchedule) -> FaceLattice {
    let n = filtration.n;
    let dimension = n - 1;
    let mut halfspaces: Vec<Halfspace> =
        (0..n).map(|i| Halfspace { support: BTreeSet::from([i]), bound: Rational::zero() }).collect();
    let mut cutter = Cutter {
        points: (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect(),
        tight: (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect(),
        dimension,
    };
    for (index, s) in filtration.subsets.iter().enumerate() {
        let h = Halfspace {
            support: (0..n).filter(|i| !s.contains(&(i + 1))).collect(),
            bound: schedule.depth(s.len() - 1, index),
        };
        cutter.cut(halfspaces.len(), &h);
        halfspaces.push(h);
    }
    let order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..cutter.points.len()).collect();
        idx.sort_by(|&a, &b| cutter.points[a].cmp(&cutter.points[b]));
        idx
    };
    let coordinates: Vec<Vec<Rational>> = order.iter().map(|&i| cutter.points[i].clone()).collect();
    let tight: Vec<BTreeSet<usize>> = order.iter().map(|&i| cutter.tight[i].clone()).collect();

    let mut by_set: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for j in 0..halfspaces.len() {
        let set: Vec<usize> = (0..coordinates.len()).filter(|&v| tight[v].contains(&j)).collect();
        let pts: Vec<&Vec<Rational>> = set.iter().map(|&v| &coordinates[v]).collect();
        if affine_rank(&pts) + 1 == dimension && !by_set.contains_key(&set) {
            by_set.insert(set.clone(), dimension - 1);
            frontier.push(set);
        }
    }
    let facets = frontier.clone();
    while let Some(face) = frontier.pop() {
        for facet in &facets {
            let meet: Vec<usize> = face.iter().copied().filter(|v| facet.binary_search(v).is_ok()).collect();
            if !meet.is_empty() && meet != face && !by_set.contains_key(&meet) {
                let pts: Vec<&Vec<Rational>> = meet.iter().map(|&v| &coordinates[v]).collect();
                by_set.insert(meet.clone(), affine_rank(&pts));
                frontier.push(meet);
            }
        }
    }
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dimension];
    for (set, dim) in by_set {
        faces[dim].push(set);
    }
    for f in &mut faces {
        f.sort();
    }
    let incidence = (0..dimension)
        .map(|k| {
            faces[k]
                .iter()
                .map(|f| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..faces[k - 1].len())
                        .filter(|&i| faces[k - 1][i].iter().all(|v| f.binary_search(v).is_ok()))
                        .collect()
                })
                .collect()
        })
        .collect();
    FaceLattice { dimension, coordinates, tight, halfspaces, faces, incidence }
}
