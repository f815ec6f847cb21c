//! Blowing up a vertex into a polygon and gluing its half-edges onto a boundary
//! cycle.
//!
//! A gluing pattern is a cyclic word read along the boundary cycle `c`.
//! `Pos(i)` is the `i`-th half-edge of the blown-up vertex (in `sigma0` order),
//! `Neg(j)` is the corner after `sigma_inf^{-j}(p0)` on `c`, and `Merged(i, j)`
//! places half-edge `i` in that corner. Words start at the marker carrying
//! `Pos(0)` (or `Neg(0)` when there are no positive vertices), which fixes the
//! rotation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::RibbonGraph;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("half-edge {0} is not in the graph")]
    NotAVertex(usize),
    #[error("pattern has {pattern} positive vertices but the vertex has valence {valence}")]
    PositiveMismatch { pattern: usize, valence: usize },
    #[error("pattern has {pattern} negative vertices but the cycle has {cycle}")]
    NegativeMismatch { pattern: usize, cycle: usize },
    #[error("pattern word does not respect the cyclic orders")]
    Malformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Marker {
    Pos(usize),
    Neg(usize),
    Merged(usize, usize),
}

impl Marker {
    fn pos(self) -> Option<usize> {
        match self {
            Marker::Pos(i) | Marker::Merged(i, _) => Some(i),
            Marker::Neg(_) => None,
        }
    }

    fn neg(self) -> Option<usize> {
        match self {
            Marker::Neg(j) | Marker::Merged(_, j) => Some(j),
            Marker::Pos(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluingPattern {
    pub positive: usize,
    pub negative: usize,
    pub word: Vec<Marker>,
}

impl GluingPattern {
    /// Projections onto positive and negative markers are rotations of `0..a` and `0..b`.
    pub fn is_valid(&self) -> bool {
        let pos: Vec<usize> = self.word.iter().filter_map(|m| m.pos()).collect();
        let neg: Vec<usize> = self.word.iter().filter_map(|m| m.neg()).collect();
        let rotation = |seq: &[usize], n: usize| {
            seq.len() == n && (n == 0 || seq.iter().enumerate().all(|(t, &x)| x == (seq[0] + t) % n))
        };
        let starts = match self.word.first() {
            None => true,
            Some(&m) if self.positive > 0 => m.pos() == Some(0),
            Some(&m) => m.neg() == Some(0),
        };
        starts && rotation(&pos, self.positive) && rotation(&neg, self.negative)
    }
}

/// Replaces the vertex containing `h` by a polygon whose vertices are trivalent,
/// each carrying one original half-edge. A valence-one vertex becomes a vertex
/// with a loop. New half-edges are numbered after the existing ones. Returns the
/// graph and a half-edge on the inner boundary cycle of the polygon.
pub fn blowup_vertex(graph: &RibbonGraph, h: usize) -> Result<(RibbonGraph, usize), GluingError> {
    if graph.is_circle() || h >= graph.half_edge_count() {
        return Err(GluingError::NotAVertex(h));
    }
    let n = graph.half_edge_count();
    let around = graph.vertex_of(h);
    let d = around.len();
    let a = |i: usize| n + 2 * i;
    let b = |i: usize| n + 2 * i + 1;
    let mut sigma0: Vec<usize> = graph.sigma0().images().to_vec();
    let mut sigma1: Vec<usize> = graph.sigma1().images().to_vec();
    sigma0.resize(n + 2 * d, 0);
    sigma1.resize(n + 2 * d, 0);
    for i in 0..d {
        let prev = (i + d - 1) % d;
        // polygon vertex i is (h_i, a_i, b_{i-1})
        sigma0[around[i]] = a(i);
        sigma0[a(i)] = b(prev);
        sigma0[b(prev)] = around[i];
        sigma1[a(i)] = b(i);
        sigma1[b(i)] = a(i);
    }
    let g = RibbonGraph::from_permutations(
        Permutation::from_images(sigma0).unwrap(),
        Permutation::from_images(sigma1).unwrap(),
    )
    .expect("blowup is a valid graph");
    Ok((g, a(0)))
}

/// All gluing patterns of a positive cycle with `a` vertices against a
/// negative cycle with `b` vertices.
pub fn enumerate_gluings(a: usize, b: usize) -> Vec<GluingPattern> {
    if a == 0 {
        return vec![GluingPattern { positive: 0, negative: b, word: (0..b).map(Marker::Neg).collect() }];
    }
    let mut words = BTreeSet::new();
    let pos: Vec<usize> = (0..a).collect();
    for s in 0..b.max(1) {
        let neg: Vec<usize> = (0..b).map(|t| (s + t) % b).collect();
        let mut word = Vec::new();
        interleave(&pos, &neg, &mut word, &mut words);
    }
    words
        .into_iter()
        .map(|word| GluingPattern { positive: a, negative: b, word })
        .filter(GluingPattern::is_valid)
        .collect()
}

fn interleave(pos: &[usize], neg: &[usize], word: &mut Vec<Marker>, out: &mut BTreeSet<Vec<Marker>>) {
    if pos.is_empty() && neg.is_empty() {
        out.insert(word.clone());
        return;
    }
    let first = word.is_empty();
    if let Some((&i, rest)) = pos.split_first() {
        word.push(Marker::Pos(i));
        interleave(rest, neg, word, out);
        word.pop();
        if let Some((&j, nrest)) = neg.split_first() {
            word.push(Marker::Merged(i, j));
            interleave(rest, nrest, word, out);
            word.pop();
        }
    }
    if !first {
        if let Some((&j, rest)) = neg.split_first() {
            word.push(Marker::Neg(j));
            interleave(pos, rest, word, out);
            word.pop();
        }
    }
}

/// Removes the vertex of `outer` containing `v` and attaches its half-edges to
/// the boundary cycle of `inner` through `p0` (or around `inner` when it is a
/// circle) as the pattern prescribes. Half-edges of `outer` keep their ids,
/// those of `inner` are shifted by `outer.half_edge_count()`, and arc vertices
/// get fresh ids after both.
pub fn glue(
    outer: &RibbonGraph,
    v: usize,
    inner: &RibbonGraph,
    p0: Option<usize>,
    pattern: &GluingPattern,
) -> Result<RibbonGraph, GluingError> {
    if outer.is_circle() || v >= outer.half_edge_count() {
        return Err(GluingError::NotAVertex(v));
    }
    if !pattern.is_valid() {
        return Err(GluingError::Malformed);
    }
    let attached = outer.vertex_of(v);
    if attached.len() != pattern.positive {
        return Err(GluingError::PositiveMismatch { pattern: pattern.positive, valence: attached.len() });
    }
    let shift = outer.half_edge_count();
    let corners: Vec<usize> = match (inner.is_circle(), p0) {
        (true, _) => Vec::new(),
        (false, Some(p)) if p < inner.half_edge_count() => {
            let back = inner.sigma_inf().inverse();
            let mut cycle = vec![p];
            let mut x = back.apply(p);
            while x != p {
                cycle.push(x);
                x = back.apply(x);
            }
            cycle.into_iter().map(|x| x + shift).collect()
        }
        (false, _) => return Err(GluingError::NotAVertex(p0.unwrap_or(usize::MAX))),
    };
    if corners.len() != pattern.negative {
        return Err(GluingError::NegativeMismatch { pattern: pattern.negative, cycle: corners.len() });
    }

    let mut sigma0: Vec<usize> = outer.sigma0().images().to_vec();
    let mut sigma1: Vec<usize> = outer.sigma1().images().to_vec();
    sigma0.extend(inner.sigma0().images().iter().map(|&x| x + shift));
    sigma1.extend(inner.sigma1().images().iter().map(|&x| x + shift));
    let original0 = sigma0.clone();

    // runs of positive markers between consecutive corners
    let b = corners.len();
    let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); b.max(1)];
    let mut merged: Vec<Option<usize>> = vec![None; b];
    let mut current: Option<usize> = None;
    let mut leading = Vec::new();
    for &m in &pattern.word {
        match m {
            Marker::Neg(j) => current = Some(j),
            Marker::Merged(i, j) => {
                merged[j] = Some(attached[i]);
                current = Some(j);
            }
            Marker::Pos(i) => match current {
                Some(j) => arcs[j].push(attached[i]),
                None => leading.push(attached[i]),
            },
        }
    }
    if b == 0 {
        arcs[0] = leading;
        let hs = &arcs[0];
        let m = hs.len();
        let base = sigma0.len();
        sigma0.resize(base + 2 * m, 0);
        sigma1.resize(base + 2 * m, 0);
        for (t, &h) in hs.iter().enumerate() {
            let u = base + 2 * t;
            let u2 = u + 1;
            sigma0[u] = h;
            sigma0[h] = u2;
            sigma0[u2] = u;
            let next = base + 2 * ((t + 1) % m);
            sigma1[u2] = next;
            sigma1[next] = u2;
        }
    } else {
        // positive markers before the first corner belong to the arc leaving the last one
        let last = pattern.word.iter().rev().find_map(|m| m.neg()).unwrap();
        let mut wrapped = std::mem::take(&mut arcs[last]);
        wrapped.extend(leading);
        arcs[last] = wrapped;
        for j in 0..b {
            let p = corners[j];
            if let Some(h) = merged[j] {
                let q = sigma0[p];
                sigma0[p] = h;
                sigma0[h] = q;
            }
            if arcs[j].is_empty() {
                continue;
            }
            let x = original0[p];
            let y = sigma1[x];
            let mut prev = x;
            for &h in &arcs[j] {
                let u = sigma0.len();
                let u2 = u + 1;
                sigma0.extend([h, u]);
                sigma0[h] = u2;
                sigma1.extend([prev, 0]);
                sigma1[prev] = u;
                prev = u2;
            }
            sigma1[prev] = y;
            sigma1[y] = prev;
        }
    }
    RibbonGraph::from_permutations(
        Permutation::from_images(sigma0).map_err(|_| GluingError::Malformed)?,
        Permutation::from_images(sigma1).map_err(|_| GluingError::Malformed)?,
    )
    .map_err(|_| GluingError::Malformed)
}
