//! Generation of labeled ribbon graphs of a given topological type.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::canon::{canonical_form, relabel_graph, CanonicalForm};
use crate::graph::{Point, RibbonGraph};
use crate::perm::Permutation;
use crate::subsets::Labeling;

/// Which graphs count as cells of the open complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphFilter {
    pub genus: u32,
    pub labels: usize,
    pub min_valence: usize,
    /// Labels may also sit on vertices (points with zero decoration).
    pub vertex_labels: bool,
}

pub fn label_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

impl GraphFilter {
    fn vertex_range(&self, half_edges: usize) -> (i64, i64) {
        // V - E + C = 2 - 2g with 1 <= C <= n
        let e = (half_edges / 2) as i64;
        let base = 2 - 2 * self.genus as i64 + e;
        let n = self.labels as i64;
        if self.vertex_labels {
            (base - n, base - 1)
        } else {
            (base - n, base - n)
        }
    }

    fn part_min(&self) -> usize {
        if self.vertex_labels {
            1
        } else {
            self.min_valence.max(1)
        }
    }

    /// Canonical labeled versions of one graph, if it has the right type.
    pub fn admit(&self, graph: &RibbonGraph) -> Vec<(CanonicalForm, RibbonGraph, Labeling)> {
        if !graph.is_connected() || graph.half_edge_count() == 0 {
            return Vec::new();
        }
        let t = graph.topological_type();
        let cusps = graph.cusps();
        if t.genus != self.genus || cusps.len() > self.labels {
            return Vec::new();
        }
        if !self.vertex_labels && cusps.len() != self.labels {
            return Vec::new();
        }
        let vertices = graph.vertices();
        let names = label_names(self.labels);
        let extra = self.labels - cusps.len();
        let mut out = BTreeMap::new();
        // labels on vertices: choose an ordered set of `extra` distinct vertices
        let mut chosen: Vec<usize> = Vec::new();
        let mut pick = |chosen: &[usize]| {
            let mut labeled = vec![false; vertices.len()];
            for &v in chosen {
                labeled[v] = true;
            }
            let fine = vertices.iter().enumerate().all(|(v, around)| {
                labeled[v] || (around.len() >= self.min_valence && around.len() >= 3)
            });
            if !fine {
                return;
            }
            let mut points: Vec<Point> = cusps.iter().map(|c| Point::Cusp(c[0])).collect();
            points.extend(chosen.iter().map(|&v| Point::Vertex(vertices[v][0])));
            for perm in permutations(points.len()) {
                let labels =
                    Labeling::from_pairs(perm.iter().map(|&i| names[i].clone()).zip(points.iter().copied())).unwrap();
                let (form, relabel) = canonical_form(graph, &labels);
                out.entry(form).or_insert_with(|| {
                    let (g, x) = relabel_graph(graph, &labels, &relabel);
                    (g, x)
                });
            }
        };
        choose(vertices.len(), extra, &mut chosen, &mut pick);
        out.into_iter().map(|(f, (g, x))| (f, g, x)).collect()
    }
}

fn choose(n: usize, k: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    let start = chosen.last().map_or(0, |&v| v + 1);
    for v in start..n {
        chosen.push(v);
        choose(n, k, chosen, visit);
        chosen.pop();
    }
}

/// All permutations of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Partitions of `n` into parts at least `min`, parts non-increasing.
fn partitions(n: usize, min: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, min: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for part in (min..=max.min(rest)).rev() {
            current.push(part);
            go(rest - part, part, min, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min.max(1), &mut Vec::new(), &mut out);
    out
}

fn for_each_matching(free: &mut Vec<usize>, pairs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    let Some(&a) = free.first() else {
        visit(pairs);
        return;
    };
    for idx in 1..free.len() {
        let b = free[idx];
        let mut rest: Vec<usize> = free.iter().copied().filter(|&x| x != a && x != b).collect();
        pairs[a] = b;
        pairs[b] = a;
        for_each_matching(&mut rest, pairs, visit);
    }
}

type Found = BTreeMap<CanonicalForm, (RibbonGraph, Labeling)>;

/// Fixes `sigma0` per cycle type and sweeps all fixed-point-free involutions.
pub fn enumerate_by_cycle_type(filter: &GraphFilter, max_half_edges: usize) -> Found {
    let mut tasks: Vec<(Vec<usize>, usize)> = Vec::new();
    for n in (2..=max_half_edges).step_by(2) {
        let (lo, hi) = filter.vertex_range(n);
        for parts in partitions(n, filter.part_min()) {
            let v = parts.len() as i64;
            if v < lo || v > hi {
                continue;
            }
            for first in 1..n {
                tasks.push((parts.clone(), first));
            }
        }
    }
    let results: Vec<Found> = tasks
        .par_iter()
        .map(|(parts, first)| {
            let n: usize = parts.iter().sum();
            let mut images = vec![0; n];
            let mut start = 0;
            for &p in parts {
                for t in 0..p {
                    images[start + t] = start + (t + 1) % p;
                }
                start += p;
            }
            let sigma0 = Permutation::from_images(images).unwrap();
            let mut found = Found::new();
            let mut pairs = vec![usize::MAX; n];
            pairs[0] = *first;
            pairs[*first] = 0;
            let mut free: Vec<usize> = (1..n).filter(|&x| x != *first).collect();
            for_each_matching(&mut free, &mut pairs, &mut |m| {
                let sigma1 = Permutation::from_images(m.to_vec()).unwrap();
                let g = RibbonGraph::from_permutations(sigma0.clone(), sigma1).unwrap();
                for (form, g, x) in filter.admit(&g) {
                    found.entry(form).or_insert((g, x));
                }
            });
            found
        })
        .collect();
    let mut all = Found::new();
    for r in results {
        for (k, v) in r {
            all.entry(k).or_insert(v);
        }
    }
    all
}

/// Independent oracle: fixes `sigma1 = (0 1)(2 3)…` and tries every `sigma0`.
pub fn enumerate_naive(filter: &GraphFilter, max_half_edges: usize) -> Found {
    let mut all = Found::new();
    for n in (2..=max_half_edges).step_by(2) {
        let sigma1 = Permutation::from_images((0..n).map(|h| h ^ 1).collect()).unwrap();
        for images in permutations(n) {
            let sigma0 = Permutation::from_images(images).unwrap();
            let g = RibbonGraph::from_permutations(sigma0, sigma1.clone()).unwrap();
            for (form, g, x) in filter.admit(&g) {
                all.entry(form).or_insert((g, x));
            }
        }
    }
    all
}
