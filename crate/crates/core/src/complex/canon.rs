//! Canonical encodings and automorphism groups of labeled ribbon graphs,
//! optionally with an edge coloring (the stage of each edge).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Point, RibbonGraph};
use crate::semistable::{NodePoint, PermissibleSequence, SemistableRibbonGraph};
use crate::subsets::Labeling;

/// Per half-edge: new ids of its `sigma0` and `sigma1` images, then its color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub label_names: Vec<String>,
    pub components: Vec<Vec<[u32; 5]>>,
}

/// Colors of each half-edge: vertex label, cusp label (index + 1, or 0) and edge color.
fn colors(graph: &RibbonGraph, labels: &Labeling, edge_color: &[u32]) -> (Vec<String>, Vec<[u32; 3]>) {
    let names: Vec<String> = labels.iter().map(|(k, _)| k.to_string()).collect();
    let n = graph.half_edge_count();
    let mut out = vec![[0u32; 3]; n];
    for (i, (_, p)) in labels.iter().enumerate() {
        let (orbit, slot) = match p {
            Point::Vertex(h) => (graph.vertex_of(h), 0),
            Point::Cusp(h) => (graph.cusp_of(h), 1),
            Point::CircleSide(_) => continue,
        };
        for x in orbit {
            out[x][slot] = i as u32 + 1;
        }
    }
    let index = graph.edge_index();
    for h in 0..n {
        out[h][2] = edge_color.get(index[h]).copied().unwrap_or(0);
    }
    (names, out)
}

/// Breadth-first numbering from `seed`, visiting `sigma0` then `sigma1`.
fn numbering(graph: &RibbonGraph, seed: usize, size: usize) -> (Vec<usize>, Vec<usize>) {
    let mut new_id = vec![usize::MAX; graph.half_edge_count()];
    let mut order = Vec::with_capacity(size);
    new_id[seed] = 0;
    order.push(seed);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for y in [graph.sigma0().apply(x), graph.sigma1().apply(x)] {
            if new_id[y] == usize::MAX {
                new_id[y] = order.len();
                order.push(y);
            }
        }
    }
    (new_id, order)
}

fn encode(graph: &RibbonGraph, color: &[[u32; 3]], new_id: &[usize], order: &[usize]) -> Vec<[u32; 5]> {
    order
        .iter()
        .map(|&x| {
            let c = color[x];
            [
                new_id[graph.sigma0().apply(x)] as u32,
                new_id[graph.sigma1().apply(x)] as u32,
                c[0],
                c[1],
                c[2],
            ]
        })
        .collect()
}

/// Minimal encodings per component, with every seed attaining the minimum.
fn component_minima(graph: &RibbonGraph, color: &[[u32; 3]]) -> Vec<(Vec<[u32; 5]>, Vec<usize>)> {
    let mut out: Vec<(Vec<[u32; 5]>, Vec<usize>)> = graph
        .components()
        .iter()
        .map(|members| {
            let mut best: Option<Vec<[u32; 5]>> = None;
            let mut seeds = Vec::new();
            for &seed in members {
                let (new_id, order) = numbering(graph, seed, members.len());
                let enc = encode(graph, color, &new_id, &order);
                match &best {
                    Some(b) if enc > *b => {}
                    Some(b) if enc == *b => seeds.push(seed),
                    _ => {
                        best = Some(enc);
                        seeds = vec![seed];
                    }
                }
            }
            (best.unwrap_or_default(), seeds)
        })
        .collect();
    out.sort();
    out
}

/// Canonical encoding and a relabeling `old → new` realizing it.
pub fn canonical_form(graph: &RibbonGraph, labels: &Labeling) -> (CanonicalForm, Vec<usize>) {
    canonical_form_colored(graph, labels, &[])
}

/// As [`canonical_form`], with `edge_color[e]` distinguishing edges.
pub fn canonical_form_colored(graph: &RibbonGraph, labels: &Labeling, edge_color: &[u32]) -> (CanonicalForm, Vec<usize>) {
    let (label_names, color) = colors(graph, labels, edge_color);
    let minima = component_minima(graph, &color);
    let mut relabel = vec![0; graph.half_edge_count()];
    let mut offset = 0;
    for (enc, seeds) in &minima {
        let members = enc.len();
        let (new_id, order) = numbering(graph, seeds[0], members);
        for &x in &order {
            relabel[x] = offset + new_id[x];
        }
        offset += members;
    }
    let form = CanonicalForm { label_names, components: minima.into_iter().map(|(e, _)| e).collect() };
    (form, relabel)
}

/// Canonical encoding of a permissible sequence, coloring each edge by its stage.
pub fn canonical_form_staged(seq: &PermissibleSequence) -> (CanonicalForm, Vec<usize>) {
    let colors: Vec<u32> = (0..seq.graph.edge_count()).map(|e| seq.stage_of_edge(e) as u32).collect();
    canonical_form_colored(&seq.graph, &seq.labels, &colors)
}

/// Applies a relabeling to a graph and its labels.
pub fn relabel_graph(graph: &RibbonGraph, labels: &Labeling, relabel: &[usize]) -> (RibbonGraph, Labeling) {
    let g = graph.relabeled(relabel);
    let x = labels.map_points(|p| {
        Some(match p {
            Point::Vertex(h) => g.vertex_point(relabel[h]),
            Point::Cusp(h) => g.cusp_point(relabel[h]),
            other => other,
        })
    });
    (g, x)
}

/// Canonical encoding of a semistable ribbon graph without its decoration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemistableForm {
    pub label_names: Vec<String>,
    /// Order and encoding of each component, sorted.
    pub components: Vec<(u32, Vec<[u32; 5]>)>,
    /// Node pairs as (component rank, position) of the vertex-node, then of the cusp-node.
    pub nodes: Vec<((usize, u32), (usize, u32))>,
}

const NODE: u32 = u32::MAX / 2;

struct View {
    /// Position of each point of the component.
    position: BTreeMap<Point, u32>,
    /// Canonical position of each edge.
    edges: Vec<u32>,
}

fn component_views(
    graph: &RibbonGraph,
    color: &[[u32; 3]],
    order: u32,
) -> (Vec<[u32; 5]>, Vec<View>) {
    if graph.is_circle() {
        let view = |swap: u32| View {
            position: BTreeMap::from([(Point::CircleSide(0), swap), (Point::CircleSide(1), 1 - swap)]),
            edges: vec![0],
        };
        return (vec![[NODE, NODE, 0, 0, order]], vec![view(0), view(1)]);
    }
    let n = graph.half_edge_count();
    let mut best: Option<Vec<[u32; 5]>> = None;
    let mut views = Vec::new();
    for seed in 0..n {
        let (new_id, order_seq) = numbering(graph, seed, n);
        let mut enc = encode(graph, color, &new_id, &order_seq);
        for row in &mut enc {
            row[4] = order;
        }
        let better = match &best {
            None => true,
            Some(b) => enc < *b,
        };
        if !better && best.as_ref() != Some(&enc) {
            continue;
        }
        if better {
            best = Some(enc);
            views.clear();
        }
        let mut position = BTreeMap::new();
        for v in graph.vertices() {
            position.insert(Point::Vertex(v[0]), v.iter().map(|&h| new_id[h] as u32).min().unwrap());
        }
        for c in graph.cusps() {
            position.insert(Point::Cusp(c[0]), c.iter().map(|&h| new_id[h] as u32).min().unwrap());
        }
        let edges = graph.edges().iter().map(|[a, b]| new_id[*a].min(new_id[*b]) as u32).collect();
        views.push(View { position, edges });
    }
    (best.unwrap_or_default(), views)
}

/// Canonical form of a semistable graph and its automorphism report.
pub fn semistable_canonical_form(s: &SemistableRibbonGraph) -> (SemistableForm, AutReport) {
    let label_names: Vec<String> = s.labels.keys().cloned().collect();
    let nodes = s.nodes();
    let mut keyed: Vec<((u32, Vec<[u32; 5]>), Vec<View>)> = Vec::new();
    for (c, graph) in s.components.iter().enumerate() {
        let mut color = vec![[0u32; 3]; graph.half_edge_count()];
        if !graph.is_circle() {
            for (i, name) in label_names.iter().enumerate() {
                let p = s.labels[name];
                if p.component != c {
                    continue;
                }
                let (orbit, slot) = match p.point {
                    Point::Vertex(h) => (graph.vertex_of(h), 0),
                    Point::Cusp(h) => (graph.cusp_of(h), 1),
                    Point::CircleSide(_) => continue,
                };
                for x in orbit {
                    color[x][slot] = i as u32 + 1;
                }
            }
            for p in nodes.iter().filter(|p| p.component == c) {
                let (orbit, slot) = match p.point {
                    Point::Vertex(h) => (graph.vertex_of(h), 0),
                    _ => (graph.cusp_of(p.point.least()), 1),
                };
                for x in orbit {
                    color[x][slot] = NODE;
                }
            }
        }
        let order = s.order.of(c);
        let (enc, views) = component_views(graph, &color, order);
        keyed.push(((order, enc), views));
    }
    let mut slots: Vec<usize> = (0..keyed.len()).collect();
    slots.sort_by(|&a, &b| keyed[a].0.cmp(&keyed[b].0));
    let keys: Vec<(u32, Vec<[u32; 5]>)> = slots.iter().map(|&c| keyed[c].0.clone()).collect();

    // every assignment of components to ranks (within equal keys) and views
    let mut best: Option<Vec<((usize, u32), (usize, u32))>> = None;
    let mut edge_maps: BTreeSet<Vec<(usize, u32)>> = BTreeSet::new();
    let mut full = 0u64;
    let mut rank_of = vec![usize::MAX; keyed.len()];
    let mut view_of = vec![0usize; keyed.len()];
    fn search(
        r: usize,
        keys: &[(u32, Vec<[u32; 5]>)],
        keyed: &[((u32, Vec<[u32; 5]>), Vec<View>)],
        s: &SemistableRibbonGraph,
        rank_of: &mut Vec<usize>,
        view_of: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &[usize]),
    ) {
        if r == keys.len() {
            visit(rank_of, view_of);
            return;
        }
        for c in 0..keyed.len() {
            if rank_of[c] != usize::MAX || keyed[c].0 != keys[r] {
                continue;
            }
            rank_of[c] = r;
            for v in 0..keyed[c].1.len() {
                view_of[c] = v;
                search(r + 1, keys, keyed, s, rank_of, view_of, visit);
            }
            rank_of[c] = usize::MAX;
        }
    }
    let mut visit = |rank_of: &[usize], view_of: &[usize]| {
        let place = |p: &NodePoint| (rank_of[p.component], keyed[p.component].1[view_of[p.component]].position[&p.point]);
        let mut desc: Vec<((usize, u32), (usize, u32))> = s
            .node_pairs
            .iter()
            .map(|(a, b)| if a.is_cusp() { (place(b), place(a)) } else { (place(a), place(b)) })
            .collect();
        desc.sort();
        let mut edges: Vec<(usize, u32)> = Vec::new();
        for c in 0..keyed.len() {
            edges.extend(keyed[c].1[view_of[c]].edges.iter().map(|&e| (rank_of[c], e)));
        }
        match &best {
            Some(b) if desc > *b => {}
            Some(b) if desc == *b => {
                full += 1;
                edge_maps.insert(edges);
            }
            _ => {
                best = Some(desc);
                full = 1;
                edge_maps = BTreeSet::from([edges]);
            }
        }
    };
    search(0, &keys, &keyed, s, &mut rank_of, &mut view_of, &mut visit);
    let form = SemistableForm { label_names, components: keys, nodes: best.unwrap_or_default() };
    (form, AutReport { full_order: full, edge_image_order: edge_maps.len() as u64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutReport {
    pub full_order: u64,
    pub edge_image_order: u64,
}

/// Label-fixing automorphisms, found by propagating every possible image of a
/// seed half-edge in each component.
pub fn automorphisms(graph: &RibbonGraph, labels: &Labeling, edge_color: &[u32]) -> Vec<Vec<usize>> {
    let (_, color) = colors(graph, labels, edge_color);
    let n = graph.half_edge_count();
    let comps = graph.components();
    // isomorphisms between components, then combine
    let maps_between = |a: &[usize], b: &[usize]| -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        if a.len() != b.len() {
            return out;
        }
        let seed = a[0];
        for &target in b {
            let mut image = vec![usize::MAX; n];
            let mut stack = vec![(seed, target)];
            image[seed] = target;
            let mut ok = true;
            while let Some((x, y)) = stack.pop() {
                if color[x] != color[y] {
                    ok = false;
                    break;
                }
                for (px, py) in [
                    (graph.sigma0().apply(x), graph.sigma0().apply(y)),
                    (graph.sigma1().apply(x), graph.sigma1().apply(y)),
                ] {
                    if image[px] == usize::MAX {
                        image[px] = py;
                        stack.push((px, py));
                    } else if image[px] != py {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                let pairs: Vec<(usize, usize)> = a.iter().map(|&x| (x, image[x])).collect();
                let targets: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
                if targets.len() == a.len() {
                    out.push(pairs);
                }
            }
        }
        out
    };
    let mut result: Vec<Vec<usize>> = vec![vec![usize::MAX; n]];
    let mut used_targets: Vec<Vec<usize>> = vec![Vec::new()];
    for a in &comps {
        let mut next = Vec::new();
        let mut next_used = Vec::new();
        for (partial, used) in result.iter().zip(&used_targets) {
            for (j, b) in comps.iter().enumerate() {
                if used.contains(&j) {
                    continue;
                }
                for pairs in maps_between(a, b) {
                    let mut m = partial.clone();
                    for (x, y) in pairs {
                        m[x] = y;
                    }
                    let mut u = used.clone();
                    u.push(j);
                    next.push(m);
                    next_used.push(u);
                }
            }
        }
        result = next;
        used_targets = next_used;
    }
    result
}

pub fn automorphism_report(graph: &RibbonGraph, labels: &Labeling) -> AutReport {
    automorphism_report_colored(graph, labels, &[])
}

pub fn automorphism_report_colored(graph: &RibbonGraph, labels: &Labeling, edge_color: &[u32]) -> AutReport {
    let auts = automorphisms(graph, labels, edge_color);
    let index = graph.edge_index();
    let edges = graph.edges();
    let images: BTreeSet<Vec<usize>> =
        auts.iter().map(|m| edges.iter().map(|[a, _]| index[m[*a]]).collect()).collect();
    AutReport { full_order: auts.len() as u64, edge_image_order: images.len() as u64 }
}
