//! Passing between a labeled ribbon graph with a permissible sequence and a
//! semistable ribbon graph with tangent decorations.
//!
//! Stage `i` contributes the components of `Γ_{Z_i}/Γ_{Z_{i+1}}` at order `i`,
//! with unlabeled valence-two vertices spliced out. The decoration keeps the
//! original half-edge ids: which ids each component carries, the ids along
//! every spliced edge, and for every vertex-node the corners of its partner
//! boundary cycle that its half-edges were attached to.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sequence::{PermissibleSequence, SequenceError};
use super::{Finding, NodePoint, OrderFunction, SemistableRibbonGraph};
use crate::graph::{Point, RibbonGraph};
use crate::perm::Permutation;
use crate::subsets::{
    half_edge_mask, pairing_of, quotient_unchecked, reduce, subgraph_unchecked, EdgeSet, Labeling, SubsetError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error("invalid semistable graph: {}", .0.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Finding>),
    #[error("a lone circle has no semistable extension: its sides cannot be nodes")]
    LoneCircle,
    #[error("decoration does not fit the graph: {0}")]
    IncompatiblePattern(String),
}

/// Half-edges of a vertex-node placed in the corner after `after`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub after: usize,
    pub attached: Vec<usize>,
}

/// How one vertex-node is glued onto the boundary cycle of its partner.
/// Corners are listed in the cyclic order of the vertex-node, starting at a corner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeAttachment {
    pub vertex_node: NodePoint,
    pub cusp_node: NodePoint,
    pub corners: Vec<Corner>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TangentDecoration {
    pub half_edge_count: usize,
    /// Original id of every half-edge of every component.
    pub origins: Vec<Vec<usize>>,
    /// Original ids along spliced edges, keyed by the smaller local half-edge
    /// and running from it to its partner; a circle has one cyclic chain under key 0.
    pub chains: Vec<BTreeMap<usize, Vec<usize>>>,
    pub attachments: Vec<NodeAttachment>,
}

struct Built {
    graph: RibbonGraph,
    order: u32,
    origin: Vec<usize>,
    chains: BTreeMap<usize, Vec<usize>>,
}

/// The semistable ribbon graph and decoration of a permissible sequence.
pub fn from_permissible(
    seq: &PermissibleSequence,
) -> Result<(SemistableRibbonGraph, TangentDecoration), BijectionError> {
    let g = &seq.graph;
    if g.is_circle() {
        return Err(BijectionError::LoneCircle);
    }
    let n = g.half_edge_count();
    let k = seq.depth();
    let masks: Vec<Vec<bool>> = (0..=k + 1).map(|i| half_edge_mask(g, &seq.stage(i))).collect();
    let stage_of = |h: usize| (0..=k).rev().find(|&i| masks[i][h]).unwrap();

    let mut built: Vec<Built> = Vec::new();
    let mut vertex_at = vec![None::<NodePoint>; n];
    let mut cusp_at = vec![None::<NodePoint>; n];
    // (stage, vertex half-edges in cyclic order, partner cycle, predecessor map of G_i)
    let mut pending: Vec<(usize, NodePoint, Vec<usize>, Vec<usize>)> = Vec::new();
    let mut prev0_by_stage: Vec<Vec<usize>> = Vec::new();

    for i in 0..=k {
        let gi = subgraph_unchecked(g, &seq.stage(i));
        let inv0 = gi.graph.sigma0().inverse();
        let mut prev0 = vec![usize::MAX; n];
        for (local, &h) in gi.half_edges.iter().enumerate() {
            prev0[h] = gi.half_edges[inv0.apply(local)];
        }
        prev0_by_stage.push(prev0);

        let next: EdgeSet = gi
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, [a, _])| masks[i + 1][gi.half_edges[*a]])
            .map(|(e, _)| e)
            .collect();
        let sub = subgraph_unchecked(&gi.graph, &next);
        let quot = quotient_unchecked(&gi.graph, &next);
        let pairs = pairing_of(&gi.graph, &sub, &quot)?;
        let to_orig: Vec<usize> = quot.half_edges.iter().map(|&h| gi.half_edges[h]).collect();
        let exceptional: Vec<(Vec<usize>, Vec<usize>)> = pairs
            .into_iter()
            .map(|p| {
                let vertex: Vec<usize> = p.vertex.iter().map(|&h| gi.half_edges[h]).collect();
                let cycle: Vec<usize> = p.cycle.iter().map(|&h| gi.half_edges[h]).collect();
                (vertex, cycle)
            })
            .collect();
        let node_half_edges: BTreeSet<usize> = exceptional.iter().map(|(v, _)| v[0]).collect();
        let labeled_half_edges: BTreeSet<usize> = seq
            .labels
            .iter()
            .filter_map(|(_, p)| match p {
                Point::Vertex(h) => Some(h),
                _ => None,
            })
            .flat_map(|h| g.vertex_of(h))
            .collect();

        for members in quot.graph.components() {
            let (cg, kept) = quot.graph.induced(&members);
            let origin: Vec<usize> = kept.iter().map(|&h| to_orig[h]).collect();
            let keep = |p: Point| match p {
                Point::Vertex(h) => {
                    let around = cg.vertex_of(h);
                    around.iter().any(|&x| node_half_edges.contains(&origin[x]))
                        || around.iter().any(|&x| labeled_half_edges.contains(&origin[x]))
                }
                _ => true,
            };
            let mut reduced = reduce(&cg, keep);
            assert_eq!(reduced.len(), 1, "a connected graph reduces to one component");
            let red = reduced.pop().unwrap();
            let id = built.len();
            let final_origin: Vec<usize> = red.origin.iter().map(|&h| origin[h]).collect();
            let chains: BTreeMap<usize, Vec<usize>> =
                red.chains.iter().map(|(&key, c)| (key, c.iter().map(|&h| origin[h]).collect())).collect();

            for cusp in cg.cusps() {
                let point = if red.graph.is_circle() {
                    Point::CircleSide(if cusp.contains(&red.chains[&0][0]) { 0 } else { 1 })
                } else {
                    let kept_local = cusp.iter().find_map(|h| red.origin.iter().position(|o| o == h)).unwrap();
                    red.graph.cusp_point(kept_local)
                };
                for &h in &cusp {
                    cusp_at[origin[h]] = Some(NodePoint::new(id, point));
                }
            }
            if !red.graph.is_circle() {
                for (local, &h) in final_origin.iter().enumerate() {
                    vertex_at[h] = Some(NodePoint::new(id, red.graph.vertex_point(local)));
                }
                for (vertex, cycle) in &exceptional {
                    if let Some(local) = final_origin.iter().position(|&h| h == vertex[0]) {
                        let around: Vec<usize> = red.graph.vertex_of(red.graph.vertex_point(local).least())
                            .iter()
                            .map(|&x| final_origin[x])
                            .collect();
                        pending.push((i, NodePoint::new(id, red.graph.vertex_point(local)), around, cycle.clone()));
                    }
                }
            }
            built.push(Built { graph: red.graph, order: i as u32, origin: final_origin, chains });
        }
    }

    let mut node_pairs = Vec::new();
    let mut attachments = Vec::new();
    for (i, vertex_node, around, cycle) in pending {
        let deepest = *cycle.iter().min_by_key(|&&h| stage_of(h)).unwrap();
        let cusp_node = cusp_at[deepest].expect("every half-edge lies in some stage component");
        let prev0 = &prev0_by_stage[i];
        let corner_of = |h: usize| {
            let mut x = prev0[h];
            while !masks[i + 1][x] {
                x = prev0[x];
            }
            x
        };
        let start = around.iter().position(|&h| masks[i + 1][prev0[h]]).expect("exceptional vertex");
        let mut corners: Vec<Corner> = Vec::new();
        for t in 0..around.len() {
            let h = around[(start + t) % around.len()];
            if masks[i + 1][prev0[h]] {
                corners.push(Corner { after: corner_of(h), attached: vec![h] });
            } else {
                corners.last_mut().unwrap().attached.push(h);
            }
        }
        node_pairs.push((vertex_node, cusp_node));
        attachments.push(NodeAttachment { vertex_node, cusp_node, corners });
    }

    let mut labels = BTreeMap::new();
    for (name, p) in seq.labels.iter() {
        let at = match p {
            Point::Vertex(h) => {
                let around = g.vertex_of(h);
                let top = *around.iter().max_by_key(|&&x| stage_of(x)).unwrap();
                vertex_at[top]
            }
            Point::Cusp(h) => {
                let around = g.cusp_of(h);
                let low = *around.iter().min_by_key(|&&x| stage_of(x)).unwrap();
                cusp_at[low]
            }
            Point::CircleSide(_) => None,
        };
        let at = at.ok_or_else(|| BijectionError::IncompatiblePattern(format!("label {name} has no image")))?;
        labels.insert(name.to_string(), at);
    }

    let semistable = SemistableRibbonGraph {
        components: built.iter().map(|b| b.graph.clone()).collect(),
        order: OrderFunction::new(built.iter().map(|b| b.order).collect()),
        node_pairs,
        labels,
    };
    let decoration = TangentDecoration {
        half_edge_count: n,
        origins: built.iter().map(|b| b.origin.clone()).collect(),
        chains: built.into_iter().map(|b| b.chains).collect(),
        attachments,
    };
    Ok((semistable, decoration))
}

impl Point {
    /// The half-edge naming a vertex or cusp.
    pub fn least(self) -> usize {
        match self {
            Point::Vertex(h) | Point::Cusp(h) => h,
            Point::CircleSide(s) => s as usize,
        }
    }
}

/// Blows up every vertex-node and glues it onto its partner cycle, deepest
/// order first, recovering the labeled graph and its permissible sequence.
pub fn to_primitive(
    semistable: &SemistableRibbonGraph,
    decoration: &TangentDecoration,
) -> Result<PermissibleSequence, BijectionError> {
    let findings = semistable.validate();
    if !findings.is_empty() {
        return Err(BijectionError::Invalid(findings));
    }
    let bad = |msg: String| BijectionError::IncompatiblePattern(msg);
    let s = semistable;
    let t = decoration;
    let count = s.components.len();
    if t.origins.len() != count || t.chains.len() != count {
        return Err(bad("decoration covers a different number of components".into()));
    }
    let n = t.half_edge_count;
    let mut level = vec![u32::MAX; n];
    let mut sigma1 = vec![usize::MAX; n];
    let mut splices: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    let claim = |h: usize, c: usize, level: &mut Vec<u32>| -> Result<(), BijectionError> {
        if h >= n || level[h] != u32::MAX {
            return Err(bad(format!("half-edge {h} is out of range or used twice")));
        }
        level[h] = s.order.of(c);
        Ok(())
    };
    let pair = |a: usize, b: usize, sigma1: &mut Vec<usize>| {
        sigma1[a] = b;
        sigma1[b] = a;
    };

    for c in 0..count {
        let graph = &s.components[c];
        let origin = &t.origins[c];
        let chains = &t.chains[c];
        if graph.is_circle() {
            let chain = chains.get(&0).ok_or_else(|| bad(format!("circle {c} has no chain")))?;
            if chain.len() < 2 || chain.len() % 2 == 1 || chains.len() != 1 || !origin.is_empty() {
                return Err(bad(format!("circle {c} has a malformed chain")));
            }
            for &h in chain {
                claim(h, c, &mut level)?;
            }
            let m = chain.len();
            for q in 0..m / 2 {
                pair(chain[2 * q], chain[2 * q + 1], &mut sigma1);
                splices[c].push((chain[2 * q + 1], chain[(2 * q + 2) % m]));
            }
            continue;
        }
        if origin.len() != graph.half_edge_count() {
            return Err(bad(format!("component {c} has {} origins", origin.len())));
        }
        for &h in origin {
            claim(h, c, &mut level)?;
        }
        for (&key, chain) in chains {
            if key >= origin.len() || chain.len() < 4 || chain.len() % 2 == 1 {
                return Err(bad(format!("component {c} has a malformed chain at {key}")));
            }
            let partner = graph.sigma1().apply(key);
            if partner < key || chain[0] != origin[key] || chain[chain.len() - 1] != origin[partner] {
                return Err(bad(format!("chain at {key} of component {c} does not span its edge")));
            }
            for &h in &chain[1..chain.len() - 1] {
                claim(h, c, &mut level)?;
            }
        }
        for [a, b] in graph.edges() {
            match chains.get(&a) {
                Some(chain) => {
                    let m = chain.len();
                    for q in 0..m / 2 {
                        pair(chain[2 * q], chain[2 * q + 1], &mut sigma1);
                    }
                    for q in 0..m / 2 - 1 {
                        splices[c].push((chain[2 * q + 1], chain[2 * q + 2]));
                    }
                }
                None => pair(origin[a], origin[b], &mut sigma1),
            }
        }
    }
    if let Some(h) = (0..n).find(|&h| level[h] == u32::MAX) {
        return Err(bad(format!("half-edge {h} belongs to no component")));
    }

    let vertex_nodes: BTreeSet<NodePoint> = s.nodes().into_iter().filter(|p| !p.is_cusp()).collect();
    let mut by_vertex: BTreeMap<NodePoint, &NodeAttachment> = BTreeMap::new();
    for a in &t.attachments {
        if by_vertex.insert(a.vertex_node, a).is_some() {
            return Err(bad(format!("vertex-node {:?} is decorated twice", a.vertex_node)));
        }
    }
    if by_vertex.keys().copied().collect::<BTreeSet<_>>() != vertex_nodes {
        return Err(bad("decorated vertices differ from the vertex-nodes".into()));
    }

    let mut sigma0 = vec![usize::MAX; n];
    let top = s.order.max_order().unwrap_or(0);
    for lvl in (0..=top).rev() {
        for c in s.order.level(lvl) {
            let graph = &s.components[c];
            let origin = &t.origins[c];
            for &(a, b) in &splices[c] {
                sigma0[a] = b;
                sigma0[b] = a;
            }
            if graph.is_circle() {
                continue;
            }
            for vertex in graph.vertices() {
                if vertex_nodes.contains(&NodePoint::new(c, Point::Vertex(vertex[0]))) {
                    continue;
                }
                for (q, &h) in vertex.iter().enumerate() {
                    sigma0[origin[h]] = origin[vertex[(q + 1) % vertex.len()]];
                }
            }
        }
        for (node, attachment) in &by_vertex {
            if s.order.of(node.component) != lvl {
                continue;
            }
            let graph = &s.components[node.component];
            let origin = &t.origins[node.component];
            let expected: BTreeSet<usize> =
                graph.vertex_of(node.point.least()).iter().map(|&h| origin[h]).collect();
            let listed: Vec<usize> = attachment.corners.iter().flat_map(|c| c.attached.iter().copied()).collect();
            if listed.iter().copied().collect::<BTreeSet<_>>() != expected || listed.len() != expected.len() {
                return Err(bad(format!("corners of {node:?} do not list its half-edges")));
            }
            for corner in &attachment.corners {
                let p = corner.after;
                if p >= n || level[p] <= lvl || sigma0[p] == usize::MAX || corner.attached.is_empty() {
                    return Err(bad(format!("corner after {p} is not on a deeper component")));
                }
                let q = sigma0[p];
                let mut last = p;
                for &h in &corner.attached {
                    sigma0[last] = h;
                    last = h;
                }
                sigma0[last] = q;
            }
        }
    }
    if let Some(h) = (0..n).find(|&h| sigma0[h] == usize::MAX) {
        return Err(bad(format!("half-edge {h} ended up in no vertex")));
    }
    let s0 = Permutation::from_images(sigma0).map_err(|e| bad(e.to_string()))?;
    let s1 = Permutation::from_images(sigma1).map_err(|e| bad(e.to_string()))?;
    let graph = RibbonGraph::from_permutations(s0, s1).map_err(|e| bad(e.to_string()))?;

    let mut labels = Labeling::new();
    for (name, at) in &s.labels {
        let origin = &t.origins[at.component];
        let point = match at.point {
            Point::Vertex(h) => graph.vertex_point(origin[h]),
            Point::Cusp(h) => graph.cusp_point(origin[h]),
            Point::CircleSide(_) => return Err(bad(format!("label {name} sits on a circle"))),
        };
        labels.insert(name.clone(), point).map_err(|e| bad(e.to_string()))?;
    }
    let edge_index = graph.edge_index();
    let stages: Vec<EdgeSet> = (1..=top)
        .map(|i| (0..n).filter(|&h| level[h] >= i).map(|h| edge_index[h]).collect())
        .collect();
    let seq = PermissibleSequence::new(graph, labels, stages)?;

    let (again, redecorated) = from_permissible(&seq)?;
    if !same_semistable(&again, s) || !same_decoration(&redecorated, t) {
        return Err(bad("gluing does not reproduce the decorated graph".into()));
    }
    Ok(seq)
}

fn same_semistable(a: &SemistableRibbonGraph, b: &SemistableRibbonGraph) -> bool {
    let pairs = |s: &SemistableRibbonGraph| -> BTreeSet<(NodePoint, NodePoint)> {
        s.node_pairs.iter().map(|&(x, y)| if x.is_cusp() { (y, x) } else { (x, y) }).collect()
    };
    a.components == b.components && a.order == b.order && a.labels == b.labels && pairs(a) == pairs(b)
}

fn same_decoration(a: &TangentDecoration, b: &TangentDecoration) -> bool {
    let attachments = |t: &TangentDecoration| -> BTreeSet<NodeAttachment> { t.attachments.iter().cloned().collect() };
    a.half_edge_count == b.half_edge_count
        && a.origins == b.origins
        && a.chains == b.chains
        && attachments(a) == attachments(b)
}
