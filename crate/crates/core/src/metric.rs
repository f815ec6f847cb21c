//! Edge lengths, perimeters, decorations and the degeneration of a stratified
//! metric graph, all in exact rational arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Point, RibbonGraph};
use crate::semistable::{
    from_permissible, BijectionError, NodePoint, PermissibleSequence, SemistableRibbonGraph, SequenceError,
    TangentDecoration,
};
use crate::subsets::{max_semistable, quotient, EdgeSet, Labeling, SubsetError};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("edge {0} has a non-positive length")]
    NonPositive(usize),
    #[error("expected {expected} lengths, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("lengths sum to {0}, not 1")]
    NotUnital(String),
    #[error("stage {stage} lengths are not supported exactly on its own edges")]
    StageSupport { stage: usize },
    #[error("parameter must lie strictly between 0 and 1")]
    OutOfRange,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
}

fn in_unit_interval(x: &Rational) -> bool {
    x.is_positive() && *x < Rational::one()
}

/// Positive lengths indexed by edge id; a circle has one edge slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricAssignment {
    pub lengths: Vec<Rational>,
    pub unital: bool,
}

impl MetricAssignment {
    pub fn new(graph: &RibbonGraph, lengths: Vec<Rational>, unital: bool) -> Result<Self, MetricError> {
        let expected = graph.edge_count();
        if lengths.len() != expected {
            return Err(MetricError::WrongCount { expected, got: lengths.len() });
        }
        if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(MetricError::NonPositive(e));
        }
        let total: Rational = lengths.iter().sum();
        if unital && !total.is_one() {
            return Err(MetricError::NotUnital(total.to_string()));
        }
        Ok(Self { lengths, unital })
    }

    pub fn total(&self) -> Rational {
        self.lengths.iter().sum()
    }

    /// Rescales so that the lengths sum to one.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        Self { lengths: self.lengths.iter().map(|l| l / &total).collect(), unital: true }
    }
}

/// Half the length of each boundary cycle, in cusp order.
pub fn perimeters(graph: &RibbonGraph, lengths: &[Rational]) -> Vec<(Point, Rational)> {
    if graph.is_circle() {
        let half = &lengths[0] / Rational::from_integer(2.into());
        return vec![(Point::CircleSide(0), half.clone()), (Point::CircleSide(1), half)];
    }
    let index = graph.edge_index();
    graph
        .cusps()
        .into_iter()
        .map(|c| {
            let sum: Rational = c.iter().map(|&h| &lengths[index[h]]).sum();
            (Point::Cusp(c[0]), sum / Rational::from_integer(2.into()))
        })
        .collect()
}

/// A permissible sequence with a unital length function on each stage,
/// positive exactly on `Z_k − Z_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemistableConformalStructure {
    pub sequence: PermissibleSequence,
    /// For stage `k`, the lengths of the edges in `Z_k − Z_{k+1}`.
    pub stage_lengths: Vec<BTreeMap<usize, Rational>>,
}

impl SemistableConformalStructure {
    pub fn new(
        sequence: PermissibleSequence,
        stage_lengths: Vec<BTreeMap<usize, Rational>>,
    ) -> Result<Self, MetricError> {
        let depth = sequence.depth();
        if stage_lengths.len() != depth + 1 {
            return Err(MetricError::WrongCount { expected: depth + 1, got: stage_lengths.len() });
        }
        for (k, lengths) in stage_lengths.iter().enumerate() {
            let own: EdgeSet = sequence.stage(k).difference(&sequence.stage(k + 1)).copied().collect();
            if lengths.keys().copied().collect::<EdgeSet>() != own {
                return Err(MetricError::StageSupport { stage: k });
            }
            if let Some((&e, _)) = lengths.iter().find(|(_, l)| !l.is_positive()) {
                return Err(MetricError::NonPositive(e));
            }
            let total: Rational = lengths.values().sum();
            if !total.is_one() {
                return Err(MetricError::NotUnital(total.to_string()));
            }
        }
        Ok(Self { sequence, stage_lengths })
    }

    /// `l_k(e)`, zero off `Z_k − Z_{k+1}`.
    pub fn length(&self, k: usize, e: usize) -> Rational {
        self.stage_lengths.get(k).and_then(|m| m.get(&e)).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Values of the perimeter function on labeled points and nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecorationProfile {
    pub values: BTreeMap<NodePoint, Rational>,
}

impl DecorationProfile {
    pub fn get(&self, p: &NodePoint) -> Rational {
        self.values.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sum over the cusps of order-`k` components.
    pub fn level_sum(&self, s: &SemistableRibbonGraph, k: u32) -> Rational {
        self.values.iter().filter(|(p, _)| s.order.of(p.component) == k && p.is_cusp()).map(|(_, v)| v).sum()
    }

    /// Violated invariants, described in words; empty when consistent.
    pub fn check(&self, s: &SemistableRibbonGraph) -> Vec<String> {
        let mut out = Vec::new();
        for (p, v) in &self.values {
            if p.is_cusp() != v.is_positive() {
                out.push(format!("value {v} at {p:?} does not match its kind"));
            }
        }
        if let Some(m) = s.order.max_order() {
            for k in 0..=m {
                let sum = self.level_sum(s, k);
                if !sum.is_one() {
                    out.push(format!("level {k} sums to {sum}"));
                }
            }
        }
        for (a, b) in &s.node_pairs {
            if self.get(a).is_positive() == self.get(b).is_positive() {
                out.push(format!("nodes {a:?} and {b:?} are not a compatible pair"));
            }
        }
        for (i, g) in s.components.iter().enumerate() {
            if g.is_circle() {
                let side = |x| self.get(&NodePoint::new(i, Point::CircleSide(x)));
                if side(0) != side(1) || !side(0).is_positive() {
                    out.push(format!("circle {i} has unequal sides"));
                }
            }
        }
        out
    }
}

/// Length of every edge of a component, summing along spliced chains.
pub fn component_edge_lengths(
    s: &SemistableRibbonGraph,
    t: &TangentDecoration,
    component: usize,
    original_length: impl Fn(usize) -> Rational,
) -> Vec<Rational> {
    let graph = &s.components[component];
    let chains = &t.chains[component];
    let chain_length = |chain: &[usize]| -> Rational { chain.chunks(2).map(|pair| original_length(pair[0])).sum() };
    if graph.is_circle() {
        return vec![chain_length(&chains[&0])];
    }
    graph
        .edges()
        .iter()
        .map(|[a, _]| match chains.get(a) {
            Some(chain) => chain_length(chain),
            None => original_length(t.origins[component][*a]),
        })
        .collect()
}

/// The semistable graph of a conformal structure with its perimeter function:
/// vertices get zero, cusps half their perimeter in their stage metric.
pub fn decoration_profile(
    structure: &SemistableConformalStructure,
) -> Result<(SemistableRibbonGraph, TangentDecoration, DecorationProfile), MetricError> {
    let (s, t) = from_permissible(&structure.sequence)?;
    let edge_index = structure.sequence.graph.edge_index();
    let mut values = BTreeMap::new();
    for (c, graph) in s.components.iter().enumerate() {
        let k = s.order.of(c) as usize;
        let lengths = component_edge_lengths(&s, &t, c, |h| structure.length(k, edge_index[h]));
        for (point, value) in perimeters(graph, &lengths) {
            let p = NodePoint::new(c, point);
            if s.label_at(p).is_some() || s.nodes().contains(&p) {
                values.insert(p, value);
            }
        }
    }
    for p in s.labels.values().chain(s.nodes().iter()) {
        values.entry(*p).or_insert_with(Rational::zero);
    }
    Ok((s, t, DecorationProfile { values }))
}

/// The partition of points feeding the smoothing of level `k` into `k − 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrs {
    pub q: BTreeSet<NodePoint>,
    /// Single nodes, or both sides of a circle.
    pub r: Vec<Vec<NodePoint>>,
    pub s: BTreeSet<NodePoint>,
}

pub fn classify_qrs(semistable: &SemistableRibbonGraph, k: u32) -> Result<Qrs, MetricError> {
    let ss = semistable;
    if k == 0 || ss.order.max_order().is_none_or(|m| k > m) {
        return Err(MetricError::OutOfRange);
    }
    let iota = ss.iota();
    let partner_order = |p: &NodePoint| ss.order.of(iota[p].component);
    let mut out = Qrs::default();
    for p in ss.labels.values() {
        match ss.order.of(p.component) {
            o if o == k => {
                out.q.insert(*p);
            }
            o if o + 1 == k => {
                out.s.insert(*p);
            }
            _ => {}
        }
    }
    for (c, g) in ss.components.iter().enumerate() {
        let order = ss.order.of(c);
        let nodes: Vec<NodePoint> = iota.keys().filter(|p| p.component == c).copied().collect();
        if order == k {
            if g.is_circle() {
                if nodes.iter().any(|p| partner_order(p) + 1 < k) {
                    out.q.extend(nodes.iter().copied());
                } else {
                    out.r.push(nodes.clone());
                }
            } else {
                for p in nodes.iter().filter(|p| p.is_cusp()) {
                    if partner_order(p) + 1 < k {
                        out.q.insert(*p);
                    } else if partner_order(p) + 1 == k {
                        out.r.push(vec![*p]);
                    }
                }
            }
        } else if order + 1 == k {
            for p in nodes.iter().filter(|p| p.is_cusp()) {
                if partner_order(p) + 1 < k {
                    out.s.insert(*p);
                }
            }
        }
    }
    Ok(out)
}

/// One entry of `R`: a node, or the two sides of a circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RValue {
    Single(Rational),
    CirclePair(Rational, Rational),
}

impl RValue {
    fn total(&self) -> Rational {
        match self {
            RValue::Single(a) => a.clone(),
            RValue::CirclePair(a, b) => a + b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaleInput {
    pub q: Vec<Rational>,
    pub r: Vec<RValue>,
    pub s: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaleOutput {
    pub q: Vec<Rational>,
    pub s: Vec<Rational>,
    /// Target lengths of the edges created from `R`.
    pub lengths: Vec<Rational>,
}

impl RescaleOutput {
    pub fn merged_total(&self) -> Rational {
        self.q.iter().chain(self.s.iter()).sum()
    }
}

/// Rescales the decorations of two adjacent levels into one.
///
/// Panics when `Q` and `R` are both empty.
pub fn smoothing_rescale(input: &RescaleInput, eps: &Rational) -> Result<RescaleOutput, MetricError> {
    if !in_unit_interval(eps) {
        return Err(MetricError::OutOfRange);
    }
    assert!(!(input.q.is_empty() && input.r.is_empty()), "Q and R cannot both be empty");
    let one_minus = Rational::one() - eps;
    let scaled_s: Vec<Rational> = input.s.iter().map(|x| x * &one_minus).collect();
    if input.q.is_empty() {
        return Ok(RescaleOutput {
            q: Vec::new(),
            s: input.s.clone(),
            lengths: input.r.iter().map(|r| eps * r.total()).collect(),
        });
    }
    if input.r.is_empty() {
        return Ok(RescaleOutput { q: input.q.iter().map(|x| eps * x).collect(), s: scaled_s, lengths: Vec::new() });
    }
    let sum_q: Rational = input.q.iter().sum();
    Ok(RescaleOutput {
        q: input.q.iter().map(|x| eps * x / &sum_q).collect(),
        s: scaled_s,
        lengths: input.r.iter().map(|r| eps * r.total() / &sum_q).collect(),
    })
}

/// Edge lengths `t^k l_k(e)` on the primitive graph, normalized to total one.
pub fn degeneration_family(
    structure: &SemistableConformalStructure,
    t: &Rational,
) -> Result<MetricAssignment, MetricError> {
    if !in_unit_interval(t) {
        return Err(MetricError::OutOfRange);
    }
    let seq = &structure.sequence;
    let lengths: Vec<Rational> = (0..seq.graph.edge_count())
        .map(|e| {
            let k = seq.stage_of_edge(e);
            num_traits::pow(t.clone(), k) * structure.length(k, e)
        })
        .collect();
    Ok(MetricAssignment::new(&seq.graph, lengths, false)?.normalized())
}

/// Splits a metric into scales: at each step the edges within a factor `θ` of
/// the longest remaining edge form the next stage, and the rest, after its
/// negligible excess is collapsed, is examined again.
pub fn recover_stratification(
    graph: &RibbonGraph,
    labels: &Labeling,
    metric: &MetricAssignment,
    theta: &Rational,
) -> Result<SemistableConformalStructure, MetricError> {
    if !in_unit_interval(theta) {
        return Err(MetricError::OutOfRange);
    }
    let mut graph = graph.clone();
    let mut labels = labels.clone();
    let mut lengths = metric.lengths.clone();
    let mut stages: Vec<EdgeSet> = Vec::new();
    let mut stage_lengths: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut remaining: EdgeSet = (0..graph.edge_count()).collect();
    loop {
        assert!(stage_lengths.len() <= metric.lengths.len(), "more stages than edges");
        let longest = remaining.iter().map(|&e| lengths[e].clone()).max().expect("stage is nonempty");
        let cut = theta * longest;
        let (own, rest): (EdgeSet, EdgeSet) = remaining.iter().partition(|&&e| lengths[e] >= cut);
        let total: Rational = own.iter().map(|&e| &lengths[e]).sum();
        stage_lengths.push(own.iter().map(|&e| (e, &lengths[e] / &total)).collect());
        if rest.is_empty() {
            break;
        }
        let sst = max_semistable(&graph, &labels, &rest)?;
        if sst != rest {
            let excess: EdgeSet = rest.difference(&sst).copied().collect();
            let q = quotient(&graph, &labels, &excess)?;
            let remap = |set: &EdgeSet| -> EdgeSet { set.iter().filter_map(|e| q.edge_map.get(e).copied()).collect() };
            stages = stages.iter().map(remap).collect();
            stage_lengths = stage_lengths
                .iter()
                .map(|m| m.iter().filter_map(|(e, l)| q.edge_map.get(e).map(|&f| (f, l.clone()))).collect())
                .collect();
            let mut new_lengths = vec![Rational::zero(); q.induced.graph.edge_count()];
            for (&old, &new) in &q.edge_map {
                new_lengths[new] = lengths[old].clone();
            }
            lengths = new_lengths;
            remaining = remap(&sst);
            graph = q.induced.graph;
            labels = q.labels;
        } else {
            remaining = sst;
        }
        if remaining.is_empty() {
            break;
        }
        stages.push(remaining.clone());
    }
    let sequence = PermissibleSequence::new(graph, labels, stages)?;
    SemistableConformalStructure::new(sequence, stage_lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn r(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn theta_structure(l1: Rational, l2: Rational) -> SemistableConformalStructure {
        let labels = Labeling::from_pairs([("p", Point::Cusp(0))]).unwrap();
        let seq = PermissibleSequence::new(theta(), labels, vec![EdgeSet::from([0, 1])]).unwrap();
        SemistableConformalStructure::new(seq, vec![BTreeMap::from([(2, r(1, 1))]), BTreeMap::from([(0, l1), (1, l2)])])
            .unwrap()
    }

    #[test]
    fn perimeter_examples() {
        let third = vec![r(1, 3); 3];
        assert_eq!(perimeters(&theta(), &third), vec![(Point::Cusp(0), r(1, 1))]);
        let dual = perimeters(&theta().dual(), &third);
        assert!(dual.iter().all(|(_, v)| *v == r(1, 2)));
        assert_eq!(dual.len(), 2);
        let lp = perimeters(&loop_graph(), &[r(1, 1)]);
        assert_eq!(lp.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(), vec![r(1, 2), r(1, 2)]);
        let c = perimeters(&RibbonGraph::circle(), &[r(1, 1)]);
        assert_eq!(c[0].1, r(1, 2));
    }

    #[test]
    fn theta_profile() {
        let (s, _, profile) = decoration_profile(&theta_structure(r(1, 2), r(1, 2))).unwrap();
        assert_eq!(profile.get(&NodePoint::new(0, Point::Cusp(0))), r(1, 1));
        assert_eq!(profile.get(&NodePoint::new(1, Point::CircleSide(0))), r(1, 2));
        assert_eq!(profile.get(&NodePoint::new(1, Point::CircleSide(1))), r(1, 2));
        assert_eq!(profile.check(&s), Vec::<String>::new());
        let qrs = classify_qrs(&s, 1).unwrap();
        assert!(qrs.q.is_empty());
        assert_eq!(qrs.r.len(), 1);
        assert_eq!(qrs.r[0].len(), 2);
        assert_eq!(qrs.s, BTreeSet::from([NodePoint::new(0, Point::Cusp(0))]));
        assert_eq!(classify_qrs(&s, 0), Err(MetricError::OutOfRange));
    }

    #[test]
    fn rescale_examples() {
        let out = smoothing_rescale(
            &RescaleInput { q: vec![r(1, 1)], r: vec![], s: vec![r(1, 2), r(1, 2)] },
            &r(1, 4),
        )
        .unwrap();
        assert_eq!(out.q, vec![r(1, 4)]);
        assert_eq!(out.s.iter().sum::<Rational>(), r(3, 4));
        let out = smoothing_rescale(
            &RescaleInput { q: vec![r(1, 2)], r: vec![RValue::Single(r(1, 2))], s: vec![r(1, 1)] },
            &r(1, 8),
        )
        .unwrap();
        assert_eq!(out.lengths, vec![r(1, 8)]);
        assert_eq!(out.q, vec![r(1, 8)]);
        assert_eq!(out.merged_total(), r(1, 1));
        let out = smoothing_rescale(
            &RescaleInput { q: vec![r(1, 2)], r: vec![RValue::CirclePair(r(1, 4), r(1, 4))], s: vec![r(1, 1)] },
            &r(1, 8),
        )
        .unwrap();
        assert_eq!(out.lengths, vec![r(1, 8)]);
    }

    #[test]
    #[should_panic(expected = "both be empty")]
    fn rescale_needs_q_or_r() {
        let _ = smoothing_rescale(&RescaleInput { q: vec![], r: vec![], s: vec![r(1, 1)] }, &r(1, 2));
    }

    #[test]
    fn theta_degeneration() {
        let x = theta_structure(r(1, 2), r(1, 2));
        let m = degeneration_family(&x, &r(1, 4)).unwrap();
        assert_eq!(m.lengths, vec![r(1, 10), r(1, 10), r(4, 5)]);
        let (s, t, _) = decoration_profile(&x).unwrap();
        let circle = component_edge_lengths(&s, &t, 1, |h| m.lengths[theta().edge_index()[h]].clone());
        assert_eq!(perimeters(&s.components[1], &circle)[0].1.clone() * r(2, 1), r(1, 5));
        let fine = degeneration_family(&x, &r(1, 64)).unwrap();
        let back = recover_stratification(&theta(), &x.sequence.labels, &fine, &r(1, 8)).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn recovery_examples() {
        let labels = Labeling::from_pairs([("p", Point::Cusp(0))]).unwrap();
        let uniform = MetricAssignment::new(&theta(), vec![r(1, 3); 3], true).unwrap();
        let rec = recover_stratification(&theta(), &labels, &uniform, &r(1, 8)).unwrap();
        assert_eq!(rec.sequence.depth(), 0);

        // path a - b - c with a tiny first edge: both its ends are labeled
        let path = RibbonGraph::build(4, &[vec![0], vec![1, 2], vec![3]], &[(0, 1), (2, 3)]).unwrap();
        let labels = Labeling::from_pairs([
            ("a", Point::Vertex(0)),
            ("b", Point::Vertex(1)),
            ("c", Point::Vertex(3)),
            ("p", Point::Cusp(0)),
        ])
        .unwrap();
        let m = MetricAssignment::new(&path, vec![r(1, 100), r(99, 100)], true).unwrap();
        let rec = recover_stratification(&path, &labels, &m, &r(1, 8)).unwrap();
        assert_eq!(rec.sequence.stages, vec![EdgeSet::from([0])]);
    }
}
