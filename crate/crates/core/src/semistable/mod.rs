//! Semistable ribbon graphs: disjoint ribbon graphs glued along a node
//! involution that pairs each vertex-node with a cusp-node, stratified by an
//! order function.

mod bijection;
mod gluing;
mod sequence;

pub use bijection::{from_permissible, to_primitive, BijectionError, Corner, NodeAttachment, TangentDecoration};
pub use gluing::{blowup_vertex, enumerate_gluings, glue, GluingError, GluingPattern, Marker};
pub use sequence::{PermissibleSequence, SequenceError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Point, RibbonGraph};
use crate::subsets::distinguished_points;

/// A vertex or cusp of one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodePoint {
    pub component: usize,
    pub point: Point,
}

impl NodePoint {
    pub fn new(component: usize, point: Point) -> Self {
        Self { component, point }
    }

    pub fn is_cusp(&self) -> bool {
        matches!(self.point, Point::Cusp(_) | Point::CircleSide(_))
    }
}

/// Stratification level of every component.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderFunction {
    pub levels: Vec<u32>,
}

impl OrderFunction {
    pub fn new(levels: Vec<u32>) -> Self {
        Self { levels }
    }

    pub fn of(&self, component: usize) -> u32 {
        self.levels[component]
    }

    pub fn max_order(&self) -> Option<u32> {
        self.levels.iter().copied().max()
    }

    /// Components at level `k`.
    pub fn level(&self, k: u32) -> Vec<usize> {
        (0..self.levels.len()).filter(|&c| self.levels[c] == k).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemistableRibbonGraph {
    pub components: Vec<RibbonGraph>,
    pub order: OrderFunction,
    /// Each entry pairs two nodes; validation expects a vertex-node and a cusp-node.
    pub node_pairs: Vec<(NodePoint, NodePoint)>,
    pub labels: BTreeMap<String, NodePoint>,
}

/// Which requirement a validation finding violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// (1) a component is associated to itself.
    SelfAssociation,
    /// (2) two circles are associated.
    CirclesPaired,
    /// (3) a boundary cycle of a circle is not a cusp-node.
    CircleSideNotNode,
    /// (4) a cusp-node is paired with something other than a vertex-node.
    CuspNotToVertex,
    /// (5) the nodal surface is disconnected.
    Disconnected,
    /// A node appears in two pairs or names a missing point.
    Involution,
    Labeling,
    OrderLevels,
    OrderAcrossNode,
    ComponentWithoutCusp,
    CuspNodeAtOrderZero,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::SelfAssociation => "condition 1",
            Rule::CirclesPaired => "condition 2",
            Rule::CircleSideNotNode => "condition 3",
            Rule::CuspNotToVertex => "condition 4",
            Rule::Disconnected => "condition 5",
            Rule::Involution => "involution",
            Rule::Labeling => "labeling",
            Rule::OrderLevels => "order levels",
            Rule::OrderAcrossNode => "order across node",
            Rule::ComponentWithoutCusp => "component without cusp",
            Rule::CuspNodeAtOrderZero => "cusp-node at order zero",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

impl SemistableRibbonGraph {
    /// A single ordinary graph at order zero with no nodes.
    pub fn from_graph(graph: RibbonGraph, labels: &crate::subsets::Labeling) -> Self {
        Self {
            components: vec![graph],
            order: OrderFunction::new(vec![0]),
            node_pairs: Vec::new(),
            labels: labels.iter().map(|(k, p)| (k.to_string(), NodePoint::new(0, p))).collect(),
        }
    }

    /// The involution as a map in both directions.
    pub fn iota(&self) -> BTreeMap<NodePoint, NodePoint> {
        let mut map = BTreeMap::new();
        for &(a, b) in &self.node_pairs {
            map.insert(a, b);
            map.insert(b, a);
        }
        map
    }

    pub fn nodes(&self) -> BTreeSet<NodePoint> {
        self.node_pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn label_at(&self, point: NodePoint) -> Option<&str> {
        self.labels.iter().find(|(_, &p)| p == point).map(|(k, _)| k.as_str())
    }

    /// Every violated requirement; empty for a valid graph.
    pub fn validate(&self) -> Vec<Finding> {
        let mut findings = Vec::new();
        let mut push = |rule: Rule, message: String| findings.push(Finding { rule, message });
        let count = self.components.len();
        if self.order.levels.len() != count {
            push(Rule::OrderLevels, format!("{} levels for {} components", self.order.levels.len(), count));
            return findings;
        }
        let exists =
            |p: &NodePoint| p.component < count && self.components[p.component].has_point(p.point);

        let mut seen = BTreeSet::new();
        for &(a, b) in &self.node_pairs {
            for p in [a, b] {
                if !exists(&p) {
                    push(Rule::Involution, format!("node {p:?} does not exist"));
                } else if !seen.insert(p) {
                    push(Rule::Involution, format!("node {p:?} is paired twice"));
                }
            }
            if a == b {
                push(Rule::Involution, format!("node {a:?} is paired with itself"));
                continue;
            }
            if a.component == b.component {
                push(Rule::SelfAssociation, format!("component {} is associated to itself", a.component));
            }
            let circle = |p: &NodePoint| p.component < count && self.components[p.component].is_circle();
            if circle(&a) && circle(&b) {
                push(Rule::CirclesPaired, format!("circles {} and {} are associated", a.component, b.component));
            }
            if a.is_cusp() == b.is_cusp() {
                push(Rule::CuspNotToVertex, format!("{a:?} and {b:?} are not a vertex-node and a cusp-node"));
            } else if a.component < count && b.component < count {
                let (v, c) = if a.is_cusp() { (b, a) } else { (a, b) };
                if self.order.of(v.component) >= self.order.of(c.component) {
                    push(
                        Rule::OrderAcrossNode,
                        format!("vertex-node {v:?} is not at a lower order than cusp-node {c:?}"),
                    );
                }
            }
        }
        for (i, g) in self.components.iter().enumerate() {
            if g.is_circle() {
                for side in 0..2 {
                    if !seen.contains(&NodePoint::new(i, Point::CircleSide(side))) {
                        push(Rule::CircleSideNotNode, format!("side {side} of circle {i} is not a node"));
                    }
                }
            }
        }

        // (5): components joined by node pairs
        if count > 0 {
            let mut reached = vec![false; count];
            reached[0] = true;
            let mut stack = vec![0];
            while let Some(c) = stack.pop() {
                for &(a, b) in &self.node_pairs {
                    for (x, y) in [(a, b), (b, a)] {
                        if x.component == c && y.component < count && !reached[y.component] {
                            reached[y.component] = true;
                            stack.push(y.component);
                        }
                    }
                }
            }
            if let Some(c) = reached.iter().position(|r| !r) {
                push(Rule::Disconnected, format!("component {c} is not joined to component 0"));
            }
        }

        let mut labeled = BTreeSet::new();
        for (name, p) in &self.labels {
            if !exists(p) {
                push(Rule::Labeling, format!("label {name} names a missing point"));
            } else if seen.contains(p) {
                push(Rule::Labeling, format!("label {name} sits on a node"));
            } else if !labeled.insert(*p) {
                push(Rule::Labeling, format!("label {name} shares its point with another label"));
            }
        }
        for (i, g) in self.components.iter().enumerate() {
            for point in distinguished_points(g) {
                let p = NodePoint::new(i, point);
                if !labeled.contains(&p) && !seen.contains(&p) {
                    push(Rule::Labeling, format!("distinguished point {p:?} is neither labeled nor a node"));
                }
            }
        }

        if let Some(max) = self.order.max_order() {
            for k in 0..=max {
                if self.order.level(k).is_empty() {
                    push(Rule::OrderLevels, format!("level {k} is empty below maximum {max}"));
                }
            }
        }
        for (i, g) in self.components.iter().enumerate() {
            if !g.is_circle() && g.cusp_count() == 0 {
                push(Rule::ComponentWithoutCusp, format!("component {i} has no cusp"));
            }
        }
        for p in &seen {
            if p.is_cusp() && p.component < count && self.order.of(p.component) == 0 {
                push(Rule::CuspNodeAtOrderZero, format!("cusp-node {p:?} is at order zero"));
            }
        }
        findings
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Number of components at each level.
    pub fn level_sizes(&self) -> Vec<usize> {
        match self.order.max_order() {
            None => Vec::new(),
            Some(max) => (0..=max).map(|k| self.order.level(k).len()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_and_circle() -> SemistableRibbonGraph {
        let interval = RibbonGraph::build(2, &[vec![0], vec![1]], &[(0, 1)]).unwrap();
        SemistableRibbonGraph {
            components: vec![interval, RibbonGraph::circle()],
            order: OrderFunction::new(vec![0, 1]),
            node_pairs: vec![
                (NodePoint::new(0, Point::Vertex(0)), NodePoint::new(1, Point::CircleSide(0))),
                (NodePoint::new(0, Point::Vertex(1)), NodePoint::new(1, Point::CircleSide(1))),
            ],
            labels: BTreeMap::from([("p".to_string(), NodePoint::new(0, Point::Cusp(0)))]),
        }
    }

    fn rules(s: &SemistableRibbonGraph) -> BTreeSet<Rule> {
        s.validate().into_iter().map(|f| f.rule).collect()
    }

    #[test]
    fn interval_with_circle_is_valid() {
        assert_eq!(interval_and_circle().validate(), vec![]);
    }

    #[test]
    fn two_circles_paired() {
        let s = SemistableRibbonGraph {
            components: vec![RibbonGraph::circle(), RibbonGraph::circle()],
            order: OrderFunction::new(vec![0, 1]),
            node_pairs: vec![
                (NodePoint::new(0, Point::CircleSide(0)), NodePoint::new(1, Point::CircleSide(0))),
                (NodePoint::new(0, Point::CircleSide(1)), NodePoint::new(1, Point::CircleSide(1))),
            ],
            labels: BTreeMap::new(),
        };
        assert!(rules(&s).contains(&Rule::CirclesPaired));
    }

    #[test]
    fn cusp_paired_with_cusp() {
        let mut s = interval_and_circle();
        s.labels.clear();
        s.node_pairs[0].0 = NodePoint::new(0, Point::Cusp(0));
        s.labels.insert("v".into(), NodePoint::new(0, Point::Vertex(0)));
        assert!(rules(&s).contains(&Rule::CuspNotToVertex));
    }

    #[test]
    fn order_and_connectivity_rules() {
        let mut s = interval_and_circle();
        s.order = OrderFunction::new(vec![1, 0]);
        let r = rules(&s);
        assert!(r.contains(&Rule::OrderAcrossNode));
        assert!(r.contains(&Rule::CuspNodeAtOrderZero));

        let mut s = interval_and_circle();
        s.node_pairs.clear();
        let r = rules(&s);
        assert!(r.contains(&Rule::Disconnected));
        assert!(r.contains(&Rule::CircleSideNotNode));
        assert!(r.contains(&Rule::Labeling));
    }
}
