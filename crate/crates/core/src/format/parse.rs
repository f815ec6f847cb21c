use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Document, ErrorKind, GraphDocument, ParseError, SemistableDocument};
use crate::graph::{Point, RibbonGraph};
use crate::metric::Rational;
use crate::semistable::{
    Corner, NodeAttachment, NodePoint, OrderFunction, PermissibleSequence, SemistableRibbonGraph, TangentDecoration,
};
use crate::subsets::{EdgeSet, Labeling};

#[derive(Debug, Clone, Copy)]
struct Loc {
    line: usize,
    column: usize,
}

struct Token<'a> {
    text: &'a str,
    loc: Loc,
}

struct Line<'a> {
    tokens: Vec<Token<'a>>,
    end: Loc,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn get(&self, i: usize) -> Result<&Token<'a>, ParseError> {
        self.tokens.get(i).ok_or_else(|| syntax(self.end, "arity", "line ends too early"))
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        match self.tokens.get(n) {
            Some(t) => Err(syntax(t.loc, "arity", format!("unexpected token '{}'", t.text))),
            None if self.tokens.len() < n => Err(syntax(self.end, "arity", "line ends too early")),
            None => Ok(()),
        }
    }
}

fn syntax(loc: Loc, rule: &str, message: impl Into<String>) -> ParseError {
    ParseError { line: loc.line, column: loc.column, rule: rule.into(), message: message.into(), kind: ErrorKind::Syntax }
}

fn invalid(loc: Loc, rule: &str, message: impl Into<String>) -> ParseError {
    ParseError {
        line: loc.line,
        column: loc.column,
        rule: rule.into(),
        message: message.into(),
        kind: ErrorKind::Validation,
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (byte, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    let column = content[..s].chars().count() + 1;
                    tokens.push(Token { text: &content[s..byte], loc: Loc { line: i + 1, column } });
                    start = None;
                }
                (false, None) => start = Some(byte),
                _ => {}
            }
        }
        if !tokens.is_empty() {
            let end = Loc { line: i + 1, column: content.chars().count() + 1 };
            out.push(Line { tokens, end });
        }
    }
    out
}

fn number<T: std::str::FromStr>(t: &Token) -> Result<T, ParseError> {
    t.text.parse().map_err(|_| syntax(t.loc, "number", format!("'{}' is not a valid number", t.text)))
}

fn rational(t: &Token) -> Result<Rational, ParseError> {
    let bad = || syntax(t.loc, "rational", format!("'{}' is not a rational p/q", t.text));
    let (p, q) = t.text.split_once('/').unwrap_or((t.text, "1"));
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Half-edges, vertex cycles and edges of one graph.
struct Block {
    start: Loc,
    names: Vec<String>,
    declared: Vec<Loc>,
    vertices: Vec<Vec<usize>>,
    in_vertex: Vec<bool>,
    edges: Vec<(usize, usize)>,
    in_edge: Vec<bool>,
    circle: Option<Loc>,
}

impl Block {
    fn new(start: Loc) -> Self {
        Self {
            start,
            names: Vec::new(),
            declared: Vec::new(),
            vertices: Vec::new(),
            in_vertex: Vec::new(),
            edges: Vec::new(),
            in_edge: Vec::new(),
            circle: None,
        }
    }
}

/// Global half-edge names: component and local index.
type Names = HashMap<String, (usize, usize)>;

fn lookup(names: &Names, component: Option<usize>, t: &Token) -> Result<(usize, usize), ParseError> {
    match names.get(t.text) {
        Some(&(c, h)) if component.is_none_or(|x| x == c) => Ok((c, h)),
        Some(_) => Err(invalid(t.loc, "component", format!("half-edge '{}' belongs to another component", t.text))),
        None => Err(invalid(t.loc, "unknown-half-edge", format!("'{}' is not declared", t.text))),
    }
}

/// Handles `halfedges`, `vertex`, `edge` and `circle`; returns false for other keywords.
fn block_line(block: &mut Block, component: usize, names: &mut Names, line: &Line) -> Result<bool, ParseError> {
    match line.keyword() {
        "halfedges" => {
            if let Some(loc) = block.circle {
                return Err(invalid(line.tokens[0].loc, "circle", format!("circle declared at line {}", loc.line)));
            }
            for t in &line.tokens[1..] {
                if names.contains_key(t.text) {
                    return Err(invalid(t.loc, "duplicate-half-edge", format!("'{}' declared twice", t.text)));
                }
                names.insert(t.text.to_string(), (component, block.names.len()));
                block.names.push(t.text.to_string());
                block.declared.push(t.loc);
                block.in_vertex.push(false);
                block.in_edge.push(false);
            }
        }
        "vertex" => {
            line.get(1)?;
            let mut cycle = Vec::new();
            for t in &line.tokens[1..] {
                let (_, h) = lookup(names, Some(component), t)?;
                if block.in_vertex[h] {
                    return Err(invalid(t.loc, "vertex-overlap", format!("'{}' is already in a vertex", t.text)));
                }
                block.in_vertex[h] = true;
                cycle.push(h);
            }
            block.vertices.push(cycle);
        }
        "edge" => {
            line.arity(3)?;
            let (_, a) = lookup(names, Some(component), &line.tokens[1])?;
            let (_, b) = lookup(names, Some(component), &line.tokens[2])?;
            if a == b {
                return Err(invalid(line.tokens[2].loc, "edge-pairing", "an edge needs two distinct half-edges"));
            }
            for (h, t) in [(a, &line.tokens[1]), (b, &line.tokens[2])] {
                if block.in_edge[h] {
                    return Err(invalid(t.loc, "edge-overlap", format!("'{}' is already in an edge", t.text)));
                }
                block.in_edge[h] = true;
            }
            block.edges.push((a, b));
        }
        "circle" => {
            line.arity(1)?;
            if !block.names.is_empty() || block.circle.is_some() {
                return Err(invalid(line.tokens[0].loc, "circle", "a circle has no half-edges"));
            }
            block.circle = Some(line.tokens[0].loc);
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn finish(block: &Block) -> Result<RibbonGraph, ParseError> {
    if block.circle.is_some() {
        return Ok(RibbonGraph::circle());
    }
    for h in 0..block.names.len() {
        if !block.in_vertex[h] {
            return Err(invalid(block.declared[h], "vertex-cover", format!("'{}' is in no vertex", block.names[h])));
        }
        if !block.in_edge[h] {
            return Err(invalid(block.declared[h], "edge-cover", format!("'{}' is in no edge", block.names[h])));
        }
    }
    RibbonGraph::build(block.names.len(), &block.vertices, &block.edges)
        .map_err(|e| invalid(block.start, "graph", e.to_string()))
}

/// Reads `vertex h`, `cusp h` or `side 0|1` starting at token `at`.
fn point(line: &Line, at: usize, graph: &RibbonGraph, names: &Names, component: usize) -> Result<Point, ParseError> {
    let kind = line.get(at)?;
    let r = line.get(at + 1)?;
    match kind.text {
        "vertex" | "cusp" => {
            if graph.is_circle() {
                return Err(invalid(kind.loc, "point", "a circle has only sides"));
            }
            let (_, h) = lookup(names, Some(component), r)?;
            Ok(if kind.text == "vertex" { graph.vertex_point(h) } else { graph.cusp_point(h) })
        }
        "side" => {
            if !graph.is_circle() {
                return Err(invalid(kind.loc, "point", "only a circle has sides"));
            }
            match r.text {
                "0" => Ok(Point::CircleSide(0)),
                "1" => Ok(Point::CircleSide(1)),
                _ => Err(syntax(r.loc, "point", "a side is 0 or 1")),
            }
        }
        other => Err(syntax(kind.loc, "point", format!("expected vertex, cusp or side, found '{other}'"))),
    }
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let lines = tokenize(text);
    let Some((head, rest)) = lines.split_first() else {
        return Err(syntax(Loc { line: 1, column: 1 }, "header", format!("expected '{}'", super::HEADER)));
    };
    if head.keyword() != "format" {
        return Err(syntax(head.tokens[0].loc, "header", format!("expected '{}'", super::HEADER)));
    }
    let version = head.get(1)?;
    if version.text != "ribbon/1" {
        return Err(syntax(version.loc, "version", format!("unsupported version '{}'", version.text)));
    }
    head.arity(2)?;
    if rest.first().is_some_and(|l| l.keyword() == "component") {
        parse_semistable(rest).map(Document::Semistable)
    } else {
        parse_graph(rest, head.end).map(Document::Graph)
    }
}

fn parse_graph(lines: &[Line], start: Loc) -> Result<GraphDocument, ParseError> {
    let mut block = Block::new(start);
    let mut names = Names::new();
    let mut deferred = Vec::new();
    for line in lines {
        if !block_line(&mut block, 0, &mut names, line)? {
            match line.keyword() {
                "label" | "stage" | "length" => deferred.push(line),
                other => return Err(syntax(line.tokens[0].loc, "keyword", format!("unknown keyword '{other}'"))),
            }
        }
    }
    let graph = finish(&block)?;
    let edge_index = graph.edge_index();
    let mut labels = Labeling::new();
    let mut first_label = None;
    let mut stages: Vec<EdgeSet> = Vec::new();
    let mut first_stage = None;
    let mut lengths: Vec<Option<Rational>> = vec![None; graph.edge_count()];
    let mut first_length = None;
    for line in deferred {
        let loc = line.tokens[0].loc;
        match line.keyword() {
            "label" => {
                line.arity(4)?;
                let name = line.get(1)?;
                let p = point(line, 2, &graph, &names, 0)?;
                labels.insert(name.text.to_string(), p).map_err(|e| invalid(name.loc, "labeling", e.to_string()))?;
                first_label.get_or_insert(loc);
            }
            "stage" => {
                let k = line.get(1)?;
                let index: usize = number(k)?;
                if index != stages.len() + 1 {
                    return Err(invalid(k.loc, "stage-order", format!("expected stage {}", stages.len() + 1)));
                }
                line.get(2)?;
                let mut z = EdgeSet::new();
                for t in &line.tokens[2..] {
                    let (_, h) = lookup(&names, Some(0), t)?;
                    if !z.insert(edge_index[h]) {
                        return Err(invalid(t.loc, "stage-duplicate", "edge listed twice"));
                    }
                }
                stages.push(z);
                first_stage.get_or_insert(loc);
            }
            _ => {
                line.arity(3)?;
                let t = &line.tokens[1];
                let (_, h) = lookup(&names, Some(0), t)?;
                let value = rational(&line.tokens[2])?;
                if !value.is_positive() {
                    return Err(invalid(line.tokens[2].loc, "metric-positive", "lengths must be positive"));
                }
                if lengths[edge_index[h]].replace(value).is_some() {
                    return Err(invalid(t.loc, "metric-duplicate", "edge already has a length"));
                }
                first_length.get_or_insert(loc);
            }
        }
    }
    if let Some(loc) = first_label {
        labels.validate(&graph).map_err(|e| invalid(loc, "labeling", e.to_string()))?;
    }
    if let Some(loc) = first_stage {
        PermissibleSequence::new(graph.clone(), labels.clone(), stages.clone())
            .map_err(|e| invalid(loc, "permissible", e.to_string()))?;
    }
    let lengths = match first_length {
        None => None,
        Some(loc) => Some(
            lengths
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| invalid(loc, "metric-incomplete", "every edge needs a length"))?,
        ),
    };
    Ok(GraphDocument { names: block.names, graph, labels, stages, lengths })
}

fn component_ref(line: &Line, at: usize, component_index: &HashMap<&str, usize>) -> Result<usize, ParseError> {
    let t = line.get(at)?;
    component_index
        .get(t.text)
        .copied()
        .ok_or_else(|| invalid(t.loc, "unknown-component", format!("no component '{}'", t.text)))
}

fn parse_semistable(lines: &[Line]) -> Result<SemistableDocument, ParseError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut component_names: Vec<String> = Vec::new();
    let mut component_index: HashMap<&str, usize> = HashMap::new();
    let mut levels = Vec::new();
    let mut names = Names::new();
    let mut deferred = Vec::new();
    for line in lines {
        if line.keyword() == "component" {
            line.arity(4)?;
            let name = line.get(1)?;
            if component_index.insert(name.text, blocks.len()).is_some() {
                return Err(invalid(name.loc, "duplicate-component", format!("'{}' declared twice", name.text)));
            }
            let kw = line.get(2)?;
            if kw.text != "order" {
                return Err(syntax(kw.loc, "component", "expected 'order'"));
            }
            levels.push(number::<u32>(line.get(3)?)?);
            component_names.push(name.text.to_string());
            blocks.push(Block::new(line.tokens[0].loc));
            continue;
        }
        let c = blocks.len() - 1;
        if !block_line(&mut blocks[c], c, &mut names, line)? {
            match line.keyword() {
                "node" | "label" | "originals" | "chain" | "attach" => deferred.push(line),
                other => return Err(syntax(line.tokens[0].loc, "keyword", format!("unknown keyword '{other}'"))),
            }
        }
    }
    let mut components = Vec::new();
    for block in &blocks {
        if block.circle.is_none() && block.names.is_empty() {
            return Err(invalid(block.start, "empty-component", "a component needs half-edges or 'circle'"));
        }
        components.push(finish(block)?);
    }
    let node_at = |line: &Line, at: usize| -> Result<NodePoint, ParseError> {
        let c = component_ref(line, at, &component_index)?;
        Ok(NodePoint::new(c, point(line, at + 1, &components[c], &names, c)?))
    };
    let mut node_pairs = Vec::new();
    let mut labels = BTreeMap::new();
    let mut originals: Option<Vec<String>> = None;
    let mut chains: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); blocks.len()];
    let mut attachments = Vec::new();
    let mut decorated = None;
    let mut first_node = None;
    let original_of = |originals: &Option<Vec<String>>, t: &Token| -> Result<usize, ParseError> {
        originals
            .as_ref()
            .and_then(|o| o.iter().position(|n| n == t.text))
            .ok_or_else(|| invalid(t.loc, "decoration-origin", format!("'{}' is not an original half-edge", t.text)))
    };
    for line in deferred {
        let loc = line.tokens[0].loc;
        match line.keyword() {
            "node" => {
                line.arity(7)?;
                node_pairs.push((node_at(line, 1)?, node_at(line, 4)?));
                first_node.get_or_insert(loc);
            }
            "label" => {
                line.arity(5)?;
                let name = line.get(1)?;
                if labels.insert(name.text.to_string(), node_at(line, 2)?).is_some() {
                    return Err(invalid(name.loc, "labeling", format!("label '{}' used twice", name.text)));
                }
            }
            "originals" => {
                if originals.is_some() {
                    return Err(invalid(loc, "decoration", "originals listed twice"));
                }
                let list: Vec<String> = line.tokens[1..].iter().map(|t| t.text.to_string()).collect();
                if let Some(i) = (1..list.len()).find(|&i| list[..i].contains(&list[i])) {
                    return Err(invalid(line.tokens[i + 1].loc, "decoration", "original named twice"));
                }
                originals = Some(list);
                decorated.get_or_insert(loc);
            }
            "chain" => {
                let c = component_ref(line, 1, &component_index)?;
                let key_token = line.get(2)?;
                let key = if key_token.text == "circle" && components[c].is_circle() {
                    0
                } else {
                    lookup(&names, Some(c), key_token)?.1
                };
                line.get(3)?;
                let chain = line.tokens[3..].iter().map(|t| original_of(&originals, t)).collect::<Result<_, _>>()?;
                if chains[c].insert(key, chain).is_some() {
                    return Err(invalid(key_token.loc, "decoration", "chain listed twice"));
                }
                decorated.get_or_insert(loc);
            }
            _ => {
                let vertex_node = node_at(line, 1)?;
                let cusp_node = node_at(line, 4)?;
                let mut corners: Vec<Corner> = Vec::new();
                for t in &line.tokens[7..] {
                    if t.text == "corner" {
                        corners.push(Corner { after: usize::MAX, attached: Vec::new() });
                        continue;
                    }
                    let Some(corner) = corners.last_mut() else {
                        return Err(syntax(t.loc, "attach", "expected 'corner'"));
                    };
                    let h = original_of(&originals, t)?;
                    if corner.after == usize::MAX {
                        corner.after = h;
                    } else {
                        corner.attached.push(h);
                    }
                }
                if corners.is_empty() || corners.iter().any(|c| c.attached.is_empty()) {
                    return Err(syntax(line.end, "attach", "every corner needs a position and half-edges"));
                }
                attachments.push(NodeAttachment { vertex_node, cusp_node, corners });
                decorated.get_or_insert(loc);
            }
        }
    }
    let semistable = SemistableRibbonGraph { components, order: OrderFunction::new(levels), node_pairs, labels };
    if let Some(finding) = semistable.validate().into_iter().next() {
        let loc = first_node.unwrap_or(blocks[0].start);
        return Err(invalid(loc, &finding.rule.to_string(), finding.message));
    }
    let half_edge_names: Vec<Vec<String>> = blocks.into_iter().map(|b| b.names).collect();
    let decoration = match decorated {
        None => None,
        Some(loc) => {
            let originals_list =
                originals.as_ref().ok_or_else(|| invalid(loc, "decoration", "decoration needs an originals line"))?;
            let mut origins = Vec::new();
            for list in &half_edge_names {
                let mut o = Vec::new();
                for name in list {
                    o.push(originals_list.iter().position(|n| n == name).ok_or_else(|| {
                        invalid(loc, "decoration-origin", format!("'{name}' is not an original half-edge"))
                    })?);
                }
                origins.push(o);
            }
            Some(TangentDecoration { half_edge_count: originals_list.len(), origins, chains, attachments })
        }
    };
    Ok(SemistableDocument {
        component_names,
        half_edge_names,
        semistable,
        originals: originals.unwrap_or_default(),
        decoration,
    })
}
