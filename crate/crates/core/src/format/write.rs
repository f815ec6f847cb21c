use std::fmt::Write;

use super::{Document, GraphDocument, SemistableDocument, HEADER};
use crate::graph::{Point, RibbonGraph};
use crate::semistable::NodePoint;

fn point(p: Point, names: &[String]) -> String {
    match p {
        Point::Vertex(h) => format!("vertex {}", names[h]),
        Point::Cusp(h) => format!("cusp {}", names[h]),
        Point::CircleSide(s) => format!("side {s}"),
    }
}

fn graph_lines(out: &mut String, graph: &RibbonGraph, names: &[String]) {
    if graph.is_circle() {
        out.push_str("circle\n");
        return;
    }
    if !names.is_empty() {
        let _ = writeln!(out, "halfedges {}", names.join(" "));
    }
    for cycle in graph.vertices() {
        let cycle: Vec<&str> = cycle.iter().map(|&h| names[h].as_str()).collect();
        let _ = writeln!(out, "vertex {}", cycle.join(" "));
    }
    for [a, b] in graph.edges() {
        let _ = writeln!(out, "edge {} {}", names[a], names[b]);
    }
}

fn graph_text(doc: &GraphDocument) -> String {
    let mut out = format!("{HEADER}\n");
    graph_lines(&mut out, &doc.graph, &doc.names);
    for (name, p) in doc.labels.iter() {
        let _ = writeln!(out, "label {name} {}", point(p, &doc.names));
    }
    let edges = doc.graph.edges();
    for (k, z) in doc.stages.iter().enumerate() {
        let list: Vec<&str> = z.iter().map(|&e| doc.names[edges[e][0]].as_str()).collect();
        let _ = writeln!(out, "stage {} {}", k + 1, list.join(" "));
    }
    if let Some(lengths) = &doc.lengths {
        for (e, value) in lengths.iter().enumerate() {
            let _ = writeln!(out, "length {} {value}", doc.names[edges[e][0]]);
        }
    }
    out
}

fn semistable_text(doc: &SemistableDocument) -> String {
    let s = &doc.semistable;
    let node = |n: &NodePoint| {
        format!("{} {}", doc.component_names[n.component], point(n.point, &doc.half_edge_names[n.component]))
    };
    let mut out = format!("{HEADER}\n");
    for (c, graph) in s.components.iter().enumerate() {
        let _ = writeln!(out, "component {} order {}", doc.component_names[c], s.order.of(c));
        graph_lines(&mut out, graph, &doc.half_edge_names[c]);
    }
    for (a, b) in &s.node_pairs {
        let _ = writeln!(out, "node {} {}", node(a), node(b));
    }
    for (name, at) in &s.labels {
        let _ = writeln!(out, "label {name} {}", node(at));
    }
    if let Some(t) = &doc.decoration {
        let original = |h: &usize| doc.originals[*h].as_str();
        let _ = writeln!(out, "originals {}", doc.originals.join(" "));
        for (c, chains) in t.chains.iter().enumerate() {
            for (&key, chain) in chains {
                let key = if s.components[c].is_circle() { "circle" } else { doc.half_edge_names[c][key].as_str() };
                let list: Vec<&str> = chain.iter().map(original).collect();
                let _ = writeln!(out, "chain {} {key} {}", doc.component_names[c], list.join(" "));
            }
        }
        for at in &t.attachments {
            let _ = write!(out, "attach {} {}", node(&at.vertex_node), node(&at.cusp_node));
            for corner in &at.corners {
                let list: Vec<&str> = corner.attached.iter().map(original).collect();
                let _ = write!(out, " corner {} {}", original(&corner.after), list.join(" "));
            }
            out.push('\n');
        }
    }
    out
}

/// Canonical text: orbits start at their least half-edge, labels are sorted by name.
pub fn to_text(doc: &Document) -> String {
    match doc {
        Document::Graph(g) => graph_text(g),
        Document::Semistable(s) => semistable_text(s),
    }
}

/// JSON mirroring the text blocks.
pub fn to_machine(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}
