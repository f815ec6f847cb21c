use super::*;
use crate::graph::fixtures::theta;
use crate::graph::Point;
use crate::semistable::{from_permissible, to_primitive, PermissibleSequence};

const THETA: &str = "format ribbon/1
halfedges h1 h2 h3 h4 h5 h6
vertex h1 h5 h3
vertex h2 h6 h4
edge h1 h2
edge h3 h4
edge h5 h6
label p cusp h1
";

fn graph(text: &str) -> GraphDocument {
    match parse(text).unwrap() {
        Document::Graph(g) => g,
        other => panic!("expected a graph, got {other:?}"),
    }
}

#[test]
fn theta_document() {
    let doc = graph(THETA);
    assert_eq!(doc.graph, theta());
    assert_eq!(doc.labels.get("p"), Some(Point::Cusp(0)));
    assert_eq!(to_text(&Document::Graph(doc)), THETA);
}

#[test]
fn circle_document() {
    let doc = graph("format ribbon/1\ncircle\nlabel a side 0\nlabel b side 1\n");
    assert!(doc.graph.is_circle());
    assert_eq!(doc.labels.get("a"), Some(Point::CircleSide(0)));
}

#[test]
fn duplicate_half_edge_is_located() {
    let text = "format ribbon/1\nhalfedges a b\nvertex a b\nvertex  b\nedge a b\n";
    let err = parse(text).unwrap_err();
    assert_eq!((err.line, err.column, err.rule.as_str()), (4, 9, "vertex-overlap"));
    assert_eq!(err.kind, ErrorKind::Validation);
}

#[test]
fn syntax_errors() {
    let err = parse("format ribbon/2\n").unwrap_err();
    assert_eq!((err.line, err.column, err.kind), (1, 8, ErrorKind::Syntax));
    let err = parse(&format!("{THETA}length h1 1/0\n")).unwrap_err();
    assert_eq!((err.line, err.column, err.rule.as_str()), (9, 11, "rational"));
    let err = parse("").unwrap_err();
    assert_eq!(err.rule, "header");
}

#[test]
fn stages_and_lengths() {
    let text = format!("{THETA}stage 1 h1 h3\nlength h1 1/2\nlength h3 1/2\nlength h5 1\n");
    let doc = graph(&text);
    assert_eq!(doc.stages.len(), 1);
    assert_eq!(doc.lengths.as_ref().unwrap().len(), 3);
    assert_eq!(to_text(&Document::Graph(doc)), text);
    let err = parse(&format!("{THETA}stage 1 h1\n")).unwrap_err();
    assert_eq!(err.rule, "permissible");
}

#[test]
fn decorated_round_trip() {
    let doc = graph(&format!("{THETA}stage 1 h1 h3\n"));
    let seq = PermissibleSequence::new(doc.graph.clone(), doc.labels.clone(), doc.stages.clone()).unwrap();
    let (s, t) = from_permissible(&seq).unwrap();
    let semi = Document::Semistable(SemistableDocument::from_decorated(s, t, doc.names.clone()));
    let text = to_text(&semi);
    let again = parse(&text).unwrap();
    assert_eq!(again, semi);
    let Document::Semistable(d) = again else { unreachable!() };
    let back = to_primitive(&d.semistable, d.decoration.as_ref().unwrap()).unwrap();
    assert_eq!(back, seq);
    assert_eq!(to_text(&Document::Semistable(d)), text);
}
