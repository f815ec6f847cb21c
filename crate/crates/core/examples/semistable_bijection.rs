//! From a graph with a permissible sequence to a semistable ribbon graph with
//! tangent decorations, and back.

use ribbon_moduli::format::{parse, to_text, Document, SemistableDocument};
use ribbon_moduli::semistable::{from_permissible, to_primitive, PermissibleSequence};

fn main() {
    let text = include_str!("../tests/fixtures/theta_staged.rg");
    let Document::Graph(doc) = parse(text).unwrap() else { unreachable!() };
    let seq = PermissibleSequence::new(doc.graph.clone(), doc.labels.clone(), doc.stages.clone()).unwrap();
    println!("depth {}: Z_1 = {:?}", seq.depth(), seq.stage(1));

    let (s, t) = from_permissible(&seq).unwrap();
    println!("{} components at orders {:?}, {} node pairs", s.components.len(), s.order.levels, s.node_pairs.len());
    assert!(s.is_valid());

    let semistable = Document::Semistable(SemistableDocument::from_decorated(s.clone(), t.clone(), doc.names));
    print!("{}", to_text(&semistable));

    let back = to_primitive(&s, &t).unwrap();
    println!("round trip recovers the sequence: {}", back == seq);
}
