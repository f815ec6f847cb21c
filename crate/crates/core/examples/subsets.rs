//! Negligible, semistable and stable edge subsets; the maximal semistable subset
//! and collapsing negligible edges.

use ribbon_moduli::format::{parse, Document};
use ribbon_moduli::subsets::{classify_subset, max_semistable, max_stable, quotient, subgraph};
use ribbon_moduli::EdgeSet;

const TETRAHEDRON: &str = include_str!("../tests/fixtures/tetrahedron.rg");

fn main() {
    let Document::Graph(doc) = parse(TETRAHEDRON).unwrap() else { unreachable!() };
    let (g, x) = (&doc.graph, &doc.labels);
    let edge_name = |e: usize| doc.names[g.edges()[e][0]].clone();

    for mask in [0b000011u32, 0b001011, 0b011110, 0b111110] {
        let z: EdgeSet = (0..g.edge_count()).filter(|e| mask >> e & 1 == 1).collect();
        let names: Vec<String> = z.iter().map(|&e| edge_name(e)).collect();
        let class = classify_subset(g, x, &z).unwrap();
        let sst = max_semistable(g, x, &z).unwrap();
        let st = max_stable(g, x, &z).unwrap();
        let sub = subgraph(g, &z).unwrap();
        println!(
            "Z = {{{}}}: {class:?}; subgraph has {} vertices; |Z^sst| = {}, |Z^st| = {}",
            names.join(" "),
            sub.graph.vertex_count(),
            sst.len(),
            st.len()
        );
    }

    let path: EdgeSet = [0, 1].into_iter().collect();
    let q = quotient(g, x, &path).unwrap();
    let ty = q.induced.graph.topological_type();
    println!("collapsing a path leaves genus {} with {} labels and {} edges", ty.genus, q.labels.len(), q.induced.graph.edge_count());
}
