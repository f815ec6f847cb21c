//! Blowing up a vertex and gluing a deeper component into the resulting cycle.

use ribbon_moduli::graph::fixtures::theta;
use ribbon_moduli::semistable::{blowup_vertex, enumerate_gluings, glue};
use ribbon_moduli::RibbonGraph;

fn main() {
    // A trivalent star with three leaves.
    let star = RibbonGraph::build(6, &[vec![0, 2, 4], vec![1], vec![3], vec![5]], &[(0, 1), (2, 3), (4, 5)]).unwrap();
    let (blown, inner) = blowup_vertex(&star, 0).unwrap();
    println!("blowup: {} vertices, {} edges, new cycle of length {}", blown.vertex_count(), blown.edge_count(), blown.cusp_of(inner).len());

    for (a, b) in [(1, 0), (1, 1), (2, 1), (3, 6)] {
        println!("gluings of a {a}-valent vertex into a cycle of {b}: {}", enumerate_gluings(a, b).len());
    }

    let inner_graph = theta();
    let patterns = enumerate_gluings(3, inner_graph.cusps()[0].len());
    let glued = glue(&star, 0, &inner_graph, Some(0), &patterns[0]).unwrap();
    let ty = glued.topological_type();
    println!("first gluing: genus {}, {} cusps, {} edges", ty.genus, ty.cusp_count, glued.edge_count());
}
