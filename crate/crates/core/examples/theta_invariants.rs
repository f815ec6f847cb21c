//! Permutation data, invariants and symmetries of the theta graph.

use ribbon_moduli::complex::automorphism_report;
use ribbon_moduli::{Labeling, Point, RibbonGraph};

fn main() {
    // h1..h6 are 0..5.
    let theta = RibbonGraph::build(6, &[vec![0, 4, 2], vec![1, 5, 3]], &[(0, 1), (2, 3), (4, 5)]).unwrap();
    println!("sigma0    = {}", theta.sigma0());
    println!("sigma1    = {}", theta.sigma1());
    println!("sigma_inf = {}", theta.sigma_inf());

    let ty = theta.topological_type();
    println!("genus {}, {} cusp(s), {} vertices, {} edges", ty.genus, ty.cusp_count, theta.vertex_count(), theta.edge_count());

    let labels = Labeling::from_pairs([("p", Point::Cusp(0))]).unwrap();
    let aut = automorphism_report(&theta, &labels);
    println!("automorphisms: {} (full), {} (acting on edges)", aut.full_order, aut.edge_image_order);

    let dual = theta.dual();
    println!("dual: {} vertices, {} cusps", dual.vertex_count(), dual.cusp_count());
    println!("circle: type {:?}", RibbonGraph::circle().topological_type().components[0]);
}
