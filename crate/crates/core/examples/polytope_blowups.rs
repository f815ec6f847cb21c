//! Truncating simplices along face filtrations.

use std::collections::BTreeSet;

use ribbon_moduli::polytope::{blowup_simplex, BlowupFiltration};

fn faces(n: usize, list: &[&[usize]]) -> BlowupFiltration {
    BlowupFiltration::new(n, list.iter().map(|f| f.iter().copied().collect::<BTreeSet<_>>())).unwrap().0
}

fn main() {
    println!("simplex:        {:?}", blowup_simplex(&BlowupFiltration::empty(4).unwrap()).f_vector());
    println!("hexagon:        {:?}", blowup_simplex(&BlowupFiltration::full(3).unwrap().0).f_vector());
    println!("every face:     {:?}", blowup_simplex(&BlowupFiltration::full(4).unwrap().0).f_vector());
    let cyclic = faces(4, &[&[1], &[2], &[3], &[4], &[1, 2], &[2, 3], &[3, 4], &[1, 4]]);
    println!("cyclic faces:   {:?}", blowup_simplex(&cyclic).f_vector());
    let assoc = faces(4, &[&[2], &[3], &[1, 2], &[2, 3], &[3, 4]]);
    let lattice = blowup_simplex(&assoc);
    println!("associahedron:  {:?}, Euler relation {}", lattice.f_vector(), lattice.satisfies_euler());
    println!("one edge:       {:?}", blowup_simplex(&faces(4, &[&[3, 4]])).f_vector());
}
