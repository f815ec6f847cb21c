//! Orbicells of small moduli spaces and their orbifold Euler characteristics.

use ribbon_moduli::complex::{enumerate_cells, orbifold_euler_characteristic, Convention, EnumerateOptions};

fn main() {
    for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
        let c = enumerate_cells(g, n, &EnumerateOptions::default()).unwrap();
        println!(
            "({g},{n}): {} open cells by dimension {:?}, chi = {}",
            c.cells.len(),
            c.counts_by_dimension(),
            orbifold_euler_characteristic(&c, Convention::Full)
        );
    }

    let c = enumerate_cells(1, 1, &EnumerateOptions::default()).unwrap();
    for (cell, faces) in c.cells.iter().zip(&c.incidence) {
        println!("  {} edges, aut {}/{}, codimension-one faces {:?}", cell.datum.graph.edge_count(), cell.aut.full_order, cell.aut.edge_image_order, faces);
    }

    let compact = EnumerateOptions { compactified: true, ..EnumerateOptions::default() };
    let decorated = enumerate_cells(1, 1, &compact).unwrap();
    let undecorated = enumerate_cells(1, 1, &EnumerateOptions { decorated: false, ..compact }).unwrap();
    println!("(1,1) compactified: {} decorated cells, {} undecorated", decorated.cells.len(), undecorated.cells.len());

    match enumerate_cells(0, 2, &EnumerateOptions::default()) {
        Err(e) => println!("(0,2): {e}"),
        Ok(_) => unreachable!(),
    }
}
