#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use ribbon_moduli::complex::{enumerate_by_cycle_type, GraphFilter};
use ribbon_moduli::format::{parse, Document, GraphDocument};
use ribbon_moduli::{Labeling, Permutation, RibbonGraph};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Every `.rg` file of the fixture corpus, sorted by name.
pub fn fixture_texts() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .filter_map(|entry| {
            let path = entry.ok()?.path();
            (path.extension()? == "rg").then(|| {
                let name = path.file_name().unwrap().to_string_lossy().into_owned();
                (name, std::fs::read_to_string(&path).unwrap())
            })
        })
        .collect();
    out.sort();
    out
}

pub fn fixture_graphs() -> Vec<(String, GraphDocument)> {
    fixture_texts()
        .into_iter()
        .filter_map(|(name, text)| match parse(&text).unwrap() {
            Document::Graph(g) => Some((name, g)),
            Document::Semistable(_) => None,
        })
        .collect()
}

/// Fixture graphs plus all cusp-labeled trivalent graphs of small types.
pub fn corpus() -> Vec<(String, RibbonGraph, Labeling)> {
    let mut out: Vec<_> = fixture_graphs().into_iter().map(|(n, d)| (n, d.graph, d.labels)).collect();
    for (genus, labels) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
        let filter = GraphFilter { genus, labels, min_valence: 3, vertex_labels: false };
        for (i, (_, (g, x))) in enumerate_by_cycle_type(&filter, 12).into_iter().enumerate() {
            out.push((format!("cell({genus},{labels})#{i}"), g, x));
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, max_half_edges: usize) -> RibbonGraph {
    let n = 2 * rng.gen_range(1..=max_half_edges / 2);
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    let sigma0 = Permutation::from_images(images).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let pairs: Vec<Vec<usize>> = order.chunks(2).map(|c| c.to_vec()).collect();
    let sigma1 = Permutation::from_cycles(n, &pairs).unwrap();
    RibbonGraph::from_permutations(sigma0, sigma1).unwrap()
}
