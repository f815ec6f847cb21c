mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ribbon_moduli::complex::{
    automorphisms, canonical_form, canonical_form_staged, cell_faces, enumerate_cells, permissible_sequences,
    relabel_graph, EnumerateOptions, FaceKind,
};
use ribbon_moduli::metric::{decoration_profile, perimeters, Rational, SemistableConformalStructure};
use ribbon_moduli::polytope::{blowup_simplex, blowup_simplex_with, BlowupFiltration, DepthSchedule};
use ribbon_moduli::semistable::{from_permissible, to_primitive, PermissibleSequence};
use ribbon_moduli::subsets::{
    classify_subset, exceptional_pairing, is_negligible, max_semistable, max_semistable_in_order, quotient, SubsetClass,
    SubsetError,
};
use ribbon_moduli::{EdgeSet, Labeling, RibbonGraph};

type Entry = (String, RibbonGraph, Labeling);

fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| common::corpus().into_iter().filter(|(_, g, _)| g.edge_count() <= 8).collect())
}

fn graph_from(seed: u64) -> RibbonGraph {
    common::random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 12)
}

fn edge_subset(g: &RibbonGraph, mask: u32) -> EdgeSet {
    (0..g.edge_count()).filter(|e| mask >> e & 1 == 1).collect()
}

fn proper(g: &RibbonGraph, z: &EdgeSet) -> bool {
    z.len() < g.edge_count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma0_after_boundary_is_sigma1(seed in any::<u64>()) {
        let g = graph_from(seed);
        prop_assert_eq!(g.sigma0().compose(g.sigma_inf()), g.sigma1().clone());
    }

    #[test]
    fn euler_characteristic_splits_over_components(seed in any::<u64>()) {
        let g = graph_from(seed);
        let ty = g.topological_type();
        let sum: i64 = ty.components.iter().map(|c| 2 - 2 * c.genus as i64 - c.cusps as i64).sum();
        prop_assert_eq!(sum, g.vertex_count() as i64 - g.edge_count() as i64);
    }

    #[test]
    fn dual_swaps_vertices_and_cusps(seed in any::<u64>()) {
        let g = graph_from(seed);
        let d = g.dual();
        prop_assert_eq!(d.cusp_count(), g.vertex_count());
        prop_assert_eq!(d.vertex_count(), g.cusp_count());
        prop_assert_eq!(d.edge_count(), g.edge_count());
    }

    #[test]
    fn orbits_are_ordered_by_least_half_edge(seed in any::<u64>()) {
        let g = graph_from(seed);
        let orbits = g.orbits();
        for list in [&orbits.vertices, &orbits.edges, &orbits.cusps] {
            prop_assert!(list.windows(2).all(|w| w[0][0] < w[1][0]));
            prop_assert!(list.iter().all(|o| o[0] == *o.iter().min().unwrap()));
        }
        prop_assert_eq!(g.orbits(), orbits);
    }

    #[test]
    fn full_perimeters_double_count_lengths(seed in any::<u64>(), raw in prop::collection::vec(1i64..100, 6)) {
        let g = graph_from(seed);
        let lengths: Vec<Rational> = (0..g.edge_count()).map(|e| Rational::from_integer(raw[e % 6].into())).collect();
        let full: Rational = perimeters(&g, &lengths).into_iter().map(|(_, p)| p * Rational::from_integer(2.into())).sum();
        let total: Rational = lengths.iter().sum();
        prop_assert_eq!(full, total * Rational::from_integer(2.into()));
    }

    #[test]
    fn semistable_core_ignores_processing_order(index in any::<prop::sample::Index>(), mask in any::<u32>(), seed in any::<u64>()) {
        let (_, g, x) = index.get(corpus());
        let z = edge_subset(g, mask);
        prop_assume!(proper(g, &z));
        let core = max_semistable(g, x, &z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let mut order: Vec<usize> = z.iter().copied().collect();
            order.shuffle(&mut rng);
            prop_assert_eq!(&max_semistable_in_order(g, x, &z, &order), &core);
        }
    }

    #[test]
    fn negligible_collapses_compose(index in any::<prop::sample::Index>(), a in any::<u32>(), b in any::<u32>()) {
        let (_, g, x) = index.get(corpus());
        let z = edge_subset(g, a);
        let w: EdgeSet = edge_subset(g, b).difference(&z).copied().collect();
        let union: EdgeSet = z.union(&w).copied().collect();
        prop_assume!(proper(g, &union) && is_negligible(g, x, &z) && is_negligible(g, x, &w));
        prop_assume!(is_negligible(g, x, &union));
        let direct = quotient(g, x, &union).unwrap();
        let first = quotient(g, x, &z).unwrap();
        let w_image: EdgeSet = w.iter().map(|e| first.edge_map[e]).collect();
        let second = quotient(&first.induced.graph, &first.labels, &w_image).unwrap();
        prop_assert_eq!(
            canonical_form(&direct.induced.graph, &direct.labels).0,
            canonical_form(&second.induced.graph, &second.labels).0
        );
    }

    #[test]
    fn exceptional_pairing_is_injective(index in any::<prop::sample::Index>(), mask in any::<u32>()) {
        let (_, g, x) = index.get(corpus());
        let z = edge_subset(g, mask);
        prop_assume!(proper(g, &z));
        let semistable = !matches!(classify_subset(g, x, &z).unwrap(), SubsetClass::Negligible);
        let result = exceptional_pairing(g, &z);
        if semistable {
            // The predecessor orbits of a semistable subset never disagree.
            prop_assert!(!matches!(result, Err(SubsetError::AmbiguousPairing(_))));
        }
        if let Ok(pairs) = result {
            let vertices: BTreeSet<usize> = pairs.iter().map(|p| *p.vertex.iter().min().unwrap()).collect();
            let cycles: BTreeSet<usize> = pairs.iter().map(|p| *p.cycle.iter().min().unwrap()).collect();
            prop_assert_eq!(vertices.len(), pairs.len());
            prop_assert_eq!(cycles.len(), pairs.len());
        }
    }

    #[test]
    fn canonical_relabeling_is_an_isomorphism(index in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let (_, g, x) = index.get(corpus());
        let mut shuffle: Vec<usize> = (0..g.half_edge_count()).collect();
        shuffle.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let (h, y) = relabel_graph(g, x, &shuffle);
        let (form_g, to_g) = canonical_form(g, x);
        let (form_h, to_h) = canonical_form(&h, &y);
        prop_assert_eq!(&form_g, &form_h);
        // to_h⁻¹ ∘ to_g carries g onto h.
        let mut inverse = vec![0; to_h.len()];
        for (i, &j) in to_h.iter().enumerate() {
            inverse[j] = i;
        }
        let iso: Vec<usize> = to_g.iter().map(|&c| inverse[c]).collect();
        let (image, image_labels) = relabel_graph(g, x, &iso);
        prop_assert_eq!(image, h);
        prop_assert_eq!(image_labels, y);
    }

    #[test]
    fn polytope_invariants(n in 3usize..=5, mask in any::<u32>(), extra in any::<u32>()) {
        let all: Vec<BTreeSet<usize>> = (1u32..(1 << n) - 1)
            .map(|m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
            .filter(|s: &BTreeSet<usize>| s.len() <= n - 2)
            .collect();
        let chosen: Vec<BTreeSet<usize>> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
        let (filtration, _) = BlowupFiltration::new(n, chosen.clone()).unwrap();
        let lattice = blowup_simplex(&filtration);
        prop_assert!(lattice.satisfies_euler());
        prop_assert!(lattice.is_graded_lattice());
        prop_assert!(lattice.is_simple());
        let halved = blowup_simplex_with(&filtration, &DepthSchedule::default().halved());
        prop_assert_eq!(lattice.signature(), halved.signature());

        let added = all[extra as usize % all.len()].clone();
        let mut more = chosen.clone();
        more.push(added);
        let bigger = blowup_simplex(&BlowupFiltration::new(n, more).unwrap().0);
        prop_assert!(bigger.coordinates.len() >= lattice.coordinates.len());

        let mut padded = chosen;
        padded.push((1..n).collect());
        padded.push((1..=n).collect());
        let (same, dropped) = BlowupFiltration::new(n, padded).unwrap();
        prop_assert_eq!(dropped.len(), 2);
        prop_assert_eq!(blowup_simplex(&same).signature(), lattice.signature());
    }
}

fn sequences() -> Vec<PermissibleSequence> {
    corpus()
        .iter()
        .filter(|(_, g, _)| !g.is_circle() && g.half_edge_count() <= 10)
        .flat_map(|(_, g, x)| permissible_sequences(g, x))
        .filter(|s| s.stages.len() <= 2)
        .collect()
}

#[test]
fn semistable_outputs_validate() {
    for seq in sequences() {
        let (s, _) = from_permissible(&seq).unwrap();
        assert!(s.validate().is_empty(), "{:?}: {:?}", seq.stages, s.validate());
        for (c, _) in s.components.iter().enumerate() {
            if s.order.of(c) == 0 {
                assert!(s.nodes().iter().all(|n| n.component != c || !n.is_cusp()));
            }
        }
    }
}

#[test]
fn decoration_profiles_are_compatible() {
    for seq in sequences() {
        let stage_lengths = (0..=seq.depth())
            .map(|k| {
                let own: Vec<usize> = seq.stage(k).difference(&seq.stage(k + 1)).copied().collect();
                let share = Rational::new(1.into(), (own.len() as i64).into());
                own.into_iter().map(|e| (e, share.clone())).collect()
            })
            .collect();
        let structure = SemistableConformalStructure::new(seq.clone(), stage_lengths).unwrap();
        let (s, _, profile) = decoration_profile(&structure).unwrap();
        assert!(profile.check(&s).is_empty(), "{:?}: {:?}", seq.stages, profile.check(&s));
        assert!(s.labels.values().all(|p| !profile.get(p).is_zero() || !p.is_cusp()));
    }
}

#[test]
fn compactified_cells_are_stable_under_the_bijection() {
    let options = EnumerateOptions { compactified: true, ..EnumerateOptions::default() };
    for (g, n) in [(1, 1), (0, 4)] {
        let complex = enumerate_cells(g, n, &options).unwrap();
        for cell in &complex.cells {
            let (s, t) = from_permissible(&cell.datum).unwrap();
            assert_eq!(to_primitive(&s, &t).unwrap(), cell.datum);
            let colors: Vec<u32> = (0..cell.datum.graph.edge_count()).map(|e| cell.datum.stage_of_edge(e) as u32).collect();
            let index = cell.datum.graph.edge_index();
            for aut in automorphisms(&cell.datum.graph, &cell.datum.labels, &colors) {
                for (h, &image) in aut.iter().enumerate() {
                    assert_eq!(colors[index[h]], colors[index[image]]);
                }
            }
        }
    }
}

/// Faces of faces agree in either order when both steps are collapses, or when the
/// two edges sit in different stages. Inserting two stages out of one stage does not
/// commute in general, and neither does collapsing next to an insertion in the same stage.
#[test]
fn faces_of_faces() {
    let mut commuting = 0;
    let mut exceptions = 0;
    for seq in sequences() {
        let edges: Vec<usize> = (0..seq.graph.edge_count()).collect();
        for &e in &edges {
            for &f in edges.iter().filter(|&&f| f > e) {
                let (ke, kf) = (seq.stage_of_edge(e), seq.stage_of_edge(f));
                let step = |first: usize, k1: usize, second: usize| {
                    let a = cell_faces(&seq, k1, first).ok()?;
                    let moved = *a.edge_map.get(&second)?;
                    let k2 = a.cell.stage_of_edge(moved);
                    let b = cell_faces(&a.cell, k2, moved).ok()?;
                    Some((a.kind, b.kind, canonical_form_staged(&b.cell).0))
                };
                let (Some(x), Some(y)) = (step(e, ke, f), step(f, kf, e)) else { continue };
                let all_collapse = [x.0, x.1, y.0, y.1].iter().all(|k| *k == FaceKind::Collapse);
                if all_collapse || ke != kf {
                    assert_eq!(x.2, y.2, "{:?} edges {e} {f}", seq.stages);
                    commuting += 1;
                } else if x.2 != y.2 {
                    exceptions += 1;
                }
            }
        }
    }
    assert!(commuting > 0);
    assert!(exceptions > 0, "expected same-stage insertions that do not commute");
}

#[test]
fn enumerated_types_have_even_parity() {
    for (name, g, _) in common::corpus() {
        for c in g.topological_type().components {
            assert_eq!((2 - c.euler - c.cusps as i64).rem_euclid(2), 0, "{name}");
        }
    }
}
