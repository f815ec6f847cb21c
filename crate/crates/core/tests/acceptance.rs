//! One line per acceptance criterion; exits nonzero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ribbon_moduli::complex::{
    automorphism_report, canonical_form, enumerate_by_cycle_type, enumerate_cells, enumerate_naive,
    orbifold_euler_characteristic, permissible_sequences, Convention, EnumerateOptions, GraphFilter,
};
use ribbon_moduli::format::{parse, to_text};
use ribbon_moduli::graph::fixtures::theta;
use ribbon_moduli::metric::{
    degeneration_family, perimeters, rational, recover_stratification, smoothing_rescale, RValue,
    Rational, RescaleInput, SemistableConformalStructure,
};
use ribbon_moduli::polytope::{blowup_simplex, blowup_simplex_with, BlowupFiltration, DepthSchedule};
use ribbon_moduli::semistable::{from_permissible, to_primitive};
use ribbon_moduli::subsets::{is_negligible, is_semistable, max_semistable, quotient};
use ribbon_moduli::{EdgeSet, Labeling, Point, RibbonGraph};

type Outcome = Result<String, String>;

fn subsets_of(z: &EdgeSet) -> Vec<EdgeSet> {
    let items: Vec<usize> = z.iter().copied().collect();
    (0u32..1 << items.len())
        .map(|mask| (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

fn proper_subsets(g: &RibbonGraph) -> Vec<EdgeSet> {
    let all: EdgeSet = (0..g.edge_count()).collect();
    subsets_of(&all).into_iter().filter(|z| z.len() < g.edge_count()).collect()
}

fn criterion_1() -> Outcome {
    let g = RibbonGraph::build(6, &[vec![0, 4, 2], vec![1, 5, 3]], &[(0, 1), (2, 3), (4, 5)]).map_err(|e| e.to_string())?;
    if g != theta() {
        return Err("printed permutations disagree with the fixture".into());
    }
    let boundary = g.sigma_inf().cycles();
    if boundary != vec![vec![0, 3, 4, 1, 2, 5]] {
        return Err(format!("boundary cycles {boundary:?}"));
    }
    let x = Labeling::from_pairs([("p", Point::Cusp(0))]).unwrap();
    let ty = g.topological_type();
    let aut = automorphism_report(&g, &x);
    if (ty.genus, x.len(), aut.full_order, aut.edge_image_order) != (1, 1, 6, 3) {
        return Err(format!("type ({},{}), aut {}/{}", ty.genus, x.len(), aut.full_order, aut.edge_image_order));
    }
    Ok("boundary (h1 h4 h5 h2 h3 h6), type (1,1), aut 6/3".into())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let empty = Labeling::new();
    for i in 0..1000 {
        let g = common::random_graph(&mut rng, 12);
        if canonical_form(&g.dual().dual(), &empty).0 != canonical_form(&g, &empty).0 {
            return Err(format!("graph #{i}: {g:?}"));
        }
    }
    Ok("1000/1000 random graphs".into())
}

fn criterion_3(corpus: &[(String, RibbonGraph, Labeling)]) -> Outcome {
    let mut checked = 0;
    for (name, g, x) in corpus.iter().filter(|(_, g, _)| g.edge_count() <= 8) {
        for z in proper_subsets(g) {
            let core = max_semistable(g, x, &z).map_err(|e| format!("{name}: {e}"))?;
            if !core.is_subset(&z) || !is_semistable(g, x, &core) {
                return Err(format!("{name}: core of {z:?} is {core:?}"));
            }
            for w in subsets_of(&z) {
                if is_semistable(g, x, &w) && !w.is_subset(&core) {
                    return Err(format!("{name}: semistable {w:?} escapes the core {core:?} of {z:?}"));
                }
            }
            if core.is_empty() != is_negligible(g, x, &z) {
                return Err(format!("{name}: core of {z:?} is empty but negligibility disagrees"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} subsets"))
}

fn criterion_4(corpus: &[(String, RibbonGraph, Labeling)]) -> Outcome {
    let mut checked = 0;
    for (name, g, x) in corpus.iter().filter(|(_, g, _)| g.edge_count() <= 8) {
        let before = (g.topological_type().genus, x.len(), x.iter().map(|(n, _)| n.to_string()).collect::<Vec<_>>());
        for z in proper_subsets(g).into_iter().filter(|z| !z.is_empty() && is_negligible(g, x, z)) {
            let q = quotient(g, x, &z).map_err(|e| format!("{name}: {e}"))?;
            let after = (
                q.induced.graph.topological_type().genus,
                q.labels.len(),
                q.labels.iter().map(|(n, _)| n.to_string()).collect::<Vec<_>>(),
            );
            if after != before || q.labels.validate(&q.induced.graph).is_err() {
                return Err(format!("{name}: collapsing {z:?} gives {after:?}, expected {before:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} negligible collapses"))
}

fn criterion_5(corpus: &[(String, RibbonGraph, Labeling)]) -> Outcome {
    let mut checked = 0;
    // A lone circle has type (0,2), which has no stable model.
    for (name, g, x) in corpus.iter().filter(|(_, g, _)| !g.is_circle() && g.half_edge_count() <= 10) {
        for seq in permissible_sequences(g, x).into_iter().filter(|s| s.stages.len() <= 2) {
            let (s, t) = from_permissible(&seq).map_err(|e| format!("{name}: {e}"))?;
            let back = to_primitive(&s, &t).map_err(|e| format!("{name} {:?}: {e}", seq.stages))?;
            if back != seq {
                return Err(format!("{name}: {:?} came back as {:?}", seq.stages, back.stages));
            }
            let again = from_permissible(&back).map_err(|e| e.to_string())?;
            if again != (s, t) {
                return Err(format!("{name}: {:?} decorates differently the second time", seq.stages));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sequences"))
}

/// `χ(M_{1,1}) = ζ(−1) = −B_2 / 2`.
fn harer_zagier_genus_one() -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=2usize {
        let mut binom = vec![Rational::one()];
        for k in 1..=m + 1 {
            let next = &binom[k - 1] * Rational::from_integer(((m + 1 - k + 1) as i64).into())
                / Rational::from_integer((k as i64).into());
            binom.push(next);
        }
        let sum: Rational = (0..m).map(|k| &binom[k] * &b[k]).sum();
        b.push(-sum / Rational::from_integer(((m + 1) as i64).into()));
    }
    -b[2].clone() / Rational::from_integer(2.into())
}

fn criterion_6() -> Outcome {
    let types = [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)];
    let mut classes = 0;
    for (genus, labels) in types {
        let filter = GraphFilter { genus, labels, min_valence: 3, vertex_labels: false };
        let fast: BTreeSet<_> = enumerate_by_cycle_type(&filter, 8).into_keys().collect();
        let slow: BTreeSet<_> = enumerate_naive(&filter, 8).into_keys().collect();
        if fast != slow {
            return Err(format!("({genus},{labels}): {} vs {} classes", fast.len(), slow.len()));
        }
        classes += fast.len();
    }
    let c = enumerate_cells(1, 1, &EnumerateOptions::default()).map_err(|e| e.to_string())?;
    let orders: BTreeSet<u64> = c.cells.iter().map(|cell| cell.aut.full_order).collect();
    let chi = orbifold_euler_characteristic(&c, Convention::Full);
    let oracle = harer_zagier_genus_one();
    if c.cells.len() != 2 || orders != BTreeSet::from([4, 6]) || chi.abs() != rational(1, 12) || chi.abs() != oracle.abs()
    {
        return Err(format!("(1,1): {} cells, orders {orders:?}, chi {chi}, oracle {oracle}", c.cells.len()));
    }
    Ok(format!("{classes} classes over {} types agree; (1,1) has 2 cells, |chi| = 1/12", types.len()))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1i64..=50).into(), rng.gen_range(1i64..=50).into())
}

fn normalized(values: Vec<Rational>) -> Vec<Rational> {
    let total: Rational = values.iter().sum();
    values.into_iter().map(|v| v / &total).collect()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let g = common::random_graph(&mut rng, 12);
        let lengths: Vec<Rational> = (0..g.edge_count()).map(|_| random_rational(&mut rng)).collect();
        let total: Rational = lengths.iter().sum();
        let sum: Rational = perimeters(&g, &lengths).into_iter().map(|(_, v)| v).sum();
        if sum != total {
            return Err(format!("metric #{i}: perimeters {sum}, lengths {total}"));
        }
    }
    for i in 0..1000 {
        let case = i % 3;
        let eps = Rational::new(rng.gen_range(1i64..50).into(), 50.into());
        let count = |rng: &mut ChaCha8Rng| rng.gen_range(1..=4);
        let n_s = rng.gen_range(1..=4);
        let s = normalized((0..n_s).map(|_| random_rational(&mut rng)).collect());
        let (n_q, n_r) = match case {
            0 => (count(&mut rng), count(&mut rng)),
            1 => (0, count(&mut rng)),
            _ => (count(&mut rng), 0),
        };
        let raw: Vec<Rational> = (0..n_q + 2 * n_r).map(|_| random_rational(&mut rng)).collect();
        let raw = normalized(raw);
        let q = raw[..n_q].to_vec();
        let r = (0..n_r)
            .map(|j| {
                let (a, b) = (raw[n_q + 2 * j].clone(), raw[n_q + 2 * j + 1].clone());
                if rng.gen_bool(0.5) {
                    RValue::CirclePair(a, b)
                } else {
                    RValue::Single(a + b)
                }
            })
            .collect();
        let input = RescaleInput { q, r, s };
        let out = smoothing_rescale(&input, &eps).map_err(|e| e.to_string())?;
        let merged = out.merged_total();
        if !merged.is_one() {
            return Err(format!("rescale #{i} (case {case}): merged level sums to {merged}"));
        }
        if case == 1 && out.s != input.s {
            return Err(format!("rescale #{i}: S changed with Q empty"));
        }
    }
    Ok("1000 metrics, 1000 rescalings".into())
}

fn criterion_8(corpus: &[(String, RibbonGraph, Labeling)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = rational(1, 64);
    let theta = rational(1, 8);
    let mut checked = 0;
    for (name, g, x) in corpus.iter().filter(|(_, g, _)| g.edge_count() <= 8) {
        for seq in permissible_sequences(g, x).into_iter().filter(|s| s.depth() == 1) {
            for _ in 0..3 {
                let stage_lengths: Vec<BTreeMap<usize, Rational>> = (0..=1)
                    .map(|k| {
                        let own: Vec<usize> = seq.stage(k).difference(&seq.stage(k + 1)).copied().collect();
                        let raw: Vec<Rational> =
                            own.iter().map(|_| Rational::new(rng.gen_range(1i64..=4).into(), 4.into())).collect();
                        own.into_iter().zip(normalized(raw)).collect()
                    })
                    .collect();
                let bounded = stage_lengths.iter().all(|m| {
                    let max = m.values().max().unwrap();
                    m.values().all(|v| v * Rational::from_integer(4.into()) >= *max)
                });
                assert!(bounded);
                let structure =
                    SemistableConformalStructure::new(seq.clone(), stage_lengths).map_err(|e| e.to_string())?;
                let metric = degeneration_family(&structure, &t).map_err(|e| e.to_string())?;
                let back = recover_stratification(g, x, &metric, &theta).map_err(|e| format!("{name}: {e}"))?;
                if back != structure {
                    return Err(format!("{name} {:?}: recovered {:?}", seq.stages, back.sequence.stages));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} structures"))
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = Vec::new();
    for n in 2..=6 {
        let lattice = blowup_simplex(&BlowupFiltration::empty(n).unwrap());
        let expected: Vec<usize> = (1..n).map(|k| binomial(n, k)).collect();
        if lattice.f_vector() != expected {
            failures.push(format!("Δ^{}: {:?}", n - 1, lattice.f_vector()));
        }
        runs.push(BlowupFiltration::empty(n).unwrap());
    }
    let mut check = |label: &str, filtration: BlowupFiltration, expected: Vec<usize>| {
        let got = blowup_simplex(&filtration).f_vector();
        if got != expected {
            failures.push(format!("{label}: got {got:?}, expected {expected:?}"));
        }
        runs.push(filtration);
    };
    check("full blowup of Δ²", BlowupFiltration::full(3).unwrap().0, vec![6, 6]);
    check("full blowup of Δ³", BlowupFiltration::full(4).unwrap().0, vec![20, 30, 12]);
    let faces: [&[usize]; 5] = [&[2], &[3], &[1, 2], &[2, 3], &[3, 4]];
    let assoc = BlowupFiltration::new(4, faces.iter().map(|f| f.iter().copied().collect())).unwrap().0;
    check("associahedron filtration", assoc, vec![14, 21, 9]);
    for filtration in &runs {
        let a = blowup_simplex(filtration);
        let b = blowup_simplex_with(filtration, &DepthSchedule::default().halved());
        if !a.satisfies_euler() || !a.is_graded_lattice() {
            failures.push(format!("Euler relation fails for {:?}", filtration.subsets));
        }
        if a.signature() != b.signature() {
            failures.push(format!("halved depths change the lattice of {:?}", filtration.subsets));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} runs", runs.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

const VOCABULARY: &[&str] = &[
    "format", "ribbon/1", "halfedges", "vertex", "edge", "circle", "label", "cusp", "side", "stage", "length",
    "component", "order", "node", "originals", "chain", "attach", "corner", "h1", "h2", "h7", "C0", "C1", "0", "1",
    "2", "1/0", "-3/4", "#", "\n", " ", "\t", "é", "99999999999999999999",
];

fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(1..=4) {
        let at = rng.gen_range(0..=chars.len());
        match rng.gen_range(0..5) {
            0 if !chars.is_empty() => {
                let end = (at + rng.gen_range(1..8)).min(chars.len());
                chars.drain(at.min(end)..end);
            }
            1 => {
                let word = VOCABULARY[rng.gen_range(0..VOCABULARY.len())];
                chars.splice(at..at, format!(" {word}").chars());
            }
            2 => {
                let mut lines: Vec<String> = chars.iter().collect::<String>().lines().map(str::to_string).collect();
                if lines.len() > 2 {
                    let a = rng.gen_range(0..lines.len());
                    let b = rng.gen_range(0..lines.len());
                    if rng.gen_bool(0.5) {
                        lines.swap(a, b);
                    } else {
                        let copy = lines[a].clone();
                        lines.insert(b, copy);
                    }
                }
                chars = lines.join("\n").chars().collect();
            }
            3 if at < chars.len() => chars[at] = char::from(rng.gen_range(32u8..127)),
            _ => chars.insert(at.min(chars.len()), char::from(rng.gen_range(0u8..128))),
        }
    }
    chars.into_iter().collect()
}

fn criterion_10() -> Outcome {
    let texts = common::fixture_texts();
    for (name, text) in &texts {
        let doc = parse(text).map_err(|e| format!("{name}: {e}"))?;
        let written = to_text(&doc);
        let again = parse(&written).map_err(|e| format!("{name} rewritten: {e}"))?;
        if again != doc || to_text(&again) != written {
            return Err(format!("{name} does not round trip"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut rejected = 0;
    for i in 0..100_000 {
        let input = if i % 10 == 0 {
            (0..rng.gen_range(0..80)).map(|_| char::from(rng.gen_range(0u8..128))).collect()
        } else {
            mutate(&mut rng, &texts[i % texts.len()].1)
        };
        let lines = input.lines().count().max(1);
        match catch_unwind(AssertUnwindSafe(|| parse(&input))) {
            Err(_) => return Err(format!("parser panicked on {input:?}")),
            Ok(Ok(doc)) => {
                if parse(&to_text(&doc)).ok().as_ref() != Some(&doc) {
                    return Err(format!("accepted input does not round trip: {input:?}"));
                }
            }
            Ok(Err(e)) => {
                if e.line == 0 || e.column == 0 || e.line > lines + 1 {
                    return Err(format!("error without location: {e} for {input:?}"));
                }
                rejected += 1;
            }
        }
    }
    Ok(format!("{} fixtures round trip; 100000 fuzz inputs, {rejected} located rejections", texts.len()))
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let corpus = common::corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("theta fixture", Box::new(criterion_1)),
        ("dual involution", Box::new(criterion_2)),
        ("maximal semistable subset", Box::new(|| criterion_3(&corpus))),
        ("negligible collapse invariance", Box::new(|| criterion_4(&corpus))),
        ("bijection round trip", Box::new(|| criterion_5(&corpus))),
        ("enumeration oracle", Box::new(criterion_6)),
        ("metric identities", Box::new(criterion_7)),
        ("degeneration round trip", Box::new(|| criterion_8(&corpus))),
        ("polytope checks", Box::new(criterion_9)),
        ("parser", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {reason} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
