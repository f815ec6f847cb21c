//! Perimeters, decorations on the semistable graph, and the one-parameter
//! degeneration of a staged metric with its recovery.

use std::collections::BTreeMap;

use ribbon_moduli::format::{parse, Document};
use ribbon_moduli::metric::{
    classify_qrs, decoration_profile, degeneration_family, perimeters, rational, recover_stratification,
    smoothing_rescale, RValue, RescaleInput, SemistableConformalStructure,
};
use ribbon_moduli::semistable::PermissibleSequence;

fn main() {
    let Document::Graph(doc) = parse(include_str!("../tests/fixtures/theta_staged.rg")).unwrap() else {
        unreachable!()
    };
    let lengths = doc.lengths.clone().unwrap();
    for (p, v) in perimeters(&doc.graph, &lengths) {
        println!("perimeter at {p:?}: {v}");
    }

    let seq = PermissibleSequence::new(doc.graph.clone(), doc.labels.clone(), doc.stages.clone()).unwrap();
    let stage_lengths: Vec<BTreeMap<usize, _>> = (0..=seq.depth())
        .map(|k| seq.stage(k).difference(&seq.stage(k + 1)).map(|&e| (e, lengths[e].clone())).collect())
        .collect();
    let structure = SemistableConformalStructure::new(seq, stage_lengths).unwrap();

    let (s, _, profile) = decoration_profile(&structure).unwrap();
    for (p, v) in &profile.values {
        println!("decoration at component {} {:?}: {v}", p.component, p.point);
    }
    let qrs = classify_qrs(&s, 1).unwrap();
    println!("smoothing level 1: |Q| = {}, |R| = {}, |S| = {}", qrs.q.len(), qrs.r.len(), qrs.s.len());

    let input = RescaleInput {
        q: vec![rational(1, 2)],
        r: vec![RValue::CirclePair(rational(1, 4), rational(1, 4))],
        s: vec![rational(1, 1)],
    };
    let out = smoothing_rescale(&input, &rational(1, 8)).unwrap();
    println!("rescaled: new edge {}, merged level total {}", out.lengths[0], out.merged_total());

    let metric = degeneration_family(&structure, &rational(1, 64)).unwrap();
    let shown: Vec<String> = metric.lengths.iter().map(ToString::to_string).collect();
    println!("t = 1/64: lengths {}", shown.join(", "));
    let back = recover_stratification(&doc.graph, &doc.labels, &metric, &rational(1, 8)).unwrap();
    println!("recovered the staged metric: {}", back == structure);
}
