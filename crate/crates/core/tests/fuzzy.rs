mod common;

use common::*;
use pkn_core::fuzzy::{
    fuzzy_and, fuzzy_not, fuzzy_or, quantifier_holds, FuzzyConfig, FuzzyQuantifier,
    MembershipVector, QuantifierThresholds, RangeTerm, ScalarRange,
};
use pkn_core::model::Name;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn ages() -> ScalarRange {
    let text = corpus_lines()[10..].join("\n");
    ScalarRange::from_graph(
        &graph(&text),
        &Name::new("age"),
        Some(&Name::new("person")),
        &FuzzyConfig::default(),
    )
    .unwrap()
}

#[test]
fn connective_laws_on_random_triples() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12;
    for _ in 0..10_000 {
        let (a, b, c): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        assert!(close(fuzzy_and(a, a), a) && close(fuzzy_or(a, a), a));
        assert!(close(fuzzy_and(a, b), fuzzy_and(b, a)));
        assert!(close(fuzzy_or(a, b), fuzzy_or(b, a)));
        assert!(close(
            fuzzy_and(fuzzy_and(a, b), c),
            fuzzy_and(a, fuzzy_and(b, c))
        ));
        assert!(close(
            fuzzy_or(fuzzy_or(a, b), c),
            fuzzy_or(a, fuzzy_or(b, c))
        ));
        assert!(close(
            fuzzy_not(fuzzy_and(a, b)),
            fuzzy_or(fuzzy_not(a), fuzzy_not(b))
        ));
        assert!(close(
            fuzzy_not(fuzzy_or(a, b)),
            fuzzy_and(fuzzy_not(a), fuzzy_not(b))
        ));
    }
}

#[test]
fn age_boundary_is_split_evenly() {
    assert_eq!(ages().fuzzify(17.5).unwrap().values(), &[0.0, 0.5, 0.5]);
}

#[test]
fn defuzzify_after_fuzzify_is_monotone() {
    let r = ages();
    let (lo, hi) = (r.min(), r.max());
    let mut last = f64::NEG_INFINITY;
    for i in 0..1000 {
        let v = lo + (hi - lo) * i as f64 / 999.0;
        let d = r.defuzzify(&r.fuzzify(v).unwrap()).unwrap();
        assert!(d >= last - 1e-9, "{v}: {d} < {last}");
        last = d;
    }
}

#[test]
fn quantifier_thresholds() {
    let t = QuantifierThresholds::default();
    assert!(
        quantifier_holds(FuzzyQuantifier::Few, 2, 10, &t)
            .unwrap()
            .holds
    );
    assert!(
        !quantifier_holds(FuzzyQuantifier::Few, 5, 10, &t)
            .unwrap()
            .holds
    );
    assert!(
        !quantifier_holds(FuzzyQuantifier::Few, 0, 10, &t)
            .unwrap()
            .holds
    );
    assert!(
        quantifier_holds(FuzzyQuantifier::Many, 5, 10, &t)
            .unwrap()
            .holds
    );
    assert!(
        quantifier_holds(FuzzyQuantifier::Most, 3, 4, &t)
            .unwrap()
            .holds
    );
    assert!(
        !quantifier_holds(FuzzyQuantifier::Most, 7, 10, &t)
            .unwrap()
            .holds
    );
}

/// Contiguous ranges with integer bounds and random widths.
fn range() -> impl Strategy<Value = ScalarRange> {
    (
        prop::collection::vec((1u32..30, 0u32..2), 1..6),
        0.0f64..0.5,
    )
        .prop_map(|(widths, fraction)| {
            let mut terms = Vec::new();
            let mut lo = 0.0;
            for (i, (w, gap)) in widths.iter().enumerate() {
                let hi = lo + *w as f64;
                terms.push(RangeTerm::new(format!("t{i}"), lo, hi));
                lo = hi + *gap as f64;
            }
            let config = FuzzyConfig {
                crossfade_fraction: fraction,
                ..FuzzyConfig::default()
            };
            ScalarRange::new(Name::new("q"), None, terms, &config).unwrap()
        })
}

proptest! {
    #[test]
    fn fuzzify_is_normalized(r in range(), t in 0.0f64..=1.0) {
        let v = r.min() + (r.max() - r.min()) * t;
        let m = r.fuzzify(v).unwrap();
        prop_assert!((m.sum() - 1.0).abs() <= 1e-9);
        prop_assert!(m.values().iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn defuzzify_stays_in_range(r in range(), raw in prop::collection::vec(0.0f64..1.0, 1..6)) {
        let mut values: Vec<f64> = raw.into_iter().cycle().take(r.terms().len()).collect();
        values[0] = values[0].max(1e-3);
        let d = r.defuzzify(&MembershipVector::new(values)).unwrap();
        prop_assert!(d >= r.min() - 1e-9 && d <= r.max() + 1e-9);
    }

    #[test]
    fn round_trip_is_monotone(r in range(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let at = |t: f64| r.defuzzify(&r.fuzzify(r.min() + (r.max() - r.min()) * t).unwrap()).unwrap();
        prop_assert!(at(a) <= at(b) + 1e-9);
    }
}
