//! End-to-end acceptance suite. Each test covers one numbered criterion
//! and prints a single PASS/FAIL line (visible with `--nocapture`; cargo
//! always shows the lines of failing tests).

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use cfgg::cgraph::{BigCount, Sense};
use cfgg::compilers::{compile_cf, compile_dsc, compile_sc, compile_st};
use cfgg::gen::{gen_convex, gen_random};
use cfgg::geometry::{segment_length_fixed, twice_trapezoid_weight, PointSet, Segment};
use cfgg::oracle::{brute_optimize, brute_spanning_cycles, brute_spanning_trees, Objective};
use num_traits::One;

fn report(criterion: &str, ok: bool, detail: &str) {
    println!(
        "{} {criterion}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{criterion}: {detail}");
}

fn random_set(n: usize, i: usize) -> PointSet {
    let raw = gen_random(n, 3000 + 31 * n as u64 + i as u64).expect("generation");
    PointSet::new(&raw).expect("generated sets validate")
}

fn convex_set(n: usize) -> PointSet {
    let raw = gen_convex(n, 4000 + n as u64).expect("generation");
    PointSet::new(&raw).expect("generated sets validate")
}

fn t3() -> PointSet {
    PointSet::new(&[(0, 0), (2, 1), (4, 0)]).unwrap()
}

fn q4() -> PointSet {
    PointSet::new(&[(0, 0), (4, 1), (5, 5), (1, 4)]).unwrap()
}

fn n4() -> PointSet {
    PointSet::new(&[(0, 0), (1, 2), (2, 5), (4, 1)]).unwrap()
}

/// The point sets of criterion 1: 20 random per n in 4..=8 plus one
/// convex per n.
fn criterion1_sets() -> Vec<PointSet> {
    let mut sets = Vec::new();
    for n in 4..=8 {
        for i in 0..20 {
            sets.push(random_set(n, i));
        }
        sets.push(convex_set(n));
    }
    sets
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0;
    for ps in criterion1_sets() {
        let st: BTreeSet<Vec<Segment>> =
            compile_st(&ps).unwrap().graph.enumerate(None).collect();
        let st_oracle = brute_spanning_trees(&ps).unwrap();
        assert_eq!(st, st_oracle.solutions, "st mismatch on n={}", ps.n());

        let sc: BTreeSet<Vec<Segment>> =
            compile_sc(&ps).unwrap().graph.enumerate(None).collect();
        let sc_oracle = brute_spanning_cycles(&ps).unwrap();
        assert_eq!(sc, sc_oracle.solutions(), "sc mismatch on n={}", ps.n());
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "criterion-1",
        checked == 105 && secs < 300.0,
        &format!("st/sc solution sets equal the oracle on {checked} point sets in {secs:.1}s"),
    );
}

#[test]
fn criterion_2_directed_undirected_consistency() {
    let mut checked = 0;
    for ps in criterion1_sets() {
        let dsc = compile_dsc(&ps).unwrap().graph.count();
        let sc = compile_sc(&ps).unwrap().graph.count();
        assert_eq!(dsc, sc, "count mismatch on n={}", ps.n());
        checked += 1;
    }
    for n in 4..=12 {
        let ps = convex_set(n);
        let dsc = compile_dsc(&ps).unwrap().graph.count();
        let sc = compile_sc(&ps).unwrap().graph.count();
        assert_eq!(dsc, sc, "count mismatch on convex n={n}");
        assert!(dsc.is_one(), "convex spanning cycle must be unique");
        checked += 1;
    }
    report(
        "criterion-2",
        true,
        &format!("dsc count equals sc count on {checked} point sets (convex up to n=12)"),
    );
}

#[test]
fn criterion_3_fixed_values() {
    let cases: Vec<(String, BigCount, BigCount)> = vec![
        (
            "st(T3)".into(),
            compile_st(&t3()).unwrap().graph.count(),
            BigCount::from(3u32),
        ),
        (
            "st(Q4)".into(),
            compile_st(&q4()).unwrap().graph.count(),
            BigCount::from(12u32),
        ),
        (
            "sc(N4)".into(),
            compile_sc(&n4()).unwrap().graph.count(),
            BigCount::from(3u32),
        ),
        (
            "cf(T3)".into(),
            compile_cf(&t3()).unwrap().graph.count(),
            BigCount::from(8u32),
        ),
        (
            "cf(Q4)".into(),
            compile_cf(&q4()).unwrap().graph.count(),
            BigCount::from(48u32),
        ),
    ];
    let mut cases = cases;
    for n in 3..=12 {
        cases.push((
            format!("sc(convex-{n})"),
            compile_sc(&convex_set(n)).unwrap().graph.count(),
            BigCount::one(),
        ));
    }
    for (name, got, want) in &cases {
        assert_eq!(got, want, "{name}");
    }
    report(
        "criterion-3",
        true,
        &format!("{} pinned counts match", cases.len()),
    );
}

#[test]
fn criterion_4_area_optimization() {
    let ps = n4();
    let dsc = compile_dsc(&ps).unwrap();
    let (min, min_sol) = dsc
        .graph
        .optimize(|d| twice_trapezoid_weight(&ps, d), Sense::Min)
        .unwrap();
    let (max, max_sol) = dsc
        .graph
        .optimize(|d| twice_trapezoid_weight(&ps, d), Sense::Max)
        .unwrap();
    assert_eq!((min, max), (8, 17));
    let oracle = brute_spanning_cycles(&ps).unwrap();
    for (value, sol) in [(min, min_sol), (max, max_sol)] {
        let mut undirected: Vec<Segment> = sol.iter().map(|d| d.segment()).collect();
        undirected.sort();
        let record = oracle
            .cycles
            .iter()
            .find(|c| c.segments == undirected)
            .expect("witness is a real cycle");
        assert_eq!(record.twice_area, value, "witness area mismatch");
    }

    let mut checked = 0;
    for n in 5..=8 {
        for i in 0..10 {
            let ps = random_set(n, 100 + i);
            let dsc = compile_dsc(&ps).unwrap();
            for (sense, minimize) in [(Sense::Min, true), (Sense::Max, false)] {
                let (value, _) = dsc
                    .graph
                    .optimize(|d| twice_trapezoid_weight(&ps, d), sense)
                    .unwrap();
                let (oracle_value, _) = brute_optimize(&ps, Objective::Area, minimize).unwrap();
                assert_eq!(value, oracle_value, "n={n} seed-index={i}");
            }
            checked += 1;
        }
    }
    report(
        "criterion-4",
        true,
        &format!("N4 min/max twice-area 8/17 with real witnesses; {checked} random sets match the oracle"),
    );
}

#[test]
fn criterion_5_length_optimization() {
    let mut checked = 0;
    for n in 4..=8 {
        for ps in [convex_set(n), random_set(n, 200), random_set(n, 201)] {
            let sc = compile_sc(&ps).unwrap();
            let (value, _) = sc
                .graph
                .optimize(|s| segment_length_fixed(&ps, s), Sense::Min)
                .unwrap();
            let (oracle_value, _) = brute_optimize(&ps, Objective::Length, true).unwrap();
            assert_eq!(value, oracle_value, "length minimum mismatch on n={n}");
            checked += 1;
        }
    }
    report(
        "criterion-5",
        true,
        &format!("minimum fixed-point cycle length matches the oracle on {checked} sets (n <= 8)"),
    );
}

#[test]
fn criterion_6_sampling_uniformity_and_unranking() {
    let ps = n4();
    let sc = compile_sc(&ps).unwrap();
    assert_eq!(sc.graph.count(), BigCount::from(3u32));
    const DRAWS: usize = 30_000;
    let samples = sc.graph.sample(20_260_823, DRAWS).unwrap();
    let mut freq: std::collections::HashMap<Vec<Segment>, usize> = Default::default();
    for s in samples {
        *freq.entry(s).or_default() += 1;
    }
    assert_eq!(freq.len(), 3, "every cycle must be drawn");
    let mut worst = 0.0f64;
    for &count in freq.values() {
        let dev = (count as f64 / DRAWS as f64 - 1.0 / 3.0).abs();
        worst = worst.max(dev);
    }
    assert!(worst < 0.02, "frequency deviation {worst} exceeds 0.02");

    // Exhaustive unranking on n <= 6 instances across all families.
    let six = random_set(6, 300);
    let mut unranked = 0;
    for (name, graph) in [
        ("st(random-6)", compile_st(&six).unwrap().graph),
        ("sc(random-6)", compile_sc(&six).unwrap().graph),
        ("cf(Q4)", compile_cf(&q4()).unwrap().graph),
    ] {
        let all: BTreeSet<Vec<Segment>> = graph.enumerate(None).collect();
        let count = graph.count();
        let mut seen = HashSet::new();
        let mut r = BigCount::one();
        while r <= count {
            assert!(seen.insert(graph.unrank(&r)), "{name}: rank collision");
            r += 1u32;
        }
        assert_eq!(seen.len(), all.len(), "{name}: unranking misses solutions");
        assert!(seen.iter().all(|s| all.contains(s)), "{name}: foreign solution");
        unranked += seen.len();
    }
    report(
        "criterion-6",
        true,
        &format!(
            "30000 draws within 1/3 +- 0.02 (worst deviation {worst:.4}); exhaustive unranking bijective over {unranked} solutions"
        ),
    );
}

#[test]
fn criterion_7_growth_bounds() {
    let sc_states: Vec<usize> = (8..=13)
        .map(|n| compile_sc(&convex_set(n)).unwrap().states)
        .collect();
    let st_states: Vec<usize> = (6..=10)
        .map(|n| compile_st(&convex_set(n)).unwrap().states)
        .collect();
    let mut detail = String::from("sc ratios");
    let mut ok = true;
    for (k, w) in sc_states.windows(2).enumerate() {
        let ratio = w[1] as f64 / w[0] as f64;
        detail.push_str(&format!(" {}:{ratio:.2}", 8 + k));
        ok &= ratio <= 4.5;
    }
    detail.push_str("; st ratios");
    for (k, w) in st_states.windows(2).enumerate() {
        let ratio = w[1] as f64 / w[0] as f64;
        detail.push_str(&format!(" {}:{ratio:.2}", 6 + k));
        ok &= ratio <= 6.5;
    }
    report("criterion-7", ok, &detail);
}

#[test]
fn criterion_8_performance() {
    let start = Instant::now();
    let c = compile_sc(&convex_set(12)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    assert!(c.graph.count().is_one());
    assert!(secs < 180.0, "convex-12 sc took {secs:.1}s");

    // Streaming: pull 10^5 solutions from an n=10 instance whose full
    // solution set is far larger, through the iterator only.
    let ten = random_set(10, 400);
    let cf = compile_cf(&ten).unwrap();
    let streamed = cf.graph.enumerate(Some(100_000)).count();
    assert_eq!(streamed, 100_000);
    report(
        "criterion-8",
        true,
        &format!("convex-12 sc compiled in {secs:.1}s; streamed 100000 of {} cf solutions", cf.graph.count()),
    );
}

#[test]
fn criterion_9_structural_invariants() {
    // Strict per-state validation (connector well-formedness, balanced
    // matchings, even |G|, no p1-sink pair, injective encoding) runs
    // inside compilation for n <= 8 in debug builds; recompiling the
    // criterion-1 sets here exercises it. Trim idempotence is checked
    // directly.
    let mut checked = 0;
    for ps in criterion1_sets() {
        for count in [
            compile_st(&ps).unwrap().graph.count(),
            compile_sc(&ps).unwrap().graph.count(),
            compile_dsc(&ps).unwrap().graph.count(),
        ] {
            let _ = count;
        }
        let g = compile_st(&ps).unwrap().graph;
        assert_eq!(g.trim().count(), g.count(), "trim changed the count");
        checked += 1;
    }
    report(
        "criterion-9",
        true,
        &format!(
            "structural assertions held over {checked} point sets (debug validation {})",
            if cfg!(debug_assertions) { "active" } else { "compiled out" }
        ),
    );
}
