//! Oracle-equivalence suite over seeded convex and random point sets:
//! compiled solution sets against brute force, directed against
//! undirected counts, and both optimizers against the scan oracle.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cgraph::Sense;
use crate::compilers::{compile_cf, compile_dsc, compile_sc, compile_st};
use crate::gen::{gen_convex, gen_random};
use crate::geometry::{segment_length_fixed, twice_trapezoid_weight, DirSeg, PointSet, Segment};
use crate::oracle::{
    brute_crossing_free_count, brute_optimize, brute_spanning_cycles, brute_spanning_trees,
    Objective,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SelftestError {
    #[error("max-n must be between 3 and 9, got {0}")]
    BadMaxN(usize),
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseReport {
    fn check(name: String, pass: bool, detail: String) -> Self {
        CaseReport { name, pass, detail }
    }
}

/// Undirected segment set of a directed solution, canonically sorted.
pub fn undirect(solution: &[DirSeg]) -> Vec<Segment> {
    let mut v: Vec<Segment> = solution.iter().map(|d| d.segment()).collect();
    v.sort();
    v
}

fn run_case(reports: &mut Vec<CaseReport>, label: &str, ps: &PointSet) {
    let n = ps.n();

    let st = compile_st(ps).expect("n >= 3");
    let st_compiled: BTreeSet<Vec<Segment>> = st.graph.enumerate(None).collect();
    let st_oracle = brute_spanning_trees(ps).expect("oracle size");
    reports.push(CaseReport::check(
        format!("{label} st-solutions"),
        st_compiled == st_oracle.solutions,
        format!(
            "compiled {} vs oracle {}",
            st_compiled.len(),
            st_oracle.count()
        ),
    ));

    let sc = compile_sc(ps).expect("n >= 3");
    let sc_compiled: BTreeSet<Vec<Segment>> = sc.graph.enumerate(None).collect();
    let sc_oracle = brute_spanning_cycles(ps).expect("oracle size");
    reports.push(CaseReport::check(
        format!("{label} sc-solutions"),
        sc_compiled == sc_oracle.solutions(),
        format!(
            "compiled {} vs oracle {}",
            sc_compiled.len(),
            sc_oracle.count()
        ),
    ));

    if n <= 6 {
        let cf = compile_cf(ps).expect("n >= 1");
        let cf_oracle = brute_crossing_free_count(ps).expect("oracle size");
        let cf_count = cf.graph.count();
        reports.push(CaseReport::check(
            format!("{label} cf-count"),
            cf_count == cf_oracle,
            format!("compiled {cf_count} vs oracle {cf_oracle}"),
        ));
    }

    let dsc = compile_dsc(ps).expect("n >= 3");
    let dsc_count = dsc.graph.count();
    let sc_count = sc.graph.count();
    reports.push(CaseReport::check(
        format!("{label} dsc-count"),
        dsc_count == sc_count,
        format!("dsc {dsc_count} vs sc {sc_count}"),
    ));

    for (sense, minimize, tag) in [(Sense::Min, true, "min"), (Sense::Max, false, "max")] {
        let compiled = dsc
            .graph
            .optimize(|d| twice_trapezoid_weight(ps, d), sense)
            .expect("nonempty cycle family");
        let oracle = brute_optimize(ps, Objective::Area, minimize).expect("oracle size");
        let witness_ok = sc_oracle.solutions().contains(&undirect(&compiled.1));
        reports.push(CaseReport::check(
            format!("{label} area-{tag}"),
            compiled.0 == oracle.0 && witness_ok,
            format!("compiled {} vs oracle {}", compiled.0, oracle.0),
        ));
    }

    let compiled = sc
        .graph
        .optimize(|s| segment_length_fixed(ps, s), Sense::Min)
        .expect("nonempty cycle family");
    let oracle = brute_optimize(ps, Objective::Length, true).expect("oracle size");
    reports.push(CaseReport::check(
        format!("{label} length-min"),
        compiled.0 == oracle.0,
        format!("compiled {} vs oracle {}", compiled.0, oracle.0),
    ));
}

/// Runs the full suite for every n in 3..=max_n on one seeded convex and
/// one seeded random set per n.
pub fn run_selftest(max_n: usize) -> Result<Vec<CaseReport>, SelftestError> {
    if !(3..=9).contains(&max_n) {
        return Err(SelftestError::BadMaxN(max_n));
    }
    let mut reports = Vec::new();
    for n in 3..=max_n {
        let convex = gen_convex(n, 1000 + n as u64).expect("convex generation");
        let ps = PointSet::new(&convex).expect("generated sets validate");
        run_case(&mut reports, &format!("convex-{n}"), &ps);

        let random = gen_random(n, 2000 + n as u64).expect("random generation");
        let ps = PointSet::new(&random).expect("generated sets validate");
        run_case(&mut reports, &format!("random-{n}"), &ps);
    }
    Ok(reports)
}
