//! Brute-force ground truth for small point sets: exhaustive enumeration
//! of crossing-free spanning trees, spanning cycles, and crossing-free
//! subsets, plus scan-based optimization.
//!
//! Deliberately shares only the lowest-level predicates (orientation,
//! segment crossing, length scale) with the compiler pipeline and none of
//! the shadow or signature machinery.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cgraph::BigCount;
use crate::geometry::{segment_length_fixed, segments_cross, PointSet, Segment};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("point set too large for the brute-force oracle (n = {n}, max {max})")]
    TooLarge { n: usize, max: usize },
}

/// Canonical solutions: each a sorted segment list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub solutions: BTreeSet<Vec<Segment>>,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// One crossing-free spanning cycle with its exact doubled area and its
/// fixed-point length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub segments: Vec<Segment>,
    pub twice_area: i128,
    pub length_fixed: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleOracle {
    pub cycles: Vec<CycleRecord>,
}

impl CycleOracle {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn solutions(&self) -> BTreeSet<Vec<Segment>> {
        self.cycles.iter().map(|c| c.segments.clone()).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Objective {
    Area,
    Length,
}

impl std::str::FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "area" => Ok(Objective::Area),
            "length" => Ok(Objective::Length),
            other => Err(format!("unknown objective '{other}' (expected area|length)")),
        }
    }
}

const MAX_ORACLE_N: usize = 9;
const MAX_CF_ORACLE_N: usize = 6;

fn check_n(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        return Err(OracleError::TooLarge { n, max });
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Backtracking over segments with incremental crossing tests and
/// union-find acyclicity: n - 1 acyclic edges on n points are exactly the
/// spanning trees.
pub fn brute_spanning_trees(ps: &PointSet) -> Result<OracleResult, OracleError> {
    let n = ps.n();
    check_n(n, MAX_ORACLE_N)?;
    let segs = ps.all_segments();
    let mut solutions = BTreeSet::new();
    let mut chosen: Vec<Segment> = Vec::new();

    fn rec(
        ps: &PointSet,
        segs: &[Segment],
        start: usize,
        need: usize,
        chosen: &mut Vec<Segment>,
        uf: &UnionFind,
        out: &mut BTreeSet<Vec<Segment>>,
    ) {
        if need == 0 {
            out.insert(chosen.clone());
            return;
        }
        if segs.len() - start < need {
            return;
        }
        for i in start..segs.len() {
            let s = segs[i];
            let mut uf2 = UnionFind {
                parent: uf.parent.clone(),
            };
            if !uf2.union(s.lo, s.hi) {
                continue;
            }
            if chosen.iter().any(|&c| segments_cross(ps, c, s)) {
                continue;
            }
            chosen.push(s);
            rec(ps, segs, i + 1, need - 1, chosen, &uf2, out);
            chosen.pop();
        }
    }

    if n >= 2 {
        rec(
            ps,
            &segs,
            0,
            n - 1,
            &mut chosen,
            &UnionFind::new(n),
            &mut solutions,
        );
    }
    Ok(OracleResult { solutions })
}

/// Enumerates Hamiltonian cycle candidates as permutations with p1 fixed
/// first and the second point id below the last (dihedral
/// canonicalization), keeping the crossing-free ones.
pub fn brute_spanning_cycles(ps: &PointSet) -> Result<CycleOracle, OracleError> {
    let n = ps.n();
    check_n(n, MAX_ORACLE_N)?;
    let mut cycles = Vec::new();
    if n < 3 {
        return Ok(CycleOracle { cycles });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    permute(&mut rest, 0, &mut |perm| {
        if perm[0] > perm[perm.len() - 1] {
            return;
        }
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend_from_slice(perm);
        let segs: Vec<Segment> = (0..n)
            .map(|i| Segment::new(order[i], order[(i + 1) % n]))
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if segments_cross(ps, segs[i], segs[j]) {
                    return;
                }
            }
        }
        // Shoelace in cycle order, normalized to the ccw (positive) sign.
        let mut twice_area: i128 = 0;
        for i in 0..n {
            let a = ps.point(order[i]);
            let b = ps.point(order[(i + 1) % n]);
            twice_area += a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128;
        }
        let twice_area = twice_area.abs();
        let length_fixed = segs.iter().map(|&s| segment_length_fixed(ps, s)).sum();
        let mut segments = segs;
        segments.sort();
        cycles.push(CycleRecord {
            segments,
            twice_area,
            length_fixed,
        });
    });
    cycles.sort_by(|a, b| a.segments.cmp(&b.segments));
    Ok(CycleOracle { cycles })
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Counts subsets of pairwise non-crossing segments (including the empty
/// set) by recursion over the crossing-conflict masks.
pub fn brute_crossing_free_count(ps: &PointSet) -> Result<BigCount, OracleError> {
    let n = ps.n();
    check_n(n, MAX_CF_ORACLE_N)?;
    let segs = ps.all_segments();
    let m = segs.len();
    let conflicts: Vec<u64> = (0..m)
        .map(|i| {
            let mut mask = 0u64;
            for j in 0..m {
                if j != i && segments_cross(ps, segs[i], segs[j]) {
                    mask |= 1 << j;
                }
            }
            mask
        })
        .collect();

    fn rec(idx: usize, m: usize, banned: u64, conflicts: &[u64]) -> u64 {
        if idx == m {
            return 1;
        }
        let mut total = rec(idx + 1, m, banned, conflicts);
        if banned >> idx & 1 == 0 {
            total += rec(idx + 1, m, banned | conflicts[idx], conflicts);
        }
        total
    }

    Ok(BigCount::from(rec(0, m, 0, &conflicts)))
}

/// Scans the brute-force cycle list for the extremum of the objective.
/// Areas are exact doubled integers; lengths use the documented
/// fixed-point scale. Ties break toward the smallest segment list.
pub fn brute_optimize(
    ps: &PointSet,
    objective: Objective,
    minimize: bool,
) -> Result<(i128, Vec<Segment>), OracleError> {
    let cycles = brute_spanning_cycles(ps)?;
    let mut best: Option<(i128, Vec<Segment>)> = None;
    for c in &cycles.cycles {
        let value = match objective {
            Objective::Area => c.twice_area,
            Objective::Length => c.length_fixed,
        };
        let better = match &best {
            None => true,
            Some((bv, bs)) => {
                if minimize {
                    value < *bv || (value == *bv && c.segments < *bs)
                } else {
                    value > *bv || (value == *bv && c.segments < *bs)
                }
            }
        };
        if better {
            best = Some((value, c.segments.clone()));
        }
    }
    best.ok_or(OracleError::TooLarge {
        n: ps.n(),
        max: MAX_ORACLE_N,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn t3() -> PointSet {
        PointSet::new(&[(0, 0), (2, 1), (4, 0)]).unwrap()
    }

    fn q4() -> PointSet {
        PointSet::new(&[(0, 0), (4, 1), (5, 5), (1, 4)]).unwrap()
    }

    fn n4() -> PointSet {
        PointSet::new(&[(0, 0), (1, 2), (2, 5), (4, 1)]).unwrap()
    }

    #[test]
    fn trees_of_t3() {
        assert_eq!(brute_spanning_trees(&t3()).unwrap().count(), 3);
    }

    #[test]
    fn trees_of_q4() {
        // 16 labeled trees of K4 minus the 4 containing both crossing
        // diagonals.
        let r = brute_spanning_trees(&q4()).unwrap();
        assert_eq!(r.count(), 12);
        for tree in &r.solutions {
            assert_eq!(tree.len(), 3);
            for (i, &a) in tree.iter().enumerate() {
                for &b in &tree[i + 1..] {
                    assert!(!segments_cross(&q4(), a, b));
                }
            }
        }
    }

    #[test]
    fn cycles_of_convex_sets_are_unique() {
        assert_eq!(brute_spanning_cycles(&q4()).unwrap().count(), 1);
    }

    #[test]
    fn cycles_of_n4() {
        let r = brute_spanning_cycles(&n4()).unwrap();
        assert_eq!(r.count(), 3);
        let mut areas: Vec<i128> = r.cycles.iter().map(|c| c.twice_area).collect();
        areas.sort();
        // Hull twice-area 18 minus the cut triangles 10, 7, 1.
        assert_eq!(areas, vec![8, 11, 17]);
    }

    #[test]
    fn cycle_of_t3() {
        let r = brute_spanning_cycles(&t3()).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.cycles[0].twice_area, 4);
    }

    #[test]
    fn crossing_free_counts() {
        assert_eq!(brute_crossing_free_count(&t3()).unwrap(), BigCount::from(8u32));
        // 2^6 subsets minus the 2^4 containing both diagonals.
        assert_eq!(brute_crossing_free_count(&q4()).unwrap(), BigCount::from(48u32));
        let single = PointSet::new(&[(0, 0)]).unwrap();
        assert_eq!(brute_crossing_free_count(&single).unwrap(), BigCount::one());
    }

    #[test]
    fn optimize_n4_areas() {
        assert_eq!(brute_optimize(&n4(), Objective::Area, true).unwrap().0, 8);
        assert_eq!(brute_optimize(&n4(), Objective::Area, false).unwrap().0, 17);
    }

    #[test]
    fn optimize_convex_is_hull_area() {
        let (lo, _) = brute_optimize(&q4(), Objective::Area, true).unwrap();
        let (hi, _) = brute_optimize(&q4(), Objective::Area, false).unwrap();
        assert_eq!(lo, 30);
        assert_eq!(hi, 30);
    }

    #[test]
    fn too_large_is_reported() {
        let raw: Vec<(i64, i64)> = (0..10).map(|i| (i, i * i)).collect();
        let ps = PointSet::new(&raw).unwrap();
        assert!(matches!(
            brute_spanning_trees(&ps),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
