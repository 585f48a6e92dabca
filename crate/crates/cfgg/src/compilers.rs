//! The four transition systems (cf, st, sc, dsc) and the forward search
//! that hash-conses equivalence-class signatures into a combination graph.
//!
//! A transition adds one segment as the new right-most extreme element of
//! the combination. The state-level admissibility predicate is E1–E3 in
//! `common_checks`; family rules (cycle-freeness, hidden components,
//! degree bounds, isolated cycles, direction roles) sit on top of it.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::cgraph::{CombinationGraph, EdgeLabel, NodeId, BOT, TOP};
use crate::geometry::{DirSeg, Mask, PointSet, Segment, ShadowTable};
use crate::states::{
    dmatching_update, matching_is_noncrossing, matching_update, partition_is_noncrossing,
    partition_update, rank_in, Connector, DMatchStep, Family, MatchStep, Reject, Signature,
};

/// Result of offering one candidate label to a state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Accept(Signature),
    /// sc/dsc only: the segment closed the spanning cycle; the payload is
    /// the final all-black state.
    AcceptFinal(Signature),
    Reject(Reject),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("family {family} needs at least {min} points, got {n}")]
    InvalidN {
        family: Family,
        n: usize,
        min: usize,
    },
}

/// E1–E3: the segment must be addable as the new right-most extreme
/// element of every combination in the class.
///
/// E1: no gray or black point in the upper shadow of s.
/// E2: no endpoint of s is black.
/// E3: the right endpoint of s lies strictly right of the mark.
pub fn common_checks(q: &Signature, s: Segment, sh: &ShadowTable) -> Result<(), Reject> {
    if sh.upp(s) & (q.gray | q.black) != 0 {
        return Err(Reject::UppHit);
    }
    if s.pts_mask() & q.black != 0 {
        return Err(Reject::EndpointShadowed);
    }
    if let Some(m) = q.mark {
        if s.hi <= m {
            return Err(Reject::OrderViolation);
        }
    }
    Ok(())
}

/// τ transition: recolor endpoints gray, shadowed points black.
pub fn successor_cf(q: &Signature, s: Segment, sh: &ShadowTable) -> Outcome {
    if let Err(r) = common_checks(q, s, sh) {
        return Outcome::Reject(r);
    }
    let covered = sh.low(s);
    Outcome::Accept(Signature {
        gray: (q.gray | s.pts_mask()) & !covered,
        black: q.black | covered,
        mark: Some(s.lo),
        conn: Connector::None,
    })
}

/// φ transition: cf recoloring plus the non-crossing-partition update,
/// which rejects cycles (A1) and hidden components (A2).
pub fn successor_st(q: &Signature, s: Segment, sh: &ShadowTable, full: Mask) -> Outcome {
    if let Err(r) = common_checks(q, s, sh) {
        return Outcome::Reject(r);
    }
    let covered = sh.low(s);
    let Connector::Partition(rgs) = &q.conn else {
        panic!("st state carries a partition connector");
    };
    match partition_update(rgs, q.gray, q.white(full), s.lo, s.hi, covered) {
        Err(r) => Outcome::Reject(r),
        Ok(rgs_new) => Outcome::Accept(Signature {
            gray: (q.gray | s.pts_mask()) & !covered,
            black: q.black | covered,
            mark: Some(s.lo),
            conn: Connector::Partition(rgs_new),
        }),
    }
}

/// ψ transition: degree recoloring plus the matching update. B2 requires
/// every point under the segment to be finished (degree 2); closing is
/// accepted only for the full single cycle (B3).
pub fn successor_sc(q: &Signature, s: Segment, sh: &ShadowTable, full: Mask) -> Outcome {
    if let Err(r) = common_checks(q, s, sh) {
        return Outcome::Reject(r);
    }
    if sh.low(s) & !q.black != 0 {
        return Outcome::Reject(Reject::LowDegreeUnder);
    }
    let Connector::Matching(partners) = &q.conn else {
        panic!("sc state carries a matching connector");
    };
    match matching_update(partners, q.gray, s.lo, s.hi) {
        Err(r) => Outcome::Reject(r),
        Ok(MatchStep::Closing) => {
            if q.white(full) == 0 && partners.len() == 2 {
                Outcome::AcceptFinal(Signature {
                    gray: 0,
                    black: full,
                    mark: Some(s.lo),
                    conn: Connector::Matching(Vec::new()),
                })
            } else {
                Outcome::Reject(Reject::IsolatedCycle)
            }
        }
        Ok(MatchStep::Extended(partners_new)) => {
            let eps = s.pts_mask();
            let from_white = eps & !q.gray;
            Outcome::Accept(Signature {
                gray: (q.gray & !eps) | from_white,
                black: q.black | (eps & q.gray),
                mark: Some(s.lo),
                conn: Connector::Matching(partners_new),
            })
        }
    }
}

/// χ transition: the sc checks on the underlying segment plus directed
/// roles and the leftmost-point prune that enforces counter-clockwise
/// orientation.
pub fn successor_dsc(q: &Signature, d: DirSeg, sh: &ShadowTable, full: Mask) -> Outcome {
    let s = d.segment();
    if let Err(r) = common_checks(q, s, sh) {
        return Outcome::Reject(r);
    }
    if sh.low(s) & !q.black != 0 {
        return Outcome::Reject(Reject::LowDegreeUnder);
    }
    let Connector::Directed { partners, heads } = &q.conn else {
        panic!("dsc state carries a directed matching connector");
    };
    match dmatching_update(partners, *heads, q.gray, d) {
        Err(r) => Outcome::Reject(r),
        Ok(DMatchStep::Closing) => {
            if q.white(full) == 0 && partners.len() == 2 {
                Outcome::AcceptFinal(Signature {
                    gray: 0,
                    black: full,
                    mark: Some(s.lo),
                    conn: Connector::Directed {
                        partners: Vec::new(),
                        heads: 0,
                    },
                })
            } else {
                Outcome::Reject(Reject::IsolatedCycle)
            }
        }
        Ok(DMatchStep::Extended {
            partners: partners_new,
            heads: heads_new,
        }) => {
            let eps = s.pts_mask();
            let from_white = eps & !q.gray;
            Outcome::Accept(Signature {
                gray: (q.gray & !eps) | from_white,
                black: q.black | (eps & q.gray),
                mark: Some(s.lo),
                conn: Connector::Directed {
                    partners: partners_new,
                    heads: heads_new,
                },
            })
        }
    }
}

/// A compiled family: the trimmed graph plus the number of distinct
/// signatures explored during the forward search.
pub struct Compilation<L> {
    pub graph: CombinationGraph<L>,
    pub states: usize,
}

fn min_points(family: Family) -> usize {
    match family {
        Family::Cf => 1,
        Family::St => 2,
        Family::Sc | Family::Dsc => 3,
    }
}

fn check_n(family: Family, n: usize) -> Result<(), CompileError> {
    let min = min_points(family);
    if n < min {
        return Err(CompileError::InvalidN { family, n, min });
    }
    Ok(())
}

/// Structural invariants asserted on every reached state for small n:
/// connector well-formedness, even gray count for cycles, no open path
/// ending at the leftmost point, injective encoding.
fn validate_state(sig: &Signature, family: Family, n: usize, enc_seen: &mut HashMap<Vec<u8>, Signature>) {
    match &sig.conn {
        Connector::None => {}
        Connector::Partition(rgs) => {
            assert_eq!(rgs.len(), sig.gray.count_ones() as usize);
            assert!(partition_is_noncrossing(rgs), "crossing partition reached");
        }
        Connector::Matching(partners) => {
            assert_eq!(partners.len(), sig.gray.count_ones() as usize);
            assert!(matching_is_noncrossing(partners), "unbalanced matching");
            assert_eq!(sig.gray.count_ones() % 2, 0, "odd gray count");
        }
        Connector::Directed { partners, heads } => {
            assert_eq!(partners.len(), sig.gray.count_ones() as usize);
            assert!(matching_is_noncrossing(partners), "unbalanced matching");
            assert_eq!(sig.gray.count_ones() % 2, 0, "odd gray count");
            if sig.gray & 1 == 1 {
                let r = rank_in(sig.gray, 0);
                assert!(heads >> r & 1 == 1, "leftmost point is a path tail");
            }
        }
    }
    let enc = sig.encode(n);
    if let Some(prev) = enc_seen.insert(enc, sig.clone()) {
        assert_eq!(&prev, sig, "encode merged two distinct {family} states");
    }
}

fn run<L: EdgeLabel>(
    n: usize,
    family: Family,
    candidates: &[L],
    step: impl Fn(&Signature, L) -> Outcome,
    accepting: impl Fn(&Signature) -> bool,
) -> Compilation<L> {
    // Full structural validation is quadratic-ish per state; keep it to
    // the oracle-checked sizes.
    let strict = cfg!(debug_assertions) && n <= 8;
    let mut enc_seen: HashMap<Vec<u8>, Signature> = HashMap::new();

    let mut graph = CombinationGraph::new();
    let mut ids: HashMap<Signature, NodeId> = HashMap::new();
    let empty = Signature::empty(family);
    ids.insert(empty.clone(), BOT);
    if accepting(&empty) {
        graph.add_edge(BOT, TOP, None);
    }
    if strict {
        validate_state(&empty, family, n, &mut enc_seen);
    }
    let mut queue: VecDeque<Signature> = VecDeque::new();
    queue.push_back(empty);

    while let Some(sig) = queue.pop_front() {
        let node = ids[&sig];
        for &label in candidates {
            let next = match step(&sig, label) {
                Outcome::Reject(_) => continue,
                Outcome::Accept(next) | Outcome::AcceptFinal(next) => next,
            };
            // A transition adds a segment not already in the combination
            // (C = C' \ {s}). E1–E3 cannot see membership, but the family
            // is progressive: a successor equal to its predecessor means
            // the candidate is already the class's right-most extreme
            // element, so the move is invalid for every member.
            if next == sig {
                continue;
            }
            if strict {
                validate_state(&next, family, n, &mut enc_seen);
            }
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = graph.add_node();
                    if accepting(&next) {
                        graph.add_edge(id, TOP, None);
                    }
                    ids.insert(next.clone(), id);
                    queue.push_back(next);
                    id
                }
            };
            graph.add_edge(node, id, Some(label));
        }
    }

    let states = ids.len();
    Compilation {
        graph: graph.trim(),
        states,
    }
}

fn directed_candidates(ps: &PointSet) -> Vec<DirSeg> {
    let n = ps.n();
    let mut v = Vec::with_capacity(n * (n - 1));
    for head in 0..n {
        for tail in 0..n {
            if head != tail {
                v.push(DirSeg::new(head, tail));
            }
        }
    }
    v
}

/// Compiles all crossing-free graphs; every state is accepting, including
/// the empty combination.
pub fn compile_cf(ps: &PointSet) -> Result<Compilation<Segment>, CompileError> {
    check_n(Family::Cf, ps.n())?;
    let sh = ShadowTable::build(ps);
    Ok(run(
        ps.n(),
        Family::Cf,
        &ps.all_segments(),
        |q, s| successor_cf(q, s, &sh),
        |_| true,
    ))
}

/// Compiles crossing-free spanning trees; a state is accepting when no
/// point is white and the gray points form a single connected block.
pub fn compile_st(ps: &PointSet) -> Result<Compilation<Segment>, CompileError> {
    check_n(Family::St, ps.n())?;
    let sh = ShadowTable::build(ps);
    let full = ps.full_mask();
    Ok(run(
        ps.n(),
        Family::St,
        &ps.all_segments(),
        |q, s| successor_st(q, s, &sh, full),
        move |q| {
            let Connector::Partition(rgs) = &q.conn else {
                unreachable!()
            };
            q.white(full) == 0 && !rgs.is_empty() && rgs.iter().all(|&b| b == 0)
        },
    ))
}

/// Compiles crossing-free spanning cycles; only the closed all-black
/// states are accepting.
pub fn compile_sc(ps: &PointSet) -> Result<Compilation<Segment>, CompileError> {
    check_n(Family::Sc, ps.n())?;
    let sh = ShadowTable::build(ps);
    let full = ps.full_mask();
    Ok(run(
        ps.n(),
        Family::Sc,
        &ps.all_segments(),
        |q, s| successor_sc(q, s, &sh, full),
        move |q| q.black == full && q.mark.is_some(),
    ))
}

/// Compiles counter-clockwise spanning cycles over directed segments.
pub fn compile_dsc(ps: &PointSet) -> Result<Compilation<DirSeg>, CompileError> {
    check_n(Family::Dsc, ps.n())?;
    let sh = ShadowTable::build(ps);
    let full = ps.full_mask();
    Ok(run(
        ps.n(),
        Family::Dsc,
        &directed_candidates(ps),
        |q, d| successor_dsc(q, d, &sh, full),
        move |q| q.black == full && q.mark.is_some(),
    ))
}

/// Family-dispatched compilation for callers that are generic over the
/// label kind.
pub enum Compiled {
    Undirected(Compilation<Segment>),
    Directed(Compilation<DirSeg>),
}

pub fn compile(ps: &PointSet, family: Family) -> Result<Compiled, CompileError> {
    Ok(match family {
        Family::Cf => Compiled::Undirected(compile_cf(ps)?),
        Family::St => Compiled::Undirected(compile_st(ps)?),
        Family::Sc => Compiled::Undirected(compile_sc(ps)?),
        Family::Dsc => Compiled::Directed(compile_dsc(ps)?),
    })
}

impl Compiled {
    pub fn stats(&self) -> crate::cgraph::Stats {
        match self {
            Compiled::Undirected(c) => c.graph.stats(),
            Compiled::Directed(c) => c.graph.stats(),
        }
    }

    pub fn states(&self) -> usize {
        match self {
            Compiled::Undirected(c) => c.states,
            Compiled::Directed(c) => c.states,
        }
    }
}
