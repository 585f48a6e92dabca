//! Equivalence-class signatures for the four families and the update
//! rules for their connector structures (non-crossing partition of gray
//! points, non-crossing matching, directed matching).
//!
//! Connector structures index points by rank within the gray set in
//! x-order; global gray membership lives in the color masks. All values
//! here are pure and hashable so the compiler can hash-cons states.

use std::fmt;

use crate::geometry::{DirSeg, Mask, PointId};

/// The four compiled families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    /// All crossing-free graphs (signature τ).
    Cf,
    /// Crossing-free spanning trees (signature φ).
    St,
    /// Crossing-free spanning cycles (signature ψ).
    Sc,
    /// Counter-clockwise spanning cycles (signature χ).
    Dsc,
}

impl Family {
    pub fn is_directed(self) -> bool {
        matches!(self, Family::Dsc)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Cf => "cf",
            Family::St => "st",
            Family::Sc => "sc",
            Family::Dsc => "dsc",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cf" => Ok(Family::Cf),
            "st" => Ok(Family::St),
            "sc" => Ok(Family::Sc),
            "dsc" => Ok(Family::Dsc),
            other => Err(format!("unknown family '{other}' (expected cf|st|sc|dsc)")),
        }
    }
}

/// Reasons a transition is rejected. Enumerated for testability.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reject {
    /// E1: a gray or black point lies in the upper shadow of the segment.
    UppHit,
    /// E2: an endpoint of the segment is black.
    EndpointShadowed,
    /// E3: the right endpoint does not advance past the mark.
    OrderViolation,
    /// A2: adding the segment would hide a component under it.
    Hidden,
    /// A1: the endpoints are already connected.
    Cycle,
    /// B2: a point of degree < 2 lies under the segment.
    LowDegreeUnder,
    /// B3: closing would leave an isolated cycle.
    IsolatedCycle,
    /// A directed endpoint already has the required degree role taken.
    Direction,
    /// The leftmost point would become the tail of an open path.
    P1Sink,
}

/// Connector structure of a signature, indexed by gray rank in x-order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Connector {
    /// τ has no connector.
    None,
    /// Non-crossing partition of the gray points as a restricted-growth
    /// string (block ids by first occurrence).
    Partition(Vec<u8>),
    /// Non-crossing perfect matching: partner rank per gray rank.
    Matching(Vec<u8>),
    /// Directed matching: partner ranks plus a head bit per gray rank
    /// (set iff that point is the head, i.e. the start, of its open path).
    Directed { partners: Vec<u8>, heads: Mask },
}

/// Canonical state of an equivalence class: colors, mark, connector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub gray: Mask,
    pub black: Mask,
    pub mark: Option<PointId>,
    pub conn: Connector,
}

impl Signature {
    /// State of the empty combination.
    pub fn empty(family: Family) -> Self {
        let conn = match family {
            Family::Cf => Connector::None,
            Family::St => Connector::Partition(Vec::new()),
            Family::Sc => Connector::Matching(Vec::new()),
            Family::Dsc => Connector::Directed {
                partners: Vec::new(),
                heads: 0,
            },
        };
        Signature {
            gray: 0,
            black: 0,
            mark: None,
            conn,
        }
    }

    pub fn white(&self, full: Mask) -> Mask {
        full & !(self.gray | self.black)
    }

    /// Injective byte encoding: 2 color bits per point, mark byte,
    /// connector tag and body. Equal signatures ⇔ equal bytes for a fixed
    /// point count and family.
    pub fn encode(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n / 4 + 4);
        let mut acc: u8 = 0;
        let mut fill = 0;
        for p in 0..n {
            let color = if self.gray >> p & 1 == 1 {
                1u8
            } else if self.black >> p & 1 == 1 {
                2u8
            } else {
                0u8
            };
            acc |= color << (2 * fill);
            fill += 1;
            if fill == 4 {
                out.push(acc);
                acc = 0;
                fill = 0;
            }
        }
        if fill > 0 {
            out.push(acc);
        }
        out.push(match self.mark {
            None => 0,
            Some(m) => m as u8 + 1,
        });
        match &self.conn {
            Connector::None => out.push(0),
            Connector::Partition(rgs) => {
                out.push(1);
                out.extend_from_slice(rgs);
            }
            Connector::Matching(partners) => {
                out.push(2);
                out.extend_from_slice(partners);
            }
            Connector::Directed { partners, heads } => {
                out.push(3);
                out.extend_from_slice(partners);
                out.extend_from_slice(&heads.to_le_bytes());
            }
        }
        out
    }

    /// Text dump "colors|mark|connector", e.g. "GWG|1|()".
    pub fn dump(&self, n: usize) -> String {
        let mut colors = String::with_capacity(n);
        for p in 0..n {
            colors.push(if self.gray >> p & 1 == 1 {
                'G'
            } else if self.black >> p & 1 == 1 {
                'B'
            } else {
                'W'
            });
        }
        let mark = match self.mark {
            None => "-".to_string(),
            Some(m) => (m + 1).to_string(),
        };
        let conn = match &self.conn {
            Connector::None => String::new(),
            Connector::Partition(rgs) => rgs
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join("."),
            Connector::Matching(partners) => matching_parens(partners),
            Connector::Directed { partners, heads } => {
                let mut s = matching_parens(partners);
                s.push('|');
                for (i, _) in partners.iter().enumerate() {
                    s.push(if heads >> i & 1 == 1 { 'h' } else { 't' });
                }
                s
            }
        };
        format!("{colors}|{mark}|{conn}")
    }
}

/// Rank of point `p` within `mask` (number of set bits below `p`).
pub fn rank_in(mask: Mask, p: PointId) -> usize {
    (mask & ((1u64 << p) - 1)).count_ones() as usize
}

/// The `k`-th set bit of `mask` (0-based), as a point id.
pub fn nth_bit(mask: Mask, k: usize) -> PointId {
    let mut m = mask;
    for _ in 0..k {
        m &= m - 1;
    }
    m.trailing_zeros() as usize
}

/// Iterate the set bits of a mask in ascending order.
pub fn bits(mask: Mask) -> impl Iterator<Item = PointId> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(p)
        }
    })
}

/// Parenthesis string of a matching partner array: '(' at the left point
/// of each matched pair.
pub fn matching_parens(partners: &[u8]) -> String {
    partners
        .iter()
        .enumerate()
        .map(|(i, &j)| if (j as usize) > i { '(' } else { ')' })
        .collect()
}

/// True iff the partner array is an involution whose pairs nest properly
/// (the parenthesis string is balanced and pairs match the stack).
pub fn matching_is_noncrossing(partners: &[u8]) -> bool {
    let g = partners.len();
    for (i, &j) in partners.iter().enumerate() {
        let j = j as usize;
        if j >= g || j == i || partners[j] as usize != i {
            return false;
        }
    }
    let mut stack = Vec::new();
    for (i, &j) in partners.iter().enumerate() {
        if (j as usize) > i {
            stack.push(i);
        } else {
            match stack.pop() {
                Some(open) if open == j as usize => {}
                _ => return false,
            }
        }
    }
    stack.is_empty()
}

/// True iff the restricted-growth string describes a non-crossing
/// partition: no a < b < c < d with {a,c} and {b,d} in distinct blocks.
pub fn partition_is_noncrossing(rgs: &[u8]) -> bool {
    let g = rgs.len();
    for a in 0..g {
        for b in a + 1..g {
            for c in b + 1..g {
                for d in c + 1..g {
                    if rgs[a] == rgs[c] && rgs[b] == rgs[d] && rgs[a] != rgs[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Canonicalizes arbitrary block keys over an ordered point sequence into
/// a restricted-growth string.
fn canonical_rgs(keys: &[u16]) -> Vec<u8> {
    let mut map: Vec<(u16, u8)> = Vec::new();
    let mut out = Vec::with_capacity(keys.len());
    for &k in keys {
        let id = match map.iter().find(|&&(key, _)| key == k) {
            Some(&(_, id)) => id,
            None => {
                let id = map.len() as u8;
                map.push((k, id));
                id
            }
        };
        out.push(id);
    }
    out
}

/// Merged-block key used while lifting a partition.
const MERGED: u16 = u16::MAX;

/// Applies a segment (a, b) to the partition of gray points: lift to Π⁺
/// (white singletons), merge the endpoint blocks, drop covered points,
/// restrict to the new gray set.
///
/// Rejects with `Cycle` if the endpoints already share a block and with
/// `Hidden` if some lifted block lies entirely under the segment.
pub fn partition_update(
    rgs: &[u8],
    g_old: Mask,
    white_old: Mask,
    a: PointId,
    b: PointId,
    covered: Mask,
) -> Result<Vec<u8>, Reject> {
    debug_assert_eq!(rgs.len(), g_old.count_ones() as usize);
    let a_gray = g_old >> a & 1 == 1;
    let b_gray = g_old >> b & 1 == 1;
    let block_a = if a_gray {
        Some(rgs[rank_in(g_old, a)])
    } else {
        None
    };
    let block_b = if b_gray {
        Some(rgs[rank_in(g_old, b)])
    } else {
        None
    };
    if let (Some(ba), Some(bb)) = (block_a, block_b) {
        if ba == bb {
            return Err(Reject::Cycle);
        }
    }
    // A white point under the segment is a hidden singleton of Π⁺.
    if covered & white_old != 0 {
        return Err(Reject::Hidden);
    }
    // A gray block with every member covered becomes hidden. Blocks
    // containing an endpoint survive: endpoints are never covered.
    let num_blocks = rgs.iter().map(|&k| k as usize + 1).max().unwrap_or(0);
    let mut alive = vec![false; num_blocks];
    let mut seen = vec![false; num_blocks];
    for (rank, p) in bits(g_old).enumerate() {
        let k = rgs[rank] as usize;
        seen[k] = true;
        if covered >> p & 1 == 0 {
            alive[k] = true;
        }
    }
    if (0..num_blocks).any(|k| seen[k] && !alive[k]) {
        return Err(Reject::Hidden);
    }

    let g_new = (g_old | 1 << a | 1 << b) & !covered;
    let mut keys = Vec::with_capacity(g_new.count_ones() as usize);
    for p in bits(g_new) {
        let key = if p == a || p == b {
            MERGED
        } else {
            let k = rgs[rank_in(g_old, p)];
            if block_a == Some(k) || block_b == Some(k) {
                MERGED
            } else {
                k as u16
            }
        };
        keys.push(key);
    }
    let out = canonical_rgs(&keys);
    debug_assert!(partition_is_noncrossing(&out));
    Ok(out)
}

/// Outcome of extending a matching by one segment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatchStep {
    /// New partner array over the new gray set.
    Extended(Vec<u8>),
    /// The endpoints were matched to each other: the caller decides
    /// whether the closure is the accepted final cycle.
    Closing,
}

/// Applies a segment (a, b) to the non-crossing matching of gray points.
/// Endpoint colors decide the case: two whites open a path, a white and a
/// gray extend one, two grays merge two paths or close one.
pub fn matching_update(
    partners: &[u8],
    g_old: Mask,
    a: PointId,
    b: PointId,
) -> Result<MatchStep, Reject> {
    debug_assert_eq!(partners.len(), g_old.count_ones() as usize);
    let a_gray = g_old >> a & 1 == 1;
    let b_gray = g_old >> b & 1 == 1;

    // Decode pairs as point ids.
    let mut pairs: Vec<(PointId, PointId)> = Vec::with_capacity(partners.len() / 2);
    for (i, &j) in partners.iter().enumerate() {
        if (j as usize) > i {
            pairs.push((nth_bit(g_old, i), nth_bit(g_old, j as usize)));
        }
    }

    let g_new;
    match (a_gray, b_gray) {
        (false, false) => {
            pairs.push((a, b));
            g_new = g_old | 1 << a | 1 << b;
        }
        (false, true) | (true, false) => {
            let (gray_end, white_end) = if a_gray { (a, b) } else { (b, a) };
            let idx = pairs
                .iter()
                .position(|&(x, y)| x == gray_end || y == gray_end)
                .expect("gray point must be matched");
            let (x, y) = pairs[idx];
            let partner = if x == gray_end { y } else { x };
            pairs[idx] = (partner, white_end);
            g_new = (g_old & !(1 << gray_end)) | 1 << white_end;
        }
        (true, true) => {
            let ia = pairs
                .iter()
                .position(|&(x, y)| x == a || y == a)
                .expect("gray point must be matched");
            let (xa, ya) = pairs[ia];
            let pa = if xa == a { ya } else { xa };
            if pa == b {
                return Ok(MatchStep::Closing);
            }
            let ib = pairs
                .iter()
                .position(|&(x, y)| x == b || y == b)
                .expect("gray point must be matched");
            let (xb, yb) = pairs[ib];
            let pb = if xb == b { yb } else { xb };
            let (lo, hi) = (ia.min(ib), ia.max(ib));
            pairs.remove(hi);
            pairs.remove(lo);
            pairs.push((pa, pb));
            g_new = g_old & !(1 << a) & !(1 << b);
        }
    }

    let out = encode_pairs(&pairs, g_new);
    if !matching_is_noncrossing(&out) {
        // Cannot happen for geometrically valid segments.
        debug_assert!(false, "crossing matching produced");
        return Err(Reject::Cycle);
    }
    Ok(MatchStep::Extended(out))
}

fn encode_pairs(pairs: &[(PointId, PointId)], g_new: Mask) -> Vec<u8> {
    let g = g_new.count_ones() as usize;
    let mut out = vec![0u8; g];
    for &(x, y) in pairs {
        let rx = rank_in(g_new, x);
        let ry = rank_in(g_new, y);
        out[rx] = ry as u8;
        out[ry] = rx as u8;
    }
    out
}

/// Outcome of extending a directed matching by one directed segment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DMatchStep {
    Extended { partners: Vec<u8>, heads: Mask },
    Closing,
}

/// Applies a directed segment to the directed matching. Each open path is
/// a pair (head, tail): the head has out-degree 1 and in-degree 0, the
/// tail the reverse. The new segment leaves its head point and enters its
/// tail point, so the head point must currently be white or a path tail,
/// and the tail point white or a path head.
///
/// Rejects with `Direction` on a role violation and with `P1Sink` if the
/// resulting open path would end at the leftmost point.
pub fn dmatching_update(
    partners: &[u8],
    heads: Mask,
    g_old: Mask,
    d: DirSeg,
) -> Result<DMatchStep, Reject> {
    debug_assert_eq!(partners.len(), g_old.count_ones() as usize);
    let hp = d.head;
    let tp = d.tail;
    let hp_gray = g_old >> hp & 1 == 1;
    let tp_gray = g_old >> tp & 1 == 1;

    // Role checks: a gray point that is a path head already has
    // out-degree 1 and cannot emit another segment; symmetrically for
    // path tails and incoming segments.
    if hp_gray && heads >> rank_in(g_old, hp) & 1 == 1 {
        return Err(Reject::Direction);
    }
    if tp_gray && heads >> rank_in(g_old, tp) & 1 == 0 {
        return Err(Reject::Direction);
    }

    // Decode directed pairs (path head point, path tail point).
    let mut pairs: Vec<(PointId, PointId)> = Vec::with_capacity(partners.len() / 2);
    for (i, &j) in partners.iter().enumerate() {
        if heads >> i & 1 == 1 {
            pairs.push((nth_bit(g_old, i), nth_bit(g_old, j as usize)));
        }
    }

    let g_new;
    let new_pair;
    match (hp_gray, tp_gray) {
        (false, false) => {
            new_pair = (hp, tp);
            pairs.push(new_pair);
            g_new = g_old | 1 << hp | 1 << tp;
        }
        (false, true) => {
            // tp is the head of a path (tp, y): prepend hp -> tp.
            let idx = pairs.iter().position(|&(x, _)| x == tp).unwrap();
            let (_, y) = pairs[idx];
            new_pair = (hp, y);
            pairs[idx] = new_pair;
            g_new = (g_old & !(1 << tp)) | 1 << hp;
        }
        (true, false) => {
            // hp is the tail of a path (x, hp): append hp -> tp.
            let idx = pairs.iter().position(|&(_, y)| y == hp).unwrap();
            let (x, _) = pairs[idx];
            new_pair = (x, tp);
            pairs[idx] = new_pair;
            g_new = (g_old & !(1 << hp)) | 1 << tp;
        }
        (true, true) => {
            let ih = pairs.iter().position(|&(_, y)| y == hp).unwrap();
            let it = pairs.iter().position(|&(x, _)| x == tp).unwrap();
            if ih == it {
                // The segment closes its own path.
                return Ok(DMatchStep::Closing);
            }
            let (x, _) = pairs[ih];
            let (_, y) = pairs[it];
            new_pair = (x, y);
            let (lo, hi) = (ih.min(it), ih.max(it));
            pairs.remove(hi);
            pairs.remove(lo);
            pairs.push(new_pair);
            g_new = g_old & !(1 << hp) & !(1 << tp);
        }
    }

    // The leftmost point may never be the tail of an open path: its
    // outgoing segment is always adopted before its incoming one.
    if new_pair.1 == 0 {
        return Err(Reject::P1Sink);
    }

    let g = g_new.count_ones() as usize;
    let mut out = vec![0u8; g];
    let mut out_heads: Mask = 0;
    for &(x, y) in &pairs {
        let rx = rank_in(g_new, x);
        let ry = rank_in(g_new, y);
        out[rx] = ry as u8;
        out[ry] = rx as u8;
        out_heads |= 1 << rx;
    }
    debug_assert!(matching_is_noncrossing(&out));
    Ok(DMatchStep::Extended {
        partners: out,
        heads: out_heads,
    })
}
