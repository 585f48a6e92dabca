//! Exact integer planar geometry: point sets, orientation, segment
//! crossing, vertical shadows, and the dependence relation.
//!
//! Points carry integer coordinates and every predicate is evaluated in
//! exact integer arithmetic. Inputs violating general position (two equal
//! x-coordinates or three collinear points) are rejected, never perturbed.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

/// Points are identified by their rank in x-order, 0-based internally.
/// User-facing output prints ids 1-based.
pub type PointId = usize;

/// Bitmask over point ids; caps the supported point count at 64.
pub type Mask = u64;

pub const MAX_POINTS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("two points share x-coordinate {0}")]
    DuplicateX(i64),
    #[error("points {0}, {1}, {2} are collinear (ids in x-order, 1-based)")]
    Collinear(usize, usize, usize),
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("cannot parse point line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Sign of the cross product (b - a) x (c - a).
pub fn orient(a: Point, b: Point, c: Point) -> i32 {
    let lhs = (b.x - a.x) as i128 * (c.y - a.y) as i128;
    let rhs = (b.y - a.y) as i128 * (c.x - a.x) as i128;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// A point set in general position, sorted by strictly increasing x.
#[derive(Clone, Debug)]
pub struct PointSet {
    pts: Vec<Point>,
}

impl PointSet {
    /// Validates and x-sorts raw coordinates. Ids are assigned by x-rank.
    pub fn new(raw: &[(i64, i64)]) -> Result<Self, GeometryError> {
        if raw.is_empty() {
            return Err(GeometryError::Empty);
        }
        if raw.len() > MAX_POINTS {
            return Err(GeometryError::TooManyPoints(raw.len()));
        }
        let mut pts: Vec<Point> = raw.iter().map(|&(x, y)| Point { x, y }).collect();
        pts.sort_by_key(|p| p.x);
        for w in pts.windows(2) {
            if w[0].x == w[1].x {
                return Err(GeometryError::DuplicateX(w[0].x));
            }
        }
        let n = pts.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(pts[i], pts[j], pts[k]) == 0 {
                        return Err(GeometryError::Collinear(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(PointSet { pts })
    }

    /// Parses the point file format: one "x y" pair per line, '#' lines
    /// ignored, order in the file irrelevant.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse_int = |tok: Option<&str>| -> Result<i64, GeometryError> {
                tok.ok_or_else(|| GeometryError::Parse {
                    line: idx + 1,
                    msg: "expected two integers".into(),
                })?
                .parse()
                .map_err(|e| GeometryError::Parse {
                    line: idx + 1,
                    msg: format!("{e}"),
                })
            };
            let x = parse_int(it.next())?;
            let y = parse_int(it.next())?;
            if it.next().is_some() {
                return Err(GeometryError::Parse {
                    line: idx + 1,
                    msg: "trailing tokens".into(),
                });
            }
            raw.push((x, y));
        }
        PointSet::new(&raw)
    }

    pub fn n(&self) -> usize {
        self.pts.len()
    }

    pub fn point(&self, id: PointId) -> Point {
        self.pts[id]
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    /// Mask with the low n bits set.
    pub fn full_mask(&self) -> Mask {
        if self.pts.len() == 64 {
            !0
        } else {
            (1u64 << self.pts.len()) - 1
        }
    }

    /// Sign of (q - p) x (r - p) for point ids.
    pub fn orientation(&self, p: PointId, q: PointId, r: PointId) -> i32 {
        orient(self.pts[p], self.pts[q], self.pts[r])
    }

    /// All segments of the complete graph, sorted by (lo, hi).
    pub fn all_segments(&self) -> Vec<Segment> {
        let n = self.pts.len();
        let mut v = Vec::with_capacity(n * (n - 1) / 2);
        for lo in 0..n {
            for hi in lo + 1..n {
                v.push(Segment { lo, hi });
            }
        }
        v
    }
}

/// An undirected segment between two point ids, `lo < hi` in x-order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Segment {
    pub lo: PointId,
    pub hi: PointId,
}

impl Segment {
    pub fn new(a: PointId, b: PointId) -> Self {
        assert_ne!(a, b, "degenerate segment");
        if a < b {
            Segment { lo: a, hi: b }
        } else {
            Segment { lo: b, hi: a }
        }
    }

    pub fn pts_mask(&self) -> Mask {
        (1u64 << self.lo) | (1u64 << self.hi)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo + 1, self.hi + 1)
    }
}

/// A directed segment from `head` (origin) to `tail` (destination).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DirSeg {
    pub head: PointId,
    pub tail: PointId,
}

impl DirSeg {
    pub fn new(head: PointId, tail: PointId) -> Self {
        assert_ne!(head, tail, "degenerate directed segment");
        DirSeg { head, tail }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.head, self.tail)
    }
}

impl fmt::Display for DirSeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.head + 1, self.tail + 1)
    }
}

/// True iff the open segments share an interior point. Shared endpoints do
/// not count; with general position a shared endpoint rules out crossing.
pub fn segments_cross(ps: &PointSet, s1: Segment, s2: Segment) -> bool {
    if s1.lo == s2.lo || s1.lo == s2.hi || s1.hi == s2.lo || s1.hi == s2.hi {
        return false;
    }
    let (a, b) = (ps.point(s1.lo), ps.point(s1.hi));
    let (c, d) = (ps.point(s2.lo), ps.point(s2.hi));
    orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0
}

/// Per-segment lower and upper shadow masks: the points whose upward
/// (resp. downward) vertical ray hits the segment's relative interior.
#[derive(Clone, Debug)]
pub struct ShadowTable {
    n: usize,
    low: Vec<Mask>,
    upp: Vec<Mask>,
}

impl ShadowTable {
    pub fn build(ps: &PointSet) -> Self {
        let n = ps.n();
        let mut low = vec![0u64; n * n];
        let mut upp = vec![0u64; n * n];
        for lo in 0..n {
            for hi in lo + 1..n {
                let idx = lo * n + hi;
                for p in lo + 1..hi {
                    // x-sortedness makes the strict x-range check implicit.
                    match ps.orientation(lo, hi, p) {
                        -1 => low[idx] |= 1 << p,
                        1 => upp[idx] |= 1 << p,
                        _ => unreachable!("collinear triple in validated point set"),
                    }
                }
            }
        }
        ShadowTable { n, low, upp }
    }

    pub fn low(&self, s: Segment) -> Mask {
        self.low[s.lo * self.n + s.hi]
    }

    pub fn upp(&self, s: Segment) -> Mask {
        self.upp[s.lo * self.n + s.hi]
    }

    /// True iff s2 depends on s1 (s1 under s2's order in any serialization):
    /// pts(s1) ∩ low(s2) ≠ ∅ or upp(s1) ∩ pts(s2) ≠ ∅.
    pub fn depends(&self, s1: Segment, s2: Segment) -> bool {
        s1.pts_mask() & self.low(s2) != 0 || self.upp(s1) & s2.pts_mask() != 0
    }
}

/// Twice the signed trapezoid area contributed by a directed segment:
/// (x_tail + x_head) * (y_tail - y_head). Summed over a counter-clockwise
/// cycle this is exactly the doubled enclosed area.
pub fn twice_trapezoid_weight(ps: &PointSet, d: DirSeg) -> i128 {
    let h = ps.point(d.head);
    let t = ps.point(d.tail);
    (t.x as i128 + h.x as i128) * (t.y as i128 - h.y as i128)
}

/// Fixed-point shift used for segment lengths: weights are
/// floor(|s| * 2^32), giving 2^-32 relative precision.
pub const LENGTH_FIXED_SHIFT: u32 = 32;

/// Segment length in the documented fixed-point scale, computed as the
/// exact integer floor(sqrt(dx^2 + dy^2) * 2^32).
pub fn segment_length_fixed(ps: &PointSet, s: Segment) -> i128 {
    let a = ps.point(s.lo);
    let b = ps.point(s.hi);
    let dx = (b.x - a.x) as i128;
    let dy = (b.y - a.y) as i128;
    let d2 = (dx * dx + dy * dy) as u128;
    let scaled = BigUint::from(d2) << (2 * LENGTH_FIXED_SHIFT);
    let root = scaled.sqrt();
    let digits = root.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as i128,
        2 => ((digits[1] as u128) << 64 | digits[0] as u128) as i128,
        _ => panic!("length weight exceeds i128"),
    }
}
