//! Deterministic point-set generation: convex sets from integer points
//! near a circle, random sets by rejection sampling in a box. Every
//! generated set passes `PointSet::new` validation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{orient, PointSet, MAX_POINTS};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("failed to generate a valid point set after {0} attempts")]
    Failed(usize),
    #[error("n must be between 1 and {MAX_POINTS}, got {0}")]
    BadN(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Convex,
    Random,
}

impl std::str::FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "convex" => Ok(Kind::Convex),
            "random" => Ok(Kind::Random),
            other => Err(format!("unknown kind '{other}' (expected convex|random)")),
        }
    }
}

pub fn generate(kind: Kind, n: usize, seed: u64) -> Result<Vec<(i64, i64)>, GenError> {
    match kind {
        Kind::Convex => gen_convex(n, seed),
        Kind::Random => gen_random(n, seed),
    }
}

/// Convex position: integer roundings of points on a large circle with a
/// random rotation, re-drawn until validation and strict convexity hold.
pub fn gen_convex(n: usize, seed: u64) -> Result<Vec<(i64, i64)>, GenError> {
    if n == 0 || n > MAX_POINTS {
        return Err(GenError::BadN(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0_17_3e_55);
    const ATTEMPTS: usize = 10_000;
    let radius = 1_000_000.0f64;
    for _ in 0..ATTEMPTS {
        let offset = rng.gen_range(0.0..std::f64::consts::TAU);
        let raw: Vec<(i64, i64)> = (0..n)
            .map(|k| {
                let theta = offset + std::f64::consts::TAU * k as f64 / n as f64;
                (
                    (radius * theta.cos()).round() as i64,
                    (radius * theta.sin()).round() as i64,
                )
            })
            .collect();
        if PointSet::new(&raw).is_err() {
            continue;
        }
        if n >= 3 && !is_convex_cycle(&raw) {
            continue;
        }
        return Ok(raw);
    }
    Err(GenError::Failed(ATTEMPTS))
}

/// Strict convexity of the points in their generated (angular) order.
fn is_convex_cycle(raw: &[(i64, i64)]) -> bool {
    let n = raw.len();
    let p = |i: usize| crate::geometry::Point {
        x: raw[i % n].0,
        y: raw[i % n].1,
    };
    (0..n).all(|i| orient(p(i), p(i + 1), p(i + 2)) > 0)
}

/// General-position random points, grown one at a time with per-point
/// rejection of duplicate x and collinear triples.
pub fn gen_random(n: usize, seed: u64) -> Result<Vec<(i64, i64)>, GenError> {
    if n == 0 || n > MAX_POINTS {
        return Err(GenError::BadN(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a_4d_01);
    const RANGE: i64 = 10_000;
    const ATTEMPTS: usize = 100_000;
    let mut raw: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut tries = 0;
    while raw.len() < n {
        if tries >= ATTEMPTS {
            return Err(GenError::Failed(ATTEMPTS));
        }
        tries += 1;
        let cand = (rng.gen_range(-RANGE..=RANGE), rng.gen_range(-RANGE..=RANGE));
        if raw.iter().any(|&(x, _)| x == cand.0) {
            continue;
        }
        let cp = crate::geometry::Point {
            x: cand.0,
            y: cand.1,
        };
        let collinear = raw.iter().enumerate().any(|(i, &(ax, ay))| {
            raw[i + 1..].iter().any(|&(bx, by)| {
                orient(
                    crate::geometry::Point { x: ax, y: ay },
                    crate::geometry::Point { x: bx, y: by },
                    cp,
                ) == 0
            })
        });
        if collinear {
            continue;
        }
        raw.push(cand);
    }
    debug_assert!(PointSet::new(&raw).is_ok());
    Ok(raw)
}

/// Renders a point file: one "x y" per line.
pub fn to_point_file(raw: &[(i64, i64)]) -> String {
    let mut s = String::new();
    for &(x, y) in raw {
        s.push_str(&format!("{x} {y}\n"));
    }
    s
}
