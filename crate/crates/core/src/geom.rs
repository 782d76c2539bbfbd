//! Exact planar geometry: rational points, signed areas, winding numbers.
//!
//! Everything is computed over `Rational64`; no floating point enters the
//! pipeline anywhere.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::{Signed, Zero};

pub type Rat = Rational64;

/// A point of the plane with exact rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt {
    pub x: Rat,
    pub y: Rat,
}

impl Pt {
    pub fn new(x: Rat, y: Rat) -> Self {
        Pt { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Pt {
            x: Rat::from_integer(x),
            y: Rat::from_integer(y),
        }
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

/// z-component of the cross product (b - a) x (c - a).
fn cross3(a: Pt, b: Pt, c: Pt) -> Rat {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Twice the signed area of a closed polyline (shoelace formula).
pub fn double_signed_area(poly: &[Pt]) -> Rat {
    let mut acc = Rat::zero();
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        acc += a.x * b.y - b.x * a.y;
    }
    acc
}

/// +1 for a counterclockwise closed curve, -1 for clockwise.
///
/// The input must be an embedded (weakly simple) closed polyline, so the
/// signed area cannot vanish.
pub fn orientation_sign(poly: &[Pt]) -> i64 {
    let a = double_signed_area(poly);
    assert!(!a.is_zero(), "degenerate polyline has no orientation");
    if a.is_positive() {
        1
    } else {
        -1
    }
}

/// Does `p` lie on the closed segment [a, b]?
fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    if !cross3(a, b, p).is_zero() {
        return false;
    }
    let dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    let len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    !dot.is_negative() && dot <= len2
}

/// Deterministic fallback list of primitive ray directions.
///
/// The sequence starts (2,1), (3,1), (5,2), (7,3), ... with pairwise
/// distinct slopes, so for any finite vertex set a valid direction is
/// reached after at most `#vertices` rejections.
fn ray_direction(k: usize) -> (i64, i64) {
    match k {
        0 => (2, 1),
        1 => (3, 1),
        _ => (2 * k as i64 + 1, k as i64),
    }
}

/// Signed winding number of a closed polyline around `p`.
///
/// Uses exact ray casting: the ray direction is drawn from the fallback
/// list, advancing past any direction whose supporting line meets a
/// polyline vertex (which also rules out rays running through a collinear
/// segment).
pub fn winding_number(poly: &[Pt], p: Pt) -> Result<i64> {
    // Collapse consecutive duplicate vertices and drop trivial loops.
    let mut verts: Vec<Pt> = Vec::with_capacity(poly.len());
    for &v in poly {
        if verts.last() != Some(&v) {
            verts.push(v);
        }
    }
    while verts.len() > 1 && verts.first() == verts.last() {
        verts.pop();
    }
    if verts.len() < 3 {
        return Ok(0);
    }
    for k in 0..verts.len() {
        let a = verts[k];
        let b = verts[(k + 1) % verts.len()];
        if on_segment(p, a, b) {
            return Err(Error::PointOnPath);
        }
    }

    'dirs: for k in 0.. {
        let (dx, dy) = ray_direction(k);
        let dx = Rat::from_integer(dx);
        let dy = Rat::from_integer(dy);
        // side(v) = cross(d, v - p); reject directions meeting any vertex.
        let mut side = Vec::with_capacity(verts.len());
        for &v in &verts {
            let s = dx * (v.y - p.y) - dy * (v.x - p.x);
            if s.is_zero() {
                continue 'dirs;
            }
            side.push(s);
        }
        let mut winding = 0i64;
        for i in 0..verts.len() {
            let j = (i + 1) % verts.len();
            let (c1, c2) = (side[i], side[j]);
            if c1.is_positive() == c2.is_positive() {
                continue;
            }
            // Segment crosses the supporting line; keep crossings with t > 0.
            let a = verts[i];
            let b = verts[j];
            let wx = (c1 - c2) * (a.x - p.x) + c1 * (b.x - a.x);
            let wy = (c1 - c2) * (a.y - p.y) + c1 * (b.y - a.y);
            let t_sign = (dx * wx + dy * wy) * (c1 - c2);
            if t_sign.is_positive() {
                winding += if c2.is_positive() { 1 } else { -1 };
            }
        }
        return Ok(winding);
    }
    unreachable!()
}
