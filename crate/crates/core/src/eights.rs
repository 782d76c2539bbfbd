//! Figure-eight curves along the vertical strands, their intersection
//! points with the horizontal strands, and the generators built from them.
//!
//! Each column carries one narrow immersed curve winding clockwise around
//! its top puncture and counterclockwise around its bottom one, with a
//! single self-intersection (the waist). The curve is realized as an exact
//! 12-vertex polyline with half-width 1/4, overshoot 1/4 and corner
//! offsets 1/8.

use crate::geom::{rat, Pt, Rat};
use crate::grid::{Crossing, GridDiagram};
use serde::{Deserialize, Serialize};

pub const HALF_WIDTH: (i64, i64) = (1, 4);

/// Which side of the vertical strand a point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Waist placement for every figure-eight of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Waist {
    /// Self-intersection just below the top puncture (t - 1/2).
    #[default]
    High,
    /// Self-intersection just above the bottom puncture (b + 1/2).
    Low,
}

/// An intersection point of a figure-eight with a horizontal strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ZPoint {
    pub column: usize,
    pub row: usize,
    pub side: Side,
    /// Whether the point lies above the waist of its figure-eight.
    #[serde(skip)]
    pub above_waist: bool,
    /// 1 when the strand through the point is oriented upward, 0 otherwise.
    #[serde(skip)]
    pub p: i64,
}

impl ZPoint {
    pub fn point(&self) -> Pt {
        let eps = rat(HALF_WIDTH.0, HALF_WIDTH.1);
        let x = Rat::from_integer(self.column as i64);
        match self.side {
            Side::Left => Pt::new(x - eps, Rat::from_integer(self.row as i64)),
            Side::Right => Pt::new(x + eps, Rat::from_integer(self.row as i64)),
        }
    }
}

/// The exact model of one figure-eight.
#[derive(Debug, Clone)]
pub struct FigureEight {
    pub column: usize,
    pub bottom_row: usize,
    pub top_row: usize,
    pub waist_y: Rat,
    /// Canonical closed polyline: waist, up the left strand, over the top
    /// apex, down the right strand, through the waist again, down the left
    /// strand, under the bottom apex, up the right strand.
    pub verts: [Pt; 12],
    /// Intersection points with horizontal strands, sorted by (row, side).
    pub zpoints: Vec<ZPoint>,
}

/// Polyline segment indices carrying the four strand classes.
const SEG_LEFT_ABOVE: usize = 1; // upward
const SEG_RIGHT_ABOVE: usize = 4; // downward
const SEG_LEFT_BELOW: usize = 7; // downward
const SEG_RIGHT_BELOW: usize = 10; // upward

impl FigureEight {
    fn strand_segment(&self, z: &ZPoint) -> usize {
        match (z.side, z.above_waist) {
            (Side::Left, true) => SEG_LEFT_ABOVE,
            (Side::Right, true) => SEG_RIGHT_ABOVE,
            (Side::Left, false) => SEG_LEFT_BELOW,
            (Side::Right, false) => SEG_RIGHT_BELOW,
        }
    }

    fn segment_goes_up(seg: usize) -> bool {
        seg == SEG_LEFT_ABOVE || seg == SEG_RIGHT_BELOW
    }

    /// Arc from one of this curve's points to another, following the
    /// curve's own orientation. Both endpoints are included.
    pub fn arc(&self, from: &ZPoint, to: &ZPoint) -> Vec<Pt> {
        assert_eq!(from.column, self.column);
        assert_eq!(to.column, self.column);
        if from == to {
            return vec![from.point()];
        }
        let si = self.strand_segment(from);
        let sj = self.strand_segment(to);
        let mut verts = vec![from.point()];
        if si == sj {
            let up = Self::segment_goes_up(si);
            if (up && to.row > from.row) || (!up && to.row < from.row) {
                verts.push(to.point());
                return verts;
            }
        }
        // Walk whole segments from the end of `si` around to the start of `sj`.
        let mut k = (si + 1) % 12;
        loop {
            verts.push(self.verts[k]);
            if k == sj {
                break;
            }
            k = (k + 1) % 12;
        }
        verts.push(to.point());
        verts
    }

    /// The same arc traversed against the curve's orientation.
    pub fn arc_reversed(&self, from: &ZPoint, to: &ZPoint) -> Vec<Pt> {
        let mut v = self.arc(to, from);
        v.reverse();
        v
    }
}

/// All figure-eights of a diagram under a fixed waist configuration.
#[derive(Debug, Clone)]
pub struct Eights {
    pub waist: Waist,
    pub curves: Vec<FigureEight>,
}

impl Eights {
    pub fn curve(&self, column: usize) -> &FigureEight {
        &self.curves[column - 1]
    }

    pub fn zpoint(&self, column: usize, row: usize, side: Side) -> Option<&ZPoint> {
        self.curve(column)
            .zpoints
            .iter()
            .find(|z| z.row == row && z.side == side)
    }

    /// The unique intersection point at a puncture row of a column.
    pub fn puncture_adjacent(&self, column: usize, row: usize) -> &ZPoint {
        let hits: Vec<&ZPoint> = self
            .curve(column)
            .zpoints
            .iter()
            .filter(|z| z.row == row)
            .collect();
        assert_eq!(hits.len(), 1, "puncture rows carry exactly one point");
        hits[0]
    }
}

/// Build every figure-eight of the diagram together with its points.
pub fn build_figure_eights(d: &GridDiagram, waist: Waist) -> Eights {
    let crossings = d.crossings();
    build_figure_eights_with(d, &crossings, waist)
}

pub fn build_figure_eights_with(
    d: &GridDiagram,
    crossings: &[Crossing],
    waist: Waist,
) -> Eights {
    let eps = rat(1, 4);
    let delta = rat(1, 4);
    let corner = rat(1, 8);
    let half = rat(1, 2);
    let mut curves = Vec::with_capacity(d.size());
    for c in 1..=d.size() {
        let (b, t) = d.vertical_span(c);
        let (bq, tq) = (Rat::from_integer(b as i64), Rat::from_integer(t as i64));
        let w = match waist {
            Waist::High => tq - half,
            Waist::Low => bq + half,
        };
        let cx = Rat::from_integer(c as i64);
        let (xa, xb) = (cx - eps, cx + eps);
        let top = tq + delta;
        let bot = bq - delta;
        let verts = [
            Pt::new(cx, w),
            Pt::new(xa, w + corner),
            Pt::new(xa, top),
            Pt::new(cx, top + corner),
            Pt::new(xb, top),
            Pt::new(xb, w + corner),
            Pt::new(cx, w),
            Pt::new(xa, w - corner),
            Pt::new(xa, bot),
            Pt::new(cx, bot - corner),
            Pt::new(xb, bot),
            Pt::new(xb, w - corner),
        ];

        let mut zpoints = Vec::new();
        let mut push = |row: usize, side: Side| {
            let above = Rat::from_integer(row as i64) > w;
            let p = match (side, above) {
                (Side::Left, true) | (Side::Right, false) => 1,
                _ => 0,
            };
            zpoints.push(ZPoint {
                column: c,
                row,
                side,
                above_waist: above,
                p,
            });
        };
        // Puncture rows: one point, on the side toward which the row's
        // horizontal strand extends from the puncture.
        for row in [b, t] {
            let (lo, hi) = d.horizontal_span(row);
            debug_assert!(c == lo || c == hi);
            push(row, if c == lo { Side::Right } else { Side::Left });
        }
        // Crossing rows: both sides.
        for cr in crossings.iter().filter(|cr| cr.column == c) {
            push(cr.row, Side::Left);
            push(cr.row, Side::Right);
        }
        zpoints.sort();
        curves.push(FigureEight {
            column: c,
            bottom_row: b,
            top_row: t,
            waist_y: w,
            verts,
            zpoints,
        });
    }
    Eights { waist, curves }
}

/// An n-tuple of intersection points, one per figure-eight and one per
/// horizontal strand. Points are kept sorted by column; a generator
/// serializes as the plain list of its points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Generator {
    pub points: Vec<ZPoint>,
}

impl Generator {
    fn new(points: Vec<ZPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].column < w[1].column));
        let mut rows: Vec<usize> = points.iter().map(|z| z.row).collect();
        rows.sort_unstable();
        rows.dedup();
        debug_assert_eq!(rows.len(), points.len(), "one point per row");
        Generator { points }
    }

    pub fn point_in_column(&self, column: usize) -> &ZPoint {
        &self.points[column - 1]
    }

    pub fn point_in_row(&self, row: usize) -> &ZPoint {
        self.points.iter().find(|z| z.row == row).unwrap()
    }

    pub fn coords(&self) -> Vec<Pt> {
        self.points.iter().map(|z| z.point()).collect()
    }
}

/// Which family of punctures a distinguished generator hugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    X,
    O,
}

/// The generator made of the points nearest to the X's (or the O's).
pub fn distinguished_generator(d: &GridDiagram, eights: &Eights, which: Marker) -> Generator {
    let mut points = Vec::with_capacity(d.size());
    for c in 1..=d.size() {
        let row = match which {
            Marker::X => d.x_row(c),
            Marker::O => d.o_row(c),
        };
        points.push(*eights.puncture_adjacent(c, row));
    }
    Generator::new(points)
}

/// Every generator, in lexicographic order of the per-column
/// (row, side) choices.
pub fn enumerate_generators(d: &GridDiagram, eights: &Eights) -> Vec<Generator> {
    let n = d.size();
    let mut out = Vec::new();
    let mut chosen: Vec<ZPoint> = Vec::with_capacity(n);
    let mut used_rows = vec![false; n + 1];
    fn rec(
        n: usize,
        eights: &Eights,
        chosen: &mut Vec<ZPoint>,
        used_rows: &mut Vec<bool>,
        out: &mut Vec<Generator>,
    ) {
        let c = chosen.len() + 1;
        if c > n {
            out.push(Generator::new(chosen.clone()));
            return;
        }
        for z in &eights.curve(c).zpoints {
            if !used_rows[z.row] {
                used_rows[z.row] = true;
                chosen.push(*z);
                rec(n, eights, chosen, used_rows, out);
                chosen.pop();
                used_rows[z.row] = false;
            }
        }
    }
    rec(n, eights, &mut chosen, &mut used_rows, &mut out);
    out
}
