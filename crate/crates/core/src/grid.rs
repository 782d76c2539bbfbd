//! Grid diagrams and the planar rectangular diagrams they encode.
//!
//! A grid diagram of size `n` places one X and one O in every row and
//! column of an n x n array. Joining X to O vertically in each column and
//! O to X horizontally in each row (horizontal strands passing under every
//! vertical strand) produces an oriented link diagram. Rows are numbered
//! bottom to top, so planar y-coordinates equal row indices.

use crate::error::{Error, Result};
use crate::trace::{self, Resolution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "RawGrid")]
pub struct GridDiagram {
    size: usize,
    x_rows: Vec<usize>,
    o_rows: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    size: usize,
    x: Vec<usize>,
    o: Vec<usize>,
}

impl From<GridDiagram> for RawGrid {
    fn from(d: GridDiagram) -> Self {
        RawGrid {
            size: d.size,
            x: d.x_rows,
            o: d.o_rows,
        }
    }
}

impl<'de> Deserialize<'de> for GridDiagram {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawGrid::deserialize(deserializer)?;
        GridDiagram::new(raw.size, raw.x, raw.o).map_err(serde::de::Error::custom)
    }
}

/// A crossing of the rectangular diagram. The vertical strand is always
/// the over-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub column: usize,
    pub row: usize,
    /// +1 or -1, by the right-hand rule on (over, under) directions.
    pub sign: i64,
}

/// Summary data of the planar rectangular diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramData {
    pub crossings: Vec<Crossing>,
    pub n_plus: usize,
    pub n_minus: usize,
    pub writhe: i64,
    pub rot: i64,
    pub components: usize,
}

impl GridDiagram {
    /// Validate and build a diagram. Marker rows are 1-indexed.
    pub fn new(size: usize, x_rows: Vec<usize>, o_rows: Vec<usize>) -> Result<Self> {
        if size < 2 {
            return Err(Error::SizeTooSmall(size));
        }
        if x_rows.len() != size || !is_permutation(&x_rows, size) {
            return Err(Error::NotAPermutation("X"));
        }
        if o_rows.len() != size || !is_permutation(&o_rows, size) {
            return Err(Error::NotAPermutation("O"));
        }
        for c in 0..size {
            if x_rows[c] == o_rows[c] {
                return Err(Error::PunctureCollision { column: c + 1 });
            }
        }
        Ok(GridDiagram {
            size,
            x_rows,
            o_rows,
        })
    }

    /// Parse the text format `n=<int>; X=<csv>; O=<csv>` (whitespace-insensitive).
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut size = None;
        let mut xs = None;
        let mut os = None;
        for part in compact.split(';').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidFormat(format!("expected key=value, got {:?}", part)))?;
            match key {
                "n" | "N" => {
                    size = Some(value.parse::<usize>().map_err(|_| {
                        Error::InvalidFormat(format!("bad size {:?}", value))
                    })?)
                }
                "X" | "x" => xs = Some(parse_csv(value)?),
                "O" | "o" => os = Some(parse_csv(value)?),
                other => {
                    return Err(Error::InvalidFormat(format!("unknown key {:?}", other)));
                }
            }
        }
        let size = size.ok_or_else(|| Error::InvalidFormat("missing n=".into()))?;
        let xs = xs.ok_or_else(|| Error::InvalidFormat("missing X=".into()))?;
        let os = os.ok_or_else(|| Error::InvalidFormat("missing O=".into()))?;
        GridDiagram::new(size, xs, os)
    }

    /// Canonical text form; `parse` of this string returns an equal diagram.
    pub fn text(&self) -> String {
        let csv = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "n={}; X={}; O={}",
            self.size,
            csv(&self.x_rows),
            csv(&self.o_rows)
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Row of the X in column `c` (all arguments and results 1-indexed).
    pub fn x_row(&self, c: usize) -> usize {
        self.x_rows[c - 1]
    }

    pub fn o_row(&self, c: usize) -> usize {
        self.o_rows[c - 1]
    }

    /// Column of the X in row `r`.
    pub fn x_col(&self, r: usize) -> usize {
        1 + self.x_rows.iter().position(|&v| v == r).unwrap()
    }

    pub fn o_col(&self, r: usize) -> usize {
        1 + self.o_rows.iter().position(|&v| v == r).unwrap()
    }

    /// Rows of the two punctures in column `c`, bottom first.
    pub fn vertical_span(&self, c: usize) -> (usize, usize) {
        let (a, b) = (self.x_row(c), self.o_row(c));
        (a.min(b), a.max(b))
    }

    /// Columns of the two punctures in row `r`, left first.
    pub fn horizontal_span(&self, r: usize) -> (usize, usize) {
        let (a, b) = (self.x_col(r), self.o_col(r));
        (a.min(b), a.max(b))
    }

    /// Does the vertical strand of column `c` point upward (X below O)?
    pub fn vertical_points_up(&self, c: usize) -> bool {
        self.o_row(c) > self.x_row(c)
    }

    /// Does the horizontal strand of row `r` point rightward (O left of X)?
    pub fn horizontal_points_right(&self, r: usize) -> bool {
        self.x_col(r) > self.o_col(r)
    }

    /// All crossings, sorted by (column, row).
    ///
    /// A crossing sits at (c, r) exactly when r lies strictly between the
    /// puncture rows of column c and c lies strictly between the puncture
    /// columns of row r.
    pub fn crossings(&self) -> Vec<Crossing> {
        let mut out = Vec::new();
        for c in 1..=self.size {
            let (lo, hi) = self.vertical_span(c);
            for r in lo + 1..hi {
                let (left, right) = self.horizontal_span(r);
                if left < c && c < right {
                    let vs = if self.vertical_points_up(c) { 1 } else { -1 };
                    let hs = if self.horizontal_points_right(r) { 1 } else { -1 };
                    out.push(Crossing {
                        column: c,
                        row: r,
                        sign: -vs * hs,
                    });
                }
            }
        }
        out
    }

    /// Crossings, signed counts, writhe, rotation number and component count.
    pub fn diagram_data(&self) -> DiagramData {
        let crossings = self.crossings();
        let n_plus = crossings.iter().filter(|c| c.sign > 0).count();
        let n_minus = crossings.len() - n_plus;
        let writhe = n_plus as i64 - n_minus as i64;

        // Seifert circles: resolve every crossing respecting orientation;
        // the sign convention makes the 0-smoothing oriented at positive
        // crossings and the 1-smoothing oriented at negative ones.
        let seifert: Vec<bool> = crossings.iter().map(|c| c.sign < 0).collect();
        let traced = trace::trace_circles(self, &crossings, &Resolution::Smoothing(&seifert));
        let mut rot = 0i64;
        for circle in &traced.circles {
            let (piece, forward) = circle.piece_dirs[0];
            let link_forward = match traced.pieces[piece].vertical {
                true => self.vertical_points_up(traced.pieces[piece].line),
                false => self.horizontal_points_right(traced.pieces[piece].line),
            };
            let factor = if forward == link_forward { 1 } else { -1 };
            rot += circle.traced_sign * factor;
        }

        DiagramData {
            crossings,
            n_plus,
            n_minus,
            writhe,
            rot,
            components: self.components(),
        }
    }

    /// Number of link components: cycles of the column-to-column
    /// traversal X -> O (vertical) -> X (horizontal).
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.size];
        let mut cycles = 0;
        for start in 1..=self.size {
            if seen[start - 1] {
                continue;
            }
            cycles += 1;
            let mut c = start;
            while !seen[c - 1] {
                seen[c - 1] = true;
                c = self.x_col(self.o_row(c));
            }
        }
        cycles
    }

    /// Transposed grid: reflects the diagram in the main diagonal. The
    /// reflection mirrors the link but the forced over/under swap mirrors
    /// it back, so this presents the same link with reversed orientation.
    pub fn transpose(&self) -> GridDiagram {
        let mut x = vec![0; self.size];
        let mut o = vec![0; self.size];
        for c in 1..=self.size {
            x[self.x_row(c) - 1] = c;
            o[self.o_row(c) - 1] = c;
        }
        GridDiagram::new(self.size, x, o).expect("transpose of a valid grid is valid")
    }

    /// Mirror link: reverse the column order (an in-page reflection that
    /// keeps verticals over). Every crossing sign flips.
    pub fn mirror(&self) -> GridDiagram {
        let n = self.size;
        let x = (1..=n).map(|c| self.x_rows[n - c]).collect();
        let o = (1..=n).map(|c| self.o_rows[n - c]).collect();
        GridDiagram::new(n, x, o).expect("mirror of a valid grid is valid")
    }

    /// The grid rotated by 180 degrees in the plane.
    pub fn rotate180(&self) -> GridDiagram {
        let n = self.size;
        let flip = |v: &[usize], c: usize| n + 1 - v[n - c];
        let x = (1..=n).map(|c| flip(&self.x_rows, c)).collect();
        let o = (1..=n).map(|c| flip(&self.o_rows, c)).collect();
        GridDiagram::new(n, x, o).expect("rotation of a valid grid is valid")
    }

    /// Every valid grid diagram of the given size, in lexicographic order.
    pub fn enumerate(size: usize) -> Vec<GridDiagram> {
        let mut out = Vec::new();
        let perms = permutations(size);
        for xs in &perms {
            for os in &perms {
                if xs.iter().zip(os).all(|(a, b)| a != b) {
                    out.push(GridDiagram {
                        size,
                        x_rows: xs.clone(),
                        o_rows: os.clone(),
                    });
                }
            }
        }
        out
    }

    // Standard test links.

    /// 2x2 unknot.
    pub fn unknot() -> GridDiagram {
        GridDiagram::new(2, vec![2, 1], vec![1, 2]).unwrap()
    }

    /// Unknot with a single positive kink (one crossing, size 3).
    pub fn kinked_unknot() -> GridDiagram {
        GridDiagram::new(3, vec![2, 1, 3], vec![1, 3, 2]).unwrap()
    }

    /// Trefoil on a 5x5 grid.
    pub fn trefoil() -> GridDiagram {
        GridDiagram::new(5, vec![3, 4, 5, 1, 2], vec![1, 2, 3, 4, 5]).unwrap()
    }

    /// Hopf link on a 4x4 grid.
    pub fn hopf_link() -> GridDiagram {
        GridDiagram::new(4, vec![4, 3, 2, 1], vec![2, 1, 4, 3]).unwrap()
    }

    /// Figure-eight knot on a 6x6 grid.
    pub fn figure_eight() -> GridDiagram {
        GridDiagram::new(6, vec![1, 2, 4, 3, 6, 5], vec![3, 6, 1, 5, 4, 2]).unwrap()
    }
}

fn is_permutation(v: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    for &x in v {
        if x < 1 || x > n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn parse_csv(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidFormat(format!("bad integer {:?}", t)))
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}
