//! Circle tracing for resolved rectangular diagrams.
//!
//! The diagram is cut into pieces: vertical strand segments between
//! consecutive punctures/crossings of a column, and horizontal ones
//! likewise. At each crossing the chosen smoothing joins the four strand
//! ends pairwise; at each puncture the column strand meets the row strand.
//! Circles are the cycles of the resulting degree-2 graph.
//!
//! Polylines route smoothings through quarter-offset port points, so
//! distinct circles are honestly disjoint and every circle is embedded
//! with exact rational vertices.

use crate::geom::{orientation_sign, rat, Pt, Rat};
use crate::grid::{Crossing, GridDiagram};

/// How to connect strand ends at each crossing.
pub enum Resolution<'a> {
    /// One smoothing bit per crossing, in the canonical (column, row)
    /// crossing order. `false` joins {(S,W),(N,E)}, `true` joins
    /// {(S,E),(N,W)}.
    Smoothing(&'a [bool]),
    /// No smoothing: strands pass through (used for component counts).
    PassThrough,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Puncture { column: usize, row: usize },
    Port { crossing: usize, port: Port },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    South,
    North,
    West,
    East,
}

/// A maximal strand segment free of crossings and punctures in its interior.
#[derive(Debug, Clone)]
pub struct Piece {
    pub vertical: bool,
    /// Column index for vertical pieces, row index for horizontal ones.
    pub line: usize,
    /// Low coordinate (row for vertical, column for horizontal).
    pub lo: usize,
    pub hi: usize,
    lo_node: Node,
    hi_node: Node,
}

/// One traced circle.
#[derive(Debug, Clone)]
pub struct Circle {
    /// Pieces in traversal order, with `true` when traversed low-to-high
    /// (upward for vertical pieces, rightward for horizontal ones).
    pub piece_dirs: Vec<(usize, bool)>,
    /// Closed polyline in traversal order.
    pub verts: Vec<Pt>,
    /// Orientation of the traced polyline: +1 counterclockwise, -1 clockwise.
    pub traced_sign: i64,
    /// Least polyline vertex; canonical sort key.
    pub key: Pt,
}

/// Per-crossing strand bookkeeping for a traced resolution.
#[derive(Debug, Clone, Copy)]
pub struct CrossingStrands {
    /// Piece just below the crossing and whether its traced direction
    /// points up into the crossing.
    pub s_piece: usize,
    pub s_into_traced: bool,
    /// Piece just above the crossing and whether its traced direction
    /// points down into the crossing.
    pub n_piece: usize,
    pub n_into_traced: bool,
}

#[derive(Debug, Clone)]
pub struct Traced {
    pub pieces: Vec<Piece>,
    /// Circles sorted by their canonical key.
    pub circles: Vec<Circle>,
    /// Piece index -> circle index.
    pub piece_circle: Vec<usize>,
    /// Piece index -> traced direction is low-to-high.
    pub piece_forward: Vec<bool>,
    /// Indexed like the crossing list.
    pub crossing_strands: Vec<CrossingStrands>,
}

fn port_point(c: &Crossing, port: Port) -> Pt {
    let quarter = rat(1, 4);
    let x = Rat::from_integer(c.column as i64);
    let y = Rat::from_integer(c.row as i64);
    match port {
        Port::South => Pt::new(x, y - quarter),
        Port::North => Pt::new(x, y + quarter),
        Port::West => Pt::new(x - quarter, y),
        Port::East => Pt::new(x + quarter, y),
    }
}

fn node_point(node: Node, crossings: &[Crossing]) -> Pt {
    match node {
        Node::Puncture { column, row } => Pt::from_ints(column as i64, row as i64),
        Node::Port { crossing, port } => port_point(&crossings[crossing], port),
    }
}

/// Build the piece list of a diagram, given its crossings.
pub fn build_pieces(d: &GridDiagram, crossings: &[Crossing]) -> Vec<Piece> {
    let mut pieces = Vec::new();
    for c in 1..=d.size() {
        let (lo, hi) = d.vertical_span(c);
        let mut cuts: Vec<(usize, usize)> = Vec::new(); // (row, crossing index)
        for (k, cr) in crossings.iter().enumerate() {
            if cr.column == c {
                cuts.push((cr.row, k));
            }
        }
        cuts.sort();
        let mut prev: (usize, Node) = (lo, Node::Puncture { column: c, row: lo });
        for (row, k) in cuts {
            pieces.push(Piece {
                vertical: true,
                line: c,
                lo: prev.0,
                hi: row,
                lo_node: prev.1,
                hi_node: Node::Port {
                    crossing: k,
                    port: Port::South,
                },
            });
            prev = (
                row,
                Node::Port {
                    crossing: k,
                    port: Port::North,
                },
            );
        }
        pieces.push(Piece {
            vertical: true,
            line: c,
            lo: prev.0,
            hi,
            lo_node: prev.1,
            hi_node: Node::Puncture { column: c, row: hi },
        });
    }
    for r in 1..=d.size() {
        let (lo, hi) = d.horizontal_span(r);
        let mut cuts: Vec<(usize, usize)> = Vec::new(); // (column, crossing index)
        for (k, cr) in crossings.iter().enumerate() {
            if cr.row == r {
                cuts.push((cr.column, k));
            }
        }
        cuts.sort();
        let mut prev: (usize, Node) = (lo, Node::Puncture { column: lo, row: r });
        for (col, k) in cuts {
            pieces.push(Piece {
                vertical: false,
                line: r,
                lo: prev.0,
                hi: col,
                lo_node: prev.1,
                hi_node: Node::Port {
                    crossing: k,
                    port: Port::West,
                },
            });
            prev = (
                col,
                Node::Port {
                    crossing: k,
                    port: Port::East,
                },
            );
        }
        pieces.push(Piece {
            vertical: false,
            line: r,
            lo: prev.0,
            hi,
            lo_node: prev.1,
            hi_node: Node::Puncture { column: hi, row: r },
        });
    }
    pieces
}

fn paired_port(port: Port, smoothing: Option<bool>) -> Port {
    match smoothing {
        None => match port {
            Port::South => Port::North,
            Port::North => Port::South,
            Port::West => Port::East,
            Port::East => Port::West,
        },
        Some(false) => match port {
            Port::South => Port::West,
            Port::West => Port::South,
            Port::North => Port::East,
            Port::East => Port::North,
        },
        Some(true) => match port {
            Port::South => Port::East,
            Port::East => Port::South,
            Port::North => Port::West,
            Port::West => Port::North,
        },
    }
}

/// Trace the circles of a resolved diagram.
pub fn trace_circles(d: &GridDiagram, crossings: &[Crossing], res: &Resolution) -> Traced {
    let pieces = build_pieces(d, crossings);

    // (piece, end) incident to each node; punctures get exactly two ends,
    // ports exactly one.
    use std::collections::HashMap;
    let mut incidence: HashMap<(usize, usize, u8), Vec<(usize, bool)>> = HashMap::new();
    let node_key = |node: Node| -> (usize, usize, u8) {
        match node {
            Node::Puncture { column, row } => (column, row, 0),
            Node::Port { crossing, port } => (crossing, port as usize, 1),
        }
    };
    for (i, p) in pieces.iter().enumerate() {
        incidence.entry(node_key(p.lo_node)).or_default().push((i, false));
        incidence.entry(node_key(p.hi_node)).or_default().push((i, true));
    }

    // Walk cycles. State: current piece entered from `enter_hi` end.
    let mut piece_circle = vec![usize::MAX; pieces.len()];
    let mut piece_forward = vec![false; pieces.len()];
    let mut circles = Vec::new();
    for start in 0..pieces.len() {
        if piece_circle[start] != usize::MAX {
            continue;
        }
        let index = circles.len();
        let mut piece_dirs = Vec::new();
        let mut verts: Vec<Pt> = Vec::new();
        let mut cur = start;
        let mut enter_hi = false; // traverse `start` from its low end
        loop {
            piece_circle[cur] = index;
            let forward = !enter_hi;
            piece_forward[cur] = forward;
            piece_dirs.push((cur, forward));
            let exit_node = if forward {
                pieces[cur].hi_node
            } else {
                pieces[cur].lo_node
            };
            // Transfer at the exit node.
            let (next, next_enter_hi) = match exit_node {
                Node::Puncture { .. } => {
                    verts.push(node_point(exit_node, crossings));
                    let ends = &incidence[&node_key(exit_node)];
                    debug_assert_eq!(ends.len(), 2);
                    let (other, other_is_hi) =
                        ends.iter().copied().find(|&(p, _)| p != cur).unwrap_or_else(|| {
                            // A length-zero cycle through one piece twice
                            // cannot happen: punctures join a vertical and
                            // a horizontal piece.
                            unreachable!("puncture joining a piece to itself")
                        });
                    (other, other_is_hi)
                }
                Node::Port { crossing, port } => {
                    verts.push(node_point(exit_node, crossings));
                    let smoothing = match res {
                        Resolution::Smoothing(bits) => Some(bits[crossing]),
                        Resolution::PassThrough => None,
                    };
                    let out_port = paired_port(port, smoothing);
                    let out_node = Node::Port {
                        crossing,
                        port: out_port,
                    };
                    verts.push(node_point(out_node, crossings));
                    let ends = &incidence[&node_key(out_node)];
                    debug_assert_eq!(ends.len(), 1);
                    ends[0]
                }
            };
            cur = next;
            enter_hi = next_enter_hi;
            if cur == start && !enter_hi {
                break;
            }
        }
        // Smoothed circles are embedded, so the shoelace sign orients
        // them; pass-through curves may self-cross and carry no sign.
        let traced_sign = match res {
            Resolution::Smoothing(_) => orientation_sign(&verts),
            Resolution::PassThrough => 0,
        };
        let key = *verts.iter().min().unwrap();
        circles.push(Circle {
            piece_dirs,
            verts,
            traced_sign,
            key,
        });
    }

    // Canonical circle order, remapping the membership table.
    let mut order: Vec<usize> = (0..circles.len()).collect();
    order.sort_by_key(|&i| circles[i].key);
    let mut rank = vec![0; circles.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut sorted = Vec::with_capacity(circles.len());
    for &old in &order {
        sorted.push(circles[old].clone());
    }
    for pc in piece_circle.iter_mut() {
        *pc = rank[*pc];
    }

    // Strand data per crossing: the vertical pieces whose hi end (south
    // side) or lo end (north side) is that crossing.
    let mut crossing_strands = vec![
        CrossingStrands {
            s_piece: usize::MAX,
            s_into_traced: false,
            n_piece: usize::MAX,
            n_into_traced: false,
        };
        crossings.len()
    ];
    for (i, p) in pieces.iter().enumerate() {
        if let Node::Port { crossing, port } = p.hi_node {
            if port == Port::South {
                crossing_strands[crossing].s_piece = i;
                crossing_strands[crossing].s_into_traced = piece_forward[i];
            }
        }
        if let Node::Port { crossing, port } = p.lo_node {
            if port == Port::North {
                crossing_strands[crossing].n_piece = i;
                crossing_strands[crossing].n_into_traced = !piece_forward[i];
            }
        }
    }

    Traced {
        pieces,
        circles: sorted,
        piece_circle,
        piece_forward,
        crossing_strands,
    }
}
