//! Enhanced Kauffman states, admissibility, the correspondence with
//! generators, and the state gradings.
//!
//! An enhanced state picks one smoothing per crossing and an orientation
//! for every resulting circle. A state is admissible when no smoothed
//! crossing has both vertical strand ends oriented into it; those
//! vertical-sink pictures are exactly the excluded local configurations,
//! and the admissible states are in bijection with the generators.

use crate::eights::{Eights, Generator, Side, ZPoint};
use crate::error::{Error, Result};
use crate::geom::{winding_number, Pt};
use crate::grid::{Crossing, DiagramData, GridDiagram};
use crate::trace::{trace_circles, Resolution, Traced};
use serde::Serialize;

/// A smoothing choice per crossing plus an orientation per circle.
///
/// Resolution bits follow the canonical (column, row) crossing order;
/// orientation entries are +1 (counterclockwise) or -1 (clockwise) and
/// follow the canonical circle order of the resolved diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EnhancedState {
    pub resolution: Vec<bool>,
    pub orientations: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateGradings {
    pub i_bar: i64,
    pub i: i64,
    pub j: i64,
    pub rot: i64,
    pub r: i64,
}

/// All resolutions of a diagram, traced once and shared by everything
/// downstream (state enumeration, gradings, the chain complex).
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub diagram: GridDiagram,
    pub crossings: Vec<Crossing>,
    pub data: DiagramData,
    /// Traced circles per resolution bit mask.
    pub traces: Vec<Traced>,
    /// One representative point per bounded complementary region.
    pub regions: Vec<Pt>,
}

impl StateSpace {
    pub fn new(diagram: &GridDiagram) -> StateSpace {
        let data = diagram.diagram_data();
        let crossings = data.crossings.clone();
        let k = crossings.len();
        let mut traces = Vec::with_capacity(1 << k);
        for mask in 0..(1u64 << k) {
            let bits: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            traces.push(trace_circles(diagram, &crossings, &Resolution::Smoothing(&bits)));
        }
        let regions = region_representatives(diagram);
        StateSpace {
            diagram: diagram.clone(),
            crossings,
            data,
            traces,
            regions,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Total number of enhanced states.
    pub fn state_count(&self) -> u128 {
        self.traces
            .iter()
            .map(|t| 1u128 << t.circles.len())
            .sum()
    }

    pub fn resolution_mask(&self, state: &EnhancedState) -> u64 {
        state
            .resolution
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| m | (u64::from(b) << i))
    }

    pub fn state(&self, mask: u64, orient: u64) -> EnhancedState {
        let k = self.crossing_count();
        let trace = &self.traces[mask as usize];
        EnhancedState {
            resolution: (0..k).map(|i| mask >> i & 1 == 1).collect(),
            orientations: (0..trace.circles.len())
                .map(|i| if orient >> i & 1 == 0 { 1 } else { -1 })
                .collect(),
        }
    }

    pub fn trace_of(&self, state: &EnhancedState) -> &Traced {
        &self.traces[self.resolution_mask(state) as usize]
    }

    /// Orientation sign carried by a piece of the resolved diagram under
    /// the state's circle orientations: `true` means low-to-high.
    fn piece_points_forward(&self, state: &EnhancedState, piece: usize) -> bool {
        let trace = self.trace_of(state);
        let circle = trace.piece_circle[piece];
        let flipped = state.orientations[circle] != trace.circles[circle].traced_sign;
        trace.piece_forward[piece] ^ flipped
    }
}

/// All enhanced states in canonical order: resolution bits as an integer,
/// then orientation bits over the canonically ordered circles.
pub fn enumerate_states(space: &StateSpace) -> Vec<EnhancedState> {
    let mut out = Vec::new();
    for mask in 0..space.traces.len() as u64 {
        let circles = space.traces[mask as usize].circles.len();
        for orient in 0..(1u64 << circles) {
            out.push(space.state(mask, orient));
        }
    }
    out
}

/// No smoothed crossing may have both vertical strand ends oriented into it.
pub fn is_admissible(space: &StateSpace, state: &EnhancedState) -> bool {
    let trace = space.trace_of(state);
    for cs in &trace.crossing_strands {
        let s_into = {
            let circle = trace.piece_circle[cs.s_piece];
            let flipped = state.orientations[circle] != trace.circles[circle].traced_sign;
            cs.s_into_traced ^ flipped
        };
        let n_into = {
            let circle = trace.piece_circle[cs.n_piece];
            let flipped = state.orientations[circle] != trace.circles[circle].traced_sign;
            cs.n_into_traced ^ flipped
        };
        if s_into && n_into {
            return false;
        }
    }
    true
}

/// Independent formulation of admissibility by whole-line switch patterns:
/// every column reads Down*Up* bottom-to-top and every row reads
/// Right*Left* left-to-right.
pub fn admissible_by_line_switches(space: &StateSpace, state: &EnhancedState) -> bool {
    column_patterns(space, state).is_some() && row_patterns(space, state).is_some()
}

/// Per column, the switch row (Down to Up boundary), when the pattern is legal.
fn column_patterns(space: &StateSpace, state: &EnhancedState) -> Option<Vec<usize>> {
    let trace = space.trace_of(state);
    let d = &space.diagram;
    let mut markers = Vec::with_capacity(d.size());
    for c in 1..=d.size() {
        let mut pieces: Vec<usize> = (0..trace.pieces.len())
            .filter(|&i| trace.pieces[i].vertical && trace.pieces[i].line == c)
            .collect();
        pieces.sort_by_key(|&i| trace.pieces[i].lo);
        let dirs: Vec<bool> = pieces
            .iter()
            .map(|&i| space.piece_points_forward(state, i))
            .collect();
        // Legal vertical pattern: downward pieces, then upward pieces.
        let first_up = dirs.iter().position(|&up| up);
        let boundary = match first_up {
            None => d.vertical_span(c).1, // all down: marker at the top
            Some(k) => {
                if dirs[k..].iter().any(|&up| !up) {
                    return None; // an upward piece above a downward one
                }
                if k == 0 {
                    d.vertical_span(c).0 // all up: marker at the bottom
                } else {
                    trace.pieces[pieces[k]].lo
                }
            }
        };
        markers.push(boundary);
    }
    Some(markers)
}

/// Per row, the switch column (Right to Left boundary), when legal.
fn row_patterns(space: &StateSpace, state: &EnhancedState) -> Option<Vec<usize>> {
    let trace = space.trace_of(state);
    let d = &space.diagram;
    let mut markers = Vec::with_capacity(d.size());
    for r in 1..=d.size() {
        let mut pieces: Vec<usize> = (0..trace.pieces.len())
            .filter(|&i| !trace.pieces[i].vertical && trace.pieces[i].line == r)
            .collect();
        pieces.sort_by_key(|&i| trace.pieces[i].lo);
        let dirs: Vec<bool> = pieces
            .iter()
            .map(|&i| space.piece_points_forward(state, i))
            .collect();
        // Legal horizontal pattern: rightward pieces, then leftward pieces.
        let first_left = dirs.iter().position(|&right| !right);
        let boundary = match first_left {
            None => d.horizontal_span(r).1, // all right: marker at the right end
            Some(k) => {
                if dirs[k..].iter().any(|&right| right) {
                    return None;
                }
                if k == 0 {
                    d.horizontal_span(r).0
                } else {
                    trace.pieces[pieces[k]].lo
                }
            }
        };
        markers.push(boundary);
    }
    Some(markers)
}

/// Smoothing bit at a crossing marked by a generator point.
///
/// The four cases are indexed by the point's side and its position
/// relative to the waist; the pairing is pinned by the grading theorems
/// and by waist-move invariance.
fn marked_smoothing_bit(side: Side, above_waist: bool) -> bool {
    (side == Side::Left) != above_waist
}

fn marked_side(bit: bool, above_waist: bool) -> Side {
    if bit != above_waist {
        Side::Left
    } else {
        Side::Right
    }
}

/// The enhanced Kauffman state associated to a generator.
pub fn phi(space: &StateSpace, g: &Generator) -> EnhancedState {
    phi_with_table(space, g, false)
}

/// Testing hook: `transposed` swaps the two smoothings at marked
/// crossings, which breaks the grading theorems loudly.
pub fn phi_with_table(space: &StateSpace, g: &Generator, transposed: bool) -> EnhancedState {
    let d = &space.diagram;
    let n = d.size();
    // Marker of each column (the feature nearest its point) and of each row.
    let marker_row: Vec<usize> = (1..=n).map(|c| g.point_in_column(c).row).collect();
    let marker_col: Vec<usize> = (1..=n).map(|r| g.point_in_row(r).column).collect();

    let mut resolution = Vec::with_capacity(space.crossings.len());
    for cr in &space.crossings {
        let bit = if marker_row[cr.column - 1] == cr.row {
            let z = g.point_in_column(cr.column);
            marked_smoothing_bit(z.side, z.above_waist) != transposed
        } else {
            // Unmarked: the unique orientation-coherent smoothing. The
            // vertical line flows away from its marker, the horizontal
            // line flows toward its marker.
            let v_up = marker_row[cr.column - 1] < cr.row;
            let h_right = marker_col[cr.row - 1] > cr.column;
            v_up == h_right
        };
        resolution.push(bit);
    }

    let mask = resolution
        .iter()
        .enumerate()
        .fold(0u64, |m, (i, &b)| m | (u64::from(b) << i));
    let trace = &space.traces[mask as usize];

    // Orient each circle so its pieces follow the induced directions.
    let rule_forward = |piece: usize| -> bool {
        let p = &trace.pieces[piece];
        if p.vertical {
            let marker = marker_row[p.line - 1];
            if p.lo >= marker {
                true // above the marker: upward
            } else {
                debug_assert!(p.hi <= marker);
                false
            }
        } else {
            let marker = marker_col[p.line - 1];
            if p.hi <= marker {
                true // left of the marker: rightward
            } else {
                debug_assert!(p.lo >= marker);
                false
            }
        }
    };
    let orientations: Vec<i64> = trace
        .circles
        .iter()
        .map(|circle| {
            let (first, traced_fwd) = circle.piece_dirs[0];
            let sign = if rule_forward(first) == traced_fwd {
                circle.traced_sign
            } else {
                -circle.traced_sign
            };
            debug_assert!(circle.piece_dirs.iter().all(|&(p, fwd)| {
                (rule_forward(p) == fwd) == (sign == circle.traced_sign)
            }));
            sign
        })
        .collect();

    let state = EnhancedState {
        resolution,
        orientations,
    };
    debug_assert!(is_admissible(space, &state));
    state
}

/// The generator associated to an admissible state; inverse of `phi`.
pub fn psi(space: &StateSpace, eights: &Eights, state: &EnhancedState) -> Result<Generator> {
    let d = &space.diagram;
    let marker_row = column_patterns(space, state).ok_or(Error::NotAdmissible)?;
    let marker_col = row_patterns(space, state).ok_or(Error::NotAdmissible)?;
    for c in 1..=d.size() {
        if marker_col[marker_row[c - 1] - 1] != c {
            return Err(Error::NotAdmissible);
        }
    }

    let mut points = Vec::with_capacity(d.size());
    for c in 1..=d.size() {
        let r = marker_row[c - 1];
        let (b, t) = d.vertical_span(c);
        if r == b || r == t {
            points.push(*eights.puncture_adjacent(c, r));
        } else {
            let k = space
                .crossings
                .iter()
                .position(|cr| cr.column == c && cr.row == r)
                .expect("interior switch sits on a crossing");
            let above = eights
                .zpoint(c, r, Side::Left)
                .expect("crossing rows carry points on both sides")
                .above_waist;
            let side = marked_side(state.resolution[k], above);
            points.push(*eights.zpoint(c, r, side).unwrap());
        }
    }
    Ok(build_generator(points))
}

fn build_generator(points: Vec<ZPoint>) -> Generator {
    Generator { points }
}

/// Homological and quantum data of a state, including the filtration
/// grading R (total winding of the oriented circles around the bounded
/// complementary regions).
pub fn state_gradings(space: &StateSpace, state: &EnhancedState) -> StateGradings {
    let data: &DiagramData = &space.data;
    let i_bar = state.resolution.iter().filter(|&&b| b).count() as i64;
    let i = i_bar - data.n_minus as i64;
    let rot: i64 = state.orientations.iter().sum();
    let j = rot + i_bar + data.n_plus as i64 - 2 * data.n_minus as i64;
    let trace = space.trace_of(state);
    let mut r = 0i64;
    for (circle, &sign) in trace.circles.iter().zip(&state.orientations) {
        let factor = if sign == circle.traced_sign { 1 } else { -1 };
        for p in &space.regions {
            r += factor * winding_number(&circle.verts, *p).expect("regions avoid the circles");
        }
    }
    StateGradings { i_bar, i, j, rot, r }
}

/// One representative point per bounded region of the diagram complement:
/// flood-fill of unit cells across edges not covered by a strand, keeping
/// the lexicographically least cell center of each bounded component.
pub fn region_representatives(d: &GridDiagram) -> Vec<Pt> {
    let n = d.size();
    let cells = (n + 1) * (n + 1);
    let idx = |cx: usize, cy: usize| cy * (n + 1) + cx;
    // Edge between (cx,cy) and (cx+1,cy) is blocked by the vertical strand
    // of column cx+1 when that strand covers the shared edge; similarly
    // for horizontal strands.
    let v_blocked = |cx: usize, cy: usize| {
        let (b, t) = d.vertical_span(cx + 1);
        b <= cy && cy < t
    };
    let h_blocked = |cx: usize, cy: usize| {
        let (lo, hi) = d.horizontal_span(cy + 1);
        lo <= cx && cx < hi
    };

    let mut label = vec![usize::MAX; cells];
    let mut next_label = 0;
    for start_cy in 0..=n {
        for start_cx in 0..=n {
            if label[idx(start_cx, start_cy)] != usize::MAX {
                continue;
            }
            let this = next_label;
            next_label += 1;
            let mut queue = vec![(start_cx, start_cy)];
            label[idx(start_cx, start_cy)] = this;
            while let Some((cx, cy)) = queue.pop() {
                let mut visit = |nx: usize, ny: usize| {
                    if label[idx(nx, ny)] == usize::MAX {
                        label[idx(nx, ny)] = this;
                        queue.push((nx, ny));
                    }
                };
                if cx > 0 && !v_blocked(cx - 1, cy) {
                    visit(cx - 1, cy);
                }
                if cx < n && !v_blocked(cx, cy) {
                    visit(cx + 1, cy);
                }
                if cy > 0 && !h_blocked(cx, cy - 1) {
                    visit(cx, cy - 1);
                }
                if cy < n && !h_blocked(cx, cy) {
                    visit(cx, cy + 1);
                }
            }
        }
    }

    let outer = label[idx(0, 0)];
    let mut reps = Vec::new();
    let mut seen = vec![false; next_label];
    seen[outer] = true;
    for cy in 0..=n {
        for cx in 0..=n {
            let l = label[idx(cx, cy)];
            if !seen[l] {
                seen[l] = true;
                reps.push(Pt::new(
                    crate::geom::rat(2 * cx as i64 + 1, 2),
                    crate::geom::rat(2 * cy as i64 + 1, 2),
                ));
            }
        }
    }
    // Scan order above is (cy, cx); reps must be least by (x, y).
    reps.sort();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eights::{build_figure_eights, distinguished_generator, enumerate_generators, Marker, Waist};
    use crate::geom::rat;

    #[test]
    fn shared_state_is_thread_safe() {
        // Everything downstream is a pure function of these.
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<StateSpace>();
        assert_send_sync::<EnhancedState>();
        assert_send_sync::<crate::eights::Eights>();
        assert_send_sync::<crate::complex::ChainComplex>();
    }

    #[test]
    fn unknot_regions_and_states() {
        let d = GridDiagram::unknot();
        assert_eq!(region_representatives(&d), vec![Pt::new(rat(3, 2), rat(3, 2))]);
        let space = StateSpace::new(&d);
        let states = enumerate_states(&space);
        assert_eq!(states.len(), 2);
        assert!(states.iter().all(|s| is_admissible(&space, s)));
        let ccw = &states[0];
        assert_eq!(ccw.orientations, vec![1]);
        assert_eq!(
            state_gradings(&space, ccw),
            StateGradings { i_bar: 0, i: 0, j: 1, rot: 1, r: 1 }
        );
        let cw = &states[1];
        assert_eq!(
            state_gradings(&space, cw),
            StateGradings { i_bar: 0, i: 0, j: -1, rot: -1, r: -1 }
        );
    }

    #[test]
    fn phi_of_x_is_the_seifert_state() {
        for d in [
            GridDiagram::unknot(),
            GridDiagram::kinked_unknot(),
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
        ] {
            let space = StateSpace::new(&d);
            let eights = build_figure_eights(&d, Waist::High);
            let x = distinguished_generator(&d, &eights, Marker::X);
            let state = phi(&space, &x);
            // Oriented resolution: the 1-smoothing exactly at negative crossings.
            for (bit, cr) in state.resolution.iter().zip(&space.crossings) {
                assert_eq!(*bit, cr.sign < 0);
            }
            // Circles carry the link orientation, so rot matches the diagram.
            let g = state_gradings(&space, &state);
            assert_eq!(g.rot, space.data.rot);
            assert_eq!(g.i, 0);
            assert_eq!(g.j, space.data.rot + space.data.writhe);
        }
    }

    #[test]
    fn phi_of_o_on_the_unknot_is_clockwise() {
        let d = GridDiagram::unknot();
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        let o = distinguished_generator(&d, &eights, Marker::O);
        let state = phi(&space, &o);
        assert_eq!(state.orientations, vec![-1]);
    }

    #[test]
    fn kinked_unknot_state_census() {
        let d = GridDiagram::kinked_unknot();
        let space = StateSpace::new(&d);
        let states = enumerate_states(&space);
        assert_eq!(states.len(), 6);
        let admissible: Vec<_> = states.iter().filter(|s| is_admissible(&space, s)).collect();
        assert_eq!(admissible.len(), 4);
        // R values of the full census: the two vertical-sink states sit at +2.
        let rs: Vec<i64> = states.iter().map(|s| state_gradings(&space, s).r).collect();
        let mut sorted = rs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-2, -2, 0, 0, 2, 2]);
        for s in &states {
            let g = state_gradings(&space, s);
            let adm = is_admissible(&space, s);
            if g.r == 2 {
                assert!(!adm);
            }
        }
    }

    #[test]
    fn bijection_round_trips_small() {
        for d in [
            GridDiagram::unknot(),
            GridDiagram::kinked_unknot(),
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
        ] {
            for waist in [Waist::High, Waist::Low] {
                let space = StateSpace::new(&d);
                let eights = build_figure_eights(&d, waist);
                let gens = enumerate_generators(&d, &eights);
                let admissible: Vec<EnhancedState> = enumerate_states(&space)
                    .into_iter()
                    .filter(|s| is_admissible(&space, s))
                    .collect();
                assert_eq!(gens.len(), admissible.len());
                for g in &gens {
                    let h = phi(&space, g);
                    assert!(is_admissible(&space, &h));
                    assert_eq!(&psi(&space, &eights, &h).unwrap(), g);
                }
                for h in &admissible {
                    let g = psi(&space, &eights, h).unwrap();
                    assert_eq!(&phi(&space, &g), h);
                }
            }
        }
    }

    #[test]
    fn psi_rejects_inadmissible_states() {
        let d = GridDiagram::kinked_unknot();
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        for s in enumerate_states(&space) {
            if !is_admissible(&space, &s) {
                assert_eq!(psi(&space, &eights, &s), Err(Error::NotAdmissible));
            }
        }
    }

    #[test]
    fn local_and_line_switch_admissibility_agree() {
        for d in [
            GridDiagram::kinked_unknot(),
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
        ] {
            let space = StateSpace::new(&d);
            for s in enumerate_states(&space) {
                assert_eq!(
                    is_admissible(&space, &s),
                    admissible_by_line_switches(&space, &s)
                );
            }
        }
    }

    #[test]
    fn orientation_count_per_resolution() {
        let d = GridDiagram::trefoil();
        let space = StateSpace::new(&d);
        for (mask, trace) in space.traces.iter().enumerate() {
            let with_mask = enumerate_states(&space)
                .into_iter()
                .filter(|s| space.resolution_mask(s) == mask as u64)
                .count();
            assert_eq!(with_mask, 1 << trace.circles.len());
        }
    }
}
