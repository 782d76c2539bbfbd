//! Gradings of generators: the point count Pbar, the pair count T, the
//! winding grading Q, their normalizations J and P, and the auxiliary
//! gradings used as executable cross-checks.

use crate::eights::{distinguished_generator, Eights, Generator, Marker};
use crate::error::{Error, Result};
use crate::geom::{winding_number, Pt};
use crate::grid::DiagramData;
use crate::states::{phi, state_gradings, StateSpace};
use serde::Serialize;

/// A generator together with its gradings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedGenerator {
    pub generator: Generator,
    pub pbar: i64,
    pub t: i64,
    pub q: i64,
    pub j: i64,
    pub p: i64,
}

/// Auxiliary gradings, defined through the closed-form identities they
/// are required to satisfy rather than by case tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuxGradings {
    pub j1: i64,
    pub j2: i64,
    pub j3: i64,
    pub q_far: i64,
    pub q_loc: i64,
}

/// Count pairs (a, b) with a strictly below-left of b (`increasing`) and
/// pairs with a left of b but strictly above (`decreasing`). Ties in
/// either coordinate contribute to neither count.
pub fn pair_count(a: &[Pt], b: &[Pt]) -> (i64, i64) {
    let mut increasing = 0;
    let mut decreasing = 0;
    for p in a {
        for q in b {
            if p.x < q.x {
                if p.y < q.y {
                    increasing += 1;
                } else if p.y > q.y {
                    decreasing += 1;
                }
            }
        }
    }
    (increasing, decreasing)
}

/// Which way arcs run along the figure-eights when assembling the
/// comparison loop; the winding total is direction-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArcDirection {
    #[default]
    Forward,
    Reversed,
}

/// Relative winding grading between two generators of the same diagram.
///
/// The loop goes along the horizontal strands from `g` to `base`, then
/// back along the figure-eights; its closed curves are winded around all
/// 2n punctures.
pub fn grading_q(
    space: &StateSpace,
    eights: &Eights,
    g: &Generator,
    base: &Generator,
) -> Result<i64> {
    grading_q_with(space, eights, g, base, ArcDirection::Forward)
}

pub fn grading_q_with(
    space: &StateSpace,
    eights: &Eights,
    g: &Generator,
    base: &Generator,
    dir: ArcDirection,
) -> Result<i64> {
    let d = &space.diagram;
    let n = d.size();
    if g.points.len() != n || base.points.len() != n {
        return Err(Error::MismatchedDiagrams);
    }
    for z in g.points.iter().chain(&base.points) {
        if eights.zpoint(z.column, z.row, z.side).is_none() {
            return Err(Error::MismatchedDiagrams);
        }
    }

    let punctures: Vec<Pt> = (1..=n)
        .flat_map(|c| {
            [
                Pt::from_ints(c as i64, d.x_row(c) as i64),
                Pt::from_ints(c as i64, d.o_row(c) as i64),
            ]
        })
        .collect();

    // Walk the cycles: from a point of g, along its row to the point of
    // base, then along that column's figure-eight back to a point of g.
    let mut visited = vec![false; n];
    let mut total = 0i64;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut verts: Vec<Pt> = Vec::new();
        let mut col = start + 1;
        loop {
            visited[col - 1] = true;
            let from = g.point_in_column(col);
            let to = base.point_in_row(from.row);
            verts.push(from.point());
            verts.push(to.point());
            let next = g.point_in_column(to.column);
            let arc = match dir {
                ArcDirection::Forward => eights.curve(to.column).arc(to, next),
                ArcDirection::Reversed => eights.curve(to.column).arc_reversed(to, next),
            };
            verts.extend(arc);
            col = to.column;
            if col == start + 1 {
                break;
            }
        }
        for p in &punctures {
            total += winding_number(&verts, *p)?;
        }
    }
    Ok(total)
}

/// All gradings of a generator. The absolute normalizations are fixed by
/// the distinguished generator x: Q(x) = 0,
/// J = 2(T - Q) - 2 T(x) + rot + w and P = Pbar - Pbar(x) - rot - w.
pub fn gradings_jp(space: &StateSpace, eights: &Eights, g: &Generator) -> Result<GradedGenerator> {
    let x = distinguished_generator(&space.diagram, eights, Marker::X);
    let data = &space.data;
    let pbar: i64 = g.points.iter().map(|z| z.p).sum();
    let pbar_x: i64 = x.points.iter().map(|z| z.p).sum();
    let (t, _) = pair_count(&g.coords(), &g.coords());
    let (t_x, _) = pair_count(&x.coords(), &x.coords());
    let q = grading_q(space, eights, g, &x)?;
    let j = 2 * (t - q) - 2 * t_x + data.rot + data.writhe;
    let p = pbar - pbar_x - data.rot - data.writhe;
    Ok(GradedGenerator {
        generator: g.clone(),
        pbar,
        t,
        q,
        j,
        p,
    })
}

/// j1, j2, j3 and the local/far parts of Q.
///
/// j2 and j3 weigh the crossings by the smoothing the associated state
/// chooses there (+1 for a 1-smoothing, -1 for a 0-smoothing), split by
/// whether the crossing carries a point of g; j1 is pinned by
/// rot(phi(g)) = j1/4 + j2/2. Q_far compares g against the punctures with
/// strict pair counts, and Q_loc counts points on the upward strands
/// minus points on the downward ones.
pub fn auxiliary_gradings(space: &StateSpace, g: &Generator) -> Result<AuxGradings> {
    let d = &space.diagram;
    let state = phi(space, g);
    let rot_phi = state_gradings(space, &state).rot;

    let mut j2 = 0i64;
    let mut j3 = 0i64;
    for (k, cr) in space.crossings.iter().enumerate() {
        let weight = if state.resolution[k] { 1 } else { -1 };
        let marked = g.point_in_column(cr.column).row == cr.row;
        if marked {
            j2 += weight;
        } else {
            j3 += weight;
        }
    }
    let j1 = 4 * rot_phi - 2 * j2;

    let punctures: Vec<Pt> = (1..=d.size())
        .flat_map(|c| {
            [
                Pt::from_ints(c as i64, d.x_row(c) as i64),
                Pt::from_ints(c as i64, d.o_row(c) as i64),
            ]
        })
        .collect();
    let coords = g.coords();
    let (i_gp, im_gp) = pair_count(&coords, &punctures);
    let (i_pg, im_pg) = pair_count(&punctures, &coords);
    let q_far = i_gp + i_pg - im_gp - im_pg;
    let q_loc = g.points.iter().map(|z| 2 * z.p - 1).sum();

    Ok(AuxGradings {
        j1,
        j2,
        j3,
        q_far,
        q_loc,
    })
}

/// i and j of a generator, read off through its associated state.
pub fn state_ij(space: &StateSpace, g: &Generator) -> (i64, i64) {
    let s = state_gradings(space, &phi(space, g));
    (s.i, s.j)
}

/// Convenience: every generator with its gradings, in canonical order.
pub fn graded_generators(
    space: &StateSpace,
    eights: &Eights,
) -> Result<Vec<GradedGenerator>> {
    crate::eights::enumerate_generators(&space.diagram, eights)
        .iter()
        .map(|g| gradings_jp(space, eights, g))
        .collect()
}

/// The writhe/rotation normalization J(x) = rot + w, P(x) = -rot - w.
pub fn x_normalization(data: &DiagramData) -> (i64, i64) {
    (data.rot + data.writhe, -data.rot - data.writhe)
}
