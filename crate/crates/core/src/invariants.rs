//! The Jones polynomial by three routes: the signed generator sum, the
//! state sum over all enhanced states, and the Euler characteristic of
//! the reduced complex.

use crate::complex::build_complex;
use crate::eights::{build_figure_eights, enumerate_generators, Waist};
use crate::error::Result;
use crate::gradings::gradings_jp;
use crate::grid::GridDiagram;
use crate::laurent::LaurentPolynomial;
use crate::reduction::{reduce_in, ReduceOptions};
use crate::states::StateSpace;

/// Sum of (-1)^P q^J over all generators.
pub fn jones_bigelow(d: &GridDiagram, waist: Waist) -> Result<LaurentPolynomial> {
    let space = StateSpace::new(d);
    jones_bigelow_in(&space, waist)
}

pub fn jones_bigelow_in(space: &StateSpace, waist: Waist) -> Result<LaurentPolynomial> {
    let eights = build_figure_eights(&space.diagram, waist);
    let mut p = LaurentPolynomial::zero();
    for g in enumerate_generators(&space.diagram, &eights) {
        let gg = gradings_jp(space, &eights, &g)?;
        p.add_term(gg.j, if gg.p.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    Ok(p)
}

/// Sum of (-1)^i q^j over all enhanced states; equals the graded Euler
/// characteristic of the full complex by construction of the gradings.
pub fn jones_state_sum(d: &GridDiagram) -> LaurentPolynomial {
    let space = StateSpace::new(d);
    jones_state_sum_in(&space)
}

pub fn jones_state_sum_in(space: &StateSpace) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for mask in 0..space.traces.len() as u64 {
        let circles = space.traces[mask as usize].circles.len();
        for orient in 0..(1u64 << circles) {
            let s = space.state(mask, orient);
            let g = crate::states::state_gradings(space, &s);
            p.add_term(g.j, if g.i.rem_euclid(2) == 0 { 1 } else { -1 });
        }
    }
    p
}

/// Euler characteristic of the full complex (third route's building block).
pub fn jones_euler_full(space: &StateSpace) -> LaurentPolynomial {
    build_complex(space).euler_characteristic()
}

/// Euler characteristic of the reduced complex on generators.
pub fn jones_euler_reduced(space: &StateSpace, waist: Waist) -> Result<LaurentPolynomial> {
    let red = reduce_in(
        space,
        ReduceOptions {
            waist,
            ..Default::default()
        },
    )?;
    Ok(red.complex.euler_characteristic())
}

/// The empirical normalization relating the generator route to the state
/// routes: jones_bigelow = (-1)^components * state sum.
pub fn component_sign(d: &GridDiagram) -> i64 {
    if d.components() % 2 == 0 {
        1
    } else {
        -1
    }
}
