//! Jones polynomial and Khovanov homology of oriented links, computed
//! directly from grid diagrams.
//!
//! The pipeline: a grid diagram determines a rectangular link diagram;
//! figure-eight curves along its vertical strands meet the horizontal
//! strands in intersection points whose n-tuples form the generator set;
//! those generators biject with the admissible enhanced Kauffman states;
//! and cancelling the inadmissible states out of the Khovanov complex
//! leaves a complex on the generators computing Khovanov homology.
//! All arithmetic is exact.
//!
//! ```
//! use gridkh_core::{build_complex, reduce, GridDiagram, ReduceOptions, StateSpace};
//!
//! let d = GridDiagram::parse("n=5; X=3,4,5,1,2; O=1,2,3,4,5")?;
//! let space = StateSpace::new(&d);
//! let full = build_complex(&space).homology()?;
//! let reduced = reduce(&d, ReduceOptions::default())?;
//! assert_eq!(reduced.complex.homology()?, full);
//! assert_eq!(full.total_free_rank(), 4);
//! # Ok::<(), gridkh_core::Error>(())
//! ```

pub mod complex;
pub mod eights;
pub mod error;
pub mod geom;
pub mod gradings;
pub mod grid;
pub mod invariants;
pub mod laurent;
pub mod linalg;
pub mod reduction;
pub mod states;
mod trace;
pub mod verify;

pub use complex::{
    build_complex, filtration_split, BasisElem, ChainComplex, FiltrationSplit, HomologyGroup,
    HomologyTable, Label, Ring,
};
pub use eights::{
    build_figure_eights, distinguished_generator, enumerate_generators, Eights, FigureEight,
    Generator, Marker, Side, Waist, ZPoint,
};
pub use error::{Error, Result};
pub use gradings::{
    auxiliary_gradings, grading_q, gradings_jp, pair_count, AuxGradings, GradedGenerator,
};
pub use grid::{Crossing, DiagramData, GridDiagram};
pub use invariants::{component_sign, jones_bigelow, jones_state_sum};
pub use laurent::LaurentPolynomial;
pub use linalg::{rank_and_kernel, smith_normal_form, ExactMatrix, Snf};
pub use reduction::{
    build_homotopy, gaussian_eliminate, hypercube_decompose, reduce, CubeComponent, Homotopy,
    HomotopyMode, ReduceOptions, ReducedComplex,
};
pub use states::{
    enumerate_states, is_admissible, phi, psi, state_gradings, EnhancedState, StateGradings,
    StateSpace,
};
pub use verify::{verify_suite, VerifyOptions, VerifyReport};
