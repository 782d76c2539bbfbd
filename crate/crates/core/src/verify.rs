//! The executable identity suite: every structural fact the pipeline
//! relies on, run against one diagram and reported check by check.

use crate::complex::{
    build_complex, filtration_split, local_type_census, ChainComplex, HomologyTable, Label, Ring,
};
use crate::eights::{
    build_figure_eights, distinguished_generator, enumerate_generators, Marker, Waist,
};
use crate::error::{Error, Result};
use crate::gradings::{auxiliary_gradings, grading_q_with, gradings_jp, ArcDirection};
use crate::grid::GridDiagram;
use crate::invariants::{component_sign, jones_bigelow_in, jones_state_sum_in};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{invariant_factors, rank_and_kernel, to_integer_matrix, ExactMatrix};
use crate::reduction::{hypercube_decompose, reduce_in, HomotopyMode, ReduceOptions};
use crate::states::{
    admissible_by_line_switches, enumerate_states, is_admissible, phi_with_table, psi,
    state_gradings, StateSpace,
};
use crate::trace::{trace_circles, Resolution};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub diagram: GridDiagram,
    pub checks: Vec<Check>,
    pub invariants: VerifyInvariants,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyInvariants {
    /// State-sum value (the graded Euler characteristic).
    pub jones: LaurentPolynomial,
    /// Signed generator-route value.
    pub jones_generators: LaurentPolynomial,
    pub homology: HomologyTable,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Deliberate convention corruptions, for exercising the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Swap the two smoothings at marked crossings.
    TransposedSmoothingTable,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub waist: Waist,
    /// Upper bound on 2^crossings * 2^(max circles).
    pub cap: u128,
    pub corruption: Option<Corruption>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            waist: Waist::High,
            cap: 1 << 20,
            corruption: None,
        }
    }
}

pub fn verify_suite(d: &GridDiagram, opts: VerifyOptions) -> Result<VerifyReport> {
    let k = d.crossings().len() as u32;
    if k as usize + d.size() >= 100 {
        return Err(Error::TooLarge {
            states: u128::MAX,
            cap: opts.cap,
        });
    }
    let bound = (1u128 << k) << d.size();
    if bound > opts.cap {
        return Err(Error::TooLarge {
            states: bound,
            cap: opts.cap,
        });
    }

    let transposed = opts.corruption == Some(Corruption::TransposedSmoothingTable);
    let space = StateSpace::new(d);
    let eights = build_figure_eights(d, opts.waist);
    let data = &space.data;
    let gens = enumerate_generators(d, &eights);
    let states = enumerate_states(&space);
    let admissible: Vec<_> = states
        .iter()
        .filter(|s| is_admissible(&space, s))
        .cloned()
        .collect();
    let x = distinguished_generator(d, &eights, Marker::X);
    let graded: Vec<_> = gens
        .iter()
        .map(|g| gradings_jp(&space, &eights, g))
        .collect::<Result<_>>()?;
    let aux: Vec<_> = gens
        .iter()
        .map(|g| auxiliary_gradings(&space, g))
        .collect::<Result<_>>()?;
    let phi_of: Vec<_> = gens
        .iter()
        .map(|g| phi_with_table(&space, g, transposed))
        .collect();
    let phi_gradings: Vec<_> = phi_of.iter().map(|s| state_gradings(&space, s)).collect();

    let mut checks: Vec<Check> = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    };

    // Diagram-level structure.
    check(
        "writhe = n+ - n-",
        data.writhe == data.n_plus as i64 - data.n_minus as i64,
        format!("w = {}, n+ = {}, n- = {}", data.writhe, data.n_plus, data.n_minus),
    );
    {
        let traced = trace_circles(d, &space.crossings, &Resolution::PassThrough);
        check(
            "components = traversal cycle count",
            d.components() == traced.circles.len(),
            format!("{} components", d.components()),
        );
    }
    check(
        "reparse identity",
        GridDiagram::parse(&d.text()).as_ref() == Ok(d),
        d.text(),
    );

    // The bijection.
    check(
        "|generators| = |admissible states|",
        gens.len() == admissible.len(),
        format!("{} generators, {} admissible states", gens.len(), admissible.len()),
    );
    {
        let mut ok = true;
        for (g, h) in gens.iter().zip(&phi_of) {
            if !is_admissible(&space, h) || psi(&space, &eights, h).as_ref() != Ok(g) {
                ok = false;
                break;
            }
        }
        check("psi . phi = id", ok, format!("{} generators", gens.len()));
    }
    {
        let mut ok = true;
        for h in &admissible {
            match psi(&space, &eights, h) {
                Ok(g) => {
                    if &phi_with_table(&space, &g, transposed) != h {
                        ok = false;
                        break;
                    }
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        check("phi . psi = id", ok, format!("{} states", admissible.len()));
    }
    {
        let ok = states
            .iter()
            .all(|s| is_admissible(&space, s) == admissible_by_line_switches(&space, s));
        check(
            "admissibility = line-switch condition",
            ok,
            format!("{} states", states.len()),
        );
    }

    // Grading theorems.
    {
        let ok = graded
            .iter()
            .zip(&phi_gradings)
            .all(|(g, s)| g.p == s.i - s.j);
        check("P(g) = i(g) - j(g)", ok, format!("{} generators", graded.len()));
    }
    {
        let ok = graded.iter().zip(&phi_gradings).all(|(g, s)| g.j == s.j);
        check("J(g) = j(g)", ok, format!("{} generators", graded.len()));
    }
    {
        let gx = gradings_jp(&space, &eights, &x)?;
        let ok = gx.j == data.rot + data.writhe && gx.p == -data.rot - data.writhe;
        check(
            "J(x) = rot + w, P(x) = -rot - w",
            ok,
            format!("J(x) = {}, P(x) = {}", gx.j, gx.p),
        );
    }
    {
        let half_w = data.n_plus as i64 - data.n_minus as i64;
        let ok = aux
            .iter()
            .zip(&phi_gradings)
            .all(|(a, s)| 2 * s.i == a.j2 + a.j3 + half_w);
        check("2i = j2 + j3 + (n+ - n-)", ok, String::new());
        let ok = aux
            .iter()
            .zip(&phi_gradings)
            .all(|(a, s)| 4 * s.j == a.j1 + 4 * a.j2 + 2 * a.j3 + 6 * half_w);
        check("4j = j1 + 4 j2 + 2 j3 + 6(n+ - n-)", ok, String::new());
        let ok = aux
            .iter()
            .zip(&phi_gradings)
            .all(|(a, s)| 4 * s.rot == a.j1 + 2 * a.j2);
        check("4 rot(phi(g)) = j1 + 2 j2", ok, String::new());
    }
    {
        let constant = |values: Vec<i64>| values.windows(2).all(|w| w[0] == w[1]);
        check(
            "2P - Q_loc constant",
            constant(
                graded
                    .iter()
                    .zip(&aux)
                    .map(|(g, a)| 2 * g.p - a.q_loc)
                    .collect(),
            ),
            String::new(),
        );
        check(
            "4Q - 2Q_loc - Q_far constant",
            constant(
                graded
                    .iter()
                    .zip(&aux)
                    .map(|(g, a)| 4 * g.q - 2 * a.q_loc - a.q_far)
                    .collect(),
            ),
            String::new(),
        );
        check(
            "4T - j3 + j1/2 - Q_far constant",
            constant(
                graded
                    .iter()
                    .zip(&aux)
                    .map(|(g, a)| 8 * g.t - 2 * a.j3 + a.j1 - 2 * a.q_far)
                    .collect(),
            ),
            String::new(),
        );
    }
    {
        let ok = gens.iter().zip(&graded).all(|(g, gg)| {
            grading_q_with(&space, &eights, g, &x, ArcDirection::Reversed)
                .map(|q| q == gg.q)
                .unwrap_or(false)
        });
        check("Q independent of figure-eight traversal", ok, String::new());
    }

    // Complex structure.
    let complex = build_complex(&space);
    check(
        "delta^2 = 0",
        complex.delta_squared_is_zero(),
        format!("{} states", complex.rank()),
    );
    check(
        "differential bidegree (1, 0)",
        complex.respects_bigrading(),
        String::new(),
    );
    let split = match filtration_split(&space, &complex) {
        Ok(split) => {
            check("Delta R <= 0, R-preserving part inadmissible", true, String::new());
            Some(split)
        }
        Err(e) => {
            check(
                "Delta R <= 0, R-preserving part inadmissible",
                false,
                e.to_string(),
            );
            None
        }
    };
    let state_sum = jones_state_sum_in(&space);
    if let Some(split) = &split {
        match hypercube_decompose(&complex, split) {
            Ok(comps) => {
                check(
                    "inadmissible components are hypercubes",
                    true,
                    format!("{} components", comps.len()),
                );
                // Each component is acyclic over Z.
                let b_edges: BTreeMap<(usize, usize), BigRational> = split
                    .b
                    .iter()
                    .map(|&(s, d, ref v)| ((s, d), v.clone()))
                    .collect();
                let mut acyclic = true;
                for comp in &comps {
                    // The block complex (component, R-preserving part)
                    // must have zero homology over Z.
                    let sub = sub_complex(&complex, &comp.members, &b_edges);
                    if !sub.homology().map(|h| h.groups.is_empty()).unwrap_or(false) {
                        acyclic = false;
                    }
                }
                check("hypercube components acyclic over Z", acyclic, String::new());
            }
            Err(e) => {
                check("inadmissible components are hypercubes", false, e.to_string());
            }
        }
    }

    // Reduction and homology.
    let full_z = complex.homology()?;
    let mut complex_q = complex.clone();
    complex_q.ring = Ring::Q;
    let full_q = complex_q.homology()?;
    match reduce_in(
        &space,
        ReduceOptions {
            ring: Ring::Z,
            mode: HomotopyMode::SingleSplit,
            waist: opts.waist,
            verify_steps: true,
        },
    ) {
        Ok(red) => {
            check(
                "elimination identities hold at every step",
                red.certificates.iter().all(|c| c.all_hold()),
                format!("{} steps", red.certificates.len()),
            );
            check(
                "reduced basis = generators",
                red.complex.rank() == gens.len(),
                format!("{} vs {}", red.complex.rank(), gens.len()),
            );
            let ok = red.complex.entries().all(|(s, dd, _)| {
                red.complex.basis[s].j == red.complex.basis[dd].j
                    && red.complex.basis[dd].i == red.complex.basis[s].i + 1
            });
            check("reduced differential respects J, raises P by 1", ok, String::new());
            match red.complex.homology() {
                Ok(h) => {
                    check(
                        "reduced homology = full homology over Z",
                        h == full_z,
                        String::new(),
                    );
                }
                Err(e) => check("reduced homology = full homology over Z", false, e.to_string()),
            }
        }
        Err(e) => {
            check("elimination identities hold at every step", false, e.to_string());
        }
    }
    match reduce_in(
        &space,
        ReduceOptions {
            ring: Ring::Q,
            mode: HomotopyMode::CanonicalAverage,
            waist: opts.waist,
            verify_steps: false,
        },
    ) {
        Ok(red) => match red.complex.homology() {
            Ok(h) => check(
                "averaged reduction matches rational homology",
                h == full_q,
                String::new(),
            ),
            Err(e) => check("averaged reduction matches rational homology", false, e.to_string()),
        },
        Err(e) => check("averaged reduction matches rational homology", false, e.to_string()),
    }

    // Jones routes.
    let jones_generators = jones_bigelow_in(&space, opts.waist)?;
    {
        let sign = component_sign(d);
        let ok = jones_generators == state_sum.scale(sign)
            && complex.euler_characteristic() == state_sum;
        check(
            "jones routes agree with component sign",
            ok,
            format!("state sum {}", state_sum),
        );
        let ok = full_q.euler_characteristic() == state_sum;
        check("Euler characteristic matches homology", ok, String::new());
    }

    // SNF / rank cross-oracle on every differential block.
    {
        let mut ok = true;
        let by_degree: BTreeSet<(i64, i64)> =
            complex.basis.iter().map(|e| (e.i, e.j)).collect();
        for &(i, j) in &by_degree {
            let m = block_of(&complex, i, j);
            let (rank, _) = rank_and_kernel(&m);
            let mi = to_integer_matrix(&m).unwrap();
            let factors = invariant_factors(&mi);
            if rank != factors.iter().filter(|f| !num_traits::Zero::is_zero(*f)).count() {
                ok = false;
            }
        }
        check("rank over Q = nonzero invariant factors", ok, String::new());
    }

    // Waist invariance.
    {
        let other = match opts.waist {
            Waist::High => Waist::Low,
            Waist::Low => Waist::High,
        };
        let eights_other = build_figure_eights(d, other);
        let gens_other = enumerate_generators(d, &eights_other);
        let mut pj_here: Vec<(i64, i64)> = graded.iter().map(|g| (g.p, g.j)).collect();
        let mut pj_there: Vec<(i64, i64)> = gens_other
            .iter()
            .map(|g| gradings_jp(&space, &eights_other, g).map(|gg| (gg.p, gg.j)))
            .collect::<Result<_>>()?;
        pj_here.sort_unstable();
        pj_there.sort_unstable();
        let ok = pj_here == pj_there
            && jones_bigelow_in(&space, other)? == jones_generators;
        check("waist change preserves (P, J) multiset", ok, String::new());
    }

    // Local differential picture census (18 oriented types in total; a
    // single diagram realizes a subset).
    {
        let census = local_type_census(&space, &complex);
        check(
            "local differential types within the known 18",
            census.len() <= 18,
            format!("{} types realized", census.len()),
        );
    }

    Ok(VerifyReport {
        diagram: d.clone(),
        checks,
        invariants: VerifyInvariants {
            jones: state_sum,
            jones_generators,
            homology: full_z,
        },
    })
}

/// Restriction of a complex to a member set, with prescribed entries.
fn sub_complex(
    complex: &ChainComplex,
    members: &[usize],
    edges: &BTreeMap<(usize, usize), BigRational>,
) -> ChainComplex {
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let basis = members
        .iter()
        .map(|&v| {
            let mut e = complex.basis[v].clone();
            e.label = Label::Anon(v);
            e
        })
        .collect();
    let entries = edges
        .iter()
        .filter(|(&(s, d), _)| pos.contains_key(&s) && pos.contains_key(&d))
        .map(|(&(s, d), v)| ((pos[&s], pos[&d]), v.clone()))
        .collect();
    ChainComplex::from_parts(Ring::Z, basis, entries).expect("block respects degrees")
}

fn block_of(complex: &ChainComplex, i: i64, j: i64) -> ExactMatrix<BigRational> {
    let src: Vec<usize> = (0..complex.rank())
        .filter(|&k| complex.basis[k].i == i && complex.basis[k].j == j)
        .collect();
    let dst: Vec<usize> = (0..complex.rank())
        .filter(|&k| complex.basis[k].i == i + 1 && complex.basis[k].j == j)
        .collect();
    let mut m = ExactMatrix::new(dst.len(), src.len());
    for (col, &s) in src.iter().enumerate() {
        for (row, &d) in dst.iter().enumerate() {
            let v = complex.entry(s, d);
            if !num_traits::Zero::is_zero(&v) {
                m.set(row, col, v);
            }
        }
    }
    m
}
