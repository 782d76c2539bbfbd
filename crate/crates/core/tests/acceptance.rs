//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Test grids everywhere: the 2x2 unknot, the 5x5 trefoil, the 4x4 Hopf
//! link, the 6x6 figure-eight, plus every valid grid of size <= 4.

use gridkh_core::complex::{build_complex, filtration_split, local_type_census, Ring};
use gridkh_core::eights::{build_figure_eights, enumerate_generators, Waist};
use gridkh_core::gradings::{auxiliary_gradings, gradings_jp};
use gridkh_core::grid::GridDiagram;
use gridkh_core::invariants::{
    component_sign, jones_bigelow_in, jones_euler_reduced, jones_state_sum_in,
};
use gridkh_core::laurent::LaurentPolynomial;
use gridkh_core::reduction::{
    flattened_hypercube, gaussian_eliminate, hypercube_decompose, reduce_in,
    verify_elimination_identities, Homotopy, HomotopyMode, ReduceOptions,
};
use gridkh_core::states::{
    enumerate_states, is_admissible, phi, psi, state_gradings, StateSpace,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::time::Instant;

fn fixtures() -> Vec<GridDiagram> {
    vec![
        GridDiagram::unknot(),
        GridDiagram::trefoil(),
        GridDiagram::hopf_link(),
        GridDiagram::figure_eight(),
    ]
}

fn all_test_grids() -> Vec<GridDiagram> {
    let mut grids = fixtures();
    for n in 2..=4 {
        grids.extend(GridDiagram::enumerate(n));
    }
    grids
}

#[test]
fn a1_bijection() {
    let start = Instant::now();
    let mut generators = 0usize;
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        let gens = enumerate_generators(&d, &eights);
        let admissible: Vec<_> = enumerate_states(&space)
            .into_iter()
            .filter(|s| is_admissible(&space, s))
            .collect();
        assert_eq!(gens.len(), admissible.len(), "|G| != |H| on {}", d.text());
        for g in &gens {
            let h = phi(&space, g);
            assert_eq!(psi(&space, &eights, &h).as_ref(), Ok(g), "psi.phi != id on {}", d.text());
        }
        for h in &admissible {
            let g = psi(&space, &eights, h).unwrap();
            assert_eq!(&phi(&space, &g), h, "phi.psi != id on {}", d.text());
        }
        generators += gens.len();
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "A1 exceeded 60 s: {:?}", elapsed);
    println!(
        "[PASS] A1 bijection: |G| = |H| and both round-trips, {} generators across {} grids ({:?})",
        generators,
        all_test_grids().len(),
        elapsed
    );
}

#[test]
fn a2_p_equals_i_minus_j() {
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        for g in enumerate_generators(&d, &eights) {
            let gg = gradings_jp(&space, &eights, &g).unwrap();
            let s = state_gradings(&space, &phi(&space, &g));
            assert_eq!(gg.p, s.i - s.j, "P != i - j on {}", d.text());
        }
    }
    println!("[PASS] A2 P(g) = i(g) - j(g) on every generator of every test grid");
}

#[test]
fn a3_j_equals_j() {
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        for g in enumerate_generators(&d, &eights) {
            let gg = gradings_jp(&space, &eights, &g).unwrap();
            let s = state_gradings(&space, &phi(&space, &g));
            assert_eq!(gg.j, s.j, "J != j on {}", d.text());
        }
    }
    println!("[PASS] A3 J(g) = j(g) on every generator of every test grid");
}

#[test]
fn a4_relative_grading_identities() {
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let eights = build_figure_eights(&d, Waist::High);
        let w = space.data.n_plus as i64 - space.data.n_minus as i64;
        let mut rel = Vec::new();
        for g in enumerate_generators(&d, &eights) {
            let gg = gradings_jp(&space, &eights, &g).unwrap();
            let a = auxiliary_gradings(&space, &g).unwrap();
            let s = state_gradings(&space, &phi(&space, &g));
            // Absolute identities.
            assert_eq!(2 * s.i, a.j2 + a.j3 + w, "combinatorial i failed on {}", d.text());
            assert_eq!(
                4 * s.j,
                a.j1 + 4 * a.j2 + 2 * a.j3 + 6 * w,
                "combinatorial j failed on {}",
                d.text()
            );
            assert_eq!(4 * s.rot, a.j1 + 2 * a.j2, "rot identity failed on {}", d.text());
            rel.push((
                2 * gg.p - a.q_loc,
                4 * gg.q - 2 * a.q_loc - a.q_far,
                8 * gg.t - 2 * a.j3 + a.j1 - 2 * a.q_far,
            ));
        }
        for window in rel.windows(2) {
            assert_eq!(window[0], window[1], "relative identity drifted on {}", d.text());
        }
    }
    println!("[PASS] A4 relative grading identities constant; combinatorial identities exact");
}

#[test]
fn a5_jones_consistency() {
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let sign = component_sign(&d);
        let state_sum = jones_state_sum_in(&space);
        let bigelow = jones_bigelow_in(&space, Waist::High).unwrap();
        assert_eq!(bigelow, state_sum.scale(sign), "bigelow route differs on {}", d.text());
        let reduced = jones_euler_reduced(&space, Waist::High).unwrap();
        assert_eq!(bigelow, reduced.scale(sign), "reduced euler differs on {}", d.text());
    }
    let circle = LaurentPolynomial::from_terms([(1, 1), (-1, 1)]);
    let u2 = gridkh_core::jones_bigelow(&GridDiagram::unknot(), Waist::High).unwrap();
    assert!(u2 == circle || u2 == circle.scale(-1), "unknot value not +-(q + 1/q)");
    println!("[PASS] A5 three Jones routes agree with the component sign; unknot is +-(q + q^-1)");
}

fn homology_pair(d: &GridDiagram, waist: Waist) -> (gridkh_core::HomologyTable, gridkh_core::HomologyTable) {
    let space = StateSpace::new(d);
    let full = build_complex(&space);
    let full_z = full.homology().unwrap();
    let red = reduce_in(
        &space,
        ReduceOptions {
            ring: Ring::Z,
            mode: HomotopyMode::SingleSplit,
            waist,
            verify_steps: false,
        },
    )
    .unwrap();
    let red_z = red.complex.homology().unwrap();
    (full_z, red_z)
}

#[test]
fn a6_homology() {
    let start = Instant::now();
    for d in fixtures() {
        let space = StateSpace::new(&d);
        let full = build_complex(&space);
        let full_z = full.homology().unwrap();
        let mut full_q = full.clone();
        full_q.ring = Ring::Q;
        let full_q = full_q.homology().unwrap();

        // Over Q with the canonical averaged homotopy.
        let red_q = reduce_in(
            &space,
            ReduceOptions {
                ring: Ring::Q,
                mode: HomotopyMode::CanonicalAverage,
                waist: Waist::High,
                verify_steps: false,
            },
        )
        .unwrap();
        assert_eq!(
            red_q.complex.homology().unwrap().free_ranks(),
            full_q.free_ranks(),
            "rational ranks differ on {}",
            d.text()
        );

        // Over Z with the deterministic single-split homotopy.
        let red_z = reduce_in(
            &space,
            ReduceOptions {
                ring: Ring::Z,
                mode: HomotopyMode::SingleSplit,
                waist: Waist::High,
                verify_steps: false,
            },
        )
        .unwrap();
        assert_eq!(
            red_z.complex.homology().unwrap(),
            full_z,
            "integral homology differs on {}",
            d.text()
        );
    }

    // The trefoil exhibits the expected pattern, and its mirror grid the
    // mirrored table.
    let trefoil = GridDiagram::trefoil();
    let (full, red) = homology_pair(&trefoil, Waist::High);
    assert_eq!(red, full);
    assert_eq!(full.total_free_rank(), 4);
    let torsion = full.torsion_summands();
    assert_eq!(torsion.len(), 1);
    assert_eq!(torsion[0].1, BigInt::from(2));
    let (mirror_full, mirror_red) = homology_pair(&trefoil.mirror(), Waist::High);
    assert_eq!(mirror_red, mirror_full);
    assert_eq!(mirror_full, full.mirrored(), "mirror grid table is not the mirrored table");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "A6 exceeded 5 min: {:?}", elapsed);
    println!(
        "[PASS] A6 reduced homology = Khovanov homology over Z and Q; trefoil: rank 4 + one Z/2, mirror mirrored ({:?})",
        elapsed
    );
}

#[test]
fn a7_waist_invariance() {
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let mut tables = Vec::new();
        for waist in [Waist::High, Waist::Low] {
            let eights = build_figure_eights(&d, waist);
            let mut pj: Vec<(i64, i64)> = enumerate_generators(&d, &eights)
                .iter()
                .map(|g| {
                    let gg = gradings_jp(&space, &eights, g).unwrap();
                    (gg.p, gg.j)
                })
                .collect();
            pj.sort_unstable();
            tables.push(pj);
        }
        assert_eq!(tables[0], tables[1], "waist change moved (P, J) on {}", d.text());
        assert_eq!(
            jones_bigelow_in(&space, Waist::High).unwrap(),
            jones_bigelow_in(&space, Waist::Low).unwrap(),
            "waist change moved the Jones value on {}",
            d.text()
        );
    }
    // Full outputs of A5/A6 under the Low waist on the fixtures.
    for d in fixtures() {
        let space = StateSpace::new(&d);
        let sign = component_sign(&d);
        let state_sum = jones_state_sum_in(&space);
        assert_eq!(
            jones_bigelow_in(&space, Waist::Low).unwrap(),
            state_sum.scale(sign)
        );
        let (full_high, red_high) = homology_pair(&d, Waist::High);
        let (full_low, red_low) = homology_pair(&d, Waist::Low);
        assert_eq!(full_high, full_low);
        assert_eq!(red_high, red_low);
    }
    println!("[PASS] A7 waist position is invisible: (P, J) multiset, Jones routes and homology unchanged");
}

#[test]
fn a8_elimination_lemma() {
    let start = Instant::now();
    // Deterministic xorshift for the randomized cubes.
    let mut state = 0x243F6A8885A308D3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut cubes = 0;
    while cubes < 100 {
        let dim = 1 + (next() % 4) as usize;
        let signs: Vec<i64> = (0..1usize << dim)
            .map(|_| if next() % 2 == 0 { 1 } else { -1 })
            .collect();
        let c = flattened_hypercube(dim, &signs);
        assert!(c.delta_squared_is_zero());
        // Whole-cube elimination with the single-split homotopy along
        // direction 0 (and the averaged one over Q).
        for mode in [HomotopyMode::SingleSplit, HomotopyMode::CanonicalAverage] {
            let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
            for pos in 0..dim {
                if mode == HomotopyMode::SingleSplit && pos != 0 {
                    continue;
                }
                for v in 0..c.rank() {
                    if v >> pos & 1 == 1 {
                        let u = v & !(1usize << pos);
                        let beta = c.entry(u, v);
                        let mut val = -BigRational::one() / beta;
                        if mode == HomotopyMode::CanonicalAverage {
                            val /= BigRational::from_integer(BigInt::from(dim as i64));
                        }
                        *entries.entry((v, u)).or_insert_with(BigRational::zero) += val;
                    }
                }
            }
            entries.retain(|_, v| !v.is_zero());
            let h = Homotopy { mode, entries };
            let block: Vec<usize> = (0..c.rank()).collect();
            let cert = verify_elimination_identities(&c, &block, &h).unwrap();
            assert!(cert.all_hold(), "identities failed on a dim-{} cube", dim);
            let out = gaussian_eliminate(&c, &block, &h).unwrap();
            assert_eq!(out.rank(), 0);
            // Input and output homology agree (both vanish).
            assert!(c.homology().unwrap().groups.is_empty());
            assert!(out.homology().unwrap().groups.is_empty());
        }
        // A nontrivial split: eliminate the top-bit half-cube (dim >= 2).
        if dim >= 2 {
            let top = dim - 1;
            let block: Vec<usize> = (0..c.rank()).filter(|v| v >> top & 1 == 1).collect();
            let mut entries = BTreeMap::new();
            for &v in &block {
                if v & 1 == 1 {
                    let u = v & !1usize;
                    entries.insert((v, u), -BigRational::one() / c.entry(u, v));
                }
            }
            let h = Homotopy {
                mode: HomotopyMode::SingleSplit,
                entries,
            };
            let cert = verify_elimination_identities(&c, &block, &h).unwrap();
            assert!(cert.all_hold());
            let out = gaussian_eliminate(&c, &block, &h).unwrap();
            assert_eq!(
                out.homology().unwrap(),
                c.homology().unwrap(),
                "homology changed under half-cube elimination"
            );
        }
        cubes += 1;
    }

    // Every filtration split arising in the A6 reductions, with the
    // per-step identity certificates switched on.
    for d in fixtures() {
        let space = StateSpace::new(&d);
        for (ring, mode) in [
            (Ring::Z, HomotopyMode::SingleSplit),
            (Ring::Q, HomotopyMode::CanonicalAverage),
        ] {
            let red = reduce_in(
                &space,
                ReduceOptions {
                    ring,
                    mode,
                    waist: Waist::High,
                    verify_steps: true,
                },
            )
            .unwrap();
            assert!(
                !red.certificates.is_empty() || space.crossing_count() == 0,
                "no elimination steps recorded on {}",
                d.text()
            );
            assert!(
                red.certificates.iter().all(|c| c.all_hold()),
                "a step certificate failed on {}",
                d.text()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "A8 exceeded 60 s: {:?}", elapsed);
    println!(
        "[PASS] A8 elimination lemma identities on 100 random cubes and all fixture reductions ({:?})",
        elapsed
    );
}

#[test]
fn a9_filtration_structure() {
    let mut census = std::collections::BTreeSet::new();
    for d in all_test_grids() {
        let space = StateSpace::new(&d);
        let complex = build_complex(&space);
        // filtration_split errors if any entry raises R or an R-preserving
        // entry touches an admissible state.
        let split = filtration_split(&space, &complex).unwrap();
        let comps = hypercube_decompose(&complex, &split).unwrap();
        // Acyclicity of each component over Z.
        let edges: BTreeMap<(usize, usize), BigRational> = split
            .b
            .iter()
            .map(|&(s, dd, ref v)| ((s, dd), v.clone()))
            .collect();
        for comp in &comps {
            let members: std::collections::BTreeSet<usize> =
                comp.members.iter().copied().collect();
            let pos: BTreeMap<usize, usize> = comp
                .members
                .iter()
                .enumerate()
                .map(|(p, &v)| (v, p))
                .collect();
            let basis: Vec<_> = comp
                .members
                .iter()
                .map(|&v| gridkh_core::BasisElem {
                    label: gridkh_core::Label::Anon(v),
                    i: complex.basis[v].i,
                    j: complex.basis[v].j,
                    r: complex.basis[v].r,
                })
                .collect();
            let entries: BTreeMap<(usize, usize), BigRational> = edges
                .iter()
                .filter(|(&(s, dd), _)| members.contains(&s) && members.contains(&dd))
                .map(|(&(s, dd), v)| ((pos[&s], pos[&dd]), v.clone()))
                .collect();
            let sub = gridkh_core::ChainComplex::from_parts(Ring::Z, basis, entries).unwrap();
            assert!(
                sub.homology().unwrap().groups.is_empty(),
                "cube component not acyclic on {}",
                d.text()
            );
        }
        census.extend(local_type_census(&space, &complex));
    }
    println!(
        "[PASS] A9 Delta R <= 0 everywhere, R-preserving part inadmissible, components are acyclic 2^m cubes ({} local differential types realized)",
        census.len()
    );
}
