//! The bigraded chain complex on enhanced states, its homology over Z
//! and Q, the graded Euler characteristic, and the filtration split
//! induced by the winding grading R.

use crate::eights::Generator;
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{invariant_factors, rank_and_kernel, to_integer_matrix, ExactMatrix};
use crate::states::{is_admissible, state_gradings, StateSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ring {
    Z,
    Q,
}

/// What a basis element stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Label {
    /// An enhanced state, by resolution mask and orientation mask.
    State { mask: u64, orient: u64 },
    /// A generator (used by the reduced complex).
    Generator(Generator),
    /// Synthetic basis element.
    Anon(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElem {
    pub label: Label,
    pub i: i64,
    pub j: i64,
    /// Filtration grading, when known.
    pub r: Option<i64>,
}

/// A free bigraded complex with an exact sparse differential of degree
/// (+1, 0). Entries are stored as rationals; `ring` records whether the
/// complex is meant over Z (all entries integral) or Q.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub ring: Ring,
    pub basis: Vec<BasisElem>,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl ChainComplex {
    pub fn from_parts(
        ring: Ring,
        basis: Vec<BasisElem>,
        entries: BTreeMap<(usize, usize), BigRational>,
    ) -> Result<Self> {
        for (&(src, dst), v) in &entries {
            if v.is_zero() {
                continue;
            }
            if src >= basis.len() || dst >= basis.len() || basis[dst].i != basis[src].i + 1 {
                return Err(Error::NotAComplex);
            }
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(ChainComplex { ring, basis, entries })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, src: usize, dst: usize) -> BigRational {
        self.entries
            .get(&(src, dst))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(s, d), v)| (s, d, v))
    }

    /// Does every nonzero entry preserve j and raise i by exactly one?
    pub fn respects_bigrading(&self) -> bool {
        self.entries().all(|(s, d, _)| {
            self.basis[d].i == self.basis[s].i + 1 && self.basis[d].j == self.basis[s].j
        })
    }

    pub fn delta_squared_is_zero(&self) -> bool {
        let mut outgoing: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (s, d, v) in self.entries() {
            outgoing.entry(s).or_default().push((d, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (s, d, v) in self.entries() {
            if let Some(next) = outgoing.get(&d) {
                for &(e, w) in next {
                    let slot = acc.entry((s, e)).or_insert_with(BigRational::zero);
                    *slot += v * w;
                }
            }
        }
        acc.values().all(|v| v.is_zero())
    }

    /// Sum of (-1)^i q^j over the basis.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for e in &self.basis {
            p.add_term(e.j, if e.i.rem_euclid(2) == 0 { 1 } else { -1 });
        }
        p
    }

    /// Indices grouped by (i, j), in basis order.
    fn bigraded_blocks(&self) -> BTreeMap<(i64, i64), Vec<usize>> {
        let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (k, e) in self.basis.iter().enumerate() {
            blocks.entry((e.i, e.j)).or_default().push(k);
        }
        blocks
    }

    /// The differential leaving bidegree (i, j), as a matrix whose columns
    /// index the (i, j) block and rows the (i+1, j) block.
    fn block_matrix(
        &self,
        blocks: &BTreeMap<(i64, i64), Vec<usize>>,
        i: i64,
        j: i64,
    ) -> ExactMatrix<BigRational> {
        let empty = Vec::new();
        let src = blocks.get(&(i, j)).unwrap_or(&empty);
        let dst = blocks.get(&(i + 1, j)).unwrap_or(&empty);
        let dst_pos: BTreeMap<usize, usize> =
            dst.iter().enumerate().map(|(p, &k)| (k, p)).collect();
        let mut m = ExactMatrix::new(dst.len(), src.len());
        for (col, &s) in src.iter().enumerate() {
            for (d, v) in self
                .entries
                .range((s, 0)..(s + 1, 0))
                .map(|(&(_, d), v)| (d, v))
            {
                if let Some(&row) = dst_pos.get(&d) {
                    m.set(row, col, v.clone());
                }
            }
        }
        m
    }

    /// Homology per (i, j): free ranks, and torsion when the ring is Z.
    pub fn homology(&self) -> Result<HomologyTable> {
        if !self.delta_squared_is_zero() {
            return Err(Error::NotAComplex);
        }
        let blocks = self.bigraded_blocks();
        let mut ranks: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        let mut torsions: BTreeMap<(i64, i64), Vec<BigInt>> = BTreeMap::new();
        for &(i, j) in blocks.keys() {
            let m = self.block_matrix(&blocks, i, j);
            match self.ring {
                Ring::Q => {
                    let (rank, _) = rank_and_kernel(&m);
                    ranks.insert((i, j), rank);
                }
                Ring::Z => {
                    let mi = to_integer_matrix(&m).ok_or(Error::RingMismatch)?;
                    let factors = invariant_factors(&mi);
                    ranks.insert((i, j), factors.iter().filter(|f| !f.is_zero()).count());
                    let torsion: Vec<BigInt> = factors
                        .iter()
                        .filter(|f| f.abs() > BigInt::one())
                        .map(|f| f.abs())
                        .collect();
                    if !torsion.is_empty() {
                        // Torsion of H^{i+1, j} comes from the image of d^{i, j}.
                        torsions.insert((i + 1, j), torsion);
                    }
                }
            }
        }
        let mut groups = BTreeMap::new();
        for (&(i, j), block) in &blocks {
            let dim = block.len();
            let out_rank = ranks.get(&(i, j)).copied().unwrap_or(0);
            let in_rank = ranks.get(&(i - 1, j)).copied().unwrap_or(0);
            let free_rank = dim - out_rank - in_rank;
            let torsion = torsions.remove(&(i, j)).unwrap_or_default();
            if free_rank > 0 || !torsion.is_empty() {
                groups.insert((i, j), HomologyGroup { free_rank, torsion });
            }
        }
        // Torsion can land in a bidegree with no surviving free part.
        for ((i, j), torsion) in torsions {
            groups.insert((i, j), HomologyGroup { free_rank: 0, torsion });
        }
        Ok(HomologyTable { groups })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl Serialize for HomologyTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            i: i64,
            j: i64,
            free_rank: usize,
            torsion: &'a [BigInt],
        }
        let rows: Vec<Row> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| Row {
                i,
                j,
                free_rank: g.free_rank,
                torsion: &g.torsion,
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl HomologyTable {
    pub fn total_free_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    pub fn torsion_summands(&self) -> Vec<((i64, i64), BigInt)> {
        let mut out = Vec::new();
        for (&k, g) in &self.groups {
            for t in &g.torsion {
                out.push((k, t.clone()));
            }
        }
        out
    }

    pub fn free_ranks(&self) -> BTreeMap<(i64, i64), usize> {
        self.groups
            .iter()
            .filter(|(_, g)| g.free_rank > 0)
            .map(|(&k, g)| (k, g.free_rank))
            .collect()
    }

    /// Graded Euler characteristic of the homology over Q.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (&(i, j), g) in &self.groups {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, sign * g.free_rank as i64);
        }
        p
    }

    /// The table of the mirror link: free parts at (-i, -j), torsion of
    /// (i, j) reappearing at (1 - i, -j).
    pub fn mirrored(&self) -> HomologyTable {
        let mut groups: BTreeMap<(i64, i64), HomologyGroup> = BTreeMap::new();
        for (&(i, j), g) in &self.groups {
            if g.free_rank > 0 {
                groups
                    .entry((-i, -j))
                    .or_insert_with(|| HomologyGroup { free_rank: 0, torsion: vec![] })
                    .free_rank = g.free_rank;
            }
            for t in &g.torsion {
                groups
                    .entry((1 - i, -j))
                    .or_insert_with(|| HomologyGroup { free_rank: 0, torsion: vec![] })
                    .torsion
                    .push(t.clone());
            }
        }
        HomologyTable { groups }
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return writeln!(f, "(trivial)");
        }
        for (&(i, j), g) in &self.groups {
            let mut parts = Vec::new();
            if g.free_rank == 1 {
                parts.push("Z".to_string());
            } else if g.free_rank > 1 {
                parts.push(format!("Z^{}", g.free_rank));
            }
            for t in &g.torsion {
                parts.push(format!("Z/{}", t));
            }
            writeln!(f, "({}, {}): {}", i, j, parts.join(" + "))?;
        }
        Ok(())
    }
}

/// Build the full complex on enhanced states, with the canonical
/// lexicographic crossing order for signs.
pub fn build_complex(space: &StateSpace) -> ChainComplex {
    let order: Vec<usize> = (0..space.crossing_count()).collect();
    build_complex_with_order(space, &order)
}

/// Same complex with edge signs computed against a permuted crossing
/// order; homology does not depend on the choice.
pub fn build_complex_with_order(space: &StateSpace, order: &[usize]) -> ChainComplex {
    let k = space.crossing_count();
    assert_eq!(order.len(), k);
    let mut position = vec![0usize; k];
    for (pos, &cr) in order.iter().enumerate() {
        position[cr] = pos;
    }

    // Global indexing: states of mask m start at offsets[m].
    let masks = space.traces.len();
    let mut offsets = Vec::with_capacity(masks);
    let mut total = 0usize;
    for t in &space.traces {
        offsets.push(total);
        total += 1usize << t.circles.len();
    }

    let mut basis = Vec::with_capacity(total);
    for mask in 0..masks as u64 {
        let circles = space.traces[mask as usize].circles.len();
        for orient in 0..(1u64 << circles) {
            let state = space.state(mask, orient);
            let g = state_gradings(space, &state);
            basis.push(BasisElem {
                label: Label::State { mask, orient },
                i: g.i,
                j: g.j,
                r: Some(g.r),
            });
        }
    }

    let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for mask in 0..masks as u64 {
        let src_trace = &space.traces[mask as usize];
        let src_circles = src_trace.circles.len();
        for gamma in 0..k {
            if mask >> gamma & 1 == 1 {
                continue;
            }
            let tgt_mask = mask | (1u64 << gamma);
            let tgt_trace = &space.traces[tgt_mask as usize];

            // Sign: number of earlier crossings (in `order`) already set.
            let earlier = (0..k)
                .filter(|&c| position[c] < position[gamma] && mask >> c & 1 == 1)
                .count();
            let sign = if earlier % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };

            // Circles through the crossing, on both sides.
            let cs = &src_trace.crossing_strands[gamma];
            let ct = &tgt_trace.crossing_strands[gamma];
            let src_a = src_trace.piece_circle[cs.s_piece];
            let src_b = src_trace.piece_circle[cs.n_piece];
            let tgt_a = tgt_trace.piece_circle[ct.s_piece];
            let tgt_b = tgt_trace.piece_circle[ct.n_piece];

            // Unchanged circles match up by canonical key.
            let tgt_key: BTreeMap<_, usize> = tgt_trace
                .circles
                .iter()
                .enumerate()
                .map(|(idx, c)| (c.key, idx))
                .collect();
            let mut carried: Vec<Option<usize>> = vec![None; src_circles];
            for (idx, c) in src_trace.circles.iter().enumerate() {
                if idx != src_a && idx != src_b {
                    carried[idx] = Some(tgt_key[&c.key]);
                }
            }

            for orient in 0..(1u64 << src_circles) {
                let src_index = offsets[mask as usize] + orient as usize;
                let sign_of = |circle: usize| -> i64 {
                    if orient >> circle & 1 == 0 {
                        1
                    } else {
                        -1
                    }
                };
                let mut base_tgt: u64 = 0;
                for (idx, tgt) in carried.iter().enumerate() {
                    if let Some(t) = tgt {
                        if sign_of(idx) == -1 {
                            base_tgt |= 1u64 << t;
                        }
                    }
                }
                let mut push = |tgt_orient: u64| {
                    let tgt_index = offsets[tgt_mask as usize] + tgt_orient as usize;
                    let slot = entries
                        .entry((src_index, tgt_index))
                        .or_insert_with(BigRational::zero);
                    *slot += &sign;
                };
                if src_a != src_b {
                    // Merge. Label algebra: ccw is the unit 1, cw is x.
                    debug_assert_eq!(tgt_a, tgt_b);
                    let (ya, yb) = (sign_of(src_a), sign_of(src_b));
                    let product = match (ya, yb) {
                        (1, 1) => Some(1),
                        (1, -1) | (-1, 1) => Some(-1),
                        _ => None, // x . x = 0
                    };
                    if let Some(y) = product {
                        let mut tgt_orient = base_tgt;
                        if y == -1 {
                            tgt_orient |= 1u64 << tgt_a;
                        }
                        push(tgt_orient);
                    }
                } else {
                    // Split.
                    debug_assert_ne!(tgt_a, tgt_b);
                    let y = sign_of(src_a);
                    let assignments: &[(i64, i64)] = if y == 1 {
                        &[(1, -1), (-1, 1)]
                    } else {
                        &[(-1, -1)]
                    };
                    for &(ya, yb) in assignments {
                        let mut tgt_orient = base_tgt;
                        if ya == -1 {
                            tgt_orient |= 1u64 << tgt_a;
                        }
                        if yb == -1 {
                            tgt_orient |= 1u64 << tgt_b;
                        }
                        push(tgt_orient);
                    }
                }
            }
        }
    }

    ChainComplex::from_parts(Ring::Z, basis, entries).expect("construction respects degrees")
}

/// The R-based splitting of the differential.
///
/// `b` is exactly the R-preserving part, which must join inadmissible
/// states only; every other block strictly decreases R. R-decreasing
/// entries inside the inadmissible block land in `b_lower`.
#[derive(Debug, Clone)]
pub struct FiltrationSplit {
    pub admissible: Vec<usize>,
    pub inadmissible: Vec<usize>,
    pub a: Vec<(usize, usize, BigRational)>,
    pub b: Vec<(usize, usize, BigRational)>,
    pub b_lower: Vec<(usize, usize, BigRational)>,
    pub c: Vec<(usize, usize, BigRational)>,
    pub d: Vec<(usize, usize, BigRational)>,
}

pub fn filtration_split(space: &StateSpace, complex: &ChainComplex) -> Result<FiltrationSplit> {
    let mut admissible = Vec::new();
    let mut inadmissible = Vec::new();
    let mut adm = vec![false; complex.rank()];
    for (idx, e) in complex.basis.iter().enumerate() {
        let Label::State { mask, orient } = e.label else {
            return Err(Error::FiltrationViolation(
                "filtration split needs state labels".into(),
            ));
        };
        let state = space.state(mask, orient);
        if is_admissible(space, &state) {
            admissible.push(idx);
            adm[idx] = true;
        } else {
            inadmissible.push(idx);
        }
    }

    let mut split = FiltrationSplit {
        admissible,
        inadmissible,
        a: Vec::new(),
        b: Vec::new(),
        b_lower: Vec::new(),
        c: Vec::new(),
        d: Vec::new(),
    };
    for (s, d, v) in complex.entries() {
        let (rs, rd) = (
            complex.basis[s].r.expect("states carry R"),
            complex.basis[d].r.expect("states carry R"),
        );
        if rd > rs {
            return Err(Error::FiltrationViolation(format!(
                "entry {} -> {} raises R from {} to {}",
                s, d, rs, rd
            )));
        }
        let triple = (s, d, v.clone());
        match (adm[s], adm[d]) {
            (true, true) => split.a.push(triple),
            (true, false) => split.c.push(triple),
            (false, true) => split.d.push(triple),
            (false, false) => {
                if rd == rs {
                    split.b.push(triple);
                } else {
                    split.b_lower.push(triple);
                }
            }
        }
        if rd == rs && (adm[s] || adm[d]) {
            return Err(Error::FiltrationViolation(format!(
                "R-preserving entry {} -> {} touches an admissible state",
                s, d
            )));
        }
    }
    Ok(split)
}

/// Census of the oriented local pictures realized by nonzero differentials.
///
/// A type records the four strand-end orientations at the crossing before
/// and after the smoothing change, plus whether circles merge or split.
pub fn local_type_census(
    space: &StateSpace,
    complex: &ChainComplex,
) -> BTreeSet<(bool, bool, bool, bool, bool)> {
    let mut census = BTreeSet::new();
    for (s, d, _) in complex.entries() {
        let Label::State { mask: sm, orient: so } = complex.basis[s].label else {
            continue;
        };
        let Label::State { mask: dm, orient: dor } = complex.basis[d].label else {
            continue;
        };
        let gamma = (sm ^ dm).trailing_zeros() as usize;
        let src_state = space.state(sm, so);
        let dst_state = space.state(dm, dor);
        let src_trace = &space.traces[sm as usize];
        let dst_trace = &space.traces[dm as usize];
        let cs = &src_trace.crossing_strands[gamma];
        let ct = &dst_trace.crossing_strands[gamma];
        let into = |trace: &crate::trace::Traced,
                    state: &crate::states::EnhancedState,
                    piece: usize,
                    south: bool| {
            let circle = trace.piece_circle[piece];
            let flipped = state.orientations[circle] != trace.circles[circle].traced_sign;
            let fwd = trace.piece_forward[piece] ^ flipped;
            if south {
                fwd
            } else {
                !fwd
            }
        };
        let merge =
            src_trace.piece_circle[cs.s_piece] != src_trace.piece_circle[cs.n_piece];
        census.insert((
            into(src_trace, &src_state, cs.s_piece, true),
            into(src_trace, &src_state, cs.n_piece, false),
            into(dst_trace, &dst_state, ct.s_piece, true),
            into(dst_trace, &dst_state, ct.n_piece, false),
            merge,
        ));
    }
    census
}

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ChainComplex", 3)?;
        s.serialize_field("ring", &self.ring)?;
        s.serialize_field("basis", &self.basis)?;
        let triples: Vec<(usize, usize, String)> = self
            .entries()
            .map(|(a, b, v)| (a, b, v.to_string()))
            .collect();
        s.serialize_field("entries", &triples)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDiagram;

    fn complex_over(ring: Ring, d: &GridDiagram) -> (StateSpace, ChainComplex) {
        let space = StateSpace::new(d);
        let mut c = build_complex(&space);
        c.ring = ring;
        (space, c)
    }

    #[test]
    fn unknot_complex_is_two_generators_no_differential() {
        let (_, c) = complex_over(Ring::Z, &GridDiagram::unknot());
        assert_eq!(c.rank(), 2);
        assert_eq!(c.entries().count(), 0);
        let h = c.homology().unwrap();
        assert_eq!(h.free_ranks().len(), 2);
        assert_eq!(h.groups[&(0, 1)].free_rank, 1);
        assert_eq!(h.groups[&(0, -1)].free_rank, 1);
        assert_eq!(c.euler_characteristic(), LaurentPolynomial::from_terms([(1, 1), (-1, 1)]));
    }

    #[test]
    fn differentials_have_bidegree_one_zero() {
        for d in [
            GridDiagram::kinked_unknot(),
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
        ] {
            let (_, c) = complex_over(Ring::Z, &d);
            assert!(c.respects_bigrading());
            assert!(c.delta_squared_is_zero());
        }
    }

    #[test]
    fn kinked_unknot_complex_matches_hand_computation() {
        let (space, c) = complex_over(Ring::Z, &GridDiagram::kinked_unknot());
        assert_eq!(c.rank(), 6);
        // Unknot homology: Z at (0, 1) and (0, -1).
        let h = c.homology().unwrap();
        assert_eq!(h.groups.len(), 2);
        assert_eq!(h.groups[&(0, 1)].free_rank, 1);
        assert_eq!(h.groups[&(0, -1)].free_rank, 1);
        assert!(h.torsion_summands().is_empty());
        let split = filtration_split(&space, &c).unwrap();
        assert_eq!(split.admissible.len(), 4);
        assert_eq!(split.inadmissible.len(), 2);
        assert_eq!(split.b.len(), 1);
        assert!(split.b_lower.is_empty());
    }

    #[test]
    fn trefoil_homology_shape() {
        let (space, c) = complex_over(Ring::Z, &GridDiagram::trefoil());
        let h = c.homology().unwrap();
        assert_eq!(h.total_free_rank(), 4);
        let torsion = h.torsion_summands();
        assert_eq!(torsion.len(), 1);
        assert_eq!(torsion[0].1, BigInt::from(2));
        // Four distinct bidegrees carry the free part.
        assert_eq!(h.free_ranks().len(), 4);
        assert_eq!(h.free_ranks().values().sum::<usize>(), 4);
        // Euler characteristic has four +-1 monomials.
        let euler = c.euler_characteristic();
        assert_eq!(euler.term_count(), 4);
        assert!(euler.terms().all(|(_, c)| c.abs() == 1));
        let _ = space;
    }

    #[test]
    fn identity_complex_is_acyclic() {
        let basis = vec![
            BasisElem { label: Label::Anon(0), i: 0, j: 0, r: None },
            BasisElem { label: Label::Anon(1), i: 1, j: 0, r: None },
        ];
        let mut entries = BTreeMap::new();
        entries.insert((0, 1), BigRational::one());
        let c = ChainComplex::from_parts(Ring::Z, basis, entries).unwrap();
        assert!(c.homology().unwrap().groups.is_empty());
    }

    #[test]
    fn filtration_structure_on_trefoil() {
        let (space, c) = complex_over(Ring::Z, &GridDiagram::trefoil());
        let split = filtration_split(&space, &c).unwrap();
        // Every R-preserving entry joins two inadmissible states (checked
        // inside), and admissible/inadmissible partition the basis.
        assert_eq!(
            split.admissible.len() + split.inadmissible.len(),
            c.rank()
        );
        assert!(!split.b.is_empty());
    }

    #[test]
    fn homology_is_independent_of_crossing_order() {
        let d = GridDiagram::trefoil();
        let space = StateSpace::new(&d);
        let base = build_complex(&space).homology().unwrap();
        for order in [[1usize, 2, 0], [2, 1, 0], [0, 2, 1]] {
            let c = build_complex_with_order(&space, &order);
            assert!(c.delta_squared_is_zero());
            assert_eq!(c.homology().unwrap(), base);
        }
    }

    #[test]
    fn local_type_census_is_frozen() {
        // Coarse oriented local pictures (strand-end arrows at the
        // crossing plus merge/split). Eight classes occur; the two
        // vertical-sink-to-vertical-sink ones are exactly the
        // R-preserving types.
        let mut census = BTreeSet::new();
        let mut grids = vec![
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
            GridDiagram::figure_eight(),
        ];
        grids.extend(GridDiagram::enumerate(3));
        grids.extend(GridDiagram::enumerate(4));
        for d in grids {
            let space = StateSpace::new(&d);
            let c = build_complex(&space);
            census.extend(local_type_census(&space, &c));
        }
        let expected: BTreeSet<(bool, bool, bool, bool, bool)> = [
            (false, false, false, true, false),
            (false, false, true, false, false),
            (false, false, true, true, true),
            (false, true, false, false, true),
            (true, false, false, false, true),
            (true, true, false, false, false),
            (true, true, true, true, false),
            (true, true, true, true, true),
        ]
        .into_iter()
        .collect();
        assert_eq!(census, expected);
    }

    #[test]
    fn r_preserving_entries_are_sink_to_sink() {
        for d in [GridDiagram::trefoil(), GridDiagram::figure_eight()] {
            let space = StateSpace::new(&d);
            let c = build_complex(&space);
            for (s, t, _) in c.entries() {
                let (rs, rt) = (c.basis[s].r.unwrap(), c.basis[t].r.unwrap());
                assert!(rt <= rs);
            }
            let split = filtration_split(&space, &c).unwrap();
            assert!(!split.b.is_empty());
        }
    }

    #[test]
    fn mirrored_table_relation() {
        let t = HomologyTable {
            groups: BTreeMap::from([
                ((0, 1), HomologyGroup { free_rank: 1, torsion: vec![] }),
                ((3, 9), HomologyGroup { free_rank: 1, torsion: vec![] }),
                ((3, 7), HomologyGroup { free_rank: 0, torsion: vec![BigInt::from(2)] }),
            ]),
        };
        let m = t.mirrored();
        assert_eq!(m.groups[&(0, -1)].free_rank, 1);
        assert_eq!(m.groups[&(-3, -9)].free_rank, 1);
        assert_eq!(m.groups[&(-2, -7)].torsion, vec![BigInt::from(2)]);
    }
}
