//! Elimination of the inadmissible states: the R-preserving block splits
//! into flattened hypercube components, each carrying an explicit
//! contracting homotopy, and generalized Gaussian elimination cancels the
//! components one by one. What remains is a complex on the admissible
//! states, relabelled by their generators.

use crate::complex::{
    filtration_split, BasisElem, ChainComplex, FiltrationSplit, Label, Ring,
};
use crate::eights::{build_figure_eights, Waist};
use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::linalg::ExactMatrix;
use crate::states::{psi, StateSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HomotopyMode {
    /// Invert the differential along the lowest coordinate direction of
    /// each component. Works over Z; depends on that choice.
    #[default]
    SingleSplit,
    /// Average the single-direction homotopies of each component.
    /// Canonical, but needs rational coefficients.
    CanonicalAverage,
}

/// A degree -1 map on the eliminated block with h b + b h = -Id.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub mode: HomotopyMode,
    /// (from, to) -> coefficient, indices into the ambient basis.
    pub entries: BTreeMap<(usize, usize), BigRational>,
}

/// One connected component of the R-preserving block, verified to be the
/// 1-skeleton of a cube {0,1}^m with +-1 edge coefficients.
#[derive(Debug, Clone)]
pub struct CubeComponent {
    /// Member indices into the ambient basis.
    pub members: Vec<usize>,
    /// Crossing indices acting as coordinate directions, ascending.
    pub directions: Vec<usize>,
    /// Vertex of minimal homological degree (canonical tiebreak).
    pub base: usize,
    /// Coordinate bitmask of each member over `directions`.
    pub coords: Vec<u64>,
    /// Common R value of the component.
    pub r_level: i64,
}

/// Group the R-preserving block into components and certify each one as a
/// flattened hypercube.
pub fn hypercube_decompose(
    complex: &ChainComplex,
    split: &FiltrationSplit,
) -> Result<Vec<CubeComponent>> {
    let mut adjacency: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
    for idx in &split.inadmissible {
        adjacency.entry(*idx).or_default();
    }
    for (s, d, v) in &split.b {
        adjacency.get_mut(s).unwrap().push((*d, v));
        adjacency.get_mut(d).unwrap().push((*s, v));
    }

    let resolution_mask = |idx: usize| -> Result<u64> {
        match complex.basis[idx].label {
            Label::State { mask, .. } => Ok(mask),
            _ => Err(Error::NotAHypercube("non-state label in block".into())),
        }
    };

    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut components = Vec::new();
    for &start in &split.inadmissible {
        if seen.contains(&start) {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = vec![start];
        seen.insert(start);
        while let Some(v) = queue.pop() {
            members.push(v);
            for &(w, _) in &adjacency[&v] {
                if seen.insert(w) {
                    queue.push(w);
                }
            }
        }
        members.sort_unstable();

        // Directions: crossings toggled by the component's edges.
        let mut directions: BTreeSet<usize> = BTreeSet::new();
        for &v in &members {
            for &(w, coeff) in &adjacency[&v] {
                if coeff.abs() != BigRational::one() {
                    return Err(Error::NotAHypercube(format!(
                        "edge {} -> {} has coefficient {}",
                        v, w, coeff
                    )));
                }
                let gamma = (resolution_mask(v)? ^ resolution_mask(w)?).trailing_zeros() as usize;
                directions.insert(gamma);
            }
        }
        let directions: Vec<usize> = directions.into_iter().collect();
        let m = directions.len();
        if members.len() != 1usize << m {
            return Err(Error::NotAHypercube(format!(
                "component of size {} spans {} directions",
                members.len(),
                m
            )));
        }
        let r_level = complex.basis[members[0]].r.ok_or_else(|| {
            Error::NotAHypercube("missing R grading".into())
        })?;
        if members
            .iter()
            .any(|&v| complex.basis[v].r != Some(r_level))
        {
            return Err(Error::NotAHypercube("mixed R levels in component".into()));
        }

        // Base vertex and coordinates by breadth-first search.
        let base = *members
            .iter()
            .min_by_key(|&&v| (complex.basis[v].i, v))
            .unwrap();
        let dir_pos: BTreeMap<usize, usize> =
            directions.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let mut coords: BTreeMap<usize, u64> = BTreeMap::new();
        coords.insert(base, 0);
        let mut queue = vec![base];
        while let Some(v) = queue.pop() {
            let cv = coords[&v];
            if adjacency[&v].len() != m {
                return Err(Error::NotAHypercube(format!(
                    "vertex {} has degree {}, expected {}",
                    v,
                    adjacency[&v].len(),
                    m
                )));
            }
            for &(w, _) in &adjacency[&v] {
                let gamma =
                    (resolution_mask(v)? ^ resolution_mask(w)?).trailing_zeros() as usize;
                let cw = cv ^ (1u64 << dir_pos[&gamma]);
                match coords.get(&w) {
                    None => {
                        coords.insert(w, cw);
                        queue.push(w);
                    }
                    Some(&existing) if existing == cw => {}
                    Some(_) => {
                        return Err(Error::NotAHypercube(
                            "inconsistent cube coordinates".into(),
                        ))
                    }
                }
            }
        }
        let mut coord_set: Vec<u64> = coords.values().copied().collect();
        coord_set.sort_unstable();
        if coord_set != (0..1u64 << m).collect::<Vec<u64>>() {
            return Err(Error::NotAHypercube("coordinates not a full cube".into()));
        }
        let coords_vec: Vec<u64> = members.iter().map(|v| coords[v]).collect();
        components.push(CubeComponent {
            members,
            directions,
            base,
            coords: coords_vec,
            r_level,
        });
    }
    // Deterministic processing order: descending R, then first member.
    components.sort_by_key(|c| (-c.r_level, c.members[0]));
    Ok(components)
}

impl CubeComponent {
    fn member_at(&self, coord: u64) -> usize {
        self.members[self.coords.iter().position(|&c| c == coord).unwrap()]
    }

    /// The single-direction homotopy along coordinate `pos`: each vertex
    /// with that bit set maps to its partner with coefficient minus the
    /// inverse of the connecting edge.
    fn direction_homotopy(
        &self,
        b: &BTreeMap<(usize, usize), BigRational>,
        pos: usize,
    ) -> BTreeMap<(usize, usize), BigRational> {
        let mut h = BTreeMap::new();
        for (k, &v) in self.members.iter().enumerate() {
            if self.coords[k] >> pos & 1 == 1 {
                let u = self.member_at(self.coords[k] ^ (1u64 << pos));
                let beta = b
                    .get(&(u, v))
                    .expect("cube edge present in the R-preserving block");
                // beta is a unit.
                h.insert((v, u), -BigRational::one() / beta.clone());
            }
        }
        h
    }
}

/// Assemble the homotopy for the whole block out of per-component pieces.
pub fn build_homotopy(
    components: &[CubeComponent],
    split: &FiltrationSplit,
    ring: Ring,
    mode: HomotopyMode,
) -> Result<Homotopy> {
    if mode == HomotopyMode::CanonicalAverage && ring == Ring::Z {
        return Err(Error::RingMismatch);
    }
    let b: BTreeMap<(usize, usize), BigRational> = split
        .b
        .iter()
        .map(|&(s, d, ref v)| ((s, d), v.clone()))
        .collect();
    let mut entries = BTreeMap::new();
    for comp in components {
        match mode {
            HomotopyMode::SingleSplit => {
                entries.extend(comp.direction_homotopy(&b, 0));
            }
            HomotopyMode::CanonicalAverage => {
                let m = comp.directions.len();
                if m == 0 {
                    continue;
                }
                let frac = BigRational::new(BigInt::one(), BigInt::from(m as i64));
                for pos in 0..m {
                    for ((from, to), v) in comp.direction_homotopy(&b, pos) {
                        let slot = entries
                            .entry((from, to))
                            .or_insert_with(BigRational::zero);
                        *slot += v * &frac;
                    }
                }
            }
        }
    }
    entries.retain(|_, v: &mut BigRational| !v.is_zero());
    let h = Homotopy { mode, entries };
    verify_block_homotopy(&b, &split.inadmissible, &h)?;
    Ok(h)
}

/// h b + b h = -Id on the given block.
fn verify_block_homotopy(
    b: &BTreeMap<(usize, usize), BigRational>,
    block: &[usize],
    h: &Homotopy,
) -> Result<()> {
    let pos: BTreeMap<usize, usize> = block.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let n = block.len();
    let mut bm = ExactMatrix::<BigRational>::new(n, n);
    for (&(s, d), v) in b {
        bm.set(pos[&d], pos[&s], v.clone());
    }
    let mut hm = ExactMatrix::<BigRational>::new(n, n);
    for (&(s, d), v) in &h.entries {
        let (Some(&ps), Some(&pd)) = (pos.get(&s), pos.get(&d)) else {
            return Err(Error::BadHomotopy);
        };
        hm.set(pd, ps, v.clone());
    }
    let lhs = hm.mul(&bm).add(&bm.mul(&hm));
    if lhs != ExactMatrix::identity(n).neg() {
        return Err(Error::BadHomotopy);
    }
    Ok(())
}

/// Generalized Gaussian elimination: cancel the sub-basis `block` of `c`
/// using a homotopy for its internal differential, returning the complex
/// (A, a + dhc) on the remaining basis.
pub fn gaussian_eliminate(
    c: &ChainComplex,
    block: &[usize],
    h: &Homotopy,
) -> Result<ChainComplex> {
    if !c.delta_squared_is_zero() {
        return Err(Error::NotAComplex);
    }
    let in_block: BTreeSet<usize> = block.iter().copied().collect();
    let b: BTreeMap<(usize, usize), BigRational> = c
        .entries()
        .filter(|(s, d, _)| in_block.contains(s) && in_block.contains(d))
        .map(|(s, d, v)| ((s, d), v.clone()))
        .collect();
    let block_sorted: Vec<usize> = {
        let mut v = block.to_vec();
        v.sort_unstable();
        v
    };
    verify_block_homotopy(&b, &block_sorted, h)?;

    // dhc corrections: z -> v (c), v -> u (h), u -> w (d).
    let mut corrections: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    let mut d_out: BTreeMap<usize, Vec<(usize, BigRational)>> = BTreeMap::new();
    for (s, dst, v) in c.entries() {
        if in_block.contains(&s) && !in_block.contains(&dst) {
            d_out.entry(s).or_default().push((dst, v.clone()));
        }
    }
    for (z, v, cv) in c.entries() {
        if in_block.contains(&z) || !in_block.contains(&v) {
            continue;
        }
        for (&(hv, hu), hval) in &h.entries {
            if hv != v {
                continue;
            }
            if let Some(outs) = d_out.get(&hu) {
                for (w, dval) in outs {
                    let slot = corrections
                        .entry((z, *w))
                        .or_insert_with(BigRational::zero);
                    *slot += cv * hval * dval;
                }
            }
        }
    }

    // Survivors keep their order; relabel indices compactly.
    let keep: Vec<usize> = (0..c.rank()).filter(|i| !in_block.contains(i)).collect();
    let new_index: BTreeMap<usize, usize> =
        keep.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let basis: Vec<BasisElem> = keep.iter().map(|&i| c.basis[i].clone()).collect();
    let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for (s, d, v) in c.entries() {
        if let (Some(&ns), Some(&nd)) = (new_index.get(&s), new_index.get(&d)) {
            entries.insert((ns, nd), v.clone());
        }
    }
    for ((s, d), v) in corrections {
        let (ns, nd) = (new_index[&s], new_index[&d]);
        let slot = entries.entry((ns, nd)).or_insert_with(BigRational::zero);
        *slot += v;
    }
    entries.retain(|_, v| !v.is_zero());
    let out = ChainComplex::from_parts(c.ring, basis, entries)?;
    if !out.delta_squared_is_zero() {
        return Err(Error::NotAComplex);
    }
    Ok(out)
}

/// The identities certifying one elimination step, checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationCertificate {
    pub cd_zero: bool,
    pub aa_plus_dc_zero: bool,
    pub ad_plus_db_zero: bool,
    pub ca_plus_bc_zero: bool,
    pub homotopy_identity: bool,
    pub reduced_squares_to_zero: bool,
    pub gf_homotopic_to_identity: bool,
    pub fg_homotopic_to_identity: bool,
}

impl EliminationCertificate {
    pub fn all_hold(&self) -> bool {
        self.cd_zero
            && self.aa_plus_dc_zero
            && self.ad_plus_db_zero
            && self.ca_plus_bc_zero
            && self.homotopy_identity
            && self.reduced_squares_to_zero
            && self.gf_homotopic_to_identity
            && self.fg_homotopic_to_identity
    }
}

/// Check every identity of the elimination lemma on the given split:
/// the block equations forced by delta^2 = 0, the homotopy equation, and
/// the two-sided homotopy equivalence with H' = d h^3 c.
pub fn verify_elimination_identities(
    c: &ChainComplex,
    block: &[usize],
    h: &Homotopy,
) -> Result<EliminationCertificate> {
    let in_block: BTreeSet<usize> = block.iter().copied().collect();
    let a_idx: Vec<usize> = (0..c.rank()).filter(|i| !in_block.contains(i)).collect();
    let mut b_idx: Vec<usize> = block.to_vec();
    b_idx.sort_unstable();
    let apos: BTreeMap<usize, usize> = a_idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let bpos: BTreeMap<usize, usize> = b_idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let (na, nb) = (a_idx.len(), b_idx.len());

    let mut am = ExactMatrix::<BigRational>::new(na, na);
    let mut bm = ExactMatrix::<BigRational>::new(nb, nb);
    let mut cm = ExactMatrix::<BigRational>::new(nb, na);
    let mut dm = ExactMatrix::<BigRational>::new(na, nb);
    for (s, d, v) in c.entries() {
        match (apos.get(&s), bpos.get(&s), apos.get(&d), bpos.get(&d)) {
            (Some(&sa), _, Some(&da), _) => am.set(da, sa, v.clone()),
            (Some(&sa), _, _, Some(&db)) => cm.set(db, sa, v.clone()),
            (_, Some(&sb), Some(&da), _) => dm.set(da, sb, v.clone()),
            (_, Some(&sb), _, Some(&db)) => bm.set(db, sb, v.clone()),
            _ => unreachable!(),
        }
    }
    let mut hm = ExactMatrix::<BigRational>::new(nb, nb);
    for (&(s, d), v) in &h.entries {
        let (Some(&ps), Some(&pd)) = (bpos.get(&s), bpos.get(&d)) else {
            return Err(Error::BadHomotopy);
        };
        hm.set(pd, ps, v.clone());
    }

    let cd_zero = cm.mul(&dm).is_zero();
    let aa_plus_dc_zero = am.mul(&am).add(&dm.mul(&cm)).is_zero();
    let ad_plus_db_zero = am.mul(&dm).add(&dm.mul(&bm)).is_zero();
    let ca_plus_bc_zero = cm.mul(&am).add(&bm.mul(&cm)).is_zero();
    let homotopy_identity =
        hm.mul(&bm).add(&bm.mul(&hm)) == ExactMatrix::identity(nb).neg();

    let reduced = am.add(&dm.mul(&hm).mul(&cm));
    let reduced_squares_to_zero = reduced.mul(&reduced).is_zero();

    // Whole-complex matrices in (A | B) block order.
    let n = na + nb;
    let glue = |aa: &ExactMatrix<BigRational>,
                ab: &ExactMatrix<BigRational>,
                ba: &ExactMatrix<BigRational>,
                bb: &ExactMatrix<BigRational>| {
        let mut m = ExactMatrix::<BigRational>::new(n, n);
        for (r, c2, v) in aa.entries() {
            m.set(r, c2, v.clone());
        }
        for (r, c2, v) in ab.entries() {
            m.set(r, na + c2, v.clone());
        }
        for (r, c2, v) in ba.entries() {
            m.set(na + r, c2, v.clone());
        }
        for (r, c2, v) in bb.entries() {
            m.set(na + r, na + c2, v.clone());
        }
        m
    };
    let zero_ab = ExactMatrix::<BigRational>::new(na, nb);
    let zero_ba = ExactMatrix::<BigRational>::new(nb, na);
    let zero_aa = ExactMatrix::<BigRational>::new(na, na);
    let delta = glue(&am, &dm, &cm, &bm);
    let big_h = glue(&zero_aa, &zero_ab, &zero_ba, &hm);

    // f = (Id  dh) : C -> A and g = (Id  hc)^T : A -> C.
    let dh = dm.mul(&hm);
    let hc = hm.mul(&cm);
    let mut f = ExactMatrix::<BigRational>::new(na, n);
    let mut g = ExactMatrix::<BigRational>::new(n, na);
    for i in 0..na {
        f.set(i, i, BigRational::one());
        g.set(i, i, BigRational::one());
    }
    for (r, c2, v) in dh.entries() {
        f.set(r, na + c2, v.clone());
    }
    for (r, c2, v) in hc.entries() {
        g.set(na + r, c2, v.clone());
    }

    let gf = g.mul(&f);
    let lhs = gf.sub(&ExactMatrix::identity(n));
    let rhs = big_h.mul(&delta).add(&delta.mul(&big_h));
    let gf_homotopic_to_identity = lhs == rhs;

    let fg = f.mul(&g);
    let hprime = dm.mul(&hm).mul(&hm).mul(&hm).mul(&cm);
    let lhs2 = fg.sub(&ExactMatrix::identity(na));
    let rhs2 = hprime.mul(&reduced).add(&reduced.mul(&hprime));
    let fg_homotopic_to_identity = lhs2 == rhs2;

    Ok(EliminationCertificate {
        cd_zero,
        aa_plus_dc_zero,
        ad_plus_db_zero,
        ca_plus_bc_zero,
        homotopy_identity,
        reduced_squares_to_zero,
        gf_homotopic_to_identity,
        fg_homotopic_to_identity,
    })
}

/// The complex on generators produced by the full reduction.
#[derive(Debug, Clone)]
pub struct ReducedComplex {
    pub complex: ChainComplex,
    /// Certificates of the elimination steps, when verification was on.
    pub certificates: Vec<EliminationCertificate>,
}

#[derive(Debug, Clone, Copy)]
pub struct ReduceOptions {
    pub ring: Ring,
    pub mode: HomotopyMode,
    pub waist: Waist,
    /// Check the elimination-lemma identities at every step.
    pub verify_steps: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            ring: Ring::Z,
            mode: HomotopyMode::SingleSplit,
            waist: Waist::High,
            verify_steps: false,
        }
    }
}

/// Full pipeline: complex, filtration split, cube decomposition, then
/// component-by-component elimination in descending R order. The final
/// basis is the admissible states relabelled by their generators.
pub fn reduce(d: &GridDiagram, opts: ReduceOptions) -> Result<ReducedComplex> {
    let space = StateSpace::new(d);
    reduce_in(&space, opts)
}

pub fn reduce_in(space: &StateSpace, opts: ReduceOptions) -> Result<ReducedComplex> {
    let order: Vec<usize> = (0..space.crossing_count()).collect();
    reduce_with_order(space, &order, opts)
}

/// Reduction of the complex whose edge signs use a permuted crossing
/// order. Over Q with the averaged homotopy the result is conjugate to
/// the canonical one by the diagonal sign change relating the two sign
/// conventions.
pub fn reduce_with_order(
    space: &StateSpace,
    order: &[usize],
    opts: ReduceOptions,
) -> Result<ReducedComplex> {
    if opts.mode == HomotopyMode::CanonicalAverage && opts.ring == Ring::Z {
        return Err(Error::RingMismatch);
    }
    let eights = build_figure_eights(&space.diagram, opts.waist);
    let mut complex = crate::complex::build_complex_with_order(space, order);
    complex.ring = opts.ring;
    reduce_complex(space, complex, &eights, opts)
}

fn reduce_complex(
    space: &StateSpace,
    complex: ChainComplex,
    eights: &crate::eights::Eights,
    opts: ReduceOptions,
) -> Result<ReducedComplex> {
    let split = filtration_split(space, &complex)?;
    let components = hypercube_decompose(&complex, &split)?;
    let b_map: BTreeMap<(usize, usize), BigRational> = split
        .b
        .iter()
        .map(|&(s, d, ref v)| ((s, d), v.clone()))
        .collect();

    // Original global index -> position in the current complex.
    let mut current = complex;
    let mut where_now: Vec<Option<usize>> = (0..current.rank()).map(Some).collect();
    let mut certificates = Vec::new();
    for comp in &components {
        // Per-component homotopy in original indices, then remapped.
        let mut h_entries = BTreeMap::new();
        match opts.mode {
            HomotopyMode::SingleSplit => {
                h_entries.extend(comp.direction_homotopy(&b_map, 0));
            }
            HomotopyMode::CanonicalAverage => {
                let m = comp.directions.len();
                if m > 0 {
                    let frac = BigRational::new(BigInt::one(), BigInt::from(m as i64));
                    for pos in 0..m {
                        for ((from, to), v) in comp.direction_homotopy(&b_map, pos) {
                            let slot =
                                h_entries.entry((from, to)).or_insert_with(BigRational::zero);
                            *slot += v * &frac;
                        }
                    }
                }
            }
        }
        let h = Homotopy {
            mode: opts.mode,
            entries: h_entries
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((from, to), v)| {
                    ((where_now[from].unwrap(), where_now[to].unwrap()), v)
                })
                .collect(),
        };
        let block: Vec<usize> = comp
            .members
            .iter()
            .map(|&v| where_now[v].unwrap())
            .collect();
        if opts.verify_steps {
            let cert = verify_elimination_identities(&current, &block, &h)?;
            if !cert.all_hold() {
                return Err(Error::BadHomotopy);
            }
            certificates.push(cert);
        }
        current = gaussian_eliminate(&current, &block, &h)?;
        // Recompute the index map: survivors keep relative order.
        let removed: BTreeSet<usize> = block.iter().copied().collect();
        let mut next = 0usize;
        for slot in where_now.iter_mut() {
            if let Some(pos) = *slot {
                if removed.contains(&pos) {
                    *slot = None;
                } else {
                    *slot = Some(next);
                    next += 1;
                }
            }
        }
    }

    // Relabel the surviving admissible states by their generators.
    let mut basis = Vec::with_capacity(current.rank());
    for e in &current.basis {
        let Label::State { mask, orient } = e.label else {
            return Err(Error::NotAdmissible);
        };
        let state = space.state(mask, orient);
        let generator = psi(space, eights, &state)?;
        basis.push(BasisElem {
            label: Label::Generator(generator),
            i: e.i,
            j: e.j,
            r: e.r,
        });
    }
    let entries = current.entries().map(|(s, d, v)| ((s, d), v.clone())).collect();
    let mut complex = ChainComplex::from_parts(current.ring, basis, entries)?;
    complex.ring = opts.ring;
    if opts.ring == Ring::Z
        && crate::linalg::to_integer_matrix(&entries_matrix(&complex)).is_none()
    {
        return Err(Error::RingMismatch);
    }
    Ok(ReducedComplex {
        complex,
        certificates,
    })
}

fn entries_matrix(c: &ChainComplex) -> ExactMatrix<BigRational> {
    let n = c.rank();
    let mut m = ExactMatrix::new(n, n);
    for (s, d, v) in c.entries() {
        m.set(d, s, v.clone());
    }
    m
}

/// The acyclic complex on the vertices of {0,1}^dim with +-identity edge
/// maps, optionally conjugated by a sign per vertex. Useful as a test
/// subject for the elimination lemma.
pub fn flattened_hypercube(dim: usize, vertex_signs: &[i64]) -> ChainComplex {
    let n = 1usize << dim;
    assert_eq!(vertex_signs.len(), n);
    let basis: Vec<BasisElem> = (0..n)
        .map(|v| BasisElem {
            label: Label::Anon(v),
            i: (v as u64).count_ones() as i64,
            j: 0,
            r: Some(0),
        })
        .collect();
    let mut entries = BTreeMap::new();
    for v in 0..n {
        for gamma in 0..dim {
            if v >> gamma & 1 == 0 {
                let w = v | (1 << gamma);
                let earlier = (v & ((1 << gamma) - 1)).count_ones();
                let mut sign = if earlier % 2 == 0 { 1 } else { -1 };
                sign *= vertex_signs[v] * vertex_signs[w];
                entries.insert((v, w), BigRational::from_integer(BigInt::from(sign)));
            }
        }
    }
    ChainComplex::from_parts(Ring::Z, basis, entries).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use num_traits::ToPrimitive;

    fn cube_homotopy(c: &ChainComplex, dim: usize, mode: HomotopyMode) -> Homotopy {
        // Treat the whole cube as one component with directions 0..dim.
        let mut entries = BTreeMap::new();
        let positions: Vec<usize> = (0..dim).collect();
        for &pos in &positions {
            for v in 0..c.rank() {
                if v >> pos & 1 == 1 {
                    let u = v & !(1 << pos);
                    let beta = c.entry(u, v);
                    assert!(!beta.is_zero());
                    let val = -BigRational::one() / beta;
                    let scaled = match mode {
                        HomotopyMode::SingleSplit => {
                            if pos != 0 {
                                continue;
                            }
                            val
                        }
                        HomotopyMode::CanonicalAverage => {
                            val / BigRational::from_integer(BigInt::from(dim as i64))
                        }
                    };
                    let slot = entries
                        .entry((v, u))
                        .or_insert_with(BigRational::zero);
                    *slot += scaled;
                }
            }
        }
        entries.retain(|_, v: &mut BigRational| !v.is_zero());
        Homotopy { mode, entries }
    }

    #[test]
    fn eliminating_nothing_changes_nothing() {
        let c = flattened_hypercube(2, &[1, 1, 1, 1]);
        let h = Homotopy {
            mode: HomotopyMode::SingleSplit,
            entries: BTreeMap::new(),
        };
        let out = gaussian_eliminate(&c, &[], &h).unwrap();
        assert_eq!(out.rank(), c.rank());
        for s in 0..c.rank() {
            for d in 0..c.rank() {
                assert_eq!(out.entry(s, d), c.entry(s, d));
            }
        }
    }

    #[test]
    fn two_generator_identity_pair_reduces_to_a_minus_dc() {
        // C = A + B with B = (u -> v) the identity block, c: z -> v and
        // d: u -> w; eliminating B with h = -id leaves a - dc on A.
        use crate::complex::{BasisElem, Label};
        let basis = vec![
            BasisElem { label: Label::Anon(0), i: 0, j: 0, r: None }, // z
            BasisElem { label: Label::Anon(1), i: 1, j: 0, r: None }, // w
            BasisElem { label: Label::Anon(2), i: 0, j: 0, r: None }, // u
            BasisElem { label: Label::Anon(3), i: 1, j: 0, r: None }, // v
        ];
        let mut entries = BTreeMap::new();
        entries.insert((0, 3), BigRational::one()); // c: z -> v
        entries.insert((2, 1), BigRational::one()); // d: u -> w
        entries.insert((2, 3), BigRational::one()); // b: u -> v
        let c = ChainComplex::from_parts(Ring::Z, basis, entries).unwrap();
        let h = Homotopy {
            mode: HomotopyMode::SingleSplit,
            entries: BTreeMap::from([((3, 2), -BigRational::one())]),
        };
        let cert = verify_elimination_identities(&c, &[2, 3], &h).unwrap();
        assert!(cert.all_hold());
        let out = gaussian_eliminate(&c, &[2, 3], &h).unwrap();
        assert_eq!(out.rank(), 2);
        // a - d.c: the only entry is z -> w with coefficient -1.
        assert_eq!(out.entry(0, 1), -BigRational::one());
        assert_eq!(out.entries().count(), 1);
        // A bad homotopy is rejected.
        let bad = Homotopy {
            mode: HomotopyMode::SingleSplit,
            entries: BTreeMap::from([((3, 2), BigRational::one())]),
        };
        assert_eq!(
            gaussian_eliminate(&c, &[2, 3], &bad).err(),
            Some(Error::BadHomotopy)
        );
    }

    #[test]
    fn hypercubes_contract_under_both_homotopies() {
        for dim in 1..=4 {
            let signs: Vec<i64> = (0..1usize << dim)
                .map(|v| if v.count_ones() % 3 == 1 { -1 } else { 1 })
                .collect();
            let c = flattened_hypercube(dim, &signs);
            assert!(c.delta_squared_is_zero());
            for mode in [HomotopyMode::SingleSplit, HomotopyMode::CanonicalAverage] {
                let h = cube_homotopy(&c, dim, mode);
                let block: Vec<usize> = (0..c.rank()).collect();
                let cert = verify_elimination_identities(&c, &block, &h).unwrap();
                assert!(cert.all_hold(), "certificate failed for dim {}", dim);
                let out = gaussian_eliminate(&c, &block, &h).unwrap();
                assert_eq!(out.rank(), 0);
                if mode == HomotopyMode::CanonicalAverage && dim > 1 {
                    // Averaged entries have denominators dividing dim.
                    assert!(h.entries.values().any(|v| !v.is_integer()));
                    assert!(h
                        .entries
                        .values()
                        .all(|v| (v * BigRational::from_integer(BigInt::from(dim as i64)))
                            .is_integer()));
                }
            }
        }
    }

    #[test]
    fn half_cube_elimination_preserves_homology() {
        for dim in 1..=4usize {
            let signs: Vec<i64> = (0..1usize << dim)
                .map(|v| if v.count_ones() % 2 == 1 { -1 } else { 1 })
                .collect();
            let c = flattened_hypercube(dim, &signs);
            // Eliminate the sub-cube with the top bit set, using its own
            // single-split homotopy along direction 0 (or the only bit).
            let top = dim - 1;
            let block: Vec<usize> = (0..c.rank()).filter(|v| v >> top & 1 == 1).collect();
            let mut entries = BTreeMap::new();
            if dim == 1 {
                // Block is a single vertex; no internal differential and
                // h = 0 works only if b = 0 and -Id = 0, i.e. never.
                continue;
            }
            for &v in &block {
                if v >> 0 & 1 == 1 {
                    let u = v & !1usize;
                    let beta = c.entry(u, v);
                    entries.insert((v, u), -BigRational::one() / beta);
                }
            }
            let h = Homotopy {
                mode: HomotopyMode::SingleSplit,
                entries,
            };
            let cert = verify_elimination_identities(&c, &block, &h).unwrap();
            assert!(cert.all_hold());
            let out = gaussian_eliminate(&c, &block, &h).unwrap();
            assert_eq!(out.rank(), 1 << (dim - 1));
            assert!(out.homology().unwrap().groups.is_empty());
        }
    }

    #[test]
    fn unknot_reduces_to_itself() {
        let red = reduce(&GridDiagram::unknot(), ReduceOptions::default()).unwrap();
        assert_eq!(red.complex.rank(), 2);
        assert_eq!(red.complex.entries().count(), 0);
    }

    #[test]
    fn kinked_unknot_block_is_a_one_cube() {
        // Smallest flattened cube: a single inadmissible pair joined by
        // one unit entry.
        let d = GridDiagram::kinked_unknot();
        let space = StateSpace::new(&d);
        let c = build_complex(&space);
        let split = crate::complex::filtration_split(&space, &c).unwrap();
        let comps = hypercube_decompose(&c, &split).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].members.len(), 2);
        assert_eq!(comps[0].directions.len(), 1);
        let h = build_homotopy(&comps, &split, Ring::Z, HomotopyMode::SingleSplit).unwrap();
        assert_eq!(h.entries.len(), 1);
        let v = h.entries.values().next().unwrap();
        assert_eq!(v.abs(), BigRational::one());
    }

    #[test]
    fn kinked_unknot_reduction_matches_hand_computation() {
        let opts = ReduceOptions {
            verify_steps: true,
            ..Default::default()
        };
        let red = reduce(&GridDiagram::kinked_unknot(), opts).unwrap();
        assert_eq!(red.complex.rank(), 4);
        assert_eq!(red.certificates.len(), 1);
        // Two surviving differentials, both hitting the 1-smoothing state.
        assert_eq!(red.complex.entries().count(), 2);
        for (_, _, v) in red.complex.entries() {
            assert_eq!(v.abs().to_integer().to_i64(), Some(1));
        }
        let h = red.complex.homology().unwrap();
        assert_eq!(h.groups.len(), 2);
        assert_eq!(h.groups[&(0, 1)].free_rank, 1);
        assert_eq!(h.groups[&(0, -1)].free_rank, 1);
    }

    #[test]
    fn trefoil_reduction_preserves_homology_both_rings() {
        let d = GridDiagram::trefoil();
        let space = StateSpace::new(&d);
        let full = build_complex(&space);
        let full_z = full.homology().unwrap();
        let mut full_q = full.clone();
        full_q.ring = Ring::Q;
        let full_q = full_q.homology().unwrap();

        let red_z = reduce(
            &d,
            ReduceOptions {
                verify_steps: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(red_z.complex.homology().unwrap(), full_z);

        let red_q = reduce(
            &d,
            ReduceOptions {
                ring: Ring::Q,
                mode: HomotopyMode::CanonicalAverage,
                verify_steps: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(red_q.complex.homology().unwrap(), full_q);
    }

    #[test]
    fn reduced_basis_counts_generators() {
        use crate::eights::{build_figure_eights, enumerate_generators};
        for d in [
            GridDiagram::unknot(),
            GridDiagram::kinked_unknot(),
            GridDiagram::trefoil(),
            GridDiagram::hopf_link(),
        ] {
            let red = reduce(&d, ReduceOptions::default()).unwrap();
            let eights = build_figure_eights(&d, Waist::High);
            assert_eq!(
                red.complex.rank(),
                enumerate_generators(&d, &eights).len()
            );
            // The reduced differential respects J and increases P = i - j.
            for (s, dst, _) in red.complex.entries() {
                assert_eq!(red.complex.basis[s].j, red.complex.basis[dst].j);
                assert_eq!(red.complex.basis[s].i + 1, red.complex.basis[dst].i);
            }
        }
    }

    #[test]
    fn average_homotopy_over_z_is_rejected() {
        let err = reduce(
            &GridDiagram::trefoil(),
            ReduceOptions {
                ring: Ring::Z,
                mode: HomotopyMode::CanonicalAverage,
                ..Default::default()
            },
        );
        assert_eq!(err.err(), Some(Error::RingMismatch));
    }
}
