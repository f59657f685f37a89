//! Stabilizer states from exponentiated codewords and the N + 1 mutually
//! unbiased bases they form, with all inner products evaluated exactly over
//! the Gaussian integers on unnormalized quaternary-phase vectors.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::design::{kerdock_point_matrix, ProjectivePoint};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::gf2m::{FieldContext, FieldElement};
use crate::kerdock_codes::{codeword, CodeError};
use crate::pauli::vector_of_index;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MubError {
    #[error("basis construction limited to m <= {limit}, got {m}")]
    TooLarge { m: usize, limit: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Exact Gaussian integer.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub fn norm_sq(&self) -> u64 {
        (self.re * self.re + self.im * self.im) as u64
    }
}

/// A length-N vector of quaternary phases, stored as Z4 exponents:
/// entry x is `i^{exps[x]}`. Unnormalized (Euclidean length sqrt(N)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternaryPhaseVector {
    exps: Vec<u8>,
}

impl QuaternaryPhaseVector {
    pub fn from_exponents(exps: Vec<u8>) -> Self {
        assert!(exps.iter().all(|&e| e < 4));
        QuaternaryPhaseVector { exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }
}

/// The common eigenvector `[i^{x P x^T + 2 w x^T}]_x` of the maximal
/// commutative subgroup labeled by the symmetric matrix P.
pub fn eigenvector(p: &BitMatrix, w: &BitVector) -> Result<QuaternaryPhaseVector, CodeError> {
    let c = codeword(p, w, 0)?;
    Ok(QuaternaryPhaseVector { exps: c.entries().to_vec() })
}

/// Exact Hermitian inner product `<u, v> = sum_x conj(u_x) v_x`.
pub fn inner_product(u: &QuaternaryPhaseVector, v: &QuaternaryPhaseVector) -> GaussianInt {
    assert_eq!(u.len(), v.len(), "inner product length mismatch");
    let mut counts = [0i64; 4];
    for (&eu, &ev) in u.exps.iter().zip(&v.exps) {
        counts[((4 + ev - eu) & 3) as usize] += 1;
    }
    GaussianInt { re: counts[0] - counts[2], im: counts[1] - counts[3] }
}

/// Histogram of squared inner-product magnitudes between a fixed vector of
/// one eigenbasis and all vectors of another.
#[derive(Clone, Debug, Serialize)]
pub struct InnerProductLawReport {
    pub m: usize,
    pub rank_sum: usize,
    pub histogram: BTreeMap<u64, u64>,
    pub expected_value: u64,
    pub expected_hits: u64,
    pub pass: bool,
}

/// For fixed `v` in the eigenbasis of P2 and `u` running over the
/// eigenbasis of P1, the squared magnitudes take the single nonzero value
/// `2^{2m - k}` exactly `2^k` times, with `k = rank(P1 + P2)`.
pub fn verify_inner_product_law(
    ctx: &FieldContext,
    p1: &BitMatrix,
    p2: &BitMatrix,
) -> Result<InnerProductLawReport, MubError> {
    let m = ctx.m();
    if m > 10 {
        return Err(MubError::TooLarge { m, limit: 10 });
    }
    let k = p1.add(p2).unwrap().rank();
    let v = eigenvector(p2, &BitVector::zeros(m))?;
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for w_idx in 0..(1usize << m) {
        let w = vector_of_index(w_idx, m);
        let u = eigenvector(p1, &w)?;
        let val = inner_product(&u, &v).norm_sq();
        *histogram.entry(val).or_insert(0) += 1;
    }
    let expected_value = 1u64 << (2 * m - k);
    let expected_hits = 1u64 << k;
    let zero_hits = (1u64 << m) - expected_hits;
    let mut expected: BTreeMap<u64, u64> = BTreeMap::new();
    if zero_hits > 0 {
        expected.insert(0, zero_hits);
    }
    *expected.entry(expected_value).or_insert(0) += expected_hits;
    let pass = histogram == expected;
    Ok(InnerProductLawReport { m, rank_sum: k, histogram, expected_value, expected_hits, pass })
}

/// The N + 1 mutually unbiased bases: the standard basis (the point at
/// infinity) plus one phase basis per field element. Vectors are produced
/// lazily; nothing is stored beyond the field context reference.
pub struct MubCollection<'a> {
    ctx: &'a FieldContext,
}

pub const MUB_QUBIT_LIMIT: usize = 10;

impl<'a> MubCollection<'a> {
    pub fn new(ctx: &'a FieldContext) -> Result<Self, MubError> {
        if ctx.m() > MUB_QUBIT_LIMIT {
            return Err(MubError::TooLarge { m: ctx.m(), limit: MUB_QUBIT_LIMIT });
        }
        Ok(MubCollection { ctx })
    }

    pub fn ctx(&self) -> &FieldContext {
        self.ctx
    }

    /// Basis labels: infinity first, then field elements by antilog index.
    pub fn basis_points(&self) -> Vec<ProjectivePoint> {
        let mut points = vec![ProjectivePoint::Infinity, ProjectivePoint::Finite(self.ctx.zero())];
        for i in 0..self.ctx.order() {
            points.push(ProjectivePoint::Finite(self.ctx.antilog(i)));
        }
        points
    }

    /// The w-th vector of the phase basis at finite point z.
    pub fn vector(&self, z: FieldElement, w_idx: usize) -> QuaternaryPhaseVector {
        let p = kerdock_point_matrix(self.ctx, z);
        let w = vector_of_index(w_idx, self.ctx.m());
        eigenvector(&p, &w).expect("Kerdock matrices are symmetric")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MubReport {
    pub m: usize,
    pub bases: usize,
    pub orthonormal_ok: bool,
    pub unbiased_ok: bool,
    pub partition_ok: bool,
}

impl MubReport {
    pub fn pass(&self) -> bool {
        self.orthonormal_ok && self.unbiased_ok && self.partition_ok
    }
}

/// Checks orthonormality of each basis, pairwise unbiasedness (exactly
/// `|<u, v>|^2 = N` on unnormalized phase vectors; entries of unit modulus
/// against the standard basis), and the partition of the N^2 - 1 nonzero
/// Pauli classes by the N + 1 maximal commutative subgroups.
pub fn check_mubs(ctx: &FieldContext) -> Result<MubReport, MubError> {
    let m = ctx.m();
    if m > 6 {
        return Err(MubError::TooLarge { m, limit: 6 });
    }
    let n = 1usize << m;
    let mubs = MubCollection::new(ctx)?;
    let finite: Vec<FieldElement> = ctx.elements().collect();

    // cache all phase bases
    let bases: Vec<Vec<QuaternaryPhaseVector>> = finite
        .iter()
        .map(|&z| (0..n).map(|w| mubs.vector(z, w)).collect())
        .collect();

    let mut orthonormal_ok = true;
    for basis in &bases {
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let ip = inner_product(u, v);
                let expected = if i == j { (n as i64, 0) } else { (0, 0) };
                if (ip.re, ip.im) != expected {
                    orthonormal_ok = false;
                }
            }
        }
    }

    let mut unbiased_ok = true;
    for (bi, b1) in bases.iter().enumerate() {
        for b2 in bases.iter().skip(bi + 1) {
            for u in b1 {
                for v in b2 {
                    if inner_product(u, v).norm_sq() != n as u64 {
                        unbiased_ok = false;
                    }
                }
            }
        }
    }
    // against the standard basis: every phase-vector entry has |.|^2 = 1,
    // which is exactly unbiasedness after normalization
    for basis in &bases {
        for v in basis {
            if v.exponents().iter().any(|&e| e > 3) {
                unbiased_ok = false;
            }
        }
    }

    // partition of nonzero classes: [0|b] from the standard subgroup and
    // [a | a P_z] from each phase subgroup, each class exactly once
    let mut seen: HashSet<u64> = HashSet::new();
    let mut partition_ok = true;
    for b in 1..n {
        let label = (b as u64) << m;
        if !seen.insert(label) {
            partition_ok = false;
        }
    }
    for &z in &finite {
        let p = kerdock_point_matrix(ctx, z);
        for a_idx in 1..n {
            let a = vector_of_index(a_idx, m);
            let ap = p.vec_mul(&a).unwrap();
            let mut label = 0u64;
            for pos in a.iter_ones() {
                label |= 1 << pos;
            }
            for pos in ap.iter_ones() {
                label |= 1 << (m + pos);
            }
            if !seen.insert(label) {
                partition_ok = false;
            }
        }
    }
    if seen.len() != (1 << (2 * m)) - 1 {
        partition_ok = false;
    }

    Ok(MubReport {
        m,
        bases: n + 1,
        orthonormal_ok,
        unbiased_ok,
        partition_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChordalReport {
    pub m: usize,
    pub r: usize,
    pub min_rank: usize,
    pub expected_min_rank: usize,
    pub chordal_distance: f64,
    pub expected_chordal_distance: f64,
}

impl ChordalReport {
    pub fn pass(&self) -> bool {
        self.min_rank == self.expected_min_rank
            && (self.chordal_distance - self.expected_chordal_distance).abs() < 1e-12
    }
}

/// Chordal distance of the line set from a matrix family: determined by
/// the minimum rank over nonzero set members, `sqrt(1 - 2^{-min_rank})`,
/// expected to meet the bound `m - 2r`.
pub fn chordal_distance_check(ctx: &FieldContext, r: usize) -> Result<ChordalReport, MubError> {
    let m = ctx.m();
    let hist = crate::kerdock_codes::rank_histogram(ctx, r)?;
    let min_rank = *hist.keys().next().expect("nonempty set");
    let chordal = (1.0 - 2f64.powi(-(min_rank as i32))).sqrt();
    let expected_min_rank = m - 2 * r;
    let expected = (1.0 - 2f64.powi(-(expected_min_rank as i32))).sqrt();
    Ok(ChordalReport {
        m,
        r,
        min_rank,
        expected_min_rank,
        chordal_distance: chordal,
        expected_chordal_distance: expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::make_context;
    use crate::kerdock_codes::kerdock_matrix;
    use crate::pauli::{realize_dense, PauliLabel};

    #[test]
    fn eigenvector_all_ones_for_zero_params() {
        let p = BitMatrix::zeros(2, 2);
        let v = eigenvector(&p, &BitVector::zeros(2)).unwrap();
        assert!(v.exponents().iter().all(|&e| e == 0));
    }

    #[test]
    fn eigenvector_m1_y_basis() {
        // P = [1], w = 0 gives [1, i], fixed by E(1|1) = Y
        let p = BitMatrix::identity(1);
        let v = eigenvector(&p, &BitVector::zeros(1)).unwrap();
        assert_eq!(v.exponents(), &[0, 1]);
        // dense check: Y [1, i]^T = [1, i]^T
        let y = realize_dense(&PauliLabel::new(
            "1".parse().unwrap(),
            "1".parse().unwrap(),
            0,
        ))
        .unwrap();
        // (Y v)_0 = -i * i = 1, (Y v)_1 = i * 1 = i
        let (r0, i0) = y.entry(0, 1);
        assert_eq!((r0, i0), (0, -1));
        let _ = v;
    }

    #[test]
    fn eigenvectors_are_fixed_by_subgroup_dense() {
        // E(a, aP) v = ±v for all a, m = 2, P = I
        let m = 2;
        let p = BitMatrix::identity(m);
        for w_idx in 0..4usize {
            let v = eigenvector(&p, &vector_of_index(w_idx, m)).unwrap();
            for a_idx in 0..4usize {
                let a = vector_of_index(a_idx, m);
                let ap = p.vec_mul(&a).unwrap();
                let e = realize_dense(&PauliLabel::new(a, ap, 0)).unwrap();
                // compute E v and compare against ±v entrywise
                let n = 1 << m;
                let mut image = vec![(0i64, 0i64); n];
                for r in 0..n {
                    for c in 0..n {
                        let (er, ei) = e.entry(r, c);
                        if er == 0 && ei == 0 {
                            continue;
                        }
                        let (vr, vi) = phase_to_pair(v.exponents()[c]);
                        image[r].0 += er * vr - ei * vi;
                        image[r].1 += er * vi + ei * vr;
                    }
                }
                let plus = (0..n).all(|r| image[r] == phase_to_pair(v.exponents()[r]));
                let minus = (0..n).all(|r| {
                    let (vr, vi) = phase_to_pair(v.exponents()[r]);
                    image[r] == (-vr, -vi)
                });
                assert!(plus || minus, "not an eigenvector at a={a_idx} w={w_idx}");
            }
        }
    }

    fn phase_to_pair(e: u8) -> (i64, i64) {
        match e & 3 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }

    #[test]
    fn inner_product_basics() {
        let u = QuaternaryPhaseVector::from_exponents(vec![0, 1, 2, 3]);
        assert_eq!(inner_product(&u, &u), GaussianInt { re: 4, im: 0 });
    }

    #[test]
    fn same_basis_orthogonality_m3() {
        let ctx = make_context(3).unwrap();
        let p = kerdock_matrix(&ctx, ctx.alpha());
        let u = eigenvector(&p, &vector_of_index(1, 3)).unwrap();
        let v = eigenvector(&p, &vector_of_index(5, 3)).unwrap();
        assert_eq!(inner_product(&u, &v).norm_sq(), 0);
    }

    #[test]
    fn cross_basis_magnitude_m3() {
        let ctx = make_context(3).unwrap();
        let p1 = kerdock_matrix(&ctx, ctx.one());
        let p2 = kerdock_matrix(&ctx, ctx.alpha());
        for w1 in 0..8 {
            for w2 in 0..8 {
                let u = eigenvector(&p1, &vector_of_index(w1, 3)).unwrap();
                let v = eigenvector(&p2, &vector_of_index(w2, 3)).unwrap();
                assert_eq!(inner_product(&u, &v).norm_sq(), 8);
            }
        }
    }

    #[test]
    fn inner_product_law_same_matrix() {
        let ctx = make_context(3).unwrap();
        let p = kerdock_matrix(&ctx, ctx.one());
        let report = verify_inner_product_law(&ctx, &p, &p).unwrap();
        assert!(report.pass);
        assert_eq!(report.rank_sum, 0);
        assert_eq!(report.expected_value, 64); // 2^{2m}
    }

    #[test]
    fn inner_product_law_distinct_kerdock() {
        let ctx = make_context(3).unwrap();
        let p1 = kerdock_matrix(&ctx, ctx.zero());
        let p2 = kerdock_matrix(&ctx, ctx.alpha());
        let report = verify_inner_product_law(&ctx, &p1, &p2).unwrap();
        assert!(report.pass);
        assert_eq!(report.rank_sum, 3);
        assert_eq!(report.expected_value, 8);
        assert_eq!(report.expected_hits, 8);
    }

    #[test]
    fn mub_report_small_m() {
        for m in 1..=3 {
            let ctx = make_context(m).unwrap();
            let report = check_mubs(&ctx).unwrap();
            assert!(report.pass(), "MUB check failed at m={m}: {report:?}");
            assert_eq!(report.bases, (1 << m) + 1);
        }
    }

    #[test]
    fn basis_point_count() {
        let ctx = make_context(2).unwrap();
        let mubs = MubCollection::new(&ctx).unwrap();
        assert_eq!(mubs.basis_points().len(), 5); // N + 1
    }

    #[test]
    fn chordal_distance_kerdock_set() {
        let ctx = make_context(5).unwrap();
        for r in 0..=2 {
            let report = chordal_distance_check(&ctx, r).unwrap();
            assert!(report.pass(), "chordal mismatch at r={r}: {report:?}");
        }
    }
}
