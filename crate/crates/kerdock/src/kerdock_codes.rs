//! Kerdock and Delsarte-Goethals matrix sets, the Z4-linear codes built on
//! them, the Gray map, and weight-distribution computation.
//!
//! A codeword is the vector `[x P x^T + 2 w x^T + k]_{x in F_2^m}` over Z4,
//! with the quadratic form evaluated by lifting the binary matrix P and
//! vector x to integers and reducing modulo 4.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::f2linalg::{BitMatrix, BitVector};
use crate::gf2m::{FieldContext, FieldElement};
use crate::pauli::index_of;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("parameter r = {r} exceeds (m - 1) / 2 = {max}")]
    RankParamOutOfRange { r: usize, max: usize },
    #[error("wrong number of field elements: expected {expected}, got {got}")]
    WrongTupleLength { expected: usize, got: usize },
    #[error("quadratic-form matrix must be symmetric")]
    NotSymmetric,
    #[error("enumeration size 2^{0} exceeds the feasibility bound")]
    TooLarge(usize),
}

/// The binary symmetric matrix attached to a coefficient tuple
/// `(z_0, ..., z_r)`:
/// `A_{z_0} W + sum_i [A_{z_i} W (R^i)^T + R^i W A_{z_i}^T]`.
pub fn dg_matrix(
    ctx: &FieldContext,
    r: usize,
    z_tuple: &[FieldElement],
) -> Result<BitMatrix, CodeError> {
    let m = ctx.m();
    if 2 * r + 1 > m {
        return Err(CodeError::RankParamOutOfRange { r, max: (m - 1) / 2 });
    }
    if z_tuple.len() != r + 1 {
        return Err(CodeError::WrongTupleLength { expected: r + 1, got: z_tuple.len() });
    }
    let w = ctx.trace_gram_matrix();
    let mut p = ctx.mult_matrix(z_tuple[0]).mul(w).unwrap();
    let mut r_pow = ctx.frobenius_matrix().clone();
    for &zi in &z_tuple[1..] {
        let azi = ctx.mult_matrix(zi);
        let left = azi.mul(w).unwrap().mul(&r_pow.transpose()).unwrap();
        let right = r_pow.mul(w).unwrap().mul(&azi.transpose()).unwrap();
        p = p.add(&left).unwrap().add(&right).unwrap();
        r_pow = r_pow.mul(ctx.frobenius_matrix()).unwrap();
    }
    debug_assert!(p.is_symmetric());
    Ok(p)
}

/// The Kerdock matrix `A_z W` (the r = 0 member for a single coefficient).
pub fn kerdock_matrix(ctx: &FieldContext, z: FieldElement) -> BitMatrix {
    dg_matrix(ctx, 0, &[z]).unwrap()
}

/// A length-2^m vector over Z4 with its defining parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z4Codeword {
    pub p: BitMatrix,
    pub w: BitVector,
    pub kappa: u8,
    entries: Vec<u8>,
}

impl Z4Codeword {
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry-wise difference modulo 4.
    pub fn sub(&self, other: &Z4Codeword) -> Vec<u8> {
        assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (4 + a - b) & 3)
            .collect()
    }
}

/// Evaluates `x P x^T` as an integer quadratic form reduced modulo 4:
/// the diagonal contributes each hit once, off-diagonal pairs twice.
pub fn quad_form_mod4(p: &BitMatrix, x_idx: usize, m: usize) -> u8 {
    let mut diag = 0u32;
    let mut cross = 0u32;
    for j in 0..m {
        let xj = (x_idx >> (m - 1 - j)) & 1;
        if xj == 0 {
            continue;
        }
        if p.get(j, j) {
            diag += 1;
        }
        for k in j + 1..m {
            let xk = (x_idx >> (m - 1 - k)) & 1;
            if xk == 1 && p.get(j, k) {
                cross += 1;
            }
        }
    }
    ((diag + 2 * cross) & 3) as u8
}

/// Builds the codeword `[x P x^T + 2 w x^T + kappa]_x`.
pub fn codeword(p: &BitMatrix, w: &BitVector, kappa: u8) -> Result<Z4Codeword, CodeError> {
    if !p.is_symmetric() {
        return Err(CodeError::NotSymmetric);
    }
    let m = p.rows();
    assert_eq!(w.len(), m);
    let n = 1usize << m;
    let w_idx = index_of(w);
    let mut entries = Vec::with_capacity(n);
    for x in 0..n {
        let quad = quad_form_mod4(p, x, m);
        let lin = 2 * ((w_idx & x).count_ones() & 1) as u8;
        entries.push((quad + lin + kappa) & 3);
    }
    Ok(Z4Codeword { p: p.clone(), w: w.clone(), kappa: kappa & 3, entries })
}

/// Lee weight: n1 + 2 n2 + n3 over the symbol counts.
pub fn lee_weight(c: &Z4Codeword) -> usize {
    lee_weight_of(&c.entries)
}

pub fn lee_weight_of(entries: &[u8]) -> usize {
    entries.iter().map(|&e| [0usize, 1, 2, 1][e as usize]).sum()
}

/// Gray map per entry (0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10), concatenated.
pub fn gray_map(c: &Z4Codeword) -> BitVector {
    gray_map_of(&c.entries)
}

pub fn gray_map_of(entries: &[u8]) -> BitVector {
    let mut v = BitVector::zeros(2 * entries.len());
    for (i, &e) in entries.iter().enumerate() {
        let (b0, b1) = match e {
            0 => (false, false),
            1 => (false, true),
            2 => (true, true),
            _ => (true, false),
        };
        v.set(2 * i, b0);
        v.set(2 * i + 1, b1);
    }
    v
}

/// Gray-image Hamming weight distribution of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_symmetric(&self, length: usize) -> bool {
        self.counts.iter().all(|(&w, &c)| self.counts.get(&(length - w)) == Some(&c))
    }

    /// Closed-form distribution of the Gray image of the r = 0 code for odd
    /// m: weights 0 and 2^{m+1} once, 2^m with multiplicity 2^{m+2} - 2,
    /// and 2^m ± 2^{(m-1)/2} with multiplicity 2^{2m+1} - 2^{m+1} each.
    pub fn closed_form(m: usize) -> Option<WeightDistribution> {
        if m % 2 == 0 || m < 3 {
            return None;
        }
        let mid = 1usize << m;
        let dev = 1usize << ((m - 1) / 2);
        let side = (1u64 << (2 * m + 1)) - (1u64 << (m + 1));
        let mut counts = BTreeMap::new();
        counts.insert(0, 1);
        counts.insert(mid - dev, side);
        counts.insert(mid, (1u64 << (m + 2)) - 2);
        counts.insert(mid + dev, side);
        counts.insert(2 * mid, 1);
        Some(WeightDistribution { counts })
    }
}

/// Exponent bound for full enumeration: code size 2^{m(r+1)+m+2}.
pub fn code_size_log2(m: usize, r: usize) -> usize {
    m * (r + 1) + m + 2
}

const ENUMERATION_LOG2_LIMIT: usize = 26;

/// Brute-force enumeration of the full code: all P in the matrix set, all
/// w, all kappa; Gray-image weights tallied. Parallel over P.
pub fn weight_distribution(ctx: &FieldContext, r: usize) -> Result<WeightDistribution, CodeError> {
    let m = ctx.m();
    if 2 * r + 1 > m {
        return Err(CodeError::RankParamOutOfRange { r, max: (m - 1) / 2 });
    }
    let size_log2 = code_size_log2(m, r);
    if size_log2 > ENUMERATION_LOG2_LIMIT {
        return Err(CodeError::TooLarge(size_log2));
    }
    let n = 1usize << m;
    let tuples = 1u64 << (m * (r + 1));

    let counts = (0..tuples)
        .into_par_iter()
        .map(|tuple_idx| {
            let z_tuple: Vec<FieldElement> = (0..=r)
                .map(|i| ctx.element((tuple_idx >> (i * m)) & ((1u64 << m) - 1)))
                .collect();
            let p = dg_matrix(ctx, r, &z_tuple).unwrap();
            // quadratic part once per x, then sweep w and kappa
            let quad: Vec<u8> = (0..n).map(|x| quad_form_mod4(&p, x, m)).collect();
            let mut local: BTreeMap<usize, u64> = BTreeMap::new();
            for w_idx in 0..n {
                // histogram of symbol values for kappa = 0
                let mut hist = [0u64; 4];
                for (x, &q) in quad.iter().enumerate() {
                    let lin = 2 * ((w_idx & x).count_ones() & 1) as u8;
                    hist[((q + lin) & 3) as usize] += 1;
                }
                for kappa in 0..4usize {
                    // shifting by kappa rotates the histogram
                    let h = |v: usize| hist[(4 + v - kappa) % 4];
                    let weight = (h(1) + 2 * h(2) + h(3)) as usize;
                    *local.entry(weight).or_insert(0) += 1;
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut acc, local| {
            for (w, c) in local {
                *acc.entry(w).or_insert(0) += c;
            }
            acc
        });

    Ok(WeightDistribution { counts })
}

/// Empirical rank histogram of the nonzero matrices in the set; reported
/// without assertions for r > 0 (their rank distribution has no closed
/// form here).
pub fn rank_histogram(ctx: &FieldContext, r: usize) -> Result<BTreeMap<usize, u64>, CodeError> {
    let m = ctx.m();
    if 2 * r + 1 > m {
        return Err(CodeError::RankParamOutOfRange { r, max: (m - 1) / 2 });
    }
    if m * (r + 1) > 24 {
        return Err(CodeError::TooLarge(m * (r + 1)));
    }
    let tuples = 1u64 << (m * (r + 1));
    let hist = (1..tuples)
        .into_par_iter()
        .map(|tuple_idx| {
            let z_tuple: Vec<FieldElement> = (0..=r)
                .map(|i| ctx.element((tuple_idx >> (i * m)) & ((1u64 << m) - 1)))
                .collect();
            let p = dg_matrix(ctx, r, &z_tuple).unwrap();
            let mut map = BTreeMap::new();
            map.insert(p.rank(), 1u64);
            map
        })
        .reduce(BTreeMap::new, |mut acc, local| {
            for (w, c) in local {
                *acc.entry(w).or_insert(0) += c;
            }
            acc
        });
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::make_context;
    use crate::pauli::vector_of_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn dg_matrix_zero_tuple() {
        let ctx = make_context(3).unwrap();
        let p = dg_matrix(&ctx, 1, &[ctx.zero(), ctx.zero()]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn kerdock_matrices_nonsingular() {
        for m in 1..=8 {
            let ctx = make_context(m).unwrap();
            for z in ctx.elements().skip(1) {
                let p = kerdock_matrix(&ctx, z);
                assert!(p.is_symmetric());
                assert_eq!(p.rank(), m, "singular Kerdock matrix at m={m}");
            }
        }
    }

    #[test]
    fn kerdock_pairwise_differences_nonsingular() {
        for m in [2, 3, 5, 8] {
            let ctx = make_context(m).unwrap();
            let mats: Vec<BitMatrix> = ctx.elements().map(|z| kerdock_matrix(&ctx, z)).collect();
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    let diff = mats[i].add(&mats[j]).unwrap();
                    assert_eq!(diff.rank(), m);
                }
            }
        }
    }

    #[test]
    fn dg_rank_bound() {
        let ctx = make_context(5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..50 {
            let z0 = ctx.element(rng.random_range(0..32));
            let z1 = ctx.element(rng.random_range(0..32));
            if z0.is_zero() && z1.is_zero() {
                continue;
            }
            let p = dg_matrix(&ctx, 1, &[z0, z1]).unwrap();
            assert!(p.rank() >= 3, "rank {} below bound", p.rank());
        }
    }

    #[test]
    fn dg_set_closed_under_addition() {
        for m in [3, 4] {
            let ctx = make_context(m).unwrap();
            let r = (m - 1) / 2;
            let tuples: Vec<Vec<crate::gf2m::FieldElement>> = (0..1u64 << (m * (r + 1)))
                .map(|idx| {
                    (0..=r).map(|i| ctx.element((idx >> (i * m)) & ((1u64 << m) - 1))).collect()
                })
                .collect();
            for t1 in tuples.iter().take(16) {
                for t2 in tuples.iter().take(16) {
                    let sum_tuple: Vec<_> =
                        t1.iter().zip(t2).map(|(&a, &b)| ctx.add(a, b)).collect();
                    let lhs = dg_matrix(&ctx, r, t1)
                        .unwrap()
                        .add(&dg_matrix(&ctx, r, t2).unwrap())
                        .unwrap();
                    assert_eq!(lhs, dg_matrix(&ctx, r, &sum_tuple).unwrap());
                }
            }
        }
    }

    #[test]
    fn dg_rank_param_validation() {
        let ctx = make_context(3).unwrap();
        assert!(matches!(
            dg_matrix(&ctx, 2, &[ctx.zero(), ctx.zero(), ctx.zero()]),
            Err(CodeError::RankParamOutOfRange { .. })
        ));
    }

    #[test]
    fn codeword_trivial_cases() {
        let p = BitMatrix::zeros(3, 3);
        let w = BitVector::zeros(3);
        let c = codeword(&p, &w, 0).unwrap();
        assert!(c.entries().iter().all(|&e| e == 0));
        assert_eq!(lee_weight(&c), 0);
        assert!(gray_map(&c).is_zero());

        let c2 = codeword(&p, &w, 2).unwrap();
        assert!(c2.entries().iter().all(|&e| e == 2));
        assert_eq!(lee_weight(&c2), 16);
        assert_eq!(gray_map(&c2).weight(), 16); // all-ones Gray image
    }

    #[test]
    fn codeword_rejects_asymmetric() {
        let mut p = BitMatrix::zeros(2, 2);
        p.set(0, 1, true);
        assert!(matches!(
            codeword(&p, &BitVector::zeros(2), 0),
            Err(CodeError::NotSymmetric)
        ));
    }

    #[test]
    fn quad_form_against_direct_lift() {
        // direct integer triple loop as the oracle
        let ctx = make_context(3).unwrap();
        let p = kerdock_matrix(&ctx, ctx.alpha());
        let m = 3;
        for x_idx in 0..8usize {
            let xv = vector_of_index(x_idx, m);
            let mut acc: u32 = 0;
            for j in 0..m {
                for k in 0..m {
                    let pj = u32::from(xv.get(j));
                    let pk = u32::from(xv.get(k));
                    acc += pj * pk * u32::from(p.get(j, k));
                }
            }
            assert_eq!((acc & 3) as u8, quad_form_mod4(&p, x_idx, m));
        }
    }

    #[test]
    fn gray_single_symbols() {
        assert_eq!(gray_map_of(&[0]).to_string(), "00");
        assert_eq!(gray_map_of(&[1]).to_string(), "01");
        assert_eq!(gray_map_of(&[2]).to_string(), "11");
        assert_eq!(gray_map_of(&[3]).to_string(), "10");
    }

    #[test]
    fn lee_weight_equals_gray_weight() {
        let ctx = make_context(4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..1000 {
            let z = ctx.element(rng.random_range(0..16));
            let p = kerdock_matrix(&ctx, z);
            let w = BitVector::from_u64(rng.random_range(0..16), 4);
            let c = codeword(&p, &w, rng.random_range(0..4)).unwrap();
            assert_eq!(lee_weight(&c), gray_map(&c).weight());
        }
    }

    #[test]
    fn gray_isometry_on_differences() {
        // d_L(u, v) = d_H(gray(u), gray(v)) on sampled pairs
        let ctx = make_context(3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(78);
        for _ in 0..200 {
            let c1 = codeword(
                &kerdock_matrix(&ctx, ctx.element(rng.random_range(0..8))),
                &BitVector::from_u64(rng.random_range(0..8), 3),
                rng.random_range(0..4),
            )
            .unwrap();
            let c2 = codeword(
                &kerdock_matrix(&ctx, ctx.element(rng.random_range(0..8))),
                &BitVector::from_u64(rng.random_range(0..8), 3),
                rng.random_range(0..4),
            )
            .unwrap();
            let lee = lee_weight_of(&c1.sub(&c2));
            let mut g1 = gray_map(&c1);
            g1.xor_assign(&gray_map(&c2));
            assert_eq!(lee, g1.weight());
        }
    }

    #[test]
    fn weight_distribution_m3_closed_form() {
        let ctx = make_context(3).unwrap();
        let dist = weight_distribution(&ctx, 0).unwrap();
        let expected = WeightDistribution::closed_form(3).unwrap();
        assert_eq!(dist, expected);
        let counts: Vec<(usize, u64)> = dist.counts.into_iter().collect();
        assert_eq!(counts, vec![(0, 1), (6, 112), (8, 30), (10, 112), (16, 1)]);
    }

    #[test]
    fn weight_distribution_m3_r1_consistency() {
        let ctx = make_context(3).unwrap();
        let dist = weight_distribution(&ctx, 1).unwrap();
        assert_eq!(dist.total(), 1u64 << code_size_log2(3, 1));
        assert!(dist.is_symmetric(16));
    }

    #[test]
    fn weight_distribution_even_m_reported() {
        // no closed-form reference for even m; totals must still match
        let ctx = make_context(4).unwrap();
        let dist = weight_distribution(&ctx, 0).unwrap();
        assert_eq!(dist.total(), 1u64 << code_size_log2(4, 0));
    }

    #[test]
    fn weight_distribution_size_guard() {
        let ctx = make_context(16).unwrap();
        assert!(matches!(weight_distribution(&ctx, 0), Err(CodeError::TooLarge(_))));
    }

    #[test]
    fn rank_histogram_kerdock() {
        let ctx = make_context(3).unwrap();
        let hist = rank_histogram(&ctx, 0).unwrap();
        // all nonzero Kerdock matrices have full rank
        assert_eq!(hist.get(&3), Some(&7));
        assert_eq!(hist.len(), 1);
    }
}
