//! GF(2^m) as binary matrices acting on row vectors.
//!
//! Field elements are row vectors `[z0, ..., z_{m-1}]` standing for
//! `z0 + z1*a + ... + z_{m-1}*a^{m-1}` where `a` is a root of the embedded
//! primitive polynomial. Multiplication by `z` is the matrix `A_z` with
//! `x * A_z = xz`, the Frobenius map is the matrix `R` with `x * R = x^2`,
//! and the trace bilinear form is `Tr(xy) = x W y^T`.

use crate::f2linalg::{BitMatrix, BitVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} out of supported range 1..=32")]
    DegreeOutOfRange(usize),
    #[error("field element belongs to GF(2^{found}), expected GF(2^{expected})")]
    ContextMismatch { expected: usize, found: usize },
    #[error("division by zero in GF(2^m)")]
    DivisionByZero,
}

/// One fixed primitive polynomial per degree: the lexicographically smallest
/// (bit i holds the coefficient of x^i). Verified primitive by the unit tests.
const PRIM_POLYS: [u64; 33] = [
    0, // unused
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x402B,
    0x8003, 0x1002D, 0x20009, 0x40027, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021,
    0x100001B, 0x2000009, 0x4000047, 0x8000027, 0x10000009, 0x20000005, 0x40000053, 0x80000009,
    0x1000000AF,
];

/// Log/antilog tables are only materialized up to this degree.
const TABLE_MAX_M: usize = 20;

/// An element of GF(2^m); bit i of `bits` is the coefficient of a^i.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FieldElement {
    m: u8,
    bits: u64,
}

impl FieldElement {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn degree(&self) -> usize {
        self.m as usize
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn to_vector(&self) -> BitVector {
        BitVector::from_u64(self.bits, self.m as usize)
    }
}

/// Precomputed structure of GF(2^m).
pub struct FieldContext {
    m: usize,
    prim_poly: u64,
    a_mat: BitMatrix,
    w_mat: BitMatrix,
    w_inv: BitMatrix,
    r_mat: BitMatrix,
    r_inv: BitMatrix,
    /// antilog[i] = bits of a^i, for i in 0..2^m-1 (only for m <= TABLE_MAX_M)
    antilog: Vec<u64>,
    /// log[bits] = i with a^i = bits (only for m <= TABLE_MAX_M; log[0] unused)
    log: Vec<u32>,
}

pub fn make_context(m: usize) -> Result<FieldContext, FieldError> {
    if !(1..=32).contains(&m) {
        return Err(FieldError::DegreeOutOfRange(m));
    }
    let prim_poly = PRIM_POLYS[m];

    // Companion matrix of the primitive polynomial: row j is a^{j+1} for
    // j < m-1 and the low coefficients for the last row.
    let mut a_mat = BitMatrix::zeros(m, m);
    for j in 0..m.saturating_sub(1) {
        a_mat.set(j, j + 1, true);
    }
    for c in 0..m {
        if (prim_poly >> c) & 1 == 1 && c < m {
            a_mat.set(m - 1, c, true);
        }
    }
    if m == 1 {
        a_mat.set(0, 0, true);
    }

    let mul = |x: u64, y: u64| raw_mul(x, y, prim_poly, m);
    let alpha_bits: u64 = if m == 1 { 1 } else { 2 };

    // Powers of a up to a^{2m-2} for the Hankel trace matrix.
    let mut pow = vec![1u64; 2 * m];
    for i in 1..2 * m {
        pow[i] = mul(pow[i - 1], alpha_bits);
    }

    let mut w_mat = BitMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            if raw_trace(pow[i + j], prim_poly, m) == 1 {
                w_mat.set(i, j, true);
            }
        }
    }
    let w_inv = w_mat.inverse().expect("trace form is non-degenerate");

    // Frobenius: row j of R is the vector of a^{2j}.
    let mut r_mat = BitMatrix::zeros(m, m);
    for j in 0..m {
        let sq = mul(pow[j], pow[j]);
        for c in 0..m {
            if (sq >> c) & 1 == 1 {
                r_mat.set(j, c, true);
            }
        }
    }
    let r_inv = r_mat.inverse().expect("Frobenius is invertible");

    let (antilog, log) = if m <= TABLE_MAX_M {
        let order = (1usize << m) - 1;
        let mut antilog = vec![0u64; order];
        let mut log = vec![0u32; 1 << m];
        let mut acc = 1u64;
        for (i, slot) in antilog.iter_mut().enumerate() {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = if m == 1 { 1 } else { mul(acc, 2) };
        }
        (antilog, log)
    } else {
        (Vec::new(), Vec::new())
    };

    Ok(FieldContext { m, prim_poly, a_mat, w_mat, w_inv, r_mat, r_inv, antilog, log })
}

/// Carry-less multiply modulo the primitive polynomial.
fn raw_mul(x: u64, y: u64, prim_poly: u64, m: usize) -> u64 {
    let mut r: u64 = 0;
    for i in 0..m {
        if (y >> i) & 1 == 1 {
            r ^= x << i;
        }
    }
    // reduce: degree of r is < 2m - 1 <= 63
    while r != 0 {
        let deg = 63 - r.leading_zeros() as i64;
        if deg < m as i64 {
            break;
        }
        r ^= prim_poly << (deg - m as i64);
    }
    r
}

fn raw_trace(x: u64, prim_poly: u64, m: usize) -> u8 {
    let mut acc = 0u64;
    let mut t = x;
    for _ in 0..m {
        acc ^= t;
        t = raw_mul(t, t, prim_poly, m);
    }
    debug_assert!(acc == 0 || acc == 1, "trace must land in GF(2)");
    (acc & 1) as u8
}

impl FieldContext {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    /// Coefficients of p(x), low degree first, length m+1.
    pub fn prim_poly(&self) -> BitVector {
        BitVector::from_u64(self.prim_poly, self.m + 1)
    }

    pub fn prim_poly_bits(&self) -> u64 {
        self.prim_poly
    }

    pub fn companion_matrix(&self) -> &BitMatrix {
        &self.a_mat
    }

    pub fn trace_gram_matrix(&self) -> &BitMatrix {
        &self.w_mat
    }

    pub fn trace_gram_inverse(&self) -> &BitMatrix {
        &self.w_inv
    }

    pub fn frobenius_matrix(&self) -> &BitMatrix {
        &self.r_mat
    }

    pub fn frobenius_inverse(&self) -> &BitMatrix {
        &self.r_inv
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { m: self.m as u8, bits: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { m: self.m as u8, bits: 1 }
    }

    /// The primitive element a (equal to 1 when m = 1).
    pub fn alpha(&self) -> FieldElement {
        if self.m == 1 {
            self.one()
        } else {
            FieldElement { m: self.m as u8, bits: 2 }
        }
    }

    pub fn element(&self, bits: u64) -> FieldElement {
        assert!(self.m == 64 || bits < (1u64 << self.m), "element out of range");
        FieldElement { m: self.m as u8, bits }
    }

    pub fn from_vector(&self, v: &BitVector) -> Result<FieldElement, FieldError> {
        if v.len() != self.m {
            return Err(FieldError::ContextMismatch { expected: self.m, found: v.len() });
        }
        Ok(FieldElement { m: self.m as u8, bits: v.to_u64() })
    }

    /// All field elements in integer order of their bit patterns.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..(1u64 << self.m)).map(|b| FieldElement { m: self.m as u8, bits: b })
    }

    fn check(&self, x: FieldElement) -> Result<(), FieldError> {
        if x.m as usize != self.m {
            return Err(FieldError::ContextMismatch { expected: self.m, found: x.m as usize });
        }
        Ok(())
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x).unwrap();
        self.check(y).unwrap();
        FieldElement { m: x.m, bits: x.bits ^ y.bits }
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x).unwrap();
        self.check(y).unwrap();
        FieldElement { m: x.m, bits: raw_mul(x.bits, y.bits, self.prim_poly, self.m) }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // x^{2^m - 2}
        Ok(self.pow(x, self.order() as i64 - 1))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e with e taken modulo 2^m - 1 for nonzero x.
    pub fn pow(&self, x: FieldElement, e: i64) -> FieldElement {
        self.check(x).unwrap();
        if x.is_zero() {
            assert!(e > 0 || e == 0, "cannot raise zero to a non-positive power");
            return if e == 0 { self.one() } else { self.zero() };
        }
        let order = self.order() as i64;
        let mut e = e % order;
        if e < 0 {
            e += order;
        }
        let mut base = x;
        let mut acc = self.one();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self, x: FieldElement) -> FieldElement {
        self.check(x).unwrap();
        let v = self.r_inv.vec_mul(&x.to_vector()).unwrap();
        self.from_vector(&v).unwrap()
    }

    /// x^{2^i}; negative i applies the inverse Frobenius.
    pub fn frobenius(&self, x: FieldElement, i: i64) -> FieldElement {
        self.check(x).unwrap();
        let mut out = x;
        let steps = i.rem_euclid(self.m as i64);
        for _ in 0..steps {
            out = self.square(out);
        }
        out
    }

    /// Tr(x) = x + x^2 + ... + x^{2^{m-1}}.
    pub fn trace(&self, x: FieldElement) -> u8 {
        self.check(x).unwrap();
        raw_trace(x.bits, self.prim_poly, self.m)
    }

    /// Trace computed through the bilinear form: Tr(x) = x W e0^T where e0 = 1.
    pub fn trace_via_form(&self, x: FieldElement) -> u8 {
        let xv = x.to_vector();
        let xw = self.w_mat.vec_mul(&xv).unwrap();
        xw.dot(&self.one().to_vector())
    }

    pub fn log(&self, x: FieldElement) -> Option<u64> {
        self.check(x).unwrap();
        if x.is_zero() {
            return None;
        }
        if !self.log.is_empty() {
            return Some(self.log[x.bits as usize] as u64);
        }
        // No table: walk the powers (only hit for large m in diagnostics).
        let mut acc = self.one();
        for i in 0..self.order() {
            if acc == x {
                return Some(i);
            }
            acc = self.mul(acc, self.alpha());
        }
        unreachable!("nonzero element must be a power of the primitive element")
    }

    pub fn antilog(&self, i: u64) -> FieldElement {
        if !self.antilog.is_empty() {
            return FieldElement { m: self.m as u8, bits: self.antilog[(i % self.order()) as usize] };
        }
        self.pow(self.alpha(), (i % self.order()) as i64)
    }

    /// The multiplication matrix A_z with x * A_z = xz; A_0 = 0.
    pub fn mult_matrix(&self, z: FieldElement) -> BitMatrix {
        self.check(z).unwrap();
        let mut mat = BitMatrix::zeros(self.m, self.m);
        // row j = vector of a^j * z
        let mut basis = self.one();
        for j in 0..self.m {
            let prod = self.mul(basis, z);
            for c in 0..self.m {
                if (prod.bits >> c) & 1 == 1 {
                    mat.set(j, c, true);
                }
            }
            basis = self.mul(basis, self.alpha());
        }
        mat
    }

    /// Parses "0", "1", "a", or "a^K" into an element.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        match s {
            "0" => return Ok(self.zero()),
            "1" => return Ok(self.one()),
            "a" => return Ok(self.alpha()),
            _ => {}
        }
        if let Some(exp) = s.strip_prefix("a^") {
            let k: u64 = exp
                .parse()
                .map_err(|_| FieldError::ContextMismatch { expected: self.m, found: 0 })?;
            return Ok(self.antilog(k));
        }
        Err(FieldError::ContextMismatch { expected: self.m, found: 0 })
    }

    /// Renders an element as "0", "1", or "a^K".
    pub fn format_element(&self, x: FieldElement) -> String {
        if x.is_zero() {
            "0".into()
        } else if x.bits == 1 {
            "1".into()
        } else {
            format!("a^{}", self.log(x).unwrap())
        }
    }
}

/// Outcome of checking the field-matrix identities relating A_z, W and R.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub violations: u64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FieldIdentityReport {
    pub m: usize,
    pub checks: Vec<IdentityCheck>,
}

impl FieldIdentityReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }
}

/// Exhaustively verifies the multiplicative/additive/trace/Frobenius matrix
/// identities over the whole field. Cost grows as 4^m; intended for m <= 8.
pub fn check_field_identities(ctx: &FieldContext) -> FieldIdentityReport {
    check_field_identities_with(ctx, ctx.trace_gram_matrix())
}

/// Same as [`check_field_identities`] but with an arbitrary candidate for W,
/// so a corrupted Gram matrix is detectable.
pub fn check_field_identities_with(ctx: &FieldContext, w: &BitMatrix) -> FieldIdentityReport {
    let m = ctx.m();
    let w_inv = w.inverse().ok();
    let mut mult = 0u64;
    let mut addv = 0u64;
    let mut gram = 0u64;
    let mut frob_mult = 0u64;
    let mut frob_gram = 0u64;

    let elems: Vec<FieldElement> = ctx.elements().collect();
    let mats: Vec<BitMatrix> = elems.iter().map(|&z| ctx.mult_matrix(z)).collect();

    for (zi, &z) in elems.iter().enumerate() {
        for (xi, &x) in elems.iter().enumerate() {
            let axz = &mats[ctx.mul(x, z).bits() as usize];
            let prod = mats[zi].mul(&mats[xi]).unwrap();
            let prod_rev = mats[xi].mul(&mats[zi]).unwrap();
            if &prod != axz || &prod_rev != axz {
                mult += 1;
            }
            let sum = mats[xi].add(&mats[zi]).unwrap();
            if sum != mats[ctx.add(x, z).bits() as usize] {
                addv += 1;
            }
        }
        // A_z W = W A_z^T
        let lhs = mats[zi].mul(w).unwrap();
        let rhs = w.mul(&mats[zi].transpose()).unwrap();
        if lhs != rhs {
            gram += 1;
        }
    }

    // Frobenius identities for all i in [0, m) and all x.
    let r = ctx.frobenius_matrix();
    let r_inv = ctx.frobenius_inverse();
    let mut r_pow = BitMatrix::identity(m);
    let mut r_inv_pow = BitMatrix::identity(m);
    for _i in 0..m {
        // R^i W = W (R^{-i})^T  and  W^{-1} R^{-i} W = (R^i)^T
        let lhs = r_pow.mul(w).unwrap();
        let rhs = w.mul(&r_inv_pow.transpose()).unwrap();
        if lhs != rhs {
            frob_gram += 1;
        }
        if let Some(wi) = &w_inv {
            let lhs2 = wi.mul(&r_inv_pow).unwrap().mul(w).unwrap();
            if lhs2 != r_pow.transpose() {
                frob_gram += 1;
            }
        } else {
            frob_gram += 1;
        }
        for &x in &elems {
            // R^i A_{x^{2^i}} = A_x R^i  (equivalently R^i A_x^{2^i} = A_x R^i)
            let ax = &mats[x.bits() as usize];
            let ax_2i = &mats[ctx.frobenius(x, _i as i64).bits() as usize];
            let lhs = r_pow.mul(ax_2i).unwrap();
            let rhs = ax.mul(&r_pow).unwrap();
            if lhs != rhs {
                frob_mult += 1;
            }
            if !x.is_zero() {
                // R^{-i} A_x^{-2} = A_x^{-2^{1+i}} R^{-i}, i.e. A_{(x^{-2})^{2^i}} R^{-i}
                let ax_inv2 = &mats[ctx.pow(x, -2).bits() as usize];
                let lhs = r_inv_pow.mul(ax_inv2).unwrap();
                let exp_elem = ctx.frobenius(ctx.pow(x, -2), _i as i64);
                let rhs = mats[exp_elem.bits() as usize].mul(&r_inv_pow).unwrap();
                if lhs != rhs {
                    frob_mult += 1;
                }
            }
        }
        r_pow = r_pow.mul(r).unwrap();
        r_inv_pow = r_inv_pow.mul(r_inv).unwrap();
    }

    FieldIdentityReport {
        m,
        checks: vec![
            IdentityCheck { name: "mult_matrix_product", violations: mult },
            IdentityCheck { name: "mult_matrix_sum", violations: addv },
            IdentityCheck { name: "gram_symmetry", violations: gram },
            IdentityCheck { name: "frobenius_mult", violations: frob_mult },
            IdentityCheck { name: "frobenius_gram", violations: frob_gram },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn factorize(mut n: u64) -> Vec<u64> {
        let mut fs = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                fs.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            fs.push(n);
        }
        fs
    }

    fn poly_modpow(mut base: u64, mut e: u64, p: u64, m: usize) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = raw_mul(acc, base, p, m);
            }
            base = raw_mul(base, base, p, m);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(p: u64, m: usize) -> bool {
        if p & 1 == 0 || (p >> m) != 1 {
            return false;
        }
        if m == 1 {
            return p == 0b11;
        }
        let order = (1u64 << m) - 1;
        if poly_modpow(2, order, p, m) != 1 {
            return false;
        }
        factorize(order).iter().all(|&q| poly_modpow(2, order / q, p, m) != 1)
    }

    #[test]
    fn table_entries_are_smallest_primitive() {
        for m in 1..=32usize {
            let p = PRIM_POLYS[m];
            assert!(is_primitive(p, m), "table entry for m={m} not primitive");
            for cand in (1u64 << m)..p {
                assert!(!is_primitive(cand, m), "smaller primitive 0x{cand:x} exists for m={m}");
            }
        }
    }

    #[test]
    fn context_m1() {
        let ctx = make_context(1).unwrap();
        assert_eq!(ctx.companion_matrix(), &BitMatrix::identity(1));
        assert_eq!(ctx.trace_gram_matrix(), &BitMatrix::identity(1));
        assert!(make_context(0).is_err());
        assert!(make_context(33).is_err());
    }

    #[test]
    fn context_m4_reference_matrices() {
        let ctx = make_context(4).unwrap();
        assert_eq!(ctx.prim_poly_bits(), 0b10011); // x^4 + x + 1
        let a = BitMatrix::parse_rows("0100\n0010\n0001\n1100").unwrap();
        let w = BitMatrix::parse_rows("0001\n0010\n0100\n1001").unwrap();
        let w_inv = BitMatrix::parse_rows("1001\n0010\n0100\n1000").unwrap();
        let r = BitMatrix::parse_rows("1000\n0010\n1100\n0011").unwrap();
        assert_eq!(ctx.companion_matrix(), &a);
        assert_eq!(ctx.trace_gram_matrix(), &w);
        assert_eq!(ctx.trace_gram_inverse(), &w_inv);
        assert_eq!(ctx.frobenius_matrix(), &r);
    }

    #[test]
    fn context_m3_gram_by_hand() {
        // p = x^3 + x + 1: traces of a^0..a^4 are 1,0,0,1,0.
        let ctx = make_context(3).unwrap();
        let w = BitMatrix::parse_rows("100\n001\n010").unwrap();
        assert_eq!(ctx.trace_gram_matrix(), &w);
        // Hankel + symmetric + nonsingular
        assert!(ctx.trace_gram_matrix().is_symmetric());
        assert_eq!(ctx.trace_gram_matrix().rank(), 3);
    }

    #[test]
    fn mult_matrix_basics() {
        let ctx = make_context(4).unwrap();
        assert!(ctx.mult_matrix(ctx.zero()).is_zero());
        assert!(ctx.mult_matrix(ctx.one()).is_identity());
        assert_eq!(&ctx.mult_matrix(ctx.alpha()), ctx.companion_matrix());
        // x * A_z = xz for all pairs
        for x in ctx.elements() {
            for z in ctx.elements() {
                let via_mat = ctx.mult_matrix(z).vec_mul(&x.to_vector()).unwrap();
                assert_eq!(via_mat, ctx.mul(x, z).to_vector());
            }
        }
    }

    #[test]
    fn trace_values() {
        let ctx = make_context(3).unwrap();
        assert_eq!(ctx.trace(ctx.zero()), 0);
        assert_eq!(ctx.trace(ctx.one()), 1); // m odd
        assert_eq!(ctx.trace(ctx.alpha()), 0); // a + a^2 + a^4 = 0 for x^3+x+1
        for x in ctx.elements() {
            assert_eq!(ctx.trace(x), ctx.trace_via_form(x));
        }
    }

    #[test]
    fn trace_bilinear_form() {
        for m in 1..=5 {
            let ctx = make_context(m).unwrap();
            let w = ctx.trace_gram_matrix();
            for x in ctx.elements() {
                for y in ctx.elements() {
                    let lhs = ctx.trace(ctx.mul(x, y));
                    let xw = w.vec_mul(&x.to_vector()).unwrap();
                    assert_eq!(lhs, xw.dot(&y.to_vector()));
                }
            }
        }
    }

    #[test]
    fn frobenius_matrix_squares() {
        for m in [2, 3, 4, 6] {
            let ctx = make_context(m).unwrap();
            for x in ctx.elements() {
                let via_mat = ctx.frobenius_matrix().vec_mul(&x.to_vector()).unwrap();
                assert_eq!(via_mat, ctx.square(x).to_vector());
                assert_eq!(ctx.sqrt(ctx.square(x)), x);
            }
        }
    }

    #[test]
    fn squaring_is_a_bijection() {
        for m in 1..=6 {
            let ctx = make_context(m).unwrap();
            let squares: std::collections::HashSet<u64> =
                ctx.elements().map(|x| ctx.square(x).bits()).collect();
            assert_eq!(squares.len(), 1 << m);
        }
    }

    #[test]
    fn companion_matrix_has_full_order() {
        for m in 1..=6 {
            let ctx = make_context(m).unwrap();
            let order = ctx.order();
            let a = ctx.companion_matrix();
            let mut acc = BitMatrix::identity(m);
            for k in 1..=order {
                acc = acc.mul(a).unwrap();
                if k < order {
                    assert!(!acc.is_identity(), "A^{k} = I before full order at m={m}");
                }
            }
            assert!(acc.is_identity());
        }
    }

    #[test]
    fn field_inverse_and_pow() {
        let ctx = make_context(5).unwrap();
        for x in ctx.elements().skip(1) {
            let inv = ctx.inv(x).unwrap();
            assert_eq!(ctx.mul(x, inv), ctx.one());
        }
        assert!(ctx.inv(ctx.zero()).is_err());
        let a = ctx.alpha();
        assert_eq!(ctx.pow(a, 31), ctx.one());
        assert_eq!(ctx.pow(a, -1), ctx.inv(a).unwrap());
    }

    #[test]
    fn log_antilog_roundtrip() {
        let ctx = make_context(6).unwrap();
        for i in 0..ctx.order() {
            assert_eq!(ctx.log(ctx.antilog(i)), Some(i));
        }
        assert_eq!(ctx.log(ctx.zero()), None);
    }

    #[test]
    fn identities_pass_m3_m4() {
        for m in [3, 4] {
            let ctx = make_context(m).unwrap();
            let report = check_field_identities(&ctx);
            assert!(report.pass(), "violations at m={m}: {:?}", report.checks);
        }
    }

    #[test]
    fn identities_catch_corrupted_gram() {
        let ctx = make_context(3).unwrap();
        let mut bad_w = ctx.trace_gram_matrix().clone();
        bad_w.set(0, 1, !bad_w.get(0, 1));
        let report = check_field_identities_with(&ctx, &bad_w);
        let gram = report.checks.iter().find(|c| c.name == "gram_symmetry").unwrap();
        assert!(gram.violations > 0);
    }

    #[test]
    fn element_parsing() {
        let ctx = make_context(4).unwrap();
        assert_eq!(ctx.parse_element("0").unwrap(), ctx.zero());
        assert_eq!(ctx.parse_element("a^3").unwrap(), ctx.pow(ctx.alpha(), 3));
        assert_eq!(ctx.format_element(ctx.pow(ctx.alpha(), 7)), "a^7");
        let v = BitVector::from_str("1100").unwrap();
        assert_eq!(ctx.from_vector(&v).unwrap().bits(), 0b0011);
    }
}
