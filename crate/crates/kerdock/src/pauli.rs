//! Heisenberg-Weyl group elements as binary labels with a quaternary phase.
//!
//! A label `(a, b, k)` stands for `i^k E(a, b)` where `E(a, b)` is the
//! Hermitian form `i^{a b^T} X^{a_1}Z^{b_1} (x) ... (x) X^{a_m}Z^{b_m}`
//! (the dot product `a b^T` read as an integer modulo 4). Hermitian elements
//! carry phase exponent 0 or 2. For small m a dense realization over exact
//! scaled Gaussian integers serves as the verification oracle.

use std::fmt;
use std::str::FromStr;

use crate::f2linalg::{BitMatrix, BitVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("dense realization limited to m <= {limit}, got {m}")]
    TooManyQubits { m: usize, limit: usize },
    #[error("generators must be Hermitian (phase exponent 0 or 2)")]
    NotHermitian,
    #[error("generators do not commute")]
    NonCommuting,
    #[error("generators are dependent")]
    DependentGenerators,
    #[error("parse error: {0}")]
    Parse(String),
}

/// `i^{phase_exp} E(a, b)` on m qubits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliLabel {
    a: BitVector,
    b: BitVector,
    phase_exp: u8,
}

/// Symplectic inner product of two length-2m vectors `[a|b]`, `[a'|b']`:
/// `a b'^T + b a'^T`. Zero exactly when the operators commute.
pub fn symplectic_inner(u: &BitVector, v: &BitVector) -> u8 {
    assert_eq!(u.len(), v.len(), "symplectic_inner length mismatch");
    assert!(u.len() % 2 == 0, "expected concatenated [a|b] vectors");
    let m = u.len() / 2;
    let (ua, ub) = (u.slice(0, m), u.slice(m, m));
    let (va, vb) = (v.slice(0, m), v.slice(m, m));
    ua.dot(&vb) ^ ub.dot(&va)
}

impl PauliLabel {
    pub fn new(a: BitVector, b: BitVector, phase_exp: u8) -> Self {
        assert_eq!(a.len(), b.len(), "a and b must have equal length");
        PauliLabel { a, b, phase_exp: phase_exp & 3 }
    }

    pub fn identity(m: usize) -> Self {
        PauliLabel { a: BitVector::zeros(m), b: BitVector::zeros(m), phase_exp: 0 }
    }

    /// Single X_j factor (0-based qubit index).
    pub fn x(m: usize, j: usize) -> Self {
        let mut a = BitVector::zeros(m);
        a.set(j, true);
        PauliLabel::new(a, BitVector::zeros(m), 0)
    }

    pub fn z(m: usize, j: usize) -> Self {
        let mut b = BitVector::zeros(m);
        b.set(j, true);
        PauliLabel::new(BitVector::zeros(m), b, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &BitVector {
        &self.a
    }

    pub fn b(&self) -> &BitVector {
        &self.b
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_exp % 2 == 0
    }

    /// Sign of a Hermitian label: +1 or -1.
    pub fn sign(&self) -> i8 {
        assert!(self.is_hermitian());
        if self.phase_exp == 0 {
            1
        } else {
            -1
        }
    }

    pub fn negate(&self) -> Self {
        PauliLabel { a: self.a.clone(), b: self.b.clone(), phase_exp: (self.phase_exp + 2) & 3 }
    }

    pub fn mul_phase(&self, k: u8) -> Self {
        PauliLabel { a: self.a.clone(), b: self.b.clone(), phase_exp: (self.phase_exp + k) & 3 }
    }

    /// The binary representation `[a | b]`, forgetting the phase.
    pub fn gamma(&self) -> BitVector {
        self.a.concat(&self.b)
    }

    pub fn from_gamma(v: &BitVector, phase_exp: u8) -> Self {
        assert!(v.len() % 2 == 0);
        let m = v.len() / 2;
        PauliLabel::new(v.slice(0, m), v.slice(m, m), phase_exp)
    }

    pub fn is_identity_class(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn commutes_with(&self, other: &PauliLabel) -> bool {
        symplectic_inner(&self.gamma(), &other.gamma()) == 0
    }

    /// Exact product `self * other` with full phase bookkeeping.
    pub fn multiply(&self, other: &PauliLabel) -> Result<PauliLabel, PauliError> {
        let m = self.num_qubits();
        if other.num_qubits() != m {
            return Err(PauliError::QubitMismatch(m, other.num_qubits()));
        }
        // E(a,b) E(a',b') = i^{ab^T + a'b'^T + 2 a'b^T - a''b''^T} E(a'', b'')
        // with a'' = a + a', b'' = b + b' and dot products read as integers.
        let mut a2 = self.a.clone();
        a2.xor_assign(&other.a);
        let mut b2 = self.b.clone();
        b2.xor_assign(&other.b);
        let phase = self.phase_exp as i32
            + other.phase_exp as i32
            + self.a.overlap(&self.b) as i32
            + other.a.overlap(&other.b) as i32
            + 2 * other.a.overlap(&self.b) as i32
            - a2.overlap(&b2) as i32;
        Ok(PauliLabel::new(a2, b2, phase.rem_euclid(4) as u8))
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}E({}|{})", self.a, self.b)
    }
}

impl FromStr for PauliLabel {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, PauliError> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1u8, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0u8, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2u8, r)
        } else {
            (0u8, s)
        };
        let body = rest
            .strip_prefix("E(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| PauliError::Parse(format!("expected E(a|b) in '{s}'")))?;
        let (a_str, b_str) = body
            .split_once('|')
            .ok_or_else(|| PauliError::Parse("missing '|' separator".into()))?;
        let a = BitVector::from_str(a_str).map_err(|e| PauliError::Parse(e.to_string()))?;
        let b = BitVector::from_str(b_str).map_err(|e| PauliError::Parse(e.to_string()))?;
        if a.len() != b.len() {
            return Err(PauliError::Parse("a and b lengths differ".into()));
        }
        Ok(PauliLabel::new(a, b, phase))
    }
}

pub const DENSE_QUBIT_LIMIT: usize = 10;

/// Dense operator with entries `(re + i*im) / sqrt(2)^scale`, kept exact.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    n: usize,
    scale: u32,
    re: Vec<i64>,
    im: Vec<i64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Self {
        DenseOperator { n, scale: 0, re: vec![0; n * n], im: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zeros(n);
        for i in 0..n {
            op.re[i * n + i] = 1;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn bump_scale(&mut self, extra: u32) {
        self.scale += extra;
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> (i64, i64) {
        (self.re[r * self.n + c], self.im[r * self.n + c])
    }

    #[inline]
    pub fn set_entry(&mut self, r: usize, c: usize, re: i64, im: i64) {
        self.re[r * self.n + c] = re;
        self.im[r * self.n + c] = im;
    }

    pub fn row_mut(&mut self, r: usize) -> (&mut [i64], &mut [i64]) {
        let n = self.n;
        (&mut self.re[r * n..(r + 1) * n], &mut self.im[r * n..(r + 1) * n])
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let denom = 2f64.powf(self.scale as f64 / 2.0);
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| Complex64::new(r as f64 / denom, i as f64 / denom))
            .collect()
    }

    /// Canonical form: strip common factors of 2 (each lowers scale by 2).
    pub fn normalize(&mut self) {
        if self.re.iter().all(|&x| x == 0) && self.im.iter().all(|&x| x == 0) {
            self.scale = 0;
            return;
        }
        while self.scale >= 2
            && self.re.iter().all(|&x| x % 2 == 0)
            && self.im.iter().all(|&x| x % 2 == 0)
        {
            for x in self.re.iter_mut().chain(self.im.iter_mut()) {
                *x /= 2;
            }
            self.scale -= 2;
        }
    }

    pub fn equals(&self, other: &DenseOperator) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        a.normalize();
        b.normalize();
        a.scale == b.scale && a.re == b.re && a.im == b.im
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseOperator::zeros(n);
        out.scale = self.scale + other.scale;
        for r in 0..n {
            for k in 0..n {
                let (ar, ai) = self.entry(r, k);
                if ar == 0 && ai == 0 {
                    continue;
                }
                for c in 0..n {
                    let (br, bi) = other.entry(k, c);
                    if br == 0 && bi == 0 {
                        continue;
                    }
                    out.re[r * n + c] += ar * br - ai * bi;
                    out.im[r * n + c] += ar * bi + ai * br;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n, other.n);
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.scale < b.scale {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = a.scale - b.scale;
        assert!(diff % 2 == 0, "cannot add operators with incompatible scales");
        let factor = 1i64 << (diff / 2);
        for x in b.re.iter_mut().chain(b.im.iter_mut()) {
            *x *= factor;
        }
        let mut out = a;
        for (x, y) in out.re.iter_mut().zip(&b.re) {
            *x += y;
        }
        for (x, y) in out.im.iter_mut().zip(&b.im) {
            *x += y;
        }
        out
    }

    pub fn negate(&self) -> DenseOperator {
        let mut out = self.clone();
        for x in out.re.iter_mut().chain(out.im.iter_mut()) {
            *x = -*x;
        }
        out
    }

    /// Multiplies by i^k.
    pub fn mul_i_pow(&self, k: u8) -> DenseOperator {
        let mut out = self.clone();
        match k & 3 {
            0 => {}
            1 => {
                std::mem::swap(&mut out.re, &mut out.im);
                for x in out.re.iter_mut() {
                    *x = -*x;
                }
            }
            2 => out = out.negate(),
            _ => {
                std::mem::swap(&mut out.re, &mut out.im);
                for x in out.im.iter_mut() {
                    *x = -*x;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.n;
        let mut out = DenseOperator::zeros(n);
        out.scale = self.scale;
        for r in 0..n {
            for c in 0..n {
                let (re, im) = self.entry(r, c);
                out.set_entry(c, r, re, -im);
            }
        }
        out
    }

    /// Exact trace as a Gaussian integer over the common denominator.
    pub fn trace_raw(&self) -> (i64, i64) {
        let mut re = 0;
        let mut im = 0;
        for i in 0..self.n {
            let (r, m) = self.entry(i, i);
            re += r;
            im += m;
        }
        (re, im)
    }

    pub fn is_hermitian(&self) -> bool {
        for r in 0..self.n {
            for c in 0..self.n {
                let (ar, ai) = self.entry(r, c);
                let (br, bi) = self.entry(c, r);
                if ar != br || ai != -bi {
                    return false;
                }
            }
        }
        true
    }
}

/// Maps a bit vector to its coordinate index: the first component is the
/// most significant bit, matching the Kronecker order of qubit factors.
pub fn index_of(v: &BitVector) -> usize {
    let m = v.len();
    let mut idx = 0usize;
    for j in 0..m {
        if v.get(j) {
            idx |= 1 << (m - 1 - j);
        }
    }
    idx
}

pub fn vector_of_index(idx: usize, m: usize) -> BitVector {
    let mut v = BitVector::zeros(m);
    for j in 0..m {
        if (idx >> (m - 1 - j)) & 1 == 1 {
            v.set(j, true);
        }
    }
    v
}

/// Dense realization of `i^k E(a,b)`; exact, entries in {0, ±1, ±i}.
pub fn realize_dense(p: &PauliLabel) -> Result<DenseOperator, PauliError> {
    let m = p.num_qubits();
    if m > DENSE_QUBIT_LIMIT {
        return Err(PauliError::TooManyQubits { m, limit: DENSE_QUBIT_LIMIT });
    }
    let n = 1usize << m;
    let a_idx = index_of(&p.a);
    let b_idx = index_of(&p.b);
    let mut op = DenseOperator::zeros(n);
    let base_phase = (p.phase_exp as u32 + p.a.overlap(&p.b) as u32) & 3;
    for c in 0..n {
        // D(a,b) e_c = (-1)^{b c^T} e_{c+a}
        let sign = (b_idx & c).count_ones() & 1;
        let phase = (base_phase + 2 * sign) & 3;
        let r = c ^ a_idx;
        match phase {
            0 => op.set_entry(r, c, 1, 0),
            1 => op.set_entry(r, c, 0, 1),
            2 => op.set_entry(r, c, -1, 0),
            _ => op.set_entry(r, c, 0, -1),
        }
    }
    Ok(op)
}

pub const PROJECTOR_QUBIT_LIMIT: usize = 8;

/// Projector onto the joint fixed space of signed commuting generators:
/// the product of `(I + s_i E_i) / 2` over the generator list.
pub fn stabilizer_projector(gens: &[PauliLabel]) -> Result<DenseOperator, PauliError> {
    assert!(!gens.is_empty());
    let m = gens[0].num_qubits();
    if m > PROJECTOR_QUBIT_LIMIT {
        return Err(PauliError::TooManyQubits { m, limit: PROJECTOR_QUBIT_LIMIT });
    }
    for g in gens {
        if g.num_qubits() != m {
            return Err(PauliError::QubitMismatch(m, g.num_qubits()));
        }
        if !g.is_hermitian() {
            return Err(PauliError::NotHermitian);
        }
    }
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            if !g.commutes_with(h) {
                return Err(PauliError::NonCommuting);
            }
        }
    }
    let gamma_rows: Vec<BitVector> = gens.iter().map(|g| g.gamma()).collect();
    if BitMatrix::from_rows(&gamma_rows).rank() != gens.len() {
        return Err(PauliError::DependentGenerators);
    }

    let n = 1usize << m;
    let mut acc = DenseOperator::identity(n);
    for g in gens {
        let e = realize_dense(&PauliLabel::new(g.a.clone(), g.b.clone(), 0))?;
        let term = if g.sign() > 0 {
            DenseOperator::identity(n).add(&e)
        } else {
            DenseOperator::identity(n).add(&e.negate())
        };
        acc = acc.mul(&term);
    }
    acc.scale += 2 * gens.len() as u32; // divide by 2^k
    acc.normalize();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn label(a: &str, b: &str, k: u8) -> PauliLabel {
        PauliLabel::new(a.parse().unwrap(), b.parse().unwrap(), k)
    }

    fn random_label(m: usize, rng: &mut impl Rng) -> PauliLabel {
        let a = BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>());
        let b = BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>());
        PauliLabel::new(a, b, rng.random_range(0..4))
    }

    fn gamma_from_bits(bits: u32, len: usize) -> BitVector {
        BitVector::from_bools(&(0..len).map(|i| (bits >> i) & 1 == 1).collect::<Vec<_>>())
    }

    #[test]
    fn symplectic_inner_basics() {
        let x = "10".parse::<BitVector>().unwrap(); // m=1: [a|b] = [1|0]
        let z = "01".parse::<BitVector>().unwrap();
        assert_eq!(symplectic_inner(&x, &z), 1); // X and Z anticommute
        assert_eq!(symplectic_inner(&x, &x), 0);
        assert_eq!(symplectic_inner(&z, &z), 0);
    }

    #[test]
    fn symplectic_inner_matches_dense_commutators_m2() {
        for u_bits in 0..16u32 {
            for v_bits in 0..16u32 {
                let u = gamma_from_bits(u_bits, 4);
                let v = gamma_from_bits(v_bits, 4);
                let p = PauliLabel::from_gamma(&u, 0);
                let q = PauliLabel::from_gamma(&v, 0);
                let pq = realize_dense(&p).unwrap().mul(&realize_dense(&q).unwrap());
                let qp = realize_dense(&q).unwrap().mul(&realize_dense(&p).unwrap());
                let commute = pq.equals(&qp);
                assert_eq!(commute, symplectic_inner(&u, &v) == 0, "u={u_bits:04b} v={v_bits:04b}");
            }
        }
    }

    #[test]
    fn realize_y_from_xz() {
        // E(1,1) = i X Z = Y
        let y = realize_dense(&label("1", "1", 0)).unwrap();
        assert_eq!(y.entry(0, 1), (0, -1));
        assert_eq!(y.entry(1, 0), (0, 1));
        assert_eq!(y.entry(0, 0), (0, 0));
        assert!(y.is_hermitian());
    }

    #[test]
    fn realize_identity() {
        let id = realize_dense(&PauliLabel::identity(2)).unwrap();
        assert!(id.equals(&DenseOperator::identity(4)));
    }

    #[test]
    fn hermitian_squares_to_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..40 {
            let m = rng.random_range(1..=3);
            let p = random_label(m, &mut rng);
            let p = PauliLabel::new(p.a().clone(), p.b().clone(), if rng.random() { 0 } else { 2 });
            let sq = p.multiply(&p).unwrap();
            assert!(sq.is_identity_class());
            assert_eq!(sq.phase_exp(), 0);
        }
    }

    #[test]
    fn multiply_identity_is_neutral() {
        let q = label("101", "011", 3);
        let id = PauliLabel::identity(3);
        assert_eq!(id.multiply(&q).unwrap(), q);
        assert_eq!(q.multiply(&id).unwrap(), q);
    }

    #[test]
    fn multiply_matches_dense_exhaustive_m2() {
        for pa in 0..64u32 {
            for qa in 0..64u32 {
                let p = PauliLabel::from_gamma(&gamma_from_bits(pa & 15, 4), (pa >> 4) as u8);
                let q = PauliLabel::from_gamma(&gamma_from_bits(qa & 15, 4), (qa >> 4) as u8);
                let prod = p.multiply(&q).unwrap();
                let dense_prod = realize_dense(&p).unwrap().mul(&realize_dense(&q).unwrap());
                assert!(
                    realize_dense(&prod).unwrap().equals(&dense_prod),
                    "p={p} q={q} prod={prod}"
                );
            }
        }
    }

    #[test]
    fn multiply_matches_dense_random_m3_to_m5() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..200 {
            let m = rng.random_range(3..=5);
            let p = random_label(m, &mut rng);
            let q = random_label(m, &mut rng);
            let prod = p.multiply(&q).unwrap();
            let dense_prod = realize_dense(&p).unwrap().mul(&realize_dense(&q).unwrap());
            assert!(realize_dense(&prod).unwrap().equals(&dense_prod));
        }
    }

    #[test]
    fn gamma_is_a_homomorphism() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..100 {
            let m = rng.random_range(1..=6);
            let p = random_label(m, &mut rng);
            let q = random_label(m, &mut rng);
            let mut expected = p.gamma();
            expected.xor_assign(&q.gamma());
            assert_eq!(p.multiply(&q).unwrap().gamma(), expected);
        }
    }

    #[test]
    fn projector_single_z() {
        // +Z on one qubit projects onto e_0
        let p = stabilizer_projector(&[label("0", "1", 0)]).unwrap();
        assert!(p.is_hermitian());
        let mut expected = DenseOperator::zeros(2);
        expected.set_entry(0, 0, 1, 0);
        assert!(p.equals(&expected));
    }

    #[test]
    fn projector_rank_and_idempotence() {
        let gens = [label("10", "01", 0), label("01", "10", 2)];
        let p = stabilizer_projector(&gens).unwrap();
        // rank-1 projector: trace 1, idempotent, Hermitian
        let mut q = p.clone();
        q.normalize();
        assert_eq!(q.scale(), 0);
        assert_eq!(q.trace_raw(), (1, 0));
        assert!(p.mul(&p).equals(&p));
        assert!(p.is_hermitian());
    }

    #[test]
    fn projectors_resolve_identity() {
        let gens = [label("10", "01", 0), label("01", "10", 0)];
        let n = 4;
        let mut acc = DenseOperator::zeros(n);
        for signs in 0..4u8 {
            let signed: Vec<PauliLabel> = gens
                .iter()
                .enumerate()
                .map(|(i, g)| if (signs >> i) & 1 == 1 { g.negate() } else { g.clone() })
                .collect();
            acc = acc.add(&stabilizer_projector(&signed).unwrap());
        }
        assert!(acc.equals(&DenseOperator::identity(n)));
    }

    #[test]
    fn projector_rejects_bad_generators() {
        assert!(matches!(
            stabilizer_projector(&[label("1", "0", 0), label("0", "1", 0)]),
            Err(PauliError::NonCommuting)
        ));
        assert!(matches!(
            stabilizer_projector(&[label("10", "00", 0), label("10", "00", 2)]),
            Err(PauliError::DependentGenerators)
        ));
        assert!(matches!(
            stabilizer_projector(&[label("1", "1", 1)]),
            Err(PauliError::NotHermitian)
        ));
    }

    #[test]
    fn display_parse_roundtrip() {
        for s in ["+E(101|010)", "-E(11|00)", "+iE(0|1)", "-iE(110|011)"] {
            let p: PauliLabel = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
    }
}
