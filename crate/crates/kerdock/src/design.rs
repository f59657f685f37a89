//! The Möbius symmetry group of the Kerdock bases as binary symplectic
//! matrices, uniform sampling from it, the commutation graph on Pauli
//! classes, and the checks (Pauli mixing, twirl equality, frame potential)
//! that establish the unitary-2-design property of the ensemble.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit_synth::{synthesize, CliffordCircuit, ElementaryFactorization, Factor};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::gf2m::{FieldContext, FieldElement};
use crate::pauli::{realize_dense, symplectic_inner, DenseOperator, PauliLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not square of even dimension")]
    BadShape,
    #[error("determinant condition ad + bc = 1 violated")]
    BadMobiusTuple,
    #[error("linear factor requires an invertible matrix")]
    SingularLinear,
    #[error("quadratic factor requires a symmetric matrix")]
    NotSymmetricQuadratic,
    #[error("image subgroup is not of Kerdock form; matrix outside the symmetry group")]
    OutsideSymmetryGroup,
    #[error("operation limited to m <= {limit}, got {m}")]
    TooLarge { m: usize, limit: usize },
}

/// A validated 2m x 2m binary symplectic matrix acting on row vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymplecticMatrix {
    m: usize,
    mat: BitMatrix,
}

impl SymplecticMatrix {
    pub fn new(mat: BitMatrix) -> Result<Self, DesignError> {
        if mat.rows() != mat.cols() || mat.rows() % 2 != 0 || mat.rows() == 0 {
            return Err(DesignError::BadShape);
        }
        let m = mat.rows() / 2;
        let f = SymplecticMatrix { m, mat };
        if !f.is_symplectic() {
            return Err(DesignError::NotSymplectic);
        }
        Ok(f)
    }

    fn is_symplectic(&self) -> bool {
        // F Omega F^T = Omega via the block conditions
        let (a, b, c, d) = (self.block_a(), self.block_b(), self.block_c(), self.block_d());
        let ab = a.mul(&b.transpose()).unwrap();
        let ba = b.mul(&a.transpose()).unwrap();
        let cd = c.mul(&d.transpose()).unwrap();
        let dc = d.mul(&c.transpose()).unwrap();
        let ad = a.mul(&d.transpose()).unwrap();
        let bc = b.mul(&c.transpose()).unwrap();
        ab == ba && cd == dc && ad.add(&bc).unwrap().is_identity()
    }

    pub fn identity(m: usize) -> Self {
        SymplecticMatrix { m, mat: BitMatrix::identity(2 * m) }
    }

    /// The full swap [[0, I], [I, 0]].
    pub fn omega(m: usize) -> Self {
        Self::partial_hadamard(m, m)
    }

    /// G_t: swaps the X/Z components of the first t qubits.
    pub fn partial_hadamard(m: usize, t: usize) -> Self {
        assert!(t <= m);
        let mut mat = BitMatrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            if j < t {
                mat.set(j, m + j, true);
                mat.set(m + j, j, true);
            } else {
                mat.set(j, j, true);
                mat.set(m + j, m + j, true);
            }
        }
        SymplecticMatrix { m, mat }
    }

    /// L_Q = diag(Q, Q^{-T}) for invertible Q.
    pub fn linear(q: &BitMatrix) -> Result<Self, DesignError> {
        let m = q.rows();
        if q.cols() != m {
            return Err(DesignError::BadShape);
        }
        let q_inv_t = q.inverse().map_err(|_| DesignError::SingularLinear)?.transpose();
        let zero = BitMatrix::zeros(m, m);
        let mat = BitMatrix::from_blocks(q, &zero, &zero, &q_inv_t);
        Ok(SymplecticMatrix { m, mat })
    }

    /// T_P = [[I, P], [0, I]] for symmetric P.
    pub fn quadratic(p: &BitMatrix) -> Result<Self, DesignError> {
        let m = p.rows();
        if p.cols() != m {
            return Err(DesignError::BadShape);
        }
        if !p.is_symmetric() {
            return Err(DesignError::NotSymmetricQuadratic);
        }
        let id = BitMatrix::identity(m);
        let zero = BitMatrix::zeros(m, m);
        let mat = BitMatrix::from_blocks(&id, p, &zero, &id);
        Ok(SymplecticMatrix { m, mat })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.mat
    }

    pub fn block_a(&self) -> BitMatrix {
        self.mat.submatrix(0, 0, self.m, self.m)
    }

    pub fn block_b(&self) -> BitMatrix {
        self.mat.submatrix(0, self.m, self.m, self.m)
    }

    pub fn block_c(&self) -> BitMatrix {
        self.mat.submatrix(self.m, 0, self.m, self.m)
    }

    pub fn block_d(&self) -> BitMatrix {
        self.mat.submatrix(self.m, self.m, self.m, self.m)
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.m, other.m);
        SymplecticMatrix { m: self.m, mat: self.mat.mul(&other.mat).unwrap() }
    }

    /// F^{-1} = Omega F^T Omega.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = Self::omega(self.m);
        om.mul(&SymplecticMatrix { m: self.m, mat: self.mat.transpose() }).mul(&om)
    }

    /// Row-vector action `v -> v F`.
    pub fn map_row(&self, v: &BitVector) -> BitVector {
        self.mat.vec_mul(v).unwrap()
    }

    /// Uniformly random symplectic matrix, built by drawing a random
    /// symplectic basis pair by pair.
    pub fn random(m: usize, rng: &mut impl Rng) -> SymplecticMatrix {
        let n = 2 * m;
        let mut x_rows: Vec<BitVector> = Vec::with_capacity(m);
        let mut z_rows: Vec<BitVector> = Vec::with_capacity(m);
        for _ in 0..m {
            // v: uniform among vectors orthogonal to all chosen pairs and
            // outside their span; w: uniform with <v, w> = 1.
            let v = loop {
                let cand = random_in_symplectic_complement(&x_rows, &z_rows, n, rng);
                if !in_span(&x_rows, &z_rows, &cand) {
                    break cand;
                }
            };
            let w = loop {
                let cand = random_in_symplectic_complement(&x_rows, &z_rows, n, rng);
                if symplectic_inner(&v, &cand) == 1 {
                    break cand;
                }
            };
            x_rows.push(v);
            z_rows.push(w);
        }
        let rows: Vec<BitVector> = x_rows.into_iter().chain(z_rows).collect();
        SymplecticMatrix::new(BitMatrix::from_rows(&rows)).expect("construction is symplectic")
    }
}

fn random_in_symplectic_complement(
    x_rows: &[BitVector],
    z_rows: &[BitVector],
    n: usize,
    rng: &mut impl Rng,
) -> BitVector {
    // rejection over the full space is fine at desk scale
    loop {
        let cand = BitVector::from_bools(&(0..n).map(|_| rng.random()).collect::<Vec<_>>());
        if cand.is_zero() {
            continue;
        }
        let ok = x_rows
            .iter()
            .zip(z_rows)
            .all(|(x, z)| symplectic_inner(x, &cand) == 0 && symplectic_inner(z, &cand) == 0);
        if ok {
            return cand;
        }
    }
}

fn in_span(x_rows: &[BitVector], z_rows: &[BitVector], v: &BitVector) -> bool {
    if x_rows.is_empty() {
        return v.is_zero();
    }
    let mut rows: Vec<BitVector> = x_rows.iter().chain(z_rows).cloned().collect();
    let base_rank = BitMatrix::from_rows(&rows).rank();
    rows.push(v.clone());
    BitMatrix::from_rows(&rows).rank() == base_rank
}

/// A point of the projective line over GF(2^m).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjectivePoint {
    Infinity,
    Finite(FieldElement),
}

impl ProjectivePoint {
    pub fn format(&self, ctx: &FieldContext) -> String {
        match self {
            ProjectivePoint::Infinity => "inf".into(),
            ProjectivePoint::Finite(z) => ctx.format_element(*z),
        }
    }
}

/// A Möbius transformation z -> (a z^{2^-i} + b) / (c z^{2^-i} + d) with
/// ad + bc = 1; `frobenius = 0` gives the plain fractional-linear group.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct PSLElement {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    pub frobenius: usize,
}

impl PSLElement {
    pub fn new(
        ctx: &FieldContext,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<Self, DesignError> {
        Self::with_frobenius(ctx, a, b, c, d, 0)
    }

    pub fn with_frobenius(
        ctx: &FieldContext,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
        frobenius: usize,
    ) -> Result<Self, DesignError> {
        let det = ctx.add(ctx.mul(a, d), ctx.mul(b, c));
        if det != ctx.one() {
            return Err(DesignError::BadMobiusTuple);
        }
        Ok(PSLElement { a, b, c, d, frobenius: frobenius % ctx.m() })
    }

    pub fn identity(ctx: &FieldContext) -> Self {
        PSLElement { a: ctx.one(), b: ctx.zero(), c: ctx.zero(), d: ctx.one(), frobenius: 0 }
    }

    /// Action on the projective line.
    pub fn apply(&self, ctx: &FieldContext, z: ProjectivePoint) -> ProjectivePoint {
        let z = match z {
            ProjectivePoint::Infinity => {
                return if self.c.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(ctx.div(self.a, self.c).unwrap())
                };
            }
            ProjectivePoint::Finite(z) => ctx.frobenius(z, -(self.frobenius as i64)),
        };
        let den = ctx.add(ctx.mul(self.c, z), self.d);
        if den.is_zero() {
            return ProjectivePoint::Infinity;
        }
        let num = ctx.add(ctx.mul(self.a, z), self.b);
        ProjectivePoint::Finite(ctx.div(num, den).unwrap())
    }
}

/// The Kerdock matrix attached to a projective point z: `A_z^2 W`
/// (indexed by squares so that the Möbius action reads off cleanly).
pub fn kerdock_point_matrix(ctx: &FieldContext, z: FieldElement) -> BitMatrix {
    let az2 = ctx.mult_matrix(ctx.square(z));
    az2.mul(ctx.trace_gram_matrix()).unwrap()
}

/// Closed-form symplectic matrix of a Möbius element (with optional
/// Frobenius twist):
/// `[[R^{-i} A_d^2, R^{-i} A_b^2 W], [W^{-1} R^{-i} A_c^2, (R^i)^T (A_a^2)^T]]`.
pub fn enlarged_element(ctx: &FieldContext, e: &PSLElement) -> SymplecticMatrix {
    let m = ctx.m();
    let w = ctx.trace_gram_matrix();
    let w_inv = ctx.trace_gram_inverse();
    let r_inv_i = matrix_power(ctx.frobenius_inverse(), e.frobenius);
    let r_i_t = matrix_power(ctx.frobenius_matrix(), e.frobenius).transpose();
    let sq = |x: FieldElement| ctx.mult_matrix(ctx.square(x));

    let a_blk = r_inv_i.mul(&sq(e.d)).unwrap();
    let b_blk = r_inv_i.mul(&sq(e.b)).unwrap().mul(w).unwrap();
    let c_blk = w_inv.mul(&r_inv_i).unwrap().mul(&sq(e.c)).unwrap();
    let d_blk = r_i_t.mul(&sq(e.a).transpose()).unwrap();
    let mat = BitMatrix::from_blocks(&a_blk, &b_blk, &c_blk, &d_blk);
    debug_assert_eq!(mat.rows(), 2 * m);
    SymplecticMatrix::new(mat).expect("closed form is symplectic")
}

/// Symplectic matrix of a plain (frobenius = 0) Möbius element.
pub fn psl_to_symplectic(ctx: &FieldContext, e: &PSLElement) -> SymplecticMatrix {
    enlarged_element(ctx, e)
}

fn matrix_power(m: &BitMatrix, k: usize) -> BitMatrix {
    let mut acc = BitMatrix::identity(m.rows());
    for _ in 0..k {
        acc = acc.mul(m).unwrap();
    }
    acc
}

/// Elementary factorization of a Möbius element: the explicit 4-factor
/// product `T L (Omega L) T` when c != 0, or the affine 2-factor product
/// `L T` when c = 0; a leading `L_{R^{-i}}` carries the Frobenius part.
pub fn psl_factorization(ctx: &FieldContext, e: &PSLElement) -> ElementaryFactorization {
    let m = ctx.m();
    let w = ctx.trace_gram_matrix();
    let mut factors = Vec::new();
    if e.frobenius > 0 {
        factors.push(Factor::Linear(matrix_power(ctx.frobenius_inverse(), e.frobenius)));
    }
    let t_of = |x: FieldElement| -> Option<Factor> {
        if x.is_zero() {
            return None;
        }
        let p = ctx.mult_matrix(ctx.square(x)).mul(w).unwrap();
        Some(Factor::Quadratic(p))
    };
    if e.c.is_zero() {
        // z -> a^2 z + ab: scale then translate
        let a_inv2 = ctx.mult_matrix(ctx.pow(e.a, -2));
        if !a_inv2.is_identity() {
            factors.push(Factor::Linear(a_inv2));
        }
        if let Some(t) = t_of(ctx.mul(e.a, e.b)) {
            factors.push(t);
        }
    } else {
        if let Some(t) = t_of(ctx.div(e.d, e.c).unwrap()) {
            factors.push(t);
        }
        let c_inv2 = ctx.mult_matrix(ctx.pow(e.c, -2));
        if !c_inv2.is_identity() {
            factors.push(Factor::Linear(c_inv2));
        }
        factors.push(Factor::Omega);
        factors.push(Factor::Linear(ctx.trace_gram_inverse().clone()));
        if let Some(t) = t_of(ctx.div(e.a, e.c).unwrap()) {
            factors.push(t);
        }
    }
    ElementaryFactorization { m, factors }
}

/// The sampler's product form `T_{A_alpha W} L_{A_beta} (Omega L_{W^{-1}}
/// T_{A_delta W})`; beta must be nonzero.
pub fn ensemble_factor(
    ctx: &FieldContext,
    alpha: FieldElement,
    beta: FieldElement,
    delta: FieldElement,
) -> Result<SymplecticMatrix, DesignError> {
    if beta.is_zero() {
        return Err(DesignError::SingularLinear);
    }
    let w = ctx.trace_gram_matrix();
    let t = |x: FieldElement| {
        SymplecticMatrix::quadratic(&ctx.mult_matrix(x).mul(w).unwrap()).unwrap()
    };
    let l_beta = SymplecticMatrix::linear(&ctx.mult_matrix(beta)).unwrap();
    let omega_lw =
        SymplecticMatrix::omega(ctx.m()).mul(&SymplecticMatrix::linear(ctx.trace_gram_inverse()).unwrap());
    Ok(t(alpha).mul(&l_beta).mul(&omega_lw).mul(&t(delta)))
}

/// One element of the design ensemble: a symmetry-group symplectic part and
/// a Pauli part (projective, phase dropped).
#[derive(Clone, Debug)]
pub struct DesignElement {
    pub psl: PSLElement,
    pub symplectic: SymplecticMatrix,
    pub pauli: PauliLabel,
}

/// Number of Möbius-group elements: (N+1) N (N-1).
pub fn group_order(m: usize) -> u64 {
    let n = 1u64 << m;
    (n + 1) * n * (n - 1)
}

/// Uniform sample from the design ensemble (group element x Pauli class).
pub fn sample_design_element(ctx: &FieldContext, rng: &mut impl Rng) -> DesignElement {
    let psl = sample_psl(ctx, rng);
    let symplectic = psl_to_symplectic(ctx, &psl);
    let m = ctx.m();
    let a = BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>());
    let b = BitVector::from_bools(&(0..m).map(|_| rng.random()).collect::<Vec<_>>());
    DesignElement { psl, symplectic, pauli: PauliLabel::new(a, b, 0) }
}

/// Uniform sample from the Möbius group by decoding a uniform index over
/// the c != 0 block (N^2 (N-1) tuples) and the affine block (N (N-1)).
pub fn sample_psl(ctx: &FieldContext, rng: &mut impl Rng) -> PSLElement {
    let n = 1u64 << ctx.m();
    let total = group_order(ctx.m());
    let idx = rng.random_range(0..total);
    let c_nonzero_count = n * n * (n - 1);
    if idx < c_nonzero_count {
        let (q, a_bits) = (idx / n, idx % n);
        let (q2, d_bits) = (q / n, q % n);
        let c_bits = q2 + 1; // skip zero
        let a = ctx.element(a_bits);
        let d = ctx.element(d_bits);
        let c = ctx.element(c_bits);
        // b = (ad + 1) / c
        let b = ctx.div(ctx.add(ctx.mul(a, d), ctx.one()), c).unwrap();
        PSLElement { a, b, c, d, frobenius: 0 }
    } else {
        let rest = idx - c_nonzero_count;
        let (a_idx, b_bits) = (rest / n, rest % n);
        let a = ctx.element(a_idx + 1); // nonzero
        let d = ctx.inv(a).unwrap();
        let b = ctx.element(b_bits);
        PSLElement { a, b, c: ctx.zero(), d, frobenius: 0 }
    }
}

/// Enumerates the whole Möbius group with its symplectic realizations.
pub fn enumerate_group(ctx: &FieldContext) -> Vec<(PSLElement, SymplecticMatrix)> {
    enumerate_group_frobenius(ctx, false)
}

/// Enumerates the group, optionally enlarged by the Frobenius twists.
pub fn enumerate_group_frobenius(
    ctx: &FieldContext,
    enlarged: bool,
) -> Vec<(PSLElement, SymplecticMatrix)> {
    let mut out = Vec::new();
    let frob_range = if enlarged { ctx.m() } else { 1 };
    for frob in 0..frob_range {
        for c in ctx.elements() {
            if c.is_zero() {
                for a in ctx.elements().skip(1) {
                    let d = ctx.inv(a).unwrap();
                    for b in ctx.elements() {
                        let e = PSLElement { a, b, c, d, frobenius: frob };
                        let f = enlarged_element(ctx, &e);
                        out.push((e, f));
                    }
                }
            } else {
                for a in ctx.elements() {
                    for d in ctx.elements() {
                        let b = ctx.div(ctx.add(ctx.mul(a, d), ctx.one()), c).unwrap();
                        let e = PSLElement { a, b, c, d, frobenius: frob };
                        let f = enlarged_element(ctx, &e);
                        out.push((e, f));
                    }
                }
            }
        }
    }
    out
}

/// Closure of the generator set under multiplication (breadth-first).
pub fn closure_from_generators(ctx: &FieldContext) -> HashSet<SymplecticMatrix> {
    let mut gens: Vec<SymplecticMatrix> = Vec::new();
    for x in ctx.elements() {
        // T_{A_x^2 W}
        let p = kerdock_point_matrix(ctx, x);
        gens.push(SymplecticMatrix::quadratic(&p).unwrap());
        if !x.is_zero() {
            // L_{A_x^{-1}}
            gens.push(SymplecticMatrix::linear(&ctx.mult_matrix(ctx.inv(x).unwrap())).unwrap());
        }
    }
    gens.push(
        SymplecticMatrix::omega(ctx.m())
            .mul(&SymplecticMatrix::linear(ctx.trace_gram_inverse()).unwrap()),
    );

    let mut seen: HashSet<SymplecticMatrix> = HashSet::new();
    let mut frontier = vec![SymplecticMatrix::identity(ctx.m())];
    seen.insert(frontier[0].clone());
    while let Some(f) = frontier.pop() {
        for g in &gens {
            let next = f.mul(g);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// Canonicalizes the image of the maximal commutative subgroup labeled by a
/// projective point under a symmetry-group element, returning the image
/// point. Errors when the image is not of Kerdock form.
pub fn action_on_subgroup(
    ctx: &FieldContext,
    f: &SymplecticMatrix,
    z: ProjectivePoint,
) -> Result<ProjectivePoint, DesignError> {
    let m = ctx.m();
    assert_eq!(f.m(), m);
    let rows = match z {
        ProjectivePoint::Infinity => {
            let zero = BitMatrix::zeros(m, m);
            zero.hstack(&BitMatrix::identity(m))
        }
        ProjectivePoint::Finite(el) => {
            let p = kerdock_point_matrix(ctx, el);
            BitMatrix::identity(m).hstack(&p)
        }
    };
    let image = rows.mul(f.matrix()).unwrap();
    let x = image.submatrix(0, 0, m, m);
    let y = image.submatrix(0, m, m, m);
    if x.is_zero() {
        if y.rank() == m {
            return Ok(ProjectivePoint::Infinity);
        }
        return Err(DesignError::OutsideSymmetryGroup);
    }
    let x_inv = x.inverse().map_err(|_| DesignError::OutsideSymmetryGroup)?;
    let p_image = x_inv.mul(&y).unwrap();
    // p_image must equal A_{z'}^2 W; read z'^2 off the first row of P W^{-1}
    let a_z2 = p_image.mul(ctx.trace_gram_inverse()).unwrap();
    let z2 = ctx.from_vector(&a_z2.row(0)).unwrap();
    let z_out = ctx.sqrt(z2);
    if kerdock_point_matrix(ctx, z_out) != p_image {
        return Err(DesignError::OutsideSymmetryGroup);
    }
    Ok(ProjectivePoint::Finite(z_out))
}

// ---------------------------------------------------------------------------
// Commutation graph on nonzero Pauli classes
// ---------------------------------------------------------------------------

/// Graph on the N^2 - 1 nonzero classes `[a|b]`, adjacent when the
/// symplectic inner product vanishes (the operators commute).
pub struct HwGraph {
    pub m: usize,
    /// adjacency bitsets, one row of words per vertex
    adj: Vec<Vec<u64>>,
    verts: usize,
}

impl HwGraph {
    pub fn build(m: usize) -> Self {
        let verts = (1usize << (2 * m)) - 1;
        let words = verts.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; verts];
        let pack = |v: usize| -> BitVector {
            // vertex index v+1 interpreted as bits of [a|b]
            let mut bv = BitVector::zeros(2 * m);
            for i in 0..2 * m {
                if ((v + 1) >> i) & 1 == 1 {
                    bv.set(i, true);
                }
            }
            bv
        };
        let labels: Vec<BitVector> = (0..verts).map(pack).collect();
        for i in 0..verts {
            for j in i + 1..verts {
                if symplectic_inner(&labels[i], &labels[j]) == 0 {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        HwGraph { m, adj, verts }
    }

    pub fn vertex_count(&self) -> usize {
        self.verts
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        (self.adj[i][j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        self.adj[i]
            .iter()
            .zip(&self.adj[j])
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongRegularityReport {
    pub m: usize,
    pub vertices: usize,
    pub expected: (usize, usize, usize, usize),
    pub degree_ok: bool,
    pub lambda_ok: bool,
    pub mu_ok: bool,
    pub type1_edges: u64,
    pub type2_edges: u64,
    pub type1_expected: u64,
    pub type2_expected: u64,
}

impl StrongRegularityReport {
    pub fn pass(&self) -> bool {
        self.degree_ok
            && self.lambda_ok
            && self.mu_ok
            && self.type1_edges == self.type1_expected
            && self.type2_edges == self.type2_expected
    }
}

/// Identifies which maximal commutative subgroup of the standard partition
/// a nonzero class `[a|b]` belongs to: one of the N Kerdock subgroups or
/// the Z-type subgroup (`None`).
fn partition_point(ctx: &FieldContext, label: &BitVector) -> Option<FieldElement> {
    let m = ctx.m();
    let a = label.slice(0, m);
    let b = label.slice(m, m);
    if a.is_zero() {
        return None; // Z-type subgroup, point at infinity
    }
    // b = a A_{z}^2 W  =>  z^2 = (b W^{-1}) / a in the field
    let bw = ctx.trace_gram_inverse().vec_mul(&b).unwrap();
    let a_el = ctx.from_vector(&a).unwrap();
    let bw_el = ctx.from_vector(&bw).unwrap();
    let z2 = ctx.div(bw_el, a_el).unwrap();
    Some(ctx.sqrt(z2))
}

/// Verifies strong regularity and the per-type edge counts by explicit
/// construction.
pub fn check_strong_regularity(m: usize) -> Result<StrongRegularityReport, DesignError> {
    if m > 6 {
        return Err(DesignError::TooLarge { m, limit: 6 });
    }
    let ctx = crate::gf2m::make_context(m).unwrap();
    let g = HwGraph::build(m);
    let n_sq = 1usize << (2 * m);
    let expected = (n_sq - 1, n_sq / 2 - 2, n_sq / 4 - 3, n_sq / 4 - 1);

    let degree_ok = (0..g.vertex_count()).all(|v| g.degree(v) == expected.1);
    let mut lambda_ok = true;
    let mut mu_ok = true;
    let mut type1: u64 = 0;
    let mut type2: u64 = 0;
    let subgroup: Vec<Option<FieldElement>> = (0..g.vertex_count())
        .map(|v| {
            let mut bv = BitVector::zeros(2 * m);
            for i in 0..2 * m {
                if ((v + 1) >> i) & 1 == 1 {
                    bv.set(i, true);
                }
            }
            partition_point(&ctx, &bv)
        })
        .collect();
    for i in 0..g.vertex_count() {
        for j in i + 1..g.vertex_count() {
            let common = g.common_neighbors(i, j);
            if g.adjacent(i, j) {
                if common != expected.2 {
                    lambda_ok = false;
                }
                if subgroup[i] == subgroup[j] {
                    type1 += 1;
                } else {
                    type2 += 1;
                }
            } else if common != expected.3 {
                mu_ok = false;
            }
        }
    }
    let n = 1u64 << m;
    let type1_expected = (n + 1) * (n - 1) * (n - 2) / 2;
    let type2_expected = (n * n - 1) * (n * n / 2 - n) / 2;
    Ok(StrongRegularityReport {
        m,
        vertices: g.vertex_count(),
        expected,
        degree_ok,
        lambda_ok,
        mu_ok,
        type1_edges: type1,
        type2_edges: type2,
        type1_expected,
        type2_expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub m: usize,
    pub group_order: u64,
    pub expected_multiplicity: u64,
    pub uniform: bool,
    pub min_multiplicity: u64,
    pub max_multiplicity: u64,
    /// orbits of a type-1 and a type-2 edge never cross types
    pub edge_types_preserved: bool,
}

impl MixingReport {
    pub fn pass(&self) -> bool {
        self.uniform && self.edge_types_preserved
    }
}

/// For every nonzero class, pushes it through the whole symmetry group and
/// tallies the image distribution; uniformity is the mixing property.
pub fn check_pauli_mixing(m: usize) -> Result<MixingReport, DesignError> {
    if m > 5 {
        return Err(DesignError::TooLarge { m, limit: 5 });
    }
    let ctx = crate::gf2m::make_context(m).unwrap();
    let group = enumerate_group(&ctx);
    let verts = (1usize << (2 * m)) - 1;
    let order = group.len() as u64;
    let expected = order / verts as u64;

    let mut min_mult = u64::MAX;
    let mut max_mult = 0u64;
    let mut uniform = true;
    for v in 0..verts {
        let mut bv = BitVector::zeros(2 * m);
        for i in 0..2 * m {
            if ((v + 1) >> i) & 1 == 1 {
                bv.set(i, true);
            }
        }
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for (_, f) in &group {
            let img = f.map_row(&bv);
            *counts.entry(img.to_u64()).or_insert(0) += 1;
        }
        if counts.len() != verts {
            uniform = false;
        }
        for (_, c) in counts {
            min_mult = min_mult.min(c);
            max_mult = max_mult.max(c);
            if c != expected {
                uniform = false;
            }
        }
    }

    // Edge-type preservation: push one edge of each type through the group.
    let edge_types_preserved = {
        let type_of = |u: &BitVector, v: &BitVector| -> bool {
            partition_point(&ctx, u) == partition_point(&ctx, v)
        };
        // type-1 edge: two elements of the Z-type subgroup
        let mut u1 = BitVector::zeros(2 * m);
        u1.set(m, true);
        let mut v1 = BitVector::zeros(2 * m);
        if m == 1 {
            // [0|1] is the only Z-type vertex at m = 1: type-1 edges need
            // two distinct commuting elements of the same subgroup
            v1 = u1.clone();
        } else {
            v1.set(m + 1, true);
        }
        // type-2 edge: commuting pair from different subgroups
        let (mut u2, mut v2) = (None, None);
        'outer: for x in 1..(1usize << (2 * m)) {
            for y in x + 1..(1usize << (2 * m)) {
                let xv = label_from_index(x, m);
                let yv = label_from_index(y, m);
                if symplectic_inner(&xv, &yv) == 0 && !type_of(&xv, &yv) {
                    u2 = Some(xv);
                    v2 = Some(yv);
                    break 'outer;
                }
            }
        }
        let mut ok = true;
        for (_, f) in &group {
            if m > 1 {
                let iu = f.map_row(&u1);
                let iv = f.map_row(&v1);
                if !type_of(&iu, &iv) {
                    ok = false;
                }
            }
            if let (Some(u2), Some(v2)) = (&u2, &v2) {
                let iu = f.map_row(u2);
                let iv = f.map_row(v2);
                if type_of(&iu, &iv) {
                    ok = false;
                }
            }
        }
        ok
    };

    Ok(MixingReport {
        m,
        group_order: order,
        expected_multiplicity: expected,
        uniform,
        min_multiplicity: min_mult,
        max_multiplicity: max_mult,
        edge_types_preserved,
    })
}

fn label_from_index(x: usize, m: usize) -> BitVector {
    let mut bv = BitVector::zeros(2 * m);
    for i in 0..2 * m {
        if (x >> i) & 1 == 1 {
            bv.set(i, true);
        }
    }
    bv
}

// ---------------------------------------------------------------------------
// Twirl and frame potential
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct TwirlReport {
    pub m: usize,
    pub trials: usize,
    pub max_deviation: f64,
    pub frame_potential: f64,
    pub ensemble_size: usize,
}

impl TwirlReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_deviation < tol && (self.frame_potential - 2.0).abs() < tol
    }
}

pub const TWIRL_QUBIT_LIMIT: usize = 2;

/// One unitary per symmetry-group element (any coset representative works;
/// the Pauli average cancels phase freedom).
pub fn clifford_lift(f: &SymplecticMatrix) -> Result<DenseOperator, DesignError> {
    if f.m() > 6 {
        return Err(DesignError::TooLarge { m: f.m(), limit: 6 });
    }
    let circuit = synthesize(f);
    Ok(circuit.dense_unitary().expect("within dense limit"))
}

/// Compares the ensemble 2-fold twirl against the Haar twirl computed from
/// the symmetric/antisymmetric projectors, on random test operators, and
/// evaluates the ensemble frame potential.
pub fn twirl_check(m: usize, trials: usize, rng: &mut impl Rng) -> Result<TwirlReport, DesignError> {
    if m > TWIRL_QUBIT_LIMIT {
        return Err(DesignError::TooLarge { m, limit: TWIRL_QUBIT_LIMIT });
    }
    let ctx = crate::gf2m::make_context(m).unwrap();
    let n = 1usize << m;
    let group = enumerate_group(&ctx);

    // Ensemble: D(a,b) . lift(F) over all group elements and Pauli classes.
    let mut ensemble: Vec<Vec<Complex64>> = Vec::new();
    for (_, f) in &group {
        let g = clifford_lift(f)?.to_complex();
        for ab in 0..(1usize << (2 * m)) {
            let label = PauliLabel::from_gamma(&label_from_index(ab, m), 0);
            let d = realize_dense(&label).unwrap().to_complex();
            ensemble.push(mat_mul_c(&d, &g, n));
        }
    }

    // Haar twirl via projectors on the doubled space.
    let dim2 = n * n;
    let swap = swap_operator(n);
    let mut max_dev: f64 = 0.0;
    for trial in 0..trials {
        let x: Vec<Complex64> = if trial == 0 {
            identity_c(dim2)
        } else {
            (0..dim2 * dim2)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        };
        let ensemble_avg = ensemble_twirl(&ensemble, &x, n);
        let haar = haar_twirl(&x, &swap, n);
        for (a, b) in ensemble_avg.iter().zip(&haar) {
            max_dev = max_dev.max((a - b).norm());
        }
    }

    // Frame potential (1/|E|^2) sum |Tr(U^dag V)|^4.
    let size = ensemble.len();
    let mut fp = 0.0f64;
    for u in &ensemble {
        for v in &ensemble {
            let mut tr = Complex64::new(0.0, 0.0);
            for r in 0..n {
                for k in 0..n {
                    tr += u[k * n + r].conj() * v[k * n + r];
                }
            }
            fp += tr.norm_sqr() * tr.norm_sqr();
        }
    }
    fp /= (size * size) as f64;

    Ok(TwirlReport { m, trials, max_deviation: max_dev, frame_potential: fp, ensemble_size: size })
}

fn identity_c(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    v
}

fn mat_mul_c(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for k in 0..n {
            let v = a[r * n + k];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..n {
                out[r * n + c] += v * b[k * n + c];
            }
        }
    }
    out
}

fn kron_c(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let dim = n * n;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r1 in 0..n {
        for c1 in 0..n {
            let v = a[r1 * n + c1];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            for r2 in 0..n {
                for c2 in 0..n {
                    out[(r1 * n + r2) * dim + (c1 * n + c2)] = v * b[r2 * n + c2];
                }
            }
        }
    }
    out
}

fn swap_operator(n: usize) -> Vec<Complex64> {
    let dim = n * n;
    let mut s = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..n {
        for j in 0..n {
            s[(i * n + j) * dim + (j * n + i)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

fn ensemble_twirl(ensemble: &[Vec<Complex64>], x: &[Complex64], n: usize) -> Vec<Complex64> {
    let dim = n * n;
    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
    for u in ensemble {
        let uu = kron_c(u, u, n);
        let udag: Vec<Complex64> = {
            let mut t = vec![Complex64::new(0.0, 0.0); dim * dim];
            for r in 0..dim {
                for c in 0..dim {
                    t[r * dim + c] = uu[c * dim + r].conj();
                }
            }
            t
        };
        let term = mat_mul_c(&mat_mul_c(&uu, x, dim), &udag, dim);
        for (a, t) in acc.iter_mut().zip(&term) {
            *a += t;
        }
    }
    let scale = 1.0 / ensemble.len() as f64;
    for a in acc.iter_mut() {
        *a *= scale;
    }
    acc
}

/// Haar 2-fold twirl: X -> Tr(X P+)/d+ P+ + Tr(X P-)/d- P- with
/// P± = (I ± S)/2 on the doubled space.
fn haar_twirl(x: &[Complex64], swap: &[Complex64], n: usize) -> Vec<Complex64> {
    let dim = n * n;
    let mut p_plus = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut p_minus = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let id = if i == j { 1.0 } else { 0.0 };
            p_plus[i * dim + j] = (Complex64::new(id, 0.0) + swap[i * dim + j]) * 0.5;
            p_minus[i * dim + j] = (Complex64::new(id, 0.0) - swap[i * dim + j]) * 0.5;
        }
    }
    let d_plus = (n * (n + 1) / 2) as f64;
    let d_minus = (n * (n - 1) / 2) as f64;
    let tr = |p: &[Complex64]| -> Complex64 {
        let prod = mat_mul_c(x, p, dim);
        (0..dim).map(|i| prod[i * dim + i]).sum()
    };
    let c_plus = tr(&p_plus) / d_plus;
    let c_minus = tr(&p_minus) / d_minus;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim * dim {
        out[i] = c_plus * p_plus[i] + c_minus * p_minus[i];
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignVerifyReport {
    pub m: usize,
    pub group_order: u64,
    pub group_order_expected: u64,
    pub mixing: Option<MixingReport>,
    pub regularity: Option<StrongRegularityReport>,
    pub twirl: Option<TwirlReport>,
}

impl DesignVerifyReport {
    pub fn pass(&self) -> bool {
        self.group_order == self.group_order_expected
            && self.mixing.as_ref().map_or(true, MixingReport::pass)
            && self.regularity.as_ref().map_or(true, StrongRegularityReport::pass)
            && self.twirl.as_ref().map_or(true, |t| t.pass(1e-9))
    }
}

/// Umbrella verification used by the CLI: group order, mixing, strong
/// regularity, and (for m <= 2) the dense twirl comparison.
pub fn verify_design(m: usize, trials: usize, rng: &mut impl Rng) -> Result<DesignVerifyReport, DesignError> {
    let ctx = crate::gf2m::make_context(m).map_err(|_| DesignError::TooLarge { m, limit: 32 })?;
    let group = enumerate_group(&ctx);
    let distinct: HashSet<&SymplecticMatrix> = group.iter().map(|(_, f)| f).collect();
    let mixing = if m <= 4 { Some(check_pauli_mixing(m)?) } else { None };
    let regularity = if m <= 4 { Some(check_strong_regularity(m)?) } else { None };
    let twirl = if m <= TWIRL_QUBIT_LIMIT { Some(twirl_check(m, trials, rng)?) } else { None };
    Ok(DesignVerifyReport {
        m,
        group_order: distinct.len() as u64,
        group_order_expected: group_order(m),
        mixing,
        regularity,
        twirl,
    })
}

/// Circuit for one design element: the factored symmetry part.
pub fn design_element_circuit(ctx: &FieldContext, e: &DesignElement) -> CliffordCircuit {
    let mut circuit = psl_factorization(ctx, &e.psl).to_circuit();
    let xs: Vec<usize> = e.pauli.a().iter_ones().map(|j| j + 1).collect();
    let zs: Vec<usize> = e.pauli.b().iter_ones().map(|j| j + 1).collect();
    if !xs.is_empty() {
        circuit.push(crate::circuit_synth::Gate::PauliX(xs));
    }
    if !zs.is_empty() {
        circuit.push(crate::circuit_synth::Gate::PauliZ(zs));
    }
    circuit
}
