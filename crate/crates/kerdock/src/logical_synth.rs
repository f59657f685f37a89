//! Synthesis of physical Clifford circuits realizing a prescribed logical
//! action on a stabilizer code.
//!
//! The pipeline: conjugation table of the logical circuit -> linear
//! constraints on the physical symplectic matrix (logical generators map to
//! their required images, stabilizer generators map to themselves) -> all
//! symplectic solutions via completion to a symplectic basis plus the
//! symmetric residual freedom on destabilizer images -> gate-count
//! selection -> trailing Pauli correction fixing every sign.

use serde::Serialize;
use thiserror::Error;

use crate::circuit_synth::{synthesize, CliffordCircuit, Gate};
use crate::design::SymplecticMatrix;
use crate::f2linalg::{solve_affine, BitMatrix, BitVector, LinAlgError};
use crate::pauli::{realize_dense, symplectic_inner, PauliLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicalError {
    #[error("stabilizer generators must commute and be independent")]
    BadStabilizers,
    #[error("logical operators violate the required pairing structure")]
    BadLogicals,
    #[error("constraint set is inconsistent: {0}")]
    Inconsistent(String),
    #[error("logical circuit acts on {got} qubits, code protects {expected}")]
    WrongLogicalQubits { expected: usize, got: usize },
    #[error("no sign-fixing Pauli exists")]
    NoSignFix,
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<LinAlgError> for LogicalError {
    fn from(e: LinAlgError) -> Self {
        LogicalError::Inconsistent(e.to_string())
    }
}

/// An [[m, m-k]] stabilizer code with chosen logical representatives.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    pub m: usize,
    pub k: usize,
    pub stabilizers: Vec<PauliLabel>,
    pub logical_x: Vec<PauliLabel>,
    pub logical_z: Vec<PauliLabel>,
}

impl StabilizerCode {
    pub fn new(
        stabilizers: Vec<PauliLabel>,
        logical_x: Vec<PauliLabel>,
        logical_z: Vec<PauliLabel>,
    ) -> Result<Self, LogicalError> {
        assert!(!stabilizers.is_empty());
        let m = stabilizers[0].num_qubits();
        let k = stabilizers.len();
        if logical_x.len() != m - k || logical_z.len() != m - k {
            return Err(LogicalError::BadLogicals);
        }
        for s in &stabilizers {
            if !s.is_hermitian() || s.num_qubits() != m {
                return Err(LogicalError::BadStabilizers);
            }
        }
        for (i, s) in stabilizers.iter().enumerate() {
            for t in &stabilizers[i + 1..] {
                if !s.commutes_with(t) {
                    return Err(LogicalError::BadStabilizers);
                }
            }
        }
        let rows: Vec<BitVector> = stabilizers.iter().map(PauliLabel::gamma).collect();
        if BitMatrix::from_rows(&rows).rank() != k {
            return Err(LogicalError::BadStabilizers);
        }
        // logicals: commute with stabilizers, pair as <xbar_i, zbar_j> = d_ij
        for l in logical_x.iter().chain(&logical_z) {
            if l.num_qubits() != m || !l.is_hermitian() {
                return Err(LogicalError::BadLogicals);
            }
            if stabilizers.iter().any(|s| !s.commutes_with(l)) {
                return Err(LogicalError::BadLogicals);
            }
        }
        for (i, x) in logical_x.iter().enumerate() {
            for (j, z) in logical_z.iter().enumerate() {
                let expected = u8::from(i == j);
                if symplectic_inner(&x.gamma(), &z.gamma()) != expected {
                    return Err(LogicalError::BadLogicals);
                }
            }
        }
        for (i, x) in logical_x.iter().enumerate() {
            for y in &logical_x[i + 1..] {
                if !x.commutes_with(y) {
                    return Err(LogicalError::BadLogicals);
                }
            }
        }
        for (i, z) in logical_z.iter().enumerate() {
            for y in &logical_z[i + 1..] {
                if !z.commutes_with(y) {
                    return Err(LogicalError::BadLogicals);
                }
            }
        }
        Ok(StabilizerCode { m, k, stabilizers, logical_x, logical_z })
    }

    pub fn logical_qubits(&self) -> usize {
        self.m - self.k
    }

    /// The [[6,4,2]] code: stabilizers X^(x)6 and Z^(x)6 with weight-two
    /// logical representatives.
    pub fn css_642() -> StabilizerCode {
        let parse = |s: &str| s.parse::<PauliLabel>().unwrap();
        StabilizerCode::new(
            vec![parse("+E(111111|000000)"), parse("+E(000000|111111)")],
            vec![
                parse("+E(110000|000000)"),
                parse("+E(101000|000000)"),
                parse("+E(100100|000000)"),
                parse("+E(100010|000000)"),
            ],
            vec![
                parse("+E(000000|010001)"),
                parse("+E(000000|001001)"),
                parse("+E(000000|000101)"),
                parse("+E(000000|000011)"),
            ],
        )
        .expect("valid code")
    }

    /// Parses a code file: lines `stab <pauli>`, `logx <i> <pauli>`,
    /// `logz <i> <pauli>` with 1-based logical indices.
    pub fn parse(text: &str) -> Result<StabilizerCode, LogicalError> {
        let mut stabs = Vec::new();
        let mut xs: Vec<(usize, PauliLabel)> = Vec::new();
        let mut zs: Vec<(usize, PauliLabel)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let kind = parts.next().unwrap();
            match kind {
                "stab" => {
                    let p = parts.next().ok_or_else(|| LogicalError::Parse(line.into()))?;
                    stabs.push(p.parse().map_err(|e| LogicalError::Parse(format!("{e}")))?);
                }
                "logx" | "logz" => {
                    let idx: usize = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| LogicalError::Parse(line.into()))?;
                    let p = parts.next().ok_or_else(|| LogicalError::Parse(line.into()))?;
                    let label = p.parse().map_err(|e| LogicalError::Parse(format!("{e}")))?;
                    if kind == "logx" {
                        xs.push((idx, label));
                    } else {
                        zs.push((idx, label));
                    }
                }
                _ => return Err(LogicalError::Parse(format!("unknown keyword in '{line}'"))),
            }
        }
        xs.sort_by_key(|(i, _)| *i);
        zs.sort_by_key(|(i, _)| *i);
        StabilizerCode::new(
            stabs,
            xs.into_iter().map(|(_, p)| p).collect(),
            zs.into_iter().map(|(_, p)| p).collect(),
        )
    }

    /// Lifts a logical label E(u, v) to its physical representative: the
    /// ordered product of logical X and Z generators with the Hermitian
    /// phase correction i^{u v^T}.
    pub fn lift_logical(&self, u: &BitVector, v: &BitVector, sign: i8) -> PauliLabel {
        let mk = self.logical_qubits();
        assert_eq!(u.len(), mk);
        assert_eq!(v.len(), mk);
        let mut acc = PauliLabel::identity(self.m);
        for j in u.iter_ones() {
            acc = acc.multiply(&self.logical_x[j]).unwrap();
        }
        for j in v.iter_ones() {
            acc = acc.multiply(&self.logical_z[j]).unwrap();
        }
        let mut phase = (u.overlap(v) % 4) as u8;
        if sign < 0 {
            phase = (phase + 2) & 3;
        }
        let out = acc.mul_phase(phase);
        assert!(out.is_hermitian(), "lifted logical must be Hermitian");
        out
    }
}

/// Conjugation table of a circuit on the logical qubits: images of each
/// X_i and Z_i with exact signs.
#[derive(Clone, Debug)]
pub struct LogicalAction {
    pub x_images: Vec<PauliLabel>,
    pub z_images: Vec<PauliLabel>,
}

/// Computes the conjugation table of a logical circuit.
pub fn logical_action(circuit: &CliffordCircuit) -> LogicalAction {
    let mk = circuit.m;
    let x_images = (0..mk).map(|i| circuit.conjugate(&PauliLabel::x(mk, i))).collect();
    let z_images = (0..mk).map(|i| circuit.conjugate(&PauliLabel::z(mk, i))).collect();
    LogicalAction { x_images, z_images }
}

/// Input/required-output pairs of physical Hermitian labels.
#[derive(Clone, Debug)]
pub struct LogicalConstraintSet {
    pub pairs: Vec<(PauliLabel, PauliLabel)>,
}

impl LogicalConstraintSet {
    /// Translates a logical conjugation table into physical constraints:
    /// lifted logical inputs map to lifted images, stabilizer generators
    /// map to themselves.
    pub fn from_action(code: &StabilizerCode, action: &LogicalAction) -> Self {
        let mut pairs = Vec::new();
        for (i, img) in action.x_images.iter().enumerate() {
            let input = code.logical_x[i].clone();
            let output = code.lift_logical(img.a(), img.b(), img.sign());
            pairs.push((input, output));
        }
        for (i, img) in action.z_images.iter().enumerate() {
            let input = code.logical_z[i].clone();
            let output = code.lift_logical(img.a(), img.b(), img.sign());
            pairs.push((input, output));
        }
        for s in &code.stabilizers {
            pairs.push((s.clone(), s.clone()));
        }
        LogicalConstraintSet { pairs }
    }
}

/// Completes the given rows (logical X, logical Z, stabilizers) with
/// destabilizer rows to a full symplectic basis.
fn complete_destabilizers(
    x_rows: &[BitVector],
    z_rows: &[BitVector],
    s_rows: &[BitVector],
) -> Result<Vec<BitVector>, LogicalError> {
    let two_m = s_rows.first().map(|r| r.len()).unwrap_or(0);
    let mut t_rows: Vec<BitVector> = Vec::new();
    for j in 0..s_rows.len() {
        // <xbar_i, t> = 0, <zbar_i, t> = 0, <s_i, t> = d_ij, <t_i, t> = 0
        let mut rows: Vec<BitVector> = Vec::new();
        let mut target: Vec<bool> = Vec::new();
        for r in x_rows.iter().chain(z_rows) {
            rows.push(r.clone());
            target.push(false);
        }
        for (i, r) in s_rows.iter().enumerate() {
            rows.push(r.clone());
            target.push(i == j);
        }
        for r in &t_rows {
            rows.push(r.clone());
            target.push(false);
        }
        // <u, t> = u Omega t^T: build matrix A with columns (Omega u^T)
        let a = symplectic_pairing_matrix(&rows, two_m);
        let y = BitVector::from_bools(&target);
        let sol = solve_affine(&a, &y)
            .map_err(|e| LogicalError::Inconsistent(format!("destabilizer {j}: {e}")))?;
        t_rows.push(sol.particular);
    }
    Ok(t_rows)
}

/// A (2m x q) matrix whose j-th column is Omega u_j^T, so that
/// `t * A = [<u_j, t>]_j`.
fn symplectic_pairing_matrix(rows: &[BitVector], two_m: usize) -> BitMatrix {
    let m = two_m / 2;
    let mut a = BitMatrix::zeros(two_m, rows.len());
    for (j, u) in rows.iter().enumerate() {
        // Omega u^T swaps the halves of u
        for i in 0..two_m {
            let src = if i < m { m + i } else { i - m };
            if u.get(src) {
                a.set(i, j, true);
            }
        }
    }
    a
}

/// Solves for every symplectic matrix satisfying the constraints: exactly
/// `2^{k(k+1)/2}` solutions, enumerated through the symmetric freedom of
/// adding stabilizer rows to destabilizer images (each diagonal choice is
/// one symplectic transvection by a stabilizer generator).
pub fn solve_symplectic(
    code: &StabilizerCode,
    constraints: &LogicalConstraintSet,
) -> Result<Vec<SymplecticMatrix>, LogicalError> {
    let m = code.m;
    let k = code.k;
    let mk = m - k;
    let x_in: Vec<BitVector> = constraints.pairs[0..mk].iter().map(|(i, _)| i.gamma()).collect();
    let z_in: Vec<BitVector> =
        constraints.pairs[mk..2 * mk].iter().map(|(i, _)| i.gamma()).collect();
    let s_in: Vec<BitVector> =
        constraints.pairs[2 * mk..].iter().map(|(i, _)| i.gamma()).collect();
    let x_out: Vec<BitVector> = constraints.pairs[0..mk].iter().map(|(_, o)| o.gamma()).collect();
    let z_out: Vec<BitVector> =
        constraints.pairs[mk..2 * mk].iter().map(|(_, o)| o.gamma()).collect();
    let s_out: Vec<BitVector> =
        constraints.pairs[2 * mk..].iter().map(|(_, o)| o.gamma()).collect();

    let t_in = complete_destabilizers(&x_in, &z_in, &s_in)?;
    let t_out = complete_destabilizers(&x_out, &z_out, &s_out)?;

    let basis_in: Vec<BitVector> =
        x_in.iter().chain(&z_in).chain(&s_in).chain(&t_in).cloned().collect();
    let b_in = BitMatrix::from_rows(&basis_in);
    let b_in_inv = b_in.inverse().map_err(|_| {
        LogicalError::Inconsistent("constraint rows do not extend to a basis".into())
    })?;

    // same pairing Gram structure on both sides, else the constraints are
    // not realizable by a symplectic map
    let gram = |rows: &[BitVector]| -> Vec<u8> {
        let mut g = Vec::new();
        for u in rows {
            for v in rows {
                g.push(symplectic_inner(u, v));
            }
        }
        g
    };
    let basis_out_base: Vec<BitVector> =
        x_out.iter().chain(&z_out).chain(&s_out).chain(&t_out).cloned().collect();
    if gram(&basis_in) != gram(&basis_out_base) {
        return Err(LogicalError::Inconsistent("pairing structure mismatch".into()));
    }

    let mut solutions = Vec::new();
    let free_params = k * (k + 1) / 2;
    for mask in 0u64..(1 << free_params) {
        // symmetric k x k matrix from the mask
        let mut sym = vec![vec![false; k]; k];
        let mut bit = 0;
        for i in 0..k {
            for j in i..k {
                let set = (mask >> bit) & 1 == 1;
                sym[i][j] = set;
                sym[j][i] = set;
                bit += 1;
            }
        }
        let mut t_mod = t_out.clone();
        for (i, row) in t_mod.iter_mut().enumerate() {
            for j in 0..k {
                if sym[i][j] {
                    row.xor_assign(&s_out[j]);
                }
            }
        }
        let basis_out: Vec<BitVector> =
            x_out.iter().chain(&z_out).chain(&s_out).chain(&t_mod).cloned().collect();
        let b_out = BitMatrix::from_rows(&basis_out);
        let f = b_in_inv.mul(&b_out).unwrap();
        let f = SymplecticMatrix::new(f)
            .map_err(|_| LogicalError::Inconsistent("solution not symplectic".into()))?;
        // constraint rows must map exactly
        for (inp, out) in basis_in.iter().zip(&basis_out).take(2 * mk + k) {
            debug_assert_eq!(&f.map_row(inp), out);
        }
        solutions.push(f);
    }
    Ok(solutions)
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalSynthesis {
    #[serde(skip)]
    pub circuit: CliffordCircuit,
    #[serde(skip)]
    pub solutions: Vec<SymplecticMatrix>,
    pub gate_counts: Vec<usize>,
    pub chosen: usize,
    pub pauli_fix: String,
    pub verified_dense: bool,
}

/// Synthesizes a physical circuit for the given logical circuit: picks the
/// minimum-gate-count symplectic solution, then appends the Pauli layer
/// that repairs every sign (logical images exact, stabilizers fixed to +1).
pub fn synthesize_logical(
    code: &StabilizerCode,
    logical_circuit: &CliffordCircuit,
) -> Result<LogicalSynthesis, LogicalError> {
    if logical_circuit.m != code.logical_qubits() {
        return Err(LogicalError::WrongLogicalQubits {
            expected: code.logical_qubits(),
            got: logical_circuit.m,
        });
    }
    let action = logical_action(logical_circuit);
    let constraints = LogicalConstraintSet::from_action(code, &action);
    let solutions = solve_symplectic(code, &constraints)?;

    let circuits: Vec<CliffordCircuit> = solutions.iter().map(synthesize).collect();
    let gate_counts: Vec<usize> = circuits.iter().map(CliffordCircuit::gate_count).collect();
    let chosen = gate_counts
        .iter()
        .enumerate()
        .min_by_key(|(_, &c)| c)
        .map(|(i, _)| i)
        .unwrap();
    let mut circuit = circuits[chosen].clone();

    // Signs produced by the chosen circuit vs required signs.
    let mut violations: Vec<bool> = Vec::new();
    let mut image_rows: Vec<BitVector> = Vec::new();
    for (input, required) in &constraints.pairs {
        let got = circuit.conjugate(input);
        debug_assert_eq!(got.gamma(), required.gamma(), "binary image mismatch");
        violations.push(got.phase_exp() != required.phase_exp());
        image_rows.push(required.gamma());
    }
    // Find [x|z] with <[x|z], image_i> = violation_i; conjugation by the
    // Pauli E(x, z) flips exactly the anticommuting images.
    let a = symplectic_pairing_matrix(&image_rows, 2 * code.m);
    let y = BitVector::from_bools(&violations);
    let sol = solve_affine(&a, &y).map_err(|_| LogicalError::NoSignFix)?;
    let fix = PauliLabel::from_gamma(&sol.particular, 0);
    let xs: Vec<usize> = fix.a().iter_ones().map(|j| j + 1).collect();
    let zs: Vec<usize> = fix.b().iter_ones().map(|j| j + 1).collect();
    if !xs.is_empty() {
        circuit.push(Gate::PauliX(xs));
    }
    if !zs.is_empty() {
        circuit.push(Gate::PauliZ(zs));
    }

    // Re-check all signs symbolically.
    for (input, required) in &constraints.pairs {
        let got = circuit.conjugate(input);
        if got != *required {
            return Err(LogicalError::NoSignFix);
        }
    }

    let verified_dense = if code.m <= 8 {
        verify_dense(code, &circuit, &constraints)
    } else {
        false
    };

    Ok(LogicalSynthesis {
        circuit,
        solutions,
        gate_counts,
        chosen,
        pauli_fix: fix.to_string(),
        verified_dense,
    })
}

/// Dense conjugation-with-signs verification: for each constraint pair,
/// `g . input = required . g` exactly.
pub fn verify_dense(
    code: &StabilizerCode,
    circuit: &CliffordCircuit,
    constraints: &LogicalConstraintSet,
) -> bool {
    assert!(code.m <= 8);
    let Ok(g) = circuit.dense_unitary() else { return false };
    for (input, required) in &constraints.pairs {
        let lhs = g.mul(&realize_dense(input).unwrap());
        let rhs = realize_dense(required).unwrap().mul(&g);
        if !lhs.equals(&rhs) {
            return false;
        }
    }
    true
}

/// Decomposes the image of a physical class in the code's symplectic basis
/// and returns the logical label, or None when the image leaves the
/// normalizer (nonzero destabilizer component).
pub fn logical_class_of_image(
    code: &StabilizerCode,
    t_rows: &[BitVector],
    image: &BitVector,
) -> Option<(BitVector, BitVector)> {
    let mk = code.logical_qubits();
    let mut u = BitVector::zeros(mk);
    let mut v = BitVector::zeros(mk);
    for i in 0..mk {
        // coefficient of xbar_i is read off against zbar_i and vice versa
        if symplectic_inner(image, &code.logical_z[i].gamma()) == 1 {
            u.set(i, true);
        }
        if symplectic_inner(image, &code.logical_x[i].gamma()) == 1 {
            v.set(i, true);
        }
    }
    for t in t_rows {
        if symplectic_inner(image, t) == 1 {
            return None; // stabilizer component outside the normalizer
        }
    }
    Some((u, v))
}

/// Destabilizer rows of the code's own basis (used by logical-mixing
/// diagnostics).
pub fn code_destabilizers(code: &StabilizerCode) -> Result<Vec<BitVector>, LogicalError> {
    let x_rows: Vec<BitVector> = code.logical_x.iter().map(PauliLabel::gamma).collect();
    let z_rows: Vec<BitVector> = code.logical_z.iter().map(PauliLabel::gamma).collect();
    let s_rows: Vec<BitVector> = code.stabilizers.iter().map(PauliLabel::gamma).collect();
    complete_destabilizers(&x_rows, &z_rows, &s_rows)
}
