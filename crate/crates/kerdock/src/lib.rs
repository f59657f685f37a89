//! Kerdock codes over Z4, the stabilizer states and mutually unbiased bases
//! they generate, the PSL(2, 2^m) group of Clifford symmetries, and the
//! resulting unitary 2-design together with circuit synthesis for it.
//!
//! The crate is organized around a small stack of subsystems:
//!
//! - [`f2linalg`]: bit-packed vectors and matrices over F2.
//! - [`gf2m`]: GF(2^m) realized by binary matrices (companion matrix `A`,
//!   trace Gram matrix `W`, Frobenius matrix `R`).
//! - [`pauli`]: Heisenberg-Weyl labels `i^k E(a,b)` with exact phase
//!   bookkeeping and an exact dense realization used as the oracle in tests.
//! - [`kerdock_codes`]: Kerdock / Delsarte-Goethals matrix sets, the
//!   Z4-linear codes they define, the Gray map and weight distributions.
//! - [`mub`]: the N+1 mutually unbiased stabilizer bases and their exact
//!   Gaussian-integer inner-product laws.
//! - [`design`]: binary symplectic matrices, the Möbius symmetry group and
//!   its uniform sampler, the commutation graph on Pauli classes, Pauli
//!   mixing and twirl verification.
//! - [`circuit_synth`]: factorization of symplectic matrices into elementary
//!   forms and translation to Clifford gate lists.
//! - [`logical_synth`]: synthesis of physical circuits realizing a logical
//!   Clifford operator on a stabilizer code.
//!
//! All verification-style routines return report values; nothing asserts
//! internally, so callers (CLI, tests, bindings) decide how to surface
//! failures.

pub mod circuit_synth;
pub mod design;
pub mod f2linalg;
pub mod gf2m;
pub mod kerdock_codes;
pub mod logical_synth;
pub mod mub;
pub mod pauli;

pub use f2linalg::{BitMatrix, BitVector};
pub use gf2m::{make_context, FieldContext, FieldElement};
pub use pauli::PauliLabel;
