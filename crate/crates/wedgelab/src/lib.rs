//! Exact and numerical machinery for wedge geometry in Lie theory and for
//! the finite-dimensional standard-subspace calculus built on top of it.
//!
//! The crate is organised in layers:
//!
//! * [`exact`] — arbitrary-precision rational matrices, kernels, and solvers.
//!   Everything structural (gradings, brackets, certificates) is computed here,
//!   with no floating point anywhere.
//! * [`liealg`] — concrete matrix Lie algebras (`sl(n)`, `gl(n)`, `so(1,d)`,
//!   `sl(2) ⊕ ℝξ`) with verified structure constants.
//! * [`euler`] — Euler elements (`ad x` diagonalizable with spectrum in
//!   `{-1, 0, 1}`), their 3-gradings and involutions, the symmetry test, and
//!   the classification catalog for simple root systems.
//! * [`wedge`] — abstract wedge couples `(x, σ)` and the twisted adjoint
//!   action of a graded group.
//! * [`gl2`] — the canonical `gl(2)`-subalgebra attached to a non-symmetric
//!   Euler element, with its central/`sl(2)` decomposition `h = h_c - h₁`.
//! * [`spacetime`] — the two-dimensional de Sitter and three-dimensional
//!   Minkowski models: the `2×2` matrix picture of `ℝ^{1,2}`, the covering
//!   map `SL(2,ℝ) → SO(1,2)↑`, and wedge regions.
//! * [`modcov`] — exact certificates showing when a wedge net constructed
//!   from a pair of commuting Euler elements cannot transform covariantly
//!   under the modular flow of the ambient group.
//! * [`stdspace`] — standard subspaces of `ℂⁿ` with their Tomita operators,
//!   modular data, symplectic complements, sums and tensor products.
//! * [`net`] — a small term calculus for subspace nets: parsing, printing,
//!   rule-based normalization, and label-level identity checking (twisted
//!   duality, coset equality, the non-covariant tensor chain).
//!
//! The [`suite`] module packages the end-to-end checks behind the `wedgelab`
//! command-line tool so they can be run programmatically.

#![forbid(unsafe_code)]

pub mod exact;
pub mod liealg;
pub mod euler;
pub mod wedge;
pub mod gl2;
pub mod spacetime;
pub mod modcov;
pub mod stdspace;
pub mod net;
pub mod suite;
pub mod tolerance;

pub use exact::{Rat, RatMatrix};
pub use liealg::{LieAlgebra, LieElement};
pub use euler::EulerElement;
