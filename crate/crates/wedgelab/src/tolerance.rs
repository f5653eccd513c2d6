//! Numerical tolerances used by the floating-point layers.
//!
//! The structural layers (`exact`, `liealg`, `euler`, `gl2`, the certificate
//! core of `modcov`) use arbitrary-precision rationals and never consult a
//! tolerance: equality there is exact equality. The constants below govern
//! only the `f64` layers — spacetime geometry, sampled group elements, and
//! the standard-subspace calculus — and are referenced from tests so that a
//! change here is a deliberate, visible act.

/// Equality of geometric data (wedge generators, metric products, modular
/// data round-trips). Well-conditioned double-precision pipelines land
/// several orders of magnitude below this.
pub const GEOM_EQ: f64 = 1e-10;

/// Validation of freshly constructed group elements and covering-map images
/// (determinant one, group law, fixed rotation images). Tighter than
/// [`GEOM_EQ`] because nothing has been composed yet.
pub const CONSTRUCTION: f64 = 1e-12;

/// Defect threshold for sampled group-element checks: homomorphism samples
/// of the covering map and adjoint-orbit defects of sampled one-parameter
/// groups. Compositions of exponentials lose a little more precision than
/// single constructions.
pub const SAMPLED_GROUP: f64 = 1e-9;

/// Modular flow factorization through tensor products, which multiplies
/// spectral errors from two factors.
pub const TENSOR_FLOW: f64 = 1e-8;

/// Commutator norms that must vanish for an operator fixing a standard
/// subspace (commutation with `J` and `Δ`).
pub const FIX_COMMUTE: f64 = 1e-9;

/// Condition-number ceiling for modular operators accepted by the
/// standard-subspace layer. Beyond this, `Δ^{±1/2}` loses too many digits
/// to honour [`GEOM_EQ`] and construction is refused instead.
pub const CONDITION_CAP: f64 = 1e10;

/// Condition-number ceiling used when *generating* test data, far inside
/// [`CONDITION_CAP`] so that round-trip checks have headroom.
pub const CONDITION_TEST_DATA: f64 = 1e6;
