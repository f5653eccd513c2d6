//! Finite-dimensional modular theory: standard subspaces of ℂⁿ, their
//! Tomita operators, polar decomposition, symplectic complements, and the
//! transformation laws under (anti)unitaries.
//!
//! A real subspace `H ⊂ ℂⁿ` is *standard* when `H + iH = ℂⁿ` (cyclic) and
//! `H ∩ iH = {0}` (separating). Such a subspace determines an antilinear
//! involution `S : ξ + iη ↦ ξ − iη` on `H + iH`, whose polar decomposition
//! `S = JΔ^{1/2}` yields a conjugation `J` and a positive operator `Δ`
//! with `JΔJ = Δ⁻¹`; conversely the pair `(J, Δ)` recovers `H` as the
//! fixed space `ker(S − 1)`. Everything here is the finite-dimensional
//! shadow of that correspondence, with explicit matrices and explicit
//! tolerances.
//!
//! **Conventions.** Antilinear operators are stored as "matrix followed by
//! entrywise conjugation": `A ξ = M·conj(ξ)`. Compositions follow from
//! this mechanically: `A₁∘A₂ = M₁·conj(M₂)` is linear, and the adjoint of
//! `M∘conj` is `Mᵀ∘conj`. The inner product is antilinear in the *first*
//! argument, so the symplectic complement is the kernel of
//! `ξ ↦ Im⟨ξ, η_j⟩` over the generators `η_j` of `H`.

use crate::tolerance::{CONDITION_CAP, FIX_COMMUTE, GEOM_EQ};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C = Complex<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StdspaceError {
    #[error("subspace is not cyclic: realified span has dimension {realified_rank}, need {needed}")]
    NotCyclic { realified_rank: usize, needed: usize },
    #[error("subspace is not separating: H ∩ iH has real dimension {intersection_dim}")]
    NotSeparating { intersection_dim: usize },
    #[error("operator is not an involution (defect {defect:.3e})")]
    NotInvolution { defect: f64 },
    #[error("operator is not a conjugation (defect {defect:.3e})")]
    NotConjugation { defect: f64 },
    #[error("matrix is not positive definite (minimal eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("modular relation JΔJ = Δ⁻¹ fails (defect {defect:.3e})")]
    ModularRelationViolated { defect: f64 },
    #[error("fixed space has real dimension {found}, expected {expected}")]
    DegenerateFixedSpace { found: usize, expected: usize },
    #[error("modular operator too ill-conditioned ({condition:.3e})")]
    ConditioningError { condition: f64 },
    #[error("map is not isometric (defect {defect:.3e})")]
    NotIsometric { defect: f64 },
    #[error("unitary does not fix the subspace (gap {gap:.3e})")]
    SubspaceNotFixed { gap: f64 },
    #[error("tensor product dimension {requested} exceeds the guard of 64")]
    DimensionOverflow { requested: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// An antilinear operator on ℂⁿ in the convention `ξ ↦ M·conj(ξ)`.
///
/// All algebra is derived from the convention:
/// `(M₁∘conj)(M₂∘conj) = (M₁·conj(M₂))` (a *linear* operator),
/// `(M∘conj)∘L = (M·conj(L))∘conj` and `L∘(M∘conj) = (L·M)∘conj` for
/// linear `L`, and the adjoint is `Mᵀ∘conj`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    m: DMatrix<C>,
}

impl AntilinearOp {
    pub fn new(m: DMatrix<C>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "antilinear operators are square");
        AntilinearOp { m }
    }

    /// Entrywise conjugation `ξ ↦ conj(ξ)` (the matrix is the identity).
    pub fn conjugation(n: usize) -> Self {
        AntilinearOp { m: DMatrix::identity(n, n) }
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn apply(&self, v: &DVector<C>) -> DVector<C> {
        &self.m * v.conjugate()
    }

    /// Composition with another antilinear operator — a linear operator
    /// with matrix `M₁·conj(M₂)`.
    pub fn compose_antilinear(&self, other: &AntilinearOp) -> DMatrix<C> {
        &self.m * other.m.conjugate()
    }

    /// Post-compose with a linear operator: `self ∘ L = (M·conj(L))∘conj`.
    pub fn after_linear(&self, l: &DMatrix<C>) -> AntilinearOp {
        AntilinearOp { m: &self.m * l.conjugate() }
    }

    /// Pre-compose with a linear operator: `L ∘ self = (L·M)∘conj`.
    pub fn before_linear(&self, l: &DMatrix<C>) -> AntilinearOp {
        AntilinearOp { m: l * &self.m }
    }

    /// Adjoint with respect to the standard inner product: `Mᵀ∘conj`.
    pub fn adjoint(&self) -> AntilinearOp {
        AntilinearOp { m: self.m.transpose() }
    }

    /// The operator as a real-linear map on the realification ℝ^{2n}
    /// (coordinates stacked as `(Re ξ, Im ξ)`).
    pub fn realify(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.m[(i, j)];
                out[(i, j)] = z.re;
                out[(i, j + n)] = z.im;
                out[(i + n, j)] = z.im;
                out[(i + n, j + n)] = -z.re;
            }
        }
        out
    }

    /// Frobenius defect of `A² = 1`.
    pub fn involution_defect(&self) -> f64 {
        let n = self.dim();
        (self.compose_antilinear(self) - DMatrix::<C>::identity(n, n)).norm()
    }

    /// Frobenius defect of `A*A = 1` (antiunitarity).
    pub fn isometry_defect(&self) -> f64 {
        let n = self.dim();
        (self.m.adjoint() * &self.m - DMatrix::<C>::identity(n, n)).norm()
    }
}

/// Realification of a *linear* operator: `(Re ξ, Im ξ)` coordinates.
pub fn realify_linear(m: &DMatrix<C>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
            out[(i + n, j + n)] = z.re;
        }
    }
    out
}

pub fn realify_vector(v: &DVector<C>) -> DVector<f64> {
    let n = v.len();
    DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

pub fn complexify_vector(v: &DVector<f64>) -> DVector<C> {
    let n = v.len() / 2;
    DVector::from_fn(n, |i, _| C::new(v[i], v[i + n]))
}

/// Hermitian functional calculus: `f` applied to the eigenvalues of a
/// Hermitian matrix.
fn hermitian_map(m: &DMatrix<C>, f: impl Fn(f64) -> C) -> DMatrix<C> {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { f(eig.eigenvalues[i]) } else { C::new(0.0, 0.0) });
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn eigen_range(m: &DMatrix<C>) -> (f64, f64) {
    let eig = m.clone().symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    (lo, hi)
}

/// Spectral (operator 2-) norm, via the Gram matrix: the general-purpose
/// SVD is avoided throughout this module because its iteration can return
/// inaccurate factors on near-degenerate inputs, while the symmetric
/// eigensolver is reliable.
fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Relative cutoff (on the singular-value scale) separating "zero" from
/// "nonzero" in rank and kernel decisions. Squared it stays above the
/// Gram-matrix noise floor of the symmetric eigensolver.
const RANK_CUTOFF: f64 = 1e-6;

/// Rank of a real matrix: the number of Gram eigenvalues above the
/// relative cutoff.
fn gram_rank(m: &DMatrix<f64>) -> usize {
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1.0);
    eig.eigenvalues
        .iter()
        .filter(|&&l| l > RANK_CUTOFF * RANK_CUTOFF * lambda_max)
        .count()
}

/// Orthonormal basis of the kernel of a real matrix: Gram eigenvectors
/// with eigenvalue below the relative cutoff.
fn gram_kernel(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1.0);
    let mut out = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= RANK_CUTOFF * RANK_CUTOFF * lambda_max {
            out.push(eig.eigenvectors.column(k).into_owned());
        }
    }
    out
}

/// The modular pair of a standard subspace: a conjugation `J` (antiunitary
/// involution) and a positive operator `Δ` satisfying `JΔJ = Δ⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    j: AntilinearOp,
    delta: DMatrix<C>,
}

impl ModularData {
    /// Validates all invariants: `J` antiunitary, `J² = 1`, `Δ` Hermitian
    /// positive definite, and `JΔJ = Δ⁻¹`, each within `1e−10`.
    pub fn new(j: AntilinearOp, delta: DMatrix<C>) -> Result<Self, StdspaceError> {
        let n = j.dim();
        if delta.nrows() != n || delta.ncols() != n {
            return Err(StdspaceError::DimensionMismatch { left: n, right: delta.nrows() });
        }
        let iso = j.isometry_defect();
        if iso > GEOM_EQ {
            return Err(StdspaceError::NotConjugation { defect: iso });
        }
        let inv = j.involution_defect();
        if inv > GEOM_EQ {
            return Err(StdspaceError::NotConjugation { defect: inv });
        }
        let herm = (&delta - delta.adjoint()).norm();
        if herm > GEOM_EQ {
            return Err(StdspaceError::NotPositive { min_eigenvalue: f64::NAN });
        }
        let (lo, _hi) = eigen_range(&delta);
        if lo <= 0.0 {
            return Err(StdspaceError::NotPositive { min_eigenvalue: lo });
        }
        // JΔJ as a linear operator: K·conj(Δ)·conj(K). The defect is
        // measured relative to ‖Δ⁻¹‖ so large-spectrum pairs (tensor
        // products) are judged on the same scale as small ones.
        let k = j.matrix();
        let jdj = k * delta.conjugate() * k.conjugate();
        let delta_inv = hermitian_map(&delta, |l| C::new(1.0 / l, 0.0));
        let defect = (jdj - &delta_inv).norm() / delta_inv.norm().max(1.0);
        if defect > GEOM_EQ {
            return Err(StdspaceError::ModularRelationViolated { defect });
        }
        Ok(ModularData { j, delta })
    }

    /// Bypasses validation so tests can feed deliberately broken pairs to
    /// the reconstruction path.
    #[cfg(test)]
    pub(crate) fn new_unchecked(j: AntilinearOp, delta: DMatrix<C>) -> Self {
        ModularData { j, delta }
    }

    pub fn j(&self) -> &AntilinearOp {
        &self.j
    }

    pub fn delta(&self) -> &DMatrix<C> {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `Δ^p` by Hermitian functional calculus.
    pub fn delta_power(&self, p: f64) -> DMatrix<C> {
        hermitian_map(&self.delta, |l| C::new(l.powf(p), 0.0))
    }

    /// The unitary modular flow `Δ^{it} = exp(it·log Δ)`.
    pub fn flow(&self, t: f64) -> DMatrix<C> {
        hermitian_map(&self.delta, |l| (C::new(0.0, t * l.ln())).exp())
    }

    /// The modular involution `S = JΔ^{1/2}`.
    pub fn tomita(&self) -> AntilinearOp {
        self.j.after_linear(&self.delta_power(0.5))
    }
}

/// Polar decomposition of an antilinear involution: `Δ = S*S` (a positive
/// linear operator, `Mᵀ·conj(M)` in matrix form) and `J = S∘Δ^{−1/2}`.
pub fn polar(s: &AntilinearOp) -> Result<ModularData, StdspaceError> {
    let defect = s.involution_defect();
    if defect > GEOM_EQ {
        return Err(StdspaceError::NotInvolution { defect });
    }
    let delta = s.adjoint().compose_antilinear(s);
    let inv_sqrt = hermitian_map(&delta, |l| C::new(1.0 / l.sqrt(), 0.0));
    let j = s.after_linear(&inv_sqrt);
    ModularData::new(j, delta)
}

/// A standard subspace `H ⊂ ℂⁿ`: a real-linear subspace of real dimension
/// `n` that is cyclic (`H + iH = ℂⁿ`) and separating (`H ∩ iH = {0}`),
/// stored as `n` spanning vectors together with its modular pair.
#[derive(Debug, Clone)]
pub struct StandardSubspace {
    dim: usize,
    basis: Vec<DVector<C>>,
    modular: ModularData,
}

impl StandardSubspace {
    /// The real form `ℝⁿ ⊂ ℂⁿ`: `J` is entrywise conjugation and `Δ = 1`.
    pub fn real_form(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| DVector::from_fn(n, |k, _| if k == i { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }))
            .collect();
        StandardSubspace {
            dim: n,
            basis,
            modular: ModularData {
                j: AntilinearOp::conjugation(n),
                delta: DMatrix::identity(n, n),
            },
        }
    }

    /// Build the subspace spanned over ℝ by `vectors`, validating
    /// standardness and solving `ξ + iη ↦ ξ − iη` for the modular
    /// involution: if `V` has the vectors as columns, `S` acts as
    /// `Vc ↦ V·conj(c)`, so `M_S = V·conj(V)⁻¹`.
    pub fn from_real_basis(vectors: &[DVector<C>]) -> Result<Self, StdspaceError> {
        let n = vectors.len();
        if n == 0 {
            return Err(StdspaceError::NotCyclic { realified_rank: 0, needed: 0 });
        }
        for v in vectors {
            if v.len() != n {
                return Err(StdspaceError::DimensionMismatch { left: n, right: v.len() });
            }
        }
        // Real span of the generators, and of the generators together
        // with their i-multiples.
        let mut gen = DMatrix::zeros(2 * n, n);
        let mut full = DMatrix::zeros(2 * n, 2 * n);
        for (j, v) in vectors.iter().enumerate() {
            let r = realify_vector(v);
            let iv = realify_vector(&(v * C::new(0.0, 1.0)));
            gen.set_column(j, &r);
            full.set_column(j, &r);
            full.set_column(j + n, &iv);
        }
        let d1 = gram_rank(&gen);
        let d2 = gram_rank(&full);
        let intersection_dim = 2 * d1 - d2;
        if intersection_dim > 0 {
            return Err(StdspaceError::NotSeparating { intersection_dim });
        }
        if d2 < 2 * n {
            return Err(StdspaceError::NotCyclic { realified_rank: d2, needed: 2 * n });
        }
        let v_mat = DMatrix::from_columns(vectors);
        let v_conj_inv = v_mat
            .conjugate()
            .try_inverse()
            .expect("full realified rank implies complex invertibility");
        let s = AntilinearOp::new(&v_mat * v_conj_inv);
        let modular = polar(&s)?;
        Ok(StandardSubspace { dim: n, basis: vectors.to_vec(), modular })
    }

    /// Recover the subspace from its modular pair as the fixed space of
    /// `S = JΔ^{1/2}` acting real-linearly on ℝ^{2n}: the kernel of
    /// `S_ℝ − 1`, which for a genuine modular pair has real dimension
    /// exactly `n`.
    pub fn from_modular_data(md: ModularData) -> Result<Self, StdspaceError> {
        let n = md.dim();
        let (lo, hi) = eigen_range(&md.delta);
        let condition = hi / lo;
        if condition > CONDITION_CAP {
            return Err(StdspaceError::ConditioningError { condition });
        }
        let s_real = md.tomita().realify();
        let shifted = s_real - DMatrix::<f64>::identity(2 * n, 2 * n);
        let basis: Vec<_> = gram_kernel(&shifted)
            .iter()
            .map(complexify_vector)
            .collect();
        if basis.len() != n {
            return Err(StdspaceError::DegenerateFixedSpace { found: basis.len(), expected: n });
        }
        Ok(StandardSubspace { dim: n, basis, modular: md })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[DVector<C>] {
        &self.basis
    }

    pub fn modular(&self) -> &ModularData {
        &self.modular
    }

    /// The modular involution `S = JΔ^{1/2}` fixing exactly this subspace.
    pub fn tomita(&self) -> AntilinearOp {
        self.modular.tomita()
    }

    /// Orthogonal projection onto the realified subspace in ℝ^{2n}.
    fn real_projection(&self) -> DMatrix<f64> {
        let cols: Vec<_> = self.basis.iter().map(realify_vector).collect();
        let b = DMatrix::from_columns(&cols);
        let qr = b.qr();
        let q = qr.q();
        &q * q.transpose()
    }

    /// Gap metric: spectral norm of the difference of the realified
    /// orthogonal projections. Zero iff the subspaces coincide.
    pub fn gap(&self, other: &StandardSubspace) -> f64 {
        assert_eq!(self.dim, other.dim, "gap needs matching ambient dimension");
        spectral_norm(&(self.real_projection() - other.real_projection()))
    }

    /// Symplectic complement `H′ = {ξ : Im⟨ξ, η⟩ = 0 ∀η ∈ H}`, computed as
    /// the real kernel of the pairing rows `[Im(η_j)ᵀ, −Re(η_j)ᵀ]`. For a
    /// standard subspace the result is standard with `S_{H′} = S_H*`,
    /// `Δ_{H′} = Δ_H⁻¹`, and `J_{H′} = J_H`.
    pub fn symplectic_complement(&self) -> StandardSubspace {
        let n = self.dim;
        let mut rows = DMatrix::zeros(n, 2 * n);
        for (j, eta) in self.basis.iter().enumerate() {
            for k in 0..n {
                rows[(j, k)] = eta[k].im;
                rows[(j, k + n)] = -eta[k].re;
            }
        }
        let kernel: Vec<_> = gram_kernel(&rows).iter().map(complexify_vector).collect();
        let complement = StandardSubspace::from_real_basis(&kernel)
            .expect("the symplectic complement of a standard subspace is standard");
        debug_assert!(
            (complement.tomita().matrix() - self.tomita().adjoint().matrix()).norm()
                < GEOM_EQ * (1.0 + self.tomita().matrix().norm()),
            "complement involution must be the adjoint"
        );
        complement
    }

    /// Transform by a unitary or antiunitary map `u`. The image basis is
    /// `u·H`, and the modular pair obeys the covariance law
    /// `Δ_{uH} = uΔu*` and `J_{uH} = uJu*` (operator compositions, valid
    /// for both kinds — `S_{uH} = uSu*` and the polar parts follow). For
    /// antiunitary `u` the antilinear conjugation is what inverts the
    /// modular flow: `Δ_{uH}^{it} = uΔ^{−it}u*`.
    pub fn transform(&self, u: &Isometry) -> Result<StandardSubspace, StdspaceError> {
        let n = self.dim;
        let (basis, modular) = match u {
            Isometry::Unitary(m) => {
                if m.nrows() != n {
                    return Err(StdspaceError::DimensionMismatch { left: n, right: m.nrows() });
                }
                let defect = (m.adjoint() * m - DMatrix::<C>::identity(n, n)).norm();
                if defect > GEOM_EQ {
                    return Err(StdspaceError::NotIsometric { defect });
                }
                let basis: Vec<_> = self.basis.iter().map(|v| m * v).collect();
                let delta = m * &self.modular.delta * m.adjoint();
                // uJu⁻¹ = (U·K·Uᵀ)∘conj.
                let j = AntilinearOp::new(m * self.modular.j.matrix() * m.transpose());
                (basis, ModularData::new(j, delta)?)
            }
            Isometry::Antiunitary(a) => {
                if a.dim() != n {
                    return Err(StdspaceError::DimensionMismatch { left: n, right: a.dim() });
                }
                let defect = a.isometry_defect();
                if defect > GEOM_EQ {
                    return Err(StdspaceError::NotIsometric { defect });
                }
                let nmat = a.matrix();
                let basis: Vec<_> = self.basis.iter().map(|v| a.apply(v)).collect();
                // UΔU* = N·conj(Δ)·N* for U = N∘conj; the antilinearity of
                // U is what turns this into Δ⁻¹ when U = J.
                let delta = nmat * self.modular.delta.conjugate() * nmat.adjoint();
                // UJU* = (N·conj(K)·Nᵀ)∘conj.
                let j = AntilinearOp::new(
                    nmat * self.modular.j.matrix().conjugate() * nmat.transpose(),
                );
                (basis, ModularData::new(j, delta)?)
            }
        };
        // The transformed pair must fix the transformed basis — this ties
        // the covariance formulas to the actual image subspace.
        debug_assert!(
            {
                let s = modular.tomita();
                basis.iter().all(|v| {
                    (s.apply(v) - v).norm() <= FIX_COMMUTE * v.norm().max(1.0)
                })
            },
            "transformed modular pair does not fix the transformed subspace"
        );
        Ok(StandardSubspace { dim: n, basis, modular })
    }

    /// Direct sum: real direct sum of the subspaces with `J = J₁ ⊕ J₂`
    /// and `Δ = Δ₁ ⊕ Δ₂`.
    pub fn dsum(&self, other: &StandardSubspace) -> StandardSubspace {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let embed_left = |v: &DVector<C>| {
            DVector::from_fn(n, |k, _| if k < n1 { v[k] } else { C::new(0.0, 0.0) })
        };
        let embed_right = |v: &DVector<C>| {
            DVector::from_fn(n, |k, _| if k >= n1 { v[k - n1] } else { C::new(0.0, 0.0) })
        };
        let mut basis: Vec<_> = self.basis.iter().map(embed_left).collect();
        basis.extend(other.basis.iter().map(embed_right));
        let mut k_mat = DMatrix::zeros(n, n);
        let mut delta = DMatrix::zeros(n, n);
        k_mat.view_mut((0, 0), (n1, n1)).copy_from(self.modular.j.matrix());
        k_mat.view_mut((n1, n1), (n2, n2)).copy_from(other.modular.j.matrix());
        delta.view_mut((0, 0), (n1, n1)).copy_from(&self.modular.delta);
        delta.view_mut((n1, n1), (n2, n2)).copy_from(&other.modular.delta);
        StandardSubspace {
            dim: n,
            basis,
            modular: ModularData { j: AntilinearOp::new(k_mat), delta },
        }
    }

    /// Tensor product: the real span of the product vectors
    /// `v_i ⊗ w_j`, which is the standard subspace of the antilinear
    /// involution `S₁ ⊗ S₂`, with `J = J₁ ⊗ J₂` and `Δ = Δ₁ ⊗ Δ₂`.
    /// Refuses products beyond ambient dimension 64.
    pub fn tensor(&self, other: &StandardSubspace) -> Result<StandardSubspace, StdspaceError> {
        let n = self.dim * other.dim;
        if n > 64 {
            return Err(StdspaceError::DimensionOverflow { requested: n });
        }
        let mut basis = Vec::with_capacity(n);
        for v in &self.basis {
            for w in &other.basis {
                basis.push(v.kronecker(w));
            }
        }
        let k_mat = self.modular.j.matrix().kronecker(other.modular.j.matrix());
        let delta = self.modular.delta.kronecker(&other.modular.delta);
        Ok(StandardSubspace {
            dim: n,
            basis,
            modular: ModularData { j: AntilinearOp::new(k_mat), delta },
        })
    }

    /// Test whether a unitary fixes this subspace, and if so report its
    /// commutators with the modular pair: a unitary with `ζH = H`
    /// necessarily commutes with both `J` and `Δ`.
    pub fn fix_and_commute(&self, zeta: &DMatrix<C>) -> Result<FixReport, StdspaceError> {
        let n = self.dim;
        if zeta.nrows() != n {
            return Err(StdspaceError::DimensionMismatch { left: n, right: zeta.nrows() });
        }
        let defect = (zeta.adjoint() * zeta - DMatrix::<C>::identity(n, n)).norm();
        if defect > GEOM_EQ {
            return Err(StdspaceError::NotIsometric { defect });
        }
        let moved = self
            .transform(&Isometry::Unitary(zeta.clone()))
            .expect("isometry already checked");
        let gap = self.gap(&moved);
        if gap > GEOM_EQ {
            return Err(StdspaceError::SubspaceNotFixed { gap });
        }
        let k = self.modular.j.matrix();
        let j_commutator = (zeta * k - k * zeta.conjugate()).norm();
        let delta_commutator = (zeta * &self.modular.delta - &self.modular.delta * zeta).norm();
        Ok(FixReport {
            gap,
            j_commutator,
            delta_commutator,
            commutes: j_commutator < FIX_COMMUTE && delta_commutator < FIX_COMMUTE,
        })
    }

    /// Serializable snapshot: spanning vectors as columns of `[re, im]`
    /// pairs.
    pub fn report(&self) -> SubspaceReport {
        SubspaceReport {
            dim: self.dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

/// A unitary or antiunitary map of ℂⁿ, the two kinds of symmetry a
/// standard subspace can be moved by.
#[derive(Debug, Clone)]
pub enum Isometry {
    Unitary(DMatrix<C>),
    Antiunitary(AntilinearOp),
}

/// Result of [`StandardSubspace::fix_and_commute`]: the subspace gap under
/// the unitary and the Frobenius norms of its commutators with `J` and
/// `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixReport {
    pub gap: f64,
    pub j_commutator: f64,
    pub delta_commutator: f64,
    pub commutes: bool,
}

/// JSON form of a standard subspace: the spanning vectors column by
/// column, each entry a `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceReport {
    pub dim: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

/// A random standard subspace of ℂⁿ, built from a random modular pair: `Δ`
/// has eigenvalues in pairs `(λ, 1/λ)` with `λ` drawn from `[0.05, 20]`
/// (plus a fixed point `1` in odd dimension), `J` swaps each pair, and the
/// block pair is conjugated by a random unitary. The eigenvalue ratio stays
/// at most `400²`, far inside the conditioning cap.
pub fn random_standard_subspace<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StandardSubspace {
    let mut k_mat = DMatrix::<C>::zeros(n, n);
    let mut delta = DMatrix::<C>::zeros(n, n);
    let mut i = 0;
    while i + 1 < n {
        let lambda: f64 = rng.gen_range(0.05..=20.0);
        delta[(i, i)] = C::new(lambda, 0.0);
        delta[(i + 1, i + 1)] = C::new(1.0 / lambda, 0.0);
        k_mat[(i, i + 1)] = C::new(1.0, 0.0);
        k_mat[(i + 1, i)] = C::new(1.0, 0.0);
        i += 2;
    }
    if i < n {
        delta[(i, i)] = C::new(1.0, 0.0);
        k_mat[(i, i)] = C::new(1.0, 0.0);
    }
    let raw = DMatrix::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)));
    let u = raw.qr().q();
    let delta_c = &u * delta * u.adjoint();
    let k_c = &u * k_mat * u.transpose();
    let md = ModularData::new(AntilinearOp::new(k_c), delta_c)
        .expect("conjugated block pair satisfies the modular relation");
    StandardSubspace::from_modular_data(md).expect("generated pair is well conditioned")
}
