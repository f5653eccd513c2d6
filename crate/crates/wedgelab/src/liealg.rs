//! Concrete matrix Lie algebras over `ℚ`.
//!
//! An algebra is a list of basis matrices in a defining representation
//! together with structure constants computed — and verified — at
//! construction time. Closure, antisymmetry and the Jacobi identity are
//! checked exactly; a [`LieAlgebra`] value is therefore evidence that its
//! brackets are consistent, not just a container.
//!
//! Four families are built in:
//!
//! * `sl(n)` — traceless `n × n` matrices, basis `{E_ij (i≠j)}` followed by
//!   `{E_ii − E_{i+1,i+1}}`;
//! * `gl(n)` — all `E_ij`;
//! * `so(1,d)` — Lorentz boosts `E_{0ℓ} + E_{ℓ0}` followed by spatial
//!   rotations `E_ij − E_ji`;
//! * `sl(2) ⊕ ℝξ` — the σ-basis of `sl(2)` extended by the central element
//!   `ξ = 1₂` (realized inside `gl(2)`, where `ξ` is honestly central).
//!
//! Anything else can be built with [`LieAlgebra::from_basis`] or carved out
//! of an existing algebra with [`LieAlgebra::subalgebra`].

use crate::exact::{frac, rat, vec_is_zero, Rat, RatMatrix};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Which family an algebra belongs to. Some higher-level operations (the
/// defining-spectrum symmetry test, root bookkeeping) are only available for
/// specific kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `sl(n, ℝ)`, traceless matrices.
    Sl(usize),
    /// `gl(n, ℝ)`, all matrices.
    Gl(usize),
    /// `so(1, d)`, the Lorentz algebra of `ℝ^{1,d}`.
    So1d(usize),
    /// `sl(2, ℝ) ⊕ ℝξ` with `ξ` central, realized as `gl(2)` in the σ-basis.
    Sl2PlusCenter,
    /// Anything constructed from an explicit basis.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("bracket of basis elements {i} and {j} leaves the span")]
    NotClosed { i: usize, j: usize },
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiFailure { i: usize, j: usize, k: usize },
    #[error("matrix is not an element of the algebra")]
    NotInAlgebra,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("operation requires algebra kind {required}, got {got}")]
    WrongKind { required: String, got: String },
}

/// A finite-dimensional Lie algebra of rational matrices.
pub struct LieAlgebra {
    name: String,
    kind: AlgebraKind,
    matrix_size: usize,
    basis: Vec<RatMatrix>,
    /// Sparse structure constants: `structure[i][j]` lists `(k, c)` with
    /// `[b_i, b_j] = Σ c · b_k`, stored for all ordered pairs.
    structure: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim())
    }
}

impl LieAlgebra {
    /// `sl(n, ℝ)` with basis `E_ij (i ≠ j)` in row-major order followed by
    /// the Cartan differences `E_ii − E_{i+1,i+1}`.
    pub fn sl(n: usize) -> Arc<Self> {
        assert!(n >= 2, "sl(n) needs n >= 2");
        let mut basis = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(RatMatrix::elementary(n, i, j));
                }
            }
        }
        for i in 0..n - 1 {
            let h = RatMatrix::elementary(n, i, i) - RatMatrix::elementary(n, i + 1, i + 1);
            basis.push(h);
        }
        Self::from_basis(&format!("sl({n})"), AlgebraKind::Sl(n), basis)
            .expect("sl(n) basis is closed")
    }

    /// `gl(n, ℝ)` with basis all `E_ij` in row-major order.
    pub fn gl(n: usize) -> Arc<Self> {
        assert!(n >= 1, "gl(n) needs n >= 1");
        let mut basis = Vec::new();
        for i in 0..n {
            for j in 0..n {
                basis.push(RatMatrix::elementary(n, i, j));
            }
        }
        Self::from_basis(&format!("gl({n})"), AlgebraKind::Gl(n), basis)
            .expect("gl(n) basis is closed")
    }

    /// `so(1, d)` acting on coordinates `(x₀, …, x_d)`: boosts
    /// `k_ℓ = E_{0ℓ} + E_{ℓ0}` (ℓ = 1..d) followed by rotations
    /// `E_ij − E_ji` (1 ≤ i < j ≤ d).
    pub fn so1d(d: usize) -> Arc<Self> {
        assert!(d >= 1, "so(1,d) needs d >= 1");
        let n = d + 1;
        let mut basis = Vec::new();
        for l in 1..=d {
            basis.push(RatMatrix::elementary(n, 0, l) + RatMatrix::elementary(n, l, 0));
        }
        for i in 1..=d {
            for j in i + 1..=d {
                basis.push(RatMatrix::elementary(n, i, j) - RatMatrix::elementary(n, j, i));
            }
        }
        Self::from_basis(&format!("so(1,{d})"), AlgebraKind::So1d(d), basis)
            .expect("so(1,d) basis is closed")
    }

    /// `sl(2, ℝ) ⊕ ℝξ` in the basis `(σ₀, σ₁, σ₂, ξ)` where
    ///
    /// ```text
    /// σ₀ = ½ [0 −1; 1 0],   σ₁ = ½ [0 1; 1 0],   σ₂ = ½ [1 0; 0 −1],   ξ = 1₂.
    /// ```
    ///
    /// The brackets are `[σ₁,σ₂] = σ₀`, `[σ₂,σ₀] = −σ₁`, `[σ₀,σ₁] = −σ₂`,
    /// and `ξ` is central.
    pub fn sl2_plus_center() -> Arc<Self> {
        let basis = vec![sigma0(), sigma1(), sigma2(), RatMatrix::identity(2)];
        Self::from_basis("sl(2)+Rxi", AlgebraKind::Sl2PlusCenter, basis)
            .expect("sl(2) ⊕ ℝξ basis is closed")
    }

    /// Build an algebra from an explicit basis, computing and verifying its
    /// structure constants. Fails if the matrices are dependent, if some
    /// bracket leaves the span, or if the Jacobi identity breaks (the last
    /// cannot happen for honest matrix brackets; the check guards against
    /// construction bugs, not against mathematics).
    pub fn from_basis(
        name: &str,
        kind: AlgebraKind,
        basis: Vec<RatMatrix>,
    ) -> Result<Arc<Self>, LieError> {
        let dim = basis.len();
        assert!(dim > 0, "empty basis");
        let ms = basis[0].nrows();
        assert!(
            basis.iter().all(|b| b.nrows() == ms && b.ncols() == ms),
            "basis matrices must be square and of equal size"
        );

        // Flattened basis matrices as columns, for coordinate extraction.
        let mut b = RatMatrix::zeros(ms * ms, dim);
        for (k, m) in basis.iter().enumerate() {
            for (r, e) in m.flatten().into_iter().enumerate() {
                b[(r, k)] = e;
            }
        }
        if b.rank() < dim {
            return Err(LieError::DependentBasis);
        }

        let mut structure = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let br = basis[i].commutator(&basis[j]);
                let coords = b
                    .solve(&br.flatten())
                    .map_err(|_| LieError::NotClosed { i, j })?;
                let sparse: Vec<(usize, Rat)> = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                structure[j][i] = sparse.iter().map(|(k, c)| (*k, -c.clone())).collect();
                structure[i][j] = sparse;
            }
        }

        let alg = LieAlgebra { name: name.to_string(), kind, matrix_size: ms, basis, structure };
        alg.verify_jacobi()?;
        Ok(Arc::new(alg))
    }

    /// Carve a subalgebra out of this one: the given elements become the
    /// basis of a new [`LieAlgebra`] (in the same defining representation),
    /// after an exact closure check.
    pub fn subalgebra(
        self: &Arc<Self>,
        name: &str,
        elements: &[LieElement],
    ) -> Result<Arc<Self>, LieError> {
        for e in elements {
            if !e.algebra.compatible(self) {
                return Err(LieError::AlgebraMismatch);
            }
        }
        let basis = elements.iter().map(LieElement::matrix).collect();
        Self::from_basis(name, AlgebraKind::Custom, basis)
    }

    fn verify_jacobi(&self) -> Result<(), LieError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let mut acc = vec![Rat::zero(); dim];
                    self.jacobi_term(i, j, k, &mut acc);
                    self.jacobi_term(j, k, i, &mut acc);
                    self.jacobi_term(k, i, j, &mut acc);
                    if !vec_is_zero(&acc) {
                        return Err(LieError::JacobiFailure { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Accumulate the coordinates of `[[b_i, b_j], b_k]` into `acc`.
    fn jacobi_term(&self, i: usize, j: usize, k: usize, acc: &mut [Rat]) {
        for (m, c) in &self.structure[i][j] {
            for (l, d) in &self.structure[*m][k] {
                acc[*l] += c * d;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Side length of the defining-representation matrices.
    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    /// Two algebra handles are compatible when they are the same allocation
    /// or have identical bases. Elements may only be combined when their
    /// algebras are compatible.
    pub fn compatible(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.basis == other.basis
    }

    /// The `i`-th basis vector as an element.
    pub fn basis_element(self: &Arc<Self>, i: usize) -> LieElement {
        let mut coords = vec![Rat::zero(); self.dim()];
        coords[i] = rat(1);
        LieElement { algebra: Arc::clone(self), coords }
    }

    /// Element from coordinates in this basis.
    pub fn element(self: &Arc<Self>, coords: Vec<Rat>) -> LieElement {
        assert_eq!(coords.len(), self.dim(), "coordinate length must equal dim");
        LieElement { algebra: Arc::clone(self), coords }
    }

    pub fn zero(self: &Arc<Self>) -> LieElement {
        self.element(vec![Rat::zero(); self.dim()])
    }

    /// Express a defining-representation matrix in this basis, failing if it
    /// is not in the span.
    pub fn element_from_matrix(self: &Arc<Self>, m: &RatMatrix) -> Result<LieElement, LieError> {
        assert_eq!(m.nrows(), self.matrix_size, "matrix size mismatch");
        assert_eq!(m.ncols(), self.matrix_size, "matrix size mismatch");
        let mut b = RatMatrix::zeros(self.matrix_size * self.matrix_size, self.dim());
        for (k, bm) in self.basis.iter().enumerate() {
            for (r, e) in bm.flatten().into_iter().enumerate() {
                b[(r, k)] = e;
            }
        }
        let coords = b.solve(&m.flatten()).map_err(|_| LieError::NotInAlgebra)?;
        Ok(self.element(coords))
    }

    /// Structure constants of the ordered pair `(i, j)` as a sparse list of
    /// `(k, c)` with `[b_i, b_j] = Σ c·b_k`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.structure[i][j]
    }

    /// Bracket two coordinate vectors via structure constants.
    fn bracket_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in &self.structure[i][j] {
                    out[*k] += xi * yj * c;
                }
            }
        }
        out
    }

    /// Serializable descriptor of this algebra.
    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor {
            name: self.name.clone(),
            kind: self.kind.clone(),
            dim: self.dim(),
            matrix_size: self.matrix_size,
            basis: self.basis.clone(),
        }
    }
}

/// JSON-friendly description of an algebra: kind, dimensions, and the basis
/// with entries rendered as exact `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub name: String,
    pub kind: AlgebraKind,
    pub dim: usize,
    pub matrix_size: usize,
    pub basis: Vec<RatMatrix>,
}

impl AlgebraDescriptor {
    /// Rebuild the algebra (re-running all construction checks).
    pub fn realize(&self) -> Result<Arc<LieAlgebra>, LieError> {
        LieAlgebra::from_basis(&self.name, self.kind.clone(), self.basis.clone())
    }
}

/// An element of a [`LieAlgebra`], stored as coordinates in its basis.
#[derive(Clone)]
pub struct LieElement {
    algebra: Arc<LieAlgebra>,
    coords: Vec<Rat>,
}

impl LieElement {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.coords)
    }

    /// The element as a defining-representation matrix.
    pub fn matrix(&self) -> RatMatrix {
        let ms = self.algebra.matrix_size;
        let mut m = RatMatrix::zeros(ms, ms);
        for (c, b) in self.coords.iter().zip(&self.algebra.basis) {
            if !c.is_zero() {
                m = m + b.scale(c);
            }
        }
        m
    }

    /// Lie bracket. Panics if the elements live in incompatible algebras.
    pub fn bracket(&self, other: &LieElement) -> LieElement {
        assert!(
            self.algebra.compatible(&other.algebra),
            "bracket of elements from different algebras"
        );
        LieElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.algebra.bracket_coords(&self.coords, &other.coords),
        }
    }

    /// The adjoint operator `ad x = [x, ·]` as a `dim × dim` rational matrix
    /// acting on coordinates.
    pub fn ad(&self) -> RatMatrix {
        let dim = self.algebra.dim();
        let mut m = RatMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut col = vec![Rat::zero(); dim];
            for (i, xi) in self.coords.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (k, c) in &self.algebra.structure[i][j] {
                    col[*k] += xi * c;
                }
            }
            for (k, e) in col.into_iter().enumerate() {
                m[(k, j)] = e;
            }
        }
        m
    }

    /// Killing form `κ(x, y) = tr(ad x ∘ ad y)`, exactly.
    pub fn killing(&self, other: &LieElement) -> Rat {
        assert!(
            self.algebra.compatible(&other.algebra),
            "Killing form of elements from different algebras"
        );
        (self.ad() * other.ad()).trace()
    }

    pub fn scale(&self, s: &Rat) -> LieElement {
        LieElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.compatible(&other.algebra) && self.coords == other.coords
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(Rat::to_string).collect();
        write!(f, "{}[{}]", self.algebra.name, coords.join(", "))
    }
}

impl std::ops::Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        assert!(self.algebra.compatible(&rhs.algebra), "sum of elements from different algebras");
        LieElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        assert!(
            self.algebra.compatible(&rhs.algebra),
            "difference of elements from different algebras"
        );
        LieElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// σ₀ = ½ [0 −1; 1 0], the rotation generator of `sl(2)`.
pub fn sigma0() -> RatMatrix {
    RatMatrix::from_rows(vec![
        vec![rat(0), frac(-1, 2)],
        vec![frac(1, 2), rat(0)],
    ])
}

/// σ₁ = ½ [0 1; 1 0], the boost generator attached to the `x₁` wedge.
pub fn sigma1() -> RatMatrix {
    RatMatrix::from_rows(vec![
        vec![rat(0), frac(1, 2)],
        vec![frac(1, 2), rat(0)],
    ])
}

/// σ₂ = ½ diag(1, −1), the boost generator attached to the `x₂` wedge.
pub fn sigma2() -> RatMatrix {
    RatMatrix::from_rows(vec![
        vec![frac(1, 2), rat(0)],
        vec![rat(0), frac(-1, 2)],
    ])
}

/// Exact exponential of a nilpotent matrix (the series terminates), or
/// `None` if the matrix is not nilpotent. Useful for producing honest group
/// elements with rational entries.
pub fn exp_nilpotent(x: &RatMatrix) -> Option<RatMatrix> {
    assert!(x.is_square(), "exp of a non-square matrix");
    let n = x.nrows();
    let mut sum = RatMatrix::identity(n);
    let mut term = RatMatrix::identity(n);
    for k in 1..=n {
        term = &(&term * x) * &RatMatrix::identity(n).scale(&frac(1, k as i64));
        if term.is_zero() {
            return Some(sum);
        }
        sum = sum + term.clone();
    }
    // x^n ≠ 0 means x is not nilpotent.
    None
}
