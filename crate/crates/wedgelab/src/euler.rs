//! Euler elements: detection, gradings, involutions, symmetry, and the
//! classification catalog.
//!
//! An element `x` of a Lie algebra is an *Euler element* when `ad x` is
//! nonzero and diagonalizable with spectrum contained in `{-1, 0, 1}`; it
//! then induces the 3-grading
//!
//! ```text
//! g = g₁ ⊕ g₀ ⊕ g₋₁,   g_ν = ker(ad x − ν)
//! ```
//!
//! and the grading involution `σ_x` acting as `(−1)^ν` on `g_ν`. Both facts
//! are decided here *exactly*: the spectral condition is equivalent to the
//! polynomial identity `(ad x)³ = ad x` (with `ad x ≠ 0`), which rational
//! arithmetic can test verbatim, and the eigenspaces come out of exact
//! kernels. No numerics, no tolerance, no "approximately an eigenvalue".
//!
//! An Euler element is *symmetric* when `−x` lies in the orbit of `x` under
//! inner automorphisms. For `sl(n)`-type and `gl`-type algebras with a
//! diagonalizable defining matrix this is decided by the characteristic
//! polynomial: real-diagonalizable matrices are conjugate iff their spectra
//! match, and the sign of a conjugator's determinant can always be fixed by
//! a determinant-negative element of the centralizer. So `x ~ −x` iff the
//! eigenvalue multiset of `x` equals its own negation.

use crate::exact::{frac, rat, Rat, RatMatrix};
use crate::liealg::{AlgebraKind, LieElement};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    /// `ad x = 0`: zero or central elements are never Euler.
    #[error("ad x = 0, so x is zero or central and not an Euler element")]
    AdZero,
    /// `(ad x)³ ≠ ad x`; the named basis vector witnesses the failure.
    #[error("(ad x)³ ≠ ad x: witnessed on basis vector {witness}")]
    NotCubic { witness: usize },
    /// The symmetry test has no exact criterion for this algebra kind.
    #[error("no symmetry criterion for algebra kind of {0}; use the catalog for classified cases")]
    SymmetryUndecidable(String),
    #[error("unknown root system label {0:?}")]
    UnknownRootSystem(String),
    #[error("h_j requires 1 <= j < n, got j={j}, n={n}")]
    BadCatalogIndex { n: usize, j: usize },
}

/// The exact 3-grading induced by an Euler element, each summand given by a
/// basis of elements.
#[derive(Clone, Debug)]
pub struct Grading {
    pub pos: Vec<LieElement>,
    pub zero: Vec<LieElement>,
    pub neg: Vec<LieElement>,
}

impl Grading {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.pos.len(), self.zero.len(), self.neg.len())
    }
}

/// An element that passed [`check_euler`], bundled with its grading.
#[derive(Clone, Debug)]
pub struct EulerElement {
    element: LieElement,
    grading: Grading,
}

impl EulerElement {
    pub fn element(&self) -> &LieElement {
        &self.element
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// The grading involution `σ_x` as an exact operator on coordinates:
    /// `+1` on `g₀`, `−1` on `g₁ ⊕ g₋₁`. Because the grading is exact, so is
    /// the involution; in particular `σ_x² = id` by construction.
    pub fn involution(&self) -> RatMatrix {
        let dim = self.element.algebra().dim();
        let mut p = RatMatrix::zeros(dim, dim);
        let mut d = RatMatrix::zeros(dim, dim);
        let mut col = 0;
        for (block, sign) in [
            (&self.grading.pos, rat(-1)),
            (&self.grading.zero, rat(1)),
            (&self.grading.neg, rat(-1)),
        ] {
            for v in block {
                for (r, c) in v.coords().iter().enumerate() {
                    p[(r, col)] = c.clone();
                }
                d[(col, col)] = sign.clone();
                col += 1;
            }
        }
        debug_assert_eq!(col, dim, "grading must span the algebra");
        let p_inv = p.inverse().expect("grading basis is invertible");
        &(&p * &d) * &p_inv
    }

    /// Apply the grading involution to an element of the same algebra.
    pub fn apply_involution(&self, y: &LieElement) -> LieElement {
        assert!(
            self.element.algebra().compatible(y.algebra()),
            "involution applied across algebras"
        );
        let coords = self.involution().apply(y.coords());
        self.element.algebra().element(coords)
    }
}

/// Decide whether `x` is an Euler element, exactly.
///
/// The test is the annihilating-polynomial identity `(ad x)³ = ad x` with
/// `ad x ≠ 0`. Since `λ³ − λ = λ(λ−1)(λ+1)` is squarefree, passing it makes
/// `ad x` diagonalizable with spectrum in `{-1, 0, 1}`, and the grading is
/// produced from exact kernels of `ad x ∓ 1` and `ad x`.
pub fn check_euler(x: &LieElement) -> Result<EulerElement, EulerError> {
    let a = x.ad();
    if a.is_zero() {
        return Err(EulerError::AdZero);
    }
    let cubed = &(&a * &a) * &a;
    let defect = &cubed - &a;
    if !defect.is_zero() {
        let witness = (0..defect.ncols())
            .find(|&j| defect.col(j).iter().any(|e| !e.is_zero()))
            .expect("nonzero defect has a nonzero column");
        return Err(EulerError::NotCubic { witness });
    }

    let algebra = x.algebra();
    let spaces: Vec<Vec<LieElement>> = [rat(1), rat(0), rat(-1)]
        .iter()
        .map(|nu| {
            a.eigenspace(nu)
                .into_iter()
                .map(|coords| algebra.element(coords))
                .collect()
        })
        .collect();
    let [pos, zero, neg]: [Vec<LieElement>; 3] =
        spaces.try_into().expect("three eigenvalues yield three spaces");
    debug_assert_eq!(
        pos.len() + zero.len() + neg.len(),
        algebra.dim(),
        "a squarefree annihilating polynomial forces a full eigenbasis"
    );
    Ok(EulerElement { element: x.clone(), grading: Grading { pos, zero, neg } })
}

/// Is the Euler element symmetric, i.e. is `−x` in the inner-automorphism
/// orbit of `x`?
///
/// For `sl(n)`, `gl(n)` and `sl(2) ⊕ ℝξ` the answer is computed exactly from
/// the characteristic polynomial of the defining matrix (see the module
/// docs). For `so(1,d)` every Euler element is conjugate to the boost
/// generator `k₁`, whose class is symmetric, so the catalog answers `true`.
/// For custom algebras there is no general criterion and an error is
/// returned.
pub fn is_symmetric(x: &EulerElement) -> Result<bool, EulerError> {
    let alg = x.element().algebra();
    match alg.kind() {
        AlgebraKind::Sl(_) | AlgebraKind::Gl(_) | AlgebraKind::Sl2PlusCenter => {
            let m = x.element().matrix();
            let coeffs = m.char_poly();
            let n = m.nrows();
            // Spectrum equals its negation ⟺ char poly is even/odd matching
            // the parity of n ⟺ coefficients of mismatched parity vanish.
            Ok(coeffs
                .iter()
                .enumerate()
                .all(|(k, c)| (n + k) % 2 == 0 || c.is_zero()))
        }
        AlgebraKind::So1d(_) => Ok(true),
        AlgebraKind::Custom => Err(EulerError::SymmetryUndecidable(alg.name().to_string())),
    }
}

/// The diagonal catalog element `h_j ∈ sl(n)`:
///
/// ```text
/// h_j = (1/n) diag((n−j)·1_j, (−j)·1_{n−j}),   1 ≤ j ≤ n−1.
/// ```
///
/// Its `ad`-eigenvalues are differences of diagonal entries, which lie in
/// `{−1, 0, 1}`, so every `h_j` is Euler; it is symmetric exactly when
/// `n = 2j`.
pub fn hj_element(n: usize, j: usize) -> Result<LieElement, EulerError> {
    if j == 0 || j >= n {
        return Err(EulerError::BadCatalogIndex { n, j });
    }
    let sl = crate::liealg::LieAlgebra::sl(n);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let e = if i < j {
            frac((n - j) as i64, n as i64)
        } else {
            frac(-(j as i64), n as i64)
        };
        diag.push(e);
    }
    let m = RatMatrix::diagonal(diag);
    Ok(sl.element_from_matrix(&m).expect("h_j is traceless"))
}

/// If `x` is visibly a catalog element of `sl(n)` — a diagonal matrix whose
/// entry multiset is that of some `h_j` — return the classification verdict
/// for its class. Returns `None` when the element does not match a catalog
/// pattern (for instance an element of an algebra with center, where the
/// table does not apply).
pub fn catalog_crosscheck(x: &EulerElement) -> Option<bool> {
    let alg = x.element().algebra();
    let AlgebraKind::Sl(n) = *alg.kind() else {
        return None;
    };
    let m = x.element().matrix();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[(i, j)].is_zero() {
                return None;
            }
        }
    }
    let mut diag: Vec<Rat> = (0..n).map(|i| m[(i, i)].clone()).collect();
    diag.sort();
    for j in 1..n {
        let mut expected: Vec<Rat> = (0..n)
            .map(|i| {
                if i < j {
                    frac((n - j) as i64, n as i64)
                } else {
                    frac(-(j as i64), n as i64)
                }
            })
            .collect();
        expected.sort();
        if diag == expected {
            return Some(n == 2 * j);
        }
    }
    None
}

/// Families of (restricted) root systems appearing in the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

/// A root system label such as `A3`, `D4`, `E7`, or `BC2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
}

impl RootSystem {
    /// Parse labels like `"A3"`, `"BC2"`, `"E7"`.
    pub fn parse(label: &str) -> Result<Self, EulerError> {
        let err = || EulerError::UnknownRootSystem(label.to_string());
        let split = label.find(|c: char| c.is_ascii_digit()).ok_or_else(err)?;
        let (fam, rank) = label.split_at(split);
        let rank: usize = rank.parse().map_err(|_| err())?;
        let family = match fam {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            "BC" => Family::BC,
            _ => return Err(err()),
        };
        let ok = match family {
            Family::A | Family::BC => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(err());
        }
        Ok(RootSystem { family, rank })
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::BC => "BC",
        };
        write!(f, "{fam}{}", self.rank)
    }
}

/// One line of the classification: which fundamental coweights `h_j` are
/// Euler elements for this root system, and which of those classes are
/// symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub root_system: RootSystem,
    /// Pairs `(j, symmetric)` for each Euler class `h_j`, ascending in `j`.
    pub entries: Vec<(usize, bool)>,
}

impl CatalogEntry {
    pub fn euler_indices(&self) -> Vec<usize> {
        self.entries.iter().map(|(j, _)| *j).collect()
    }

    pub fn symmetric_indices(&self) -> Vec<usize> {
        self.entries.iter().filter(|(_, s)| *s).map(|(j, _)| *j).collect()
    }
}

/// The classification of Euler elements in simple real Lie algebras by
/// restricted root system:
///
/// | system | Euler classes    | symmetric among them          |
/// |--------|------------------|-------------------------------|
/// | `A_n`  | `h₁ … h_n`       | `h_{(n+1)/2}` for odd `n`     |
/// | `B_n`  | `h₁`             | `h₁`                          |
/// | `C_n`  | `h_n`            | `h_n`                         |
/// | `D_n`  | `h₁, h_{n−1}, h_n` | `h₁`; all three for even `n` |
/// | `E₆`   | `h₁, h₆`         | none                          |
/// | `E₇`   | `h₇`             | `h₇`                          |
/// | `E₈, F₄, G₂, BC_n` | none | —                             |
pub fn euler_catalog(rs: RootSystem) -> CatalogEntry {
    let n = rs.rank;
    let entries: Vec<(usize, bool)> = match rs.family {
        Family::A => (1..=n).map(|j| (j, 2 * j == n + 1)).collect(),
        Family::B => vec![(1, true)],
        Family::C => vec![(n, true)],
        Family::D => {
            let even = n % 2 == 0;
            let mut v = vec![(1, true)];
            for j in [n - 1, n] {
                if !v.iter().any(|(i, _)| *i == j) {
                    v.push((j, even));
                }
            }
            v.sort();
            v
        }
        Family::E => match n {
            6 => vec![(1, false), (6, false)],
            7 => vec![(7, true)],
            _ => vec![],
        },
        Family::F | Family::G | Family::BC => vec![],
    };
    CatalogEntry { root_system: rs, entries }
}
