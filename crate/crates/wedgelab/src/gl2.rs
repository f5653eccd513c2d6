//! The canonical `gl(2)` copy attached to a non-symmetric Euler element.
//!
//! A non-symmetric Euler element `h` never generates a plain `sl(2)` on its
//! own: the subalgebra it singles out is four-dimensional, a copy of
//! `gl(2) ≅ sl(2) ⊕ ℝ`. This module constructs that copy explicitly. The
//! output is a quadruple
//!
//! ```text
//! (h_c, h₁, e, f)   with   [h_c, ·] = 0,  [h₁,e] = e,  [h₁,f] = −f,  [e,f] = 2h₁,
//! ```
//!
//! and the input decomposes as `h = h_c − h₁`, splitting it into a central
//! part and a symmetric Euler element of the inner `sl(2)`.
//!
//! Two construction paths are supported:
//!
//! * **Diagonal path** (`sl(n)` / `gl(n)`): `h` must be a diagonal matrix.
//!   Since `ad h` has spectrum in `{−1, 0, 1}`, the diagonal entries take
//!   exactly two values differing by 1; the lexicographically first entry
//!   pair `(i, j)` with `h_i − h_j = 1` selects a matrix-unit root triple.
//! * **Central-split path** (`sl(2) ⊕ ℝξ`): `h = c·ξ + s` splits along the
//!   center, `h_c = c·ξ` and `h₁ = −s`, with `e`, `f` recovered as exact
//!   eigenvectors of `ad h₁`.
//!
//! Everything is exact rational arithmetic; `verify_embedding` re-derives
//! all sixteen brackets of the quadruple and compares them against a
//! freshly built `gl(2)` model, so a corrupted embedding cannot pass.

use crate::euler::{is_symmetric, EulerElement, EulerError};
use crate::exact::{frac, rat, Rat, RatMatrix};
use crate::liealg::{AlgebraKind, LieAlgebra, LieElement};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("the element is symmetric; the four-dimensional copy only exists in the non-symmetric case")]
    SymmetricInput,
    #[error("the diagonal construction needs a diagonal matrix; conjugate into diagonal form first")]
    NotDiagonal,
    #[error("no pair of diagonal entries differs by exactly 1")]
    NoSuchRoot,
    #[error("no embedding construction is available for algebra kind {0}")]
    UnsupportedAlgebra(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedVerifyError {
    #[error("the four embedded elements are linearly dependent")]
    DependentImage,
    #[error("bracket of elements {left} and {right} leaves the span of the quadruple")]
    NotClosed { left: usize, right: usize },
    #[error("bracket of elements {left} and {right} disagrees with the gl(2) model")]
    BracketMismatch { left: usize, right: usize },
    #[error("h_c − h₁ does not reconstruct the original element")]
    SplitMismatch,
}

/// The embedded `gl(2)` copy determined by a non-symmetric Euler element.
///
/// Quadruple order is `(h_c, h₁, e, f)`; see the module docs for the
/// bracket relations. `alpha`, `permutation` and `degenerate_root_witness`
/// are bookkeeping for the diagonal path and absent for the central-split
/// path — the elements themselves are always expressed in the original
/// frame, never in a permuted one.
#[derive(Debug, Clone, PartialEq)]
pub struct Gl2Embedding {
    /// The input element, `h = h_c − h₁`.
    pub h: LieElement,
    /// Central part of the copy.
    pub h_center: LieElement,
    /// Symmetric Euler element of the inner `sl(2)`.
    pub h_inner: LieElement,
    /// Raising element: `[h₁, e] = e`.
    pub e: LieElement,
    /// Lowering element: `[h₁, f] = −f`, normalized so `[e, f] = 2h₁`.
    pub f: LieElement,
    /// Diagonal path only: the 1-based entry pair `(i, j)` with
    /// `h_i − h_j = 1` that selected the matrix-unit triple.
    pub alpha: Option<(usize, usize)>,
    /// Diagonal path only: 1-based original indices in the order
    /// `[i, j, rest ascending]` — the column order that would move the
    /// selected 2×2 block to the top-left corner.
    pub permutation: Option<Vec<usize>>,
    /// Diagonal path only: a 1-based entry pair `(p, q)` with `h_p = h_q`
    /// whose pairing against the coroot of `alpha` is ±1. Witnesses that
    /// the eigenvalue pattern of `h` is degenerate beyond the selected
    /// block (always present for `sl(n)`, `n ≥ 3`; absent when all
    /// diagonal entries are distinct).
    pub degenerate_root_witness: Option<(usize, usize)>,
}

/// Lexicographically first 1-based pair `(i, j)` of diagonal entries with
/// `h_i − h_j = 1`, the selector used by the diagonal construction path.
pub fn find_alpha(h: &LieElement) -> Result<(usize, usize), EmbedError> {
    let m = h.matrix();
    if !is_diagonal(&m) {
        return Err(EmbedError::NotDiagonal);
    }
    let n = m.nrows();
    let one = rat(1);
    for i in 0..n {
        for j in 0..n {
            if i != j && &m[(i, i)] - &m[(j, j)] == one {
                return Ok((i + 1, j + 1));
            }
        }
    }
    Err(EmbedError::NoSuchRoot)
}

fn is_diagonal(m: &RatMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].is_zero()))
}

/// Build the `gl(2)` copy attached to a non-symmetric Euler element.
pub fn embed_gl2(x: &EulerElement) -> Result<Gl2Embedding, EmbedError> {
    match is_symmetric(x) {
        Ok(true) => return Err(EmbedError::SymmetricInput),
        Ok(false) => {}
        Err(EulerError::SymmetryUndecidable(reason)) => {
            return Err(EmbedError::UnsupportedAlgebra(reason));
        }
        Err(other) => return Err(EmbedError::UnsupportedAlgebra(other.to_string())),
    }
    let alg = x.element().algebra().clone();
    match alg.kind() {
        AlgebraKind::Sl(_) | AlgebraKind::Gl(_) => embed_diagonal(x),
        AlgebraKind::Sl2PlusCenter => embed_central_split(x),
        other => Err(EmbedError::UnsupportedAlgebra(format!("{other:?}"))),
    }
}

fn embed_diagonal(x: &EulerElement) -> Result<Gl2Embedding, EmbedError> {
    let h = x.element().clone();
    let alg = h.algebra().clone();
    let m = h.matrix();
    let (i1, j1) = find_alpha(&h)?;
    let (i, j) = (i1 - 1, j1 - 1);
    let n = m.nrows();

    // Coroot of the selected pair and the inner symmetric element.
    let h_alpha = RatMatrix::elementary(n, i, i) - RatMatrix::elementary(n, j, j);
    let h_inner = alg
        .element_from_matrix(&h_alpha.scale(&frac(-1, 2)))
        .expect("coroot scalings stay in the algebra");
    let h_center = &h + &h_inner;
    // The raising element lowers h (sits at ad-h eigenvalue −1) and vice
    // versa, so that h = h_c − h₁ splits consistently.
    let e = alg
        .element_from_matrix(&RatMatrix::elementary(n, j, i))
        .expect("matrix units lie in the algebra");
    let f = alg
        .element_from_matrix(&RatMatrix::elementary(n, i, j))
        .expect("matrix units lie in the algebra");

    let mut permutation = Vec::with_capacity(n);
    permutation.push(i1);
    permutation.push(j1);
    permutation.extend((1..=n).filter(|&k| k != i1 && k != j1));

    let witness = degenerate_root_witness(&m, i, j);

    Ok(Gl2Embedding {
        h,
        h_center,
        h_inner,
        e,
        f,
        alpha: Some((i1, j1)),
        permutation: Some(permutation),
        degenerate_root_witness: witness,
    })
}

/// Lexicographically first 1-based pair `(p, q)`, `p ≠ q`, with equal
/// diagonal entries and pairing ±1 against the coroot `E_ii − E_jj`.
fn degenerate_root_witness(m: &RatMatrix, i: usize, j: usize) -> Option<(usize, usize)> {
    let n = m.nrows();
    let pairing = |p: usize, q: usize| -> i64 {
        let at = |k: usize| -> i64 {
            if k == i {
                1
            } else if k == j {
                -1
            } else {
                0
            }
        };
        at(p) - at(q)
    };
    for p in 0..n {
        for q in 0..n {
            if p != q && m[(p, p)] == m[(q, q)] && pairing(p, q).abs() == 1 {
                return Some((p + 1, q + 1));
            }
        }
    }
    None
}

fn embed_central_split(x: &EulerElement) -> Result<Gl2Embedding, EmbedError> {
    let h = x.element().clone();
    let alg = h.algebra().clone();
    // Basis order is (σ₀, σ₁, σ₂, ξ): the first three coordinates are the
    // traceless part s, the last is the central coefficient c.
    let coords = h.coords();
    let c = coords[3].clone();
    let h_center = alg.element(vec![Rat::zero(), Rat::zero(), Rat::zero(), c]);
    let h_inner = alg.element(vec![
        -&coords[0],
        -&coords[1],
        -&coords[2],
        Rat::zero(),
    ]);

    let ad_inner = h_inner.ad();
    let raise = ad_inner.eigenspace(&rat(1));
    let lower = ad_inner.eigenspace(&rat(-1));
    assert_eq!(raise.len(), 1, "ad h₁ has a one-dimensional +1 eigenspace");
    assert_eq!(lower.len(), 1, "ad h₁ has a one-dimensional −1 eigenspace");
    let e = alg.element(raise.into_iter().next().unwrap());
    let f_raw = alg.element(lower.into_iter().next().unwrap());

    // Normalize the lowering element so that [e, f] = 2 h₁.
    let bracket = e.bracket(&f_raw);
    let pivot = h_inner
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("h₁ of a non-symmetric element is nonzero");
    let gamma = &bracket.coords()[pivot] / &h_inner.coords()[pivot];
    assert!(!gamma.is_zero(), "[e, f] is proportional to h₁ with nonzero ratio");
    let f = f_raw.scale(&(rat(2) / gamma));

    Ok(Gl2Embedding {
        h,
        h_center,
        h_inner,
        e,
        f,
        alpha: None,
        permutation: None,
        degenerate_root_witness: None,
    })
}

/// Model quadruple `(1₂, ½diag(1,−1), E₁₂, E₂₁)` inside a fresh `gl(2)`.
fn model_quadruple() -> [LieElement; 4] {
    let gl2 = LieAlgebra::gl(2);
    let h_c = gl2
        .element_from_matrix(&RatMatrix::identity(2))
        .expect("identity lies in gl(2)");
    let h1 = gl2
        .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
        .expect("diagonal matrices lie in gl(2)");
    let e = gl2
        .element_from_matrix(&RatMatrix::elementary(2, 0, 1))
        .expect("matrix units lie in gl(2)");
    let f = gl2
        .element_from_matrix(&RatMatrix::elementary(2, 1, 0))
        .expect("matrix units lie in gl(2)");
    [h_c, h1, e, f]
}

/// Expand each pairwise bracket of a quadruple in the quadruple's own span.
/// Returns the 4×4×4 coefficient table, or the offending pair.
fn bracket_table(quad: &[LieElement; 4]) -> Result<Vec<Vec<Vec<Rat>>>, (usize, usize)> {
    let dim = quad[0].algebra().dim();
    let mut span = RatMatrix::zeros(dim, 4);
    for (k, el) in quad.iter().enumerate() {
        for (r, c) in el.coords().iter().enumerate() {
            span[(r, k)] = c.clone();
        }
    }
    let mut table = vec![vec![vec![Rat::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let br = quad[a].bracket(&quad[b]);
            let coeffs = span.solve(br.coords()).map_err(|_| (a, b))?;
            table[a][b] = coeffs;
        }
    }
    Ok(table)
}

/// Re-derive all sixteen brackets of the embedded quadruple and compare
/// them against the `gl(2)` model; also checks linear independence and the
/// split `h = h_c − h₁`. Exact, so any corruption of the quadruple is
/// caught.
pub fn verify_embedding(emb: &Gl2Embedding) -> Result<(), EmbedVerifyError> {
    let quad = [
        emb.h_center.clone(),
        emb.h_inner.clone(),
        emb.e.clone(),
        emb.f.clone(),
    ];
    let dim = quad[0].algebra().dim();
    let mut span = RatMatrix::zeros(dim, 4);
    for (k, el) in quad.iter().enumerate() {
        for (r, c) in el.coords().iter().enumerate() {
            span[(r, k)] = c.clone();
        }
    }
    if span.rank() != 4 {
        return Err(EmbedVerifyError::DependentImage);
    }

    let model = bracket_table(&model_quadruple()).expect("the model quadruple spans gl(2)");
    let table = match bracket_table(&quad) {
        Ok(t) => t,
        Err((a, b)) => return Err(EmbedVerifyError::NotClosed { left: a, right: b }),
    };
    for a in 0..4 {
        for b in 0..4 {
            if table[a][b] != model[a][b] {
                return Err(EmbedVerifyError::BracketMismatch { left: a, right: b });
            }
        }
    }

    if &emb.h_center - &emb.h_inner != emb.h {
        return Err(EmbedVerifyError::SplitMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::check_euler;

    fn euler_of(alg: &std::sync::Arc<LieAlgebra>, m: &RatMatrix) -> EulerElement {
        check_euler(&alg.element_from_matrix(m).unwrap()).unwrap()
    }

    #[test]
    fn worked_example_in_sl3() {
        let sl3 = LieAlgebra::sl(3);
        let h = euler_of(
            &sl3,
            &RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]),
        );
        let emb = embed_gl2(&h).unwrap();
        assert_eq!(emb.alpha, Some((2, 1)));
        assert_eq!(emb.permutation, Some(vec![2, 1, 3]));
        assert_eq!(emb.degenerate_root_witness, Some((1, 3)));
        assert_eq!(
            emb.h_inner.matrix(),
            RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2), rat(0)])
        );
        assert_eq!(
            emb.h_center.matrix(),
            RatMatrix::diagonal(vec![frac(1, 6), frac(1, 6), frac(-1, 3)])
        );
        assert_eq!(emb.e.matrix(), RatMatrix::elementary(3, 0, 1));
        assert_eq!(emb.f.matrix(), RatMatrix::elementary(3, 1, 0));
        verify_embedding(&emb).unwrap();
    }

    #[test]
    fn first_catalog_element_of_sl3() {
        let sl3 = LieAlgebra::sl(3);
        let h = euler_of(
            &sl3,
            &RatMatrix::diagonal(vec![frac(2, 3), frac(-1, 3), frac(-1, 3)]),
        );
        let emb = embed_gl2(&h).unwrap();
        assert_eq!(emb.alpha, Some((1, 2)));
        assert_eq!(emb.degenerate_root_witness, Some((2, 3)));
        verify_embedding(&emb).unwrap();
        assert_eq!(&emb.h_center - &emb.h_inner, emb.h);
    }

    #[test]
    fn all_nonsymmetric_catalog_elements_embed() {
        for n in 2..=6 {
            for j in 1..n {
                let h = check_euler(&crate::euler::hj_element(n, j).unwrap()).unwrap();
                let emb = embed_gl2(&h);
                if n == 2 * j {
                    assert!(matches!(emb, Err(EmbedError::SymmetricInput)), "n={n} j={j}");
                } else {
                    let emb = emb.unwrap();
                    verify_embedding(&emb).unwrap_or_else(|err| {
                        panic!("verification failed for n={n} j={j}: {err}")
                    });
                }
            }
        }
    }

    #[test]
    fn central_split_worked_example() {
        // h = ξ − σ₁ in sl(2) ⊕ ℝξ: splits as h_c = ξ, h₁ = σ₁.
        let alg = LieAlgebra::sl2_plus_center();
        let h_el = &alg.basis_element(3) - &alg.basis_element(1);
        let h = check_euler(&h_el).unwrap();
        let emb = embed_gl2(&h).unwrap();
        assert_eq!(emb.alpha, None);
        assert_eq!(emb.permutation, None);
        assert_eq!(emb.h_center, alg.basis_element(3));
        assert_eq!(emb.h_inner, alg.basis_element(1));
        // e ∝ σ₀ + σ₂ and f = σ₂ − σ₀ after normalization.
        assert_eq!(emb.e, &alg.basis_element(0) + &alg.basis_element(2));
        assert_eq!(emb.f, &alg.basis_element(2) - &alg.basis_element(0));
        verify_embedding(&emb).unwrap();
    }

    #[test]
    fn gl2_boost_with_distinct_entries_has_no_degenerate_witness() {
        let gl2 = LieAlgebra::gl(2);
        let h = euler_of(&gl2, &RatMatrix::diagonal(vec![frac(3, 2), frac(1, 2)]));
        let emb = embed_gl2(&h).unwrap();
        assert_eq!(emb.alpha, Some((1, 2)));
        assert_eq!(emb.degenerate_root_witness, None);
        // The central part is the scalar matrix, as the split demands.
        assert_eq!(emb.h_center.matrix(), RatMatrix::identity(2));
        verify_embedding(&emb).unwrap();
    }

    #[test]
    fn symmetric_inputs_are_rejected() {
        let sl2 = LieAlgebra::sl(2);
        let h = euler_of(&sl2, &RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]));
        assert_eq!(embed_gl2(&h), Err(EmbedError::SymmetricInput));
        // Boosts in so(1,2) are symmetric as well, so they are rejected
        // with the same error rather than an algebra-kind complaint.
        let so12 = LieAlgebra::so1d(2);
        let k1 = check_euler(&so12.basis_element(0)).unwrap();
        assert_eq!(embed_gl2(&k1), Err(EmbedError::SymmetricInput));
    }

    #[test]
    fn non_diagonal_input_is_rejected() {
        let sl3 = LieAlgebra::sl(3);
        // Conjugate of the worked example by a unipotent matrix: still
        // Euler, no longer diagonal.
        let g = RatMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g_inv = g.inverse().unwrap();
        let d = RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]);
        let h = euler_of(&sl3, &(&(&g * &d) * &g_inv));
        assert_eq!(embed_gl2(&h), Err(EmbedError::NotDiagonal));
    }

    #[test]
    fn corrupted_embedding_fails_verification() {
        let sl3 = LieAlgebra::sl(3);
        let h = euler_of(
            &sl3,
            &RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]),
        );
        let mut emb = embed_gl2(&h).unwrap();
        emb.f = emb.f.scale(&rat(2));
        // Rescaling f keeps the eigenvector relations intact (coordinates
        // rescale along with the span), so the first honest mismatch is
        // [e, f] = 4h₁ instead of 2h₁.
        assert_eq!(
            verify_embedding(&emb),
            Err(EmbedVerifyError::BracketMismatch { left: 2, right: 3 })
        );
        // Destroying linear independence is caught before any brackets.
        let mut emb2 = embed_gl2(&h).unwrap();
        emb2.f = emb2.e.clone();
        assert_eq!(verify_embedding(&emb2), Err(EmbedVerifyError::DependentImage));
    }

    #[test]
    fn split_mismatch_is_caught() {
        let sl3 = LieAlgebra::sl(3);
        let h = euler_of(
            &sl3,
            &RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]),
        );
        let mut emb = embed_gl2(&h).unwrap();
        emb.h = emb.h.scale(&rat(2));
        assert_eq!(verify_embedding(&emb), Err(EmbedVerifyError::SplitMismatch));
    }

    #[test]
    fn find_alpha_edge_cases() {
        let sl2 = LieAlgebra::sl(2);
        let zero = sl2.element(vec![rat(0); 3]);
        assert_eq!(find_alpha(&zero), Err(EmbedError::NoSuchRoot));
        let h = sl2
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
            .unwrap();
        assert_eq!(find_alpha(&h), Ok((1, 2)));
    }
}
