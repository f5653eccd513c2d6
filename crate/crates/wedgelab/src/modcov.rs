//! Covariance obstruction engine for wedge-indexed nets.
//!
//! The setting: an ambient Lie algebra `𝔤` with a distinguished subalgebra
//! `𝔥` (the symmetry algebra of a smaller spacetime), a generator `h₁`
//! whose wedge is the base region of a net built by `𝔥`-covariance, and an
//! Euler element `h₂` of `𝔤` whose wedge seeds the construction. When the
//! net is assembled this way, compatibility of the two one-parameter
//! groups is *necessary* for the modular flow of the base region to act
//! geometrically. On the algebra level the necessary condition reads
//!
//! ```text
//! [𝔥, h₁ − h₂] ⊆ ker(ad h₂),
//! ```
//!
//! and a violation is certified by a single basis element `y ∈ 𝔥` with
//! `[h₂, [y, h₁ − h₂]] ≠ 0` — an exact rational computation. Floating-point
//! group samples `g = exp(s·y)` corroborate each certificate: the moved
//! generator `Ad(g exp(t(h₁−h₂))g⁻¹)h₂` visibly departs from `h₂`.
//!
//! The positive direction is deliberately modest: when the condition
//! holds, the report says *necessary condition holds* — deciding actual
//! modular covariance requires the representation, which is out of scope.
//! Only the group elements' action on `h₂` is tested, which is necessary
//! for membership in the stabilizer of the second wedge's subspace
//! whenever the representation has discrete kernel.

use crate::euler::check_euler;
use crate::euler::EulerElement;
use crate::exact::{frac, rat, rats_to_strings, Rat, RatMatrix};
use crate::gl2::{embed_gl2, EmbedError};
use crate::liealg::{LieAlgebra, LieElement, LieError};
use crate::tolerance::FIX_COMMUTE;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModcovError {
    #[error("h₁ and h₂ do not commute")]
    GeneratorsDontCommute,
    #[error("base generator h₁ does not lie in the subalgebra")]
    GeneratorOutsideSubalgebra,
    #[error("the 𝔥-stabilizer of the first wedge moves the second wedge generator (stabilizer basis element {stabilizer_index})")]
    StabilizerMovesSecondWedge { stabilizer_index: usize },
    #[error("subalgebra is invalid: {0}")]
    BadSubalgebra(LieError),
    #[error("h₁ is not an Euler element of the subalgebra: {0}")]
    FirstGeneratorNotEuler(crate::euler::EulerError),
    #[error("h₂ is not an Euler element of the ambient algebra: {0}")]
    SecondGeneratorNotEuler(crate::euler::EulerError),
    #[error("elements belong to different ambient algebras")]
    AlgebraMismatch,
    #[error("embedding construction failed: {0}")]
    Embedding(#[from] EmbedError),
    #[error("supplied basis does not close under brackets: pair ({i}, {j}) leaves the span")]
    EmbeddingInvalid { i: usize, j: usize },
    #[error("supplied basis is linearly dependent")]
    DependentBasis,
    #[error("the designated boost is not in the span of the subalgebra")]
    BoostOutsideSubalgebra,
}

/// A validated net construction setup: ambient algebra, acting subalgebra,
/// base-wedge generator `h₁` (Euler in `𝔥`), and seed generator `h₂`
/// (Euler in `𝔤`).
///
/// Validation enforces, exactly: `𝔥` closes under brackets, `h₁ ∈ 𝔥` is
/// Euler there, `h₂` is Euler in the ambient algebra, `[h₁, h₂] = 0`, and
/// every element of the `𝔥`-centralizer of `h₁` (the wedge stabilizer)
/// also commutes with `h₂` — the structural prerequisites for the net to
/// be well-defined by covariance.
#[derive(Debug, Clone)]
pub struct NetSetup {
    name: String,
    ambient: Arc<LieAlgebra>,
    hsub: Vec<LieElement>,
    h1: LieElement,
    h2: LieElement,
    stabilizer: Vec<LieElement>,
}

impl NetSetup {
    pub fn new(
        name: &str,
        ambient: Arc<LieAlgebra>,
        hsub: Vec<LieElement>,
        h1: LieElement,
        h2: LieElement,
    ) -> Result<Self, ModcovError> {
        for e in hsub.iter().chain([&h1, &h2]) {
            if !e.algebra().compatible(&ambient) {
                return Err(ModcovError::AlgebraMismatch);
            }
        }
        // Bracket-closure of 𝔥 plus an honest basis, via the subalgebra
        // constructor; h₁ must be Euler inside it.
        let sub = ambient
            .subalgebra(&format!("{name}.h"), &hsub)
            .map_err(ModcovError::BadSubalgebra)?;
        let h1_in_sub = sub
            .element_from_matrix(&h1.matrix())
            .map_err(|_| ModcovError::GeneratorOutsideSubalgebra)?;
        check_euler(&h1_in_sub).map_err(ModcovError::FirstGeneratorNotEuler)?;
        check_euler(&h2).map_err(ModcovError::SecondGeneratorNotEuler)?;
        if !h1.bracket(&h2).is_zero() {
            return Err(ModcovError::GeneratorsDontCommute);
        }
        // The 𝔥-centralizer of h₁ is the wedge stabilizer algebra; each of
        // its basis elements must fix h₂ as well.
        let centralizer = restricted_kernel(&h1.ad(), &hsub);
        for (idx, y) in centralizer.iter().enumerate() {
            if !y.bracket(&h2).is_zero() {
                return Err(ModcovError::StabilizerMovesSecondWedge { stabilizer_index: idx });
            }
        }
        let stabilizer = h2.ad().kernel().into_iter().map(|c| ambient.element(c)).collect();
        Ok(NetSetup { name: name.to_string(), ambient, hsub, h1, h2, stabilizer })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Arc<LieAlgebra> {
        &self.ambient
    }

    pub fn subalgebra_basis(&self) -> &[LieElement] {
        &self.hsub
    }

    pub fn h1(&self) -> &LieElement {
        &self.h1
    }

    pub fn h2(&self) -> &LieElement {
        &self.h2
    }

    /// Basis of `ker(ad h₂)` in the ambient algebra — the stabilizer
    /// algebra of the second wedge's subspace.
    pub fn second_wedge_stabilizer(&self) -> &[LieElement] {
        &self.stabilizer
    }

    /// The generator difference `h₁ − h₂` driving all obstruction tests.
    pub fn difference(&self) -> LieElement {
        &self.h1 - &self.h2
    }
}

/// Basis of `{y ∈ span(basis) : op·y = 0}`, computed exactly by composing
/// the operator with the span inclusion and taking the kernel.
fn restricted_kernel(op: &RatMatrix, basis: &[LieElement]) -> Vec<LieElement> {
    if basis.is_empty() {
        return Vec::new();
    }
    let dim = basis[0].algebra().dim();
    let mut incl = RatMatrix::zeros(dim, basis.len());
    for (j, e) in basis.iter().enumerate() {
        for (i, c) in e.coords().iter().enumerate() {
            incl[(i, j)] = c.clone();
        }
    }
    let composed = op * &incl;
    composed
        .kernel()
        .into_iter()
        .map(|coeffs| {
            let mut acc = basis[0].scale(&coeffs[0]);
            for (c, e) in coeffs.iter().zip(basis).skip(1) {
                acc = &acc + &e.scale(c);
            }
            acc
        })
        .collect()
}

/// First violation of the necessary condition, if any: the basis index and
/// element `y ∈ 𝔥` with `[h₂, [y, h₁−h₂]] ≠ 0`, together with the inner
/// bracket and the obstruction value.
fn find_violation(setup: &NetSetup) -> Option<(usize, LieElement, LieElement)> {
    let d = setup.difference();
    for (idx, y) in setup.hsub.iter().enumerate() {
        let inner = y.bracket(&d);
        let obstruction = setup.h2.bracket(&inner);
        if !obstruction.is_zero() {
            return Some((idx, inner, obstruction));
        }
    }
    None
}

/// Exact test of the necessary condition `[𝔥, h₁−h₂] ⊆ ker(ad h₂)` on the
/// subalgebra basis.
pub fn neccond(setup: &NetSetup) -> bool {
    find_violation(setup).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceStatus {
    /// The exact necessary condition holds; covariance itself is
    /// representation-dependent and not decided here.
    CovariantNecessaryConditionHolds,
    Violated,
}

/// One floating-point group sample: the defect of
/// `Ad(exp(s·y) exp(t(h₁−h₂)) exp(−s·y))h₂` from `h₂` in Frobenius norm.
/// `s` is absent when the sample uses the identity instead of a witness
/// exponential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSample {
    pub s: Option<f64>,
    pub t: f64,
    pub defect: f64,
    pub within_threshold: bool,
}

/// Outcome of the exact obstruction search plus corroborating group
/// samples. The exact fields alone decide the status; samples are
/// illustrative floating-point evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceCertificate {
    pub setup_name: String,
    pub algebra_name: String,
    pub status: CovarianceStatus,
    pub h1: LieElement,
    pub h2: LieElement,
    /// Index into the subalgebra basis of the witness, when violated.
    pub witness_index: Option<usize>,
    pub witness: Option<LieElement>,
    /// `[y, h₁−h₂]` for the witness `y`.
    pub bracket_value: Option<LieElement>,
    /// `[h₂, [y, h₁−h₂]]` — nonzero exactly when violated.
    pub obstruction: Option<LieElement>,
    pub samples: Vec<GroupSample>,
    pub threshold: f64,
}

fn sample_grid() -> ([f64; 4], [f64; 4]) {
    let u = 0.5 * std::f64::consts::FRAC_1_PI;
    ([-1.0, -0.5, 0.5, 1.0], [-1.0, -u, u, 1.0])
}

/// Run the exact obstruction search and package the result with
/// floating-point group samples on the fixed `(s, t)` grid
/// `s ∈ {±1/2, ±1}`, `t ∈ {±1/(2π), ±1}`.
pub fn negcond_certificate(setup: &NetSetup) -> CovarianceCertificate {
    let (s_grid, t_grid) = sample_grid();
    let mut samples = Vec::new();
    let violation = find_violation(setup);
    match violation {
        Some((idx, inner, obstruction)) => {
            let y = setup.hsub[idx].clone();
            let y_f = y.matrix().to_f64();
            for &s in &s_grid {
                let g = (y_f.clone() * s).exp();
                for &t in &t_grid {
                    let report = group_fix_defect(setup, &g, t);
                    samples.push(GroupSample {
                        s: Some(s),
                        t,
                        defect: report.defect,
                        within_threshold: report.within_threshold,
                    });
                }
            }
            CovarianceCertificate {
                setup_name: setup.name.clone(),
                algebra_name: setup.ambient.name().to_string(),
                status: CovarianceStatus::Violated,
                h1: setup.h1.clone(),
                h2: setup.h2.clone(),
                witness_index: Some(idx),
                witness: Some(y),
                bracket_value: Some(inner),
                obstruction: Some(obstruction),
                samples,
                threshold: FIX_COMMUTE,
            }
        }
        None => {
            let n = setup.ambient.matrix_size();
            let id = DMatrix::<f64>::identity(n, n);
            for &t in &t_grid {
                let report = group_fix_defect(setup, &id, t);
                samples.push(GroupSample {
                    s: None,
                    t,
                    defect: report.defect,
                    within_threshold: report.within_threshold,
                });
            }
            CovarianceCertificate {
                setup_name: setup.name.clone(),
                algebra_name: setup.ambient.name().to_string(),
                status: CovarianceStatus::CovariantNecessaryConditionHolds,
                h1: setup.h1.clone(),
                h2: setup.h2.clone(),
                witness_index: None,
                witness: None,
                bracket_value: None,
                obstruction: None,
                samples,
                threshold: FIX_COMMUTE,
            }
        }
    }
}

/// Re-derive a certificate's exact chain from scratch: commutation of the
/// generators, the inner bracket, the obstruction, and the claimed status.
/// Returns `true` only if every stored exact value reproduces.
pub fn verify_certificate(setup: &NetSetup, cert: &CovarianceCertificate) -> bool {
    if !setup.h1.bracket(&setup.h2).is_zero() {
        return false;
    }
    if setup.h1 != cert.h1 || setup.h2 != cert.h2 {
        return false;
    }
    match cert.status {
        CovarianceStatus::Violated => {
            let (Some(idx), Some(witness), Some(inner), Some(obstruction)) = (
                cert.witness_index,
                cert.witness.as_ref(),
                cert.bracket_value.as_ref(),
                cert.obstruction.as_ref(),
            ) else {
                return false;
            };
            if idx >= setup.hsub.len() || &setup.hsub[idx] != witness {
                return false;
            }
            let d = setup.difference();
            let inner_check = witness.bracket(&d);
            let obstruction_check = setup.h2.bracket(&inner_check);
            inner_check == *inner && obstruction_check == *obstruction && !obstruction.is_zero()
        }
        CovarianceStatus::CovariantNecessaryConditionHolds => {
            cert.witness.is_none() && neccond(setup)
        }
    }
}

/// Floating-point defect of the group-level stabilizer condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// `‖Ad(g·exp(t(h₁−h₂))·g⁻¹)h₂ − h₂‖` in Frobenius norm.
    pub defect: f64,
    pub within_threshold: bool,
}

/// Test the group-level necessary condition at one sample: the element
/// `g exp(t(h₁−h₂)) g⁻¹` must fix `h₂` under the adjoint action for the
/// net to be modular covariant. Reports the Frobenius defect.
pub fn group_fix_defect(setup: &NetSetup, g: &DMatrix<f64>, t: f64) -> DefectReport {
    let d = setup.difference().matrix().to_f64();
    let h2 = setup.h2.matrix().to_f64();
    let inner = (d * t).exp();
    let g_inv = g.clone().try_inverse().expect("group samples are invertible");
    let s = g * inner * g_inv;
    let s_inv = s.clone().try_inverse().expect("exponentials are invertible");
    let moved = &s * h2.clone() * s_inv;
    let defect = (moved - h2).norm();
    DefectReport { defect, within_threshold: defect < FIX_COMMUTE }
}

/// Build a setup from the canonical `gl(2)` copy of a non-symmetric Euler
/// element: `h₂` is the element itself, `h₁` the inner symmetric generator,
/// and `𝔥` the inner `sl(2)` in its boost–boost–rotation basis
/// `(k₁, k₂, [k₁,k₂])` with `k₂ = ½(e+f)`.
pub fn setup_from_embedding(name: &str, h2: &EulerElement) -> Result<NetSetup, ModcovError> {
    let emb = embed_gl2(h2)?;
    let k1 = emb.h_inner.clone();
    let k2 = (&emb.e + &emb.f).scale(&frac(1, 2));
    let rho = k1.bracket(&k2);
    let ambient = h2.element().algebra().clone();
    NetSetup::new(
        name,
        ambient,
        vec![k1.clone(), k2, rho],
        k1,
        h2.element().clone(),
    )
}

/// The four named setups exercised throughout the crate:
///
/// * `sl3` — `𝔤 = sl(3)`, seed `h₂ = diag(−1/3, 2/3, −1/3)`, subalgebra
///   the embedded `sl(2)` block;
/// * `gl2` — the minimal case `𝔤 = gl(2)`, seed `h₂ = diag(0, 1)`;
/// * `sl2xi` — `𝔤 = sl(2) ⊕ ℝξ`, `h₁ = σ₁`, seed `h₂ = ξ − σ₁`;
/// * `dual` — `𝔤 = 𝔥 = sl(2)` with `h₁ = −h₂`, the dual-net construction.
///
/// Every entry violates the necessary condition; the Bisognano–Wichmann
/// control with `h₁ = h₂` lives in [`bw_control_setup`].
pub fn catalog_setups() -> Vec<NetSetup> {
    let sl3 = LieAlgebra::sl(3);
    let h2_sl3 = check_euler(
        &sl3.element_from_matrix(&RatMatrix::diagonal(vec![
            frac(-1, 3),
            frac(2, 3),
            frac(-1, 3),
        ]))
        .expect("diagonal traceless matrix lies in sl(3)"),
    )
    .expect("the seed element is Euler");
    let sl3_setup =
        setup_from_embedding("sl3", &h2_sl3).expect("the sl3 catalog setup is valid");

    let gl2 = LieAlgebra::gl(2);
    let h2_gl2 = check_euler(
        &gl2.element_from_matrix(&RatMatrix::diagonal(vec![rat(0), rat(1)]))
            .expect("diagonal matrix lies in gl(2)"),
    )
    .expect("diag(0,1) is Euler");
    let gl2_setup =
        setup_from_embedding("gl2", &h2_gl2).expect("the gl2 catalog setup is valid");

    let sl2xi = LieAlgebra::sl2_plus_center();
    let sigma0 = sl2xi.basis_element(0);
    let sigma1 = sl2xi.basis_element(1);
    let sigma2 = sl2xi.basis_element(2);
    let xi = sl2xi.basis_element(3);
    let sl2xi_setup = NetSetup::new(
        "sl2xi",
        sl2xi.clone(),
        vec![sigma0, sigma1.clone(), sigma2],
        sigma1.clone(),
        &xi - &sigma1,
    )
    .expect("the sl2xi catalog setup is valid");

    let sl2 = LieAlgebra::sl(2);
    let h2_dual = sl2
        .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
        .expect("diagonal traceless matrix lies in sl(2)");
    let basis: Vec<_> = (0..sl2.dim()).map(|i| sl2.basis_element(i)).collect();
    let dual_setup = NetSetup::new(
        "dual",
        sl2.clone(),
        basis,
        -&h2_dual,
        h2_dual,
    )
    .expect("the dual catalog setup is valid");

    vec![sl3_setup, gl2_setup, sl2xi_setup, dual_setup]
}

/// Control setup with `h₁ = h₂` (the Bisognano–Wichmann situation): the
/// necessary condition holds and all group samples have zero defect.
pub fn bw_control_setup() -> NetSetup {
    let sl2 = LieAlgebra::sl(2);
    let h = sl2
        .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
        .expect("diagonal traceless matrix lies in sl(2)");
    let basis: Vec<_> = (0..sl2.dim()).map(|i| sl2.basis_element(i)).collect();
    NetSetup::new("bw", sl2.clone(), basis, h.clone(), h)
        .expect("the control setup is valid")
}

/// Lie-algebra necessary conditions for a net on a higher-dimensional
/// spacetime to restrict along a symmetric subalgebra `𝔥` (a copy of a
/// Lorentz algebra inside the ambient algebra):
///
/// 1. the supplied basis closes under brackets (else `EmbeddingInvalid`);
/// 2. `{0} ≠ [𝔥, h] ⊆ 𝔥`;
/// 3. the centralizer of the designated boost inside `𝔥` — the stabilizer
///    algebra of the base wedge — annihilates `h`.
///
/// Returns `Ok(false)` when a condition fails honestly, and an error only
/// when the inputs are not a subalgebra at all.
pub fn higher_dim_stabilizer_check(
    hsub: &[LieElement],
    boost: &LieElement,
    h: &LieElement,
) -> Result<bool, ModcovError> {
    if hsub.is_empty() {
        return Err(ModcovError::DependentBasis);
    }
    let alg = hsub[0].algebra().clone();
    for e in hsub.iter().chain([boost, h]) {
        if !e.algebra().compatible(&alg) {
            return Err(ModcovError::AlgebraMismatch);
        }
    }
    let span: Vec<Vec<Rat>> = hsub.iter().map(|e| e.coords().to_vec()).collect();
    let span_rank = rank_of(&span, alg.dim());
    if span_rank != hsub.len() {
        return Err(ModcovError::DependentBasis);
    }
    if !in_span_of(&span, boost.coords(), alg.dim()) {
        return Err(ModcovError::BoostOutsideSubalgebra);
    }
    for i in 0..hsub.len() {
        for j in i + 1..hsub.len() {
            let br = hsub[i].bracket(&hsub[j]);
            if !in_span_of(&span, br.coords(), alg.dim()) {
                return Err(ModcovError::EmbeddingInvalid { i, j });
            }
        }
    }

    // {0} ≠ [𝔥, h] ⊆ 𝔥.
    let mut any_nonzero = false;
    for y in hsub {
        let br = y.bracket(h);
        if !br.is_zero() {
            any_nonzero = true;
            if !in_span_of(&span, br.coords(), alg.dim()) {
                return Ok(false);
            }
        }
    }
    if !any_nonzero {
        return Ok(false);
    }

    // The boost centralizer inside 𝔥 must annihilate h.
    let centralizer = restricted_kernel(&boost.ad(), hsub);
    for y in &centralizer {
        if !y.bracket(h).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rank_of(rows: &[Vec<Rat>], width: usize) -> usize {
    let mut m = RatMatrix::zeros(rows.len(), width);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    m.rank()
}

fn in_span_of(rows: &[Vec<Rat>], candidate: &[Rat], width: usize) -> bool {
    let base_rank = rank_of(rows, width);
    let mut extended: Vec<Vec<Rat>> = rows.to_vec();
    extended.push(candidate.to_vec());
    rank_of(&extended, width) == base_rank
}

/// Serializable form of a certificate: exact rationals as `p/q` strings,
/// floating-point samples as-is. Field order is fixed, so identical inputs
/// serialize byte-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub setup: String,
    pub algebra: String,
    pub subalgebra_dim: usize,
    pub status: CovarianceStatus,
    pub h1: Vec<String>,
    pub h2: Vec<String>,
    pub witness_index: Option<usize>,
    pub witness: Option<Vec<String>>,
    pub bracket_value: Option<Vec<String>>,
    pub obstruction: Option<Vec<String>>,
    pub samples: Vec<GroupSample>,
    pub threshold: f64,
}

impl CovarianceCertificate {
    pub fn report(&self, setup: &NetSetup) -> CertificateReport {
        let coords = |e: &LieElement| rats_to_strings(e.coords());
        CertificateReport {
            setup: self.setup_name.clone(),
            algebra: self.algebra_name.clone(),
            subalgebra_dim: setup.subalgebra_basis().len(),
            status: self.status,
            h1: coords(&self.h1),
            h2: coords(&self.h2),
            witness_index: self.witness_index,
            witness: self.witness.as_ref().map(coords),
            bracket_value: self.bracket_value.as_ref().map(coords),
            obstruction: self.obstruction.as_ref().map(coords),
            samples: self.samples.clone(),
            threshold: self.threshold,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_four_violated_setups() {
        let setups = catalog_setups();
        let names: Vec<_> = setups.iter().map(|s| s.name().to_string()).collect();
        assert_eq!(names, ["sl3", "gl2", "sl2xi", "dual"]);
        for setup in &setups {
            assert!(!neccond(setup), "setup {} unexpectedly satisfies the condition", setup.name());
            let cert = negcond_certificate(setup);
            assert_eq!(cert.status, CovarianceStatus::Violated);
            assert!(verify_certificate(setup, &cert), "certificate for {} fails re-verification", setup.name());
            assert_eq!(cert.samples.len(), 16);
        }
    }

    #[test]
    fn sl3_certificate_matches_hand_computation() {
        let setup = &catalog_setups()[0];
        // h₁ − h₂ = diag(5/6, −7/6, 1/3).
        assert_eq!(
            setup.difference().matrix(),
            RatMatrix::diagonal(vec![frac(5, 6), frac(-7, 6), frac(1, 3)])
        );
        let cert = negcond_certificate(setup);
        // The diagonal boost commutes with the difference, so the witness
        // is the second basis element k₂ = ½(E₁₂ + E₂₁).
        assert_eq!(cert.witness_index, Some(1));
        let e12 = RatMatrix::elementary(3, 0, 1);
        let e21 = RatMatrix::elementary(3, 1, 0);
        assert_eq!(
            cert.witness.as_ref().unwrap().matrix(),
            (&e12 + &e21).scale(&frac(1, 2))
        );
        assert_eq!(cert.bracket_value.as_ref().unwrap().matrix(), &e21 - &e12);
        assert_eq!(cert.obstruction.as_ref().unwrap().matrix(), &e21 + &e12);
        // Group samples genuinely witness the failure.
        assert!(cert.samples.iter().all(|s| !s.within_threshold));
        assert!(cert.samples.iter().all(|s| s.defect > 0.01));
    }

    #[test]
    fn sl3_setup_reproduces_the_embedding_split() {
        let setup = &catalog_setups()[0];
        assert_eq!(
            setup.h1().matrix(),
            RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2), rat(0)])
        );
        // h₂ = h_c − h₁ for the central part diag(1/6, 1/6, −1/3).
        let h_c = &setup.h2().matrix() + &setup.h1().matrix();
        assert_eq!(
            h_c,
            RatMatrix::diagonal(vec![frac(1, 6), frac(1, 6), frac(-1, 3)])
        );
    }

    #[test]
    fn sl2xi_setup_matches_the_central_extension() {
        let setup = &catalog_setups()[2];
        // h₂ − h₁ = ξ − 2σ₁ in the (σ₀, σ₁, σ₂, ξ) coordinates.
        let diff = &setup.h2().clone() - &setup.h1().clone();
        assert_eq!(diff.coords(), &[rat(0), rat(-2), rat(0), rat(1)]);
        let cert = negcond_certificate(setup);
        // σ₀ is the first basis element that moves the difference out of
        // the centralizer of h₂.
        assert_eq!(cert.witness_index, Some(0));
        assert!(verify_certificate(setup, &cert));
    }

    #[test]
    fn dual_setup_is_violated_for_noncentral_generators() {
        let setup = &catalog_setups()[3];
        assert_eq!(setup.h1().clone(), -&setup.h2().clone());
        assert!(!neccond(setup));
    }

    #[test]
    fn bw_control_satisfies_everything_exactly() {
        let setup = bw_control_setup();
        assert!(neccond(&setup));
        let cert = negcond_certificate(&setup);
        assert_eq!(cert.status, CovarianceStatus::CovariantNecessaryConditionHolds);
        assert!(cert.witness.is_none());
        assert!(verify_certificate(&setup, &cert));
        // h₁ − h₂ = 0, so every sample is exactly zero.
        assert!(cert.samples.iter().all(|s| s.defect == 0.0 && s.within_threshold));
        // Arbitrary group elements leave the defect at zero too.
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]);
        let report = group_fix_defect(&setup, &g, 0.7);
        assert_eq!(report.defect, 0.0);
    }

    #[test]
    fn group_defect_vanishes_at_identity_and_t_zero() {
        for setup in catalog_setups() {
            let n = setup.ambient().matrix_size();
            let id = DMatrix::<f64>::identity(n, n);
            // [h₁, h₂] = 0 makes exp(t(h₁−h₂)) commute with h₂... only in
            // the abelian directions; at the identity the inner element is
            // built purely from h₁ − h₂, which commutes with h₂ exactly
            // when the obstruction bracket [h₂, h₁−h₂] vanishes — true in
            // all catalog setups since the generators commute.
            let r = group_fix_defect(&setup, &id, 0.59);
            assert!(r.defect < 1e-12, "identity sample leaks in {}: {}", setup.name(), r.defect);
            // t = 0 collapses the inner exponential to the identity.
            let y = setup.subalgebra_basis()[1].matrix().to_f64();
            let g = y.exp();
            let r0 = group_fix_defect(&setup, &g, 0.0);
            assert!(r0.defect < 1e-12);
        }
    }

    #[test]
    fn sl3_group_sample_has_large_defect() {
        let setup = &catalog_setups()[0];
        let k2 = setup.subalgebra_basis()[1].matrix().to_f64();
        let g = (k2 * 0.5).exp();
        let report = group_fix_defect(setup, &g, 1.0);
        assert!(report.defect > 0.1, "defect {} too small", report.defect);
        assert!(!report.within_threshold);
    }

    #[test]
    fn symmetric_seed_is_refused_by_the_embedding_path() {
        let sl2 = LieAlgebra::sl(2);
        let sym = check_euler(
            &sl2.element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
                .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            setup_from_embedding("sym", &sym),
            Err(ModcovError::Embedding(EmbedError::SymmetricInput))
        ));
    }

    #[test]
    fn invalid_setups_are_rejected() {
        let sl2 = LieAlgebra::sl(2);
        let h = sl2
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
            .unwrap();
        let e12 = sl2.element_from_matrix(&RatMatrix::elementary(2, 0, 1)).unwrap();
        let nilp_shift = &h + &e12;
        let basis: Vec<_> = (0..sl2.dim()).map(|i| sl2.basis_element(i)).collect();
        // Non-commuting generators.
        assert!(matches!(
            NetSetup::new("bad", sl2.clone(), basis.clone(), h.clone(), nilp_shift),
            Err(ModcovError::GeneratorsDontCommute)
        ));
        // h₁ outside the subalgebra.
        let sl3 = LieAlgebra::sl(3);
        let k1 = sl3
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2), rat(0)]))
            .unwrap();
        let block = vec![
            sl3.element_from_matrix(&RatMatrix::elementary(3, 0, 1)).unwrap(),
            sl3.element_from_matrix(&RatMatrix::elementary(3, 1, 0)).unwrap(),
        ];
        assert!(matches!(
            NetSetup::new("bad2", sl3.clone(), block, k1.clone(), k1.clone()),
            Err(ModcovError::BadSubalgebra(_))
        ));
    }

    #[test]
    fn stabilizer_violation_is_detected() {
        // 𝔥 = sl(3) itself, h₁ the worked seed: its centralizer contains
        // E₁₃, which moves the would-be second generator diag(2,−1,−1)/3.
        let sl3 = LieAlgebra::sl(3);
        let h1 = sl3
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]))
            .unwrap();
        let h2 = sl3
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(2, 3), frac(-1, 3), frac(-1, 3)]))
            .unwrap();
        let basis: Vec<_> = (0..sl3.dim()).map(|i| sl3.basis_element(i)).collect();
        assert!(matches!(
            NetSetup::new("bad3", sl3.clone(), basis, h1, h2),
            Err(ModcovError::StabilizerMovesSecondWedge { .. })
        ));
    }

    #[test]
    fn higher_dim_check_on_the_block_subalgebra() {
        // The sl3 setup's subalgebra, boost, and seed satisfy all three
        // conditions.
        let setup = &catalog_setups()[0];
        let ok = higher_dim_stabilizer_check(
            setup.subalgebra_basis(),
            setup.h1(),
            setup.h2(),
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn higher_dim_check_failure_modes() {
        let sl3 = LieAlgebra::sl(3);
        let el = |m: &RatMatrix| sl3.element_from_matrix(m).unwrap();
        let e12 = el(&RatMatrix::elementary(3, 0, 1));
        let e23 = el(&RatMatrix::elementary(3, 1, 2));
        let e21 = el(&RatMatrix::elementary(3, 1, 0));
        let k1 = el(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2), rat(0)]));
        let rho = el(&(RatMatrix::elementary(3, 0, 1) - RatMatrix::elementary(3, 1, 0)));
        let h_seed = el(&RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]));

        // Not closed: [E₁₂, E₂₃] = E₁₃ leaves the span.
        assert!(matches!(
            higher_dim_stabilizer_check(&[e12.clone(), e23.clone()], &e12, &h_seed),
            Err(ModcovError::EmbeddingInvalid { i: 0, j: 1 })
        ));

        // h commuting with the whole subalgebra: [𝔥, h] = 0 fails the
        // nondegeneracy requirement.
        let block = vec![k1.clone(), (&e12 + &e21).scale(&frac(1, 2)), rho.scale(&frac(1, 2))];
        let commuting = el(&RatMatrix::diagonal(vec![frac(1, 3), frac(1, 3), frac(-2, 3)]));
        assert_eq!(
            higher_dim_stabilizer_check(&block, &k1, &commuting),
            Ok(false)
        );

        // [𝔥, h] leaking outside 𝔥.
        let leaky = el(&RatMatrix::elementary(3, 0, 2));
        assert_eq!(higher_dim_stabilizer_check(&block, &k1, &leaky), Ok(false));

        // Boost outside the span.
        let outside = el(&RatMatrix::diagonal(vec![rat(1), rat(0), rat(-1)]));
        assert!(matches!(
            higher_dim_stabilizer_check(&block, &outside, &h_seed),
            Err(ModcovError::BoostOutsideSubalgebra)
        ));
    }

    #[test]
    fn certificate_report_round_trips_through_json() {
        let setup = &catalog_setups()[0];
        let report = negcond_certificate(setup).report(setup);
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: CertificateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        // Identical inputs always serialize to identical bytes.
        let report2 = negcond_certificate(setup).report(setup);
        assert_eq!(json, serde_json::to_string_pretty(&report2).unwrap());
    }
}
