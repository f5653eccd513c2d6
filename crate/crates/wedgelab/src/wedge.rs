//! Abstract wedges as couples `(x, σ)` and the twisted adjoint action.
//!
//! A *wedge couple* in a Lie algebra `g` consists of an element `x` and a
//! group element `σ` of odd parity with `σ² = e` and `Ad(σ)x = x`. The model
//! case is an Euler element together with its grading involution; the couple
//! then remembers exactly the data a wedge region carries in a spacetime —
//! a boost generator and a reflection fixing the wedge.
//!
//! The symmetry group acts by the *twisted* adjoint action
//!
//! ```text
//! g.(x, σ) = (ε(g)·Ad(g)x, g σ g⁻¹),
//! ```
//!
//! where `ε(g) = ±1` is the parity: orientation-reversing elements flip the
//! sign of the generator. Duality is the parity-odd element `σ` acting on
//! its own couple, which lands on `(−x, σ)`.
//!
//! Everything in this module is exact. Group elements are rational matrices
//! in the defining representation; floating-point group sampling lives in
//! the spacetime layer.

use crate::euler::{check_euler, EulerElement};
use crate::exact::RatMatrix;
use crate::liealg::{LieAlgebra, LieElement};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error("group element matrix is singular")]
    Singular,
    #[error("σ must have odd parity")]
    WrongParity,
    #[error("σ² ≠ e, not an involution")]
    NotInvolution,
    #[error("Ad(σ) moves basis element {basis_index} outside the algebra")]
    NotNormalizing { basis_index: usize },
    #[error("Ad(σ)x ≠ x: σ does not fix the generator")]
    NotFixing,
    #[error("matrix size {got} does not match the algebra's defining representation {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("order relation is only defined for the zero cone; the requested cone is unsupported")]
    UnsupportedCone,
}

/// Parity of a group element: even elements preserve the grading/orientation,
/// odd elements reverse it. Serialized as `+1` / `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Serialize for Parity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Parity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            other => Err(serde::de::Error::custom(format!("parity must be ±1, got {other}"))),
        }
    }
}

/// An invertible rational matrix in the defining representation, together
/// with a parity bit. The parity is extra structure — it records which
/// component of the (disconnected) symmetry group the element belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGroupElement {
    matrix: RatMatrix,
    parity: Parity,
}

impl GradedGroupElement {
    pub fn new(matrix: RatMatrix, parity: Parity) -> Result<Self, WedgeError> {
        if matrix.inverse().is_none() {
            return Err(WedgeError::Singular);
        }
        Ok(GradedGroupElement { matrix, parity })
    }

    pub fn even(matrix: RatMatrix) -> Result<Self, WedgeError> {
        Self::new(matrix, Parity::Even)
    }

    pub fn odd(matrix: RatMatrix) -> Result<Self, WedgeError> {
        Self::new(matrix, Parity::Odd)
    }

    pub fn identity(n: usize) -> Self {
        GradedGroupElement { matrix: RatMatrix::identity(n), parity: Parity::Even }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Group multiplication; parities multiply.
    pub fn compose(&self, other: &GradedGroupElement) -> GradedGroupElement {
        GradedGroupElement {
            matrix: &self.matrix * &other.matrix,
            parity: self.parity.combine(other.parity),
        }
    }

    pub fn inverse(&self) -> GradedGroupElement {
        GradedGroupElement {
            matrix: self.matrix.inverse().expect("group elements are invertible"),
            parity: self.parity,
        }
    }

    /// The (untwisted) adjoint action on an algebra element:
    /// `x ↦ g·X·g⁻¹` re-expressed in the basis. Fails if conjugation leaves
    /// the algebra.
    pub fn adjoint(&self, x: &LieElement) -> Result<LieElement, WedgeError> {
        let expected = x.algebra().matrix_size();
        if self.matrix.nrows() != expected {
            return Err(WedgeError::SizeMismatch { expected, got: self.matrix.nrows() });
        }
        let conj = &(&self.matrix * &x.matrix()) * &self.inverse().matrix;
        x.algebra()
            .element_from_matrix(&conj)
            .map_err(|_| WedgeError::NotNormalizing { basis_index: usize::MAX })
    }

    /// The adjoint action as an exact operator on coordinates, defined when
    /// conjugation by this element normalizes the algebra.
    pub fn adjoint_operator(&self, algebra: &Arc<LieAlgebra>) -> Result<RatMatrix, WedgeError> {
        let dim = algebra.dim();
        let mut op = RatMatrix::zeros(dim, dim);
        let inv = self.inverse();
        for j in 0..dim {
            let conj = &(&self.matrix * &algebra.basis()[j]) * &inv.matrix;
            let col = algebra
                .element_from_matrix(&conj)
                .map_err(|_| WedgeError::NotNormalizing { basis_index: j })?;
            for (i, c) in col.coords().iter().enumerate() {
                op[(i, j)] = c.clone();
            }
        }
        Ok(op)
    }

    /// Twisted adjoint action `Ad^ε(g)x = ε(g)·Ad(g)x`.
    pub fn twisted_adjoint(&self, x: &LieElement) -> Result<LieElement, WedgeError> {
        let ad = self.adjoint(x)?;
        Ok(match self.parity {
            Parity::Even => ad,
            Parity::Odd => -&ad,
        })
    }
}

/// A wedge couple `(x, σ)`: generator plus odd involution fixing it.
#[derive(Debug, Clone)]
pub struct WedgeCouple {
    x: LieElement,
    sigma: GradedGroupElement,
    /// Present exactly when `x` is an Euler element *and* `Ad(σ)` coincides
    /// with its grading involution.
    euler: Option<EulerElement>,
}

impl PartialEq for WedgeCouple {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.sigma == other.sigma
    }
}

impl WedgeCouple {
    /// Validate and build a couple. The checks, all exact:
    /// σ has odd parity, σ² = e, conjugation by σ normalizes the algebra,
    /// and Ad(σ)x = x.
    pub fn new(x: LieElement, sigma: GradedGroupElement) -> Result<Self, WedgeError> {
        let expected = x.algebra().matrix_size();
        if sigma.matrix.nrows() != expected {
            return Err(WedgeError::SizeMismatch { expected, got: sigma.matrix.nrows() });
        }
        if sigma.parity != Parity::Odd {
            return Err(WedgeError::WrongParity);
        }
        if &sigma.matrix * &sigma.matrix != RatMatrix::identity(expected) {
            return Err(WedgeError::NotInvolution);
        }
        let ad_sigma = sigma.adjoint_operator(x.algebra())?;
        if ad_sigma.apply(x.coords()) != x.coords() {
            return Err(WedgeError::NotFixing);
        }
        let euler = match check_euler(&x) {
            Ok(e) => (e.involution() == ad_sigma).then_some(e),
            Err(_) => None,
        };
        Ok(WedgeCouple { x, sigma, euler })
    }

    pub fn generator(&self) -> &LieElement {
        &self.x
    }

    pub fn involution(&self) -> &GradedGroupElement {
        &self.sigma
    }

    /// Is this an Euler couple — Euler generator with `Ad(σ)` equal to its
    /// grading involution?
    pub fn is_euler(&self) -> bool {
        self.euler.is_some()
    }

    pub fn euler(&self) -> Option<&EulerElement> {
        self.euler.as_ref()
    }

    /// The twisted action `g.(x, σ) = (ε(g)Ad(g)x, gσg⁻¹)`.
    pub fn act(&self, g: &GradedGroupElement) -> Result<WedgeCouple, WedgeError> {
        let x = g.twisted_adjoint(&self.x)?;
        let sigma = g.compose(&self.sigma).compose(&g.inverse());
        WedgeCouple::new(x, sigma)
    }

    /// The dual couple `(−x, σ)`, i.e. `σ` acting on its own couple.
    pub fn dual(&self) -> WedgeCouple {
        WedgeCouple::new(-&self.x, self.sigma.clone())
            .expect("dual of a valid couple is valid")
    }

    /// Exact basis of the stabilizer algebra of this wedge.
    ///
    /// For Euler couples this is the centralizer `ker(ad x)` (which contains
    /// any central elements automatically). In general it is the part of the
    /// centralizer fixed by `Ad(σ)`.
    pub fn stabilizer_algebra(&self) -> Vec<LieElement> {
        let alg = self.x.algebra();
        let ad = self.x.ad();
        let kernel_basis = if self.is_euler() {
            ad.kernel()
        } else {
            let ad_sigma = self
                .sigma
                .adjoint_operator(alg)
                .expect("σ normalizes the algebra by construction");
            let fixed = &ad_sigma - &RatMatrix::identity(alg.dim());
            // Stack [ad x; Ad(σ) − 1] and take the joint kernel.
            let dim = alg.dim();
            let mut stacked = RatMatrix::zeros(2 * dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    stacked[(i, j)] = ad[(i, j)].clone();
                    stacked[(dim + i, j)] = fixed[(i, j)].clone();
                }
            }
            stacked.kernel()
        };
        kernel_basis.into_iter().map(|coords| alg.element(coords)).collect()
    }

    /// Order relation between wedges with respect to an invariant cone.
    ///
    /// Only the trivial cone is implemented: there the relation degenerates
    /// to equality of couples. Any other cone is reported as unsupported
    /// rather than silently approximated.
    pub fn order_leq(&self, other: &WedgeCouple, cone: &ConeSpec) -> Result<bool, WedgeError> {
        match cone.kind {
            ConeKind::Zero => Ok(self == other),
            ConeKind::ForwardLightCone => Err(WedgeError::UnsupportedCone),
        }
    }
}

/// Kinds of invariant cones for the wedge order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    /// The trivial cone `{0}`.
    Zero,
    /// The closed forward light cone of a Lorentzian space.
    ForwardLightCone,
}

/// Invariant cone data for order structures on wedge space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub kind: ConeKind,
    /// Ambient vector-space dimension (1 + spatial for light cones).
    pub ambient_dim: usize,
}

impl ConeSpec {
    pub fn zero(ambient_dim: usize) -> Self {
        ConeSpec { kind: ConeKind::Zero, ambient_dim }
    }

    pub fn forward_light_cone(ambient_dim: usize) -> Self {
        ConeSpec { kind: ConeKind::ForwardLightCone, ambient_dim }
    }

    /// Membership test for numerical vectors (used by the spacetime layer).
    pub fn contains(&self, v: &[f64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector dimension mismatch");
        match self.kind {
            ConeKind::Zero => v.iter().all(|&c| c == 0.0),
            ConeKind::ForwardLightCone => {
                let spatial: f64 = v[1..].iter().map(|c| c * c).sum();
                v[0] >= 0.0 && v[0] * v[0] - spatial >= 0.0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat, RatMatrix};
    use crate::liealg::LieAlgebra;

    /// The standard sl(2) couple: h = ½ diag(1, −1) with σ = Ad(diag(1, −1)).
    fn sl2_couple() -> WedgeCouple {
        let sl2 = LieAlgebra::sl(2);
        let h = sl2
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
            .unwrap();
        let sigma =
            GradedGroupElement::odd(RatMatrix::diagonal(vec![rat(1), rat(-1)])).unwrap();
        WedgeCouple::new(h, sigma).unwrap()
    }

    #[test]
    fn euler_couple_detected() {
        let w = sl2_couple();
        assert!(w.is_euler());
        assert_eq!(w.stabilizer_algebra().len(), 1);
    }

    #[test]
    fn non_involution_rejected() {
        let sl2 = LieAlgebra::sl(2);
        let h = sl2
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
            .unwrap();
        // r(π) squares to −1, not to the identity.
        let r_pi = RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let sigma = GradedGroupElement::odd(r_pi).unwrap();
        assert!(matches!(WedgeCouple::new(h, sigma), Err(WedgeError::NotInvolution)));
    }

    #[test]
    fn parity_and_fixing_enforced() {
        let sl2 = LieAlgebra::sl(2);
        let h = sl2
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2)]))
            .unwrap();
        let even_sigma =
            GradedGroupElement::even(RatMatrix::diagonal(vec![rat(1), rat(-1)])).unwrap();
        assert!(matches!(
            WedgeCouple::new(h.clone(), even_sigma),
            Err(WedgeError::WrongParity)
        ));
        // The permutation matrix is an odd involution but flips h.
        let swap = GradedGroupElement::odd(RatMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(matches!(WedgeCouple::new(h, swap), Err(WedgeError::NotFixing)));
    }

    #[test]
    fn dual_is_an_involution_and_matches_sigma_action() {
        let w = sl2_couple();
        let dual = w.dual();
        assert_eq!(dual.generator(), &-&w.generator().clone());
        assert_eq!(dual.dual(), w);
        let via_action = w.act(w.involution()).unwrap();
        assert_eq!(via_action, dual);
    }

    #[test]
    fn boosts_stabilize_their_own_wedge() {
        // diag(2, 1/2) lies on the one-parameter boost group of h; it must
        // fix the couple exactly.
        let w = sl2_couple();
        let boost =
            GradedGroupElement::even(RatMatrix::diagonal(vec![rat(2), frac(1, 2)])).unwrap();
        assert_eq!(w.act(&boost).unwrap(), w);
        // And the central element −1 acts trivially as well.
        let minus_one =
            GradedGroupElement::even(RatMatrix::diagonal(vec![rat(-1), rat(-1)])).unwrap();
        assert_eq!(w.act(&minus_one).unwrap(), w);
    }

    #[test]
    fn boost_stabilizes_wedge_numerically_at_t_equals_one() {
        // The same statement for the honest exponential exp(1·h), checked in
        // floating point against the construction tolerance.
        let w = sl2_couple();
        let h = w.generator().matrix().to_f64();
        let g = h.clone().exp();
        let x = w.generator().matrix().to_f64();
        let moved = &g * x.clone() * g.clone().try_inverse().unwrap();
        assert!((moved - x).norm() < crate::tolerance::CONSTRUCTION);
        let sigma = w.involution().matrix().to_f64();
        let moved_sigma = &g * sigma.clone() * g.try_inverse().unwrap();
        assert!((moved_sigma - sigma).norm() < crate::tolerance::CONSTRUCTION);
    }

    #[test]
    fn action_is_a_group_action_on_words() {
        let w = sl2_couple();
        let gens = [
            GradedGroupElement::even(RatMatrix::diagonal(vec![rat(2), frac(1, 2)])).unwrap(),
            GradedGroupElement::even(RatMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap(),
            GradedGroupElement::even(RatMatrix::from_i64(&[&[1, 0], &[1, 1]])).unwrap(),
            GradedGroupElement::odd(RatMatrix::diagonal(vec![rat(1), rat(-1)])).unwrap(),
        ];
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let word = a.compose(b).compose(c);
                    let stepwise =
                        w.act(c).unwrap().act(b).unwrap().act(a).unwrap();
                    assert_eq!(stepwise, w.act(&word).unwrap());
                }
            }
        }
        let e = GradedGroupElement::identity(2);
        assert_eq!(w.act(&e).unwrap(), w);
    }

    #[test]
    fn odd_elements_flip_the_generator_sign() {
        let w = sl2_couple();
        // An odd element commuting with h: the twisted action negates x.
        let odd_diag =
            GradedGroupElement::odd(RatMatrix::diagonal(vec![rat(1), rat(-1)])).unwrap();
        let moved = w.act(&odd_diag).unwrap();
        assert_eq!(moved.generator(), &-&w.generator().clone());
    }

    #[test]
    fn non_euler_couple_stabilizer_uses_fixed_points() {
        // (ξ, σ) in gl(2): ξ is central (not Euler); the stabilizer is the
        // σ-fixed part of gl(2), the diagonal matrices.
        let gl2 = LieAlgebra::gl(2);
        let xi = gl2.element_from_matrix(&RatMatrix::identity(2)).unwrap();
        let sigma =
            GradedGroupElement::odd(RatMatrix::diagonal(vec![rat(1), rat(-1)])).unwrap();
        let w = WedgeCouple::new(xi, sigma).unwrap();
        assert!(!w.is_euler());
        assert_eq!(w.stabilizer_algebra().len(), 2);
    }

    #[test]
    fn lorentz_boost_couple_is_euler() {
        // In so(1,2): the x₁-boost paired with the reflection
        // j = diag(−1, −1, 1) (time and x₁ flipped) is an Euler couple.
        let so12 = LieAlgebra::so1d(2);
        let k1 = so12.basis_element(0);
        let j = GradedGroupElement::odd(RatMatrix::diagonal(vec![
            rat(-1),
            rat(-1),
            rat(1),
        ]))
        .unwrap();
        let w = WedgeCouple::new(k1, j).unwrap();
        assert!(w.is_euler());
        // Its stabilizer inside so(1,2) is just the boost line itself.
        assert_eq!(w.stabilizer_algebra().len(), 1);
        // The spatial rotation by π maps the couple to its dual.
        let r_pi = GradedGroupElement::even(RatMatrix::from_i64(&[
            &[1, 0, 0],
            &[0, -1, 0],
            &[0, 0, -1],
        ]))
        .unwrap();
        assert_eq!(w.act(&r_pi).unwrap(), w.dual());
    }

    #[test]
    fn order_for_the_zero_cone_is_equality() {
        let w = sl2_couple();
        let cone = ConeSpec::zero(3);
        assert_eq!(w.order_leq(&w, &cone), Ok(true));
        assert_eq!(w.order_leq(&w.dual(), &cone), Ok(false));
        let light = ConeSpec::forward_light_cone(3);
        assert_eq!(w.order_leq(&w, &light), Err(WedgeError::UnsupportedCone));
    }

    #[test]
    fn cone_membership() {
        let cone = ConeSpec::forward_light_cone(3);
        assert!(cone.contains(&[1.0, 0.5, 0.5]));
        assert!(!cone.contains(&[1.0, 1.5, 0.0]));
        assert!(!cone.contains(&[-1.0, 0.0, 0.0]));
    }
}
