//! Two-dimensional de Sitter space, its matrix model, and wedge regions.
//!
//! The hyperboloid `dS² = {x ∈ ℝ^{1+2} : x₁² + x₂² − x₀² = 1}` embeds into
//! the traceless 2×2 matrices via
//!
//! ```text
//! x ↦ x̃ = ½ [ x₁        −x₀ − x₂ ]
//!           [ x₀ − x₂   −x₁      ]
//! ```
//!
//! which intertwines the `SL₂(ℝ)` conjugation action with the Lorentz
//! action on `ℝ^{1+2}`: the covering map `Λ` is defined by
//! `(Λ(g)x)~ = g x̃ g⁻¹` and has kernel `{±1}`. The Minkowski square
//! satisfies `x² = 4 det x̃`, so `dS²` corresponds to matrices of
//! determinant `−1/4`.
//!
//! Wedges on `dS²` are stored by their boost generator: the standard right
//! wedge `W = {|x₀| < x₁}` carries `σ₁`, and every other wedge is
//! `Ad(g)σ₁` for some `g ∈ SL₂(ℝ)`. Ambient Minkowski wedges add a
//! translation, compared modulo the edge of the wedge.
//!
//! This is the floating-point layer of the crate: geometry runs in `f64`
//! with the documented tolerances, while all Lie-algebra certificates stay
//! exact.

use crate::tolerance::{CONSTRUCTION, GEOM_EQ};
use crate::wedge::ConeSpec;
use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpacetimeError {
    #[error("point is off the unit hyperboloid by {defect:e}")]
    NotOnHyperboloid { defect: f64 },
    #[error("matrix has nonzero trace {trace:e}")]
    NonzeroTrace { trace: f64 },
    #[error("matrix determinant {det} is not 1")]
    NotUnimodular { det: f64 },
    #[error("boost generator invalid: trace {trace:e}, determinant {det}")]
    InvalidBoost { trace: f64, det: f64 },
}

/// `σ₀ = ½[[0,−1],[1,0]]`, the rotation generator.
pub fn sigma0_f64() -> Matrix2<f64> {
    Matrix2::new(0.0, -0.5, 0.5, 0.0)
}

/// `σ₁ = ½[[0,1],[1,0]]`, the boost generator of the standard right wedge.
pub fn sigma1_f64() -> Matrix2<f64> {
    Matrix2::new(0.0, 0.5, 0.5, 0.0)
}

/// `σ₂ = ½ diag(1,−1)`, the boost generator of the `x₂` wedge.
pub fn sigma2_f64() -> Matrix2<f64> {
    Matrix2::new(0.5, 0.0, 0.0, -0.5)
}

/// The matrix model of a spacetime vector: `x ↦ x̃` as in the module docs.
/// Defined on all of `ℝ^{1+2}`; satisfies `x² = 4 det x̃`.
pub fn tilde(x: &[f64; 3]) -> Matrix2<f64> {
    Matrix2::new(
        0.5 * x[1],
        0.5 * (-x[0] - x[2]),
        0.5 * (x[0] - x[2]),
        -0.5 * x[1],
    )
}

/// Inverse of [`tilde`] on traceless matrices:
/// `y = (−2 tr(Xσ₀), 2 tr(Xσ₂), −2 tr(Xσ₁))`.
pub fn untilde(m: &Matrix2<f64>) -> Result<[f64; 3], SpacetimeError> {
    let trace = m.trace();
    if trace.abs() > CONSTRUCTION {
        return Err(SpacetimeError::NonzeroTrace { trace });
    }
    Ok([
        -2.0 * (m * sigma0_f64()).trace(),
        2.0 * (m * sigma2_f64()).trace(),
        -2.0 * (m * sigma1_f64()).trace(),
    ])
}

/// The two-to-one covering `Λ: SL₂(ℝ) → SO(1,2)↑`, characterized by
/// `(Λ(g)x)~ = g x̃ g⁻¹`. Computed column-by-column on the standard basis.
pub fn lambda_cover(g: &Matrix2<f64>) -> Result<Matrix3<f64>, SpacetimeError> {
    let det = g.determinant();
    if (det - 1.0).abs() > CONSTRUCTION {
        return Err(SpacetimeError::NotUnimodular { det });
    }
    let g_inv = g
        .try_inverse()
        .expect("unimodular matrices are invertible");
    let mut out = Matrix3::zeros();
    for (k, e) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .iter()
        .enumerate()
    {
        let conj = g * tilde(e) * g_inv;
        let col = untilde(&conj).expect("conjugation preserves tracelessness");
        for i in 0..3 {
            out[(i, k)] = col[i];
        }
    }
    Ok(out)
}

/// The rotation lift `r(θ) = exp(−σ₀ θ)`, explicitly
/// `[[cos(θ/2), sin(θ/2)], [−sin(θ/2), cos(θ/2)]]`. Note the half-angle:
/// `r` has period `4π` and `r(2π) = −1` generates the covering kernel.
pub fn rot(theta: f64) -> Matrix2<f64> {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// The space rotation `R(θ) = Λ(r(θ))` in closed form:
/// identity on `x₀`, rotation by `θ` in the `(x₁, x₂)` plane.
pub fn spatial_rotation(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// The boost lift `exp(σ₁ t)` along `x₁`; `Λ` of it mixes `(x₀, x₁)` with
/// `cosh t`, `sinh t`.
pub fn boost_x1(t: f64) -> Matrix2<f64> {
    let (ch, sh) = ((0.5 * t).cosh(), (0.5 * t).sinh());
    Matrix2::new(ch, sh, sh, ch)
}

/// The boost lift `exp(σ₂ t)` along `x₂`.
pub fn boost_x2(t: f64) -> Matrix2<f64> {
    Matrix2::new((0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp())
}

/// Forward light cone membership: `v₀ ≥ 0` and `v₀² − v₁² − v₂² ≥ 0`.
pub fn forward_cone_contains(v: &[f64; 3]) -> bool {
    ConeSpec::forward_light_cone(3).contains(v)
}

/// A point of the de Sitter hyperboloid `x₁² + x₂² − x₀² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeSitterPoint {
    coords: [f64; 3],
}

impl DeSitterPoint {
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self, SpacetimeError> {
        let defect = (x1 * x1 + x2 * x2 - x0 * x0 - 1.0).abs();
        if defect > CONSTRUCTION {
            return Err(SpacetimeError::NotOnHyperboloid { defect });
        }
        Ok(DeSitterPoint { coords: [x0, x1, x2] })
    }

    /// The point `(sinh s, cosh s cos φ, cosh s sin φ)` — a global
    /// parametrization of the hyperboloid, handy for sampling.
    pub fn from_parameters(s: f64, phi: f64) -> Self {
        let (sh, ch) = (s.sinh(), s.cosh());
        DeSitterPoint {
            coords: [sh, ch * phi.cos(), ch * phi.sin()],
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    /// The matrix form `x̃`; traceless with determinant `−1/4`.
    pub fn matrix(&self) -> Matrix2<f64> {
        tilde(&self.coords)
    }

    /// Apply a Lorentz transformation coming from the covering group.
    pub fn transform(&self, g: &Matrix2<f64>) -> Result<Self, SpacetimeError> {
        let lam = lambda_cover(g)?;
        let v = lam * Vector3::new(self.coords[0], self.coords[1], self.coords[2]);
        Ok(DeSitterPoint { coords: [v[0], v[1], v[2]] })
    }
}

/// A wedge region of `dS²`, stored as its boost generator `k = Ad(g)σ₁`.
///
/// The generator determines the region: the wedge of `k` is the image of
/// the standard right wedge `{|x₀| < x₁} ∩ dS²` under any `g` with
/// `Ad(g)σ₁ = k`, and two wedges coincide exactly when their generators do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DSWedge {
    k: Matrix2<f64>,
}

impl DSWedge {
    /// The standard right wedge `{|x₀| < x₁}`, generated by `σ₁`.
    pub fn base() -> Self {
        DSWedge { k: sigma1_f64() }
    }

    /// Wrap an explicit boost generator; must be traceless with
    /// determinant `−1/4` (spectrum `{½, −½}`).
    pub fn from_boost_generator(k: Matrix2<f64>) -> Result<Self, SpacetimeError> {
        let trace = k.trace();
        let det = k.determinant();
        if trace.abs() > CONSTRUCTION || (det + 0.25).abs() > CONSTRUCTION {
            return Err(SpacetimeError::InvalidBoost { trace, det });
        }
        Ok(DSWedge { k })
    }

    pub fn generator(&self) -> &Matrix2<f64> {
        &self.k
    }

    /// Move the wedge by a covering-group element: `k ↦ Ad(g)k`.
    pub fn transform(&self, g: &Matrix2<f64>) -> Result<Self, SpacetimeError> {
        let det = g.determinant();
        if (det - 1.0).abs() > CONSTRUCTION {
            return Err(SpacetimeError::NotUnimodular { det });
        }
        let g_inv = g.try_inverse().expect("unimodular matrices are invertible");
        Ok(DSWedge { k: g * self.k * g_inv })
    }

    /// The opposite wedge, generated by `−k`. Geometrically this is the
    /// spatial rotation by `π` applied to the wedge.
    pub fn dual(&self) -> Self {
        DSWedge { k: -self.k }
    }

    /// Wedge equality is generator equality, within the geometric
    /// tolerance.
    pub fn approx_eq(&self, other: &DSWedge) -> bool {
        (self.k - other.k).norm() <= GEOM_EQ
    }

    /// A covering-group element carrying the standard right wedge here,
    /// built from the eigenvectors of the generator and normalized to
    /// determinant one. Any two such elements differ by the stabilizer
    /// `{±1}exp(ℝσ₁)` of the standard wedge, which leaves membership
    /// tests unaffected.
    pub fn carrier(&self) -> Matrix2<f64> {
        let v_plus = kernel_vector(&(self.k - Matrix2::identity().scale(0.5)));
        let mut v_minus = kernel_vector(&(self.k + Matrix2::identity().scale(0.5)));
        // Columns of the base change from σ₁'s eigenvectors (1,±1)/√2;
        // that reference frame is negatively oriented, so match its sign.
        let mut cols = Matrix2::from_columns(&[v_plus, v_minus]);
        if cols.determinant() > 0.0 {
            v_minus = -v_minus;
            cols = Matrix2::from_columns(&[v_plus, v_minus]);
        }
        let base = Matrix2::new(1.0, 1.0, 1.0, -1.0).scale(std::f64::consts::FRAC_1_SQRT_2);
        let g = cols * base.try_inverse().expect("fixed base frame is invertible");
        let det = g.determinant();
        debug_assert!(det > 0.0, "eigenvector frame of a valid boost is orientable");
        g / det.sqrt()
    }

    /// Membership of a hyperboloid point: pull the point back by a carrier
    /// of this wedge and test `|x₀| < x₁` in the standard frame.
    pub fn contains(&self, p: &DeSitterPoint) -> bool {
        let g = self.carrier();
        let g_inv = g.try_inverse().expect("carriers are unimodular");
        let q = p
            .transform(&g_inv)
            .expect("carrier inverses are unimodular");
        let [q0, q1, _] = q.coords();
        q0.abs() < q1
    }
}

/// Any nonzero kernel vector of a (numerically) singular 2×2 matrix: both
/// rows of the adjugate lie in the kernel; take the better-conditioned one.
fn kernel_vector(m: &Matrix2<f64>) -> Vector2<f64> {
    let a = Vector2::new(m[(0, 1)], -m[(0, 0)]);
    let b = Vector2::new(m[(1, 1)], -m[(1, 0)]);
    let v = if a.norm() >= b.norm() { a } else { b };
    debug_assert!(v.norm() > 0.0, "kernel vector of a boost shift is nonzero");
    v / v.norm()
}

/// The wedge `Λ(g)W` for the standard right wedge `W`, i.e. generator
/// `Ad(g)σ₁`.
pub fn ds_wedge_of(g: &Matrix2<f64>) -> Result<DSWedge, SpacetimeError> {
    DSWedge::base().transform(g)
}

/// An element `(a, g)` of the (covering of the) Poincaré group of
/// `ℝ^{1+2}`: translation `a` composed with the Lorentz part `Λ(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareElement {
    a: Vector3<f64>,
    g: Matrix2<f64>,
}

impl PoincareElement {
    pub fn new(a: [f64; 3], g: Matrix2<f64>) -> Result<Self, SpacetimeError> {
        let det = g.determinant();
        if (det - 1.0).abs() > CONSTRUCTION {
            return Err(SpacetimeError::NotUnimodular { det });
        }
        Ok(PoincareElement { a: Vector3::new(a[0], a[1], a[2]), g })
    }

    pub fn identity() -> Self {
        PoincareElement { a: Vector3::zeros(), g: Matrix2::identity() }
    }

    pub fn translation(a: [f64; 3]) -> Self {
        PoincareElement { a: Vector3::new(a[0], a[1], a[2]), g: Matrix2::identity() }
    }

    pub fn translation_part(&self) -> [f64; 3] {
        [self.a[0], self.a[1], self.a[2]]
    }

    pub fn lorentz_part(&self) -> &Matrix2<f64> {
        &self.g
    }

    /// Semidirect-product law: `(a₁, g₁)(a₂, g₂) = (a₁ + Λ(g₁)a₂, g₁g₂)`.
    pub fn compose(&self, other: &PoincareElement) -> PoincareElement {
        let lam = lambda_cover(&self.g).expect("group elements are unimodular");
        PoincareElement { a: self.a + lam * other.a, g: self.g * other.g }
    }

    pub fn inverse(&self) -> PoincareElement {
        let g_inv = self.g.try_inverse().expect("group elements are invertible");
        let lam_inv = lambda_cover(&g_inv).expect("inverses are unimodular");
        PoincareElement { a: -(lam_inv * self.a), g: g_inv }
    }

    pub fn act_point(&self, v: &[f64; 3]) -> [f64; 3] {
        let lam = lambda_cover(&self.g).expect("group elements are unimodular");
        let out = lam * Vector3::new(v[0], v[1], v[2]) + self.a;
        [out[0], out[1], out[2]]
    }

    pub fn act_wedge(&self, w: &MinkWedge) -> MinkWedge {
        let lam = lambda_cover(&self.g).expect("group elements are unimodular");
        MinkWedge {
            translation: self.a + lam * w.translation,
            ds_part: w
                .ds_part
                .transform(&self.g)
                .expect("group elements are unimodular"),
        }
    }
}

/// A wedge region of ambient Minkowski space `ℝ^{1+2}`: the standard right
/// wedge moved by a Poincaré element. Stored as the translation plus the
/// boost-generator data of its Lorentz part.
#[derive(Debug, Clone, Copy)]
pub struct MinkWedge {
    translation: Vector3<f64>,
    ds_part: DSWedge,
}

impl MinkWedge {
    pub fn standard() -> Self {
        MinkWedge { translation: Vector3::zeros(), ds_part: DSWedge::base() }
    }

    pub fn translation(&self) -> [f64; 3] {
        [self.translation[0], self.translation[1], self.translation[2]]
    }

    /// Forget the translation: the de Sitter wedge with the same boost
    /// generator.
    pub fn ds_part(&self) -> &DSWedge {
        &self.ds_part
    }

    /// The edge direction of this wedge: the image of `e₂` under a carrier
    /// of the Lorentz part. Translating along it does not move the region.
    pub fn edge_direction(&self) -> Vector3<f64> {
        let lam = lambda_cover(&self.ds_part.carrier())
            .expect("carriers are unimodular");
        lam.column(2).into_owned()
    }

    /// Region equality: same boost generator, and the relative translation
    /// lies along the edge of the wedge (those translations act trivially
    /// on the region).
    pub fn approx_eq(&self, other: &MinkWedge) -> bool {
        if !self.ds_part.approx_eq(&other.ds_part) {
            return false;
        }
        let diff = self.translation - other.translation;
        let edge = self.edge_direction();
        let residual = diff - edge * (diff.dot(&edge) / edge.dot(&edge));
        residual.norm() <= GEOM_EQ
    }
}

/// The Minkowski wedge `(a, g)·W` for the standard wedge `W`.
pub fn mink_wedge_of(a: [f64; 3], g: &Matrix2<f64>) -> Result<MinkWedge, SpacetimeError> {
    Ok(MinkWedge {
        translation: Vector3::new(a[0], a[1], a[2]),
        ds_part: ds_wedge_of(g)?,
    })
}

/// Embed a de Sitter wedge as the Minkowski wedge with zero translation.
pub fn embed_ds(w: &DSWedge) -> MinkWedge {
    MinkWedge { translation: Vector3::zeros(), ds_part: *w }
}

/// Project a Minkowski wedge to de Sitter space by forgetting the
/// translation. Left inverse of [`embed_ds`]; translations act trivially
/// on the projection.
pub fn project_ds(w: &MinkWedge) -> DSWedge {
    w.ds_part
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn tilde_basis_values() {
        assert_eq!(tilde(&[0.0, 1.0, 0.0]), sigma2_f64());
        assert_eq!(tilde(&[1.0, 0.0, 0.0]), sigma0_f64());
        assert_eq!(tilde(&[0.0, 0.0, 1.0]), -sigma1_f64());
    }

    #[test]
    fn untilde_inverts_tilde() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let y = untilde(&tilde(&x)).unwrap();
            for i in 0..3 {
                assert!(approx(x[i], y[i], CONSTRUCTION));
            }
        }
        let not_traceless = Matrix2::new(1.0, 0.0, 0.0, 0.0);
        assert!(matches!(untilde(&not_traceless), Err(SpacetimeError::NonzeroTrace { .. })));
    }

    #[test]
    fn minkowski_square_is_four_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let sq = x[0] * x[0] - x[1] * x[1] - x[2] * x[2];
            assert!(approx(sq, 4.0 * tilde(&x).determinant(), 1e-10));
        }
    }

    #[test]
    fn cover_special_values() {
        let r_pi = lambda_cover(&rot(PI)).unwrap();
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        assert!((r_pi - expected).norm() < CONSTRUCTION);
        let minus_one = lambda_cover(&(-Matrix2::identity())).unwrap();
        assert!((minus_one - Matrix3::identity()).norm() < CONSTRUCTION);
        let skew = Matrix2::new(2.0, 0.0, 0.0, 1.0);
        assert!(matches!(lambda_cover(&skew), Err(SpacetimeError::NotUnimodular { .. })));
    }

    #[test]
    fn cover_matches_rotation_closed_form() {
        for theta in [0.0, PI / 2.0, PI, 3.0 * PI / 2.0, 0.37] {
            let lhs = lambda_cover(&rot(theta)).unwrap();
            assert!((lhs - spatial_rotation(theta)).norm() < CONSTRUCTION);
        }
    }

    #[test]
    fn cover_of_boost_mixes_time_and_x1() {
        let t = 0.83;
        let lam = lambda_cover(&boost_x1(t)).unwrap();
        let expected = Matrix3::new(
            t.cosh(),
            t.sinh(),
            0.0,
            t.sinh(),
            t.cosh(),
            0.0,
            0.0,
            0.0,
            1.0,
        );
        assert!((lam - expected).norm() < 1e-12);
    }

    #[test]
    fn cover_is_a_homomorphism_preserving_the_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let eta = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        for _ in 0..100 {
            let g1 = random_sl2(&mut rng);
            let g2 = random_sl2(&mut rng);
            let lhs = lambda_cover(&(g1 * g2)).unwrap();
            let rhs = lambda_cover(&g1).unwrap() * lambda_cover(&g2).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
            let lam = lambda_cover(&g1).unwrap();
            assert!((lam.transpose() * eta * lam - eta).norm() < 1e-9);
            assert!(lam[(0, 0)] > 0.0, "time orientation preserved");
        }
    }

    fn random_sl2(rng: &mut ChaCha8Rng) -> Matrix2<f64> {
        // Generic product of a rotation and the two boosts.
        rot(rng.gen_range(-PI..PI))
            * boost_x1(rng.gen_range(-2.0..2.0))
            * boost_x2(rng.gen_range(-2.0..2.0))
    }

    #[test]
    fn base_wedge_membership() {
        let w = DSWedge::base();
        let inside = DeSitterPoint::new(0.0, 1.0, 0.0).unwrap();
        let outside = DeSitterPoint::new(0.0, -1.0, 0.0).unwrap();
        assert!(w.contains(&inside));
        assert!(!w.contains(&outside));
        // Rotating the wedge by π lands on the opposite wedge.
        let rotated = w.transform(&rot(PI)).unwrap();
        assert!(rotated.contains(&outside));
        assert!(!rotated.contains(&inside));
        assert!(rotated.approx_eq(&w.dual()));
    }

    #[test]
    fn membership_is_action_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let w = DSWedge::base();
        for _ in 0..200 {
            let p = DeSitterPoint::from_parameters(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-PI..PI),
            );
            let g = random_sl2(&mut rng);
            let moved_wedge = w.transform(&g).unwrap();
            let moved_point = p.transform(&g).unwrap();
            assert_eq!(w.contains(&p), moved_wedge.contains(&moved_point));
        }
    }

    #[test]
    fn wedge_of_group_element_ignores_stabilizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let g = random_sl2(&mut rng);
            let w = ds_wedge_of(&g).unwrap();
            for t in [-1.3, 0.2, 2.0] {
                let s = boost_x1(t);
                assert!(ds_wedge_of(&(g * s)).unwrap().approx_eq(&w));
                assert!(ds_wedge_of(&(g * (-s))).unwrap().approx_eq(&w));
            }
        }
        assert!(ds_wedge_of(&Matrix2::identity()).unwrap().approx_eq(&DSWedge::base()));
        assert!(ds_wedge_of(&(-Matrix2::identity())).unwrap().approx_eq(&DSWedge::base()));
    }

    #[test]
    fn quarter_rotation_sends_x1_wedge_to_x2_wedge() {
        let w = ds_wedge_of(&rot(PI / 2.0)).unwrap();
        assert!((w.generator() - sigma2_f64()).norm() < CONSTRUCTION);
    }

    #[test]
    fn carrier_reproduces_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let g = random_sl2(&mut rng);
            let w = ds_wedge_of(&g).unwrap();
            let c = w.carrier();
            assert!(approx(c.determinant(), 1.0, 1e-10));
            let rebuilt = c * sigma1_f64() * c.try_inverse().unwrap();
            assert!((rebuilt - w.generator()).norm() < 1e-10);
        }
    }

    #[test]
    fn poincare_group_law() {
        let a = PoincareElement::translation([1.0, 2.0, 3.0]);
        let b = PoincareElement::translation([0.5, -1.0, 0.25]);
        let ab = a.compose(&b);
        assert_eq!(ab.translation_part(), [1.5, 1.0, 3.25]);
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let p = PoincareElement::new(
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                random_sl2(&mut rng),
            )
            .unwrap();
            let q = PoincareElement::new(
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                random_sl2(&mut rng),
            )
            .unwrap();
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            // Acting by the composite equals acting twice.
            let lhs = p.compose(&q).act_point(&v);
            let rhs = p.act_point(&q.act_point(&v));
            for i in 0..3 {
                assert!(approx(lhs[i], rhs[i], 1e-9));
            }
            // Inverses cancel.
            let e = p.compose(&p.inverse());
            assert!(e.translation_part().iter().all(|c| c.abs() < 1e-9));
            assert!((e.lorentz_part() - Matrix2::identity()).norm() < 1e-9);
        }
    }

    #[test]
    fn mink_wedge_equality_mod_edge() {
        let w = MinkWedge::standard();
        // The edge of the standard wedge is the x₂ axis.
        let along_edge = PoincareElement::translation([0.0, 0.0, 5.0]).act_wedge(&w);
        assert!(along_edge.approx_eq(&w));
        let across = PoincareElement::translation([0.0, 1.0, 0.0]).act_wedge(&w);
        assert!(!across.approx_eq(&w));
        let timelike = PoincareElement::translation([1.0, 0.0, 0.0]).act_wedge(&w);
        assert!(!timelike.approx_eq(&w));
    }

    #[test]
    fn embed_and_project_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..50 {
            let w = ds_wedge_of(&random_sl2(&mut rng)).unwrap();
            assert!(project_ds(&embed_ds(&w)).approx_eq(&w));
            // Pure translations act trivially on the projection.
            let shift = PoincareElement::translation([0.3, -0.7, 0.9]);
            let moved = shift.act_wedge(&embed_ds(&w));
            assert!(project_ds(&moved).approx_eq(&w));
        }
    }

    #[test]
    fn forward_cone_examples() {
        assert!(forward_cone_contains(&[1.0, 0.0, 0.0]));
        assert!(forward_cone_contains(&[1.0, 1.0, 0.0]));
        assert!(!forward_cone_contains(&[0.0, 1.0, 0.0]));
        assert!(!forward_cone_contains(&[-1.0, 0.0, 0.0]));
    }

    #[test]
    fn hyperboloid_validation() {
        assert!(DeSitterPoint::new(0.0, 0.5, 0.0).is_err());
        let p = DeSitterPoint::from_parameters(0.7, 1.2);
        let [x0, x1, x2] = p.coords();
        assert!(approx(x1 * x1 + x2 * x2 - x0 * x0, 1.0, CONSTRUCTION));
        assert!(approx(p.matrix().determinant(), -0.25, CONSTRUCTION));
        assert!(approx(p.matrix().trace(), 0.0, CONSTRUCTION));
    }
}
