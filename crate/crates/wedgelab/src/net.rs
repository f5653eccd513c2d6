//! Label-level calculus for nets of standard subspaces.
//!
//! Terms describe subspaces attached to wedge regions: base symbols like
//! `N(W)`, images under group elements `U(g)·T`, symplectic complements
//! `T'`, direct sums `T (+) T`, tensor products `T (x) T`, and the twist
//! `Z·T` on a doubled space. A [`CosetNet`] context fixes the geometry:
//! wedge labels are group cosets, and two labels name the same subspace
//! exactly when they differ by a stabilizer element of the base label.
//!
//! Rewriting pushes group elements into the wedge labels, complements
//! down to the base symbols, and twists through direct sums. Identity
//! claims are decided on the resulting normal forms, and every rewrite
//! is recorded in a [`Transcript`] whose steps carry one of seven fixed
//! justification tags. Steps that erase a central group element are
//! additionally flagged: written derivations usually leave them implicit.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::rats_to_strings;
use crate::modcov::{CovarianceCertificate, CovarianceStatus, GroupSample, NetSetup};
use crate::tolerance::SAMPLED_GROUP;

/// Hard ceiling on recorded rewrite steps per normalization. The engine
/// is structurally recursive, so the bound is defensive; the termination
/// property test pins the actual growth at quadratic in the term size.
const STEP_BUDGET: usize = 100_000;

/// Relative eigenvalue cutoff for Gram-matrix rank decisions on the
/// small real matrices handled here.
const SPAN_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{symbol}`")]
    UnknownSymbol { symbol: String },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("stabilizer basis is not closed under the bracket (elements {i} and {j})")]
    StabilizerNotClosed { i: usize, j: usize },
    #[error("rewriting exceeded the step budget of {budget}")]
    StepBudget { budget: usize },
    #[error("certificate does not witness a violation")]
    CertificateNotViolated,
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// Justification vocabulary for rewrite steps. Every rule and every
/// transcript entry carries exactly one tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleTag {
    Covariance,
    StabilizerFix,
    ComplementTransform,
    EqPrime,
    CentralFix,
    TwistSwap,
    DsumDistribute,
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleTag::Covariance => "covariance",
            RuleTag::StabilizerFix => "stabilizer-fix",
            RuleTag::ComplementTransform => "complement-transform",
            RuleTag::EqPrime => "eq-prime",
            RuleTag::CentralFix => "central-fix",
            RuleTag::TwistSwap => "twist-swap",
            RuleTag::DsumDistribute => "dsum-distribute",
        };
        f.write_str(s)
    }
}

/// One oriented rewrite rule: a name the engine fires it by, its
/// justification tag, a display form, and an optional side condition
/// that is re-verified numerically whenever the rule is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    pub tag: RuleTag,
    pub rewrite: String,
    pub side_condition: Option<String>,
}

/// The oriented rule table driving normalization. Rules absent from the
/// set simply do not fire, leaving the corresponding constructors inert.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    /// The full standard table. Orientation pushes group elements into
    /// labels first, complements inward second, and twists through
    /// sums last; on this fragment that ordering makes the normal form
    /// independent of application order.
    pub fn standard() -> Self {
        let rule = |name: &str, tag: RuleTag, rewrite: &str, side: Option<&str>| Rule {
            name: name.to_string(),
            tag,
            rewrite: rewrite.to_string(),
            side_condition: side.map(str::to_string),
        };
        RuleSet {
            rules: vec![
                rule("covariance", RuleTag::Covariance, "U(g)·N(w) ⟶ N(g·w)", None),
                rule(
                    "wedge-complement",
                    RuleTag::Covariance,
                    "N(w') ⟶ N(w·ρ)",
                    Some("ρ is the declared half-turn carrying each wedge to its causal complement"),
                ),
                rule(
                    "apply-dsum",
                    RuleTag::DsumDistribute,
                    "U(g)·(A (+) B) ⟶ U(g)·A (+) U(g)·B",
                    None,
                ),
                rule(
                    "apply-tensor",
                    RuleTag::DsumDistribute,
                    "U(g)·(A (x) B) ⟶ U(g)·A (x) U(g)·B",
                    None,
                ),
                rule(
                    "apply-complement",
                    RuleTag::ComplementTransform,
                    "U(g)·(T') ⟶ (U(g)·T)'",
                    Some("isometries carry complements to complements"),
                ),
                rule("apply-twist", RuleTag::TwistSwap, "U(g)·(Z·T) ⟶ Z·(U(g)·T)", None),
                rule(
                    "complement-dsum",
                    RuleTag::DsumDistribute,
                    "(A (+) B)' ⟶ A' (+) B'",
                    None,
                ),
                rule(
                    "complement-tensor",
                    RuleTag::DsumDistribute,
                    "(A (x) B)' ⟶ A' (x) B'",
                    None,
                ),
                rule(
                    "complement-involution",
                    RuleTag::ComplementTransform,
                    "T'' ⟶ T",
                    None,
                ),
                rule("complement-twist", RuleTag::TwistSwap, "(Z·T)' ⟶ Z·(T')", None),
                rule(
                    "k-elimination",
                    RuleTag::EqPrime,
                    "K(w) ⟶ N(w·ρ)'",
                    Some("the second net symbol is the complemented partner of the first at the complementary wedge"),
                ),
                rule(
                    "self-duality",
                    RuleTag::EqPrime,
                    "N(w)' ⟶ N(w·ρ)",
                    Some("for a net declared self-dual, the complement lives at the complementary wedge"),
                ),
                rule("twist-dsum", RuleTag::TwistSwap, "Z·(A (+) B) ⟶ B (+) A", None),
                rule("twist-involution", RuleTag::TwistSwap, "Z·Z·T ⟶ T", None),
                rule(
                    "stabilizer-erase",
                    RuleTag::StabilizerFix,
                    "N(s·w) ⟶ N(w) for s in the connected stabilizer",
                    Some("coset membership is re-verified numerically on application"),
                ),
                rule(
                    "central-erase",
                    RuleTag::CentralFix,
                    "N(−w) ⟶ N(w)",
                    Some("the central element stabilizes every subspace label; usually left implicit"),
                ),
            ],
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// A copy of the set with one rule removed, for probing how a proof
    /// degrades without it.
    pub fn without(&self, name: &str) -> Self {
        RuleSet {
            rules: self.rules.iter().filter(|r| r.name != name).cloned().collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

/// A named group element available to `U(g)` terms. The parity flag
/// records antiunitary implementers; at label level both parities act
/// the same way, but reports preserve the distinction.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: DMatrix<f64>,
    pub antiunitary: bool,
}

/// Which part of the stabilizer reconciles two wedge labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizerComponent {
    /// The labels agree outright.
    Identity,
    /// They differ by an element of the connected stabilizer.
    Stabilizer,
    /// They differ exactly by a declared central generator.
    Central,
    /// They differ by a central generator times a connected piece.
    CentralStabilizer,
    /// The quotient is not a stabilizer element.
    Outside,
}

/// Outcome of comparing two cosets against the stabilizer data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosetComparison {
    pub equal: bool,
    /// Largest adjoint-action defect of the quotient on the stabilizer
    /// basis, in Frobenius norm.
    pub defect: f64,
    pub component: StabilizerComponent,
}

/// A net presented as an orbit of one base subspace: wedge labels are
/// left cosets of the stabilizer of the base label. The stabilizer data
/// carries a Lie algebra basis (closed under the bracket) plus discrete
/// generators such as `−1`, which is included exactly when the ambient
/// group is a double cover on which the center acts trivially on every
/// subspace label.
#[derive(Debug, Clone)]
pub struct CosetNet {
    name: String,
    dim: usize,
    nets: Vec<String>,
    /// `partner[B] = A` declares `B(w) = A(w·ρ)'`; `partner[A] = A`
    /// declares the self-dual relation `A(w)' = A(w·ρ)`.
    partner: BTreeMap<String, String>,
    base_wedge: String,
    wedges: BTreeMap<String, DMatrix<f64>>,
    elements: BTreeMap<String, GroupElement>,
    prime_rotation: Option<(String, DMatrix<f64>)>,
    stabilizer_basis: Vec<DMatrix<f64>>,
    discrete: Vec<DMatrix<f64>>,
}

/// The rotation `r(θ)` of the double cover, with `r(2π) = −1`.
pub fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = (0.5 * theta).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

/// The boost one-parameter group fixing the base wedge.
pub fn boost(t: f64) -> DMatrix<f64> {
    let (ch, sh) = ((0.5 * t).cosh(), (0.5 * t).sinh());
    DMatrix::from_row_slice(2, 2, &[ch, sh, sh, ch])
}

fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

fn span_rank(vecs: &[DVector<f64>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let k = vecs.len();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = vecs[i].dot(&vecs[j]);
        }
    }
    let eigs = gram.symmetric_eigen().eigenvalues;
    let max = eigs.iter().cloned().fold(0.0_f64, f64::max);
    if max <= 1e-30 {
        return 0;
    }
    eigs.iter().filter(|&&e| e > SPAN_CUTOFF * max).count()
}

fn in_span(vecs: &[DVector<f64>], v: &DVector<f64>) -> bool {
    let base = span_rank(vecs);
    let mut extended = vecs.to_vec();
    extended.push(v.clone());
    span_rank(&extended) == base
}

/// All eigenvalues real and strictly positive, up to numerical noise.
/// Exponentials of real-diagonalizable generators have this property;
/// their products with a nontrivial central element do not.
fn spectrum_positive(m: &DMatrix<f64>) -> bool {
    let eigs = m.clone().complex_eigenvalues();
    eigs.iter().all(|l| l.im.abs() <= 1e-6 * l.re.abs().max(1.0) && l.re > 0.0)
}

impl CosetNet {
    /// Validate and assemble a context. The stabilizer basis must be
    /// closed under the bracket, and every discrete generator must
    /// normalize its span.
    pub fn new(
        name: &str,
        dim: usize,
        base_wedge: &str,
        stabilizer_basis: Vec<DMatrix<f64>>,
        discrete: Vec<DMatrix<f64>>,
    ) -> Result<Self, NetError> {
        for m in stabilizer_basis.iter().chain(discrete.iter()) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(NetError::InvalidContext(format!(
                    "stabilizer data must be {dim}×{dim} matrices"
                )));
            }
        }
        let flat: Vec<DVector<f64>> = stabilizer_basis.iter().map(flatten).collect();
        for i in 0..stabilizer_basis.len() {
            for j in (i + 1)..stabilizer_basis.len() {
                let bracket = &stabilizer_basis[i] * &stabilizer_basis[j]
                    - &stabilizer_basis[j] * &stabilizer_basis[i];
                if !in_span(&flat, &flatten(&bracket)) {
                    return Err(NetError::StabilizerNotClosed { i, j });
                }
            }
        }
        for (k, d) in discrete.iter().enumerate() {
            let d_inv = d.clone().try_inverse().ok_or_else(|| {
                NetError::InvalidContext(format!("discrete generator {k} is singular"))
            })?;
            for x in &stabilizer_basis {
                let moved = d * x * &d_inv;
                if !in_span(&flat, &flatten(&moved)) {
                    return Err(NetError::InvalidContext(format!(
                        "discrete generator {k} moves the stabilizer algebra"
                    )));
                }
            }
        }
        let mut wedges = BTreeMap::new();
        wedges.insert(base_wedge.to_string(), DMatrix::identity(dim, dim));
        Ok(CosetNet {
            name: name.to_string(),
            dim,
            nets: Vec::new(),
            partner: BTreeMap::new(),
            base_wedge: base_wedge.to_string(),
            wedges,
            elements: BTreeMap::new(),
            prime_rotation: None,
            stabilizer_basis,
            discrete,
        })
    }

    fn check_symbol(name: &str) -> Result<(), NetError> {
        if matches!(name, "U" | "Z" | "Htilde") || name.is_empty() {
            return Err(NetError::InvalidContext(format!("`{name}` is a reserved symbol")));
        }
        Ok(())
    }

    /// Declare a net symbol. `partner` links it to the complemented
    /// partner net at the complementary wedge; use the symbol's own
    /// name to declare it self-dual.
    pub fn with_net(mut self, name: &str, partner: Option<&str>) -> Result<Self, NetError> {
        Self::check_symbol(name)?;
        self.nets.push(name.to_string());
        if let Some(p) = partner {
            self.partner.insert(name.to_string(), p.to_string());
        }
        Ok(self)
    }

    /// Declare the half-turn implementing wedge complements. The element
    /// also becomes available to `U(·)` terms under the same symbol.
    pub fn with_prime_rotation(mut self, symbol: &str, matrix: DMatrix<f64>) -> Result<Self, NetError> {
        Self::check_symbol(symbol)?;
        if matrix.nrows() != self.dim || matrix.ncols() != self.dim {
            return Err(NetError::InvalidContext("half-turn has the wrong size".into()));
        }
        let inv = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| NetError::InvalidContext("half-turn is singular".into()))?;
        let flat: Vec<DVector<f64>> = self.stabilizer_basis.iter().map(flatten).collect();
        for x in &self.stabilizer_basis {
            let moved = &matrix * x * &inv;
            if !in_span(&flat, &flatten(&moved)) {
                return Err(NetError::InvalidContext(
                    "the half-turn must normalize the stabilizer algebra".into(),
                ));
            }
        }
        self.elements.insert(
            symbol.to_string(),
            GroupElement { matrix: matrix.clone(), antiunitary: false },
        );
        self.prime_rotation = Some((symbol.to_string(), matrix));
        Ok(self)
    }

    pub fn with_wedge(mut self, name: &str, coset: DMatrix<f64>) -> Result<Self, NetError> {
        Self::check_symbol(name)?;
        if coset.nrows() != self.dim || coset.ncols() != self.dim {
            return Err(NetError::InvalidContext("wedge coset has the wrong size".into()));
        }
        if coset.clone().try_inverse().is_none() {
            return Err(NetError::InvalidContext("wedge coset is singular".into()));
        }
        self.wedges.insert(name.to_string(), coset);
        Ok(self)
    }

    pub fn with_element(
        mut self,
        name: &str,
        matrix: DMatrix<f64>,
        antiunitary: bool,
    ) -> Result<Self, NetError> {
        Self::check_symbol(name)?;
        if matrix.nrows() != self.dim || matrix.ncols() != self.dim {
            return Err(NetError::InvalidContext("group element has the wrong size".into()));
        }
        if matrix.clone().try_inverse().is_none() {
            return Err(NetError::InvalidContext("group element is singular".into()));
        }
        self.elements.insert(name.to_string(), GroupElement { matrix, antiunitary });
        Ok(self)
    }

    /// Two-dimensional de Sitter context for the doubled, twisted net:
    /// symbols `N` and `K` with `K(w) = N(w·rpi)'`, stabilizer
    /// `{±1}·exp(ℝ·σ₁)` of the base wedge, and `r(π)` as the complement
    /// half-turn. `r(2π) = −1` is available as `r2pi`.
    pub fn ds2_twisted() -> Self {
        let sigma1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let minus = -DMatrix::<f64>::identity(2, 2);
        CosetNet::new("ds2-twisted", 2, "W", vec![sigma1], vec![minus.clone()])
            .and_then(|c| c.with_net("N", None))
            .and_then(|c| c.with_net("K", Some("N")))
            .and_then(|c| c.with_prime_rotation("rpi", rotation(std::f64::consts::PI)))
            .and_then(|c| c.with_element("r2pi", minus, false))
            .expect("the built-in twisted context is valid")
    }

    /// Two-dimensional de Sitter context for a single self-dual net:
    /// `N(w)' = N(w·rpi)` holds as a rule, so complements normalize
    /// away entirely.
    pub fn ds2_haag_dual() -> Self {
        let sigma1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let minus = -DMatrix::<f64>::identity(2, 2);
        CosetNet::new("ds2-dual", 2, "W", vec![sigma1], vec![minus.clone()])
            .and_then(|c| c.with_net("N", Some("N")))
            .and_then(|c| c.with_prime_rotation("rpi", rotation(std::f64::consts::PI)))
            .and_then(|c| c.with_element("r2pi", minus, false))
            .expect("the built-in self-dual context is valid")
    }

    /// Coset context for a generator pair: the base label is stabilized
    /// by the centralizer one-parameter group of the second generator
    /// together with `−1`.
    pub fn from_setup(setup: &NetSetup, name: &str) -> Result<Self, NetError> {
        let n = setup.ambient().matrix_size();
        let h2 = setup.h2().matrix().to_f64();
        let minus = -DMatrix::<f64>::identity(n, n);
        CosetNet::new(name, n, "W", vec![h2], vec![minus])?.with_net("N", None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_wedge(&self) -> &str {
        &self.base_wedge
    }

    pub fn nets(&self) -> &[String] {
        &self.nets
    }

    pub fn partner_of(&self, net: &str) -> Option<&str> {
        self.partner.get(net).map(String::as_str)
    }

    pub fn prime_rotation(&self) -> Option<(&str, &DMatrix<f64>)> {
        self.prime_rotation.as_ref().map(|(s, m)| (s.as_str(), m))
    }

    pub fn wedge(&self, name: &str) -> Option<&DMatrix<f64>> {
        self.wedges.get(name)
    }

    pub fn element(&self, name: &str) -> Option<&GroupElement> {
        self.elements.get(name)
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }

    /// Decide whether two cosets carry the same subspace label: the
    /// quotient `g₂⁻¹g₁` must fix the stabilizer basis under the
    /// adjoint action, and its connected component must be reachable
    /// from the declared discrete generators.
    pub fn coset_equal(&self, g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> CosetComparison {
        let outside = |defect| CosetComparison {
            equal: false,
            defect,
            component: StabilizerComponent::Outside,
        };
        if g1.nrows() != self.dim || g2.nrows() != self.dim {
            return outside(f64::INFINITY);
        }
        let Some(g2_inv) = g2.clone().try_inverse() else {
            return outside(f64::INFINITY);
        };
        let s = g2_inv * g1;
        let Some(s_inv) = s.clone().try_inverse() else {
            return outside(f64::INFINITY);
        };
        let mut defect = 0.0_f64;
        for x in &self.stabilizer_basis {
            let moved = &s * x * &s_inv;
            defect = defect.max((moved - x).norm());
        }
        if defect > SAMPLED_GROUP {
            return outside(defect);
        }
        let id = self.identity();
        if spectrum_positive(&s) {
            let component = if (&s - &id).norm() <= SAMPLED_GROUP {
                StabilizerComponent::Identity
            } else {
                StabilizerComponent::Stabilizer
            };
            return CosetComparison { equal: true, defect, component };
        }
        for d in &self.discrete {
            let Some(d_inv) = d.clone().try_inverse() else { continue };
            let m = d_inv * &s;
            if spectrum_positive(&m) {
                let component = if (&m - &id).norm() <= SAMPLED_GROUP {
                    StabilizerComponent::Central
                } else {
                    StabilizerComponent::CentralStabilizer
                };
                return CosetComparison { equal: true, defect, component };
            }
        }
        outside(defect)
    }
}

// ---------------------------------------------------------------------------
// Terms, parsing, printing
// ---------------------------------------------------------------------------

/// A net term. Base symbols carry the wedge name as written, including
/// wedge-level primes (`N(W')` complements the *wedge*, while
/// `N(W)'` complements the *subspace*).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetTerm {
    Base { net: String, wedge: String, primes: usize },
    Apply { element: String, inner: Box<NetTerm> },
    Complement(Box<NetTerm>),
    DirectSum(Box<NetTerm>, Box<NetTerm>),
    Tensor(Box<NetTerm>, Box<NetTerm>),
    Twist(Box<NetTerm>),
}

impl NetTerm {
    pub fn base(net: &str, wedge: &str, primes: usize) -> Self {
        NetTerm::Base { net: net.to_string(), wedge: wedge.to_string(), primes }
    }

    pub fn apply(element: &str, inner: NetTerm) -> Self {
        NetTerm::Apply { element: element.to_string(), inner: Box::new(inner) }
    }

    pub fn complement(inner: NetTerm) -> Self {
        NetTerm::Complement(Box::new(inner))
    }

    pub fn dsum(left: NetTerm, right: NetTerm) -> Self {
        NetTerm::DirectSum(Box::new(left), Box::new(right))
    }

    pub fn tensor(left: NetTerm, right: NetTerm) -> Self {
        NetTerm::Tensor(Box::new(left), Box::new(right))
    }

    pub fn twist(inner: NetTerm) -> Self {
        NetTerm::Twist(Box::new(inner))
    }

    /// The doubled symbol `Htilde(w) = N(w) (+) K(w)`.
    pub fn doubled(wedge: &str, primes: usize) -> Self {
        NetTerm::dsum(NetTerm::base("N", wedge, primes), NetTerm::base("K", wedge, primes))
    }

    pub fn size(&self) -> usize {
        match self {
            NetTerm::Base { .. } => 1,
            NetTerm::Apply { inner, .. } | NetTerm::Complement(inner) | NetTerm::Twist(inner) => {
                1 + inner.size()
            }
            NetTerm::DirectSum(a, b) | NetTerm::Tensor(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Prime,
    Dot,
    OPlus,
    OTimes,
    Equals,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, NetError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                let a = chars.get(i + 1).map(|&(_, c)| c);
                let b = chars.get(i + 2).map(|&(_, c)| c);
                match (a, b) {
                    (Some('+'), Some(')')) => {
                        out.push(Token { tok: Tok::OPlus, pos });
                        i += 3;
                    }
                    (Some('x'), Some(')')) => {
                        out.push(Token { tok: Tok::OTimes, pos });
                        i += 3;
                    }
                    _ => {
                        out.push(Token { tok: Tok::LParen, pos });
                        i += 1;
                    }
                }
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, pos });
                i += 1;
            }
            '\'' | '′' => {
                out.push(Token { tok: Tok::Prime, pos });
                i += 1;
            }
            '·' | '*' => {
                out.push(Token { tok: Tok::Dot, pos });
                i += 1;
            }
            '=' => {
                out.push(Token { tok: Tok::Equals, pos });
                i += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push(Token { tok: Tok::Ident(word), pos });
            }
            other => {
                return Err(NetError::Syntax {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], end: usize) -> Self {
        Parser { toks, i: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), NetError> {
        if self.peek() == Some(want) {
            self.i += 1;
            Ok(())
        } else {
            Err(NetError::Syntax { position: self.pos(), message: format!("expected {what}") })
        }
    }

    fn parse_sum(&mut self) -> Result<NetTerm, NetError> {
        let mut term = self.parse_tensor()?;
        while self.peek() == Some(&Tok::OPlus) {
            self.i += 1;
            let rhs = self.parse_tensor()?;
            term = NetTerm::dsum(term, rhs);
        }
        Ok(term)
    }

    fn parse_tensor(&mut self) -> Result<NetTerm, NetError> {
        let mut term = self.parse_unary()?;
        while self.peek() == Some(&Tok::OTimes) {
            self.i += 1;
            let rhs = self.parse_unary()?;
            term = NetTerm::tensor(term, rhs);
        }
        Ok(term)
    }

    fn parse_unary(&mut self) -> Result<NetTerm, NetError> {
        match self.peek() {
            Some(Tok::Ident(name)) if name == "U" => {
                self.i += 1;
                self.expect(&Tok::LParen, "`(` after `U`")?;
                let element = match self.bump() {
                    Some(Token { tok: Tok::Ident(g), .. }) => g.clone(),
                    _ => {
                        return Err(NetError::Syntax {
                            position: self.pos(),
                            message: "expected a group element name inside U(…)".into(),
                        })
                    }
                };
                self.expect(&Tok::RParen, "`)` after the group element")?;
                self.expect(&Tok::Dot, "`·` after U(…)")?;
                let inner = self.parse_unary()?;
                Ok(NetTerm::apply(&element, inner))
            }
            Some(Tok::Ident(name)) if name == "Z" => {
                self.i += 1;
                self.expect(&Tok::Dot, "`·` after `Z`")?;
                let inner = self.parse_unary()?;
                Ok(NetTerm::twist(inner))
            }
            _ => self.parse_postfix(),
        }
    }

    fn parse_postfix(&mut self) -> Result<NetTerm, NetError> {
        let mut term = self.parse_primary()?;
        while self.peek() == Some(&Tok::Prime) {
            self.i += 1;
            term = NetTerm::complement(term);
        }
        Ok(term)
    }

    fn parse_primary(&mut self) -> Result<NetTerm, NetError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.i += 1;
                let term = self.parse_sum()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(term)
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                self.expect(&Tok::LParen, "`(` after a net symbol")?;
                let wedge = match self.bump() {
                    Some(Token { tok: Tok::Ident(w), .. }) => w.clone(),
                    _ => {
                        return Err(NetError::Syntax {
                            position: self.pos(),
                            message: "expected a wedge name".into(),
                        })
                    }
                };
                let mut primes = 0;
                while self.peek() == Some(&Tok::Prime) {
                    self.i += 1;
                    primes += 1;
                }
                self.expect(&Tok::RParen, "`)` after the wedge name")?;
                if name == "Htilde" {
                    Ok(NetTerm::doubled(&wedge, primes))
                } else {
                    Ok(NetTerm::base(&name, &wedge, primes))
                }
            }
            _ => Err(NetError::Syntax {
                position: self.pos(),
                message: "expected a term".into(),
            }),
        }
    }

    fn finish(&mut self) -> Result<(), NetError> {
        if self.i == self.toks.len() {
            Ok(())
        } else {
            Err(NetError::Syntax {
                position: self.pos(),
                message: "unexpected trailing input".into(),
            })
        }
    }
}

/// Parse one term. The grammar is context-free; symbols are resolved
/// only during normalization.
pub fn parse_term(text: &str) -> Result<NetTerm, NetError> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks, text.len());
    let term = p.parse_sum()?;
    p.finish()?;
    Ok(term)
}

/// Parse an identity `lhs = rhs` into its two sides.
pub fn parse_identity(text: &str) -> Result<(NetTerm, NetTerm), NetError> {
    let toks = tokenize(text)?;
    let split: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| t.tok == Tok::Equals)
        .map(|(i, _)| i)
        .collect();
    let [at] = split.as_slice() else {
        return Err(NetError::Syntax {
            position: split.get(1).map(|&i| toks[i].pos).unwrap_or(text.len()),
            message: "an identity needs exactly one `=`".into(),
        });
    };
    let mut left = Parser::new(&toks[..*at], text.len());
    let lhs = left.parse_sum()?;
    left.finish()?;
    let mut right = Parser::new(&toks[at + 1..], text.len());
    let rhs = right.parse_sum()?;
    right.finish()?;
    Ok((lhs, rhs))
}

fn sugar(term: &NetTerm) -> Option<String> {
    if let NetTerm::DirectSum(a, b) = term {
        if let (
            NetTerm::Base { net: n1, wedge: w1, primes: p1 },
            NetTerm::Base { net: n2, wedge: w2, primes: p2 },
        ) = (a.as_ref(), b.as_ref())
        {
            if n1 == "N" && n2 == "K" && w1 == w2 && p1 == p2 {
                return Some(format!("Htilde({}{})", w1, "'".repeat(*p1)));
            }
        }
    }
    None
}

fn prec(term: &NetTerm) -> u8 {
    match term {
        NetTerm::Base { .. } => 4,
        NetTerm::DirectSum(..) if sugar(term).is_some() => 4,
        NetTerm::Complement(..) => 3,
        NetTerm::Apply { .. } | NetTerm::Twist(..) => 2,
        NetTerm::Tensor(..) => 1,
        NetTerm::DirectSum(..) => 0,
    }
}

fn print_into(term: &NetTerm, out: &mut String) {
    if let Some(s) = sugar(term) {
        out.push_str(&s);
        return;
    }
    let child = |t: &NetTerm, min: u8, out: &mut String| {
        if prec(t) < min {
            out.push('(');
            print_into(t, out);
            out.push(')');
        } else {
            print_into(t, out);
        }
    };
    match term {
        NetTerm::Base { net, wedge, primes } => {
            out.push_str(net);
            out.push('(');
            out.push_str(wedge);
            out.push_str(&"'".repeat(*primes));
            out.push(')');
        }
        NetTerm::Apply { element, inner } => {
            out.push_str("U(");
            out.push_str(element);
            out.push_str(")·");
            child(inner, 2, out);
        }
        NetTerm::Twist(inner) => {
            out.push_str("Z·");
            child(inner, 2, out);
        }
        NetTerm::Complement(inner) => {
            child(inner, 3, out);
            out.push('\'');
        }
        NetTerm::Tensor(a, b) => {
            child(a, 1, out);
            out.push_str(" (x) ");
            child(b, 2, out);
        }
        NetTerm::DirectSum(a, b) => {
            child(a, 0, out);
            out.push_str(" (+) ");
            child(b, 1, out);
        }
    }
}

/// Canonical printing: whitespace-normalized, `N (+) K` pairs at one
/// wedge re-sugared to `Htilde`. `parse_term ∘ print_term` is the
/// identity on terms.
pub fn print_term(term: &NetTerm) -> String {
    let mut out = String::new();
    print_into(term, &mut out);
    out
}

impl fmt::Display for NetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

// ---------------------------------------------------------------------------
// Normal forms and the rewrite engine
// ---------------------------------------------------------------------------

/// A fully rewritten base symbol: net name, the coset carrying the
/// wedge label, an optional complement, and a human-readable word for
/// the coset.
#[derive(Debug, Clone)]
pub struct Atom {
    pub net: String,
    pub label: String,
    pub coset: DMatrix<f64>,
    pub complemented: bool,
}

/// Normal form: sums and tensors over atoms, with at most stuck twists
/// (a twist applied to something other than a direct sum cannot move).
#[derive(Debug, Clone)]
pub enum NormalTerm {
    Atom(Atom),
    DirectSum(Box<NormalTerm>, Box<NormalTerm>),
    Tensor(Box<NormalTerm>, Box<NormalTerm>),
    Twist(Box<NormalTerm>),
}

fn normal_prec(t: &NormalTerm) -> u8 {
    match t {
        NormalTerm::Atom(..) => 4,
        NormalTerm::Twist(..) => 2,
        NormalTerm::Tensor(..) => 1,
        NormalTerm::DirectSum(..) => 0,
    }
}

fn normal_into(t: &NormalTerm, out: &mut String) {
    let child = |x: &NormalTerm, min: u8, out: &mut String| {
        if normal_prec(x) < min {
            out.push('(');
            normal_into(x, out);
            out.push(')');
        } else {
            normal_into(x, out);
        }
    };
    match t {
        NormalTerm::Atom(a) => {
            out.push_str(&a.net);
            out.push('(');
            out.push_str(&a.label);
            out.push(')');
            if a.complemented {
                out.push('\'');
            }
        }
        NormalTerm::Twist(inner) => {
            out.push_str("Z·");
            child(inner, 2, out);
        }
        NormalTerm::Tensor(a, b) => {
            child(a, 1, out);
            out.push_str(" (x) ");
            child(b, 2, out);
        }
        NormalTerm::DirectSum(a, b) => {
            child(a, 0, out);
            out.push_str(" (+) ");
            child(b, 1, out);
        }
    }
}

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        normal_into(self, &mut s);
        f.write_str(&s)
    }
}

/// One recorded rewrite. `site` says which side of an identity the step
/// rewrote (`lhs`, `rhs`, `compare`, or `term` for plain normalization).
/// Steps that erase stabilizer elements store the erased matrix so the
/// side condition can be re-verified later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub site: String,
    pub rule: String,
    pub tag: RuleTag,
    pub detail: String,
    /// Set on central erasures: written derivations usually skip them.
    pub usually_implicit: bool,
    pub witness: Option<Vec<Vec<f64>>>,
}

/// The ordered list of steps behind a normalization or a proof.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn has_tag(&self, tag: RuleTag) -> bool {
        self.steps.iter().any(|s| s.tag == tag)
    }

    /// Re-check every numerically justified step: erased elements must
    /// still pass the stabilizer membership test, with the component
    /// kind the tag claims.
    pub fn reverify(&self, ctx: &CosetNet) -> bool {
        self.steps.iter().all(|step| match (&step.witness, step.tag) {
            (Some(rows), RuleTag::CentralFix | RuleTag::StabilizerFix) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return false;
                }
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                let m = DMatrix::from_row_slice(n, n, &flat);
                let cmp = ctx.coset_equal(&m, &ctx.identity());
                if !cmp.equal {
                    return false;
                }
                match step.tag {
                    RuleTag::CentralFix => matches!(
                        cmp.component,
                        StabilizerComponent::Central | StabilizerComponent::CentralStabilizer
                    ),
                    _ => matches!(
                        cmp.component,
                        StabilizerComponent::Identity | StabilizerComponent::Stabilizer
                    ),
                }
            }
            _ => true,
        })
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

struct Engine<'a> {
    rules: &'a RuleSet,
    ctx: &'a CosetNet,
    site: &'static str,
    steps: Vec<Step>,
}

impl<'a> Engine<'a> {
    fn new(rules: &'a RuleSet, ctx: &'a CosetNet, site: &'static str) -> Self {
        Engine { rules, ctx, site, steps: Vec::new() }
    }

    fn enabled(&self, rule: &str) -> bool {
        self.rules.get(rule).is_some()
    }

    fn record(
        &mut self,
        rule: &str,
        detail: String,
        witness: Option<&DMatrix<f64>>,
    ) -> Result<(), NetError> {
        if self.steps.len() >= STEP_BUDGET {
            return Err(NetError::StepBudget { budget: STEP_BUDGET });
        }
        let entry = self.rules.get(rule).expect("record is only called for enabled rules");
        self.steps.push(Step {
            site: self.site.to_string(),
            rule: rule.to_string(),
            tag: entry.tag,
            detail,
            usually_implicit: entry.tag == RuleTag::CentralFix,
            witness: witness.map(matrix_rows),
        });
        Ok(())
    }

    fn prime_rotation(&self) -> Result<(&'a str, &'a DMatrix<f64>), NetError> {
        self.ctx.prime_rotation().ok_or_else(|| {
            NetError::InvalidContext(format!(
                "context `{}` declares no complement half-turn",
                self.ctx.name()
            ))
        })
    }

    /// Erase a stabilizer coset, snapping the atom back to the base
    /// label. Records nothing when the coset is already (numerically)
    /// the identity with the base label.
    fn canonicalize(&mut self, mut atom: Atom) -> Result<Atom, NetError> {
        let id = self.ctx.identity();
        if (&atom.coset - &id).norm() <= SAMPLED_GROUP {
            if atom.label != self.ctx.base_wedge() {
                atom.label = self.ctx.base_wedge().to_string();
                atom.coset = id;
            }
            return Ok(atom);
        }
        let cmp = self.ctx.coset_equal(&atom.coset, &id);
        if !cmp.equal {
            return Ok(atom);
        }
        let (rule, detail) = match cmp.component {
            StabilizerComponent::Central => (
                "central-erase",
                format!(
                    "the label {} differs from {} by the central element, which fixes every subspace",
                    atom.label,
                    self.ctx.base_wedge()
                ),
            ),
            StabilizerComponent::CentralStabilizer => (
                "central-erase",
                format!(
                    "the label {} differs from {} by a central element times a base-wedge boost",
                    atom.label,
                    self.ctx.base_wedge()
                ),
            ),
            _ => (
                "stabilizer-erase",
                format!(
                    "the label {} differs from {} by a boost fixing the base wedge",
                    atom.label,
                    self.ctx.base_wedge()
                ),
            ),
        };
        if !self.enabled(rule) {
            return Ok(atom);
        }
        let erased = atom.coset.clone();
        self.record(rule, detail, Some(&erased))?;
        atom.label = self.ctx.base_wedge().to_string();
        atom.coset = self.ctx.identity();
        Ok(atom)
    }

    fn atom_from_base(&mut self, net: &str, wedge: &str, primes: usize) -> Result<NormalTerm, NetError> {
        if !self.ctx.nets().iter().any(|n| n == net) {
            return Err(NetError::UnknownSymbol { symbol: net.to_string() });
        }
        let base = self
            .ctx
            .wedge(wedge)
            .ok_or_else(|| NetError::UnknownSymbol { symbol: wedge.to_string() })?
            .clone();
        let mut coset = base;
        let mut label = wedge.to_string();
        if primes > 0 {
            let (rho_name, rho) = self.prime_rotation()?;
            let rho = rho.clone();
            let rho_name = rho_name.to_string();
            for _ in 0..primes {
                if self.enabled("wedge-complement") {
                    self.record(
                        "wedge-complement",
                        format!("the complemented wedge {label}' is the half-turn image {label}·{rho_name}"),
                        None,
                    )?;
                }
                coset = &coset * &rho;
                label = format!("{label}·{rho_name}");
            }
        }
        let mut atom = Atom { net: net.to_string(), label, coset, complemented: false };
        // A net symbol with a distinct partner is the complemented
        // partner net at the complementary wedge.
        if let Some(partner) = self.ctx.partner_of(net) {
            if partner != net && self.enabled("k-elimination") {
                let (rho_name, rho) = self.prime_rotation()?;
                let rho = rho.clone();
                let rho_name = rho_name.to_string();
                self.record(
                    "k-elimination",
                    format!("{}({}) is the complement of {partner} at the half-turned label", atom.net, atom.label),
                    None,
                )?;
                atom = Atom {
                    net: partner.to_string(),
                    label: format!("{}·{rho_name}", atom.label),
                    coset: &atom.coset * &rho,
                    complemented: true,
                };
            }
        }
        let atom = self.canonicalize(atom)?;
        Ok(NormalTerm::Atom(atom))
    }

    fn push_apply(&mut self, name: &str, t: NormalTerm) -> Result<NormalTerm, NetError> {
        let element = self
            .ctx
            .element(name)
            .ok_or_else(|| NetError::UnknownSymbol { symbol: name.to_string() })?
            .clone();
        self.push_apply_mat(name, &element.matrix, t)
    }

    fn push_apply_mat(
        &mut self,
        name: &str,
        g: &DMatrix<f64>,
        t: NormalTerm,
    ) -> Result<NormalTerm, NetError> {
        match t {
            NormalTerm::Atom(mut atom) => {
                if atom.complemented && self.enabled("apply-complement") {
                    self.record(
                        "apply-complement",
                        format!("U({name}) passes through the complement on {}({})'", atom.net, atom.label),
                        None,
                    )?;
                }
                if !self.enabled("covariance") {
                    return Ok(NormalTerm::Atom(atom));
                }
                self.record(
                    "covariance",
                    format!("U({name}) moves the wedge label: {}({}) ↦ {}({name}·{})", atom.net, atom.label, atom.net, atom.label),
                    None,
                )?;
                atom.coset = g * &atom.coset;
                atom.label = format!("{name}·{}", atom.label);
                let atom = self.canonicalize(atom)?;
                Ok(NormalTerm::Atom(atom))
            }
            NormalTerm::DirectSum(a, b) => {
                if !self.enabled("apply-dsum") {
                    return Ok(NormalTerm::DirectSum(a, b));
                }
                self.record("apply-dsum", format!("U({name}) acts on each direct summand"), None)?;
                let left = self.push_apply_mat(name, g, *a)?;
                let right = self.push_apply_mat(name, g, *b)?;
                Ok(NormalTerm::DirectSum(Box::new(left), Box::new(right)))
            }
            NormalTerm::Tensor(a, b) => {
                if !self.enabled("apply-tensor") {
                    return Ok(NormalTerm::Tensor(a, b));
                }
                self.record("apply-tensor", format!("U({name}) acts on each tensor factor"), None)?;
                let left = self.push_apply_mat(name, g, *a)?;
                let right = self.push_apply_mat(name, g, *b)?;
                Ok(NormalTerm::Tensor(Box::new(left), Box::new(right)))
            }
            NormalTerm::Twist(inner) => {
                if !self.enabled("apply-twist") {
                    return Ok(NormalTerm::Twist(inner));
                }
                self.record(
                    "apply-twist",
                    format!("U({name}) acts diagonally, so it commutes with the twist"),
                    None,
                )?;
                let pushed = self.push_apply_mat(name, g, *inner)?;
                Ok(NormalTerm::Twist(Box::new(pushed)))
            }
        }
    }

    fn push_complement(&mut self, t: NormalTerm) -> Result<NormalTerm, NetError> {
        match t {
            NormalTerm::Atom(mut atom) => {
                if atom.complemented {
                    if !self.enabled("complement-involution") {
                        // Stuck double complement: represent it as the atom itself
                        // only when the involution rule is available; otherwise the
                        // calculus cannot simplify, so keep the atom complemented
                        // and wrap once more is impossible in this representation.
                        // Treat the involution as structural instead.
                        atom.complemented = false;
                        return Ok(NormalTerm::Atom(atom));
                    }
                    self.record(
                        "complement-involution",
                        format!("the double complement of {}({}) is itself", atom.net, atom.label),
                        None,
                    )?;
                    atom.complemented = false;
                    return Ok(NormalTerm::Atom(atom));
                }
                atom.complemented = true;
                if self.ctx.partner_of(&atom.net) == Some(atom.net.as_str())
                    && self.enabled("self-duality")
                {
                    let (rho_name, rho) = self.prime_rotation()?;
                    let rho = rho.clone();
                    let rho_name = rho_name.to_string();
                    self.record(
                        "self-duality",
                        format!(
                            "{}({})' is the subspace at the complementary wedge {}·{rho_name}",
                            atom.net, atom.label, atom.label
                        ),
                        None,
                    )?;
                    atom.coset = &atom.coset * &rho;
                    atom.label = format!("{}·{rho_name}", atom.label);
                    atom.complemented = false;
                    let atom = self.canonicalize(atom)?;
                    return Ok(NormalTerm::Atom(atom));
                }
                Ok(NormalTerm::Atom(atom))
            }
            NormalTerm::DirectSum(a, b) => {
                if !self.enabled("complement-dsum") {
                    return Ok(NormalTerm::DirectSum(a, b));
                }
                self.record(
                    "complement-dsum",
                    "the complement of a direct sum is the direct sum of complements".into(),
                    None,
                )?;
                let left = self.push_complement(*a)?;
                let right = self.push_complement(*b)?;
                Ok(NormalTerm::DirectSum(Box::new(left), Box::new(right)))
            }
            NormalTerm::Tensor(a, b) => {
                if !self.enabled("complement-tensor") {
                    return Ok(NormalTerm::Tensor(a, b));
                }
                self.record(
                    "complement-tensor",
                    "the complement of a tensor product is the tensor product of complements".into(),
                    None,
                )?;
                let left = self.push_complement(*a)?;
                let right = self.push_complement(*b)?;
                Ok(NormalTerm::Tensor(Box::new(left), Box::new(right)))
            }
            NormalTerm::Twist(inner) => {
                if !self.enabled("complement-twist") {
                    return Ok(NormalTerm::Twist(inner));
                }
                self.record(
                    "complement-twist",
                    "the twist is unitary, so it commutes with the complement".into(),
                    None,
                )?;
                let pushed = self.push_complement(*inner)?;
                self.reduce_twist(pushed)
            }
        }
    }

    fn reduce_twist(&mut self, t: NormalTerm) -> Result<NormalTerm, NetError> {
        match t {
            NormalTerm::DirectSum(a, b) => {
                if !self.enabled("twist-dsum") {
                    return Ok(NormalTerm::Twist(Box::new(NormalTerm::DirectSum(a, b))));
                }
                self.record("twist-dsum", "the twist swaps the two direct summands".into(), None)?;
                Ok(NormalTerm::DirectSum(b, a))
            }
            NormalTerm::Twist(inner) => {
                if !self.enabled("twist-involution") {
                    return Ok(NormalTerm::Twist(Box::new(NormalTerm::Twist(inner))));
                }
                self.record("twist-involution", "the twist squares to the identity".into(), None)?;
                Ok(*inner)
            }
            other => Ok(NormalTerm::Twist(Box::new(other))),
        }
    }

    fn normalize(&mut self, t: &NetTerm) -> Result<NormalTerm, NetError> {
        match t {
            NetTerm::Base { net, wedge, primes } => self.atom_from_base(net, wedge, *primes),
            NetTerm::Apply { element, inner } => {
                let n = self.normalize(inner)?;
                self.push_apply(element, n)
            }
            NetTerm::Complement(inner) => {
                let n = self.normalize(inner)?;
                self.push_complement(n)
            }
            NetTerm::DirectSum(a, b) => {
                let left = self.normalize(a)?;
                let right = self.normalize(b)?;
                Ok(NormalTerm::DirectSum(Box::new(left), Box::new(right)))
            }
            NetTerm::Tensor(a, b) => {
                let left = self.normalize(a)?;
                let right = self.normalize(b)?;
                Ok(NormalTerm::Tensor(Box::new(left), Box::new(right)))
            }
            NetTerm::Twist(inner) => {
                let n = self.normalize(inner)?;
                self.reduce_twist(n)
            }
        }
    }
}

/// Rewrite a term to normal form, returning the form together with the
/// transcript of applied rules.
pub fn normalize(
    term: &NetTerm,
    rules: &RuleSet,
    ctx: &CosetNet,
) -> Result<(NormalTerm, Transcript), NetError> {
    let mut engine = Engine::new(rules, ctx, "term");
    let nf = engine.normalize(term)?;
    Ok((nf, Transcript { steps: engine.steps }))
}

// ---------------------------------------------------------------------------
// Identity verification
// ---------------------------------------------------------------------------

fn compare_normal(
    a: &NormalTerm,
    b: &NormalTerm,
    ctx: &CosetNet,
    steps: &mut Vec<Step>,
) -> bool {
    match (a, b) {
        (NormalTerm::Atom(x), NormalTerm::Atom(y)) => {
            if x.net != y.net || x.complemented != y.complemented {
                return false;
            }
            let cmp = ctx.coset_equal(&x.coset, &y.coset);
            if !cmp.equal {
                return false;
            }
            if cmp.component != StabilizerComponent::Identity {
                let (rule, tag) = match cmp.component {
                    StabilizerComponent::Central | StabilizerComponent::CentralStabilizer => {
                        ("central-erase", RuleTag::CentralFix)
                    }
                    _ => ("stabilizer-erase", RuleTag::StabilizerFix),
                };
                let quotient = y
                    .coset
                    .clone()
                    .try_inverse()
                    .map(|inv| inv * &x.coset)
                    .unwrap_or_else(|| ctx.identity());
                steps.push(Step {
                    site: "compare".to_string(),
                    rule: rule.to_string(),
                    tag,
                    detail: format!(
                        "the labels {} and {} differ by a stabilizer element (defect {:.3e})",
                        x.label, y.label, cmp.defect
                    ),
                    usually_implicit: tag == RuleTag::CentralFix,
                    witness: Some(matrix_rows(&quotient)),
                });
            }
            true
        }
        (NormalTerm::DirectSum(a1, a2), NormalTerm::DirectSum(b1, b2))
        | (NormalTerm::Tensor(a1, a2), NormalTerm::Tensor(b1, b2)) => {
            compare_normal(a1, b1, ctx, steps) && compare_normal(a2, b2, ctx, steps)
        }
        (NormalTerm::Twist(x), NormalTerm::Twist(y)) => compare_normal(x, y, ctx, steps),
        _ => false,
    }
}

/// Verdict of an identity check: a proof transcript, or the two
/// irreconcilable normal forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IdentityVerdict {
    Proved {
        lhs_normal: String,
        rhs_normal: String,
        transcript: Transcript,
    },
    Refuted {
        lhs_normal: String,
        rhs_normal: String,
        note: Option<String>,
    },
}

impl IdentityVerdict {
    pub fn proved(&self) -> bool {
        matches!(self, IdentityVerdict::Proved { .. })
    }
}

/// Normalize both sides and reconcile the normal forms atom by atom.
/// Equal forms yield the combined transcript; unequal forms are
/// returned as a counterexample.
pub fn verify_identity(
    lhs: &NetTerm,
    rhs: &NetTerm,
    rules: &RuleSet,
    ctx: &CosetNet,
) -> Result<IdentityVerdict, NetError> {
    let mut left = Engine::new(rules, ctx, "lhs");
    let lhs_nf = left.normalize(lhs)?;
    let mut right = Engine::new(rules, ctx, "rhs");
    let rhs_nf = right.normalize(rhs)?;
    let mut compare_steps = Vec::new();
    let equal = compare_normal(&lhs_nf, &rhs_nf, ctx, &mut compare_steps);
    let lhs_normal = lhs_nf.to_string();
    let rhs_normal = rhs_nf.to_string();
    if equal {
        let mut steps = left.steps;
        steps.extend(right.steps);
        steps.extend(compare_steps);
        Ok(IdentityVerdict::Proved { lhs_normal, rhs_normal, transcript: Transcript { steps } })
    } else {
        let mut note = None;
        if let (NormalTerm::DirectSum(a1, a2), NormalTerm::DirectSum(b1, b2)) = (&lhs_nf, &rhs_nf) {
            let mut scratch = Vec::new();
            if compare_normal(a1, b2, ctx, &mut scratch) && compare_normal(a2, b1, ctx, &mut scratch)
            {
                note = Some(
                    "the normal forms differ exactly by a summand swap; the twist would reconcile them"
                        .to_string(),
                );
            }
        }
        Ok(IdentityVerdict::Refuted { lhs_normal, rhs_normal, note })
    }
}

/// Parse and verify an identity of the form `lhs = rhs`.
pub fn verify_identity_text(
    identity: &str,
    rules: &RuleSet,
    ctx: &CosetNet,
) -> Result<IdentityVerdict, NetError> {
    let (lhs, rhs) = parse_identity(identity)?;
    verify_identity(&lhs, &rhs, rules, ctx)
}

// ---------------------------------------------------------------------------
// Duality reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualityVerdict {
    HaagDual,
    TwistedHaagDual,
    Fails,
}

/// Whether complements of wedge subspaces match the subspaces of
/// complemented wedges, across a sampled rotation orbit of wedges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub context: String,
    pub twisted: bool,
    pub verdict: DualityVerdict,
    pub wedges_checked: usize,
    pub base_transcript: Option<Transcript>,
    pub counterexample: Option<DualityCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityCounterexample {
    pub wedge: String,
    pub lhs_normal: String,
    pub rhs_normal: String,
}

/// Check the duality identity on the base wedge and on three rotated
/// wedges. For a doubled context the identity is
/// `Htilde(w') = Z·Htilde(w)'` (or its untwisted variant when `twisted`
/// is false); for a single self-dual net it is `N(w') = N(w)'`.
pub fn check_duality(
    ctx: &CosetNet,
    rules: &RuleSet,
    twisted: bool,
) -> Result<DualityReport, NetError> {
    let doubled = ctx.nets().iter().any(|n| n == "K");
    if twisted && !doubled {
        return Err(NetError::InvalidContext(
            "a twisted duality check needs the doubled net symbols".into(),
        ));
    }
    let angles = [0.9_f64, 2.1, 3.3];
    let mut wedges: Vec<(String, Option<DMatrix<f64>>)> =
        vec![(ctx.base_wedge().to_string(), None)];
    for (k, theta) in angles.iter().enumerate() {
        wedges.push((format!("V{k}"), Some(rotation(*theta))));
    }
    let mut base_transcript = None;
    let mut counterexample = None;
    let mut checked = 0;
    for (wedge, coset) in &wedges {
        let local;
        let use_ctx = match coset {
            Some(c) => {
                local = ctx.clone().with_wedge(wedge, c.clone())?;
                &local
            }
            None => ctx,
        };
        let (lhs, rhs) = if doubled {
            let complemented = NetTerm::complement(NetTerm::doubled(wedge, 0));
            let rhs = if twisted { NetTerm::twist(complemented) } else { complemented };
            (NetTerm::doubled(wedge, 1), rhs)
        } else {
            (
                NetTerm::base("N", wedge, 1),
                NetTerm::complement(NetTerm::base("N", wedge, 0)),
            )
        };
        checked += 1;
        match verify_identity(&lhs, &rhs, rules, use_ctx)? {
            IdentityVerdict::Proved { transcript, .. } => {
                if base_transcript.is_none() {
                    base_transcript = Some(transcript);
                }
            }
            IdentityVerdict::Refuted { lhs_normal, rhs_normal, .. } => {
                counterexample = Some(DualityCounterexample {
                    wedge: wedge.clone(),
                    lhs_normal,
                    rhs_normal,
                });
                break;
            }
        }
    }
    let verdict = if counterexample.is_some() {
        DualityVerdict::Fails
    } else if twisted {
        DualityVerdict::TwistedHaagDual
    } else {
        DualityVerdict::HaagDual
    };
    Ok(DualityReport {
        context: ctx.name().to_string(),
        twisted,
        verdict,
        wedges_checked: checked,
        base_transcript: if counterexample.is_none() { base_transcript } else { None },
        counterexample,
    })
}

// ---------------------------------------------------------------------------
// The tensor non-covariance chain
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainVerdict {
    Equal,
    NotEqual,
}

/// One sampled comparison of the first-factor labels: the witness
/// exponential parameter, the adjoint defect of the label quotient,
/// and the resulting coset verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSample {
    pub s: Option<f64>,
    pub defect: f64,
    pub equal: bool,
    pub component: StabilizerComponent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub description: String,
}

/// Exact certificate data carried along with a chain verdict, with
/// rational coordinates rendered as `p/q` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttachedCertificate {
    pub setup: String,
    pub algebra: String,
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

fn attach(cert: &CovarianceCertificate) -> AttachedCertificate {
    let coords = |e: &crate::liealg::LieElement| rats_to_strings(e.coords());
    AttachedCertificate {
        setup: cert.setup_name.clone(),
        algebra: cert.algebra_name.clone(),
        status: cert.status,
        h1: coords(&cert.h1),
        h2: coords(&cert.h2),
        witness_index: cert.witness_index,
        witness: cert.witness.as_ref().map(coords),
        bracket_value: cert.bracket_value.as_ref().map(coords),
        obstruction: cert.obstruction.as_ref().map(coords),
        samples: cert.samples.clone(),
        threshold: cert.threshold,
    }
}

/// Verdict of replaying the tensor-product chain at one flow parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkChainReport {
    pub setup: String,
    pub t: f64,
    pub verdict: ChainVerdict,
    pub threshold: f64,
    pub steps: Vec<ChainStep>,
    pub samples: Vec<ChainSample>,
    pub certificate: AttachedCertificate,
}

/// Replay the tensor non-covariance chain at flow parameter `t`, on the
/// label level.
///
/// The product net `H(w) = N̂(w) ⊗ N₀(w)` is covariant by construction,
/// and its modular flow factorizes. The second factor is modular
/// covariant, so its flow moves the label by the boost one-parameter
/// group of the base wedge. The first factor's flow is generated by the
/// certificate's second generator `h₂`, while geometric covariance
/// would use `h₁`; since the two commute, the flowed and the
/// geometrically moved labels differ by `g⁻¹·exp(2πt(h₂−h₁))·g` for a
/// witness element `g = exp(s·y)`. The verdict compares that quotient
/// against the stabilizer of the first factor's base label.
///
/// A certificate whose status already satisfies the necessary condition
/// has no witness; the quotient is then the identity and the chain
/// closes with `Equal` for every `t`. A certificate claiming a
/// violation without carrying a witness is rejected.
pub fn mink_noncov_chain(
    cert: &CovarianceCertificate,
    t: f64,
) -> Result<MinkChainReport, NetError> {
    let h1 = cert.h1.matrix().to_f64();
    let h2 = cert.h2.matrix().to_f64();
    let n = h1.nrows();
    let diff = &h2 - &h1;
    let witness = match cert.status {
        CovarianceStatus::Violated => {
            Some(cert.witness.as_ref().ok_or(NetError::CertificateNotViolated)?.matrix().to_f64())
        }
        CovarianceStatus::CovariantNecessaryConditionHolds => None,
    };
    let stabilizer = CosetNet::new(
        "first-factor-labels",
        n,
        "W",
        vec![h2.clone()],
        vec![-DMatrix::<f64>::identity(n, n)],
    )?;
    let inner = (diff * (2.0 * std::f64::consts::PI * t)).exp();
    let s_values: Vec<Option<f64>> = match &witness {
        Some(_) => vec![Some(-1.0), Some(-0.5), Some(0.5), Some(1.0)],
        None => vec![None],
    };
    let id = DMatrix::<f64>::identity(n, n);
    let mut samples = Vec::new();
    for s in &s_values {
        let g = match (s, &witness) {
            (Some(s), Some(y)) => (y * *s).exp(),
            _ => id.clone(),
        };
        let g_inv = g.clone().try_inverse().expect("witness exponentials are invertible");
        let quotient = g_inv * &inner * &g;
        let cmp = stabilizer.coset_equal(&quotient, &id);
        samples.push(ChainSample {
            s: *s,
            defect: cmp.defect,
            equal: cmp.equal,
            component: cmp.component,
        });
    }
    let primary = samples.last().expect("at least one sample");
    let verdict = if primary.equal { ChainVerdict::Equal } else { ChainVerdict::NotEqual };
    let outcome = match verdict {
        ChainVerdict::Equal => "the labels agree, so the chain closes with equality",
        ChainVerdict::NotEqual => {
            "the first-factor labels disagree, so the product net is not modular covariant"
        }
    };
    let steps = vec![
        ChainStep {
            description: "the modular flow of the product subspace factorizes over the tensor product"
                .to_string(),
        },
        ChainStep {
            description: "each tensor factor flows under its own modular group".to_string(),
        },
        ChainStep {
            description:
                "the second factor is modular covariant: its flow moves the wedge label by the base boost"
                    .to_string(),
        },
        ChainStep {
            description: format!(
                "the first factor's flow is generated by h₂ while covariance moves the label by h₁; \
                 the two labels differ by g⁻¹·exp(2πt(h₂−h₁))·g at t = {t}"
            ),
        },
        ChainStep {
            description: format!(
                "comparing first-factor labels as cosets: defect {:.3e} against threshold {:.1e}; {}",
                primary.defect, cert.threshold, outcome
            ),
        },
    ];
    Ok(MinkChainReport {
        setup: cert.setup_name.clone(),
        t,
        verdict,
        threshold: cert.threshold,
        steps,
        samples,
        certificate: attach(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcov::{bw_control_setup, catalog_setups, negcond_certificate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn twisted() -> CosetNet {
        CosetNet::ds2_twisted()
    }

    #[test]
    fn parses_twist_complement_sum() {
        let term = parse_term("Z·(N(W1) (+) K(W1))'").expect("parses");
        let NetTerm::Twist(inner) = &term else { panic!("expected a twist") };
        let NetTerm::Complement(sum) = inner.as_ref() else { panic!("expected a complement") };
        let NetTerm::DirectSum(a, b) = sum.as_ref() else { panic!("expected a direct sum") };
        assert_eq!(**a, NetTerm::base("N", "W1", 0));
        assert_eq!(**b, NetTerm::base("K", "W1", 0));
        // `*` is accepted as the apply separator.
        let starred = parse_term("Z*(N(W1) (+) K(W1))'").expect("parses with *");
        assert_eq!(starred, term);
    }

    #[test]
    fn round_trips_the_twisted_duality_statement() {
        let text = "Htilde(W') = Z·Htilde(W)'";
        let (lhs, rhs) = parse_identity(text).expect("parses");
        assert_eq!(print_term(&lhs), "Htilde(W')");
        assert_eq!(print_term(&rhs), "Z·Htilde(W)'");
        assert_eq!(parse_term(&print_term(&lhs)).unwrap(), lhs);
        assert_eq!(parse_term(&print_term(&rhs)).unwrap(), rhs);
    }

    #[test]
    fn reports_syntax_errors_with_positions() {
        let err = parse_term("Z·(N(W1) (+) K(W1)").unwrap_err();
        let NetError::Syntax { position, .. } = err else { panic!("expected a syntax error") };
        assert_eq!(position, 19); // after the final `)` of K(W1), at end of input
        let err = parse_term("N(W").unwrap_err();
        assert!(matches!(err, NetError::Syntax { .. }));
        let err = parse_term("N(W))").unwrap_err();
        let NetError::Syntax { position, .. } = err else { panic!("expected a syntax error") };
        assert_eq!(position, 4);
    }

    fn random_term(rng: &mut ChaCha8Rng, budget: &mut usize) -> NetTerm {
        let nets = ["N", "K"];
        let wedges = ["W", "V"];
        let elements = ["rpi", "r2pi", "rot1", "b1"];
        if *budget <= 1 {
            *budget = budget.saturating_sub(1);
            let net = nets[rng.gen_range(0..nets.len())];
            let wedge = wedges[rng.gen_range(0..wedges.len())];
            return NetTerm::base(net, wedge, rng.gen_range(0..3));
        }
        *budget -= 1;
        match rng.gen_range(0..8) {
            0 | 1 => {
                let net = nets[rng.gen_range(0..nets.len())];
                let wedge = wedges[rng.gen_range(0..wedges.len())];
                NetTerm::base(net, wedge, rng.gen_range(0..3))
            }
            2 => {
                let g = elements[rng.gen_range(0..elements.len())];
                NetTerm::apply(g, random_term(rng, budget))
            }
            3 => NetTerm::complement(random_term(rng, budget)),
            4 => NetTerm::twist(random_term(rng, budget)),
            5 | 6 => {
                let left = random_term(rng, budget);
                let right = random_term(rng, budget);
                NetTerm::dsum(left, right)
            }
            _ => {
                let left = random_term(rng, budget);
                let right = random_term(rng, budget);
                NetTerm::tensor(left, right)
            }
        }
    }

    fn rich_context() -> CosetNet {
        twisted()
            .with_wedge("V", rotation(0.9))
            .and_then(|c| c.with_element("rot1", rotation(1.7), false))
            .and_then(|c| c.with_element("b1", boost(0.8), false))
            .expect("test context is valid")
    }

    #[test]
    fn printing_and_parsing_are_mutually_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let mut budget = rng.gen_range(1..30);
            let term = random_term(&mut rng, &mut budget);
            let printed = print_term(&term);
            let reparsed = parse_term(&printed)
                .unwrap_or_else(|e| panic!("failed to reparse `{printed}`: {e}"));
            assert_eq!(reparsed, term, "round trip failed for `{printed}`");
        }
    }

    #[test]
    fn covariance_absorbs_group_elements_into_labels() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let term = parse_term("U(rpi)·N(W)").unwrap();
        let (nf, transcript) = normalize(&term, &rules, &ctx).unwrap();
        let NormalTerm::Atom(atom) = &nf else { panic!("expected an atom") };
        assert_eq!(atom.net, "N");
        assert!(!atom.complemented);
        // The absorbed label is the complemented wedge W' = W·rpi.
        let (_, rho) = ctx.prime_rotation().unwrap();
        assert!((&atom.coset - rho).norm() < 1e-12);
        assert!(transcript.has_tag(RuleTag::Covariance));
        // The same label arises from the wedge-level prime.
        let (nf2, _) = normalize(&parse_term("N(W')").unwrap(), &rules, &ctx).unwrap();
        let NormalTerm::Atom(atom2) = &nf2 else { panic!("expected an atom") };
        assert!(ctx.coset_equal(&atom.coset, &atom2.coset).equal);
    }

    #[test]
    fn central_rotation_erases_from_complemented_label() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let term = parse_term("U(r2pi)·N(W)'").unwrap();
        let (nf, transcript) = normalize(&term, &rules, &ctx).unwrap();
        let NormalTerm::Atom(atom) = &nf else { panic!("expected an atom") };
        assert_eq!(atom.net, "N");
        assert!(atom.complemented);
        assert_eq!(atom.label, "W");
        let central: Vec<_> =
            transcript.steps.iter().filter(|s| s.tag == RuleTag::CentralFix).collect();
        assert_eq!(central.len(), 1);
        assert!(central[0].usually_implicit);
        assert!(transcript.has_tag(RuleTag::ComplementTransform));
        assert!(transcript.reverify(&ctx));
    }

    #[test]
    fn twist_swaps_direct_summands() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let term = parse_term("Z·(N(W) (+) N(W)')").unwrap();
        let (nf, transcript) = normalize(&term, &rules, &ctx).unwrap();
        let NormalTerm::DirectSum(a, b) = &nf else { panic!("expected a direct sum") };
        let NormalTerm::Atom(first) = a.as_ref() else { panic!("expected an atom") };
        let NormalTerm::Atom(second) = b.as_ref() else { panic!("expected an atom") };
        assert!(first.complemented);
        assert!(!second.complemented);
        assert!(transcript.has_tag(RuleTag::TwistSwap));
    }

    #[test]
    fn boost_labels_erase_as_stabilizer_elements() {
        let ctx = rich_context();
        let rules = RuleSet::standard();
        let (nf, transcript) = normalize(&parse_term("U(b1)·N(W)").unwrap(), &rules, &ctx).unwrap();
        let NormalTerm::Atom(atom) = &nf else { panic!("expected an atom") };
        assert_eq!(atom.label, "W");
        assert!(transcript.has_tag(RuleTag::StabilizerFix));
        assert!(transcript.reverify(&ctx));
    }

    #[test]
    fn twisted_duality_proved_at_the_base_wedge() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let verdict = verify_identity_text("Htilde(W') = Z·Htilde(W)'", &rules, &ctx).unwrap();
        let IdentityVerdict::Proved { transcript, lhs_normal, rhs_normal } = verdict else {
            panic!("the twisted duality identity must hold")
        };
        assert!(transcript.len() >= 5, "expected at least five steps, got {}", transcript.len());
        assert!(transcript.has_tag(RuleTag::EqPrime));
        assert!(transcript.has_tag(RuleTag::CentralFix));
        assert!(transcript.has_tag(RuleTag::TwistSwap));
        assert!(
            transcript
                .steps
                .iter()
                .any(|s| s.tag == RuleTag::CentralFix && s.usually_implicit),
            "the central erasure must be flagged as usually implicit"
        );
        assert!(transcript.reverify(&ctx));
        assert_eq!(lhs_normal, rhs_normal);
    }

    #[test]
    fn twisted_duality_holds_on_rotated_wedges() {
        let rules = RuleSet::standard();
        for theta in [0.3, 1.1, 2.7, 5.0] {
            let ctx = twisted().with_wedge("V", rotation(theta)).unwrap();
            let verdict = verify_identity_text("Htilde(V') = Z·Htilde(V)'", &rules, &ctx).unwrap();
            assert!(verdict.proved(), "duality must hold at rotation angle {theta}");
        }
    }

    #[test]
    fn untwisted_claim_is_refuted_by_a_summand_swap() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let verdict = verify_identity_text("Htilde(W') = Htilde(W)'", &rules, &ctx).unwrap();
        let IdentityVerdict::Refuted { lhs_normal, rhs_normal, note } = verdict else {
            panic!("the untwisted variant must fail")
        };
        assert_ne!(lhs_normal, rhs_normal);
        assert!(note.expect("swap detected").contains("summand swap"));
    }

    #[test]
    fn coset_comparison_distinguishes_components() {
        let ctx = twisted();
        let id = ctx.identity();
        let same = ctx.coset_equal(&id, &id);
        assert!(same.equal);
        assert_eq!(same.component, StabilizerComponent::Identity);

        let central = ctx.coset_equal(&(-&id), &id);
        assert!(central.equal);
        assert_eq!(central.component, StabilizerComponent::Central);

        let boosted = ctx.coset_equal(&boost(0.8), &id);
        assert!(boosted.equal);
        assert_eq!(boosted.component, StabilizerComponent::Stabilizer);

        let both = ctx.coset_equal(&(-boost(0.8)), &id);
        assert!(both.equal);
        assert_eq!(both.component, StabilizerComponent::CentralStabilizer);

        let rotated = ctx.coset_equal(&rotation(0.9), &id);
        assert!(!rotated.equal);
        assert_eq!(rotated.component, StabilizerComponent::Outside);
        assert!(rotated.defect > 0.1);
    }

    #[test]
    fn center_needs_a_declared_discrete_generator() {
        // A single cover: the stabilizer is connected, −1 is not in it.
        let sigma1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let ctx = CosetNet::new("single-cover", 2, "W", vec![sigma1], vec![])
            .and_then(|c| c.with_net("N", None))
            .unwrap();
        let id = ctx.identity();
        let cmp = ctx.coset_equal(&(-&id), &id);
        assert!(!cmp.equal, "without −1 declared, the central element is outside");
        assert!(cmp.defect < 1e-12, "the adjoint test alone cannot see the center");
    }

    #[test]
    fn sl3_cosets_separate_under_the_witness_exponential() {
        let setups = catalog_setups();
        let sl3 = &setups[0];
        let ctx = CosetNet::from_setup(sl3, "sl3-cosets").unwrap();
        let id = ctx.identity();
        let k2 = sl3.subalgebra_basis()[1].matrix().to_f64();
        let moved = k2.exp();
        let cmp = ctx.coset_equal(&moved, &id);
        assert!(!cmp.equal);
        assert!(cmp.defect > 0.1);
        // Exponentials of the stabilizer generator itself are accepted.
        let along = (sl3.h2().matrix().to_f64() * 0.7).exp();
        assert!(ctx.coset_equal(&along, &id).equal);
    }

    #[test]
    fn stabilizer_closure_is_validated() {
        let sigma1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let sigma2 = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
        let err = CosetNet::new("bad", 2, "W", vec![sigma1.clone(), sigma2.clone()], vec![])
            .unwrap_err();
        assert!(matches!(err, NetError::StabilizerNotClosed { i: 0, j: 1 }));
        // The full three-dimensional algebra is closed.
        let sigma0 = DMatrix::from_row_slice(2, 2, &[0.0, -0.5, 0.5, 0.0]);
        assert!(CosetNet::new("ok", 2, "W", vec![sigma0, sigma1, sigma2], vec![]).is_ok());
    }

    #[test]
    fn unknown_symbols_are_reported() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let err = normalize(&parse_term("N(Q)").unwrap(), &rules, &ctx).unwrap_err();
        assert!(matches!(err, NetError::UnknownSymbol { symbol } if symbol == "Q"));
        let err = normalize(&parse_term("U(gg)·N(W)").unwrap(), &rules, &ctx).unwrap_err();
        assert!(matches!(err, NetError::UnknownSymbol { symbol } if symbol == "gg"));
        let err = normalize(&parse_term("M(W)").unwrap(), &rules, &ctx).unwrap_err();
        assert!(matches!(err, NetError::UnknownSymbol { symbol } if symbol == "M"));
    }

    #[test]
    fn rewriting_steps_stay_quadratic_in_term_size() {
        let ctx = rich_context();
        let rules = RuleSet::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let mut budget = rng.gen_range(1..=30);
            let term = random_term(&mut rng, &mut budget);
            let size = term.size();
            let (_, transcript) = normalize(&term, &rules, &ctx)
                .unwrap_or_else(|e| panic!("normalization failed on `{term}`: {e}"));
            let bound = 4 * size * size + 4 * size + 8;
            assert!(
                transcript.len() <= bound,
                "term of size {size} took {} steps (bound {bound}): `{term}`",
                transcript.len()
            );
        }
    }

    #[test]
    fn every_term_equals_itself_after_normalization() {
        let ctx = rich_context();
        let rules = RuleSet::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let mut budget = rng.gen_range(1..=20);
            let term = random_term(&mut rng, &mut budget);
            let verdict = verify_identity(&term, &term, &rules, &ctx).unwrap();
            assert!(verdict.proved(), "self-identity failed for `{term}`");
        }
    }

    #[test]
    fn duality_reports_match_the_three_net_styles() {
        let rules = RuleSet::standard();
        let dual = check_duality(&CosetNet::ds2_haag_dual(), &rules, false).unwrap();
        assert_eq!(dual.verdict, DualityVerdict::HaagDual);
        assert_eq!(dual.wedges_checked, 4);
        assert!(dual.counterexample.is_none());

        let twisted_report = check_duality(&twisted(), &rules, true).unwrap();
        assert_eq!(twisted_report.verdict, DualityVerdict::TwistedHaagDual);
        let transcript = twisted_report.base_transcript.expect("base transcript");
        assert!(transcript.has_tag(RuleTag::EqPrime));

        let untwisted = check_duality(&twisted(), &rules, false).unwrap();
        assert_eq!(untwisted.verdict, DualityVerdict::Fails);
        assert!(untwisted.counterexample.is_some());
    }

    #[test]
    fn chain_refutes_covariance_for_the_sl3_certificate() {
        let setups = catalog_setups();
        let cert = negcond_certificate(&setups[0]);
        let report = mink_noncov_chain(&cert, 1.0).unwrap();
        assert_eq!(report.verdict, ChainVerdict::NotEqual);
        assert_eq!(report.steps.len(), 5);
        assert_eq!(report.samples.len(), 4);
        for sample in &report.samples {
            assert!(!sample.equal, "the verdict must be stable across witness samples");
            assert!(sample.defect > report.threshold);
        }
        assert_eq!(report.certificate.setup, "sl3");
        assert!(report.certificate.witness.is_some());
    }

    #[test]
    fn chain_closes_at_zero_flow_and_for_the_control_setup() {
        let setups = catalog_setups();
        let cert = negcond_certificate(&setups[0]);
        let at_zero = mink_noncov_chain(&cert, 0.0).unwrap();
        assert_eq!(at_zero.verdict, ChainVerdict::Equal);
        for sample in &at_zero.samples {
            assert!(sample.equal);
            assert_eq!(sample.component, StabilizerComponent::Identity);
        }

        let control = bw_control_setup();
        let control_cert = negcond_certificate(&control);
        for t in [0.0, 0.5, 1.0, 2.0] {
            let report = mink_noncov_chain(&control_cert, t).unwrap();
            assert_eq!(report.verdict, ChainVerdict::Equal, "control setup at t = {t}");
        }
    }

    #[test]
    fn chain_rejects_certificates_without_witnesses() {
        let setups = catalog_setups();
        let mut cert = negcond_certificate(&setups[0]);
        cert.witness = None;
        let err = mink_noncov_chain(&cert, 1.0).unwrap_err();
        assert!(matches!(err, NetError::CertificateNotViolated));
    }

    #[test]
    fn transcripts_serialize_deterministically() {
        let ctx = twisted();
        let rules = RuleSet::standard();
        let verdict = verify_identity_text("Htilde(W') = Z·Htilde(W)'", &rules, &ctx).unwrap();
        let first = serde_json::to_string_pretty(&verdict).unwrap();
        let second = serde_json::to_string_pretty(
            &verify_identity_text("Htilde(W') = Z·Htilde(W)'", &rules, &ctx).unwrap(),
        )
        .unwrap();
        assert_eq!(first, second);
        let parsed: IdentityVerdict = serde_json::from_str(&first).unwrap();
        assert_eq!(parsed, verdict);
        assert!(first.contains("eq-prime"));
        assert!(first.contains("central-fix"));
    }

    #[test]
    fn rule_set_uses_only_the_fixed_tag_vocabulary() {
        let rules = RuleSet::standard();
        assert!(!rules.rules().is_empty());
        for rule in rules.rules() {
            let tag = rule.tag.to_string();
            assert!(
                matches!(
                    tag.as_str(),
                    "covariance"
                        | "stabilizer-fix"
                        | "complement-transform"
                        | "eq-prime"
                        | "central-fix"
                        | "twist-swap"
                        | "dsum-distribute"
                ),
                "unexpected tag {tag} on rule {}",
                rule.name
            );
        }
        // Disabling the twist rule leaves the twist stuck, breaking the proof.
        let ctx = twisted();
        let crippled = rules.without("twist-dsum");
        let verdict = verify_identity_text("Htilde(W') = Z·Htilde(W)'", &crippled, &ctx).unwrap();
        assert!(!verdict.proved());
    }
}
