//! Polynomial automorphisms of the plane `k[z1, z2]`.
//!
//! Maps are ring endomorphisms written as the pair of images `(f1, f2)`.
//! Composition follows the ring-map convention: `compose(τ, σ)` sends `z_i`
//! to `τ(σ(z_i))`, so that applying it equals applying `σ` and then `τ`.

mod amalgam;
mod tame;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{format_poly, parse_poly};
use crate::poly::{Degree, Monomial, MultiPoly, RingKind};
use crate::scalar::{format_scalar, Scalar};

pub use amalgam::{
    classify_gk_plane, cyclic_reduce, is_triangularizable, CyclicReduction, GkVerdictPlane, LaneForm,
    TriangularCertificate, TriangularForm,
};
pub use tame::{tame_decompose, tame_decompose_with_cap, Obstruction, TameFactor, TameWord, DEFAULT_STEP_CAP};

pub(crate) fn pvar(i: usize) -> MultiPoly {
    MultiPoly::var(RingKind::Polynomial, 2, i)
}

pub(crate) fn pconst(c: Scalar) -> MultiPoly {
    MultiPoly::constant(RingKind::Polynomial, 2, c)
}

pub(crate) fn deg(p: &MultiPoly) -> Degree {
    p.degree_unchecked()
}

/// True when `p` involves only `z2`.
pub(crate) fn only_z2(p: &MultiPoly) -> bool {
    p.terms().all(|(m, _)| m.exponents()[0] == 0)
}

/// The pair `(f1, f2)` acting by `z1 ↦ f1, z2 ↦ f2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlaneEndoJson", into = "PlaneEndoJson")]
pub struct PlaneEndo {
    f: [MultiPoly; 2],
}

#[derive(Serialize, Deserialize)]
struct PlaneEndoJson {
    f: [String; 2],
}

impl TryFrom<PlaneEndoJson> for PlaneEndo {
    type Error = Error;
    fn try_from(j: PlaneEndoJson) -> Result<Self> {
        PlaneEndo::parse(&j.f[0], &j.f[1])
    }
}

impl From<PlaneEndo> for PlaneEndoJson {
    fn from(s: PlaneEndo) -> Self {
        PlaneEndoJson { f: [format_poly(&s.f[0]), format_poly(&s.f[1])] }
    }
}

impl PlaneEndo {
    pub fn new(f1: MultiPoly, f2: MultiPoly) -> Result<Self> {
        for f in [&f1, &f2] {
            if f.kind() != RingKind::Polynomial {
                return Err(Error::RingMismatch { left: "polynomial", right: f.kind().name() });
            }
            if f.arity() != 2 {
                return Err(Error::ArityMismatch { expected: 2, found: f.arity() });
            }
        }
        Ok(PlaneEndo { f: [f1, f2] })
    }

    pub fn parse(f1: &str, f2: &str) -> Result<Self> {
        Self::new(parse_poly(f1, RingKind::Polynomial, 2)?, parse_poly(f2, RingKind::Polynomial, 2)?)
    }

    pub fn identity() -> Self {
        PlaneEndo { f: [pvar(0), pvar(1)] }
    }

    pub fn swap() -> Self {
        PlaneEndo { f: [pvar(1), pvar(0)] }
    }

    pub fn f1(&self) -> &MultiPoly {
        &self.f[0]
    }

    pub fn f2(&self) -> &MultiPoly {
        &self.f[1]
    }

    pub fn components(&self) -> &[MultiPoly; 2] {
        &self.f
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `p(f1, f2)`.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.kind() != RingKind::Polynomial {
            return Err(Error::RingMismatch { left: "polynomial", right: p.kind().name() });
        }
        if p.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: p.arity() });
        }
        p.substitute(&self.f)
    }

    /// `self ∘ sigma`: `z_i ↦ self(sigma(z_i))`.
    pub fn compose(&self, sigma: &PlaneEndo) -> PlaneEndo {
        let f = [
            sigma.f[0].substitute(&self.f).expect("arity-2 polynomials"),
            sigma.f[1].substitute(&self.f).expect("arity-2 polynomials"),
        ];
        PlaneEndo { f }
    }

    /// `σ^m` for `m >= 0`.
    pub fn iterate(&self, m: u32) -> PlaneEndo {
        let mut acc = PlaneEndo::identity();
        for _ in 0..m {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn max_degree(&self) -> i64 {
        self.f.iter().map(|p| deg(p).finite().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Both components of degree at most one.
    pub fn is_affine(&self) -> bool {
        self.f.iter().all(|p| deg(p) <= Degree::Finite(1))
    }

    /// The affine map with the same coefficients, if the map is affine.
    pub fn as_affine(&self) -> Option<AffineMap> {
        if !self.is_affine() {
            return None;
        }
        let e1 = Monomial::var(2, 0);
        let e2 = Monomial::var(2, 1);
        let lin = [
            [self.f[0].coeff(&e1), self.f[0].coeff(&e2)],
            [self.f[1].coeff(&e1), self.f[1].coeff(&e2)],
        ];
        let trans = [self.f[0].constant_term(), self.f[1].constant_term()];
        AffineMap::new(lin, trans).ok()
    }

    /// The triangular map with the same coefficients, if the map has the
    /// shape `(λ1 z1 + g1(z2), λ2 z2 + g2)` with nonzero `λ`.
    pub fn as_triangular(&self) -> Option<TriangularAuto> {
        let e1 = Monomial::var(2, 0);
        let e2 = Monomial::var(2, 1);
        let lambda1 = self.f[0].coeff(&e1);
        let g1 = self.f[0].try_sub(&MultiPoly::term(RingKind::Polynomial, 2, e1, lambda1.clone())).ok()?;
        if !only_z2(&g1) {
            return None;
        }
        if deg(&self.f[1]) > Degree::Finite(1) || !self.f[1].coeff(&Monomial::var(2, 0)).is_zero() {
            return None;
        }
        TriangularAuto::new(lambda1, g1, self.f[1].coeff(&e2), self.f[1].constant_term()).ok()
    }
}

impl fmt::Display for PlaneEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f[0], self.f[1])
    }
}

/// `plane_apply`: `p(f1, f2)`.
pub fn plane_apply(sigma: &PlaneEndo, p: &MultiPoly) -> Result<MultiPoly> {
    sigma.apply(p)
}

/// `plane_compose(τ, σ) = τ ∘ σ`.
pub fn plane_compose(tau: &PlaneEndo, sigma: &PlaneEndo) -> PlaneEndo {
    tau.compose(sigma)
}

/// Inverts `σ` through its tame factorization.
pub fn plane_inverse(sigma: &PlaneEndo) -> Result<PlaneEndo> {
    Ok(tame_decompose(sigma)?.inverse().compose())
}

/// `z1 ↦ a11 z1 + a12 z2 + t1`, `z2 ↦ a21 z1 + a22 z2 + t2`, with invertible
/// linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    lin: [[Scalar; 2]; 2],
    trans: [Scalar; 2],
}

impl AffineMap {
    pub fn new(lin: [[Scalar; 2]; 2], trans: [Scalar; 2]) -> Result<Self> {
        let m = AffineMap { lin, trans };
        if m.det().is_zero() {
            return Err(Error::NotAnAutomorphism(Obstruction::SingularLinearPart));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (o, z) = (Scalar::one(), Scalar::zero());
        AffineMap { lin: [[o.clone(), z.clone()], [z.clone(), o]], trans: [z.clone(), z] }
    }

    pub fn linear(&self) -> &[[Scalar; 2]; 2] {
        &self.lin
    }

    pub fn translation(&self) -> &[Scalar; 2] {
        &self.trans
    }

    pub fn det(&self) -> Scalar {
        &self.lin[0][0] * &self.lin[1][1] - &self.lin[0][1] * &self.lin[1][0]
    }

    /// In the intersection with the triangular group: `z2 ↦ u z2 + v`.
    pub fn is_triangular(&self) -> bool {
        self.lin[1][0].is_zero()
    }

    pub fn to_endo(&self) -> PlaneEndo {
        let row = |i: usize| {
            pvar(0)
                .scale(&self.lin[i][0])
                .try_add(&pvar(1).scale(&self.lin[i][1]))
                .and_then(|p| p.try_add(&pconst(self.trans[i].clone())))
                .expect("same ring")
        };
        PlaneEndo { f: [row(0), row(1)] }
    }

    pub fn inverse(&self) -> AffineMap {
        self.to_endo_inverse().as_affine().expect("inverse of an affine map is affine")
    }

    fn to_endo_inverse(&self) -> PlaneEndo {
        // Writing the map as z ↦ L z + t on the coordinate column, the inverse
        // is z ↦ L⁻¹ z − L⁻¹ t.
        let d = self.det();
        let inv = [
            [&self.lin[1][1] / &d, -&self.lin[0][1] / &d],
            [-&self.lin[1][0] / &d, &self.lin[0][0] / &d],
        ];
        let t = [
            -(&inv[0][0] * &self.trans[0] + &inv[0][1] * &self.trans[1]),
            -(&inv[1][0] * &self.trans[0] + &inv[1][1] * &self.trans[1]),
        ];
        AffineMap { lin: inv, trans: t }.to_endo()
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_endo())
    }
}

/// `(λ1 z1 + g1(z2), λ2 z2 + g2)` with `λ1, λ2 ≠ 0` and constant `g2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularAuto {
    lambda1: Scalar,
    g1: MultiPoly,
    lambda2: Scalar,
    g2: Scalar,
}

impl TriangularAuto {
    pub fn new(lambda1: Scalar, g1: MultiPoly, lambda2: Scalar, g2: Scalar) -> Result<Self> {
        if lambda1.is_zero() {
            return Err(Error::ZeroScalar { index: 0 });
        }
        if lambda2.is_zero() {
            return Err(Error::ZeroScalar { index: 1 });
        }
        if g1.kind() != RingKind::Polynomial || g1.arity() != 2 || !only_z2(&g1) {
            return Err(Error::invalid("g1 must be a polynomial in z2 alone"));
        }
        Ok(TriangularAuto { lambda1, g1, lambda2, g2 })
    }

    pub fn lambda1(&self) -> &Scalar {
        &self.lambda1
    }

    pub fn g1(&self) -> &MultiPoly {
        &self.g1
    }

    pub fn lambda2(&self) -> &Scalar {
        &self.lambda2
    }

    pub fn g2(&self) -> &Scalar {
        &self.g2
    }

    /// Degree of `g1` (the `β` of a Lane factor).
    pub fn degree(&self) -> Degree {
        deg(&self.g1)
    }

    pub fn to_endo(&self) -> PlaneEndo {
        let f1 = pvar(0).scale(&self.lambda1).try_add(&self.g1).expect("same ring");
        let f2 = pvar(1).scale(&self.lambda2).try_add(&pconst(self.g2.clone())).expect("same ring");
        PlaneEndo { f: [f1, f2] }
    }

    /// Tame factors whose composition is this map: an elementary shear after
    /// a diagonal affine map.
    pub fn to_factors(&self) -> Vec<TameFactor> {
        let zero = Scalar::zero();
        let diag = AffineMap {
            lin: [[self.lambda1.clone(), zero.clone()], [zero.clone(), self.lambda2.clone()]],
            trans: [zero, self.g2.clone()],
        };
        let h = self.g1.scale(&self.lambda1.recip());
        if deg(&h) <= Degree::Finite(1) {
            let full = TameFactor::Elementary(h).to_endo().compose(&diag.to_endo());
            return vec![TameFactor::Affine(full.as_affine().expect("affine"))];
        }
        vec![TameFactor::Elementary(h), TameFactor::Affine(diag)]
    }
}

impl fmt::Display for TriangularAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_endo())
    }
}

impl Serialize for TriangularAuto {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let e = self.to_endo();
        let mut st = s.serialize_struct("TriangularAuto", 5)?;
        st.serialize_field("f", &[format_poly(e.f1()), format_poly(e.f2())])?;
        st.serialize_field("lambda1", &format_scalar(&self.lambda1))?;
        st.serialize_field("g1", &format_poly(&self.g1))?;
        st.serialize_field("lambda2", &format_scalar(&self.lambda2))?;
        st.serialize_field("g2", &format_scalar(&self.g2))?;
        st.end()
    }
}

/// Outcome of a degree-doubling scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegreeGrowth {
    /// `deg σ^{m+1}(z_var) >= r · deg σ^m(z_var)` at every scanned step.
    ExponentialWitness { var: usize, degrees: Vec<i64> },
    Inconclusive { degrees: [Vec<i64>; 2] },
}

/// Scans `deg σ^m(z_i)` for `m <= m_max`. An advisory check: a finite scan
/// cannot establish the growth hypothesis for every `m`.
pub fn degree_growth_certificate(sigma: &PlaneEndo, r: &Scalar, m_max: u32) -> Result<DegreeGrowth> {
    if m_max < 2 {
        return Err(Error::invalid("m_max must be at least 2"));
    }
    if *r < Scalar::from_integer(2.into()) {
        return Err(Error::invalid("ratio r must be at least 2"));
    }
    let degrees = iterate_degrees(sigma, m_max);
    for (var, seq) in degrees.iter().enumerate() {
        let ok = seq.windows(2).all(|w| Scalar::from_integer(w[1].into()) >= r * Scalar::from_integer(w[0].into()));
        if ok {
            return Ok(DegreeGrowth::ExponentialWitness { var: var + 1, degrees: seq.clone() });
        }
    }
    Ok(DegreeGrowth::Inconclusive { degrees })
}

/// `deg σ^m(z1)` and `deg σ^m(z2)` for `0 <= m <= m_max`.
pub fn iterate_degrees(sigma: &PlaneEndo, m_max: u32) -> [Vec<i64>; 2] {
    let mut cur = PlaneEndo::identity();
    let mut out = [vec![1], vec![1]];
    for _ in 0..m_max {
        // σ^{m}(z_j) = f_j(σ^{m-1}(z1), σ^{m-1}(z2)).
        cur = cur.compose(sigma);
        for (j, seq) in out.iter_mut().enumerate() {
            seq.push(deg(&cur.f[j]).finite().unwrap_or(-1));
        }
    }
    out
}
