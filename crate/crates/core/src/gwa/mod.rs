//! Generalized Weyl algebras `D(σ, a)` over `P_n` or `L_n`.
//!
//! Elements are stored in the normal form `Σ d_i X^i` where `X^i` is `x^i`
//! for `i > 0`, `y^{-i}` for `i < 0` and `1` for `i = 0`.

mod element;
mod growth;
mod mul;
mod subspace;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentAuto;
use crate::matrix::IntMatrix;
use crate::parse::{format_poly, parse_poly};
use crate::plane::{plane_inverse, PlaneEndo};
use crate::poly::{MultiPoly, RingKind};
use crate::scalar::{self, format_scalar, int, Scalar};

pub use element::GwaElement;
pub use growth::{
    exponential_witness, fit_growth, growth_sequence, sandwich_check, stable_closure, Check, Fit, GrowthReport,
    EXPONENTIAL_RATIO, MIN_FIT_RANGE,
};
pub use mul::{gwa_add, gwa_mul, gwa_scale, Multiplier, Twister};
pub use subspace::{base_span, Key, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Base {
    pub kind: RingKind,
    pub n: usize,
}

impl Base {
    pub fn polynomial(n: usize) -> Self {
        Base { kind: RingKind::Polynomial, n }
    }

    pub fn laurent(n: usize) -> Self {
        Base { kind: RingKind::Laurent, n }
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        p.kind() == self.kind && p.arity() == self.n
    }

    pub fn check(&self, p: &MultiPoly) -> Result<()> {
        if p.kind() != self.kind {
            return Err(Error::RingMismatch { left: self.kind.name(), right: p.kind().name() });
        }
        if p.arity() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: p.arity() });
        }
        Ok(())
    }
}

/// The defining automorphism of the base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma {
    Laurent(LaurentAuto),
    Plane(PlaneEndo),
    /// `z1 ↦ scale·z1 + shift` on `k[z1]`.
    UnivariateAffine { scale: Scalar, shift: Scalar },
}

impl Sigma {
    /// Images of the variables.
    pub fn images(&self) -> Vec<MultiPoly> {
        match self {
            Sigma::Laurent(s) => s.images(),
            Sigma::Plane(p) => p.components().to_vec(),
            Sigma::UnivariateAffine { scale, shift } => {
                let z = MultiPoly::var(RingKind::Polynomial, 1, 0);
                vec![z.scale(scale).try_add(&MultiPoly::constant(RingKind::Polynomial, 1, shift.clone())).expect("same ring")]
            }
        }
    }

    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        match self {
            Sigma::Laurent(s) => s.apply(p),
            _ => p.substitute(&self.images()),
        }
    }

    fn inverse(&self) -> Result<Sigma> {
        Ok(match self {
            Sigma::Laurent(s) => Sigma::Laurent(s.inverse()?),
            Sigma::Plane(p) => Sigma::Plane(plane_inverse(p)?),
            Sigma::UnivariateAffine { scale, shift } => {
                Sigma::UnivariateAffine { scale: scale.recip(), shift: -(shift / scale) }
            }
        })
    }

    fn base(&self) -> Base {
        match self {
            Sigma::Laurent(s) => Base::laurent(s.n()),
            Sigma::Plane(_) => Base::polynomial(2),
            Sigma::UnivariateAffine { .. } => Base::polynomial(1),
        }
    }
}

/// `D(σ, a)` with `σ⁻¹` computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwaSpec {
    base: Base,
    sigma: Sigma,
    sigma_inverse: Sigma,
    a: MultiPoly,
}

impl GwaSpec {
    pub fn new(base: Base, sigma: Sigma, a: MultiPoly) -> Result<Self> {
        if sigma.base() != base {
            return Err(Error::invalid(format!(
                "automorphism acts on a {} ring in {} variables, base is {} in {}",
                sigma.base().kind.name(),
                sigma.base().n,
                base.kind.name(),
                base.n
            )));
        }
        if let Sigma::UnivariateAffine { scale, .. } = &sigma {
            if scale.is_zero() {
                return Err(Error::ZeroScalar { index: 0 });
            }
        }
        base.check(&a)?;
        let sigma_inverse = sigma.inverse()?;
        let images = sigma.images();
        for (i, v) in images.iter().enumerate() {
            let back = sigma_inverse.apply(v)?;
            if back != MultiPoly::var(base.kind, base.n, i) {
                return Err(Error::invalid("sigma composed with its inverse is not the identity"));
            }
        }
        Ok(GwaSpec { base, sigma, sigma_inverse, a })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn sigma_inverse(&self) -> &Sigma {
        &self.sigma_inverse
    }

    pub fn a(&self) -> &MultiPoly {
        &self.a
    }

    /// Advisory notes about the spec.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.a.is_zero() {
            w.push("a = 0: the algebra is defined and growth is unaffected, but it is not a domain and Noetherian conclusions need a != 0".to_string());
        }
        w
    }

    pub fn parse_base(&self, text: &str) -> Result<MultiPoly> {
        parse_poly(text, self.base.kind, self.base.n)
    }

    /// The element `d` of degree zero.
    pub fn element(&self, d: MultiPoly) -> Result<GwaElement> {
        self.base.check(&d)?;
        Ok(GwaElement::base(d))
    }

    pub fn one(&self) -> GwaElement {
        GwaElement::base(MultiPoly::one(self.base.kind, self.base.n))
    }

    pub fn x(&self) -> GwaElement {
        GwaElement::term(1, MultiPoly::one(self.base.kind, self.base.n))
    }

    pub fn y(&self) -> GwaElement {
        GwaElement::term(-1, MultiPoly::one(self.base.kind, self.base.n))
    }

    pub fn var(&self, i: usize) -> GwaElement {
        GwaElement::base(MultiPoly::var(self.base.kind, self.base.n, i))
    }

    /// Parses `"z1"`, `"x"`, `"y"`, `"z1^-1"` and other single generators
    /// or base polynomials.
    pub fn parse_generator(&self, text: &str) -> Result<GwaElement> {
        match text.trim() {
            "x" => Ok(self.x()),
            "y" => Ok(self.y()),
            t => self.element(self.parse_base(t)?),
        }
    }

    pub fn check(&self, u: &GwaElement) -> Result<()> {
        if u.components().all(|(_, d)| self.base.contains(d)) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }
}

/// The Weyl algebra: `D = k[h]`, `σ(h) = h - 1`, `a = h` (`h` is `z1`).
pub fn make_weyl() -> GwaSpec {
    let a = MultiPoly::var(RingKind::Polynomial, 1, 0);
    GwaSpec::new(Base::polynomial(1), Sigma::UnivariateAffine { scale: Scalar::one(), shift: int(-1) }, a)
        .expect("well-formed")
}

/// `H_m` with `a = 1`.
pub fn make_heisenberg(m: i64, alpha1: Scalar, alpha2: Scalar) -> Result<GwaSpec> {
    make_heisenberg_with(m, alpha1, alpha2, MultiPoly::one(RingKind::Laurent, 2))
}

/// `H_m = L_2(σ_m, a)` with `σ_m(z1) = α1 z1`, `σ_m(z2) = α2 z1^m z2`.
pub fn make_heisenberg_with(m: i64, alpha1: Scalar, alpha2: Scalar, a: MultiPoly) -> Result<GwaSpec> {
    let matrix = IntMatrix::from_rows(&[vec![1, m], vec![0, 1]])?;
    let sigma = LaurentAuto::new(matrix, vec![alpha1, alpha2])?;
    GwaSpec::new(Base::laurent(2), Sigma::Laurent(sigma), a)
}

#[derive(Serialize, Deserialize)]
struct AffineJson {
    #[serde(with = "scalar::serde_str")]
    scale: Scalar,
    #[serde(with = "scalar::serde_str")]
    shift: Scalar,
}

#[derive(Serialize, Deserialize)]
struct GwaSpecJson {
    base: Base,
    sigma: serde_json::Value,
    a: String,
}

impl TryFrom<GwaSpecJson> for GwaSpec {
    type Error = Error;
    fn try_from(j: GwaSpecJson) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::invalid(format!("sigma: {e}"));
        let sigma = match (j.base.kind, j.base.n) {
            (RingKind::Laurent, _) => Sigma::Laurent(serde_json::from_value(j.sigma).map_err(bad)?),
            (RingKind::Polynomial, 2) => Sigma::Plane(serde_json::from_value(j.sigma).map_err(bad)?),
            (RingKind::Polynomial, 1) => {
                if j.sigma.get("f").is_some() {
                    #[derive(Deserialize)]
                    struct F {
                        f: [String; 1],
                    }
                    let f: F = serde_json::from_value(j.sigma).map_err(bad)?;
                    let p = parse_poly(&f.f[0], RingKind::Polynomial, 1)?;
                    affine_from_poly(&p)?
                } else {
                    let s: AffineJson = serde_json::from_value(j.sigma).map_err(bad)?;
                    Sigma::UnivariateAffine { scale: s.scale, shift: s.shift }
                }
            }
            (RingKind::Polynomial, n) => {
                return Err(Error::invalid(format!("polynomial bases are supported for n = 1 or 2, not {n}")))
            }
        };
        let a = parse_poly(&j.a, j.base.kind, j.base.n)?;
        GwaSpec::new(j.base, sigma, a)
    }
}

fn affine_from_poly(p: &MultiPoly) -> Result<Sigma> {
    if p.degree_in(0).unwrap_or(0) > 1 {
        return Err(Error::invalid("an automorphism of k[z1] must have degree one"));
    }
    let scale = p.coeff(&crate::poly::Monomial::var(1, 0));
    if scale.is_zero() {
        return Err(Error::invalid("an automorphism of k[z1] must have degree one"));
    }
    Ok(Sigma::UnivariateAffine { scale, shift: p.constant_term() })
}

impl<'de> Deserialize<'de> for GwaSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GwaSpecJson::deserialize(d)?;
        GwaSpec::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for GwaSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sigma = match &self.sigma {
            Sigma::Laurent(l) => serde_json::to_value(l),
            Sigma::Plane(p) => serde_json::to_value(p),
            Sigma::UnivariateAffine { scale, shift } => {
                Ok(serde_json::json!({"scale": format_scalar(scale), "shift": format_scalar(shift)}))
            }
        }
        .map_err(serde::ser::Error::custom)?;
        GwaSpecJson { base: self.base, sigma, a: format_poly(&self.a) }.serialize(s)
    }
}

/// `b = σ^{-(m-1)}(a) ⋯ σ^{-1}(a) a`, the defining element of the subalgebra
/// generated by `D`, `x^m` and `y^m`.
pub fn power_subalgebra_defelt(spec: &GwaSpec, m: u32) -> Result<MultiPoly> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let mut twisted = spec.a.clone();
    let mut b = spec.a.clone();
    for _ in 1..m {
        twisted = spec.sigma_inverse.apply(&twisted)?;
        b = b.try_mul(&twisted)?;
    }
    Ok(b)
}

/// Checks `y^m x^m = b` and `x^m y^m = σ^m(b)` with the multiplication engine.
pub fn verify_power_lemma(spec: &GwaSpec, m: u32) -> Result<bool> {
    let b = power_subalgebra_defelt(spec, m)?;
    let mut sb = b.clone();
    for _ in 0..m {
        sb = spec.sigma.apply(&sb)?;
    }
    let mut mul = Multiplier::new(spec);
    let (x, y) = (spec.x(), spec.y());
    let mut xm = spec.one();
    let mut ym = spec.one();
    for _ in 0..m {
        xm = mul.mul(&xm, &x)?;
        ym = mul.mul(&ym, &y)?;
    }
    Ok(mul.mul(&ym, &xm)? == GwaElement::base(b) && mul.mul(&xm, &ym)? == GwaElement::base(sb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_relations() {
        let w = make_weyl();
        let mut m = Multiplier::new(&w);
        let (x, y) = (w.x(), w.y());
        let yx = m.mul(&y, &x).unwrap();
        let xy = m.mul(&x, &y).unwrap();
        assert_eq!(yx, w.parse_generator("z1").unwrap());
        assert_eq!(xy, w.parse_generator("z1 - 1").unwrap());
        assert_eq!(yx.sub(&xy), w.one());
    }

    #[test]
    fn weyl_shift_and_power() {
        let w = make_weyl();
        let mut m = Multiplier::new(&w);
        let h = w.var(0);
        let xh = m.mul(&w.x(), &h).unwrap();
        assert_eq!(xh, GwaElement::term(1, w.parse_base("z1 - 1").unwrap()));
        let x2 = m.mul(&w.x(), &w.x()).unwrap();
        let x2y = m.mul(&x2, &w.y()).unwrap();
        assert_eq!(x2y, GwaElement::term(1, w.parse_base("z1 - 2").unwrap()));
    }

    #[test]
    fn power_defining_element() {
        let w = make_weyl();
        assert_eq!(power_subalgebra_defelt(&w, 1).unwrap(), *w.a());
        assert_eq!(power_subalgebra_defelt(&w, 2).unwrap(), w.parse_base("z1^2 + z1").unwrap());
        let id = GwaSpec::new(
            Base::polynomial(2),
            Sigma::Plane(PlaneEndo::identity()),
            parse_poly("z1 + 2", RingKind::Polynomial, 2).unwrap(),
        )
        .unwrap();
        let a = id.a().clone();
        assert_eq!(power_subalgebra_defelt(&id, 3).unwrap(), a.pow(3));
        for m in 1..=4 {
            assert!(verify_power_lemma(&w, m).unwrap());
        }
    }

    #[test]
    fn spec_json() {
        let s: GwaSpec = serde_json::from_str(
            r#"{"base": {"kind": "laurent", "n": 2}, "sigma": {"n": 2, "matrix": [[1,1],[0,1]], "alpha": ["1","1"]}, "a": "1 + z1"}"#,
        )
        .unwrap();
        assert_eq!(s.base(), Base::laurent(2));
        let p: GwaSpec = serde_json::from_str(
            r#"{"base": {"kind": "polynomial", "n": 2}, "sigma": {"f": ["z2","z1+z2^2"]}, "a": "z1"}"#,
        )
        .unwrap();
        assert!(matches!(p.sigma_inverse(), Sigma::Plane(_)));
        let w: GwaSpec = serde_json::from_str(serde_json::to_string(&make_weyl()).unwrap().as_str()).unwrap();
        assert_eq!(w, make_weyl());
        let bad = serde_json::from_str::<GwaSpec>(
            r#"{"base": {"kind": "polynomial", "n": 2}, "sigma": {"f": ["z1^2","z2"]}, "a": "z1"}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn heisenberg_constructor() {
        assert!(make_heisenberg(1, int(0), int(1)).is_err());
        let h = make_heisenberg(2, int(1), int(1)).unwrap();
        assert_eq!(*h.a(), MultiPoly::one(RingKind::Laurent, 2));
        let z = make_weyl();
        assert!(z.warnings().is_empty());
        let zero_a = GwaSpec::new(Base::polynomial(1), z.sigma().clone(), MultiPoly::zero(RingKind::Polynomial, 1)).unwrap();
        assert_eq!(zero_a.warnings().len(), 1);
    }
}
