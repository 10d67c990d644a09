//! Factorization of plane automorphisms into affine and elementary maps by
//! degree reduction.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{deg, only_z2, pvar, AffineMap, PlaneEndo};
use crate::error::{Error, Result};
use crate::parse::format_poly;
use crate::poly::{Degree, Monomial, MultiPoly, RingKind};
use crate::scalar::Scalar;

pub const DEFAULT_STEP_CAP: usize = 64;

/// Why a pair `(f1, f2)` was rejected as an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    ZeroComponent { component: usize },
    /// One component is constant while the other has degree above one.
    ConstantComponent { component: usize },
    DegreeNotDivisible { larger: i64, smaller: i64 },
    /// The leading form of the larger component is not a scalar multiple of
    /// the `k`-th power of the other leading form.
    LeadingFormMismatch { component: usize, k: i64, leading_form: String },
    SingularLinearPart,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::ZeroComponent { component } => write!(f, "f{component} is zero"),
            Obstruction::ConstantComponent { component } => {
                write!(f, "f{component} is constant while the other component is nonlinear")
            }
            Obstruction::DegreeNotDivisible { larger, smaller } => {
                write!(f, "degree {smaller} does not divide degree {larger}")
            }
            Obstruction::LeadingFormMismatch { component, k, leading_form } => write!(
                f,
                "leading form {leading_form} of f{component} is not a multiple of the {k}-th power of the other leading form"
            ),
            Obstruction::SingularLinearPart => f.write_str("linear part of the terminal affine map is singular"),
        }
    }
}

/// One generator of the tame group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TameFactor {
    Affine(AffineMap),
    /// `(z1 + h(z2), z2)`.
    Elementary(MultiPoly),
    /// `π = (z2, z1)`.
    Swap,
}

impl TameFactor {
    pub fn elementary(h: MultiPoly) -> Result<Self> {
        if h.kind() != RingKind::Polynomial || h.arity() != 2 || !only_z2(&h) {
            return Err(Error::invalid("elementary shear must be a polynomial in z2 alone"));
        }
        Ok(TameFactor::Elementary(h))
    }

    pub fn to_endo(&self) -> PlaneEndo {
        match self {
            TameFactor::Affine(a) => a.to_endo(),
            TameFactor::Elementary(h) => {
                PlaneEndo::new(pvar(0).try_add(h).expect("same ring"), pvar(1)).expect("arity 2")
            }
            TameFactor::Swap => PlaneEndo::swap(),
        }
    }

    pub fn inverse(&self) -> TameFactor {
        match self {
            TameFactor::Affine(a) => TameFactor::Affine(a.inverse()),
            TameFactor::Elementary(h) => TameFactor::Elementary(-h),
            TameFactor::Swap => TameFactor::Swap,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            TameFactor::Affine(_) => "affine",
            TameFactor::Elementary(_) => "elementary",
            TameFactor::Swap => "swap",
        }
    }
}

impl Serialize for TameFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let e = self.to_endo();
        let mut st = s.serialize_struct("TameFactor", 2)?;
        st.serialize_field("kind", self.kind_name())?;
        st.serialize_field("f", &[format_poly(e.f1()), format_poly(e.f2())])?;
        st.end()
    }
}

/// `F1 ∘ F2 ∘ ⋯ ∘ Fk`; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TameWord {
    factors: Vec<TameFactor>,
}

impl TameWord {
    pub fn new(factors: Vec<TameFactor>) -> Self {
        TameWord { factors }
    }

    pub fn identity() -> Self {
        TameWord::default()
    }

    pub fn factors(&self) -> &[TameFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn compose(&self) -> PlaneEndo {
        self.factors.iter().fold(PlaneEndo::identity(), |acc, f| acc.compose(&f.to_endo()))
    }

    pub fn inverse(&self) -> TameWord {
        TameWord { factors: self.factors.iter().rev().map(TameFactor::inverse).collect() }
    }

    /// The word for `self ∘ other`.
    pub fn then(&self, other: &TameWord) -> TameWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TameWord { factors }
    }
}

impl fmt::Display for TameWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                TameFactor::Swap => "pi".to_string(),
                other => format!("{}{}", other.kind_name(), other.to_endo()),
            })
            .collect();
        f.write_str(&parts.join(" o "))
    }
}

pub fn tame_decompose(sigma: &PlaneEndo) -> Result<TameWord> {
    tame_decompose_with_cap(sigma, DEFAULT_STEP_CAP)
}

/// Writes `σ = A ∘ F_r ∘ ⋯ ∘ F_1` by repeatedly cancelling the leading form
/// of the higher-degree component against a power of the other one.
pub fn tame_decompose_with_cap(sigma: &PlaneEndo, cap: usize) -> Result<TameWord> {
    let mut cur = sigma.clone();
    let mut peeled: Vec<Vec<TameFactor>> = Vec::new();
    let mut count = 0usize;
    loop {
        let [d1, d2] = [deg(cur.f1()), deg(cur.f2())];
        for (i, d) in [d1, d2].iter().enumerate() {
            if *d == Degree::NegInfinity {
                return Err(Error::NotAnAutomorphism(Obstruction::ZeroComponent { component: i + 1 }));
            }
        }
        let (d1, d2) = (d1.finite().unwrap_or(0), d2.finite().unwrap_or(0));
        if d1.max(d2) <= 1 {
            let a = cur.as_affine().ok_or(Error::NotAnAutomorphism(Obstruction::SingularLinearPart))?;
            let mut factors = vec![TameFactor::Affine(a)];
            factors.extend(peeled.into_iter().rev().flatten());
            return Ok(TameWord { factors });
        }
        let step = if d1 > d2 {
            reduce(&cur, 0)
        } else if d2 > d1 {
            reduce(&cur, 1)
        } else {
            equal_degree_step(&cur)
        };
        let (next, group) = step.map_err(Error::NotAnAutomorphism)?;
        count += group.len();
        if count > cap {
            return Err(Error::StepCapExceeded { cap });
        }
        cur = next;
        peeled.push(group);
    }
}

fn equal_degree_step(cur: &PlaneEndo) -> std::result::Result<(PlaneEndo, Vec<TameFactor>), Obstruction> {
    let first = match reduce(cur, 0) {
        Ok(r) => return Ok(r),
        Err(e) => e,
    };
    if let Ok(r) = reduce(cur, 1) {
        return Ok(r);
    }
    // One affine pre-mix round: σ = (σ ∘ (z1 + z2, z2)) ∘ (z1 - z2, z2).
    let mix = PlaneEndo::parse("z1 + z2", "z2").expect("fixed text");
    let unmix = PlaneEndo::parse("z1 - z2", "z2").expect("fixed text").as_affine().expect("invertible");
    let mixed = cur.compose(&mix);
    for a in [0, 1] {
        if let Ok((next, mut group)) = reduce(&mixed, a) {
            group.push(TameFactor::Affine(unmix.clone()));
            return Ok((next, group));
        }
    }
    Err(first)
}

/// Cancels the leading form of component `a` against the other component.
/// Returns `σ'` and the factors `G` with `σ = σ' ∘ G`.
fn reduce(cur: &PlaneEndo, a: usize) -> std::result::Result<(PlaneEndo, Vec<TameFactor>), Obstruction> {
    let b = 1 - a;
    let (fa, fb) = (&cur.components()[a], &cur.components()[b]);
    let da = deg(fa).finite().unwrap_or(0);
    let db = deg(fb).finite().unwrap_or(0);
    if db == 0 {
        return Err(Obstruction::ConstantComponent { component: b + 1 });
    }
    if da % db != 0 {
        return Err(Obstruction::DegreeNotDivisible { larger: da, smaller: db });
    }
    let k = da / db;
    let lfa = fa.leading_form();
    let lfb_k = fb.leading_form().pow(k as u32);
    let (_, ca) = lfa.leading_term().expect("nonzero");
    let (_, cb) = lfb_k.leading_term().expect("nonzero");
    let c = ca / cb;
    if lfb_k.scale(&c) != lfa {
        return Err(Obstruction::LeadingFormMismatch { component: a + 1, k, leading_form: format_poly(&lfa) });
    }
    let reduced = fa.try_sub(&fb.pow(k as u32).scale(&c)).expect("same ring");
    let shear = MultiPoly::term(RingKind::Polynomial, 2, Monomial::from_exponents(&[0, k as i32]), c);
    let elem = TameFactor::Elementary(shear);
    if a == 0 {
        let next = PlaneEndo::new(reduced, fb.clone()).expect("arity 2");
        Ok((next, vec![elem]))
    } else {
        // (z1, z2 + c z1^k) = π ∘ (z1 + c z2^k, z2) ∘ π.
        let next = PlaneEndo::new(fb.clone(), reduced).expect("arity 2");
        Ok((next, vec![TameFactor::Swap, elem, TameFactor::Swap]))
    }
}

/// Linear coefficient matrix and translation of an affine endomorphism,
/// without requiring invertibility.
pub(crate) fn affine_parts(e: &PlaneEndo) -> ([[Scalar; 2]; 2], [Scalar; 2]) {
    let v = |p: &MultiPoly, i: usize| p.coeff(&Monomial::var(2, i));
    (
        [[v(e.f1(), 0), v(e.f1(), 1)], [v(e.f2(), 0), v(e.f2(), 1)]],
        [e.f1().constant_term(), e.f2().constant_term()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn endo(a: &str, b: &str) -> PlaneEndo {
        PlaneEndo::parse(a, b).unwrap()
    }

    #[test]
    fn translation_is_one_affine_factor() {
        let w = tame_decompose(&endo("z1 + 1", "z2")).unwrap();
        assert_eq!(w.len(), 1);
        assert!(matches!(w.factors()[0], TameFactor::Affine(_)));
        assert_eq!(w.compose(), endo("z1 + 1", "z2"));
    }

    #[test]
    fn quadratic_shear_with_swap() {
        let s = endo("z2", "z1 + z2^2");
        let w = tame_decompose(&s).unwrap();
        assert_eq!(w.compose(), s);
        assert!(w.factors().iter().any(|f| matches!(f, TameFactor::Elementary(_))));
        assert!(w.factors().iter().any(|f| matches!(f, TameFactor::Swap) || matches!(f, TameFactor::Affine(_))));
    }

    #[test]
    fn rejects_non_automorphisms() {
        assert!(matches!(
            tame_decompose(&endo("z1^2", "z2")),
            Err(Error::NotAnAutomorphism(Obstruction::LeadingFormMismatch { .. }))
        ));
        assert!(matches!(
            tame_decompose(&endo("z1 + z2", "2*z1 + 2*z2")),
            Err(Error::NotAnAutomorphism(Obstruction::SingularLinearPart))
        ));
        assert!(matches!(
            tame_decompose(&endo("z1^3", "z2^2")),
            Err(Error::NotAnAutomorphism(Obstruction::DegreeNotDivisible { larger: 3, smaller: 2 }))
        ));
        assert!(matches!(
            tame_decompose(&endo("z1^2", "1")),
            Err(Error::NotAnAutomorphism(Obstruction::ConstantComponent { component: 2 }))
        ));
        assert!(matches!(
            tame_decompose(&endo("0", "z2")),
            Err(Error::NotAnAutomorphism(Obstruction::ZeroComponent { component: 1 }))
        ));
    }

    #[test]
    fn equal_degree_components() {
        let s = endo("z1 + z2 + z2^2", "z1 + z2^2");
        let w = tame_decompose(&s).unwrap();
        assert_eq!(w.compose(), s);
    }

    #[test]
    fn step_cap() {
        let s = endo("z1 + z2^2", "z2").compose(&endo("z2", "z1")).compose(&endo("z1 + z2^3", "z2"));
        assert!(matches!(tame_decompose_with_cap(&s, 1), Err(Error::StepCapExceeded { cap: 1 })));
        assert_eq!(tame_decompose(&s).unwrap().compose(), s);
    }

    #[test]
    fn word_inverse() {
        let s = endo("z2 + z1^3", "z1").compose(&endo("2*z1 + z2^2", "z2 - 1"));
        let w = tame_decompose(&s).unwrap();
        assert!(w.inverse().compose().compose(&s).is_identity());
    }
}
