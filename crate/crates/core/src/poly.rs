//! Multivariate polynomials and Laurent polynomials with exact rational
//! coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{pow_i64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Polynomial,
    Laurent,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Polynomial => "polynomial",
            RingKind::Laurent => "laurent",
        }
    }
}

/// Exponent vector `z_1^{e_1} ... z_n^{e_n}`.
///
/// Ordered graded-lexicographically: total degree first, then plain
/// lexicographic comparison with `z1` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[i32; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    /// `z_{index+1}` (zero-based index).
    pub fn var(n: usize, index: usize) -> Self {
        let mut m = Self::one(n);
        m.0[index] = 1;
        m
    }

    pub fn from_exponents(exps: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An element of `k[z_1..z_n]` or `k[z_1^{±1}..z_n^{±1}]`.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    kind: RingKind,
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(kind: RingKind, n: usize) -> Self {
        MultiPoly { kind, n, terms: BTreeMap::new() }
    }

    pub fn one(kind: RingKind, n: usize) -> Self {
        Self::constant(kind, n, Scalar::one())
    }

    pub fn constant(kind: RingKind, n: usize, c: Scalar) -> Self {
        Self::term(kind, n, Monomial::one(n), c)
    }

    /// `z_{index+1}` (zero-based index).
    pub fn var(kind: RingKind, n: usize, index: usize) -> Self {
        Self::term(kind, n, Monomial::var(n, index), Scalar::one())
    }

    pub fn term(kind: RingKind, n: usize, mono: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(mono.arity(), n);
        debug_assert!(kind == RingKind::Laurent || !mono.has_negative());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        MultiPoly { kind, n, terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(
        kind: RingKind,
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if m.arity() != n {
                return Err(Error::ArityMismatch { expected: n, found: m.arity() });
            }
            if kind == RingKind::Polynomial && m.has_negative() {
                return Err(Error::NegativeExponent { pos: 0 });
            }
            *map.entry(m).or_insert_with(Scalar::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { kind, n, terms: map })
    }

    pub(crate) fn from_map_unchecked(kind: RingKind, n: usize, mut terms: BTreeMap<Monomial, Scalar>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { kind, n, terms }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.n))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Largest term in the graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// `Some((mono, c))` when the polynomial is a single nonzero term.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn same_ring(&self, other: &MultiPoly) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::RingMismatch { left: self.kind.name(), right: other.kind.name() });
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, c);
        }
        Ok(MultiPoly { kind: self.kind, n: self.n, terms })
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.kind, self.n));
        }
        if let Some((m, c)) = other.as_single_term() {
            return Ok(self.mul_term(m, c));
        }
        if let Some((m, c)) = self.as_single_term() {
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = c1 * c2;
                match acc.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly { kind: self.kind, n: self.n, terms })
    }

    /// Multiplies by `c * mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.kind, self.n);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.mul(mono), d * c)).collect();
        MultiPoly { kind: self.kind, n: self.n, terms }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.kind, self.n);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect();
        MultiPoly { kind: self.kind, n: self.n, terms }
    }

    fn neg_ref(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MultiPoly { kind: self.kind, n: self.n, terms }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one(self.kind, self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Signed power; negative exponents need a unit (single-term) Laurent element.
    pub fn pow_signed(&self, k: i64) -> Result<MultiPoly> {
        if k >= 0 {
            let k = u32::try_from(k).map_err(|_| Error::ExponentOverflow(k.to_string()))?;
            return Ok(self.pow(k));
        }
        self.unit_inverse()?.pow_signed(-k)
    }

    /// Inverse of a unit `c * z^e`; in a polynomial ring only constants are units.
    pub fn unit_inverse(&self) -> Result<MultiPoly> {
        let (m, c) = self.as_single_term().ok_or(Error::NonInvertibleImage { var: 0 })?;
        if self.kind == RingKind::Polynomial && !m.is_one() {
            return Err(Error::NonInvertibleImage { var: 0 });
        }
        Ok(MultiPoly::term(self.kind, self.n, m.inverse(), c.recip()))
    }

    /// Maximal exponent sum over the support.
    pub fn total_degree(&self) -> Result<Degree> {
        if self.kind == RingKind::Laurent {
            return Err(Error::LaurentTotalDegree);
        }
        Ok(self.degree_unchecked())
    }

    pub(crate) fn degree_unchecked(&self) -> Degree {
        self.terms.keys().map(Monomial::degree).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Largest exponent of `z_{var+1}` in the support.
    pub fn degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exponents()[var]).max()
    }

    /// The homogeneous component of top total degree.
    pub fn leading_form(&self) -> MultiPoly {
        let Some(d) = self.degree_unchecked().finite() else {
            return self.clone();
        };
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MultiPoly { kind: self.kind, n: self.n, terms }
    }

    /// Applies the ring map `z_i -> images[i]`.
    ///
    /// The result lives in the ring of the images. A negatively powered
    /// variable must map to a unit monomial.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: images.len() });
        }
        let (kind, m) = match images.first() {
            Some(f) => (f.kind, f.n),
            None => return Ok(self.clone()),
        };
        for f in images {
            if f.kind != kind {
                return Err(Error::RingMismatch { left: kind.name(), right: f.kind.name() });
            }
            if f.n != m {
                return Err(Error::ArityMismatch { expected: m, found: f.n });
            }
        }
        // Powers are memoised per variable and sign.
        let mut pos: Vec<Vec<MultiPoly>> = images.iter().map(|f| vec![MultiPoly::one(kind, m), f.clone()]).collect();
        let mut neg: Vec<Option<Vec<MultiPoly>>> = vec![None; self.n];
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut prod = MultiPoly::constant(kind, m, c.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = if e > 0 {
                    power_cached(&mut pos[i], e as usize)
                } else {
                    if neg[i].is_none() {
                        let inv = images[i].unit_inverse().map_err(|_| Error::NonInvertibleImage { var: i + 1 })?;
                        neg[i] = Some(vec![MultiPoly::one(kind, m), inv]);
                    }
                    power_cached(neg[i].as_mut().expect("initialised above"), (-e) as usize)
                };
                prod = &prod * &factor;
            }
            for (pm, pc) in prod.terms {
                add_term_owned(&mut acc, pm, pc);
            }
        }
        Ok(MultiPoly::from_map_unchecked(kind, m, acc))
    }

    /// Re-embeds the polynomial in a ring of the given kind (same arity).
    pub fn with_kind(&self, kind: RingKind) -> Result<MultiPoly> {
        if kind == RingKind::Polynomial && self.terms.keys().any(Monomial::has_negative) {
            return Err(Error::NegativeExponent { pos: 0 });
        }
        Ok(MultiPoly { kind, n: self.n, terms: self.terms.clone() })
    }

}

fn power_cached(cache: &mut Vec<MultiPoly>, e: usize) -> MultiPoly {
    while cache.len() <= e {
        let next = &cache[cache.len() - 1] * &cache[1];
        cache.push(next);
    }
    cache[e].clone()
}

fn add_term(map: &mut BTreeMap<Monomial, Scalar>, m: &Monomial, c: &Scalar) {
    match map.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(m);
            }
        }
        None => {
            if !c.is_zero() {
                map.insert(m.clone(), c.clone());
            }
        }
    }
}

fn add_term_owned(map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    match map.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
    }
}

/// `coeff * z^exps` evaluated as a signed power product, used by automorphism code.
pub fn monomial_power_product(alpha: &[Scalar], exps: &[i64]) -> Scalar {
    alpha.iter().zip(exps).fold(Scalar::one(), |acc, (a, &e)| acc * pow_i64(a, e))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

// Operator forms panic on ring mismatch; use the `try_*` methods on untrusted input.
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::{frac, int};

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, RingKind::Polynomial, 2).unwrap()
    }

    fn l(s: &str) -> MultiPoly {
        parse_poly(s, RingKind::Laurent, 2).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("z1 + z2") * &p("z1 - z2"), p("z1^2 - z2^2"));
    }

    #[test]
    fn zero_absorbs() {
        assert!((&p("z1 + 3*z2^4") * &MultiPoly::zero(RingKind::Polynomial, 2)).is_zero());
    }

    #[test]
    fn laurent_unit_cancels() {
        assert_eq!(&l("z1^-1") * &l("z1"), MultiPoly::one(RingKind::Laurent, 2));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = p("z1");
        assert!(matches!(a.try_add(&l("z1")), Err(Error::RingMismatch { .. })));
        let b = parse_poly("z1", RingKind::Polynomial, 3).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn total_degrees() {
        assert_eq!(p("z1*z2^2 + z1^3").total_degree().unwrap(), Degree::Finite(3));
        assert_eq!(MultiPoly::zero(RingKind::Polynomial, 2).total_degree().unwrap(), Degree::NegInfinity);
        assert_eq!(p("5").total_degree().unwrap(), Degree::Finite(0));
        assert_eq!(l("z1").total_degree(), Err(Error::LaurentTotalDegree));
        assert!(Degree::NegInfinity < Degree::Finite(-5));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(p("z1 + z2").substitute(&[p("z2"), p("z1")]).unwrap(), p("z1 + z2"));
        assert_eq!(p("z1^2").substitute(&[p("z1 + 1"), p("z2")]).unwrap(), p("z1^2 + 2*z1 + 1"));
        let img = l("z1^-1").substitute(&[l("2*z2"), l("z1")]).unwrap();
        assert_eq!(img, l("1/2*z2^-1"));
    }

    #[test]
    fn substitution_rejects_non_units() {
        let err = l("z1^-1").substitute(&[l("z1 + z2"), l("z2")]).unwrap_err();
        assert_eq!(err, Error::NonInvertibleImage { var: 1 });
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(&[0, 2]);
        let b = Monomial::from_exponents(&[1, 0]);
        let c = Monomial::from_exponents(&[1, 1]);
        assert!(b < a && a < c);
        assert_eq!(p("z1 + z2^2 + 3").leading_term().unwrap().1, &int(1));
        assert_eq!(p("z1*z2 + z2^2 + 3*z1").leading_form(), p("z1*z2 + z2^2"));
    }

    #[test]
    fn signed_powers() {
        assert_eq!(l("2*z1").pow_signed(-2).unwrap(), l("1/4*z1^-2"));
        assert_eq!(p("z1 + 1").pow(3), p("z1^3 + 3*z1^2 + 3*z1 + 1"));
        assert_eq!(monomial_power_product(&[int(2), int(3)], &[-1, 2]), frac(9, 2));
    }
}
