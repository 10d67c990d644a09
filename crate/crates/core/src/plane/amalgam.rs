//! Words in the amalgamated product `A *_C B` of the affine group `A` and the
//! triangular group `B = {(α z1 + β(z2), u z2 + v)}` over `C = A ∩ B`.
//!
//! A reduced word of length at most one up to cyclic reduction means `σ` is
//! conjugate into a factor; otherwise the cyclically reduced word alternates
//! and can be rewritten as `τ1 π τ2 π ⋯ τs π` with every `deg β_i >= 2`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::tame::affine_parts;
use super::{tame_decompose, AffineMap, PlaneEndo, TameFactor, TameWord, TriangularAuto};
use crate::error::Result;
use crate::poly::Degree;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Group {
    Id,
    /// Affine and triangular.
    C,
    /// Affine, not triangular.
    A,
    /// Triangular, not affine.
    B,
}

#[derive(Clone, Debug)]
struct Syllable {
    map: PlaneEndo,
    group: Group,
}

fn classify(map: PlaneEndo) -> Syllable {
    let group = if map.is_identity() {
        Group::Id
    } else if let Some(a) = map.as_affine() {
        if a.is_triangular() {
            Group::C
        } else {
            Group::A
        }
    } else if map.as_triangular().is_some() {
        Group::B
    } else {
        unreachable!("product of same-factor syllables left both factors: {map}")
    };
    Syllable { map, group }
}

fn mergeable(g: Group, h: Group) -> bool {
    g == h || g == Group::C || h == Group::C
}

fn push_reduced(stack: &mut Vec<Syllable>, s: Syllable) {
    if s.group == Group::Id {
        return;
    }
    stack.push(s);
    while stack.len() >= 2 {
        let n = stack.len();
        if !mergeable(stack[n - 2].group, stack[n - 1].group) {
            break;
        }
        let right = stack.pop().expect("len >= 2");
        let left = stack.pop().expect("len >= 2");
        let prod = classify(left.map.compose(&right.map));
        if prod.group != Group::Id {
            stack.push(prod);
        }
    }
}

fn reduce_word(word: &TameWord) -> Vec<Syllable> {
    let mut stack = Vec::new();
    for f in word.factors() {
        push_reduced(&mut stack, classify(f.to_endo()));
    }
    stack
}

fn factors_of(map: &PlaneEndo) -> Vec<TameFactor> {
    if let Some(a) = map.as_affine() {
        vec![TameFactor::Affine(a)]
    } else if let Some(t) = map.as_triangular() {
        t.to_factors()
    } else {
        tame_decompose(map).expect("syllables are automorphisms").factors().to_vec()
    }
}

fn word_of(maps: &[PlaneEndo]) -> TameWord {
    TameWord::new(maps.iter().flat_map(factors_of).collect())
}

/// `σ` written as `c ∘ T ∘ c⁻¹` for a triangular (or, over the rationals,
/// possibly only affine) `T`, where `c` is the conjugator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularCertificate {
    pub conjugator: TameWord,
    pub form: TriangularForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "map", rename_all = "kebab-case")]
pub enum TriangularForm {
    Triangular(TriangularAuto),
    /// A linear map with no rational eigenvector: it lies in the affine
    /// factor but is not triangular by a conjugation defined over `Q`.
    AffineOnly(#[serde(serialize_with = "ser_affine")] AffineMap),
}

fn ser_affine<S: serde::Serializer>(a: &AffineMap, s: S) -> std::result::Result<S::Ok, S::Error> {
    let e = a.to_endo();
    [crate::parse::format_poly(e.f1()), crate::parse::format_poly(e.f2())].serialize(s)
}

impl TriangularForm {
    pub fn to_endo(&self) -> PlaneEndo {
        match self {
            TriangularForm::Triangular(t) => t.to_endo(),
            TriangularForm::AffineOnly(a) => a.to_endo(),
        }
    }
}

impl TriangularCertificate {
    /// `c⁻¹ ∘ σ ∘ c` equals the stated form.
    pub fn verify(&self, sigma: &PlaneEndo) -> bool {
        conjugate(&self.conjugator, sigma) == self.form.to_endo()
    }
}

/// `σ` conjugate to `τ1 ∘ π ∘ τ2 ∘ π ∘ ⋯ ∘ τs ∘ π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaneForm {
    pub conjugator: TameWord,
    pub s: usize,
    pub taus: Vec<TriangularAuto>,
    pub degrees: Vec<i64>,
}

impl LaneForm {
    pub fn normal_form(&self) -> PlaneEndo {
        let pi = PlaneEndo::swap();
        self.taus.iter().fold(PlaneEndo::identity(), |acc, t| acc.compose(&t.to_endo()).compose(&pi))
    }

    pub fn degree_product(&self) -> i64 {
        self.degrees.iter().product()
    }

    pub fn verify(&self, sigma: &PlaneEndo) -> bool {
        self.s == self.taus.len()
            && self.degrees.iter().all(|&d| d >= 2)
            && self.taus.iter().zip(&self.degrees).all(|(t, &d)| t.degree() == Degree::Finite(d))
            && conjugate(&self.conjugator, sigma) == self.normal_form()
    }
}

/// `c⁻¹ ∘ σ ∘ c`.
pub fn conjugate(c: &TameWord, sigma: &PlaneEndo) -> PlaneEndo {
    c.inverse().compose().compose(sigma).compose(&c.compose())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CyclicReduction {
    Triangularizable(TriangularCertificate),
    Lane(LaneForm),
}

/// Reduces the word in `A *_C B`, then conjugates boundary syllables to the
/// other end until the word is cyclically reduced.
pub fn cyclic_reduce(word: &TameWord) -> CyclicReduction {
    let mut syl = reduce_word(word);
    let mut conj: Vec<PlaneEndo> = Vec::new();
    while syl.len() >= 2 && mergeable(syl[0].group, syl[syl.len() - 1].group) {
        // δ⁻¹ (δ w) δ = w δ.
        let first = syl.remove(0);
        conj.push(first.map.clone());
        let mut stack = Vec::with_capacity(syl.len() + 1);
        for s in syl.into_iter().chain(std::iter::once(first)) {
            push_reduced(&mut stack, s);
        }
        syl = stack;
    }
    match syl.len() {
        0 => CyclicReduction::Triangularizable(TriangularCertificate {
            conjugator: word_of(&conj),
            form: TriangularForm::Triangular(PlaneEndo::identity().as_triangular().expect("identity")),
        }),
        1 => single_syllable(syl.pop().expect("len 1"), conj),
        _ => lane(syl, conj),
    }
}

fn single_syllable(s: Syllable, mut conj: Vec<PlaneEndo>) -> CyclicReduction {
    if let Some(t) = s.map.as_triangular() {
        return CyclicReduction::Triangularizable(TriangularCertificate {
            conjugator: word_of(&conj),
            form: TriangularForm::Triangular(t),
        });
    }
    let a = s.map.as_affine().expect("single syllable is affine or triangular");
    match eigen_conjugator(&a) {
        Some(delta) => {
            let d = delta.to_endo();
            let t = delta.inverse().to_endo().compose(&s.map).compose(&d);
            conj.push(d);
            let t = t.as_triangular().expect("eigenvector conjugation triangularizes");
            CyclicReduction::Triangularizable(TriangularCertificate {
                conjugator: word_of(&conj),
                form: TriangularForm::Triangular(t),
            })
        }
        None => CyclicReduction::Triangularizable(TriangularCertificate {
            conjugator: word_of(&conj),
            form: TriangularForm::AffineOnly(a),
        }),
    }
}

fn rational_sqrt(q: &Scalar) -> Option<Scalar> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Scalar::new(rn, rd))
}

/// An affine `δ` with `δ(z2) = p z1 + q z2` for a rational left eigenvector
/// `(p, q)` of the linear part, so that `δ⁻¹ a δ` fixes the line of `z2`.
fn eigen_conjugator(a: &AffineMap) -> Option<AffineMap> {
    let l = a.linear();
    let tr = &l[0][0] + &l[1][1];
    let disc = &tr * &tr - a.det() * Scalar::from_integer(BigInt::from(4));
    let root = rational_sqrt(&disc)?;
    let lambda = (tr + root) / Scalar::from_integer(BigInt::from(2));
    let (p, q) = if !l[1][0].is_zero() || l[0][0] != lambda {
        (l[1][0].clone(), &lambda - &l[0][0])
    } else if !l[0][1].is_zero() || l[1][1] != lambda {
        (&l[1][1] - &lambda, -l[0][1].clone())
    } else {
        (Scalar::zero(), Scalar::from_integer(1.into()))
    };
    let (one, zero) = (Scalar::from_integer(1.into()), Scalar::zero());
    let first = if !q.is_zero() { [one, zero.clone()] } else { [zero.clone(), one] };
    AffineMap::new([first, [p, q]], [zero.clone(), zero]).ok()
}

/// `a = c ∘ π ∘ c'` with `c, c' ∈ C`, for affine `a` outside `C`.
fn bruhat(a: &PlaneEndo) -> (PlaneEndo, PlaneEndo) {
    let (l, t) = affine_parts(a);
    debug_assert!(!l[1][0].is_zero());
    let det = &l[0][0] * &l[1][1] - &l[0][1] * &l[1][0];
    let zero = Scalar::zero();
    let one = Scalar::from_integer(1.into());
    let c = AffineMap::new([[l[1][0].clone(), l[1][1].clone()], [zero.clone(), one.clone()]], [t[1].clone(), zero.clone()])
        .expect("l21 != 0");
    let b = &l[0][0] / &l[1][0];
    let c2 = AffineMap::new([[-det / &l[1][0], b.clone()], [zero.clone(), one]], [&t[0] - &b * &t[1], zero])
        .expect("det != 0");
    let (c, c2) = (c.to_endo(), c2.to_endo());
    debug_assert_eq!(c.compose(&PlaneEndo::swap()).compose(&c2), *a);
    (c, c2)
}

fn lane(mut syl: Vec<Syllable>, mut conj: Vec<PlaneEndo>) -> CyclicReduction {
    debug_assert!(syl.len().is_multiple_of(2));
    if syl[0].group == Group::A {
        let first = syl.remove(0);
        conj.push(first.map.clone());
        syl.push(first);
    }
    // b1 a1 b2 a2 ⋯ bs as with a_i = c_i π c_i'.
    let s = syl.len() / 2;
    let splits: Vec<(PlaneEndo, PlaneEndo)> = (0..s).map(|i| bruhat(&syl[2 * i + 1].map)).collect();
    let mut taus = Vec::with_capacity(s);
    for i in 0..s {
        let before = &splits[(i + s - 1) % s].1;
        let tau = before.compose(&syl[2 * i].map).compose(&splits[i].0);
        taus.push(tau.as_triangular().expect("C B C is triangular"));
    }
    let last = &splits[s - 1].1;
    conj.push(last.as_affine().expect("affine").inverse().to_endo());
    let degrees = taus.iter().map(|t| t.degree().finite().unwrap_or(0)).collect();
    CyclicReduction::Lane(LaneForm { conjugator: word_of(&conj), s, taus, degrees })
}

/// Decides whether `σ` is conjugate to a triangular automorphism.
///
/// Affine inputs without a rational eigenvector still count as
/// triangularizable: they sit in the affine factor, and conjugation over an
/// extension field triangularizes them.
pub fn is_triangularizable(sigma: &PlaneEndo) -> Result<(bool, CyclicReduction)> {
    let r = cyclic_reduce(&tame_decompose(sigma)?);
    Ok((matches!(r, CyclicReduction::Triangularizable(_)), r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GkVerdictPlane {
    Three { certificate: TriangularCertificate },
    Infinity { lane: LaneForm },
}

impl GkVerdictPlane {
    pub fn is_three(&self) -> bool {
        matches!(self, GkVerdictPlane::Three { .. })
    }

    pub fn summary(&self) -> &'static str {
        match self {
            GkVerdictPlane::Three { .. } => "gkdim = 3",
            GkVerdictPlane::Infinity { .. } => "gkdim = infinity",
        }
    }

    pub fn verify(&self, sigma: &PlaneEndo) -> bool {
        match self {
            GkVerdictPlane::Three { certificate } => certificate.verify(sigma),
            GkVerdictPlane::Infinity { lane } => lane.verify(sigma),
        }
    }
}

/// `GKdim P2(σ, a)` is 3 when `σ` is triangularizable and infinite otherwise,
/// whatever `a` is.
pub fn classify_gk_plane(sigma: &PlaneEndo) -> Result<GkVerdictPlane> {
    Ok(match is_triangularizable(sigma)?.1 {
        CyclicReduction::Triangularizable(certificate) => GkVerdictPlane::Three { certificate },
        CyclicReduction::Lane(lane) => GkVerdictPlane::Infinity { lane },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::iterate_degrees;

    fn endo(a: &str, b: &str) -> PlaneEndo {
        PlaneEndo::parse(a, b).unwrap()
    }

    #[test]
    fn triangular_input_needs_no_conjugator() {
        let s = endo("z1 + z2^3", "z2");
        match cyclic_reduce(&tame_decompose(&s).unwrap()) {
            CyclicReduction::Triangularizable(cert) => {
                assert!(cert.conjugator.compose().is_identity());
                assert!(cert.verify(&s));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadratic_henon_is_lane() {
        let s = endo("z2", "z1 + z2^2");
        let CyclicReduction::Lane(lane) = cyclic_reduce(&tame_decompose(&s).unwrap()) else {
            panic!("expected a Lane form");
        };
        assert_eq!(lane.s, 1);
        assert_eq!(lane.degrees, vec![2]);
        assert!(lane.verify(&s));
        let degs = iterate_degrees(&s, 4);
        assert_eq!(degs[1], vec![1, 2, 4, 8, 16]);
        assert!(!is_triangularizable(&s).unwrap().0);
        assert_eq!(classify_gk_plane(&s).unwrap().summary(), "gkdim = infinity");
    }

    #[test]
    fn swap_is_triangularizable_over_q() {
        let s = endo("z2", "z1");
        let (ok, r) = is_triangularizable(&s).unwrap();
        assert!(ok);
        let CyclicReduction::Triangularizable(cert) = r else { unreachable!() };
        assert!(matches!(cert.form, TriangularForm::Triangular(_)));
        assert!(cert.verify(&s));
        // The conjugator sends z2 to a multiple of z1 ± z2.
        let c = cert.conjugator.compose();
        let img = c.f2().clone();
        let a = img.coeff(&crate::poly::Monomial::var(2, 0));
        let b = img.coeff(&crate::poly::Monomial::var(2, 1));
        assert!(a == b || a == -b.clone());
    }

    #[test]
    fn rotation_without_rational_eigenvector() {
        let s = endo("-z2", "z1");
        let (ok, r) = is_triangularizable(&s).unwrap();
        assert!(ok);
        let CyclicReduction::Triangularizable(cert) = r else { unreachable!() };
        assert!(matches!(cert.form, TriangularForm::AffineOnly(_)));
        assert!(cert.verify(&s));
    }

    #[test]
    fn conjugated_triangular_is_three() {
        let tau = endo("2*z1 + z2^3 - z2", "z2 + 1");
        let delta = endo("z2", "z1 + z2^2").compose(&endo("z1 - 3*z2", "2*z2 + 1"));
        let dinv = crate::plane::plane_inverse(&delta).unwrap();
        let sigma = dinv.compose(&tau).compose(&delta);
        let v = classify_gk_plane(&sigma).unwrap();
        assert!(v.is_three());
        assert!(v.verify(&sigma));
    }

    #[test]
    fn lane_with_two_blocks() {
        let pi = PlaneEndo::swap();
        let t1 = endo("z1 + z2^2", "z2");
        let t2 = endo("-z1 + z2^3 + 1", "2*z2 - 1");
        let sigma = t1.compose(&pi).compose(&t2).compose(&pi);
        let v = classify_gk_plane(&sigma).unwrap();
        let GkVerdictPlane::Infinity { lane } = &v else { panic!("expected infinity") };
        assert_eq!(lane.s, 2);
        let mut d = lane.degrees.clone();
        d.sort();
        assert_eq!(d, vec![2, 3]);
        assert!(v.verify(&sigma));
        let delta = endo("z1 + z2", "z2 - 2").compose(&endo("z1 + z2^2", "z2"));
        let conj = crate::plane::plane_inverse(&delta).unwrap().compose(&sigma).compose(&delta);
        let v2 = classify_gk_plane(&conj).unwrap();
        assert!(!v2.is_three());
        assert!(v2.verify(&conj));
    }
}
