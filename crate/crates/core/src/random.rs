//! Seeded generators for test fixtures and acceptance runs.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gwa::{Base, GwaElement, GwaSpec, Sigma};
use crate::laurent::LaurentAuto;
use crate::matrix::{IntMatrix, UPoly};
use crate::plane::{AffineMap, PlaneEndo, TameFactor, TameWord, TriangularAuto};
use crate::poly::{Monomial, MultiPoly, RingKind};
use crate::scalar::{frac, int, Scalar};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero `p/q` with `|p|, q <= height`.
pub fn nonzero_rational(rng: &mut Rand, height: i64) -> Scalar {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-height..=height);
    }
    frac(p, rng.gen_range(1..=height))
}

pub fn nonzero_int(rng: &mut Rand, height: i64) -> Scalar {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-height..=height);
    }
    int(p)
}

/// Up to `max_terms` terms of total degree `<= max_deg`; may be zero.
pub fn poly(rng: &mut Rand, n: usize, max_deg: u32, height: i64, max_terms: usize) -> MultiPoly {
    let terms: Vec<(Monomial, Scalar)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let d = rng.gen_range(0..=max_deg);
            let mut e = vec![0i32; n];
            for _ in 0..d {
                if n > 0 {
                    e[rng.gen_range(0..n)] += 1;
                }
            }
            (Monomial::from_exponents(&e), nonzero_rational(rng, height))
        })
        .collect();
    MultiPoly::from_terms(RingKind::Polynomial, n, terms).expect("valid terms")
}

pub fn nonzero_poly(rng: &mut Rand, n: usize, max_deg: u32, height: i64, max_terms: usize) -> MultiPoly {
    loop {
        let p = poly(rng, n, max_deg, height, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Laurent polynomial with exponents in `[-max_exp, max_exp]`.
pub fn laurent_poly(rng: &mut Rand, n: usize, max_exp: i32, height: i64, max_terms: usize) -> MultiPoly {
    let terms: Vec<(Monomial, Scalar)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let e: Vec<i32> = (0..n).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
            (Monomial::from_exponents(&e), nonzero_rational(rng, height))
        })
        .collect();
    MultiPoly::from_terms(RingKind::Laurent, n, terms).expect("valid terms")
}

fn poly_in_z2(rng: &mut Rand, min_deg: u32, max_deg: u32, height: i64) -> MultiPoly {
    let top = rng.gen_range(min_deg..=max_deg);
    let mut terms = vec![(Monomial::from_exponents(&[0, top as i32]), nonzero_int(rng, height))];
    for k in 0..top {
        if rng.gen_bool(0.5) {
            terms.push((Monomial::from_exponents(&[0, k as i32]), nonzero_int(rng, height)));
        }
    }
    MultiPoly::from_terms(RingKind::Polynomial, 2, terms).expect("valid terms")
}

/// `(λ1 z1 + g1(z2), λ2 z2 + c)` with `deg g1 <= max_deg`.
pub fn triangular(rng: &mut Rand, max_deg: u32) -> TriangularAuto {
    let g1 = poly_in_z2(rng, 0, max_deg, 2);
    let l1 = nonzero_int(rng, 2);
    let l2 = nonzero_int(rng, 2);
    let c = int(rng.gen_range(-2..=2));
    TriangularAuto::new(l1, g1, l2, c).expect("nonzero scalars")
}

/// Invertible affine map with small integer entries.
pub fn affine(rng: &mut Rand) -> AffineMap {
    loop {
        let mut r = || int(rng.gen_range(-2..=2));
        let lin = [[r(), r()], [r(), r()]];
        let trans = [r(), r()];
        if let Ok(a) = AffineMap::new(lin, trans) {
            return a;
        }
    }
}

/// A word of `1..=max_factors` affine, shear and swap factors.
pub fn tame_word(rng: &mut Rand, max_factors: usize, max_deg: u32) -> TameWord {
    let k = rng.gen_range(1..=max_factors);
    let factors = (0..k)
        .map(|_| match rng.gen_range(0..3) {
            0 => TameFactor::Affine(affine(rng)),
            1 => TameFactor::Elementary(poly_in_z2(rng, 1, max_deg, 2)),
            _ => TameFactor::Swap,
        })
        .collect();
    TameWord::new(factors)
}

/// `τ_1 π τ_2 π ⋯ τ_s π` with shears of degree `d_i > 1`, conjugated by a
/// random affine map.
pub fn lane(rng: &mut Rand, degrees: &[u32]) -> PlaneEndo {
    let mut factors = vec![];
    for &d in degrees {
        factors.push(TameFactor::Elementary(poly_in_z2(rng, d, d, 2)));
        factors.push(TameFactor::Swap);
    }
    let c = affine(rng);
    let mut word = vec![TameFactor::Affine(c.inverse())];
    word.extend(factors);
    word.push(TameFactor::Affine(c));
    TameWord::new(word).compose()
}

/// A unimodular matrix built from `steps` random row operations.
pub fn unimodular(rng: &mut Rand, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = IntMatrix::identity(n).rows();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while n > 1 && j == i {
            j = rng.gen_range(0..n);
        }
        match rng.gen_range(0..3) {
            0 if i != j => {
                let c = BigInt::from(*[-1i64, 1, 2, -2].choose(rng).expect("nonempty"));
                let rj = rows[j].clone();
                for (x, y) in rows[i].iter_mut().zip(rj) {
                    *x += &c * y;
                }
            }
            1 => rows.swap(i, j),
            _ => rows[i].iter_mut().for_each(|x| *x = -x.clone()),
        }
    }
    IntMatrix::from_rows(&rows).expect("square")
}

/// Companion matrix of a monic integer polynomial.
pub fn companion(p: &UPoly) -> IntMatrix {
    let c = p.coeffs();
    let n = c.len() - 1;
    let mut m = IntMatrix::zero(n);
    for i in 1..n {
        m.set(i, i - 1, BigInt::from(1));
    }
    for i in 0..n {
        m.set(i, n - 1, -c[i].clone());
    }
    m
}

/// `U M U^{-1}` for a random unimodular `U`.
pub fn conjugate_matrix(rng: &mut Rand, m: &IntMatrix, steps: usize) -> IntMatrix {
    let u = unimodular(rng, m.size(), steps);
    let ui = u.inverse_unimodular().expect("unimodular");
    u.mul(m).and_then(|x| x.mul(&ui)).expect("same size")
}

pub fn laurent_auto(rng: &mut Rand, n: usize) -> LaurentAuto {
    let m = unimodular(rng, n, 2 * n);
    let alpha = (0..n).map(|_| nonzero_rational(rng, 3)).collect();
    LaurentAuto::new(m, alpha).expect("unimodular")
}

/// GWA over `P_2` with a random triangular `σ` and `a` of degree `<= 2`.
pub fn triangular_spec(rng: &mut Rand) -> GwaSpec {
    let sigma = triangular(rng, 2).to_endo();
    let a = nonzero_poly(rng, 2, 2, 3, 3);
    GwaSpec::new(Base::polynomial(2), Sigma::Plane(sigma), a).expect("triangular automorphism")
}

/// Element with `|i| <= max_i` and base coefficients of degree `<= coeff_deg`.
pub fn element(rng: &mut Rand, spec: &GwaSpec, max_i: i64, coeff_deg: u32) -> GwaElement {
    let base = spec.base();
    let comps: Vec<(i64, MultiPoly)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let i = rng.gen_range(-max_i..=max_i);
            let d = match base.kind {
                RingKind::Polynomial => poly(rng, base.n, coeff_deg, 3, 3),
                RingKind::Laurent => laurent_poly(rng, base.n, coeff_deg as i32, 3, 3),
            };
            (i, d)
        })
        .collect();
    GwaElement::from_components(comps)
}

/// `(a, extra)` with `deg a <= 3`, height 3 and at most two extra spanners.
pub fn smc_instance(rng: &mut Rand, n: usize) -> (MultiPoly, Vec<MultiPoly>) {
    let a = nonzero_poly(rng, n, 3, 3, 3);
    let extra = (0..rng.gen_range(0..=2)).map(|_| nonzero_poly(rng, n, 3, 3, 3)).collect();
    (a, extra)
}
