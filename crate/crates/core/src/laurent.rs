//! Automorphisms of the Laurent polynomial ring `L_n`.
//!
//! Every automorphism sends `z_i` to a unit, so it is a pair `(M, α)` with
//! `M ∈ GL(n, Z)` and `α ∈ (k*)^n` acting by `z_i ↦ α_i z^{M[-,i]}`. The group
//! law is the semidirect product `(N, β)(M, α) = (NM, β^M α)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{euler_phi, lcm_u64, IntMatrix, UPoly};
use crate::poly::{Monomial, MultiPoly, RingKind};
use crate::scalar::{self, format_scalar, Scalar};

/// Maximum finite order `G(n)` of an element of `GL(n, Z)` for `n <= 20`.
const LEVITT_EVEN: [(usize, u64); 11] = [
    (1, 2),
    (2, 6),
    (4, 12),
    (6, 30),
    (8, 60),
    (10, 120),
    (12, 210),
    (14, 420),
    (16, 840),
    (18, 1260),
    (20, 2520),
];

/// `G(n)`, the largest finite order in `GL(n, Z)`, tabulated for `1 <= n <= 20`.
pub fn levitt_cap(n: usize) -> Option<u64> {
    if n == 0 || n > 20 {
        return None;
    }
    let key = if n > 1 && n % 2 == 1 { n - 1 } else { n };
    LEVITT_EVEN.iter().find(|(k, _)| *k == key).map(|(_, g)| *g)
}

/// `α^b = α_1^{b_1} ⋯ α_n^{b_n}`.
pub fn power_vec(alpha: &[Scalar], b: &[BigInt]) -> Result<Scalar> {
    if alpha.len() != b.len() {
        return Err(Error::ArityMismatch { expected: alpha.len(), found: b.len() });
    }
    let mut acc = Scalar::one();
    for (i, (a, e)) in alpha.iter().zip(b).enumerate() {
        if e.is_zero() {
            continue;
        }
        if a.is_zero() {
            return Err(Error::ZeroScalar { index: i });
        }
        let e = e.to_i64().ok_or_else(|| Error::ExponentOverflow(e.to_string()))?;
        acc *= scalar::pow_i64(a, e);
    }
    Ok(acc)
}

/// `α^M = (α^{M[-,1]}, …, α^{M[-,n]})`.
pub fn power_mat(alpha: &[Scalar], m: &IntMatrix) -> Result<Vec<Scalar>> {
    if alpha.len() != m.size() {
        return Err(Error::ArityMismatch { expected: m.size(), found: alpha.len() });
    }
    let big = BigInt::from(64);
    if (0..m.size()).all(|j| m.column(j).iter().all(|e| e.abs() <= big)) {
        return (0..m.size()).map(|j| power_vec(alpha, &m.column(j))).collect();
    }
    if let Some(i) = alpha.iter().position(Zero::is_zero) {
        return Err(Error::ZeroScalar { index: i });
    }
    let base = coprime_base(alpha.iter().flat_map(|a| [a.numer().abs(), a.denom().clone()]));
    let exps: Vec<Vec<BigInt>> = alpha
        .iter()
        .map(|a| {
            let num = valuations(&a.numer().abs(), &base);
            let den = valuations(a.denom(), &base);
            num.into_iter().zip(den).map(|(x, y)| BigInt::from(x) - y).collect()
        })
        .collect();
    (0..m.size())
        .map(|j| {
            let col = m.column(j);
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for (k, p) in base.iter().enumerate() {
                let e: BigInt = col.iter().zip(&exps).map(|(c, v)| c * &v[k]).sum();
                let u = e.magnitude().to_u32().ok_or_else(|| Error::ExponentOverflow(e.to_string()))?;
                if e.is_positive() {
                    num *= p.pow(u);
                } else if e.is_negative() {
                    den *= p.pow(u);
                }
            }
            let odd: BigInt = col.iter().zip(alpha).filter(|(_, a)| a.is_negative()).map(|(c, _)| c.clone()).sum();
            if odd.is_odd() {
                num = -num;
            }
            Ok(Scalar::new(num, den))
        })
        .collect()
}

/// Pairwise coprime integers `> 1` over which every input factors.
fn coprime_base(xs: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    let mut pending: Vec<BigInt> = xs.into_iter().collect();
    'next: while let Some(x) = pending.pop() {
        if x.is_one() {
            continue;
        }
        for i in 0..base.len() {
            if base[i] == x {
                continue 'next;
            }
            let g = x.gcd(&base[i]);
            if !g.is_one() {
                let b = base.swap_remove(i);
                pending.extend([&b / &g, &x / &g, g]);
                continue 'next;
            }
        }
        base.push(x);
    }
    base
}

fn valuations(x: &BigInt, base: &[BigInt]) -> Vec<u64> {
    base.iter()
        .map(|p| {
            let mut y = x.clone();
            let mut v = 0;
            while (&y % p).is_zero() {
                y /= p;
                v += 1;
            }
            v
        })
        .collect()
}

fn hadamard(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LaurentAutoJson", into = "LaurentAutoJson")]
pub struct LaurentAuto {
    matrix: IntMatrix,
    alpha: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct LaurentAutoJson {
    n: usize,
    matrix: IntMatrix,
    #[serde(with = "scalar::serde_str::vec")]
    alpha: Vec<Scalar>,
}

impl TryFrom<LaurentAutoJson> for LaurentAuto {
    type Error = Error;
    fn try_from(j: LaurentAutoJson) -> Result<Self> {
        if j.matrix.size() != j.n {
            return Err(Error::ArityMismatch { expected: j.n, found: j.matrix.size() });
        }
        LaurentAuto::new(j.matrix, j.alpha)
    }
}

impl From<LaurentAuto> for LaurentAutoJson {
    fn from(s: LaurentAuto) -> Self {
        LaurentAutoJson { n: s.n(), matrix: s.matrix, alpha: s.alpha }
    }
}

impl LaurentAuto {
    /// Rejects non-unimodular matrices and zero scalars.
    pub fn new(matrix: IntMatrix, alpha: Vec<Scalar>) -> Result<Self> {
        if alpha.len() != matrix.size() {
            return Err(Error::ArityMismatch { expected: matrix.size(), found: alpha.len() });
        }
        if let Some(index) = alpha.iter().position(Zero::is_zero) {
            return Err(Error::ZeroScalar { index });
        }
        let det = matrix.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { det: det.to_string() });
        }
        Ok(LaurentAuto { matrix, alpha })
    }

    pub fn identity(n: usize) -> Self {
        LaurentAuto { matrix: IntMatrix::identity(n), alpha: vec![Scalar::one(); n] }
    }

    pub fn n(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn alpha(&self) -> &[Scalar] {
        &self.alpha
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity() && self.alpha.iter().all(One::is_one)
    }

    /// Image of the monomial `z^e`: `α^e z^{M e}`.
    pub fn apply_monomial(&self, e: &Monomial) -> Result<(Monomial, Scalar)> {
        let n = self.n();
        if e.arity() != n {
            return Err(Error::ArityMismatch { expected: n, found: e.arity() });
        }
        let rows = self.matrix.to_i64_rows()?;
        let mut out = vec![0i32; n];
        let mut c = Scalar::one();
        for (j, &ej) in e.exponents().iter().enumerate() {
            if ej == 0 {
                continue;
            }
            c *= scalar::pow_i64(&self.alpha[j], ej as i64);
            for (i, slot) in out.iter_mut().enumerate() {
                let v = *slot as i64 + rows[i][j] * ej as i64;
                *slot = i32::try_from(v).map_err(|_| Error::ExponentOverflow(v.to_string()))?;
            }
        }
        Ok((Monomial::from_exponents(&out), c))
    }

    /// Applies the automorphism to a Laurent polynomial.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.kind() != RingKind::Laurent {
            return Err(Error::RingMismatch { left: "laurent", right: p.kind().name() });
        }
        if p.arity() != self.n() {
            return Err(Error::ArityMismatch { expected: self.n(), found: p.arity() });
        }
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let (img, k) = self.apply_monomial(m)?;
            terms.push((img, k * c));
        }
        MultiPoly::from_terms(RingKind::Laurent, self.n(), terms)
    }

    /// Images of `z_1, …, z_n`.
    pub fn images(&self) -> Vec<MultiPoly> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let (m, c) = self.apply_monomial(&Monomial::var(n, j)).expect("entries of a valid automorphism fit");
                MultiPoly::term(RingKind::Laurent, n, m, c)
            })
            .collect()
    }

    /// `self ∘ sigma`, i.e. `(N, β)(M, α) = (NM, β^M α)`.
    pub fn compose(&self, sigma: &LaurentAuto) -> Result<LaurentAuto> {
        if self.n() != sigma.n() {
            return Err(Error::ArityMismatch { expected: self.n(), found: sigma.n() });
        }
        let matrix = self.matrix.mul(&sigma.matrix)?;
        let alpha = hadamard(&power_mat(&self.alpha, &sigma.matrix)?, &sigma.alpha);
        Ok(LaurentAuto { matrix, alpha })
    }

    /// `(M^{-1}, α^{-M^{-1}})`.
    pub fn inverse(&self) -> Result<LaurentAuto> {
        let minv = self.matrix.inverse_unimodular()?;
        let alpha = power_mat(&self.alpha, &minv)?.into_iter().map(|a| a.recip()).collect();
        Ok(LaurentAuto { matrix: minv, alpha })
    }

    /// `σ^m = (M^m, α^{I + M + ⋯ + M^{m-1}})`.
    pub fn iterate(&self, m: u64) -> Result<LaurentAuto> {
        let n = self.n();
        let mut sum = IntMatrix::zero(n);
        let mut power = IntMatrix::identity(n);
        for _ in 0..m {
            sum = sum.add(&power)?;
            power = power.mul(&self.matrix)?;
        }
        let alpha = power_mat(&self.alpha, &sum)?;
        Ok(LaurentAuto { matrix: power, alpha })
    }

    /// `σ^k` for any integer `k`.
    pub fn iterate_signed(&self, k: i64) -> Result<LaurentAuto> {
        if k >= 0 {
            self.iterate(k as u64)
        } else {
            self.inverse()?.iterate(k.unsigned_abs())
        }
    }
}

impl fmt::Display for LaurentAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alpha: Vec<String> = self.alpha.iter().map(format_scalar).collect();
        write!(f, "(M = {}, alpha = ({}))", self.matrix, alpha.join(", "))
    }
}

/// Evidence that a unimodular matrix has infinite order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InfiniteOrderWitness {
    /// A factor of the characteristic polynomial that is not cyclotomic, so
    /// some eigenvalue is not a root of unity.
    NonCyclotomicFactor { factor: String },
    /// Every eigenvalue is a root of unity but `M^exponent` is not the
    /// identity, although the exponent is a multiple of every eigenvalue
    /// order; the powers grow without bound (the matrix is not semisimple).
    UnboundedPowers { exponent: u64, row: usize, col: usize, entry: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrderVerdict {
    FiniteOrder { order: u64 },
    InfiniteOrder { witness: InfiniteOrderWitness },
}

impl OrderVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderVerdict::FiniteOrder { .. })
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            OrderVerdict::FiniteOrder { order } => Some(*order),
            OrderVerdict::InfiniteOrder { .. } => None,
        }
    }
}

/// Decides whether `M^m = I` for some `m >= 1`, returning the minimal such `m`.
///
/// The characteristic polynomial is stripped of cyclotomic factors `Φ_k`
/// (only `k` with `φ(k) <= n` can occur). A leftover factor means an
/// eigenvalue off the unit circle or a non-root of unity, hence infinite
/// order. Otherwise the order, if finite, is the lcm `L` of the indices found,
/// confirmed by computing `M^L` exactly. For `n <= 20` the order is
/// cross-checked against `G(n)`.
pub fn order_verdict(m: &IntMatrix) -> Result<OrderVerdict> {
    let n = m.size();
    let mut rest = m.charpoly();
    let mut lcm = 1u64;
    // φ(k) >= sqrt(k/2), so φ(k) <= n forces k <= 2n^2.
    let bound = 2 * (n as u64) * (n as u64) + 2;
    for k in 1..=bound {
        if euler_phi(k) > n as u64 {
            continue;
        }
        let phi = UPoly::cyclotomic(k);
        loop {
            if rest.degree().unwrap_or(0) < phi.degree().unwrap_or(0) {
                break;
            }
            let (q, r) = rest.div_rem_monic(&phi);
            if r.degree().is_some() {
                break;
            }
            rest = q;
            lcm = lcm_u64(lcm, k);
        }
    }
    if !rest.is_one() {
        return Ok(OrderVerdict::InfiniteOrder {
            witness: InfiniteOrderWitness::NonCyclotomicFactor { factor: rest.to_string() },
        });
    }
    let power = m.pow(lcm);
    if !power.is_identity() {
        let (row, col) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| *power.get(i, j) != BigInt::from((i == j) as u8))
            .expect("non-identity matrix has a differing entry");
        return Ok(OrderVerdict::InfiniteOrder {
            witness: InfiniteOrderWitness::UnboundedPowers {
                exponent: lcm,
                row,
                col,
                entry: power.get(row, col).to_string(),
            },
        });
    }
    if let Some(cap) = levitt_cap(n) {
        assert!(lcm <= cap, "order {lcm} exceeds the GL({n}, Z) maximum {cap}");
    }
    Ok(OrderVerdict::FiniteOrder { order: lcm })
}

/// Locally algebraic exactly when `M_σ` has finite order.
pub fn is_locally_algebraic(sigma: &LaurentAuto) -> Result<bool> {
    Ok(order_verdict(sigma.matrix())?.is_finite())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GkKindLaurent {
    /// `GKdim = n + 1`.
    ExactlyNPlusOne,
    /// `GKdim >= n + 2`; the exact value is not determined.
    AtLeastNPlusTwo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GkVerdictLaurent {
    pub kind: GkKindLaurent,
    pub n: usize,
    pub basis_verdict: OrderVerdict,
}

impl GkVerdictLaurent {
    pub fn summary(&self) -> String {
        match self.kind {
            GkKindLaurent::ExactlyNPlusOne => format!("gkdim = n+1 = {}", self.n + 1),
            GkKindLaurent::AtLeastNPlusTwo => format!("gkdim >= n+2 = {}", self.n + 2),
        }
    }
}

/// GK-dimension of `L_n(σ, a)`; independent of `a` and of `α_σ`.
pub fn classify_gk_laurent(sigma: &LaurentAuto) -> Result<GkVerdictLaurent> {
    let basis_verdict = order_verdict(sigma.matrix())?;
    let kind = if basis_verdict.is_finite() { GkKindLaurent::ExactlyNPlusOne } else { GkKindLaurent::AtLeastNPlusTwo };
    Ok(GkVerdictLaurent { kind, n: sigma.n(), basis_verdict })
}

/// The automorphism `z1 ↦ c z1^{1-q} z2^{2-q}, z2 ↦ z1^q z2^{q-1}` of `L_2`,
/// whose matrix has order 2 for every `q`.
pub fn finite_order_family(q: i64, c: Scalar) -> Result<LaurentAuto> {
    let m = IntMatrix::from_rows(&[vec![1 - q, q], vec![2 - q, q - 1]])?;
    LaurentAuto::new(m, vec![c, Scalar::one()])
}
