//! The sensitive multiplicity condition `dim(W^m) >= c dim(W) m^n` for `P_n`,
//! checked on explicit subspaces.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{integer_row, Echelon};
use crate::poly::{Monomial, MultiPoly, RingKind};
use crate::scalar::{format_scalar, int, Scalar};

/// `c_n = 1 / (2^n 5^{n(n+1)/2} n!)`.
pub fn smc_constant(n: u32) -> Scalar {
    let mut den = BigInt::one();
    for k in 1..=n {
        den *= 2 * k;
    }
    den *= BigInt::from(5).pow(n * (n + 1) / 2);
    Scalar::new(BigInt::one(), den)
}

/// `c_{n+1}` from `c_n`.
pub fn smc_constant_step(c: &Scalar, n: u32) -> Scalar {
    c / (int(2 * (n as i64 + 1)) * int(5).pow(n as i32 + 1))
}

/// Finite-dimensional subspace of `P_n` filtered by the degree in `z_n`.
#[derive(Clone, Debug)]
pub struct FilteredSubspace {
    n: usize,
    basis: Vec<MultiPoly>,
}

type FKey = (i32, Monomial);

fn filtered_key(m: &Monomial) -> FKey {
    (*m.exponents().last().unwrap_or(&0), m.clone())
}

impl FilteredSubspace {
    /// Spans `polys`, keeping a linearly independent subset.
    pub fn new(n: usize, polys: &[MultiPoly]) -> Result<Self> {
        let mut echelon = Echelon::new();
        let mut basis = Vec::new();
        for p in polys {
            if p.kind() != RingKind::Polynomial {
                return Err(Error::RingMismatch { left: RingKind::Polynomial.name(), right: p.kind().name() });
            }
            if p.arity() != n {
                return Err(Error::ArityMismatch { expected: n, found: p.arity() });
            }
            if echelon.insert(row(p)) {
                basis.push(p.clone());
            }
        }
        Ok(FilteredSubspace { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim(W^m)` for `m = 0..=m_max`.
    pub fn power_dims(&self, m_max: usize) -> Vec<usize> {
        let mut dims = vec![1];
        let mut cur = vec![MultiPoly::one(RingKind::Polynomial, self.n)];
        for _ in 0..m_max {
            let mut echelon = Echelon::new();
            let mut next = Vec::new();
            for u in &cur {
                for v in &self.basis {
                    let p = u.try_mul(v).expect("same ring");
                    if echelon.insert(row(&p)) {
                        next.push(p);
                    }
                }
            }
            dims.push(next.len());
            cur = next;
        }
        dims
    }
}

fn row(p: &MultiPoly) -> Vec<(FKey, BigInt)> {
    integer_row(p.terms().map(|(m, c)| (filtered_key(m), c.clone())))
}

/// `gr(W)`: the top `z_n`-degree parts of an echelon basis ordered primarily
/// by `z_n`-degree.
pub fn gr_subspace(w: &FilteredSubspace) -> FilteredSubspace {
    let mut echelon = Echelon::new();
    for p in &w.basis {
        echelon.insert(row(p));
    }
    let basis: Vec<MultiPoly> = echelon
        .rows()
        .map(|r| {
            let top = r[0].0 .0;
            let terms = r.iter().filter(|((d, _), _)| *d == top).map(|((_, m), c)| (m.clone(), Scalar::from_integer(c.clone())));
            MultiPoly::from_terms(RingKind::Polynomial, w.n, terms).expect("valid monomials")
        })
        .collect();
    FilteredSubspace { n: w.n, basis }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmcRow {
    pub m: usize,
    pub dim: usize,
    #[serde(serialize_with = "crate::scalar::serde_str::serialize")]
    pub threshold: Scalar,
    #[serde(serialize_with = "crate::scalar::serde_str::serialize")]
    pub margin: Scalar,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmcVerdict {
    AllPass,
    FirstFailure { m: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmcReport {
    pub n: usize,
    pub m_max: usize,
    #[serde(serialize_with = "crate::scalar::serde_str::serialize")]
    pub constant: Scalar,
    pub dim_w: usize,
    pub rows: Vec<SmcRow>,
    pub verdict: SmcVerdict,
    pub note: &'static str,
}

const NOTE: &str = "the inequality is a theorem for P_n; a failure here indicates a bug in the linear algebra or the constants, not a counterexample";

impl SmcReport {
    pub fn passed(&self) -> bool {
        self.verdict == SmcVerdict::AllPass
    }

    fn build(n: usize, m_max: usize, constant: Scalar, w: &FilteredSubspace) -> Self {
        let dims = w.power_dims(m_max);
        let dim_w = int(w.dim() as i64);
        let rows: Vec<SmcRow> = (1..=m_max)
            .map(|m| {
                let threshold = &constant * &dim_w * int(m as i64).pow(n as i32);
                let margin = int(dims[m] as i64) - &threshold;
                SmcRow { m, dim: dims[m], pass: margin >= Scalar::zero(), threshold, margin }
            })
            .collect();
        let verdict = match rows.iter().find(|r| !r.pass) {
            Some(r) => SmcVerdict::FirstFailure { m: r.m },
            None => SmcVerdict::AllPass,
        };
        SmcReport { n, m_max, constant, dim_w: w.dim(), rows, verdict, note: NOTE }
    }

    pub fn summary(&self) -> String {
        match &self.verdict {
            SmcVerdict::AllPass => format!("pass for m <= {} (c = {})", self.m_max, format_scalar(&self.constant)),
            SmcVerdict::FirstFailure { m } => format!("FAIL at m = {m}; {NOTE}"),
        }
    }
}

/// Checks `dim(W^m) >= c_n dim(W) m^n` for `W = V_n a + span(extra)`, where
/// `V_n = k + kz_1 + ⋯ + kz_n`.
pub fn verify_smc_instance(n: usize, a: &MultiPoly, extra: &[MultiPoly], m_max: usize) -> Result<SmcReport> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m_max < 2 {
        return Err(Error::invalid("m_max must be at least 2"));
    }
    let mut polys = vec![a.clone()];
    for i in 0..n {
        polys.push(a.try_mul(&MultiPoly::var(RingKind::Polynomial, n, i))?);
    }
    polys.extend(extra.iter().cloned());
    let w = FilteredSubspace::new(n, &polys)?;
    Ok(SmcReport::build(n, m_max, smc_constant(n as u32), &w))
}

/// One summand `W_i z_n^{p_i}` of a direct sum, with `W_i ⊆ P_{n-1}`.
#[derive(Clone, Debug)]
pub struct Part {
    pub polys: Vec<MultiPoly>,
    pub power: u32,
}

/// Checks `dim(W^m) >= c' dim(W) m^n` with `c' = c_{n-1} / (2n)` for
/// `W = W_1 z^{p_1} + ⋯ + W_l z^{p_l}`, `l >= 2`, `p_1 < ⋯ < p_l`.
pub fn case1_direct_sum_check(n: usize, parts: &[Part], m_max: usize) -> Result<SmcReport> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if parts.len() < 2 {
        return Err(Error::invalid("at least two parts are required"));
    }
    if parts.windows(2).any(|w| w[0].power >= w[1].power) {
        return Err(Error::invalid("part powers must be strictly increasing"));
    }
    let mut polys = Vec::new();
    for part in parts {
        if part.polys.is_empty() {
            return Err(Error::invalid("empty part"));
        }
        for p in &part.polys {
            if p.kind() != RingKind::Polynomial || p.arity() != n - 1 {
                return Err(Error::ArityMismatch { expected: n - 1, found: p.arity() });
            }
            let terms = p.terms().map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                e.push(part.power as i32);
                (Monomial::from_exponents(&e), c.clone())
            });
            polys.push(MultiPoly::from_terms(RingKind::Polynomial, n, terms)?);
        }
    }
    let w = FilteredSubspace::new(n, &polys)?;
    let c = smc_constant(n as u32 - 1) / int(2 * n as i64);
    Ok(SmcReport::build(n, m_max, c, &w))
}
