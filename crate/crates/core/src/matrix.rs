//! Square integer matrices and the univariate integer polynomials needed to
//! reason about their characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(IntMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n).map(<[BigInt]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| *self.get(i, j) == BigInt::from((i == j) as u8)))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::ArityMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::ArityMismatch { expected: self.n, found: other.n });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { n: self.n, entries })
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same size");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same size");
            }
        }
        acc
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// The integer inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular { det: det.to_string() });
        }
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(self.get(i, j).clone())).collect();
                row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as u8))));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &f * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        let entries = a
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n).map(|v| v.to_integer()))
            .collect();
        Ok(IntMatrix { n, entries })
    }

    /// `max |M[i,j]|`.
    pub fn norm(&self) -> BigInt {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_default()
    }

    /// Characteristic polynomial `det(tI - M)` by Faddeev–LeVerrier, exact.
    pub fn charpoly(&self) -> UPoly {
        let n = self.n;
        let to_q = |m: &IntMatrix| -> Vec<Vec<BigRational>> {
            m.rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect()
        };
        let a = to_q(self);
        // coefficients c_n = 1, c_{n-k} computed iteratively
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = vec![vec![BigRational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = BigRational::zero();
                    for l in 0..n {
                        if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                            s += &a[i][l] * &mk[l][j];
                        }
                    }
                    if i == j {
                        s += &coeffs[n - k + 1];
                    }
                    next[i][j] = s;
                }
            }
            mk = next;
            // c_{n-k} = -tr(A M_k) / k
            let mut tr = BigRational::zero();
            for i in 0..n {
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                        tr += &a[i][l] * &mk[l][i];
                    }
                }
            }
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        UPoly::new(coeffs.into_iter().map(|c| c.to_integer()).collect())
    }

    /// Entries as `i64`, failing on overflow.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_i64().ok_or_else(|| Error::ExponentOverflow(v.to_string()))).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// JSON form: nested arrays of integers (numbers or decimal strings).
impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| match v.to_i64() {
                        Some(x) => serde_json::Value::from(x),
                        None => serde_json::Value::from(v.to_string()),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let parsed: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| match v {
                        serde_json::Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().expect("i64"))),
                        serde_json::Value::String(s) => s.trim().parse::<BigInt>().map_err(D::Error::custom),
                        other => Err(D::Error::custom(format!("matrix entry must be an integer, got {other}"))),
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<_, _>>()?;
        IntMatrix::from_rows(&parsed).map_err(D::Error::custom)
    }
}

/// Dense univariate integer polynomial, coefficients from low to high degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<BigInt>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return UPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Division by a monic polynomial; returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("nonzero divisor");
        assert!(divisor.0[dd].is_one(), "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly(vec![]), UPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, d) in divisor.0.iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// The `k`-th cyclotomic polynomial.
    pub fn cyclotomic(k: u64) -> UPoly {
        assert!(k >= 1);
        let mut num = vec![BigInt::zero(); k as usize + 1];
        num[0] = -BigInt::one();
        num[k as usize] = BigInt::one();
        let mut p = UPoly::new(num);
        for d in 1..k {
            if k.is_multiple_of(d) {
                let (q, r) = p.div_rem_monic(&UPoly::cyclotomic(d));
                debug_assert!(r.0.is_empty());
                p = q;
            }
        }
        p
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{a}*t^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn euler_phi(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn norm_example() {
        assert_eq!(m(&[&[1, -3], &[2, 0]]).norm(), BigInt::from(3));
    }

    #[test]
    fn unipotent_inverse() {
        assert_eq!(m(&[&[1, 1], &[0, 1]]).inverse_unimodular().unwrap(), m(&[&[1, -1], &[0, 1]]));
    }

    #[test]
    fn rotation_has_order_four() {
        let r = m(&[&[0, -1], &[1, 0]]);
        assert!(r.pow(4).is_identity());
        assert!(!r.pow(2).is_identity());
    }

    #[test]
    fn inverse_requires_unimodular() {
        assert!(matches!(m(&[&[2, 0], &[0, 1]]).inverse_unimodular(), Err(Error::NotUnimodular { .. })));
        assert!(IntMatrix::from_rows(&[vec![1, 2]]).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[2, 3], &[1, 4]]).det(), BigInt::from(5));
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).det(), BigInt::zero());
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det(), BigInt::from(6));
    }

    #[test]
    fn charpoly_of_rotation_and_companion() {
        assert_eq!(m(&[&[0, -1], &[1, 0]]).charpoly(), UPoly::from_i64(&[1, 0, 1]));
        // companion of t^3 - 2t + 5
        let c = m(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        assert_eq!(c.charpoly(), UPoly::from_i64(&[5, -2, 0, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(UPoly::cyclotomic(1), UPoly::from_i64(&[-1, 1]));
        assert_eq!(UPoly::cyclotomic(6), UPoly::from_i64(&[1, -1, 1]));
        assert_eq!(UPoly::cyclotomic(12), UPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(UPoly::cyclotomic(9).degree(), Some(6));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }
}
