//! Sparse exact row echelon forms.
//!
//! Rows are integer vectors over an ordered key set, stored primitive (content
//! one, positive leading entry) and indexed by their leading key. Elimination
//! is fraction-free, so no rational arithmetic happens during rank updates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{common_denominator, Scalar};

/// Entries sorted by strictly decreasing key, all nonzero.
pub type SparseRow<K> = Vec<(K, BigInt)>;

/// Clears denominators of a rational vector; entries may come in any order.
pub fn integer_row<K: Ord + Clone>(entries: impl IntoIterator<Item = (K, Scalar)>) -> SparseRow<K> {
    let mut map: BTreeMap<K, Scalar> = BTreeMap::new();
    for (k, c) in entries {
        *map.entry(k).or_insert_with(Scalar::zero) += c;
    }
    map.retain(|_, c| !c.is_zero());
    let den = common_denominator(map.values());
    let mut row: SparseRow<K> =
        map.into_iter().rev().map(|(k, c)| (k, (c * Scalar::from_integer(den.clone())).to_integer())).collect();
    make_primitive(&mut row);
    row
}

fn make_primitive<K>(row: &mut SparseRow<K>) {
    let Some((_, lead)) = row.first() else { return };
    let mut g = row.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
    if lead.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `p·v − q·w` where both rows share the leading key, so it cancels.
fn eliminate<K: Ord + Clone>(v: &SparseRow<K>, w: &SparseRow<K>) -> SparseRow<K> {
    let g = v[0].1.gcd(&w[0].1);
    let p = &w[0].1 / &g;
    let q = &v[0].1 / &g;
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (1, 1);
    while i < v.len() || j < w.len() {
        let ord = match (v.get(i), w.get(j)) {
            (Some(a), Some(b)) => b.0.cmp(&a.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push((v[i].0.clone(), &p * &v[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((w[j].0.clone(), -(&q * &w[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &p * &v[i].1 - &q * &w[j].1;
                if !c.is_zero() {
                    out.push((v[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    make_primitive(&mut out);
    out
}

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow<K>> {
        self.rows.values()
    }

    fn reduce(&self, mut v: SparseRow<K>) -> SparseRow<K> {
        while let Some((lead, _)) = v.first() {
            match self.rows.get(lead) {
                Some(row) => v = eliminate(&v, row),
                None => break,
            }
        }
        v
    }

    /// Adds a vector; returns whether the rank went up.
    pub fn insert(&mut self, v: SparseRow<K>) -> bool {
        let v = self.reduce(v);
        match v.first() {
            Some((lead, _)) => {
                let lead = lead.clone();
                self.rows.insert(lead, v);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: SparseRow<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// The reduced row echelon form over the rationals, rows in decreasing
    /// pivot order, each with pivot entry one and zeros in other pivot columns.
    pub fn rref(&self) -> Vec<Vec<(K, Scalar)>> {
        let mut done: BTreeMap<K, BTreeMap<K, Scalar>> = BTreeMap::new();
        for (pivot, row) in &self.rows {
            let lead = Scalar::from_integer(row[0].1.clone());
            let mut r: BTreeMap<K, Scalar> =
                row.iter().map(|(k, c)| (k.clone(), Scalar::from_integer(c.clone()) / &lead)).collect();
            // Rows only hold keys up to their pivot, so clearing smaller pivots
            // from the top down leaves a reduced row.
            for (p, prow) in done.iter().rev() {
                let Some(c) = r.get(p).cloned() else { continue };
                for (k, v) in prow {
                    let e = r.entry(k.clone()).or_insert_with(Scalar::zero);
                    *e -= &c * v;
                }
                r.retain(|_, v| !v.is_zero());
            }
            done.insert(pivot.clone(), r);
        }
        done.into_iter().rev().map(|(_, r)| r.into_iter().rev().collect()).collect()
    }
}

/// Rank of a list of rational vectors.
pub fn rank<K: Ord + Clone>(rows: impl IntoIterator<Item = Vec<(K, Scalar)>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(integer_row(r));
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn row(v: &[(u32, i64)]) -> Vec<(u32, Scalar)> {
        v.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)]), row(&[(2, 1)])];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn rational_rows_are_scaled() {
        let r = integer_row(vec![(1u32, frac(1, 2)), (0, frac(-1, 3))]);
        assert_eq!(r, vec![(1, BigInt::from(3)), (0, BigInt::from(-2))]);
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new();
        assert!(e.insert(integer_row(row(&[(3, 1), (1, 1)]))));
        assert!(e.insert(integer_row(row(&[(2, 1), (1, -1)]))));
        assert!(e.contains(integer_row(row(&[(3, 2), (2, 1), (1, 1)]))));
        assert!(!e.contains(integer_row(row(&[(1, 1)]))));
        assert!(!e.insert(integer_row(row(&[(3, -1), (2, -1)]))));
    }

    #[test]
    fn rref_is_reduced() {
        let mut e = Echelon::new();
        e.insert(integer_row(row(&[(2, 2), (1, 4), (0, 6)])));
        e.insert(integer_row(row(&[(1, 1), (0, 1)])));
        let r = e.rref();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0], vec![(2, int(1)), (0, int(1))]);
        assert_eq!(r[1], vec![(1, int(1)), (0, int(1))]);
    }
}
