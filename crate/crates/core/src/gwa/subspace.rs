use super::{GwaElement, Multiplier};
use crate::error::Result;
use crate::linalg::{integer_row, Echelon, SparseRow};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Scalar;

/// A normal-form monomial `z^e X^i`, ordered by degree `i` first.
pub type Key = (i64, Monomial);

pub(crate) fn row_of(u: &GwaElement) -> SparseRow<Key> {
    integer_row(u.components().flat_map(|(i, d)| d.terms().map(move |(m, c)| ((i, m.clone()), c.clone()))))
}

/// A finite-dimensional subspace of a GWA, kept as an echelon form together
/// with the original spanning elements that were independent when added.
#[derive(Clone, Debug, Default)]
pub struct Subspace {
    echelon: Echelon<Key>,
    basis: Vec<GwaElement>,
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn span<'a>(elems: impl IntoIterator<Item = &'a GwaElement>) -> Self {
        let mut s = Subspace::new();
        for e in elems {
            s.insert(e.clone());
        }
        s
    }

    /// Adds `u`; returns whether the dimension went up.
    pub fn insert(&mut self, u: GwaElement) -> bool {
        let added = self.echelon.insert(row_of(&u));
        if added {
            self.basis.push(u);
        }
        added
    }

    pub fn contains(&self, u: &GwaElement) -> bool {
        self.echelon.contains(row_of(u))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GwaElement] {
        &self.basis
    }

    /// Reduced row echelon form over the monomial index.
    pub fn rref(&self) -> Vec<Vec<(Key, Scalar)>> {
        self.echelon.rref()
    }

    /// The monomials that carry a pivot.
    pub fn pivots(&self) -> impl Iterator<Item = &Key> {
        self.echelon.pivots()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|u| self.contains(u))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for u in &other.basis {
            s.insert(u.clone());
        }
        s
    }

    /// `VW`, spanned by all products of basis elements.
    pub fn product(&self, other: &Subspace, mul: &mut Multiplier<'_>) -> Result<Subspace> {
        let mut s = Subspace::new();
        for u in &self.basis {
            for v in &other.basis {
                s.insert(mul.mul(u, v)?);
            }
        }
        Ok(s)
    }

    /// `V^m` for `m >= 0` (`V^0 = k`).
    pub fn power(&self, m: usize, mul: &mut Multiplier<'_>) -> Result<Subspace> {
        let mut acc = Subspace::span([&mul.spec().one()]);
        for _ in 0..m {
            acc = acc.product(self, mul)?;
        }
        Ok(acc)
    }
}

/// Subspace of base elements spanned by polynomials.
pub fn base_span(polys: &[MultiPoly]) -> Subspace {
    Subspace::span(polys.iter().map(|p| GwaElement::base(p.clone())).collect::<Vec<_>>().iter())
}
