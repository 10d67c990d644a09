use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::parse::format_poly;
use crate::poly::MultiPoly;
use crate::scalar::Scalar;

/// `Σ d_i X^i` with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GwaElement {
    comps: BTreeMap<i64, MultiPoly>,
}

impl GwaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn base(d: MultiPoly) -> Self {
        Self::term(0, d)
    }

    /// `d·x^i` for `i > 0`, `d·y^{-i}` for `i < 0`.
    pub fn term(i: i64, d: MultiPoly) -> Self {
        let mut comps = BTreeMap::new();
        if !d.is_zero() {
            comps.insert(i, d);
        }
        GwaElement { comps }
    }

    pub fn from_components(it: impl IntoIterator<Item = (i64, MultiPoly)>) -> Self {
        let mut e = GwaElement::zero();
        for (i, d) in it {
            e.add_term(i, &d);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl DoubleEndedIterator<Item = (i64, &MultiPoly)> {
        self.comps.iter().map(|(i, d)| (*i, d))
    }

    pub fn component(&self, i: i64) -> Option<&MultiPoly> {
        self.comps.get(&i)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.comps.keys().copied()
    }

    /// Adds `d·X^i` in place. The caller guarantees `d` is in the base ring.
    pub(crate) fn add_term(&mut self, i: i64, d: &MultiPoly) {
        if d.is_zero() {
            return;
        }
        match self.comps.get_mut(&i) {
            Some(cur) => {
                *cur = cur.try_add(d).expect("same base ring");
                if cur.is_zero() {
                    self.comps.remove(&i);
                }
            }
            None => {
                self.comps.insert(i, d.clone());
            }
        }
    }

    pub fn add(&self, other: &GwaElement) -> GwaElement {
        let mut out = self.clone();
        for (i, d) in &other.comps {
            out.add_term(*i, d);
        }
        out
    }

    pub fn neg(&self) -> GwaElement {
        GwaElement { comps: self.comps.iter().map(|(i, d)| (*i, -d)).collect() }
    }

    pub fn sub(&self, other: &GwaElement) -> GwaElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> GwaElement {
        GwaElement::from_components(self.comps.iter().map(|(i, d)| (*i, d.scale(c))))
    }
}

impl fmt::Display for GwaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .rev()
            .map(|(i, d)| {
                let coeff = format!("({})", format_poly(d));
                match i {
                    0 => coeff,
                    1 => format!("{coeff}*x"),
                    -1 => format!("{coeff}*y"),
                    i if *i > 0 => format!("{coeff}*x^{i}"),
                    i => format!("{coeff}*y^{}", -i),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for GwaElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
