use std::collections::HashMap;

use super::{GwaElement, GwaSpec, Sigma};
use crate::error::Result;
use crate::laurent::LaurentAuto;
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Scalar;

/// Evaluates `σ^k` on base elements with memoised images of variables and
/// monomials.
#[derive(Debug)]
pub struct Twister<'a> {
    spec: &'a GwaSpec,
    laurent: HashMap<i64, LaurentAuto>,
    var_images: HashMap<i64, Vec<MultiPoly>>,
    monos: HashMap<(i64, Monomial), MultiPoly>,
}

impl<'a> Twister<'a> {
    pub fn new(spec: &'a GwaSpec) -> Self {
        Twister { spec, laurent: HashMap::new(), var_images: HashMap::new(), monos: HashMap::new() }
    }

    /// `σ^k(p)` for any integer `k`.
    pub fn twist(&mut self, k: i64, p: &MultiPoly) -> Result<MultiPoly> {
        if k == 0 {
            return Ok(p.clone());
        }
        if let Sigma::Laurent(s) = self.spec.sigma() {
            if let std::collections::hash_map::Entry::Vacant(e) = self.laurent.entry(k) {
                e.insert(s.iterate_signed(k)?);
            }
            return self.laurent[&k].apply(p);
        }
        let base = self.spec.base();
        let mut acc = MultiPoly::zero(base.kind, base.n);
        for (m, c) in p.terms() {
            let img = self.monomial(k, m);
            acc = acc.try_add(&img.scale(c))?;
        }
        Ok(acc)
    }

    fn images(&mut self, k: i64) -> &[MultiPoly] {
        if !self.var_images.contains_key(&k) {
            let step = if k > 0 { 1 } else { -1 };
            let sigma = if k > 0 { self.spec.sigma() } else { self.spec.sigma_inverse() };
            let gens = sigma.images();
            let v = if k == step {
                gens
            } else {
                let prev = self.images(k - step).to_vec();
                gens.iter().map(|f| f.substitute(&prev).expect("base ring")).collect()
            };
            self.var_images.insert(k, v);
        }
        &self.var_images[&k]
    }

    fn monomial(&mut self, k: i64, m: &Monomial) -> MultiPoly {
        if let Some(v) = self.monos.get(&(k, m.clone())) {
            return v.clone();
        }
        let base = self.spec.base();
        let out = match m.exponents().iter().position(|&e| e > 0) {
            None => MultiPoly::one(base.kind, base.n),
            Some(j) => {
                let rest = m.mul(&Monomial::var(base.n, j).inverse());
                let head = self.images(k)[j].clone();
                let tail = self.monomial(k, &rest);
                tail.try_mul(&head).expect("base ring")
            }
        };
        self.monos.insert((k, m.clone()), out.clone());
        out
    }
}

/// Multiplies elements of one GWA. Holds caches, so it is used mutably.
#[derive(Debug)]
pub struct Multiplier<'a> {
    spec: &'a GwaSpec,
    tw: Twister<'a>,
    xy: HashMap<(i64, i64), MultiPoly>,
    yx: HashMap<(i64, i64), MultiPoly>,
}

impl<'a> Multiplier<'a> {
    pub fn new(spec: &'a GwaSpec) -> Self {
        Multiplier { spec, tw: Twister::new(spec), xy: HashMap::new(), yx: HashMap::new() }
    }

    pub fn spec(&self) -> &'a GwaSpec {
        self.spec
    }

    pub fn twist(&mut self, k: i64, p: &MultiPoly) -> Result<MultiPoly> {
        self.tw.twist(k, p)
    }

    /// `x^i y^l = σ^i(a) σ^{i-1}(a) ⋯ σ^{i-r+1}(a) · X^{i-l}` with `r = min(i, l)`.
    fn xy_prefix(&mut self, i: i64, r: i64) -> Result<MultiPoly> {
        if let Some(p) = self.xy.get(&(i, r)) {
            return Ok(p.clone());
        }
        let base = self.spec.base();
        let mut acc = MultiPoly::one(base.kind, base.n);
        for t in 0..r {
            acc = acc.try_mul(&self.tw.twist(i - t, self.spec.a())?)?;
        }
        self.xy.insert((i, r), acc.clone());
        Ok(acc)
    }

    /// `y^l x^m = σ^{-(l-1)}(a) σ^{-(l-2)}(a) ⋯ σ^{-(l-r)}(a) · X^{m-l}` with `r = min(l, m)`.
    fn yx_prefix(&mut self, l: i64, r: i64) -> Result<MultiPoly> {
        if let Some(p) = self.yx.get(&(l, r)) {
            return Ok(p.clone());
        }
        let base = self.spec.base();
        let mut acc = MultiPoly::one(base.kind, base.n);
        for t in 0..r {
            acc = acc.try_mul(&self.tw.twist(-(l - 1 - t), self.spec.a())?)?;
        }
        self.yx.insert((l, r), acc.clone());
        Ok(acc)
    }

    pub fn mul(&mut self, u: &GwaElement, v: &GwaElement) -> Result<GwaElement> {
        self.spec.check(u)?;
        self.spec.check(v)?;
        let mut out = GwaElement::zero();
        for (j, e) in v.components() {
            for (i, d) in u.components() {
                let mut c = d.try_mul(&self.tw.twist(i, e)?)?;
                if i > 0 && j < 0 {
                    c = c.try_mul(&self.xy_prefix(i, i.min(-j))?)?;
                } else if i < 0 && j > 0 {
                    c = c.try_mul(&self.yx_prefix(-i, (-i).min(j))?)?;
                }
                out.add_term(i + j, &c);
            }
        }
        Ok(out)
    }
}

pub fn gwa_mul(spec: &GwaSpec, u: &GwaElement, v: &GwaElement) -> Result<GwaElement> {
    Multiplier::new(spec).mul(u, v)
}

pub fn gwa_add(spec: &GwaSpec, u: &GwaElement, v: &GwaElement) -> Result<GwaElement> {
    spec.check(u)?;
    spec.check(v)?;
    Ok(u.add(v))
}

pub fn gwa_scale(spec: &GwaSpec, u: &GwaElement, c: &Scalar) -> Result<GwaElement> {
    spec.check(u)?;
    Ok(u.scale(c))
}
