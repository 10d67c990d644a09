//! Growth functions `d_V(m) = dim(Σ_{i<=m} V^i)` and the bounds around them.

use serde::{Serialize, Serializer};

use super::subspace::row_of;
use super::{GwaElement, GwaSpec, Multiplier, Sigma, Subspace};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::plane::{iterate_degrees, PlaneEndo};
use crate::poly::{MultiPoly, RingKind};

/// Ratio `dim(m+1)/dim(m)` that every step in the top half must reach for an
/// exponential verdict.
pub const EXPONENTIAL_RATIO: f64 = 1.3;

/// Smallest `M` for which a fit is reported.
pub const MIN_FIT_RANGE: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum Fit {
    /// Least-squares slope of `log dim` against `log m` over the top half.
    Polynomial { exponent: f64 },
    /// Size of an explicit independent set witnessing exponential growth.
    Exponential { witness: usize },
}

impl Serialize for Fit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Fit::Polynomial { exponent } => {
                serde_json::json!({"kind": "polynomial", "exponent": format!("{exponent:.2}")}).serialize(s)
            }
            Fit::Exponential { witness } => serde_json::json!({"kind": "exponential", "witness": witness}).serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check { name: name.to_string(), pass, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub dims: Vec<usize>,
    pub fit: Option<Fit>,
    pub checks: Vec<Check>,
}

/// Dimensions of `V^0, …, V^max` for a subframe spanned by `gens`.
///
/// Since `1 ∈ V`, `V^m = V^{m-1} + F·V` where `F` holds the elements that
/// enlarged `V^{m-1}`, so only those are multiplied at each step.
fn grow(mul: &mut Multiplier<'_>, gens: &[GwaElement], max: usize) -> Result<Vec<usize>> {
    let mut echelon = Echelon::new();
    let one = mul.spec().one();
    echelon.insert(row_of(&one));
    let mut frontier = vec![one];
    let mut dims = vec![1];
    for _ in 0..max {
        let mut next = Vec::new();
        for f in &frontier {
            for g in gens {
                let p = mul.mul(f, g)?;
                if echelon.insert(row_of(&p)) {
                    next.push(p);
                }
            }
        }
        dims.push(echelon.rank());
        frontier = next;
    }
    Ok(dims)
}

/// Fit over `m ∈ [⌈M/2⌉, M]`; `None` when `M < 6`.
///
/// The verdict is exponential when every ratio `dim(m+1)/dim(m)` in that range
/// is at least [`EXPONENTIAL_RATIO`] and `log dim` is closer to linear in `m`
/// than in `log m`. Otherwise the exponent is the least-squares slope of
/// `log dim` against `log m`.
pub fn fit_growth(dims: &[usize]) -> Option<Fit> {
    let m_max = dims.len().checked_sub(1)?;
    if m_max < MIN_FIT_RANGE {
        return None;
    }
    let lo = m_max.div_ceil(2);
    let ratios_large = (lo..m_max).all(|m| dims[m + 1] as f64 >= EXPONENTIAL_RATIO * dims[m] as f64);
    let ys = || (lo..=m_max).map(|m| (dims[m] as f64).ln());
    let loglog: Vec<(f64, f64)> = (lo..=m_max).map(|m| (m as f64).ln()).zip(ys()).collect();
    let semilog: Vec<(f64, f64)> = (lo..=m_max).map(|m| m as f64).zip(ys()).collect();
    let (exponent, poly_res) = least_squares(&loglog);
    let (_, exp_res) = least_squares(&semilog);
    if ratios_large && exp_res < poly_res {
        return Some(Fit::Exponential { witness: dims[m_max] });
    }
    Some(Fit::Polynomial { exponent })
}

/// Slope and residual sum of squares.
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let b = sxy / sxx;
    let res = pts.iter().map(|p| (p.1 - my - b * (p.0 - mx)).powi(2)).sum();
    (b, res)
}

/// Growth of the subframe `gens`, which must contain `1`.
///
/// For an exponential verdict over `P_2` with a degree-doubling variable the
/// witness is the rank from [`exponential_witness`] at `p = 3`; otherwise it
/// is `d_V(M)`.
pub fn growth_sequence(spec: &GwaSpec, gens: &Subspace, max: usize) -> Result<GrowthReport> {
    for g in gens.basis() {
        spec.check(g)?;
    }
    if !gens.contains(&spec.one()) {
        return Err(Error::NotSubframe);
    }
    let mut mul = Multiplier::new(spec);
    let dims = grow(&mut mul, gens.basis(), max)?;
    let mut fit = fit_growth(&dims);
    if let (Some(Fit::Exponential { witness }), Sigma::Plane(p)) = (&mut fit, spec.sigma()) {
        if let Some(z) = doubling_variable(p, 3) {
            *witness = exponential_witness(spec, &z, 3)?;
        }
    }
    let nondecreasing = dims.windows(2).all(|w| w[0] <= w[1]);
    let checks = vec![
        Check::new("subframe", true, String::new()),
        Check::new("dims-nondecreasing", nondecreasing, String::new()),
    ];
    Ok(GrowthReport { dims, fit, checks })
}

/// A variable `z` with `deg σ^{m+1}(z) >= 2 deg σ^m(z)` for `m < steps`.
pub fn doubling_variable(sigma: &PlaneEndo, steps: u32) -> Option<MultiPoly> {
    let degs = iterate_degrees(sigma, steps);
    (0..2)
        .find(|&i| degs[i].windows(2).all(|w| w[1] >= 2 * w[0]))
        .map(|i| MultiPoly::var(RingKind::Polynomial, 2, i))
}

/// Rank of the `2^{p+1}` words `z^{ε0} x z^{ε1} x ⋯ x z^{εp}`, `ε_i ∈ {0, 1}`.
pub fn exponential_witness(spec: &GwaSpec, z: &MultiPoly, p: usize) -> Result<usize> {
    spec.base().check(z)?;
    let mut mul = Multiplier::new(spec);
    let zel = GwaElement::base(z.clone());
    let x = spec.x();
    let mut span = Subspace::new();
    for mask in 0u32..(1 << (p + 1)) {
        let mut w = spec.one();
        for i in 0..=p {
            if i > 0 {
                w = mul.mul(&w, &x)?;
            }
            if mask & (1 << i) != 0 {
                w = mul.mul(&w, &zel)?;
            }
        }
        span.insert(w);
    }
    Ok(span.dim())
}

/// Smallest σ-stable subspace of `D` containing the given elements.
pub fn stable_closure(spec: &GwaSpec, polys: &[MultiPoly], max_dim: usize) -> Result<Subspace> {
    let mut span = Subspace::new();
    let mut queue = Vec::new();
    for p in polys {
        spec.base().check(p)?;
        let e = GwaElement::base(p.clone());
        if span.insert(e.clone()) {
            queue.push(p.clone());
        }
    }
    while let Some(p) = queue.pop() {
        let img = spec.sigma().apply(&p)?;
        if span.insert(GwaElement::base(img.clone())) {
            if span.dim() > max_dim {
                return Err(Error::invalid(format!("no sigma-stable subspace of dimension <= {max_dim} found")));
            }
            queue.push(img);
        }
    }
    Ok(span)
}

/// Checks `(m+1) dim(V^m) < dim(W^{2m})` and `dim(W^m) <= (2m+1) dim(V^m)`
/// for `1 <= m <= max`, with `W = V + kx + ky`.
pub fn sandwich_check(spec: &GwaSpec, v: &Subspace, max: usize) -> Result<Vec<Check>> {
    match spec.sigma() {
        Sigma::Plane(p) if p.as_triangular().is_some() => {}
        _ => return Err(Error::invalid("sandwich bounds need a triangular automorphism of P2")),
    }
    for b in v.basis() {
        spec.check(b)?;
        if b.degrees().any(|i| i != 0) {
            return Err(Error::invalid("V must lie in the base ring"));
        }
    }
    let sa = spec.sigma().apply(spec.a())?;
    for (name, e) in [("1", spec.one()), ("a", GwaElement::base(spec.a().clone())), ("sigma(a)", GwaElement::base(sa))] {
        if !v.contains(&e) {
            return Err(Error::invalid(format!("V must contain {name}")));
        }
    }
    for b in v.basis() {
        let d = b.component(0).expect("nonzero base element");
        if !v.contains(&GwaElement::base(spec.sigma().apply(d)?)) {
            return Err(Error::NotStable);
        }
    }
    let mut mul = Multiplier::new(spec);
    let dv = grow(&mut mul, v.basis(), max)?;
    let mut wgens = v.basis().to_vec();
    wgens.push(spec.x());
    wgens.push(spec.y());
    let dw = grow(&mut mul, &wgens, 2 * max)?;
    let mut checks = Vec::new();
    for m in 1..=max {
        let lower = (m + 1) * dv[m];
        checks.push(Check::new(
            "sandwich-lower",
            lower < dw[2 * m],
            format!("m={m}: (m+1)dim(V^m) = {lower} < dim(W^2m) = {}", dw[2 * m]),
        ));
        let upper = (2 * m + 1) * dv[m];
        checks.push(Check::new(
            "sandwich-upper",
            dw[m] <= upper,
            format!("m={m}: dim(W^m) = {} <= (2m+1)dim(V^m) = {upper}", dw[m]),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gwa::{make_heisenberg, make_weyl, Base};
    use crate::parse::parse_poly;
    use crate::scalar::int;

    fn p2(s: &str) -> MultiPoly {
        parse_poly(s, RingKind::Polynomial, 2).unwrap()
    }

    fn plane_spec(f1: &str, f2: &str, a: &str) -> GwaSpec {
        GwaSpec::new(Base::polynomial(2), Sigma::Plane(PlaneEndo::parse(f1, f2).unwrap()), p2(a)).unwrap()
    }

    fn gens(spec: &GwaSpec, names: &[&str]) -> Subspace {
        let els: Vec<GwaElement> = names.iter().map(|n| spec.parse_generator(n).unwrap()).collect();
        Subspace::span(els.iter())
    }

    #[test]
    fn base_ring_products() {
        let s = plane_spec("z1", "z2", "1");
        let v = gens(&s, &["1", "z1", "z2"]);
        let mut mul = Multiplier::new(&s);
        assert_eq!(v.product(&v, &mut mul).unwrap().dim(), 6);
        assert_eq!(v.product(&Subspace::new(), &mut mul).unwrap().dim(), 0);
        for m in 0..5 {
            assert_eq!(v.power(m, &mut mul).unwrap().dim(), (m + 1) * (m + 2) / 2);
        }
    }

    #[test]
    fn weyl_growth_is_quadratic() {
        let w = make_weyl();
        let r = growth_sequence(&w, &gens(&w, &["1", "z1", "x", "y"]), 8).unwrap();
        let expect: Vec<usize> = (0..=8).map(|m| (m + 1) * (m + 1)).collect();
        assert_eq!(r.dims, expect);
        assert!(matches!(r.fit, Some(Fit::Polynomial { .. })));
    }

    #[test]
    fn subframe_required() {
        let w = make_weyl();
        assert!(matches!(growth_sequence(&w, &gens(&w, &["x", "y"]), 3), Err(Error::NotSubframe)));
    }

    #[test]
    fn no_fit_below_six() {
        assert_eq!(fit_growth(&[1, 2, 3, 4, 5, 6]), None);
        assert!(matches!(fit_growth(&[1, 2, 4, 8, 16, 32, 64]), Some(Fit::Exponential { .. })));
        let quartic: Vec<usize> = (0..=12).map(|m| m * m * m * m + 1).collect();
        match fit_growth(&quartic) {
            Some(Fit::Polynomial { exponent }) => assert!((exponent - 4.0).abs() < 0.35),
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn heisenberg_zero_has_group_growth() {
        let h = make_heisenberg(0, int(1), int(1)).unwrap();
        let r = growth_sequence(&h, &gens(&h, &["1", "z1", "z1^-1", "z2", "z2^-1", "x", "y"]), 4).unwrap();
        assert_eq!(r.dims, vec![1, 7, 25, 63, 129]);
    }

    #[test]
    fn witness_counts() {
        let s = plane_spec("z2", "z1 + z2^2", "1");
        let z = p2("z2");
        assert_eq!(exponential_witness(&s, &z, 0).unwrap(), 2);
        assert_eq!(exponential_witness(&s, &z, 3).unwrap(), 16);
    }

    #[test]
    fn sandwich_on_shift() {
        let s = plane_spec("z1 + z2", "z2", "z2");
        let v = gens(&s, &["1", "z1", "z2", "z1^2", "z1*z2", "z2^2"]);
        let checks = sandwich_check(&s, &v, 3).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        let unstable = gens(&s, &["1", "z2", "z1*z2"]);
        assert!(matches!(sandwich_check(&s, &unstable, 2), Err(Error::NotStable)));
    }

    #[test]
    fn closure_is_stable() {
        let s = plane_spec("2*z1 + z2^2", "z2 + 1", "z1");
        let v = stable_closure(&s, &[p2("1"), p2("z1")], 50).unwrap();
        assert_eq!(v.dim(), 4);
    }
}
