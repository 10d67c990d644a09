use gwa_core::gwa::*;
use gwa_core::parse::parse_poly;
use gwa_core::plane::PlaneEndo;
use gwa_core::poly::{MultiPoly, RingKind};
use gwa_core::random;
use gwa_core::scalar::int;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Tok {
    D(MultiPoly),
    X,
    Y,
}

/// Leftmost single-step rewriting with the four defining relations.
fn rewrite(spec: &GwaSpec, word: Vec<Tok>) -> GwaElement {
    let mut stack = vec![word];
    let mut out = GwaElement::zero();
    while let Some(w) = stack.pop() {
        let step = w.windows(2).position(|p| {
            matches!((&p[0], &p[1]), (Tok::X, Tok::D(_)) | (Tok::Y, Tok::D(_)) | (Tok::X, Tok::Y) | (Tok::Y, Tok::X) | (Tok::D(_), Tok::D(_)))
        });
        let Some(k) = step else {
            let mut coeff = MultiPoly::one(spec.base().kind, spec.base().n);
            let mut deg = 0i64;
            for t in &w {
                match t {
                    Tok::D(d) => coeff = d.clone(),
                    Tok::X => deg += 1,
                    Tok::Y => deg -= 1,
                }
            }
            out = out.add(&GwaElement::term(deg, coeff));
            continue;
        };
        let repl = match (&w[k], &w[k + 1]) {
            (Tok::X, Tok::D(d)) => vec![Tok::D(spec.sigma().apply(d).unwrap()), Tok::X],
            (Tok::Y, Tok::D(d)) => vec![Tok::D(spec.sigma_inverse().apply(d).unwrap()), Tok::Y],
            (Tok::Y, Tok::X) => vec![Tok::D(spec.a().clone())],
            (Tok::X, Tok::Y) => vec![Tok::D(spec.sigma().apply(spec.a()).unwrap())],
            (Tok::D(d), Tok::D(e)) => vec![Tok::D(d * e)],
            _ => unreachable!(),
        };
        let mut next = w[..k].to_vec();
        next.extend(repl);
        next.extend_from_slice(&w[k + 2..]);
        stack.push(next);
    }
    out
}

fn words(u: &GwaElement) -> Vec<Vec<Tok>> {
    u.components()
        .map(|(i, d)| {
            let mut w = vec![Tok::D(d.clone())];
            let t = if i > 0 { Tok::X } else { Tok::Y };
            w.extend(std::iter::repeat_n(t, i.unsigned_abs() as usize));
            w
        })
        .collect()
}

fn oracle_mul(spec: &GwaSpec, u: &GwaElement, v: &GwaElement) -> GwaElement {
    let mut out = GwaElement::zero();
    for a in words(u) {
        for b in words(v) {
            let mut w = a.clone();
            w.extend(b);
            out = out.add(&rewrite(spec, w));
        }
    }
    out
}

fn fixture(which: u8, seed: u64) -> GwaSpec {
    match which % 4 {
        0 => make_weyl(),
        1 => make_heisenberg(1, int(2), int(-1)).unwrap(),
        2 => make_heisenberg(-2, int(1), int(3)).unwrap(),
        _ => random::triangular_spec(&mut random::rng(seed)),
    }
}

fn weyl_h() -> GwaElement {
    GwaElement::base(parse_poly("z1", RingKind::Polynomial, 1).unwrap())
}

#[test]
fn weyl_commutator() {
    let w = make_weyl();
    let (x, y) = (w.x(), w.y());
    let yx = gwa_mul(&w, &y, &x).unwrap();
    let xy = gwa_mul(&w, &x, &y).unwrap();
    assert_eq!(yx.to_string(), "(z1)");
    assert_eq!(xy.to_string(), "(z1 - 1)");
    assert_eq!(yx.sub(&xy), w.one());
}

#[test]
fn weyl_shift_rules() {
    let w = make_weyl();
    let xh = gwa_mul(&w, &w.x(), &weyl_h()).unwrap();
    assert_eq!(xh.to_string(), "(z1 - 1)*x");
    let x2 = gwa_mul(&w, &w.x(), &w.x()).unwrap();
    let x2y = gwa_mul(&w, &x2, &w.y()).unwrap();
    assert_eq!(x2y, oracle_mul(&w, &x2, &w.y()));
    assert_eq!(x2y.to_string(), "(z1 - 2)*x");
}

#[test]
fn add_and_scale() {
    let w = make_weyl();
    let u = gwa_mul(&w, &weyl_h(), &w.x()).unwrap();
    assert_eq!(gwa_add(&w, &u, &GwaElement::zero()).unwrap(), u);
    assert!(gwa_add(&w, &u, &gwa_scale(&w, &u, &int(-1)).unwrap()).unwrap().is_zero());
    let two_x = gwa_add(&w, &w.x(), &w.x()).unwrap();
    assert_eq!(two_x.to_string(), "(2)*x");
}

#[test]
fn spec_mismatch_rejected() {
    let w = make_weyl();
    let h = make_heisenberg(1, int(1), int(1)).unwrap();
    assert!(gwa_mul(&w, &w.x(), &h.var(0)).is_err());
}

#[test]
fn power_defining_element() {
    let w = make_weyl();
    assert_eq!(power_subalgebra_defelt(&w, 1).unwrap(), *w.a());
    let b = power_subalgebra_defelt(&w, 2).unwrap();
    assert_eq!(b, parse_poly("z1^2 + z1", RingKind::Polynomial, 1).unwrap());
    let y2 = gwa_mul(&w, &w.y(), &w.y()).unwrap();
    let x2 = gwa_mul(&w, &w.x(), &w.x()).unwrap();
    assert_eq!(oracle_mul(&w, &y2, &x2), GwaElement::base(b));
    let p = |s: &str| parse_poly(s, RingKind::Polynomial, 2).unwrap();
    let id = GwaSpec::new(Base::polynomial(2), Sigma::Plane(PlaneEndo::identity()), p("z1 + z2")).unwrap();
    assert_eq!(power_subalgebra_defelt(&id, 3).unwrap(), p("z1^3 + 3*z1^2*z2 + 3*z1*z2^2 + z2^3"));
}

#[test]
fn power_lemma_fixtures() {
    let w = make_weyl();
    let h1 = make_heisenberg(1, int(1), int(1)).unwrap();
    for m in 1..=4 {
        assert!(verify_power_lemma(&w, m).unwrap());
    }
    for m in 1..=3 {
        assert!(verify_power_lemma(&h1, m).unwrap());
    }
}

#[test]
fn subspace_dimensions() {
    let s = random::triangular_spec(&mut random::rng(3));
    let v = Subspace::span(["1", "z1", "z2"].iter().map(|g| s.parse_generator(g).unwrap()).collect::<Vec<_>>().iter());
    let mut mul = Multiplier::new(&s);
    assert_eq!(v.product(&v, &mut mul).unwrap().dim(), 6);
    assert_eq!(v.product(&Subspace::new(), &mut mul).unwrap().dim(), 0);
    for m in 0..=5 {
        assert_eq!(v.power(m, &mut mul).unwrap().dim(), (m + 1) * (m + 2) / 2);
    }
}

fn laurent_gens(spec: &GwaSpec) -> Subspace {
    let g: Vec<GwaElement> =
        ["1", "z1", "z1^-1", "z2", "z2^-1", "x", "y"].iter().map(|s| spec.parse_generator(s).unwrap()).collect();
    Subspace::span(g.iter())
}

#[test]
fn heisenberg_sign_symmetry() {
    let h2 = make_heisenberg(2, int(1), int(1)).unwrap();
    let hm2 = make_heisenberg(-2, int(1), int(1)).unwrap();
    let a = growth_sequence(&h2, &laurent_gens(&h2), 8).unwrap();
    let b = growth_sequence(&hm2, &laurent_gens(&hm2), 8).unwrap();
    assert_eq!(a.dims, b.dims);
}

#[test]
fn weyl_fit_and_sum_law() {
    let w = make_weyl();
    let g: Vec<GwaElement> = ["1", "z1", "x", "y"].iter().map(|s| w.parse_generator(s).unwrap()).collect();
    let r = growth_sequence(&w, &Subspace::span(g.iter()), 12).unwrap();
    let Some(Fit::Polynomial { exponent }) = r.fit else { panic!("{:?}", r.fit) };
    assert!((exponent - 2.0).abs() <= 0.35, "{exponent}");
    assert!(r.dims.windows(2).all(|p| p[0] <= p[1]));
    let sums: Vec<usize> = r.dims.iter().scan(0, |s, d| {
        *s += d;
        Some(*s)
    }).collect();
    let Some(Fit::Polynomial { exponent: up }) = fit_growth(&sums) else { panic!() };
    assert!((up - exponent - 1.0).abs() <= 0.35, "{up} vs {exponent}");
    let mut incs = vec![1];
    incs.extend(r.dims.windows(2).map(|p| p[1] - p[0]));
    let Some(Fit::Polynomial { exponent: down }) = fit_growth(&incs) else { panic!() };
    assert!((exponent - down - 1.0).abs() <= 0.35, "{down} vs {exponent}");
}

#[test]
fn henon_is_exponential() {
    let p = |s: &str| parse_poly(s, RingKind::Polynomial, 2).unwrap();
    let spec = GwaSpec::new(Base::polynomial(2), Sigma::Plane(PlaneEndo::parse("z2", "z1 + z2^2").unwrap()), p("1")).unwrap();
    for q in 0..=3 {
        assert_eq!(exponential_witness(&spec, &p("z2"), q).unwrap(), 1 << (q + 1));
    }
    let g: Vec<GwaElement> = ["1", "z1", "z2", "x"].iter().map(|s| spec.parse_generator(s).unwrap()).collect();
    let r = growth_sequence(&spec, &Subspace::span(g.iter()), 7).unwrap();
    assert!(matches!(r.fit, Some(Fit::Exponential { .. })), "{:?}", r);
}

#[test]
fn sandwich_examples() {
    let p = |s: &str| parse_poly(s, RingKind::Polynomial, 2).unwrap();
    let deg2: Vec<MultiPoly> = ["1", "z1", "z2", "z1^2", "z1*z2", "z2^2"].iter().map(|s| p(s)).collect();
    let v = base_span(&deg2);
    let shift = GwaSpec::new(Base::polynomial(2), Sigma::Plane(PlaneEndo::parse("z1 - 1", "z2").unwrap()), p("z1")).unwrap();
    assert!(sandwich_check(&shift, &v, 6).unwrap().iter().all(|c| c.pass));
    let tri = GwaSpec::new(Base::polynomial(2), Sigma::Plane(PlaneEndo::parse("z1 + z2", "z2").unwrap()), p("z2")).unwrap();
    assert!(sandwich_check(&tri, &v, 6).unwrap().iter().all(|c| c.pass));
}

fn elem(spec: &GwaSpec, seed: u64) -> GwaElement {
    random::element(&mut random::rng(seed), spec, 3, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_rewriter(which in 0u8..4, seed in any::<u64>()) {
        let spec = fixture(which, seed);
        let (u, v) = (elem(&spec, seed ^ 1), elem(&spec, seed ^ 2));
        prop_assert_eq!(gwa_mul(&spec, &u, &v).unwrap(), oracle_mul(&spec, &u, &v));
    }

    #[test]
    fn associative(which in 0u8..4, seed in any::<u64>()) {
        let spec = fixture(which, seed);
        let (u, v, w) = (elem(&spec, seed ^ 1), elem(&spec, seed ^ 2), elem(&spec, seed ^ 3));
        let mut mul = Multiplier::new(&spec);
        let uv = mul.mul(&u, &v).unwrap();
        let vw = mul.mul(&v, &w).unwrap();
        let left = mul.mul(&uv, &w).unwrap();
        let right = mul.mul(&u, &vw).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn graded(which in 0u8..4, seed in any::<u64>(), i in -3i64..=3, j in -3i64..=3) {
        let spec = fixture(which, seed);
        let mut rng = random::rng(seed);
        let d = random::element(&mut rng, &spec, 0, 2).component(0).cloned();
        let e = random::element(&mut rng, &spec, 0, 2).component(0).cloned();
        if let (Some(d), Some(e)) = (d, e) {
            let p = gwa_mul(&spec, &GwaElement::term(i, d), &GwaElement::term(j, e)).unwrap();
            prop_assert!(p.degrees().all(|k| k == i + j));
        }
    }

    #[test]
    fn defining_relations(which in 0u8..4, seed in any::<u64>()) {
        let spec = fixture(which, seed);
        let Some(d) = elem(&spec, seed).components().next().map(|(_, d)| d.clone()) else { return Ok(()) };
        let de = GwaElement::base(d.clone());
        let sd = GwaElement::base(spec.sigma().apply(&d).unwrap());
        let sid = GwaElement::base(spec.sigma_inverse().apply(&d).unwrap());
        prop_assert_eq!(gwa_mul(&spec, &spec.x(), &de).unwrap(), gwa_mul(&spec, &sd, &spec.x()).unwrap());
        prop_assert_eq!(gwa_mul(&spec, &spec.y(), &de).unwrap(), gwa_mul(&spec, &sid, &spec.y()).unwrap());
        prop_assert_eq!(gwa_mul(&spec, &spec.y(), &spec.x()).unwrap(), GwaElement::base(spec.a().clone()));
        prop_assert_eq!(
            gwa_mul(&spec, &spec.x(), &spec.y()).unwrap(),
            GwaElement::base(spec.sigma().apply(spec.a()).unwrap())
        );
    }

    #[test]
    fn power_lemma_random_triangular(seed in any::<u64>(), m in 1u32..=4) {
        let spec = random::triangular_spec(&mut random::rng(seed));
        prop_assert!(verify_power_lemma(&spec, m).unwrap());
    }
}
