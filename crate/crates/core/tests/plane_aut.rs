use gwa_core::error::Error;
use gwa_core::plane::*;
use gwa_core::poly::Degree;
use gwa_core::random;
use gwa_core::scalar::int;
use proptest::prelude::*;

fn endo(a: &str, b: &str) -> PlaneEndo {
    PlaneEndo::parse(a, b).unwrap()
}

fn conj(d: &TameWord, tau: &PlaneEndo) -> PlaneEndo {
    plane_compose(&d.inverse().compose(), &plane_compose(tau, &d.compose()))
}

fn deg(p: &PlaneEndo) -> i64 {
    p.max_degree()
}

#[test]
fn henon_is_lane() {
    let h = endo("z2", "z1 + z2^2");
    let v = classify_gk_plane(&h).unwrap();
    assert_eq!(v.summary(), "gkdim = infinity");
    let GkVerdictPlane::Infinity { lane } = &v else { panic!() };
    assert_eq!((lane.s, lane.degrees.clone()), (1, vec![2]));
    assert!(v.verify(&h));
    let DegreeGrowth::ExponentialWitness { var, degrees } = degree_growth_certificate(&h, &int(2), 4).unwrap() else {
        panic!()
    };
    assert_eq!((var, degrees), (2, vec![1, 2, 4, 8, 16]));
}

#[test]
fn triangular_and_affine_inputs() {
    for (a, b) in [("z1 + z2^2", "z2 + 1"), ("z2", "z1"), ("-z2", "z1"), ("2*z1 + 3", "z2 - 1")] {
        let s = endo(a, b);
        let v = classify_gk_plane(&s).unwrap();
        assert!(v.is_three() && v.verify(&s), "{a}, {b}");
    }
}

#[test]
fn non_automorphisms() {
    for (a, b) in [("z1^2", "z2"), ("z1*z2", "z2"), ("z1 + z2^2", "z1 + z2^2"), ("0", "z2")] {
        assert!(matches!(tame_decompose(&endo(a, b)), Err(Error::NotAnAutomorphism(_))), "{a}, {b}");
    }
}

fn certified_bound(v: &GkVerdictPlane) -> i64 {
    let GkVerdictPlane::Three { certificate } = v else { panic!() };
    let c = certificate.conjugator.compose();
    let ci = certificate.conjugator.inverse().compose();
    let form = match &certificate.form {
        TriangularForm::Triangular(t) => match t.degree() {
            Degree::Finite(d) => d.max(1),
            Degree::NegInfinity => 1,
        },
        TriangularForm::AffineOnly(_) => 1,
    };
    deg(&c) * form * deg(&ci)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recomposition(seed in any::<u64>()) {
        let w = random::tame_word(&mut random::rng(seed), 5, 3);
        let s = w.compose();
        let d = tame_decompose(&s).unwrap();
        prop_assert_eq!(d.compose(), s.clone());
        prop_assert!(plane_compose(&plane_inverse(&s).unwrap(), &s).is_identity());
        prop_assert!(plane_compose(&s, &plane_inverse(&s).unwrap()).is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangular_conjugates(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let tau = random::triangular(&mut rng, 3).to_endo();
        let d = random::tame_word(&mut rng, 3, 2);
        let s = conj(&d, &tau);
        let v = classify_gk_plane(&s).unwrap();
        prop_assert!(v.is_three());
        prop_assert!(v.verify(&s));
        let bound = certified_bound(&v);
        let degs = iterate_degrees(&s, 6);
        prop_assert!(degs.iter().flatten().all(|&e| e <= bound), "{degs:?} > {bound}");
    }

    #[test]
    fn lane_conjugates(seed in any::<u64>(), shape in 0usize..3) {
        let shapes: [&[u32]; 3] = [&[2], &[3], &[2, 2]];
        let mut rng = random::rng(seed);
        let s = random::lane(&mut rng, shapes[shape]);
        let v = classify_gk_plane(&s).unwrap();
        prop_assert!(!v.is_three());
        prop_assert!(v.verify(&s));
        let GkVerdictPlane::Infinity { lane } = &v else { unreachable!() };
        let mut expect = lane.degrees.clone();
        expect.sort();
        let mut got: Vec<i64> = shapes[shape].iter().map(|&d| d as i64).collect();
        got.sort();
        prop_assert_eq!(expect, got);
        let prod = lane.degree_product();
        let steps = if prod <= 3 { 4 } else { 3 };
        let degs = iterate_degrees(&lane.normal_form(), steps);
        for m in 0..=steps {
            prop_assert_eq!(degs[1][m as usize], prod.pow(m));
        }
    }

    #[test]
    fn verdict_is_conjugation_invariant(seed in any::<u64>(), lane in any::<bool>()) {
        let mut rng = random::rng(seed);
        let s = if lane { random::lane(&mut rng, &[2]) } else { random::triangular(&mut rng, 2).to_endo() };
        let d = random::tame_word(&mut rng, 2, 2);
        let t = conj(&d, &s);
        prop_assert_eq!(classify_gk_plane(&s).unwrap().is_three(), classify_gk_plane(&t).unwrap().is_three());
    }
}
