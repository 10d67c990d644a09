use gwa_core::parse::parse_poly;
use gwa_core::poly::{MultiPoly, RingKind};
use gwa_core::random;
use gwa_core::scalar::{frac, int, Scalar};
use gwa_core::smc::*;
use proptest::prelude::*;

fn p(s: &str, n: usize) -> MultiPoly {
    parse_poly(s, RingKind::Polynomial, n).unwrap()
}

/// `1 / (2^n 5^{n(n+1)/2} n!)` with machine integers.
fn closed_form(n: u32) -> Scalar {
    let fact: i64 = (1..=n as i64).product();
    frac(1, 2i64.pow(n) * 5i64.pow(n * (n + 1) / 2) * fact)
}

fn random_subspace(seed: u64, n: usize) -> FilteredSubspace {
    let mut rng = random::rng(seed);
    let k = 1 + (seed % 4) as usize;
    let polys: Vec<MultiPoly> = (0..k).map(|_| random::nonzero_poly(&mut rng, n, 3, 3, 3)).collect();
    FilteredSubspace::new(n, &polys).unwrap()
}

#[test]
fn constants_closed_form_and_recursion() {
    let mut c = int(1);
    for n in 0..=6 {
        assert_eq!(smc_constant(n), c, "n = {n}");
        if n <= 4 {
            assert_eq!(smc_constant(n), closed_form(n));
        }
        c = &c / (int(2 * (n as i64 + 1)) * int(5).pow(n as i32 + 1));
    }
}

#[test]
fn line_instance_margins() {
    let r = verify_smc_instance(1, &p("1", 1), &[], 8).unwrap();
    for row in &r.rows {
        assert_eq!(row.dim, row.m + 1);
        assert_eq!(row.threshold, frac(2 * row.m as i64, 10));
    }
    assert!(r.passed());
    assert!(r.note.contains("not a counterexample"));
}

#[test]
fn gr_examples() {
    let w = FilteredSubspace::new(1, &[p("1", 1), p("z1", 1)]).unwrap();
    assert_eq!(gr_subspace(&w).dim(), 2);
    let w = FilteredSubspace::new(2, &[p("z1 + z2^2", 2), p("z2^2 + 1", 2)]).unwrap();
    let g = gr_subspace(&w);
    let mut got: Vec<String> = g.basis().iter().map(|q| q.to_string()).collect();
    got.sort();
    assert_eq!(got, vec!["z1 - 1", "z2^2"]);
}

#[test]
fn case1_examples() {
    let k = |power| Part { polys: vec![p("1", 0)], power };
    assert!(case1_direct_sum_check(1, &[k(0), k(1)], 8).unwrap().passed());
    let v1 = vec![p("1", 1), p("z1", 1)];
    let parts = [Part { polys: v1.clone(), power: 0 }, Part { polys: v1.clone(), power: 2 }];
    assert!(case1_direct_sum_check(2, &parts, 6).unwrap().passed());
    assert!(case1_direct_sum_check(2, &parts[..1], 6).is_err());
    let unordered = [Part { polys: v1.clone(), power: 2 }, Part { polys: v1, power: 0 }];
    assert!(case1_direct_sum_check(2, &unordered, 6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gr_preserves_dimension(seed in any::<u64>(), n in 1usize..=3) {
        let w = random_subspace(seed, n);
        prop_assert_eq!(gr_subspace(&w).dim(), w.dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gr_powers_are_smaller(seed in any::<u64>(), n in 1usize..=2) {
        let w = random_subspace(seed, n);
        let g = gr_subspace(&w);
        let (dw, dg) = (w.power_dims(4), g.power_dims(4));
        for m in 0..=4 {
            prop_assert!(dw[m] >= dg[m], "m={} {:?} {:?}", m, dw, dg);
        }
    }

    #[test]
    fn random_instances_pass(seed in any::<u64>(), n in 1usize..=2) {
        let (a, extra) = random::smc_instance(&mut random::rng(seed), n);
        let r = verify_smc_instance(n, &a, &extra, 6).unwrap();
        prop_assert!(r.passed(), "{}", r.summary());
    }
}
