use num_bigint::BigInt;
use polyrank_core::expansion::{image, DEFAULT_BUDGET};
use polyrank_core::rank::{self, RankMethod};
use polyrank_core::{Polynomial, Rational, VarSet};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn poly(k: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_exp, k), -3i64..=3, prop_oneof![Just(1i64), Just(2), Just(3)]);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let vars = VarSet::numbered(k);
        Polynomial::from_terms(&vars, terms.into_iter().map(|(e, n, d)| (e, q(n, d)))).unwrap()
    })
}

fn point(k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d)), k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(3, 2, 5), b in poly(3, 2, 5), c in poly(3, 2, 5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_rule(a in poly(3, 3, 5), b in poly(3, 3, 5), i in 0usize..3) {
        let lhs = (&a * &b).partial(i);
        let rhs = &(&a.partial(i) * &b) + &(&a * &b.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3, 3, 5), b in poly(3, 3, 5), x in point(3)) {
        prop_assert_eq!((&a * &b).eval(&x).unwrap(), a.eval(&x).unwrap() * b.eval(&x).unwrap());
        prop_assert_eq!((&a + &b).eval(&x).unwrap(), a.eval(&x).unwrap() + b.eval(&x).unwrap());
    }

    #[test]
    fn print_parse_round_trip(a in poly(4, 4, 8)) {
        let text = a.to_string();
        prop_assert_eq!(Polynomial::parse(&text, a.vars()).unwrap(), a);
    }

    #[test]
    fn substitution_agrees_with_evaluation(a in poly(3, 3, 6), x in point(3)) {
        let s = a.substitute(&[(0, x[0].clone()), (2, x[2].clone())]);
        prop_assert!(!s.involves(0) && !s.involves(2));
        prop_assert_eq!(s.eval(&x).unwrap(), a.eval(&x).unwrap());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(3, 2, 4), b in poly(3, 2, 4)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn pow_matches_repeated_product(a in poly(2, 2, 3), e in 0u32..5) {
        let mut r = Polynomial::one(a.vars());
        for _ in 0..e {
            r = &r * &a;
        }
        prop_assert_eq!(a.pow(e), r);
    }

    #[test]
    fn rank_is_invariant_under_variable_permutation(a in poly(3, 2, 6), perm in Just(vec![2usize, 0, 1])) {
        prop_assume!(!a.is_zero());
        let r = rank::rank(&a, RankMethod::Exact).unwrap();
        let b = a.permute(&perm);
        let s = rank::rank(&b, RankMethod::Exact).unwrap();
        prop_assert_eq!(r.overall, s.overall);
        for (i, &p) in perm.iter().enumerate() {
            prop_assert_eq!(r.per_variable[i], s.per_variable[p]);
        }
    }

    #[test]
    fn rank_is_invariant_under_scaling(a in poly(3, 2, 6), c in (1i64..=5, 1i64..=4)) {
        prop_assume!(!a.is_zero());
        let scaled = a.scale(&q(-c.0, c.1));
        prop_assert_eq!(rank::rank(&a, RankMethod::Exact).unwrap(), rank::rank(&scaled, RankMethod::Exact).unwrap());
    }

    #[test]
    fn randomized_rank_never_exceeds_exact(a in poly(4, 2, 6), seed in any::<u64>()) {
        prop_assume!(!a.is_zero());
        for i in 0..4 {
            let exact = rank::rank_in(&a, i, RankMethod::Exact).unwrap().rank;
            let rnd = rank::rank_in(&a, i, RankMethod::Randomized { trials: 1, seed }).unwrap();
            prop_assert!(rnd.rank <= exact);
            prop_assert!(exact <= 3);
        }
    }

    #[test]
    fn image_bounds_and_monotonicity(a in poly(3, 2, 5), extra in -9i64..=9) {
        let small: Vec<Vec<Rational>> = vec![(1..=3).map(|v| q(v, 1)).collect(); 3];
        let mut big = small.clone();
        if !big[1].contains(&q(extra, 1)) {
            big[1].push(q(extra, 1));
        }
        let s = image(&a, &small, DEFAULT_BUDGET).unwrap();
        let b = image(&a, &big, DEFAULT_BUDGET).unwrap();
        prop_assert!(!s.is_empty() && s.len() <= 27);
        prop_assert!(s.is_subset_of(&b));
    }

    #[test]
    fn image_is_invariant_under_consistent_permutation(a in poly(3, 2, 5)) {
        let sets = vec![vec![q(0, 1), q(2, 1)], vec![q(-1, 1), q(1, 2), q(3, 1)], vec![q(5, 1)]];
        // variable i of `a` becomes variable perm[i] of `b`
        let perm = [1usize, 2, 0];
        let b = a.permute(&perm);
        let mut permuted = vec![Vec::new(); 3];
        for (i, &p) in perm.iter().enumerate() {
            permuted[p] = sets[i].clone();
        }
        let x = image(&a, &sets, DEFAULT_BUDGET).unwrap();
        let y = image(&b, &permuted, DEFAULT_BUDGET).unwrap();
        prop_assert!(x.same_values(&y));
    }
}
