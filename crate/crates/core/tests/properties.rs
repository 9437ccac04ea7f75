mod common;

use abmod::format::{module_from_json, module_to_json};
use abmod::script::{parse_module, to_script};
use abmod::structure::{endomorphism_kind, krull_schmidt, smith_normal_form, EndoKind};
use abmod::{solve_hom, ABModule, BMatrix, BSeries, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: usize = 6;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn series() -> impl Strategy<Value = BSeries> {
    prop::collection::vec(-3i64..=3, 3).prop_map(|c| BSeries::from_ints(&c, P))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BMatrix> {
    prop::collection::vec(series(), rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<BSeries>> = v.chunks(cols).map(|c| c.to_vec()).collect();
        BMatrix::from_rows(rows_v).unwrap()
    })
}

fn module() -> impl Strategy<Value = ABModule> {
    (1usize..=3)
        .prop_flat_map(|n| matrix(n, n))
        .prop_map(|a| ABModule::from_matrix(a).unwrap())
}

fn big() -> impl Strategy<Value = i64> {
    prop_oneof![
        -5i64..=5,
        (i64::MAX - 10)..=i64::MAX,
        i64::MIN + 1..=(i64::MIN + 10),
        any::<i64>()
    ]
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (
        big(),
        big().prop_filter("nonzero", |d| *d != 0),
        big(),
        big().prop_filter("nonzero", |d| *d != 0),
    )
        .prop_map(|(a, b, c, d)| Scalar::gaussian((a, b), (c, d)))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scalar_field_laws_across_word_boundary(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        let parsed: Scalar = (&x * &y).to_string().parse().unwrap();
        prop_assert_eq!(parsed, &x * &y);
    }

    #[test]
    fn every_presentation_satisfies_the_commutation_relation(e in module()) {
        prop_assert!(e.validate().passed);
        prop_assert!(e.dual().validate().passed);
        prop_assert!(e.dual().dual().same_presentation(&e));
        prop_assert!(e.conjugate().conjugate().same_presentation(&e));
        prop_assert!(e.adjoint().same_presentation(&e.conjugate().dual()));
    }

    #[test]
    fn script_and_json_round_trip(e in module()) {
        let back = parse_module(&to_script(&e), 99, None).unwrap();
        prop_assert!(back.same_presentation(&e));
        prop_assert_eq!(back.precision(), e.precision());
        let json = module_from_json(&module_to_json(&e)).unwrap();
        prop_assert!(json.same_presentation(&e));
    }

    #[test]
    fn smith_form_reconstructs(m in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c))) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.u.mul(&m).mul(&snf.v).eq_at(&snf.d));
        prop_assert!(!snf.u.constant_term().det().is_zero());
        prop_assert!(!snf.v.constant_term().det().is_zero());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                let entry = snf.d.get(i, j);
                if i != j {
                    prop_assert!(entry.is_zero());
                } else {
                    match snf.diagonal[i] {
                        Some(k) => prop_assert!(entry.eq_at(&BSeries::monomial(Scalar::one(), k, P))),
                        None => prop_assert!(entry.is_zero()),
                    }
                }
            }
        }
        let vals: Vec<usize> = snf.diagonal.iter().map(|d| d.unwrap_or(usize::MAX)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn solver_output_intertwines(e in module(), f in module()) {
        let h = solve_hom(&e, &f).unwrap();
        prop_assert_eq!(h.dim, h.morphisms.len());
        for m in &h.morphisms {
            prop_assert!(m.verify_by_evaluation());
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    /// `Hom(E_λ, E_μ)` is spanned by `b^{λ-μ}` when `λ - μ` is a nonnegative integer
    /// visible at the output precision.
    #[test]
    fn hom_between_elementary_modules(l in -8i64..=8, m in -8i64..=8, den in prop::sample::select(vec![1i64, 2, 3])) {
        let (lam, mu) = (Scalar::ratio(l, den), Scalar::ratio(m, den));
        let h = solve_hom(&ABModule::elementary(&lam, 12), &ABModule::elementary(&mu, 12)).unwrap();
        let diff = (&lam - &mu).as_integer();
        match diff {
            Some(k) if k >= 0 && (k as usize) < h.precision => {
                prop_assert_eq!(h.dim, 1);
                let g = h.morphisms[0].matrix().get(0, 0);
                prop_assert_eq!(g.valuation(), Some(k as usize));
            }
            _ => prop_assert_eq!(h.dim, 0),
        }
    }

    #[test]
    fn rank_two_indecomposables_obey_trichotomy(num in -6i64..=6, c in prop::collection::vec(-4i64..=4, 2)) {
        let lam = Scalar::ratio(num, 2);
        let text = format!("lam = {lam}\nbasis x y\na x = lam*b*x\na y = lam*b*y + x");
        let e = parse_module(&text, 10, None).unwrap();
        let end = solve_hom(&e, &e).unwrap();
        let coeffs: Vec<Scalar> = c.iter().map(|&x| Scalar::from_int(x)).collect();
        let ep = e.truncate(end.precision);
        let phi = end.combination(&coeffs, &ep, &ep);
        prop_assert!(phi.verify_by_evaluation());
        prop_assert_ne!(endomorphism_kind(&phi), EndoKind::Neither);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn decomposition_invariant_under_base_change(l1 in -2i64..=2, l2 in -2i64..=2, seed in any::<u64>()) {
        let e = ABModule::elementary(&Scalar::from_int(l1), 8)
            .direct_sum(&common::unipotent_shift().truncate(8))
            .unwrap()
            .direct_sum(&ABModule::elementary(&Scalar::from_int(l2), 8))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_base_change(4, 8, &mut rng);
        let f = e.base_change(&t).unwrap();
        let a = krull_schmidt(&e, 32, 0).unwrap();
        let b = krull_schmidt(&f, 32, seed).unwrap();
        prop_assert!(a.certified && b.certified);
        prop_assert_eq!(a.rank_profile(), b.rank_profile());
        prop_assert!(b.witness.is_invertible());
        prop_assert!(b.witness.verify_by_evaluation());
    }
}
