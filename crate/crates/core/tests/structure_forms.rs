mod common;

use abmod::format;
use abmod::forms::{
    classify_self_adjoint, curry, hermitianize, hyperbolic_form, uncurry, FormType, SesquilinearForm, VerdictKind,
};
use abmod::saito::{default_normalization, extract_pairings, find_duality, symmetrize_delta};
use abmod::script::parse_module;
use abmod::structure::{
    candidate_exponents, composition_series, is_regular, monomials_of_type, quotient, v_lambda_min, Regularity,
};
use abmod::{solve_hom, ABModule, ABMorphism, Error, Scalar};
use common::*;

#[test]
fn elementary_modules_are_regular_with_their_exponent_as_residue() {
    for l in [s(0, 1), s(5, 2), s(-1, 3)] {
        let e = ABModule::elementary(&l, N);
        match is_regular(&e, 10) {
            Regularity::Regular(sat) => {
                assert_eq!(sat.steps, 0);
                assert_eq!(sat.residue().get(0, 0), &l);
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn saturation_of_a_nilpotent_pole() {
    match is_regular(&r2(), 24) {
        Regularity::Regular(sat) => {
            assert!(sat.steps >= 1);
            assert!(sat.presentation.a_matrix().constant_term().is_zero());
            assert!(sat.presentation.validate().passed);
        }
        other => panic!("{other:?}"),
    }
    let classes = candidate_exponents(&r2(), 4).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].representative, Scalar::zero());
    assert_eq!(classes[0].minimum, Some(Scalar::zero()));
}

#[test]
fn monomials_are_normalized_by_valuation() {
    let e = el(1, 2).direct_sum(&el(3, 2)).unwrap();
    let monos = monomials_of_type(&e, &s(3, 2)).unwrap();
    let mut exps: Vec<Scalar> = monos.iter().map(|m| m.exponent.clone()).collect();
    exps.sort_by(|a, b| a.lex_cmp(b));
    assert_eq!(exps, vec![s(1, 2), s(3, 2)]);
    for m in &monos {
        // a x = λ b x
        let ax = e.a_apply(&m.element).unwrap();
        let lbx = m
            .element
            .times_b()
            .scale_series(&abmod::BSeries::constant(m.exponent.clone(), N));
        assert!(ax
            .coords
            .iter()
            .zip(&lbx.coords)
            .all(|(l, r)| l.truncate(N - 2).eq_at(&r.truncate(N - 2))));
    }
}

#[test]
fn quotient_by_the_minimal_monomials() {
    let e = el(0, 1).direct_sum(&el(1, 1)).unwrap();
    let sub = v_lambda_min(&e).unwrap();
    let (q, proj) = quotient(&e, &sub).unwrap();
    assert_eq!(q.rank(), 1);
    assert!(proj.verify_by_evaluation());
    let steps = composition_series(&e).unwrap();
    let exps: Vec<Scalar> = steps.iter().map(|s| s.exponent.clone()).collect();
    assert_eq!(exps, vec![s(0, 1), s(1, 1)]);
}

#[test]
fn hyperbolic_form_is_hermitian_and_nondegenerate() {
    for g in [el(1, 1), unipotent_shift(), r2()] {
        let h = hyperbolic_form(&g).unwrap();
        assert!(h.is_compatible());
        assert!(h.compatible_by_evaluation());
        assert!(h.is_nondegenerate());
        assert_eq!(h.hermitian_type(), FormType::Hermitian);
        let back = uncurry(&curry(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}

#[test]
fn parity_split_reassembles() {
    let e = el(0, 1).direct_sum(&el(0, 1)).unwrap();
    let adj = e.adjoint();
    let homs = solve_hom(&e, &adj).unwrap();
    assert_eq!(homs.dim, 4);
    let f = homs.combination(
        &[
            Scalar::one(),
            Scalar::from_int(2),
            Scalar::from_int(-1),
            Scalar::from_int(3),
        ],
        &e.truncate(homs.precision),
        &adj.truncate(homs.precision),
    );
    let h = uncurry(&f).unwrap();
    let (plus, minus) = h.split_parity();
    assert_eq!(plus.hermitian_type(), FormType::Hermitian);
    assert_eq!(minus.hermitian_type(), FormType::Antihermitian);
    let sum = SesquilinearForm::new(h.module.clone(), plus.pairing.add(&minus.pairing)).unwrap();
    assert_eq!(sum, h);
}

#[test]
fn non_self_adjoint_modules_have_no_nondegenerate_form() {
    assert!(matches!(hermitianize(&el(1, 1), 32, 0), Err(Error::NotSelfAdjoint)));
    let v = hermitianize(&el(1, 1).direct_sum(&el(-1, 1)).unwrap(), 32, 0).unwrap();
    assert_eq!(v.kind, VerdictKind::Both);
}

#[test]
fn self_adjoint_classification() {
    let pair = el(1, 1).direct_sum(&el(-1, 1)).unwrap();
    let r = classify_self_adjoint(&pair, 32, 0).unwrap();
    assert!(r.module_is_self_adjoint);
    assert_eq!(r.pairs.len(), 1);
    assert!(r.self_adjoint.is_empty());

    let lone = classify_self_adjoint(&el(1, 1), 32, 0).unwrap();
    assert!(!lone.module_is_self_adjoint);
    assert_eq!(lone.unmatched.len(), 1);

    let r4 = classify_self_adjoint(&rank4(), 32, 0).unwrap();
    assert!(r4.module_is_self_adjoint);
    assert_eq!(r4.self_adjoint.len(), 1);
    let verdict = r4.self_adjoint[0].verdict.as_ref().unwrap();
    assert_eq!(verdict.kind, VerdictKind::Antihermitian);
}

#[test]
fn symmetrization_is_seed_independent() {
    let delta = Scalar::from_int(3);
    let norm = default_normalization(&delta);
    for seed in [0, 3, 9] {
        let m = find_duality(&self_dual3(), &delta, 32, seed).unwrap();
        let sym = symmetrize_delta(&m, &delta, &norm).unwrap();
        assert!(sym.reports.iter().all(|r| r.passed));
        let fam = &sym.family;
        assert_eq!(fam.s.conjugate().transpose(), fam.s);
    }
}

#[test]
fn json_documents_round_trip() {
    let e = rank4();
    let v = format::module_to_json(&e);
    assert_eq!(format::object_kind(&v).unwrap(), "module");
    assert!(format::module_from_json(&v).unwrap().same_presentation(&e));

    let homs = solve_hom(&e, &e.adjoint()).unwrap();
    let f = &homs.morphisms[0];
    let back = format::morphism_from_json(&format::morphism_to_json(f)).unwrap();
    assert_eq!(back.matrix(), f.matrix());
    assert!(back.verify_by_evaluation());

    let h = uncurry(f).unwrap();
    assert_eq!(format::form_from_json(&format::form_to_json(&h)).unwrap(), h);

    let delta = Scalar::from_int(3);
    let m = find_duality(&el(3, 2), &delta, 32, 0).unwrap();
    let fam = extract_pairings(&m, &delta, &default_normalization(&delta)).unwrap();
    let (fam2, module) = format::family_from_json(&format::family_to_json(&fam, Some(&el(3, 2)))).unwrap();
    assert_eq!(fam2, fam);
    assert!(module.unwrap().same_presentation(&el(3, 2)));
}

#[test]
fn tampered_morphism_is_rejected() {
    let e = el(0, 1);
    let id = ABMorphism::identity(&e);
    let mut v = format::morphism_to_json(&id);
    v["matrix"] = serde_json::json!([[["1", "1"]]]);
    assert!(format::morphism_from_json(&v).is_err());
}

#[test]
fn script_errors_carry_positions() {
    let err = parse_module("basis x\na x = pi*b*x", 8, None).unwrap_err();
    assert!(
        matches!(err, Error::NonRationalCoefficient { line: 2, column: 7, .. }),
        "{err:?}"
    );
    let err = parse_module("basis x\na x = c*x", 8, None).unwrap_err();
    assert!(
        matches!(err, Error::UndeclaredSymbol { line: 2, column: 7, .. }),
        "{err:?}"
    );
    let err = parse_module("basis x y\na x = b*x", 8, None).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, column: 9, .. }), "{err:?}");
    let e = parse_module("precision 5\nbasis x\na x = b*x", 8, Some(7)).unwrap();
    assert_eq!(e.precision(), 7);
}
