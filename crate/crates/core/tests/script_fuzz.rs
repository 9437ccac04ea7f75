use abmod::script::parse_module;
use abmod::{BSeries, Scalar};
use proptest::prelude::*;

const P: usize = 8;
const SYMS: [&str; 3] = ["x", "y", "z"];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// `c0 + c1*b + c2*b^2` written out term by term, each coefficient a fraction.
fn render_poly(coeffs: &[(i64, i64)]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .map(|(k, (n, d))| match k {
            0 => format!("({n}/{d})"),
            1 => format!("({n}/{d})*b"),
            _ => format!("({n}/{d})*b^{k}"),
        })
        .collect();
    format!("({})", terms.join(" + "))
}

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, 1i64..=5)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn arbitrary_text_never_panics(text in "[ a-z0-9+*/^()=#.\\-\\n_']{0,80}") {
        let _ = parse_module(&text, P, None);
    }

    #[test]
    fn token_soup_never_panics(parts in prop::collection::vec(
        prop::sample::select(vec!["a", "b", "x", "y", "=", "+", "-", "*", "/", "^", "(", ")", "1", "2/3",
            "i", "pi", "basis", "precision", "\n", " ", "0", "12", "#"]), 0..40)) {
        let _ = parse_module(&parts.concat(), P, None);
    }

    #[test]
    fn rendered_relations_parse_to_their_matrix(
        n in 1usize..=3,
        entries in prop::collection::vec(prop::collection::vec(coeff(), 3), 9),
    ) {
        let mut text = format!("precision {P}\nbasis {}\n", SYMS[..n].join(" "));
        for j in 0..n {
            let terms: Vec<String> = (0..n)
                .map(|i| format!("{}*{}", render_poly(&entries[i * 3 + j]), SYMS[i]))
                .collect();
            text.push_str(&format!("a {} = {}\n", SYMS[j], terms.join(" + ")));
        }
        let e = parse_module(&text, 4, None).unwrap();
        prop_assert_eq!(e.precision(), P);
        for i in 0..n {
            for j in 0..n {
                let want: Vec<Scalar> = entries[i * 3 + j].iter().map(|&(a, d)| Scalar::ratio(a, d)).collect();
                prop_assert_eq!(e.a_matrix().get(i, j), &BSeries::new(want, P));
            }
        }
    }
}

#[test]
fn huge_exponents_are_rejected_quickly() {
    assert!(parse_module("a x = 2^100000000*x", P, None).is_err());
    assert!(parse_module("a x = b^4096*x", P, None).is_ok());
}
