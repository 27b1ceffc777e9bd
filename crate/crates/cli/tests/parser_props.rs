//! Parser properties: print/parse round-trips, well-formed inputs always
//! parse, and mutated inputs never take the parser down.

use num_bigint::BigInt;
use planeinv::parse::{parse_document, parse_poly, print_poly};
use planeinv_core::{BivarPoly, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly() -> impl Strategy<Value = BivarPoly> {
    proptest::collection::vec((0u32..=6, 0u32..=6, rational()), 0..8)
        .prop_map(BivarPoly::from_terms)
}

fn expr_string() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u64..=200u64).prop_map(|n| n.to_string()),
        (0u64..=60u64, 1u64..=60u64).prop_map(|(a, b)| format!("{}/{}", a, b)),
        Just("x".to_string()),
        Just("y".to_string()),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{} + {}", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{} - {}", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{}*{}", a, b)),
            inner.clone().prop_map(|a| format!("-{}", a)),
            inner.clone().prop_map(|a| format!("({})", a)),
            (inner, 0u32..=4u32).prop_map(|(a, e)| format!("({})^{}", a, e)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_inverts_print(p in poly()) {
        let text = print_poly(&p);
        let back = parse_poly(&text).expect("canonical form parses");
        prop_assert_eq!(back, p);
    }

    #[test]
    fn well_formed_expressions_parse(s in expr_string()) {
        let p = parse_poly(&s).expect("well-formed input");
        // and printing the result is canonical: parse it again, same value
        let again = parse_poly(&print_poly(&p)).expect("canonical reparse");
        prop_assert_eq!(again, p);
    }

    #[test]
    fn mutations_parse_or_fail_with_location(
        s in expr_string(),
        pos in any::<prop::sample::Index>(),
        replacement in proptest::char::range(' ', '~'),
    ) {
        let mut bytes: Vec<u8> = s.into_bytes();
        if bytes.is_empty() {
            return Ok(());
        }
        let at = pos.index(bytes.len());
        bytes[at] = replacement as u8;
        let mutated = String::from_utf8(bytes).expect("ascii stays utf-8");
        // must return, never panic; errors must carry a position in range
        if let Err(e) = parse_poly(&mutated) {
            prop_assert!(e.line >= 1 && e.col >= 1);
            prop_assert!(!e.expected.is_empty());
        }
        let doc = format!("f = {}\ng = y\n", mutated);
        let _ = parse_document(&doc);
    }
}
