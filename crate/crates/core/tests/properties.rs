mod common;

use common::q;
use contfrac::{
    equivalence_to_unit, even_odd_gap, evaluate_trace, limit_estimate, parse_spec, verify_contraction, Backend,
    ContractionKind, Error, Expr, Scalar, SequenceSpec, Value,
};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=4, -40i64..=40, 1i64..=4)
        .prop_filter("nonzero", |(a, _, c, _)| *a != 0 || *c != 0)
        .prop_map(|(a, b, c, d)| Scalar::exact(q(a, b), q(c, d)))
}

fn rational_spec(min_len: usize, max_len: usize, unit: bool) -> impl Strategy<Value = SequenceSpec> {
    (min_len..=max_len)
        .prop_flat_map(move |len| {
            (
                prop::option::of(element()),
                prop::collection::vec(element(), len),
                prop::collection::vec(element(), len),
            )
        })
        .prop_map(move |(b0, a, b)| {
            let b = if unit { vec![Scalar::one(); a.len()] } else { b };
            SequenceSpec::from_elements(b0.unwrap_or_else(Scalar::zero), a, b).unwrap()
        })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..=50, 1i64..=12).prop_map(|(n, d)| Expr::rational(q(n, d))),
        Just(Expr::Imag),
        Just(Expr::Index),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |e| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |e| Expr::Neg(b(e))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
            (inner.clone(), -3i64..=3).prop_map(move |(x, k)| {
                let k = if k < 0 { Expr::Neg(b(Expr::int(-k))) } else { Expr::int(k) };
                Expr::Pow(b(x), b(k))
            }),
            inner.clone().prop_map(move |e| Expr::Sqrt(b(e))),
            inner.prop_map(move |e| Expr::Abs(b(e))),
        ]
    })
}

fn same_terms(x: &SequenceSpec, y: &SequenceSpec, terms: u64) -> Result<(), TestCaseError> {
    prop_assert_eq!(x.b0(128), y.b0(128));
    for n in 1..=terms {
        prop_assert_eq!(x.term(n, 128), y.term(n, 128), "term {}", n);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinant_identity_is_exact(spec in rational_spec(1, 25, false)) {
        let len = spec.len().unwrap();
        for t in evaluate_trace(&spec, len, Backend::Exact).unwrap() {
            prop_assert!(t.residual.is_zero(), "n = {}", t.n);
        }
    }

    #[test]
    fn unit_form_keeps_approximants(spec in rational_spec(1, 16, false)) {
        let len = spec.len().unwrap();
        let unit = equivalence_to_unit(&spec);
        let x = evaluate_trace(&spec, len, Backend::Exact).unwrap();
        let y = evaluate_trace(&unit, len, Backend::Exact).unwrap();
        for (p, r) in x.iter().zip(&y) {
            prop_assert_eq!(&p.value, &r.value, "n = {}", p.n);
        }
        prop_assert!(unit.require_unit_denominators(len, 128).is_ok());
    }

    #[test]
    fn contractions_match_subsequences(
        (spec, k) in rational_spec(3, 21, true).prop_flat_map(|s| {
            let top = (s.len().unwrap() - 1) / 2;
            (Just(s), 1..=top)
        })
    ) {
        for kind in [ContractionKind::Even, ContractionKind::Odd] {
            match verify_contraction(&spec, k, kind, Backend::Exact) {
                Ok(check) => prop_assert!(check.exact, "{} part, max residual {}", kind, check.max_residual),
                Err(Error::ContractionUndefined { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn gap_formula_matches_direct(spec in rational_spec(1, 20, false)) {
        let len = spec.len().unwrap();
        let gaps = even_odd_gap(&spec, len, Backend::Exact).unwrap();
        for p in gaps.even_odd.iter().chain(&gaps.odd) {
            prop_assert!(p.direct.exactly_equal(&p.formula), "n = {}", p.n);
        }
    }

    #[test]
    fn float_runs_track_exact_runs(spec in rational_spec(1, 20, true)) {
        let len = spec.len().unwrap();
        let exact = evaluate_trace(&spec, len, Backend::Exact).unwrap();
        let float = evaluate_trace(&spec, len, Backend::float(256).unwrap()).unwrap();
        for (x, y) in exact.iter().zip(&float) {
            if let (Value::Finite(e), Value::Finite(f)) = (&x.value, &y.value) {
                let (a, b) = e.to_c64();
                let (c, d) = f.to_c64();
                let scale = a.hypot(b).max(1.0);
                prop_assert!((a - c).hypot(b - d) <= 1e-20 * scale);
            }
        }
    }

    #[test]
    fn dsl_round_trip(even in expr(), odd in expr(), b in prop::option::of(expr()), b0 in 0i64..5) {
        let mut text = String::new();
        if b0 > 0 {
            text.push_str(&format!("b0: {b0};\n"));
        }
        if let Some(b) = &b {
            text.push_str(&format!("b: {};\n", b));
        }
        text.push_str(&format!("even: {};\nodd: {};\n", even, odd));
        let spec = parse_spec(&text).unwrap();
        let printed = spec.to_dsl().unwrap();
        let again = parse_spec(&printed).unwrap();
        same_terms(&spec, &again, 12)?;
        prop_assert_eq!(again.to_dsl().unwrap(), printed);
    }

    #[test]
    fn parser_is_total(text in "[ -~\\n]{0,80}") {
        match parse_spec(&text) {
            Ok(_) => {}
            Err(Error::Parse(e)) => {
                prop_assert!(e.position.line >= 1 && e.position.column >= 1);
            }
            Err(_) => {}
        }
    }

    #[test]
    fn parser_is_total_on_near_miss_input(
        parts in prop::collection::vec(
            prop_oneof![
                Just("even"), Just("odd"), Just("list"), Just("period"), Just("b"), Just("b0"),
                Just(":"), Just(";"), Just("["), Just("]"), Just(","), Just("("), Just(")"),
                Just("n"), Just("i"), Just("+"), Just("-"), Just("*"), Just("/"), Just("^"),
                Just("sqrt"), Just("abs"), Just("1"), Just("0"), Just("2.5"), Just(" "), Just("\n"),
            ],
            0..40,
        )
    ) {
        let _ = parse_spec(&parts.concat());
    }

    #[test]
    fn constant_traces_have_a_limit(re in -100i64..100, im in -100i64..100, window in 2usize..10) {
        let v = Value::Finite(Scalar::exact(q(re, 7), q(im, 3)));
        let trace = vec![v; window + 3];
        let est = limit_estimate(&trace, 1e-12, window).unwrap();
        prop_assert!(est.cauchy);
        prop_assert!(est.estimate.is_some());
    }
}
