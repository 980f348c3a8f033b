use nsa_cli::{parse_expr, parse_pred, parse_term_dsl, Parsed};
use nsa_core::hyper::{star_nu, Hyper1};
use nsa_core::poly::Q;
use nsa_core::seq::{Expr, Pred, Rel};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-20i64..20).prop_map(Expr::int),
        (-9i64..9, 1i64..9).prop_map(|(p, q)| Expr::constant(Q::new(p.into(), q.into()))),
        Just(Expr::inner()),
        Just(Expr::outer()),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), 1u64..6).prop_map(|(a, k)| Expr::modulo(a, k)),
            proptest::collection::vec(inner.clone(), 1..4).prop_map(Expr::piecewise),
            (inner.clone(), proptest::collection::vec(inner, 1..3))
                .prop_map(|(s, b)| Expr::Cases { selector: Box::new(s), branches: b }),
        ]
    })
}

fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![
        Just(Rel::Eq),
        Just(Rel::Ne),
        Just(Rel::Lt),
        Just(Rel::Le),
        Just(Rel::Gt),
        Just(Rel::Ge)
    ]
}

fn pred() -> impl Strategy<Value = Pred> {
    let atom = prop_oneof![
        Just(Pred::True),
        Just(Pred::False),
        (rel(), expr(), expr()).prop_map(|(r, a, b)| Pred::cmp(r, a, b)),
    ];
    atom.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Pred::not),
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Pred::And),
            proptest::collection::vec(inner, 0..3).prop_map(Pred::Or),
        ]
    })
}

proptest! {
    #[test]
    fn printed_terms_reparse(e in expr()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn printed_predicates_reparse(p in pred()) {
        prop_assert_eq!(parse_pred(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(parse_term_dsl(&p.to_string()).unwrap(), Parsed::Pred(p));
    }

    #[test]
    fn starnu_renames_the_index(e in expr()) {
        let shown = e.to_string();
        if let Ok(h) = Hyper1::from_expr(e) {
            let via_dsl = parse_expr(&format!("(starnu {shown})")).unwrap();
            let direct = star_nu(&h);
            prop_assert_eq!(&via_dsl, direct.expr());
        }
    }
}

#[test]
fn reserved_symbols() {
    assert_eq!(parse_expr("omega").unwrap(), Expr::inner());
    assert_eq!(parse_expr("(nu2 n)").unwrap(), Expr::inner());
    assert_eq!(parse_expr("(starnu n)").unwrap(), Expr::outer());
    assert_eq!(parse_expr("(+ 1 2 3)").unwrap(), Expr::add(Expr::add(Expr::int(1), Expr::int(2)), Expr::int(3)));
    assert!(parse_expr("(+ n").is_err());
    assert!(parse_expr("(starnu m)").is_err());
    assert!(parse_expr("(nu1 n)").is_err());
}
