use proptest::prelude::*;

use spinprolong::cli::{parse_algebra_dsl, pipelines, print_statements, Atom, LinComb, Settings, Statement};
use spinprolong::exterior::{OneForm, ScalarForm};
use spinprolong::liealg::LieElement;
use spinprolong::prolong::{constant, field_bracket, lx, LieExpr};
use spinprolong::scalar::{Coord, ExactScalar, Jet, JetSymbol, ScalarExpr};
use spinprolong::spectral::{mat_commutator, MatExpr, Matrix2};

// ---------------------------------------------------------------- scalars

fn symbol() -> impl Strategy<Value = JetSymbol> {
    prop_oneof![
        (1u8..=3).prop_map(JetSymbol::s),
        (1u8..=3).prop_map(JetSymbol::sx),
        (1u8..=3).prop_map(JetSymbol::sy),
        prop_oneof![Just(Coord::X), Just(Coord::Y), Just(Coord::T)].prop_map(JetSymbol::Coord),
        (1u8..=2).prop_map(JetSymbol::Xi),
    ]
}

fn poly() -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(symbol(), 0..3)), 0..4).prop_map(|terms| {
        terms.into_iter().fold(ScalarExpr::zero(), |acc, (c, syms)| {
            let m = syms.into_iter().fold(ScalarExpr::int(c), |m, s| m.mul(&ScalarExpr::symbol(s)));
            acc.add(&m)
        })
    })
}

fn exact() -> impl Strategy<Value = ExactScalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2, -2i32..=3).prop_map(|(p, q, im, e)| {
        let c = &ExactScalar::from_ratio(p, q) + &(&ExactScalar::from_int(im) * &ExactScalar::i());
        &c * &ExactScalar::lambda_pow(e)
    })
}

fn nonzero_exact() -> impl Strategy<Value = ExactScalar> {
    exact().prop_filter("nonzero", |c| !c.is_zero())
}

// ---------------------------------------------------------------- forms

fn one_form() -> impl Strategy<Value = OneForm> {
    prop_oneof![
        Just(OneForm::Dx),
        Just(OneForm::Dy),
        Just(OneForm::Dt),
        (1u8..=3).prop_map(|i| OneForm::DField(Jet::s(i))),
        (1u8..=3).prop_map(|i| OneForm::DField(Jet::sx(i))),
        (1u8..=3).prop_map(|i| OneForm::DField(Jet::sy(i))),
        (1u8..=2).prop_map(OneForm::DXi),
    ]
}

fn form(degree: usize) -> impl Strategy<Value = ScalarForm> {
    prop::collection::vec((prop::collection::vec(one_form(), degree), poly()), 0..3).prop_map(move |terms| {
        let mut f = ScalarForm::zero(degree);
        for (w, c) in terms {
            f.add_term(&w, c);
        }
        f
    })
}

fn sign(p: usize, q: usize) -> i64 {
    if (p * q).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(f in (0usize..=2).prop_flat_map(form)) {
        prop_assert!(f.ext_d().ext_d().is_zero());
    }

    #[test]
    fn wedge_graded_antisymmetric(
        (p, q, a, b) in (0usize..=2, 0usize..=2).prop_flat_map(|(p, q)| (Just(p), Just(q), form(p), form(q)))
    ) {
        let ba = b.wedge(&a);
        prop_assert_eq!(a.wedge(&b), if sign(p, q) == 1 { ba } else { ba.neg() });
    }

    #[test]
    fn d_is_graded_leibniz(a in form(1), b in form(1)) {
        let lhs = a.wedge(&b).ext_d();
        let rhs = a.ext_d().wedge(&b).sub(&a.wedge(&b.ext_d()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn section_commutes_with_wedge(a in form(1), b in form(1)) {
        prop_assert_eq!(a.wedge(&b).section(), a.section().wedge(&b.section()));
    }

    #[test]
    fn partials_commute(f in poly(), a in symbol(), b in symbol()) {
        prop_assert_eq!(f.differentiate(&a).differentiate(&b), f.differentiate(&b).differentiate(&a));
    }

    #[test]
    fn partial_leibniz(f in poly(), g in poly(), s in symbol()) {
        let lhs = f.mul(&g).differentiate(&s);
        let rhs = f.differentiate(&s).mul(&g).add(&f.mul(&g.differentiate(&s)));
        prop_assert_eq!(lhs, rhs);
    }
}

// ---------------------------------------------------------------- Lie side

fn lie_element(max_gen: u32) -> impl Strategy<Value = LieElement> {
    let leaf = (1..=max_gen).prop_map(LieElement::gen);
    let tree = leaf.prop_recursive(2, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| LieElement::bracket_word(&a, &b))
    });
    prop::collection::vec((exact(), tree), 1..4)
        .prop_map(|v| v.into_iter().fold(LieElement::zero(), |acc, (c, e)| acc.add(&e.scale(&c))))
}

fn lie_expr() -> impl Strategy<Value = LieExpr> {
    prop::collection::vec((poly(), lie_element(5)), 1..3)
        .prop_map(|v| v.into_iter().fold(constant(&LieElement::zero()), |acc, (p, e)| acc.add(&lx(&p, &e))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_idempotent(e in lie_element(12)) {
        let alg = pipelines::general_algebra(&Settings::default()).unwrap();
        let once = alg.normalize(&e);
        prop_assert_eq!(alg.normalize(&once), once.clone());
        // antisymmetry survives normalization
        let f = LieElement::gen(4);
        prop_assert_eq!(alg.bracket(&once, &f), alg.bracket(&f, &once).neg());
    }

    #[test]
    fn field_bracket_bilinear(a in lie_expr(), b in lie_expr(), c in lie_expr(), k in exact()) {
        let alg = pipelines::general_algebra(&Settings::default()).unwrap();
        let lhs = field_bracket(&a.add(&b.scale(&k)), &c, &alg);
        let rhs = field_bracket(&a, &c, &alg).add(&field_bracket(&b, &c, &alg).scale(&k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matrix_commutator_bilinear(
        fa in poly(), fb in poly(), fc in poly(),
        ma in 0u8..=3, mb in 0u8..=3, mc in 0u8..=3, k in exact(),
    ) {
        let m = |i: u8| if i == 0 { Matrix2::identity() } else { Matrix2::pauli(i) };
        let a: MatExpr = fa.times_coeff(&m(ma));
        let b: MatExpr = fb.times_coeff(&m(mb));
        let c: MatExpr = fc.times_coeff(&m(mc));
        let lhs = mat_commutator(&a.add(&b.scale(&k)), &c);
        let rhs = mat_commutator(&a, &c).add(&mat_commutator(&b, &c).scale(&k));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(mat_commutator(&a, &b), mat_commutator(&b, &a).neg());
    }
}

// ---------------------------------------------------------------- DSL

fn lincomb(depth: u32) -> BoxedStrategy<LinComb> {
    prop::collection::vec((nonzero_exact(), atom(depth)), 0..3).prop_map(LinComb).boxed()
}

fn plain(k: u32) -> LinComb {
    LinComb(vec![(ExactScalar::one(), Atom::Gen(k))])
}

fn atom(depth: u32) -> BoxedStrategy<Atom> {
    let g = (1u32..=20).prop_map(Atom::Gen);
    if depth == 0 {
        return g.boxed();
    }
    let inner = prop::collection::vec((nonzero_exact(), atom(depth - 1)), 1..3).prop_map(LinComb).boxed();
    prop_oneof![
        3 => g,
        1 => (inner.clone(), inner).prop_map(|(a, b)| Atom::Bracket(Box::new(a), Box::new(b))),
        1 => (1u32..=20, 1u32..=20).prop_map(|(i, j)| Atom::Bracket(Box::new(plain(i)), Box::new(plain(j)))),
    ]
    .boxed()
}

fn statement() -> impl Strategy<Value = Statement> {
    let coeff = prop_oneof![2 => Just(ExactScalar::one()), 1 => nonzero_exact()];
    (coeff, atom(2), lincomb(1)).prop_map(|(c, a, rhs)| Statement::new((c, a), rhs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dsl_print_parse_roundtrip(stmts in prop::collection::vec(statement(), 0..5)) {
        let text = print_statements(&stmts);
        let back = parse_algebra_dsl(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &stmts, "{}", text);
        prop_assert_eq!(print_statements(&back), text);
    }
}
