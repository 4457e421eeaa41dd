use super::*;
use crate::eval::{eval_arith, eval_set, Env, EvalContext};
use crate::logic::{parse_arith, parse_set};
use crate::set::{decode_u64, Code};

fn a(src: &str) -> ArithFormula {
    parse_arith(src).unwrap()
}

fn s(src: &str) -> SetFormula {
    parse_set(src).unwrap()
}

fn holds_set(f: &SetFormula, env: &[(&str, u64)]) -> bool {
    let env: Env<HfSet> = env
        .iter()
        .map(|(k, v)| (k.to_string(), decode_u64(*v)))
        .collect();
    eval_set(f, &env, &EvalContext::default()).unwrap()
}

fn holds_arith(f: &ArithFormula, env: &[(&str, u64)]) -> bool {
    let env: Env<Code> = env
        .iter()
        .map(|(k, v)| (k.to_string(), Code::from(*v)))
        .collect();
    eval_arith(f, &env, &EvalContext::default()).unwrap()
}

use crate::set::HfSet;

#[test]
fn membership_becomes_the_bit_formula() {
    assert_eq!(
        translate_a(&s("x in y")).unwrap().to_string(),
        "exists n < y. exists m < exp(2, x). y = exp(2, x + 1) * n + exp(2, x) + m"
    );
    assert_eq!(translate_a(&s("0e = 0e")).unwrap().to_string(), "0 = 0");
    // Witness names dodge the variables already in use.
    assert_eq!(
        translate_a(&s("n in m")).unwrap().to_string(),
        "exists n1 < m. exists m1 < exp(2, n). m = exp(2, n + 1) * n1 + exp(2, n) + m1"
    );
}

#[test]
fn bounded_quantifier_over_power_set() {
    let f = translate_a(&s("forall u in P(x). u in P(x)")).unwrap();
    assert!(f.is_bounded());
    for x in 0..16 {
        assert!(holds_arith(&f, &[("x", x)]));
    }
}

#[test]
fn bound_variable_mentioned_in_its_bound() {
    // The inner u ranges over the members of the outer one.
    let psi = s("exists u in #7. forall u in u. u in #3");
    let phi = translate_a(&psi).unwrap();
    assert!(phi.is_bounded());
    assert_eq!(holds_set(&psi, &[]), holds_arith(&phi, &[]));
    let psi = s("exists u in #7. forall u in u. !(u in #3)");
    assert_eq!(
        holds_set(&psi, &[]),
        holds_arith(&translate_a(&psi).unwrap(), &[])
    );
}

#[test]
fn cardinal_examples() {
    assert_eq!(translate_c(&a("0 = 0")).unwrap().to_string(), "0e =_c 0e");
    for (src, want) in [
        ("0 = 0", true),
        ("S(0) + S(0) = S(S(0))", true),
        ("exp(S(S(0)), S(S(0))) = S(S(S(S(0))))", true),
        ("S(0) = 0", false),
        ("2 * 3 = 6 & 2 < 3 & !(3 < 3)", true),
    ] {
        assert_eq!(
            holds_set(&translate_c(&a(src)).unwrap(), &[]),
            want,
            "{src}"
        );
    }
    assert_eq!(
        translate_c(&a("exp(x, y) = z")).unwrap().to_string(),
        "cexp(x, y) =_c z"
    );
}

#[test]
fn cardinal_successor_and_bounds() {
    let f = translate_c(&a("S(x) = y")).unwrap();
    assert_eq!(f.to_string(), "U(pair(x, pair(x, x))) =_c y");
    // #3 = {∅, {∅}} has two members, #11 three.
    assert!(holds_set(&f, &[("x", 3), ("y", 11)]));
    let g = translate_c(&a("forall v < x. v < x")).unwrap();
    assert_eq!(g.to_string(), "forall v in P(x). v <_c x -> v <_c x");
    let h = translate_c(&a("exists v < x. S(v) = x")).unwrap();
    assert!(holds_set(&h, &[("x", 11)]));
    assert!(!holds_set(&h, &[("x", 0)]));
}

#[test]
fn ordinal_examples() {
    assert!(holds_set(&translate_o(&a("0 < S(0)")).unwrap(), &[]));
    assert_eq!(
        translate_o(&a("exists x. x = x")).unwrap().to_string(),
        "exists x. x in Ord & x = x"
    );
    let f = translate_o(&a("forall x. x < S(x)")).unwrap();
    assert!(holds_set(&f, &[]));
    assert!(holds_set(
        &translate_o(&a("2 + 3 = 5 & 2 * 3 = 6 & exp(2, 3) = 8")).unwrap(),
        &[]
    ));
    assert_eq!(translate_o(&a("Dom(x)")).unwrap().to_string(), "x in Ord");
}

#[test]
fn ackermann_examples() {
    assert_eq!(translate_d(&a("0 = 0")).unwrap().to_string(), "0e = 0e");
    assert_eq!(translate_d(&a("x < y")).unwrap().to_string(), "x <_a y");
    assert_eq!(
        translate_d(&a("forall z < S(y). z + 2 = x"))
            .unwrap()
            .to_string(),
        "forall z <_a S_a(y). z +_a S_a(S_a(0e)) = x"
    );
}

#[test]
fn bit_formula_under_d_is_membership() {
    let f = translate_d(&bit_formula(ArithTerm::var("x"), ArithTerm::var("y"))).unwrap();
    assert!(f.is_bounded());
    for x in 0..8 {
        for y in 0..64 {
            assert_eq!(
                holds_set(&f, &[("x", x), ("y", y)]),
                decode_u64(y).contains(&decode_u64(x))
            );
        }
    }
}

#[test]
fn extended_symbols_have_no_cardinal_or_ordinal_image() {
    for f in ["pow(x) = x", "lta(x, y)", "sepc(v, x, v = v) = x"] {
        assert!(
            matches!(translate_c(&a(f)), Err(Error::Unsupported(_))),
            "{f}"
        );
        assert!(
            matches!(translate_o(&a(f)), Err(Error::Unsupported(_))),
            "{f}"
        );
        assert!(translate_d(&a(f)).is_ok());
    }
}

#[test]
fn composition_checks_languages() {
    let zero = AnyFormula::Arith(a("0 = 0"));
    let round = compose(InterpMap::D, InterpMap::A, &zero).unwrap();
    assert_eq!(round.to_string(), "0 = 0");
    let mem = AnyFormula::Set(s("x in y"));
    assert!(matches!(
        compose(InterpMap::A, InterpMap::D, &mem),
        Ok(AnyFormula::Set(_))
    ));
    assert!(matches!(
        compose(InterpMap::C, InterpMap::A, &zero),
        Ok(AnyFormula::Arith(_))
    ));
    assert!(matches!(
        compose(InterpMap::A, InterpMap::A, &mem),
        Err(Error::LanguageMismatch(_))
    ));
    assert!(matches!(
        compose(InterpMap::D, InterpMap::C, &zero),
        Err(Error::LanguageMismatch(_))
    ));
    assert!(matches!(
        translate(InterpMap::A, &zero),
        Err(Error::LanguageMismatch(_))
    ));
    assert!(matches!(
        translate(InterpMap::D, &mem),
        Err(Error::LanguageMismatch(_))
    ));
}

#[test]
fn map_names() {
    for m in InterpMap::ALL {
        assert_eq!(m.to_string().parse::<InterpMap>().unwrap(), m);
    }
    assert!("b".parse::<InterpMap>().is_err());
}

#[test]
fn large_numerals_are_refused() {
    assert!(translate_d(&a("x = 5000")).is_err());
    assert!(translate_d(&a("x = 1000")).is_ok());
}
