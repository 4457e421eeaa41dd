use super::*;
use crate::logic::{parse_arith, parse_set};
use crate::set::{decode_u64, encode, materialize_level};

const BIT: &str = "exists n < y. exists m < exp(2, x). y = exp(2, x + 1) * n + exp(2, x) + m";

fn arith(src: &str, env: &[(&str, u64)]) -> bool {
    arith_in(src, env, &EvalContext::default())
}

fn arith_in(src: &str, env: &[(&str, u64)], ctx: &EvalContext) -> bool {
    let env: Env<Code> = env
        .iter()
        .map(|(k, v)| (k.to_string(), Code::from(*v)))
        .collect();
    eval_arith(&parse_arith(src).unwrap(), &env, ctx).unwrap()
}

fn set(src: &str, env: &[(&str, u64)]) -> bool {
    set_in(src, env, &EvalContext::default())
}

fn set_in(src: &str, env: &[(&str, u64)], ctx: &EvalContext) -> bool {
    let env: Env<HfSet> = env
        .iter()
        .map(|(k, v)| (k.to_string(), decode_u64(*v)))
        .collect();
    eval_set(&parse_set(src).unwrap(), &env, ctx).unwrap()
}

#[test]
fn arith_examples() {
    assert!(arith("0 < S(0)", &[]));
    assert!(arith(BIT, &[("x", 1), ("y", 6)]));
    assert!(!arith(BIT, &[("x", 0), ("y", 6)]));
    assert!(arith("forall x. exists y. x < y", &[]));
    assert!(!arith("exists x. forall y. y < x", &[]));
    assert!(arith("exp(2, 10) = 1024 & 3 * 4 + 1 = 13", &[]));
}

#[test]
fn set_examples() {
    assert!(set("0e in pair(0e, 0e)", &[]));
    assert!(set("exists u in P(#3). !(u in #3)", &[]));
    assert!(!set("exists u in P(#3). u = #4", &[]));
    assert!(set("x in y", &[("x", 1), ("y", 3)]));
    assert!(set("R(#5) = #65535 & R(0e) = #1", &[]));
}

#[test]
fn extensionality_on_v3() {
    let ext = "forall x in V. forall y in V. (forall z in V. (z in x -> z in y) & (z in y -> z in x)) -> x = y";
    let v3 = encode(&materialize_level(3).unwrap()).unwrap();
    let v4 = encode(&materialize_level(4).unwrap()).unwrap();
    for v in [v3, v4] {
        let env: Env<HfSet> = [("V".to_string(), decode_u64(v.to_u64().unwrap()))].into();
        assert!(eval_set(&parse_set(ext).unwrap(), &env, &EvalContext::default()).unwrap());
    }
}

#[test]
fn bit_formula_matches_bits() {
    for ctx in [EvalContext::default(), EvalContext::default().unpruned()] {
        for x in 0..8u64 {
            for y in 0..64u64 {
                assert_eq!(
                    arith_in(BIT, &[("x", x), ("y", y)], &ctx),
                    y >> x & 1 == 1,
                    "x={x} y={y}"
                );
            }
        }
    }
}

#[test]
fn translated_bit_formula_in_both_modes() {
    let f = "exists n <_a y. exists m <_a exp_a(S_a(S_a(0e)), x). \
             y = exp_a(S_a(S_a(0e)), x +_a S_a(0e)) *_a n +_a exp_a(S_a(S_a(0e)), x) +_a m";
    let psi = parse_set(f).unwrap();
    let vars = vec!["x".to_string(), "y".to_string()];
    for mode in [ArithMode::Fast, ArithMode::Literal] {
        let c = compile_set(&psi, &vars, &EvalContext::default().with_mode(mode)).unwrap();
        let mut literal = 0;
        for x in 0..16u64 {
            for y in 0..64u64 {
                let (b, stats) = c
                    .eval_with_stats(&[decode_u64(x).into(), decode_u64(y).into()])
                    .unwrap();
                assert_eq!(
                    b,
                    decode_u64(y).contains(&decode_u64(x)),
                    "x={x} y={y} {mode:?}"
                );
                literal += stats.literal_ops;
            }
        }
        assert_eq!(literal > 0, mode == ArithMode::Literal);
    }
}

#[test]
fn cutoff_bounds_unbounded_quantifiers() {
    let ctx = EvalContext {
        nat_cutoff: 5,
        ..EvalContext::default()
    };
    assert!(arith_in("forall x. x < 5", &[], &ctx));
    assert!(!arith("forall x. x < 5", &[]));
    let ctx = EvalContext {
        set_cutoff: 4,
        ..EvalContext::default()
    };
    assert!(set_in("forall x. x in #15", &[], &ctx));
    assert!(!set_in("forall x. x in #7", &[], &ctx));
}

#[test]
fn code_level_functions_agree_with_sets() {
    let cases = [
        ("pow(x) = c", "P(x) = s"),
        ("uni(x) = c", "U(x) = s"),
        ("rankc(x) = c", "R(x) = s"),
        ("sepc(v, x, isord(v)) = c", "sep(v in x, v in Ord) = s"),
        ("pairc(x, S(x)) = c", "pair(x, S_a(x)) = s"),
    ];
    let ctx = EvalContext::default();
    for (a, s) in cases {
        let fa = parse_arith(a).unwrap();
        let fs = parse_set(s).unwrap();
        for x in (0..1024u64).step_by(7) {
            let sx = decode_u64(x);
            let env: Env<HfSet> =
                [("x".to_string(), sx.clone()), ("s".into(), HfSet::empty())].into();
            // Find the set value by evaluating the set term through equality
            // with each candidate would be slow; compare codes instead.
            let term = match fs.clone() {
                crate::logic::Formula::Atom(crate::logic::SetAtom::Eq(t, _)) => t,
                _ => unreachable!(),
            };
            let vars = vec!["x".to_string(), "s".to_string()];
            let _ = env;
            let want = compile_set(
                &crate::logic::Formula::Atom(crate::logic::SetAtom::Eq(
                    term,
                    crate::logic::SetTerm::Var("s".into()),
                )),
                &vars,
                &ctx,
            )
            .unwrap();
            let direct = machine_term_set(&fs, &sx);
            assert!(want
                .eval(&[sx.clone().into(), direct.clone().into()])
                .unwrap());
            let env: Env<Code> = [
                ("x".to_string(), Code::from(x)),
                ("c".into(), encode(&direct).unwrap()),
            ]
            .into();
            assert!(eval_arith(&fa, &env, &ctx).unwrap(), "{a} at {x}");
        }
    }
}

/// The value of the left side of `t = s` at `x`, computed with the set
/// library directly.
fn machine_term_set(f: &crate::logic::SetFormula, x: &HfSet) -> HfSet {
    use crate::logic::{Formula, SetAtom, SetTerm};
    let Formula::Atom(SetAtom::Eq(t, _)) = f else {
        unreachable!()
    };
    let SetTerm::Call(func, _) = t else {
        // The separation case.
        return crate::set::separate::<std::convert::Infallible>(x, |m| {
            Ok(crate::set::is_ordinal(m))
        })
        .unwrap();
    };
    match func {
        crate::logic::Func::Power => crate::set::powerset(x).unwrap(),
        crate::logic::Func::SumSet => crate::set::sumset(x),
        crate::logic::Func::Rank => crate::set::level_of(x)
            .materialize(&Default::default())
            .unwrap(),
        crate::logic::Func::Pair => crate::set::pair(x, &crate::order::successor_a(x).unwrap()),
        _ => unreachable!(),
    }
}

#[test]
fn faults_change_successor() {
    let ctx = EvalContext::default().with_faults(Faults {
        successor_skip: Some(3),
    });
    assert!(set("S_a(#3) = #4", &[]));
    assert!(set_in("S_a(#3) = #5", &[], &ctx));
    assert!(set_in("S_a(#2) = #3", &[], &ctx));
}

#[test]
fn unbound_and_budget_errors() {
    let f = parse_arith("x < y").unwrap();
    let env: Env<Code> = [("x".to_string(), Code::from(1u8))].into();
    assert_eq!(
        eval_arith(&f, &env, &EvalContext::default()),
        Err(Error::Unbound("y".into()))
    );
    let f = parse_arith("exp(2, exp(2, 30)) = 0").unwrap();
    assert!(eval_arith(&f, &Env::new(), &EvalContext::default())
        .unwrap_err()
        .is_budget());
    let ctx = EvalContext {
        nat_cutoff: 0,
        ..EvalContext::default()
    };
    assert!(eval_arith(&parse_arith("0 = 0").unwrap(), &Env::new(), &ctx).is_err());
}

#[test]
fn pruned_search_agrees_with_enumeration() {
    let formulas = [
        "exists a < 20. exists b < 20. a * b = x & a < b",
        "forall a < x. exists b < x. a + b = x",
        "exists a < 40. exp(2, a) = x",
        "exists a < 40. exists b < 5. exp(a, b) = x & !(b = 0)",
        "forall a < 12. (a * a < x -> S(a) * S(a) < x + 20)",
        "exists a < x. exists b < x. a + b = x & a < b & !(a = 0)",
        "exists a < 8. lta(x, a) & S(a) = 5",
    ];
    for src in formulas {
        for x in 0..48u64 {
            let p = arith_in(src, &[("x", x)], &EvalContext::default());
            let u = arith_in(src, &[("x", x)], &EvalContext::default().unpruned());
            assert_eq!(p, u, "{src} at x={x}");
        }
    }
}

#[test]
fn witnesses_inside_the_body_narrow_the_block() {
    // The range of u is astronomically large; only the bit positions of
    // pow(x) survive contraction through the membership witnesses.
    let bit = |u: &str, t: &str| {
        format!(
            "(exists n < {t}. exists m < exp(2, {u}). {t} = exp(2, {u} + 1) * n + exp(2, {u}) + m)"
        )
    };
    let all = format!(
        "forall u < pow(x). ({} -> {})",
        bit("u", "pow(x)"),
        bit("u", "pow(x)")
    );
    let some = format!("exists u < pow(x). {} & !(u = x)", bit("u", "pow(x)"));
    for x in [0u64, 5, 200, 255] {
        assert!(arith(&all, &[("x", x)]));
        assert_eq!(arith(&some, &[("x", x)]), x != 0);
    }
}
