use super::{Case, Counterexample, Report, SuiteParams};
use crate::arith::ArithMode;
use crate::eval::{compile_set, EvalContext, EvalStats, Val};
use crate::interp::{bit_formula, translate_d};
use crate::logic::{ArithTerm, Formula, Language, SetAtom, SetFormula, SetTerm, Syntax};
use crate::set::decode_u64;

/// The `d`-translation of the bit formula in `x` and `y`.
pub fn membership_formula() -> SetFormula {
    let bit = bit_formula(ArithTerm::Var("x".into()), ArithTerm::Var("y".into()));
    translate_d(&bit).expect("the bit formula has small numerals")
}

fn iff(a: SetFormula, b: SetFormula) -> SetFormula {
    Formula::and(
        Formula::implies(a.clone(), b.clone()),
        Formula::implies(b, a),
    )
}

fn claim(bit: &SetFormula) -> SetFormula {
    let mem = Formula::atom(SetAtom::Mem(
        SetTerm::Var("x".into()),
        SetTerm::Var("y".into()),
    ));
    iff(mem, bit.clone())
}

fn add(s: &mut EvalStats, t: EvalStats) {
    s.literal_ops += t.literal_ops;
    s.fast_ops += t.fast_ops;
    s.literal_fallbacks += t.literal_fallbacks;
}

/// Membership against the translated bit formula for all pairs of codes
/// below `params.max_code` in fast mode and below `params.literal_max` in
/// literal mode.
pub fn check_theorem6(ctx: &EvalContext, params: &SuiteParams) -> Report {
    check_theorem6_with(&membership_formula(), ctx, params)
}

/// As [`check_theorem6`], with `bit` in place of the translated bit formula.
pub fn check_theorem6_with(bit: &SetFormula, ctx: &EvalContext, params: &SuiteParams) -> Report {
    let mut cases = Vec::new();
    let mut stats = EvalStats::default();
    for (mode, bound) in [
        (ArithMode::Fast, params.max_code),
        (ArithMode::Literal, params.literal_max),
    ] {
        let ctx = ctx.clone().with_mode(mode);
        for x in 0..bound {
            let id = format!("{}/x={x}", mode_name(mode));
            match row(bit, x, bound, &ctx, &mut stats) {
                Ok(None) => cases.push(Case::pass(id)),
                Ok(Some(y)) => {
                    let cx = counterexample(bit, x, y).with_mode(mode);
                    cases.push(Case::fail(id, cx).detail(format!("disagrees at y = {y}")));
                }
                Err((y, e)) => cases.push(Case::error(
                    id,
                    &e,
                    counterexample(bit, x, y).with_mode(mode),
                )),
            }
        }
    }
    let mut r = Report::new("theorem6", ctx, params, cases);
    r.stats = Some(stats);
    r
}

fn mode_name(m: ArithMode) -> &'static str {
    match m {
        ArithMode::Fast => "fast",
        ArithMode::Literal => "literal",
    }
}

fn counterexample(bit: &SetFormula, x: u64, y: u64) -> Counterexample {
    let (cx, cy) = (x.into(), y.into());
    Counterexample::formula(Language::Set, claim(bit), &[("x", &cx), ("y", &cy)], true)
}

/// The first `y` below `bound` where membership of `x` disagrees with the
/// formula. `x` is fixed in the formula so its numerals are built once.
fn row(
    bit: &SetFormula,
    x: u64,
    bound: u64,
    ctx: &EvalContext,
    stats: &mut EvalStats,
) -> std::result::Result<Option<u64>, (u64, crate::Error)> {
    let sx = decode_u64(x);
    let fixed = bit.substitute("x", &SetTerm::Lit(sx.clone()));
    let vars = ["y".to_string()];
    let c = compile_set(&fixed, &vars, ctx).map_err(|e| (0, e))?;
    for y in 0..bound {
        let (b, s) = c.eval_with_stats(&[Val::from(y)]).map_err(|e| (y, e))?;
        add(stats, s);
        if b != decode_u64(y).contains(&sx) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}
