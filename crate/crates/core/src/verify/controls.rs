use super::corpus::{lines, Corpus};
use super::theorem6::check_theorem6_with;
use super::{check_roundtrip, membership_formula, Case, Report, SuiteParams};
use crate::error::Result;
use crate::eval::{EvalContext, Faults};
use crate::interp::{translate_d, InterpMap};
use crate::logic::{parse_arith, SetFormula};

/// The translated bit formula with `2^(x+1)·n` weakened to `2^x·n`, which
/// holds whenever `y ≥ 2^x`.
pub fn corrupted_bit_formula() -> SetFormula {
    let bad = parse_arith("exists n < y. exists m < exp(2, x). y = exp(2, x) * n + exp(2, x) + m")
        .expect("parses");
    translate_d(&bad).expect("small numerals")
}

/// A control passes when the suite it wraps fails and every counterexample
/// it reports fails again on replay.
fn control(id: &str, inner: &Report) -> Case {
    let fails = inner.totals.fail;
    if fails > 0 && inner.replays() {
        Case::pass(id).detail(format!("{fails} failing cases, all replayed"))
    } else {
        let why = if fails == 0 {
            "the faulty run passed"
        } else {
            "a counterexample did not replay"
        };
        Case {
            id: id.into(),
            verdict: super::Verdict::Fail,
            detail: Some(why.into()),
            counterexample: inner.failures().find_map(|c| c.counterexample.clone()),
        }
    }
}

/// Deliberate faults that the suites must catch: a successor that skips a
/// set, a wrong bit formula, and the ordinal reading in place of the
/// Ackermann one.
pub fn check_controls(corpus: &Corpus, ctx: &EvalContext, params: &SuiteParams) -> Result<Report> {
    let small = SuiteParams {
        max_code: 64,
        literal_max: 16,
        assignment_max: 16,
        ..params.clone()
    };
    let skip = ctx.clone().with_faults(Faults {
        successor_skip: Some(1),
    });
    let successor = check_theorem6_with(&membership_formula(), &skip, &small);
    let bit = check_theorem6_with(&corrupted_bit_formula(), ctx, &small);
    let less = check_roundtrip(&lines("x < y"), InterpMap::O, InterpMap::A, ctx, params)?;
    let ordinal = check_roundtrip(&corpus.arith, InterpMap::O, InterpMap::A, ctx, &small)?;
    let cases = vec![
        control("corrupted-successor", &successor),
        control("corrupted-bit-formula", &bit),
        control("ordinal-map-on-less", &less),
        control("ordinal-map-on-corpus", &ordinal),
    ];
    Ok(Report::new("controls", ctx, params, cases))
}
