//! The acceptance criteria, run in order, one line each.
//!
//! Run with `cargo test --test acceptance`. Each criterion has a pinned
//! wall-clock limit; going over it counts as a failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hfsets::arith::{add_a, exp_a, mul_a, ArithMode, ArithOp, LiteralDomain};
use hfsets::eval::{EvalContext, Faults};
use hfsets::interp::InterpMap;
use hfsets::order::{ack_less, ack_less_literal, numeral, successor_a, successor_carry, Numeral};
use hfsets::set::{decode, decode_u64, encode, materialize_level, Code};
use hfsets::verify::corpus::{lines, opei_entries, Corpus};
use hfsets::verify::{
    check_roundtrip, check_theorem6, check_theorem6_with, corrupted_bit_formula,
    membership_formula, run, OpeiBranch, Report, Suite, SuiteParams, Verdict,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn passed(r: &Report) -> Result<(), String> {
    ensure(r.passed(), || r.human())
}

fn code(n: u64) -> Code {
    Code::from(n)
}

fn bijection() -> Outcome {
    for n in 0..65536u64 {
        let s = decode_u64(n);
        ensure(encode(&s).ok() == Some(code(n)), || {
            format!("encode(decode({n})) != {n}")
        })?;
        ensure(decode(&code(n)).ok() == Some(s), || {
            format!("decode(encode(s)) != s at {n}")
        })?;
    }
    Ok("65536 codes".into())
}

fn levels() -> Outcome {
    for (m, size) in [(1, 1usize), (2, 2), (3, 4), (4, 16), (5, 65536)] {
        let v = materialize_level(m).map_err(|e| e.to_string())?;
        ensure(v.len() == size, || {
            format!("|V_{m}| = {}, not {size}", v.len())
        })?;
        for n in 0..size as u64 {
            ensure(v.contains(&decode_u64(n)), || {
                format!("decode({n}) is not in V_{m}")
            })?;
        }
    }
    Ok("|V_1..V_5| = 1, 2, 4, 16, 65536".into())
}

fn ack_order() -> Outcome {
    let sets: Vec<_> = (0..1u64 << 12).map(decode_u64).collect();
    for (a, x) in sets.iter().enumerate() {
        for (b, y) in sets.iter().enumerate() {
            ensure(ack_less(x, y) == (a < b), || {
                format!("recursive comparator wrong at ({a}, {b})")
            })?;
        }
    }
    for (a, x) in sets[..64].iter().enumerate() {
        for (b, y) in sets[..64].iter().enumerate() {
            let lit = ack_less_literal(x, y).map_err(|e| e.to_string())?;
            ensure(lit == (a < b), || {
                format!("literal comparator wrong at ({a}, {b})")
            })?;
        }
    }
    Ok(format!(
        "{} recursive pairs, 4096 literal pairs",
        sets.len() * sets.len()
    ))
}

fn theorem6() -> Outcome {
    let r = check_theorem6(&EvalContext::default(), &SuiteParams::default());
    passed(&r)?;
    let s = r.stats.unwrap_or_default();
    ensure(s.literal_ops > 0, || "literal mode never ran".into())?;
    Ok(format!(
        "{} rows; _a ops {} literal, {} fast, {} literal fallbacks",
        r.totals.pass, s.literal_ops, s.fast_ops, s.literal_fallbacks
    ))
}

/// Binary increment of a little-endian numeral, trailing zeros dropped.
fn increment(n: &Numeral) -> Vec<bool> {
    let mut bits = n.bits.clone();
    match bits.iter().position(|b| !b) {
        Some(k) => {
            bits[..k].iter_mut().for_each(|b| *b = false);
            bits[k] = true;
        }
        None => {
            bits.iter_mut().for_each(|b| *b = false);
            bits.push(true);
        }
    }
    trim(bits)
}

fn trim(mut bits: Vec<bool>) -> Vec<bool> {
    while bits.last() == Some(&false) {
        bits.pop();
    }
    bits
}

fn successor() -> Outcome {
    // Last sets of V_1..V_5, where the rank goes up.
    let boundaries = [0u64, 1, 3, 15, 65535];
    let mut checked = 0;
    for n in (0..1u64 << 12).chain(boundaries) {
        let x = decode_u64(n);
        let s = successor_a(&x).map_err(|e| e.to_string())?;
        ensure(encode(&s).ok() == Some(code(n + 1)), || {
            format!("S_a(#{n}) has code {:?}", encode(&s))
        })?;
        ensure(successor_carry(&x) == s, || {
            format!("carry rule disagrees at #{n}")
        })?;
        let (nx, ns) = (
            numeral(&x).map_err(|e| e.to_string())?,
            numeral(&s).map_err(|e| e.to_string())?,
        );
        ensure(increment(&nx) == trim(ns.bits), || {
            format!("numeral carry wrong at #{n}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} sets, rank boundaries up to #65535"))
}

type Oracle = fn(u64, u64) -> u64;

fn homomorphism() -> Outcome {
    let dom = LiteralDomain::default();
    let mut literal = 0;
    let ops: [(ArithOp, u64, u64, Oracle); 3] = [
        (ArithOp::Add, 1 << 8, 1 << 8, |a, b| a + b),
        (ArithOp::Mul, 1 << 6, 1 << 6, |a, b| a * b),
        (ArithOp::Exp, 1 << 4, 6, |a, b| a.pow(b as u32)),
    ];
    for (op, xs, ys, f) in ops {
        let apply = match op {
            ArithOp::Add => add_a,
            ArithOp::Mul => mul_a,
            ArithOp::Exp => exp_a,
        };
        for a in 0..xs {
            for b in 0..ys {
                let (x, y) = (decode_u64(a), decode_u64(b));
                let fast = apply(&x, &y, ArithMode::Fast).map_err(|e| e.to_string())?;
                let name = op.name();
                ensure(encode(&fast).ok() == Some(code(f(a, b))), || {
                    format!("{name}(#{a}, #{b}) is wrong")
                })?;
                if dom.admits(op, &x, &y) {
                    let lit = apply(&x, &y, ArithMode::Literal).map_err(|e| e.to_string())?;
                    ensure(lit == fast, || {
                        format!("literal {name}(#{a}, #{b}) disagrees")
                    })?;
                    literal += 1;
                }
            }
        }
    }
    Ok(format!("{literal} literal/fast agreements"))
}

fn cardinal() -> Outcome {
    let r = run(
        Suite::Cardinal,
        &EvalContext::default(),
        &SuiteParams::default(),
        None,
    )
    .map_err(|e| e.to_string())?;
    passed(&r)?;
    Ok(format!("{} cases, sizes <= 4", r.totals.pass))
}

fn axioms() -> Outcome {
    let ctx = EvalContext::default();
    ensure(ctx.set_cutoff == 256, || "set cutoff is not 256".into())?;
    let r = run(Suite::Axioms, &ctx, &SuiteParams::default(), None).map_err(|e| e.to_string())?;
    passed(&r)?;
    let sep = r
        .cases
        .iter()
        .filter(|c| c.id.starts_with("separation/"))
        .count();
    ensure(sep == 50, || format!("{sep} separation instances"))?;
    Ok(format!(
        "{} cases, {sep} separation instances",
        r.totals.pass
    ))
}

fn round_trips() -> Outcome {
    let ctx = EvalContext::default();
    let params = SuiteParams::default();
    ensure(params.assignment_max == 256, || {
        "assignments are not below 2^8".into()
    })?;
    let mut counts = Vec::new();
    for suite in [Suite::RoundtripDa, Suite::RoundtripAd] {
        let r = run(suite, &ctx, &params, None).map_err(|e| e.to_string())?;
        passed(&r)?;
        ensure(r.totals.pass >= 40, || {
            format!("{suite}: only {} formulas", r.totals.pass)
        })?;
        counts.push(r.totals.pass);
    }
    let corpus = Corpus::default();
    let o = check_roundtrip(&corpus.arith, InterpMap::O, InterpMap::A, &ctx, &params)
        .map_err(|e| e.to_string())?;
    ensure(o.totals.fail > 0, || {
        "the ordinal map passed every round trip".into()
    })?;
    ensure(o.replays(), || {
        "an ordinal-map counterexample does not replay".into()
    })?;
    let less = check_roundtrip(&lines("x < y"), InterpMap::O, InterpMap::A, &ctx, &params)
        .map_err(|e| e.to_string())?;
    ensure(less.totals.fail == 1, || {
        "the ordinal map round trips `x < y`".into()
    })?;
    Ok(format!(
        "da {} and ad {} formulas; ordinal map fails {} of {}",
        counts[0],
        counts[1],
        o.totals.fail,
        o.cases.len()
    ))
}

fn opei() -> Outcome {
    let ctx = EvalContext::default();
    let corpus = Corpus::default();
    let r = run(Suite::Opei, &ctx, &SuiteParams::default(), None).map_err(|e| e.to_string())?;
    passed(&r)?;
    let entries = opei_entries(&corpus.opei).map_err(|e| e.to_string())?;
    let transitive = entries
        .iter()
        .find(|e| e.formula == "forall u in x. forall v in u. v in x")
        .ok_or("no transitivity predicate in the corpus")?;
    ensure(transitive.expected == OpeiBranch::HypothesisFails, || {
        "transitivity is not tagged".into()
    })?;
    let case = r
        .cases
        .iter()
        .find(|c| c.id == transitive.line.id())
        .ok_or("no transitivity case")?;
    ensure(case.verdict == Verdict::Pass, || {
        "transitivity branch is wrong".into()
    })?;
    Ok(format!(
        "{} predicates; transitivity: {}",
        r.totals.pass,
        case.detail.as_deref().unwrap_or("")
    ))
}

fn mutations() -> Outcome {
    let ctx = EvalContext::default();
    let params = SuiteParams {
        max_code: 256,
        literal_max: 16,
        ..SuiteParams::default()
    };
    let skip = ctx.clone().with_faults(Faults {
        successor_skip: Some(1),
    });
    let runs = [
        (
            "corrupted successor",
            check_theorem6_with(&membership_formula(), &skip, &params),
        ),
        (
            "corrupted bit formula",
            check_theorem6_with(&corrupted_bit_formula(), &ctx, &params),
        ),
    ];
    let mut out = Vec::new();
    for (name, r) in &runs {
        ensure(r.totals.fail > 0, || {
            format!("{name}: the faulty run passed")
        })?;
        ensure(r.exit_code() == 1, || {
            format!("{name}: exit code {}", r.exit_code())
        })?;
        ensure(r.replays(), || {
            format!("{name}: a counterexample does not replay")
        })?;
        out.push(format!("{name} fails {}", r.totals.fail));
    }
    Ok(out.join(", "))
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    (1, "Ackermann bijection", 5, bijection),
    (2, "level structure", 10, levels),
    (3, "Ack-order agreement", 60, ack_order),
    (4, "membership bit formula", 60, theorem6),
    (5, "successor and carry", 10, successor),
    (6, "arithmetic homomorphism", 60, homomorphism),
    (7, "cardinal interpretation", 30, cardinal),
    (8, "axiom suite", 30, axioms),
    (9, "round trips", 120, round_trips),
    (10, "one point extension induction", 10, opei),
    (11, "mutation self-tests", 60, mutations),
];

fn main() -> ExitCode {
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, limit, check) in CRITERIA {
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let limit = Duration::from_secs(limit);
        let (verdict, detail) = match outcome {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over the time limit; {d}")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {verdict} {name}: {:.2}s (limit {}s); {detail}",
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
