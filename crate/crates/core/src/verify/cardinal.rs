use num_traits::ToPrimitive;

use super::corpus::Line;
use super::roundtrip::assignments;
use super::{code_str, Case, Counterexample, Report, SuiteParams};
use crate::cardinal::{card_add, card_exp, card_exp_count, inj_exists, injection_search, product};
use crate::error::{Error, Result};
use crate::eval::{compile, EvalContext, Val};
use crate::interp::{translate, InterpMap};
use crate::logic::{parse, AnyFormula, Language};
use crate::set::{decode_u64, is_ordinal, ordinal, HfSet};

/// For each size up to `max`, the ordinal of that size and, from size one
/// on, the first set in code order of that size that is not an ordinal.
pub fn representatives(max: usize) -> Vec<HfSet> {
    let mut out: Vec<HfSet> = (0..=max).map(ordinal).collect();
    for k in 1..=max {
        let other = (0u64..)
            .map(decode_u64)
            .find(|s| s.len() == k && !is_ordinal(s))
            .expect("every size has a non-ordinal");
        out.push(other);
    }
    out
}

type Op = fn(&HfSet, &HfSet) -> Result<HfSet>;
type Count = fn(u64, u64) -> u64;

const OPS: [(&str, Op, Count); 3] = [
    ("cadd", card_add, |a, b| a + b),
    ("cprod", product, |a, b| a * b),
    ("cexp", card_exp, |a, b| a.pow(b as u32)),
];

/// The cardinal reading of arithmetic over small sets: sizes of the
/// operations, injections, and the translated laws of the corpus.
pub fn check_cardinal_model(
    corpus: &[Line],
    ctx: &EvalContext,
    params: &SuiteParams,
) -> Result<Report> {
    let pool = representatives(params.card_max);
    let mut cases = Vec::new();
    for (name, op, size) in OPS {
        cases.push(sizes(name, op, size, &pool));
    }
    cases.push(exp_count(&pool));
    cases.push(injections(&pool));
    for line in corpus {
        let phi = line.parse(Language::Arith)?;
        let psi = translate(InterpMap::C, &phi).map_err(|e| line.locate(e))?;
        cases.push(law(&line.id(), &psi, &pool, ctx, true)?);
    }
    let zero = parse(Language::Arith, "S(0) = 0")?;
    cases.push(law(
        "successor-of-zero",
        &translate(InterpMap::C, &zero)?,
        &pool,
        ctx,
        false,
    )?);
    Ok(Report::new("cardinal", ctx, params, cases))
}

fn sizes(name: &str, op: Op, size: fn(u64, u64) -> u64, pool: &[HfSet]) -> Case {
    let id = format!("size/{name}");
    for x in pool {
        for y in pool {
            let expected = size(x.len() as u64, y.len() as u64);
            let cx = || Counterexample::Cardinal {
                op: name.into(),
                x: code_str(x),
                y: code_str(y),
                expected,
            };
            match op(x, y) {
                Ok(s) if s.len() as u64 == expected => {}
                Ok(s) => return Case::fail(id, cx()).detail(format!("{} members", s.len())),
                Err(e) => return Case::error(id, &e, cx()),
            }
        }
    }
    Case::pass(id)
}

fn exp_count(pool: &[HfSet]) -> Case {
    let id = "size/cexp-count";
    for x in pool {
        for y in pool {
            let expected = (x.len() as u64).pow(y.len() as u32);
            if card_exp_count(x, y).to_u64() != Some(expected) {
                let cx = Counterexample::Cardinal {
                    op: "cexp".into(),
                    x: code_str(x),
                    y: code_str(y),
                    expected,
                };
                return Case::fail(id, cx).detail("counted without building the function space");
            }
        }
    }
    Case::pass(id)
}

/// The counting test for an injection against a backtracking search for one.
fn injections(pool: &[HfSet]) -> Case {
    let id = "injections";
    for x in pool {
        for y in pool {
            let found = injection_search(x, y);
            let witnessed = found
                .as_ref()
                .is_some_and(|f| f.is_injective() && f.is_total_on(x) && f.maps_into(y));
            if inj_exists(x, y) != witnessed || found.is_some() != witnessed {
                let claim = format!("{} <=_c {}", code_lit(x), code_lit(y));
                let f = parse(Language::Set, &claim).expect("literal formula parses");
                return Case::fail(
                    id,
                    Counterexample::formula(Language::Set, f, &[], witnessed),
                )
                .detail("counting and search disagree");
            }
        }
    }
    Case::pass(id)
}

fn code_lit(s: &HfSet) -> String {
    format!("#{}", code_str(s))
}

/// `psi` takes the value `expected` under every assignment from `pool`.
fn law(
    id: &str,
    psi: &AnyFormula,
    pool: &[HfSet],
    ctx: &EvalContext,
    expected: bool,
) -> Result<Case> {
    let vars: Vec<String> = psi.free_vars().into_iter().collect();
    let c = compile(psi, &vars, ctx)?;
    for idx in assignments(vars.len(), pool.len() as u64) {
        let sets: Vec<&HfSet> = idx.iter().map(|&i| &pool[i as usize]).collect();
        let env: Vec<Val> = sets.iter().map(|s| Val::Set((*s).clone())).collect();
        let codes = sets
            .iter()
            .map(|s| {
                s.code()
                    .cloned()
                    .ok_or_else(|| Error::Unsupported("pool sets have codes".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let named: Vec<(&str, &crate::set::Code)> =
            vars.iter().map(String::as_str).zip(&codes).collect();
        let cx = || Counterexample::formula(Language::Set, psi, &named, expected);
        match c.eval(&env) {
            Ok(b) if b == expected => {}
            Ok(_) => return Ok(Case::fail(id, cx())),
            Err(e) => return Ok(Case::error(id, &e, cx())),
        }
    }
    Ok(Case::pass(id))
}
