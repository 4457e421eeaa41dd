use super::corpus::Line;
use super::{code_str, Case, Counterexample, Report, SuiteParams};
use crate::cardinal::FunctionGraph;
use crate::error::Result;
use crate::eval::{compile_set, EvalContext};
use crate::logic::{parse_set, AnyFormula, Language, SetFormula, Syntax};
use crate::set::{decode_u64, level_of, materialize_level_within, Budget, HfSet};

const CLOSED: [(&str, &str); 8] = [
    (
        "extensionality",
        "forall x. forall y. (forall z in x. z in y) & (forall z in y. z in x) -> x = y",
    ),
    ("foundation", "forall x. !(x = 0e) -> exists y in x. forall z in y. !(z in x)"),
    (
        "pair",
        "forall x. forall y. x in pair(x, y) & y in pair(x, y) & (forall z in pair(x, y). z = x | z = y)",
    ),
    ("sum", "forall x. forall y in x. forall z in y. z in U(x)"),
    ("sum-members", "forall x. forall z in U(x). exists y in x. z in y"),
    ("power", "forall x. forall z in P(x). forall w in z. w in x"),
    ("power-complete", "forall x. forall z. (forall w in z. w in x) -> z in P(x)"),
    ("empty", "exists x. forall z. !(z in x)"),
];

/// The separation instance for `phi`, a bounded formula in `z` that may
/// also mention `x` and a parameter `p`.
fn separation(phi: &SetFormula) -> Result<SetFormula> {
    let params = if phi.free_vars().contains("p") {
        "forall p in x. "
    } else {
        ""
    };
    parse_set(&format!(
        "forall x. {params}exists s in P(x). forall z in x. (z in s -> ({phi})) & (({phi}) -> z in s)"
    ))
}

fn check_closed(id: &str, f: &SetFormula, ctx: &EvalContext) -> Case {
    let cx = || Counterexample::formula(Language::Set, f, &[], true);
    match compile_set(f, &[], ctx).and_then(|c| c.eval(&[])) {
        Ok(true) => Case::pass(id),
        Ok(false) => Case::fail(id, cx()).detail("false at the cutoff"),
        Err(e) => Case::error(id, &e, cx()),
    }
}

/// The axioms of finite set theory at the cutoff: the closed axioms and the
/// separation instances by evaluation, Dedekind finiteness by trying every
/// self-map of the small sets, and the hierarchy principle against the
/// materialized levels.
pub fn check_axioms(
    separation_corpus: &[Line],
    ctx: &EvalContext,
    params: &SuiteParams,
) -> Result<Report> {
    let mut cases = Vec::new();
    for (id, src) in CLOSED {
        let f = parse_set(src).expect("axioms parse");
        cases.push(check_closed(id, &f, ctx));
    }
    for line in separation_corpus {
        let f = match line.parse(Language::Set)? {
            AnyFormula::Set(f) => separation(&f).map_err(|e| line.locate(e))?,
            AnyFormula::Arith(_) => unreachable!(),
        };
        cases.push(check_closed(&format!("separation/{}", line.id()), &f, ctx));
    }
    for k in 0..=params.card_max {
        cases.push(dedekind(k, ctx.set_cutoff));
    }
    cases.push(hierarchy(ctx.set_cutoff, &ctx.budget));
    Ok(Report::new("axioms", ctx, params, cases))
}

/// Every set below the cutoff with `k` members has every one-one self-map
/// onto.
fn dedekind(k: usize, cutoff: u64) -> Case {
    let id = format!("dedekind/size-{k}");
    let mut checked = 0u64;
    for x in (0..cutoff).map(decode_u64).filter(|x| x.len() == k) {
        let m = x.members();
        let mut f = vec![0usize; k];
        loop {
            checked += 1;
            let mut hit = vec![false; k];
            let injective = f.iter().all(|&i| !std::mem::replace(&mut hit[i], true));
            if injective && !hit.iter().all(|&h| h) {
                let g = FunctionGraph::from_pairs(
                    f.iter()
                        .enumerate()
                        .map(|(i, &j)| (m[i].clone(), m[j].clone()))
                        .collect(),
                )
                .expect("a function");
                return Case::fail(
                    id,
                    Counterexample::Dedekind {
                        set: code_str(&x),
                        map: code_str(g.as_set()),
                    },
                );
            }
            if !next(&mut f, k) {
                break;
            }
        }
    }
    Case::pass(id).detail(format!("{checked} maps"))
}

/// Steps `f` through all maps `k → k` in odometer order.
fn next(f: &mut [usize], k: usize) -> bool {
    for d in f.iter_mut().rev() {
        *d += 1;
        if *d < k {
            return true;
        }
        *d = 0;
    }
    false
}

/// The least materializable level with `x` as a member.
pub(crate) fn least_level(x: &HfSet, budget: &Budget) -> Result<Option<HfSet>> {
    for m in 0.. {
        match materialize_level_within(m, budget) {
            Ok(v) if v.contains(x) => return Ok(Some(v)),
            Ok(_) => {}
            Err(e) if e.is_budget() => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

/// `R(x)` contains `x`, is a level, and no smaller level contains `x`.
fn hierarchy(cutoff: u64, budget: &Budget) -> Case {
    let id = "hierarchy";
    for x in (0..cutoff).map(decode_u64) {
        let r = level_of(&x);
        let level = match r.materialize(budget) {
            Ok(v) => v,
            Err(e) => return Case::error(id, &e, hierarchy_cx(&x, &HfSet::empty())),
        };
        let least = least_level(&x, budget);
        if !level.contains(&x) || least.as_ref().ok() != Some(&Some(level.clone())) {
            return Case::fail(id, hierarchy_cx(&x, &level));
        }
    }
    Case::pass(id)
}

fn hierarchy_cx(x: &HfSet, level: &HfSet) -> Counterexample {
    Counterexample::Hierarchy {
        set: code_str(x),
        level: code_str(level),
    }
}
