use std::collections::BTreeMap;

use hfsets::eval::{eval_arith, eval_set, EvalContext};
use hfsets::logic::{is_bounded_arith, is_bounded_set, parse_arith, parse_set};
use hfsets::set::decode_u64;

fn main() -> hfsets::Result<()> {
    let ctx = EvalContext::default();

    let phi = parse_arith("exists z < y. x + z = y")?;
    println!("{phi}  bounded: {}", is_bounded_arith(&phi));
    let env = BTreeMap::from([("x".to_string(), 3u8.into()), ("y".to_string(), 7u8.into())]);
    println!("  x = 3, y = 7: {}", eval_arith(&phi, &env, &ctx)?);

    let psi = parse_set("forall u in x. u in P(y)")?;
    println!("{psi}  bounded: {}", is_bounded_set(&psi));
    let env = BTreeMap::from([
        ("x".to_string(), decode_u64(6)),
        ("y".to_string(), decode_u64(3)),
    ]);
    println!("  x = #6, y = #3: {}", eval_set(&psi, &env, &ctx)?);

    let open = parse_arith("exists z. z * z = x")?;
    let env = BTreeMap::from([("x".to_string(), 49u8.into())]);
    println!(
        "{open}  at cutoff {}: {}",
        ctx.nat_cutoff,
        eval_arith(&open, &env, &ctx)?
    );
    Ok(())
}
