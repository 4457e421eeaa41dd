//! Sets and their Ackermann codes: `n` codes the set of `m` with bit `m` of `n` set.

use hfsets::set::{decode_u64, encode, materialize_level, parse_set_literal, powerset, sumset};

fn main() -> hfsets::Result<()> {
    for n in [0, 1, 2, 3, 11, 16] {
        println!("#{n:<3} = {}", decode_u64(n));
    }

    let x = parse_set_literal("{{}, {{}, {{}}}}")?;
    println!("{x} has code {} and rank {}", encode(&x)?, x.rank());

    let p = powerset(&decode_u64(3))?;
    println!("P(#3) = {p} = #{}", encode(&p)?);
    println!("U(#11) = #{}", encode(&sumset(&decode_u64(11)))?);

    for m in 1..=4 {
        println!("|V_{m}| = {}", materialize_level(m)?.len());
    }
    Ok(())
}
