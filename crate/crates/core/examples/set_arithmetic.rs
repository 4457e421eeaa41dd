//! Arithmetic carried out on sets, in both modes.

use hfsets::arith::{add_a, exp_a, mul_a, ArithMode};
use hfsets::set::{decode_u64, encode};

fn main() -> hfsets::Result<()> {
    let (x, y) = (decode_u64(5), decode_u64(3));
    for mode in [ArithMode::Fast, ArithMode::Literal] {
        let sum = add_a(&x, &y, mode)?;
        let prod = mul_a(&x, &y, mode)?;
        let pow = exp_a(&x, &y, mode)?;
        println!(
            "{mode:?}: 5 + 3 = #{}, 5 * 3 = #{}, 5 ^ 3 = #{}",
            encode(&sum)?,
            encode(&prod)?,
            encode(&pow)?
        );
    }
    Ok(())
}
