use hfsets::order::{ack_less, ack_prefix, numeral, position, successor_a};
use hfsets::set::{decode_u64, encode};

fn main() -> hfsets::Result<()> {
    // The first sets in the order, which is the order of their codes.
    for (i, x) in ack_prefix(8).iter().enumerate() {
        println!("{i}: {x}");
    }

    let (x, y) = (decode_u64(5), decode_u64(6));
    println!(
        "#5 < #6: {}, #6 < #5: {}",
        ack_less(&x, &y),
        ack_less(&y, &x)
    );

    let x = decode_u64(15);
    let s = successor_a(&x)?;
    println!(
        "S_a({x}) = {s} (#{}), position {}",
        encode(&s)?,
        position(&s)?
    );
    println!("numeral of #11: {}", numeral(&decode_u64(11))?);
    Ok(())
}
