use hfsets::cardinal::{
    card, card_add, card_eq, card_exp_count, card_lt, injection_search, product,
};
use hfsets::set::decode_u64;

fn main() -> hfsets::Result<()> {
    let (x, y) = (decode_u64(0b1011), decode_u64(0b110));
    println!("|x| = {}, |y| = {}", card(&x), card(&y));
    println!("x ~ y: {}, y < x: {}", card_eq(&x, &y), card_lt(&y, &x));
    if let Some(f) = injection_search(&y, &x) {
        println!("an injection y -> x: {}", f.as_set());
    }
    println!("|x + y| = {}", card_add(&x, &y)?.len());
    println!("|x * y| = {}", product(&x, &y)?.len());
    println!("|x ^ y| = {}", card_exp_count(&x, &y));
    Ok(())
}
