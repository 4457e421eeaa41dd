use hfsets::interp::{compose, translate, InterpMap};
use hfsets::logic::{parse, Language};

fn main() -> hfsets::Result<()> {
    let phi = parse(Language::Arith, "forall z < y. z + x = x + z")?;
    for m in [InterpMap::D, InterpMap::C, InterpMap::O] {
        println!("{m:?}: {}", translate(m, &phi)?);
    }

    let psi = parse(Language::Set, "x in y")?;
    println!("A: {}", translate(InterpMap::A, &psi)?);
    println!("D after A: {}", compose(InterpMap::A, InterpMap::D, &psi)?);
    Ok(())
}
