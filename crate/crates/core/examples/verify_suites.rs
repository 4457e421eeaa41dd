//! Runs the quicker verification suites at small parameters.
//!
//! `cargo run --example verify_suites -- theorem6` runs just one.

use hfsets::eval::EvalContext;
use hfsets::verify::{run, Suite, SuiteParams};

fn main() -> hfsets::Result<()> {
    let ctx = EvalContext {
        set_cutoff: 64,
        nat_cutoff: 64,
        ..EvalContext::default()
    };
    let params = SuiteParams {
        max_code: 64,
        literal_max: 16,
        assignment_max: 16,
        ..SuiteParams::default()
    };
    let only: Option<Suite> = std::env::args().nth(1).map(|s| s.parse()).transpose()?;
    let suites = [
        Suite::Theorem6,
        Suite::Cardinal,
        Suite::Controls,
        Suite::Opei,
        Suite::RoundtripDa,
    ];
    for suite in suites.into_iter().filter(|s| only.is_none_or(|o| o == *s)) {
        let r = run(suite, &ctx, &params, None)?;
        println!("{}", r.human().lines().next().unwrap_or_default());
    }
    Ok(())
}
