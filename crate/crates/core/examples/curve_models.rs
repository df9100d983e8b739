//! Equation templates for every family at a given prime.
//!
//!     cargo run --example curve_models -- 13

use equisym::curves::{curve_model, CurveFamily};

fn main() -> equisym::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);
    for family in CurveFamily::ALL {
        match curve_model(family, q) {
            Ok(m) => println!("{m}"),
            Err(e) => println!("family     {family}\n  {e}\n"),
        }
    }
    Ok(())
}
