//! Which λ occur for a prime q, with the equisymmetric strata per family.
//!
//!     cargo run --release --example classify -- 13

use equisym::commands::{classify, render_classify, Format};

fn main() -> equisym::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);
    let report = classify(q)?;
    print!("{}", render_classify(&report, Format::Table)?);

    let s = &report.summary;
    let k_expected = if q % 4 == 1 { (q + 3) / 4 } else { (q + 1) / 4 };
    println!();
    println!("X2k strata: {} (expected (q-3)/2 = {})", s.x2k, (q - 3) / 2);
    println!("K strata:   {} (expected {})", s.k_strata, k_expected);
    Ok(())
}
