//! Chevalley-Weil and the group algebra decomposition of the Jacobian for
//! the X8, X4 and K_g families, with the Jacobian of one quotient.
//!
//!     cargo run --release --example decompose -- 13

use equisym::commands::{decompose, render_decompose, Format};
use equisym::group::least_fourth_root;

fn main() -> equisym::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);

    println!("== X8, quotient by <z>");
    let am = format!("AM:q={q}");
    let r = decompose(&am, &format!("(0;2,4,{})", 2 * q), Some("z,zx,x^-1"), Some("z"))?;
    print!("{}", render_decompose(&r, Format::Table)?);

    if let Some(rho) = least_fourth_root(q) {
        println!("\n== X4, quotient by <B>");
        let g4 = format!("CqC4:q={q},rho={rho}");
        let r = decompose(&g4, &format!("(0;4,4,{q})"), Some("A^-1B,B^-1,A"), Some("B"))?;
        print!("{}", render_decompose(&r, Format::Table)?);
    }

    println!("\n== K_g strata");
    let r = decompose(&format!("D{q}"), &format!("(0;2,2,{q},{q})"), None, None)?;
    print!("{}", render_decompose(&r, Format::Table)?);
    Ok(())
}
