//! Build the named groups, then list every group of order λq and what it is.
//!
//!     cargo run --example groups -- 7

use equisym::group::{all_of_order, automorphisms, identify, FiniteGroup, GroupSpec};

fn main() -> equisym::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);

    for spec in ["D7", "C7xC3", "AM:q=5", "CqC4:q=13,rho=5", "D:5x2"] {
        let g = FiniteGroup::from_spec(&spec.parse::<GroupSpec>()?)?;
        let mut orders: Vec<usize> = g.element_orders().to_vec();
        orders.sort_unstable();
        orders.dedup();
        println!(
            "{:<18} order {:>3}  classes {:>2}  |Aut| {:>4}  abelian {:<5}  element orders {:?}",
            spec,
            g.order(),
            g.conjugacy_classes().len(),
            automorphisms(&g)?.len(),
            g.is_abelian(),
            orders
        );
    }

    // a word in the generators and back
    let am = FiniteGroup::from_spec(&"AM:q=5".parse()?)?;
    let zx = am.parse_element("zx")?;
    println!("\nin AM(5): zx = {} of order {}", am.element_name(zx), am.element_order(zx));

    println!("\ngroups of order lambda*{q}:");
    for lambda in [2u32, 3, 4, 6, 8] {
        for g in all_of_order(lambda, q)? {
            let name = identify(&g, lambda, q).map_or_else(|| g.spec().to_string(), |s| s.to_string());
            println!("  lambda = {lambda}  {name:<28} abelian {}", g.is_abelian());
        }
    }
    Ok(())
}
