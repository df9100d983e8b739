//! Topological classes of actions as braid and automorphism orbits, and
//! which of them extend to a larger group.
//!
//!     cargo run --release --example orbits

use std::sync::Arc;

use equisym::group::FiniteGroup;
use equisym::signature::Signature;
use equisym::vectors::{braid_move, orbits};

fn show(group: &str, sigma: &str) -> equisym::Result<()> {
    let g = Arc::new(FiniteGroup::from_spec(&group.parse()?)?);
    let sigma: Signature = sigma.parse()?;
    let report = orbits(&g, &sigma)?;
    println!("{group} on {sigma}: {} vectors, {} classes", report.total, report.count());
    for o in &report.orbits {
        let ext = match &o.extension {
            Some(e) if e.whole_stratum => format!("extends to {}", e.ambient_label),
            Some(e) => format!("some surfaces extend to {}", e.ambient_label),
            None => "maximal".into(),
        };
        println!("  {:<32} size {:>4}  {ext}", o.representative.describe(), o.size);
    }
    if report.normalizer_merge {
        println!("  after identifying by the normalizer: {} surfaces", report.merged_count);
    }
    Ok(())
}

fn main() -> equisym::Result<()> {
    show("C7xC2", "(0;7,14,14)")?;
    show("D13", "(0;2,2,13,13)")?;
    show("C7xC3", "(0;3,7,21)")?;
    show("CqC4:q=13,rho=5", "(0;4,4,13)")?;

    // one braid move by hand
    let d = Arc::new(FiniteGroup::from_spec(&"D5".parse()?)?);
    let images = ["s", "sr", "r", "r^-2"].iter().map(|w| d.parse_element(w)).collect::<Result<Vec<_>, _>>()?;
    let v = equisym::vectors::GeneratingVector::from_images(d.clone(), images)?;
    println!("\n{} --Phi_3--> {}", v.describe(), braid_move(&v, 3)?.describe());
    Ok(())
}
