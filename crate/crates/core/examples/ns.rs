//! Dimension N of the locus in Siegel space fixed by the action, computed
//! two ways, for each family and several primes.
//!
//!     cargo run --release --example ns

use equisym::commands::ns;
use equisym::group::least_fourth_root;

fn main() -> equisym::Result<()> {
    println!("{:>3}  {:>3}  {:>3}  {:>3}  {:>3}", "q", "X8", "X3", "X4", "K_g");
    for q in [5u32, 7, 11, 13] {
        let x8 = ns(&format!("AM:q={q}"), &format!("(0;2,4,{})", 2 * q), Some("z,zx,x^-1"), None)?;
        let x3 = ns(&format!("C{q}xC3"), &format!("(0;3,{q},{})", 3 * q), None, None)?;
        let x4 = match least_fourth_root(q) {
            Some(rho) => {
                let e = ns(&format!("CqC4:q={q},rho={rho}"), &format!("(0;4,4,{q})"), Some("A^-1B,B^-1,A"), None)?;
                e[0].report.n.to_string()
            }
            None => "-".into(),
        };
        let k = ns(&format!("D{q}"), &format!("(0;2,2,{q},{q})"), None, None)?;
        let kn: Vec<String> = k.iter().map(|e| e.report.n.to_string()).collect();
        println!("{q:>3}  {:>3}  {:>3}  {x4:>3}  {}", x8[0].report.n, x3[0].report.n, kn.join(","));
    }

    // N for a subgroup bounds N for the whole group
    let h = ns("AM:q=5", "(0;2,4,10)", Some("z,zx,x^-1"), Some("x"))?;
    println!("\nX8 (q=5), H = <x> of order {}: N_H = {}", h[0].report.subgroup_order, h[0].report.n);
    Ok(())
}
