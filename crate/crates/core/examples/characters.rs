//! Character tables with exact cyclotomic values, their rational
//! irreducibles, and the fixed dimension of a representation under a subgroup.
//!
//!     cargo run --example characters -- "CqC4:q=5,rho=2"

use equisym::characters::{fixed_dim, inner_product, rational_irreps, sym_square_char, sym_sum_identity};
use equisym::cyclotomic::CycNum;
use equisym::group::FiniteGroup;

fn main() -> equisym::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "CqC4:q=5,rho=2".into());
    let g = FiniteGroup::from_spec(&spec.parse()?)?;
    let table = g.char_table()?;

    let reps = table.class_reps();
    let header: Vec<String> = reps.iter().map(|&x| g.element_name(x)).collect();
    println!("{spec}: {} classes, representatives {}", reps.len(), header.join(" "));
    for chi in table.chars() {
        let vals: Vec<String> = reps.iter().map(|&x| chi.value(x).render_complex()).collect();
        println!("  {:<10} {}", chi.label(), vals.join("  "));
    }

    println!("\nrational irreducibles:");
    for r in rational_irreps(&g)? {
        println!("  {:<24} m = {}  d = {}  s = {}", r.constituent_labels.join("+"), r.m, r.d, r.schur);
    }

    let all: Vec<usize> = (0..g.order()).collect();
    let chi = table.chars().last().expect("nonempty table");
    let gen = g.generators()[0].1;
    let h = g.subgroup_generated(&[gen]);
    println!("\n{}: <chi|chi> = {}", chi.label(), inner_product(chi, chi)?);
    println!("  fixed dimension under <{}> = {}", g.element_name(gen), fixed_dim(&g, chi, &h)?);
    println!("  Sym^2 has degree {}", sym_square_char(&g, chi)?.degree());
    println!("  sum of Sym^2 over G = {}", sym_sum_identity(&g, chi, &all)?);

    // the arithmetic underneath
    let z = CycNum::zeta(5, 1);
    let s = &(&(&z + &z.pow(2)) + &z.pow(3)) + &z.pow(4);
    println!("\nz5 + z5^2 + z5^3 + z5^4 = {}", s.rational_part().expect("rational"));
    Ok(())
}
