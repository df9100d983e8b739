//! The genus 4 Accola-Maclachlan period matrix as the common fixed point of
//! two symplectic matrices, checked against its closed form.
//!
//!     cargo run --release --example period_matrix -- 0

use equisym::siegel::{am_generators, am_period_matrix, fixed_points, SymplecticMatrix, DEFAULT_STARTS};

fn main() -> equisym::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let [r1, r2] = am_generators();
    println!("R1, R2 symplectic: {} {}", r1.is_symplectic(), r2.is_symplectic());

    let report = am_period_matrix(DEFAULT_STARTS, seed)?;
    let z = report.fixed.solution.matrix();
    println!("convention: {:?}", report.convention);
    for r in 0..z.nrows() {
        let row: Vec<String> = (0..z.ncols()).map(|c| format!("{:>9.6}{:+.6}i", z[(r, c)].re, z[(r, c)].im)).collect();
        println!("  {}", row.join("  "));
    }
    println!("residuals {:?}", report.fixed.residuals);
    println!("distance to closed form {:.2e}", report.closed_form_error);
    println!("k = {:.6}{:+.6}i", report.relations.k[0], report.relations.k[1]);
    for v in &report.roots {
        println!("  root {}: Im a = {:>8.4}  delta = {:>8.4}  {}", v.name, v.im_a, v.delta, if v.accepted { "kept" } else { "rejected" });
    }
    println!("all checks pass: {}", report.passes());

    // the identity alone fixes everything
    let free = fixed_points(&[SymplecticMatrix::identity(2)], 8, seed)?;
    println!("\nidentity in genus 2: family of dimension {}", free.family_dim);
    Ok(())
}
