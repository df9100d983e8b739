//! Acceptance criteria 1 to 9, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines always show; exits non-zero on any FAIL.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equisym::characters::{inner_product, sym_sum, sym_sum_identity, Character};
use equisym::cyclotomic::CycNum;
use equisym::group::{least_fourth_root, FiniteGroup, GroupSpec};
use equisym::jacobian::{chevalley_weil, group_algebra_decomposition, moduli_fixed_dim_on, quotient_decomposition, IsogenyDecomposition};
use equisym::siegel;
use equisym::signature::{lambda_feasibility, Signature};
use equisym::vectors::{aut_apply, aut_generators, braid_move, braid_move_inverse, enumerate_vectors, is_valid_vector, orbits, orbits_plain, GeneratingVector};
use equisym::Result;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn group(spec: &str) -> std::result::Result<Arc<FiniteGroup>, String> {
    let spec: GroupSpec = lift(spec.parse())?;
    Ok(Arc::new(lift(FiniteGroup::from_spec(&spec))?))
}

fn sig(s: &str) -> std::result::Result<Signature, String> {
    lift(s.parse())
}

fn vector(g: &Arc<FiniteGroup>, sigma: &str, words: &str) -> std::result::Result<GeneratingVector, String> {
    let (_, periods) = lift(Signature::parse_ordered(sigma))?;
    let images = words.split(',').map(|w| lift(g.parse_element(w))).collect::<std::result::Result<Vec<_>, _>>()?;
    lift(GeneratingVector::new(g.clone(), periods, images))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn g4(q: u32) -> std::result::Result<Arc<FiniteGroup>, String> {
    let rho = least_fourth_root(q).ok_or(format!("no fourth root mod {q}"))?;
    group(&format!("CqC4:q={q},rho={rho}"))
}

fn x8(q: u32) -> std::result::Result<GeneratingVector, String> {
    vector(&group(&format!("AM:q={q}"))?, &format!("(0;2,4,{})", 2 * q), "z,zx,x^-1")
}

fn x4(q: u32) -> std::result::Result<GeneratingVector, String> {
    vector(&g4(q)?, &format!("(0;4,4,{q})"), "A^-1B,B^-1,A")
}

fn k_strata(q: u32) -> std::result::Result<Vec<GeneratingVector>, String> {
    let rep = lift(orbits_plain(&group(&format!("D{q}"))?, &sig(&format!("(0;2,2,{q},{q})"))?))?;
    Ok(rep.orbits.into_iter().map(|o| o.representative).collect())
}

/// Non-extendable classes of C_q x C_2 on (0;q,2q,2q).
fn x2k(q: u32) -> std::result::Result<Vec<GeneratingVector>, String> {
    let rep = lift(orbits(&group(&format!("C{q}xC2"))?, &sig(&format!("(0;{q},{},{})", 2 * q, 2 * q))?))?;
    Ok(rep.orbits.into_iter().filter(|o| !o.extendable()).map(|o| o.representative).collect())
}

fn x3(q: u32) -> std::result::Result<Vec<GeneratingVector>, String> {
    let rep = lift(orbits_plain(&group(&format!("C{q}xC3"))?, &sig(&format!("(0;3,{q},{})", 3 * q))?))?;
    Ok(rep.orbits.into_iter().map(|o| o.representative).collect())
}

fn single_factor(d: &IsogenyDecomposition, n: u32, dim: u32, what: &str) -> Check {
    let nz = d.nonzero();
    ensure(nz.len() == 1 && nz[0].n == n && nz[0].dim_b == dim, || {
        let got: Vec<String> = nz.iter().map(|f| format!("{} n={} dimB={}", f.irrep, f.n, f.dim_b)).collect();
        format!("{what}: expected one factor with n={n}, dimB={dim}, got {got:?}")
    })?;
    let total: u32 = d.factors.iter().map(|f| f.n * f.dim_b).sum();
    ensure(total == d.genus, || format!("{what}: Σ n·dimB = {total}, genus {}", d.genus))
}

fn criterion1() -> Check {
    for q in [7, 11, 13] {
        let start = Instant::now();
        let report = lift(equisym::commands::classify(q))?;
        let took = start.elapsed();
        ensure(report.realizable == [1, 2, 3, 4, 8], || format!("q={q}: realizable {:?}", report.realizable))?;
        let feas = lift(lambda_feasibility(q))?;
        for l in [5, 6, 7] {
            ensure(feas.verdict(l).is_some_and(|v| v.pairs.is_empty()), || format!("q={q}: lambda={l} not empty"))?;
        }
        ensure(took < Duration::from_secs(300), || format!("q={q}: took {took:?}"))?;
    }
    Ok(())
}

fn criterion2() -> Check {
    for q in [5u32, 7, 11, 13] {
        let rep = lift(orbits(&group(&format!("C{q}xC2"))?, &sig(&format!("(0;{q},{},{})", 2 * q, 2 * q))?))?;
        ensure(rep.count() == (q as usize - 1) / 2 && rep.extendable_count() == 1, || {
            format!("C{q}xC2: {} orbits, {} extendable", rep.count(), rep.extendable_count())
        })?;
        let rep = lift(orbits_plain(&group(&format!("C{q}xC3"))?, &sig(&format!("(0;3,{q},{})", 3 * q))?))?;
        ensure(rep.count() == 1, || format!("C{q}xC3: {} orbits", rep.count()))?;
    }
    for q in [5u32, 7, 11, 13, 17, 19, 23] {
        let expected = if q % 4 == 1 { (q + 3) / 4 } else { (q + 1) / 4 } as usize;
        let n = k_strata(q)?.len();
        ensure(n == expected, || format!("D{q}: {n} orbits, expected {expected}"))?;
    }
    Ok(())
}

fn criterion3() -> Check {
    let c10 = group("C10")?;
    let a = lift(chevalley_weil(&vector(&c10, "(0;5,10,10)", "g^2,g^-1,g^-1")?))?;
    for (label, mu) in &a.mu {
        let j: u32 = label.trim_start_matches("rho_").parse().map_err(|_| format!("label {label}"))?;
        let want = u32::from((6..=9).contains(&j));
        ensure(*mu == want, || format!("C10: mu({label}) = {mu}, expected {want}"))?;
    }
    for q in [5, 13] {
        let v = x4(q)?;
        let a = lift(chevalley_weil(&v))?;
        let table = lift(v.group().char_table())?;
        for (chi, (label, mu)) in table.chars().iter().zip(&a.mu) {
            let want = u32::from(chi.degree() > 1);
            ensure(*mu == want, || format!("G4 q={q}: mu({label}) = {mu}, expected {want}"))?;
        }
        ensure(a.mu.iter().any(|(l, _)| l.starts_with("phi")), || "no phi characters".into())?;
    }
    Ok(())
}

fn criterion4() -> Check {
    for q in [5u32, 7, 11, 13, 17] {
        single_factor(&lift(group_algebra_decomposition(&x8(q)?))?, 2, (q - 1) / 2, &format!("X8 q={q}"))?;
        for v in k_strata(q)? {
            single_factor(&lift(group_algebra_decomposition(&v))?, 2, (q - 1) / 2, &format!("K q={q} {}", v.describe()))?;
        }
        if q % 4 == 1 {
            single_factor(&lift(group_algebra_decomposition(&x4(q)?))?, 4, (q - 1) / 4, &format!("X4 q={q}"))?;
        }
    }
    Ok(())
}

fn quotient_exponent(v: &GeneratingVector, gen: &str) -> Check {
    let d = lift(group_algebra_decomposition(v))?;
    let g = v.group();
    let h = g.subgroup_generated(&[lift(g.parse_element(gen))?]);
    let qf = lift(quotient_decomposition(&d, &h))?;
    let nz: Vec<u32> = qf.iter().filter(|f| f.dim_b > 0).map(|f| f.exponent).collect();
    ensure(nz == [1], || format!("quotient by <{gen}> in {}: exponents {nz:?}", g.spec()))
}

fn criterion5() -> Check {
    for q in [5, 7, 11, 13] {
        quotient_exponent(&x8(q)?, "z")?;
    }
    for q in [5, 13, 17] {
        quotient_exponent(&x4(q)?, "B")?;
    }
    Ok(())
}

fn n_of(v: &GeneratingVector) -> std::result::Result<u32, String> {
    let a = lift(chevalley_weil(v))?;
    let all: Vec<usize> = (0..v.group().order()).collect();
    let r = lift(moduli_fixed_dim_on(v.group(), &a.character, &all))?;
    ensure(r.direct == r.via_conjugate_sum, || format!("paths differ: {} vs {}", r.direct, r.via_conjugate_sum))?;
    Ok(r.n)
}

fn criterion6() -> Check {
    for q in [5u32, 7, 11, 13, 17] {
        let mut cases: Vec<(String, GeneratingVector, u32)> = vec![(format!("X8 q={q}"), x8(q)?, 0)];
        cases.extend(x3(q)?.into_iter().map(|v| (format!("X3 q={q}"), v, 0)));
        cases.extend(x2k(q)?.into_iter().map(|v| (format!("X2k q={q}"), v, 0)));
        cases.extend(k_strata(q)?.into_iter().map(|v| (format!("K q={q}"), v, (q - 1) / 2)));
        if q % 4 == 1 {
            cases.push((format!("X4 q={q}"), x4(q)?, (q - 1) / 4));
        }
        ensure(x2k(q)?.len() == (q as usize - 3) / 2, || format!("q={q}: X2k count"))?;
        for (what, v, want) in cases {
            let n = n_of(&v)?;
            ensure(n == want, || format!("{what} {}: N = {n}, expected {want}", v.describe()))?;
        }
    }
    Ok(())
}

fn real_sym_sum(v: &GeneratingVector, h: &[usize]) -> std::result::Result<BigRational, String> {
    let a = lift(chevalley_weil(v))?;
    let chi: Character = a.character.plus(&a.character.conj());
    lift(sym_sum(v.group(), &chi, h))
}

fn criterion7() -> Check {
    for q in [5i64, 7, 11, 13, 17] {
        let v = x8(q as u32)?;
        let g = v.group();
        let h = g.subgroup_generated(&[g.gen("x").ok_or("no x")?]);
        ensure(h.len() == 2 * q as usize, || "x does not have order 2q".into())?;
        let s = real_sym_sum(&v, &h)?;
        ensure(s == rat(2 * (q * q - q)), || format!("X8 q={q}: {s}"))?;
        let all = |g: &FiniteGroup| (0..g.order()).collect::<Vec<_>>();
        for v in x3(q as u32)? {
            let s = real_sym_sum(&v, &all(v.group()))?;
            ensure(s == rat(3 * q * (q - 1)), || format!("G3 q={q}: {s}"))?;
        }
        if q % 4 == 1 {
            let v = x4(q as u32)?;
            let s = real_sym_sum(&v, &all(v.group()))?;
            ensure(s == rat(3 * q * (q - 1)), || format!("G4 q={q}: {s}"))?;
        }
    }
    Ok(())
}

fn criterion8() -> Check {
    let start = Instant::now();
    let gens = siegel::am_generators();
    ensure(gens.iter().all(|r| r.is_symplectic()), || "generators not symplectic".into())?;
    let rep = lift(siegel::am_period_matrix(siegel::DEFAULT_STARTS, 0))?;
    ensure(rep.fixed.max_residual() < 1e-10, || format!("residual {:e}", rep.fixed.max_residual()))?;
    ensure(rep.closed_form_error < 1e-9, || format!("closed form error {:e}", rep.closed_form_error))?;
    let z = rep.fixed.solution.matrix();
    ensure((z[(0, 1)].re - (5f64.sqrt() - 3.0) / 2.0).abs() < 1e-9, || "Z12".into())?;
    ensure((z[(2, 2)].im - 1.213900).abs() < 1e-4 && (z[(3, 3)] - z[(2, 2)]).norm() < 1e-9, || "Z33, Z44".into())?;
    ensure(rep.relations.relations_hold(), || format!("relations {:?}", rep.relations))?;
    ensure(rep.fixed.solution.min_im_eigenvalue() > 0.0, || "Im Z not positive".into())?;
    let accepted: Vec<bool> = rep.roots.iter().map(|r| r.accepted).collect();
    ensure(accepted == [false, true, false, false], || format!("root filter {accepted:?}"))?;
    ensure(rep.roots[0].im_a <= 0.0 && rep.roots[3].im_a <= 0.0 && rep.roots[2].delta <= 0.0, || "rejection reasons".into())?;
    let bad = lift(siegel::verify_am_relations(&siegel::am_relation_point(siegel::quartic_roots()[2])))?;
    ensure(!bad.holds(), || "k3 accepted".into())?;
    ensure(rep.passes(), || "report checks".into())?;
    ensure(start.elapsed() < Duration::from_secs(30), || format!("took {:?}", start.elapsed()))
}

fn moves_preserve_validity(v: &GeneratingVector, auts: &[equisym::group::GroupHom]) -> Check {
    let g = v.group();
    let s = v.periods().len();
    let check = |w: &GeneratingVector| -> Check {
        let sigma = w.signature();
        let mut ordered = sigma.clone();
        ordered.periods = w.periods().to_vec();
        ensure(lift(is_valid_vector(g, &ordered, w.images()))?, || format!("{} invalid", w.describe()))
    };
    for i in 1..s {
        check(&lift(braid_move(v, i))?)?;
        check(&lift(braid_move_inverse(v, i))?)?;
    }
    for a in auts {
        check(&lift(aut_apply(a, v))?)?;
    }
    Ok(())
}

fn orthogonal(g: &FiniteGroup) -> Check {
    let table = lift(g.char_table())?;
    let chars = table.chars();
    let sq: u64 = chars.iter().map(|c| (c.degree() as u64).pow(2)).sum();
    ensure(sq == g.order() as u64, || format!("{}: Σd² = {sq}", g.spec()))?;
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            let ip = lift(inner_product(a, b))?;
            ensure(ip == rat(i64::from(i == j)), || format!("{}: <{}, {}> = {ip}", g.spec(), a.label(), b.label()))?;
        }
    }
    Ok(())
}

fn random_cyc(rng: &mut ChaCha8Rng) -> CycNum {
    let n = [1u32, 3, 4, 5, 8, 12, 15][rng.gen_range(0..7)];
    let coeffs: Vec<BigRational> =
        (0..n).map(|_| BigRational::new(BigInt::from(rng.gen_range(-6..=6)), BigInt::from(rng.gen_range(1..=4)))).collect();
    CycNum::from_coeffs(n, &coeffs)
}

fn cyclotomic_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let (a, b, c) = (random_cyc(&mut rng), random_cyc(&mut rng), random_cyc(&mut rng));
        ensure(&(&a + &b) + &c == &a + &(&b + &c), || "additive associativity".into())?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || "multiplicative associativity".into())?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || "distributivity".into())?;
        ensure(&a * &b == &b * &a && &a + &b == &b + &a, || "commutativity".into())?;
        ensure((&a + &(-&a)).is_zero() && &a * &CycNum::one(1) == a, || "identities".into())?;
        ensure((&a * &b).conj() == &a.conj() * &b.conj(), || "conjugation".into())?;
        let z = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
        ensure(z.norm() < 1e-9, || "complex embedding".into())?;
    }
    Ok(())
}

fn criterion9() -> Check {
    cyclotomic_axioms()?;
    let mut pairs: Vec<(Arc<FiniteGroup>, Signature)> = Vec::new();
    for q in [7u32, 11, 13] {
        for v in lift(lambda_feasibility(q))?.verdicts {
            pairs.extend(v.pairs.into_iter().map(|p| (p.group, p.signature)));
        }
    }
    for (spec, s) in [("C5xC2", "(0;5,10,10)"), ("D5", "(0;2,2,5,5)"), ("C5xC3", "(0;3,5,15)"), ("AM:q=5", "(0;2,4,10)"), ("CqC4:q=5,rho=2", "(0;4,4,5)"), ("D10", "(0;2,2,2,5)")] {
        pairs.push((group(spec)?, sig(s)?));
    }
    let mut vectors = 0usize;
    let mut identities = 0usize;
    for (g, s) in &pairs {
        orthogonal(g)?;
        let auts = lift(aut_generators(g))?;
        for v in lift(enumerate_vectors(g, s))? {
            moves_preserve_validity(&v, &auts)?;
            vectors += 1;
        }
        let all: Vec<usize> = (0..g.order()).collect();
        for o in lift(orbits_plain(g, s))?.orbits {
            let chi = lift(chevalley_weil(&o.representative))?.character;
            lift(sym_sum_identity(g, &chi, &all))?;
            identities += 1;
            for x in o.representative.images() {
                lift(sym_sum_identity(g, &chi, &g.subgroup_generated(&[*x])))?;
            }
        }
    }
    ensure(vectors > 0 && identities > 0, || "nothing checked".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("lambda classification for q in {7,11,13}", criterion1),
        ("stratum counts", criterion2),
        ("Chevalley-Weil multiplicities", criterion3),
        ("decomposition dimensions", criterion4),
        ("quotient exponents", criterion5),
        ("N values on both paths", criterion6),
        ("symmetric-square sums", criterion7),
        ("period matrix", criterion8),
        ("property sweeps", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.1}s)", i + 1, start.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
