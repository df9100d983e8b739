//! Analytic representation of an action (Chevalley–Weil), the
//! group-algebra isogeny decomposition of the Jacobian, induced
//! decompositions of quotients, and the dimension N_{S,G} of the fixed
//! locus in Siegel space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{fixed_dim, inner_product_on, rational_irreps, sym_sum, sym_sum_identity, Character, RationalIrrep};
use crate::error::{invalid, Error, Result};
use crate::group::FiniteGroup;
use crate::vectors::GeneratingVector;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_count(r: &BigRational, what: &str) -> Result<u32> {
    if !r.is_integer() || *r < BigRational::zero() {
        return Err(Error::CrossCheck(format!("{what} = {r} is not a non-negative integer")));
    }
    r.to_integer().to_u32().ok_or_else(|| Error::CrossCheck(format!("{what} = {r} out of range")))
}

/// Number of eigenvalues of ρ(g) equal to ζ_k^j, k the order of g, by
/// discrete Fourier inversion of χ over ⟨g⟩.
pub fn eigenvalue_count(g: &FiniteGroup, chi: &Character, x: usize, j: u32) -> Result<u32> {
    let k = g.element_order(x);
    let powers: Vec<usize> = (0..k).map(|t| g.pow(x, t as i64)).collect();
    to_count(&chi.fourier_coefficient(&powers, j)?, "eigenvalue count")
}

/// μ_ρ = −d_ρ + Σ_l Σ_{j=1}^{k_l} N_{l,j}(1 − j/k_l), with μ = 0 for the
/// trivial character.
pub fn cw_multiplicity(v: &GeneratingVector, chi: &Character) -> Result<u32> {
    let g = v.group();
    let d = chi.degree() as i64;
    if chi.is_trivial() {
        return Ok(0);
    }
    let mut mu = big(-d);
    for (&x, &k) in v.images().iter().zip(v.periods()) {
        for j in 1..=k {
            let n = eigenvalue_count(g, chi, x, j % k)?;
            mu += big(n as i64) * BigRational::new(BigInt::from(k - j), BigInt::from(k));
        }
    }
    to_count(&mu, &format!("multiplicity of {}", chi.label()))
}

/// ρ_a ≅ ⊕ μ_ρ ρ.
#[derive(Clone, Debug)]
pub struct AnalyticDecomposition {
    pub vector: GeneratingVector,
    /// (character label, μ), in table order.
    pub mu: Vec<(String, u32)>,
    pub character: Character,
    pub genus: u32,
}

impl AnalyticDecomposition {
    pub fn multiplicity(&self, label: &str) -> Option<u32> {
        self.mu.iter().find(|(l, _)| l == label).map(|&(_, m)| m)
    }
}

pub fn chevalley_weil(v: &GeneratingVector) -> Result<AnalyticDecomposition> {
    let g = v.group();
    let table = g.char_table()?;
    let mut mu = Vec::new();
    let mut character: Option<Character> = None;
    let mut total = 0u64;
    for chi in table.chars() {
        let m = cw_multiplicity(v, chi)?;
        mu.push((chi.label().to_string(), m));
        if m > 0 {
            total += m as u64 * chi.degree() as u64;
            let part = chi.scaled(m as i64);
            character = Some(match character {
                Some(c) => c.plus(&part),
                None => part,
            });
        }
    }
    let genus = v.genus();
    if total as i64 != genus {
        return Err(Error::CrossCheck(format!("Σ μ·d = {total} but the genus is {genus}")));
    }
    let character = character
        .ok_or_else(|| Error::Unsupported("genus zero surfaces have no analytic representation".into()))?
        .with_label("rho_a");
    Ok(AnalyticDecomposition { vector: v.clone(), mu, character, genus: genus as u32 })
}

/// One factor B_l of JS ∼ B₁^{n₁} × … × B_r^{n_r}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsogenyFactor {
    pub irrep: String,
    pub constituents: Vec<String>,
    pub m: u32,
    pub schur: u32,
    pub d: u32,
    /// Exponent n = d/s.
    pub n: u32,
    #[serde(rename = "dimB")]
    pub dim_b: u32,
}

#[derive(Clone, Debug)]
pub struct IsogenyDecomposition {
    pub analytic: AnalyticDecomposition,
    pub irreps: Vec<RationalIrrep>,
    pub factors: Vec<IsogenyFactor>,
    pub genus: u32,
}

impl IsogenyDecomposition {
    pub fn nonzero(&self) -> Vec<&IsogenyFactor> {
        self.factors.iter().filter(|f| f.dim_b > 0).collect()
    }

    /// "JS ~ B^2, dim B = 2" style rendering of the nonzero part.
    pub fn summary(&self) -> String {
        let nz = self.nonzero();
        if nz.is_empty() {
            return "JS ~ 0".into();
        }
        let name = |i: usize| if nz.len() == 1 { "B".to_string() } else { format!("B{}", i + 1) };
        let powers: Vec<String> = nz
            .iter()
            .enumerate()
            .map(|(i, f)| if f.n == 1 { name(i) } else { format!("{}^{}", name(i), f.n) })
            .collect();
        let dims: Vec<String> = nz.iter().enumerate().map(|(i, f)| format!("dim {} = {}", name(i), f.dim_b)).collect();
        format!("JS ~ {}, {}", powers.join(" x "), dims.join(", "))
    }
}

/// dim B_l = m_l[d_l(γ−1) + ½ Σ_j (d_l − d_l^{⟨θ(x_j)⟩})] with γ = 0,
/// and dim B = γ for the trivial representation.
pub fn group_algebra_decomposition(v: &GeneratingVector) -> Result<IsogenyDecomposition> {
    let g = v.group();
    let analytic = chevalley_weil(v)?;
    let table = g.char_table()?;
    let irreps = rational_irreps(g)?;
    let cyclic: Vec<Vec<usize>> = v.images().iter().map(|&x| g.subgroup_generated(&[x])).collect();
    let mut factors = Vec::new();
    let mut total = 0i64;
    for w in &irreps {
        let chi = &table.chars()[w.constituents[0]];
        let d = w.d as i64;
        let trivial = chi.is_trivial();
        let dim_b = if trivial {
            0
        } else {
            let mut twice = -2 * d;
            for h in &cyclic {
                twice += d - fixed_dim(g, chi, h)? as i64;
            }
            let twice = twice * w.m as i64;
            if twice < 0 || twice % 2 != 0 {
                return Err(Error::CrossCheck(format!("dimension of the factor for {} is {twice}/2", w.label)));
            }
            twice / 2
        };
        // n·dim B must equal the part of ρ_a carried by the orbit
        let carried: i64 = w
            .constituents
            .iter()
            .map(|&i| analytic.mu[i].1 as i64 * table.chars()[i].degree() as i64)
            .sum();
        if w.n as i64 * dim_b != carried {
            return Err(Error::CrossCheck(format!(
                "factor {}: n·dim B = {} but ρ_a carries {carried}",
                w.label,
                w.n as i64 * dim_b
            )));
        }
        total += w.n as i64 * dim_b;
        factors.push(IsogenyFactor {
            irrep: w.label.clone(),
            constituents: w.constituent_labels.clone(),
            m: w.m,
            schur: w.schur,
            d: w.d,
            n: w.n,
            dim_b: dim_b as u32,
        });
    }
    if total != analytic.genus as i64 {
        return Err(Error::CrossCheck(format!("Σ n·dim B = {total} but the genus is {}", analytic.genus)));
    }
    let genus = analytic.genus;
    Ok(IsogenyDecomposition { analytic, irreps, factors, genus })
}

/// Exponent of each factor in J(S/H): n_l^H = d_l^H / s_l.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientFactor {
    pub irrep: String,
    #[serde(rename = "dimB")]
    pub dim_b: u32,
    pub exponent: u32,
}

pub fn quotient_decomposition(d: &IsogenyDecomposition, h: &[usize]) -> Result<Vec<QuotientFactor>> {
    let g = d.analytic.vector.group();
    if !g.is_subgroup(h) {
        return invalid("element set is not a subgroup");
    }
    let table = g.char_table()?;
    let mut out = Vec::new();
    let mut total = 0u64;
    for (w, f) in d.irreps.iter().zip(&d.factors) {
        let chi = &table.chars()[w.constituents[0]];
        let fixed = fixed_dim(g, chi, h)?;
        if fixed % w.schur != 0 {
            return Err(Error::CrossCheck(format!("exponent {fixed}/{} is not integral", w.schur)));
        }
        let exponent = fixed / w.schur;
        total += exponent as u64 * f.dim_b as u64;
        out.push(QuotientFactor { irrep: w.label.clone(), dim_b: f.dim_b, exponent });
    }
    // genus of S/H is the dimension of the H-invariant forms
    let genus_quotient = fixed_dim(g, &d.analytic.character, h)?;
    if total != genus_quotient as u64 {
        return Err(Error::CrossCheck(format!("quotient exponents give dimension {total}, expected {genus_quotient}")));
    }
    Ok(out)
}

/// N_{S,H} from both formulas.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsReport {
    #[serde(rename = "N")]
    pub n: u32,
    /// (1/|H|) Σ χ_a^sym.
    pub direct: String,
    /// (1/2|H|)[Σ (χ_a+χ̄_a)^sym − |H|⟨χ_a|χ_a⟩].
    pub via_conjugate_sum: String,
    /// Σ_h (χ_a+χ̄_a)^sym(h).
    pub real_sym_sum: String,
    pub subgroup_order: usize,
}

/// N for the analytic character restricted to the subgroup H.
pub fn moduli_fixed_dim_on(g: &FiniteGroup, chi_a: &Character, h: &[usize]) -> Result<NsReport> {
    if !g.is_subgroup(h) {
        return invalid("element set is not a subgroup");
    }
    let size = big(h.len() as i64);
    let direct = sym_sum(g, chi_a, h)? / &size;
    let real = chi_a.plus(&chi_a.conj());
    let real_sum = sym_sum(g, &real, h)?;
    let norm = inner_product_on(chi_a, chi_a, h)?;
    let via = (&real_sum - &size * norm) / (big(2) * &size);
    // the same identity again through its own cross-checked routine
    let identity = sym_sum_identity(g, chi_a, h)? / &size;
    if direct != via || direct != identity {
        return Err(Error::CrossCheck(format!("N disagrees: {direct} directly, {via} via the conjugate sum")));
    }
    Ok(NsReport {
        n: to_count(&direct, "N")?,
        direct: direct.to_string(),
        via_conjugate_sum: via.to_string(),
        real_sym_sum: real_sum.to_string(),
        subgroup_order: h.len(),
    })
}

/// N_{S,G} for the whole acting group of the vector.
pub fn moduli_fixed_dim(v: &GeneratingVector) -> Result<NsReport> {
    let a = chevalley_weil(v)?;
    let all: Vec<usize> = (0..v.group().order()).collect();
    moduli_fixed_dim_on(v.group(), &a.character, &all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use std::sync::Arc;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_spec(&s.parse::<GroupSpec>().unwrap()).unwrap())
    }

    #[test]
    fn cyclic_ten_multiplicities() {
        let c = group("C10");
        let x = c.gen("g").unwrap();
        let v = GeneratingVector::from_images(c.clone(), vec![c.pow(x, 2), c.inv(x), c.inv(x)]).unwrap();
        let a = chevalley_weil(&v).unwrap();
        for (j, (label, m)) in a.mu.iter().enumerate() {
            assert_eq!(label, &format!("rho_{j}"));
            assert_eq!(*m, u32::from((6..=9).contains(&j)), "{label}");
        }
    }

    #[test]
    fn dihedral_k_family() {
        let d = group("D5");
        let (r, s) = (d.gen("r").unwrap(), d.gen("s").unwrap());
        let v = GeneratingVector::from_images(d.clone(), vec![s, d.mul(s, r), r, d.pow(r, 3)]).unwrap();
        let dec = group_algebra_decomposition(&v).unwrap();
        let nz = dec.nonzero();
        assert_eq!(nz.len(), 1);
        assert_eq!((nz[0].n, nz[0].dim_b), (2, 2));
        assert_eq!(moduli_fixed_dim(&v).unwrap().n, 2);
        let quotient = quotient_decomposition(&dec, &[0]).unwrap();
        assert!(quotient.iter().all(|f| f.dim_b == 0 || f.exponent == 2));
    }

    #[test]
    fn eigenvalue_counts_sum_to_degree() {
        let am = group("AM:q=5");
        let t = am.char_table().unwrap();
        for chi in t.chars() {
            for x in [1usize, 10, 20, 21] {
                let k = am.element_order(x) as u32;
                let total: u32 = (0..k).map(|j| eigenvalue_count(&am, chi, x, j).unwrap()).sum();
                assert_eq!(total, chi.degree());
            }
        }
    }
}
