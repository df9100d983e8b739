//! Fuchsian signatures, Riemann–Hurwitz, and the search over groups of
//! order λq that decides which λ admit a genus q−1 action.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::group::{all_of_order, identify, is_prime, FiniteGroup};
use crate::vectors::vector_exists;

/// (γ; k₁, …, k_s) with periods sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub gamma: u32,
    pub periods: Vec<u32>,
}

impl Signature {
    pub fn new(gamma: u32, mut periods: Vec<u32>) -> Result<Signature> {
        if periods.iter().any(|&k| k < 2) {
            return invalid("periods must be at least 2");
        }
        periods.sort_unstable();
        Ok(Signature { gamma, periods })
    }

    /// Genus-zero signature from periods in any order.
    pub fn genus_zero(periods: &[u32]) -> Result<Signature> {
        Signature::new(0, periods.to_vec())
    }

    /// 2γ − 2 + Σ(1 − 1/k).
    pub fn area(&self) -> Ratio<i64> {
        let mut a = Ratio::from_integer(2 * self.gamma as i64 - 2);
        for &k in &self.periods {
            a += Ratio::new(k as i64 - 1, k as i64);
        }
        a
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.area() > Ratio::from_integer(0)
    }

    /// Parses `(g;k1,...)`; also reports the periods in the order written.
    pub fn parse_ordered(s: &str) -> Result<(u32, Vec<u32>)> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Invalid(format!("signature must look like (g;k1,...): {s:?}")))?;
        let (g, ks) = body.split_once(';').ok_or_else(|| Error::Invalid(format!("missing ';' in {s:?}")))?;
        let gamma = g.trim().parse().map_err(|_| Error::Invalid(format!("bad orbit genus in {s:?}")))?;
        let mut periods = Vec::new();
        for tok in ks.split(',').map(str::trim).filter(|t| !t.is_empty() && *t != "—" && *t != "-") {
            let k: u32 = tok.parse().map_err(|_| Error::Invalid(format!("bad period {tok:?}")))?;
            if k < 2 {
                return invalid(format!("period {k} is below 2"));
            }
            periods.push(k);
        }
        Ok((gamma, periods))
    }
}

pub fn format_periods(gamma: u32, periods: &[u32]) -> String {
    let ks: Vec<String> = periods.iter().map(|k| k.to_string()).collect();
    format!("({gamma};{})", ks.join(","))
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_periods(self.gamma, &self.periods))
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Signature> {
        let (gamma, periods) = Signature::parse_ordered(s)?;
        Signature::new(gamma, periods)
    }
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Signature, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The g with 2g − 2 = |G|·(2γ − 2 + Σ(1 − 1/k_i)), exactly.
pub fn rh_genus(group_order: u64, sigma: &Signature) -> Ratio<i64> {
    Ratio::from_integer(1) + sigma.area() * Ratio::new(group_order as i64, 2)
}

/// Dimension 3γ − 3 + s of the Teichmüller space of the signature.
pub fn teich_dim(sigma: &Signature) -> Result<i64> {
    if !sigma.is_hyperbolic() {
        return invalid(format!("{sigma} is not hyperbolic"));
    }
    Ok(3 * sigma.gamma as i64 - 3 + sigma.periods.len() as i64)
}

fn multisets(choices: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..choices.len() {
        cur.push(choices[i]);
        multisets(choices, size, i, cur, out);
        cur.pop();
    }
}

/// Signatures whose periods are element orders of `group` and whose
/// Riemann–Hurwitz genus equals `genus`. Sorted, duplicate free.
///
/// For γ = 0 the elements with orders among the periods must also
/// generate the group.
pub fn admissible_signatures(group: &FiniteGroup, genus: u32) -> Vec<Signature> {
    let n = group.order() as i64;
    let mut orders: Vec<u32> = group.element_orders().iter().filter(|&&o| o > 1).map(|&o| o as u32).collect();
    orders.sort_unstable();
    orders.dedup();
    let target = Ratio::from_integer(genus as i64);
    let max_s = (4 + 2 * (2 * genus as i64 - 2) / n) as usize;
    let mut generated: HashMap<Vec<u32>, bool> = HashMap::new();
    let mut spans = |ks: &[u32]| -> bool {
        let mut key = ks.to_vec();
        key.dedup();
        *generated.entry(key.clone()).or_insert_with(|| {
            let els: Vec<usize> =
                (0..group.order()).filter(|&g| key.contains(&(group.element_order(g) as u32))).collect();
            group.generates(&els)
        })
    };
    let mut out = Vec::new();
    for gamma in 0..=genus {
        for s in 0..=max_s {
            let mut sets = Vec::new();
            multisets(&orders, s, 0, &mut Vec::new(), &mut sets);
            for ks in sets {
                let sig = Signature { gamma, periods: ks };
                if rh_genus(n as u64, &sig) == target && (gamma > 0 || spans(&sig.periods)) {
                    out.push(sig);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One surviving (group, signature) pair.
#[derive(Clone, Debug)]
pub struct FeasiblePair {
    pub group: Arc<FiniteGroup>,
    /// Familiar name when one of the named constructions matches.
    pub label: String,
    pub signature: Signature,
}

#[derive(Clone, Debug)]
pub struct LambdaVerdict {
    pub lambda: u32,
    pub groups_examined: usize,
    pub pairs: Vec<FeasiblePair>,
}

#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub q: u32,
    pub verdicts: Vec<LambdaVerdict>,
}

impl FeasibilityReport {
    pub fn realizable(&self) -> Vec<u32> {
        self.verdicts.iter().filter(|v| !v.pairs.is_empty()).map(|v| v.lambda).collect()
    }

    pub fn verdict(&self, lambda: u32) -> Option<&LambdaVerdict> {
        self.verdicts.iter().find(|v| v.lambda == lambda)
    }
}

/// For each λ in 1..=8, every group of order λq and every signature of
/// genus q − 1 that some surface-kernel vector actually realizes.
pub fn lambda_feasibility(q: u32) -> Result<FeasibilityReport> {
    if !is_prime(q) || q < 7 {
        return invalid(format!("q={q} must be a prime >= 7"));
    }
    let genus = q - 1;
    let mut verdicts = Vec::new();
    for lambda in 1..=8u32 {
        let groups = all_of_order(lambda, q)?;
        let mut pairs = Vec::new();
        let examined = groups.len();
        for g in groups {
            let g = Arc::new(g);
            let sigs = admissible_signatures(&g, genus);
            let mut label = None;
            for sig in sigs {
                if sig.gamma != 0 {
                    return Err(Error::Unsupported(format!("positive orbit genus signature {sig} for order {}", g.order())));
                }
                if vector_exists(&g, &sig.periods)? {
                    let label = label
                        .get_or_insert_with(|| identify(&g, lambda, q).map(|s| s.to_string()).unwrap_or_else(|| g.spec().to_string()))
                        .clone();
                    pairs.push(FeasiblePair { group: g.clone(), label, signature: sig });
                }
            }
        }
        verdicts.push(LambdaVerdict { lambda, groups_examined: examined, pairs });
    }
    Ok(FeasibilityReport { q, verdicts })
}
