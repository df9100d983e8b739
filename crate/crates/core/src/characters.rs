//! Complex irreducible characters of the supported families, their Galois
//! orbits, inner products, symmetric squares and fixed-space dimensions.
//!
//! Values are kept as exponent counts over ζ_L: the value at g is
//! (1/denom)·Σ_e counts[g][e]·ζ_L^e. This is exact, multiplication is a
//! cyclic convolution, and it converts to [`CycNum`] on demand.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{field, CycNum};
use crate::error::{invalid, Error, Result};
use crate::group::{FiniteGroup, Shape};

/// A class function with cyclotomic values; irreducible characters and
/// the derived sums used downstream share this type.
#[derive(Clone, Debug)]
pub struct Character {
    label: String,
    l: u32,
    denom: i64,
    counts: Vec<Vec<i64>>,
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

fn lift_counts(c: &[i64], l: u32, m: u32) -> Vec<i64> {
    if l == m {
        return c.to_vec();
    }
    let step = (m / l) as usize;
    let mut out = vec![0; m as usize];
    for (e, &v) in c.iter().enumerate() {
        out[e * step] = v;
    }
    out
}

fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let l = a.len();
    let mut out = vec![0; l];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % l] += x * y;
            }
        }
    }
    out
}

fn conj_counts(a: &[i64]) -> Vec<i64> {
    let l = a.len();
    (0..l).map(|e| a[(l - e) % l]).collect()
}

/// Power-basis coordinates of Σ counts[e] ζ_l^e; canonical.
fn reduce(l: u32, counts: &[i64]) -> Vec<i64> {
    let f = field(l);
    let mut acc = vec![0i64; f.phi];
    for (e, &c) in counts.iter().enumerate() {
        if c != 0 {
            for (a, p) in acc.iter_mut().zip(&f.powers[e]) {
                *a += c * p;
            }
        }
    }
    acc
}

fn ratio(num: &CycNum, den: i64) -> Result<BigRational> {
    let r = num
        .rational_part()
        .ok_or_else(|| Error::CrossCheck(format!("expected a rational value, got {num}")))?;
    Ok(r / BigRational::from_integer(BigInt::from(den)))
}

impl Character {
    pub(crate) fn from_counts(label: impl Into<String>, l: u32, counts: Vec<Vec<i64>>) -> Character {
        Character { label: label.into(), l, denom: 1, counts }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Character {
        self.label = label.into();
        self
    }

    /// Conductor of the ambient cyclotomic field.
    pub fn conductor(&self) -> u32 {
        self.l
    }

    /// Number of group elements the function is defined on.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn value(&self, g: usize) -> CycNum {
        let v = CycNum::from_power_counts(self.l, &self.counts[g]);
        if self.denom == 1 {
            v
        } else {
            v.scale(&BigRational::new(BigInt::from(1), BigInt::from(self.denom)))
        }
    }

    pub fn values(&self) -> Vec<CycNum> {
        (0..self.len()).map(|g| self.value(g)).collect()
    }

    /// Value at the identity.
    pub fn degree(&self) -> u32 {
        let d: i64 = self.counts[0].iter().sum::<i64>() / self.denom;
        d.max(0) as u32
    }

    fn at(&self, m: u32) -> Vec<Vec<i64>> {
        self.counts.iter().map(|c| lift_counts(c, self.l, m)).collect()
    }

    pub fn conj(&self) -> Character {
        Character {
            label: format!("conj({})", self.label),
            l: self.l,
            denom: self.denom,
            counts: self.counts.iter().map(|c| conj_counts(c)).collect(),
        }
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &Character) -> Character {
        let m = lcm(self.l, other.l);
        let (a, b) = (self.at(m), other.at(m));
        let counts = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * other.denom + v * self.denom).collect())
            .collect();
        Character { label: format!("{}+{}", self.label, other.label), l: m, denom: self.denom * other.denom, counts }.normalized()
    }

    /// Pointwise product.
    pub fn times(&self, other: &Character) -> Character {
        let m = lcm(self.l, other.l);
        let (a, b) = (self.at(m), other.at(m));
        let counts = a.iter().zip(&b).map(|(x, y)| convolve(x, y)).collect();
        Character { label: format!("{}*{}", self.label, other.label), l: m, denom: self.denom * other.denom, counts }.normalized()
    }

    pub fn scaled(&self, k: i64) -> Character {
        let counts = self.counts.iter().map(|c| c.iter().map(|v| v * k).collect()).collect();
        Character { label: format!("{k}{}", self.label), l: self.l, denom: self.denom, counts }.normalized()
    }

    fn normalized(mut self) -> Character {
        let mut g = self.denom;
        for c in &self.counts {
            for &v in c {
                g = g.gcd(&v);
            }
        }
        if g > 1 {
            self.denom /= g;
            for c in &mut self.counts {
                for v in c.iter_mut() {
                    *v /= g;
                }
            }
        }
        self
    }

    /// ζ ↦ ζ^k on every value; k must be a unit modulo the conductor.
    pub fn galois(&self, k: i64) -> Result<Character> {
        let l = self.l as i64;
        if k.gcd(&l) != 1 {
            return invalid(format!("{k} is not a unit modulo {l}"));
        }
        let counts = self
            .counts
            .iter()
            .map(|c| {
                let mut out = vec![0; c.len()];
                for (e, &v) in c.iter().enumerate() {
                    out[(e as i64 * k).rem_euclid(l) as usize] += v;
                }
                out
            })
            .collect();
        Ok(Character { label: format!("{}^{k}", self.label), l: self.l, denom: self.denom, counts })
    }

    fn reduced_at(&self, g: usize) -> Vec<i64> {
        reduce(self.l, &self.counts[g])
    }

    /// Same values everywhere, after reduction.
    pub fn same_values(&self, other: &Character) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let m = lcm(self.l, other.l);
        (0..self.len()).all(|g| {
            let a: Vec<i64> = reduce(m, &lift_counts(&self.counts[g], self.l, m)).iter().map(|v| v * other.denom).collect();
            let b: Vec<i64> = reduce(m, &lift_counts(&other.counts[g], other.l, m)).iter().map(|v| v * self.denom).collect();
            a == b
        })
    }

    /// Constant 1.
    pub fn is_trivial(&self) -> bool {
        self.counts.iter().all(|c| {
            let r = reduce(self.l, c);
            r[0] == self.denom && r[1..].iter().all(|&v| v == 0)
        })
    }

    pub fn is_rational_valued(&self) -> bool {
        (0..self.len()).all(|g| self.reduced_at(g)[1..].iter().all(|&c| c == 0))
    }

    /// (1/k) Σ_t χ(g^t) ζ_k^{−jt} where `powers[t]` is g^t and k = powers.len().
    pub fn fourier_coefficient(&self, powers: &[usize], j: u32) -> Result<BigRational> {
        let k = powers.len() as u32;
        let m = lcm(self.l, k);
        let (sl, sk) = ((m / self.l) as usize, (m / k) as usize);
        let mut acc = vec![0i64; m as usize];
        for (t, &p) in powers.iter().enumerate() {
            let shift = (m as usize - (j as usize * t % k as usize) * sk) % m as usize;
            for (e, &v) in self.counts[p].iter().enumerate() {
                if v != 0 {
                    acc[(e * sl + shift) % m as usize] += v;
                }
            }
        }
        let red = reduce(m, &acc);
        if red[1..].iter().any(|&c| c != 0) {
            return Err(Error::CrossCheck(format!("Fourier coefficient of {} is not rational", self.label)));
        }
        Ok(BigRational::new(BigInt::from(red[0]), BigInt::from(k as i64 * self.denom)))
    }

    /// Σ_{h ∈ H} value(h), exact.
    pub fn sum_over(&self, h: &[usize]) -> CycNum {
        let mut acc = vec![0i64; self.l as usize];
        for &x in h {
            for (a, v) in acc.iter_mut().zip(&self.counts[x]) {
                *a += v;
            }
        }
        CycNum::from_power_counts(self.l, &acc).scale(&BigRational::new(BigInt::from(1), BigInt::from(self.denom)))
    }
}

fn same_group(a: &Character, b: &Character) -> Result<()> {
    if a.len() != b.len() {
        return invalid("characters of different groups");
    }
    Ok(())
}

/// (1/|G|) Σ_g a(g)·conj(b(g)).
pub fn inner_product(a: &Character, b: &Character) -> Result<BigRational> {
    same_group(a, b)?;
    let all: Vec<usize> = (0..a.len()).collect();
    inner_product_on(a, b, &all)
}

/// The same average taken over a subset H (normally a subgroup).
pub fn inner_product_on(a: &Character, b: &Character, h: &[usize]) -> Result<BigRational> {
    same_group(a, b)?;
    if h.is_empty() {
        return invalid("empty subset");
    }
    let m = lcm(a.l, b.l);
    let mut acc = vec![0i64; m as usize];
    for &x in h {
        let p = convolve(&lift_counts(&a.counts[x], a.l, m), &conj_counts(&lift_counts(&b.counts[x], b.l, m)));
        for (s, v) in acc.iter_mut().zip(p) {
            *s += v;
        }
    }
    ratio(&CycNum::from_power_counts(m, &acc), a.denom * b.denom * h.len() as i64)
}

fn square_parts(g: &FiniteGroup, chi: &Character, sign: i64) -> Result<Character> {
    if chi.len() != g.order() {
        return invalid("character and group differ in size");
    }
    let counts = (0..g.order())
        .map(|h| {
            let sq = convolve(&chi.counts[h], &chi.counts[h]);
            let at_square = &chi.counts[g.mul(h, h)];
            sq.iter().zip(at_square).map(|(a, b)| a + sign * chi.denom * b).collect()
        })
        .collect();
    let tag = if sign > 0 { "Sym2" } else { "Alt2" };
    Ok(Character { label: format!("{tag}({})", chi.label), l: chi.l, denom: 2 * chi.denom * chi.denom, counts }.normalized())
}

/// h ↦ ½[χ(h)² + χ(h²)].
pub fn sym_square_char(g: &FiniteGroup, chi: &Character) -> Result<Character> {
    square_parts(g, chi, 1)
}

/// h ↦ ½[χ(h)² − χ(h²)].
pub fn alt_square_char(g: &FiniteGroup, chi: &Character) -> Result<Character> {
    square_parts(g, chi, -1)
}

/// Σ_{h∈H} χ^sym(h), rational.
pub fn sym_sum(g: &FiniteGroup, chi: &Character, h: &[usize]) -> Result<BigRational> {
    ratio(&sym_square_char(g, chi)?.sum_over(h), 1)
}

/// Σ_{h∈H} χ^sym(h) computed directly and as
/// ½[Σ_{h∈H} (χ+χ̄)^sym(h) − |H|⟨χ|χ⟩_H]; the two must agree.
pub fn sym_sum_identity(g: &FiniteGroup, chi: &Character, h: &[usize]) -> Result<BigRational> {
    let direct = sym_sum(g, chi, h)?;
    let real = chi.plus(&chi.conj());
    let norm = inner_product_on(chi, chi, h)?;
    let size = BigRational::from_integer(BigInt::from(h.len()));
    let via = (sym_sum(g, &real, h)? - size * norm) / BigRational::from_integer(BigInt::from(2));
    if direct != via {
        return Err(Error::CrossCheck(format!(
            "symmetric-square sum of {} disagrees: {direct} directly, {via} via the conjugate sum",
            chi.label
        )));
    }
    Ok(direct)
}

/// Dimension of the H-fixed subspace: (1/|H|) Σ_{h∈H} χ(h).
pub fn fixed_dim(g: &FiniteGroup, chi: &Character, h: &[usize]) -> Result<u32> {
    if chi.len() != g.order() {
        return invalid("character and group differ in size");
    }
    if !g.is_subgroup(h) {
        return invalid("element set is not a subgroup");
    }
    let v = ratio(&chi.sum_over(h), h.len() as i64)?;
    if !v.is_integer() || v < BigRational::zero() {
        return Err(Error::CrossCheck(format!("fixed dimension {v} of {} is not a non-negative integer", chi.label)));
    }
    Ok(v.to_integer().to_u32().unwrap_or(0))
}

/// All complex irreducible characters of one group.
#[derive(Debug)]
pub struct CharTable {
    chars: Vec<Character>,
    classes: Vec<Vec<usize>>,
    order: usize,
}

/// One row of the JSON dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharRow {
    pub label: String,
    pub degree: u32,
    /// Exact values at the class representatives, `cyc(n)[...]`.
    pub values: Vec<String>,
}

impl CharTable {
    pub fn chars(&self) -> &[Character] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn get(&self, label: &str) -> Option<&Character> {
        self.chars.iter().find(|c| c.label == label)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.chars.iter().position(|c| c.label == label)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.chars.iter().map(|c| c.degree()).collect()
    }

    /// Representative of each class (its least element).
    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn rows(&self) -> Vec<CharRow> {
        let reps = self.class_reps();
        self.chars
            .iter()
            .map(|c| CharRow { label: c.label.clone(), degree: c.degree(), values: reps.iter().map(|&g| c.value(g).to_string()).collect() })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let sq: u64 = self.chars.iter().map(|c| c.degree() as u64 * c.degree() as u64).sum();
        if sq != self.order as u64 || self.chars.len() != self.classes.len() {
            return Err(Error::CrossCheck(format!(
                "table has {} characters with Σd² = {sq} for {} classes and order {}",
                self.chars.len(),
                self.classes.len(),
                self.order
            )));
        }
        Ok(())
    }
}

/// A monomial matrix: e_j ↦ ζ_L^{exps[j]} e_{perm[j]}.
#[derive(Clone, PartialEq, Eq)]
struct Mono {
    perm: Vec<usize>,
    exps: Vec<u32>,
}

impl Mono {
    fn diag(exps: &[u32]) -> Mono {
        Mono { perm: (0..exps.len()).collect(), exps: exps.to_vec() }
    }

    fn swap() -> Mono {
        Mono { perm: vec![1, 0], exps: vec![0, 0] }
    }

    /// (self · other)
    fn mul(&self, other: &Mono, l: u32) -> Mono {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut exps = vec![0; n];
        for j in 0..n {
            let k = other.perm[j];
            perm[j] = self.perm[k];
            exps[j] = (other.exps[j] + self.exps[k]) % l;
        }
        Mono { perm, exps }
    }

    fn trace(&self, l: u32) -> Vec<i64> {
        let mut c = vec![0; l as usize];
        for j in 0..self.perm.len() {
            if self.perm[j] == j {
                c[self.exps[j] as usize] += 1;
            }
        }
        c
    }
}

/// Traces of the representation fixed by generator images, by
/// breadth-first closure; a clash means the images break a relation.
fn monomial_character(g: &FiniteGroup, l: u32, gens: &[(usize, Mono)], label: String) -> Result<Character> {
    let dim = gens[0].1.perm.len();
    let mut mats: Vec<Option<Mono>> = vec![None; g.order()];
    mats[0] = Some(Mono::diag(&vec![0; dim]));
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(h) = queue.pop_front() {
        let mh = mats[h].clone().expect("queued elements have matrices");
        for (x, mx) in gens {
            let k = g.mul(h, *x);
            let p = mh.mul(mx, l);
            match &mats[k] {
                Some(existing) if *existing != p => {
                    return Err(Error::CrossCheck(format!("matrices for {label} do not define a representation")));
                }
                Some(_) => {}
                None => {
                    mats[k] = Some(p);
                    queue.push_back(k);
                }
            }
        }
    }
    let counts = mats
        .iter()
        .map(|m| m.as_ref().map(|m| m.trace(l)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::CrossCheck("generators do not generate the group".into()))?;
    Ok(Character::from_counts(label, l, counts))
}

/// ρ_j(g^i) = ζ_n^{ij}; `power_to_elem[i]` is the index of g^i.
fn cyclic_table(n: usize, power_to_elem: &[usize]) -> Vec<Character> {
    let l = n as u32;
    (0..n)
        .map(|j| {
            let mut counts = vec![Vec::new(); n];
            for (i, &e) in power_to_elem.iter().enumerate() {
                let mut c = vec![0; n];
                c[(i * j) % n] = 1;
                counts[e] = c;
            }
            Character::from_counts(format!("rho_{j}"), l, counts)
        })
        .collect()
}

fn dihedral_table(n: usize) -> Vec<Character> {
    // element i + n·e is r^i s^e
    let l = lcm(n as u32, 2);
    let half = (l / 2) as usize;
    let step = (l as usize) / n;
    let mut out = Vec::new();
    let signs: &[(bool, bool, &str)] = if n.is_multiple_of(2) {
        &[(false, false, "chi_1"), (false, true, "chi_s"), (true, false, "chi_r"), (true, true, "chi_rs")]
    } else {
        &[(false, false, "chi_1"), (false, true, "chi_s")]
    };
    for &(rneg, sneg, label) in signs {
        let counts = (0..2 * n)
            .map(|g| {
                let (i, e) = (g % n, g / n);
                let odd = (rneg && i % 2 == 1) ^ (sneg && e == 1);
                let mut c = vec![0; l as usize];
                c[if odd { half } else { 0 }] = 1;
                c
            })
            .collect();
        out.push(Character::from_counts(label, l, counts));
    }
    for j in 1..n.div_ceil(2) {
        if 2 * j == n {
            continue;
        }
        let counts = (0..2 * n)
            .map(|g| {
                let (i, e) = (g % n, g / n);
                let mut c = vec![0; l as usize];
                if e == 0 {
                    c[(i * j % n) * step] += 1;
                    c[((n - i * j % n) % n) * step] += 1;
                }
                c
            })
            .collect();
        out.push(Character::from_counts(format!("psi_{j}"), l, counts));
    }
    out
}

/// C_q ⋊ C_k, element a + q·e = A^a B^e with B A B⁻¹ = A^u.
fn metacyclic_table(q: usize, k: usize, u: usize, named_linear: bool) -> Vec<Character> {
    let l = lcm(q as u32, k as u32) as usize;
    let (sq, sk) = (l / q, l / k);
    let mut upow = vec![1usize; k + 1];
    for t in 1..=k {
        upow[t] = upow[t - 1] * u % q;
    }
    let d = (1..=k).find(|&t| upow[t] == 1).unwrap_or(k);
    let mut out = Vec::new();
    let lin_names = ["chi_1", "chi_i", "chi_-1", "chi_-i"];
    for m in 0..k {
        let counts = (0..q * k)
            .map(|g| {
                let e = g / q;
                let mut c = vec![0; l];
                c[(m * e % k) * sk] = 1;
                c
            })
            .collect();
        let label = if named_linear && k == 4 { lin_names[m].to_string() } else { format!("lin_{m}") };
        out.push(Character::from_counts(label, l as u32, counts));
    }
    let mut seen = vec![false; q];
    for j in 1..q {
        if seen[j] {
            continue;
        }
        for t in 0..d {
            seen[j * upow[t] % q] = true;
        }
        for m in 0..k / d {
            let counts = (0..q * k)
                .map(|g| {
                    let (i, e) = (g % q, g / q);
                    let mut c = vec![0; l];
                    if e % d == 0 {
                        let twist = (m * e % k) * sk;
                        for &u in &upow[..d] {
                            let a = (j * u % q) * i % q;
                            c[(a * sq + twist) % l] += 1;
                        }
                    }
                    c
                })
                .collect();
            let label = if k / d == 1 { format!("phi_{j}") } else { format!("phi_{j},{m}") };
            out.push(Character::from_counts(label, l as u32, counts));
        }
    }
    out
}

/// The explicit matrices for ⟨x,y,z | x^{2q}=y²=z²=1, [x,y]=[z,y]=1, zxz=x⁻¹y⟩.
fn accola_maclachlan_table(g: &FiniteGroup, q: usize) -> Result<Vec<Character>> {
    let l = 2 * q as u32;
    let qq = q as u32;
    let gx = g.gen("x").ok_or_else(|| Error::CrossCheck("missing generator x".into()))?;
    let gy = g.gen("y").ok_or_else(|| Error::CrossCheck("missing generator y".into()))?;
    let gz = g.gen("z").ok_or_else(|| Error::CrossCheck("missing generator z".into()))?;
    let sign = |neg: bool| if neg { qq } else { 0 };
    let mut out = Vec::new();
    for (xneg, zneg, label) in [(false, false, "chi_0^1+"), (false, true, "chi_0^2+"), (true, false, "chi_q^1+"), (true, true, "chi_q^2+")] {
        let gens = [(gx, Mono::diag(&[sign(xneg)])), (gy, Mono::diag(&[0])), (gz, Mono::diag(&[sign(zneg)]))];
        out.push(monomial_character(g, l, &gens, label.to_string())?);
    }
    let m = l;
    for j in 1..qq {
        // diag(ω^j, −ω^{q−j}) = diag(ω^j, ω^{−j})
        let gens = [(gx, Mono::diag(&[j, (m - j) % m])), (gy, Mono::diag(&[0, 0])), (gz, Mono::swap())];
        out.push(monomial_character(g, l, &gens, format!("chi^+_{j}"))?);
    }
    for j in 0..=(qq - 1) / 2 {
        let gens = [(gx, Mono::diag(&[j, qq - j])), (gy, Mono::diag(&[qq, qq])), (gz, Mono::swap())];
        out.push(monomial_character(g, l, &gens, format!("chi^1-_{j}"))?);
    }
    for j in 1..=(qq - 1) / 2 {
        let gens = [(gx, Mono::diag(&[j + qq, (2 * qq - j) % m])), (gy, Mono::diag(&[qq, qq])), (gz, Mono::swap())];
        out.push(monomial_character(g, l, &gens, format!("chi^2-_{j}"))?);
    }
    Ok(out)
}

fn product_table(g: &FiniteGroup, factors: &[Arc<FiniteGroup>]) -> Result<Vec<Character>> {
    let tables: Vec<Arc<CharTable>> = factors.iter().map(|f| f.char_table()).collect::<Result<_>>()?;
    let mut out: Vec<Character> = vec![Character::from_counts("", 1, vec![vec![1]; g.order()])];
    let mut stride = 1;
    for (f, t) in factors.iter().zip(&tables) {
        let mut next = Vec::new();
        for acc in &out {
            for chi in t.chars() {
                let counts = (0..g.order()).map(|x| chi.counts[(x / stride) % f.order()].clone()).collect();
                let spread = Character { label: chi.label.clone(), l: chi.l, denom: chi.denom, counts };
                let label = if acc.label.is_empty() { chi.label.clone() } else { format!("{}*{}", acc.label, chi.label) };
                next.push(acc.times(&spread).with_label(label));
            }
        }
        out = next;
        stride *= f.order();
    }
    Ok(out)
}

/// Table of an isomorphic named construction, pulled back along an
/// isomorphism.
fn transported_table(g: &FiniteGroup, lambda: u32, q: u32) -> Result<Vec<Character>> {
    let unsupported = || Error::Unsupported(format!("no character table for {}", g.spec()));
    let spec = crate::group::identify(g, lambda, q).ok_or_else(unsupported)?;
    let named = FiniteGroup::from_spec(&spec)?;
    let iso = crate::group::find_isomorphism(g, &named).ok_or_else(unsupported)?;
    let table = named.char_table()?;
    Ok(table
        .chars()
        .iter()
        .map(|chi| Character { label: chi.label.clone(), l: chi.l, denom: chi.denom, counts: iso.iter().map(|&y| chi.counts[y].clone()).collect() })
        .collect())
}

/// Linear characters of an abelian group, by trying every assignment of
/// roots of unity to a small generating set.
fn abelian_table(g: &FiniteGroup) -> Result<Vec<Character>> {
    let gens = crate::group::small_generating_set(g);
    let e = g.element_orders().iter().fold(1u32, |a, &o| lcm(a, o as u32));
    let mut out: Vec<Character> = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    loop {
        let ok = gens.iter().zip(&exps).all(|(&x, &a)| (a as usize * g.element_order(x)).is_multiple_of(e as usize));
        if ok {
            let label = format!("lambda_{}", exps.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("."));
            let mono: Vec<(usize, Mono)> = gens.iter().zip(&exps).map(|(&x, &a)| (x, Mono::diag(&[a]))).collect();
            if let Ok(chi) = monomial_character(g, e, &mono, label) {
                if !out.iter().any(|c| c.same_values(&chi)) {
                    out.push(chi);
                }
            }
        }
        let mut i = 0;
        while i < exps.len() {
            exps[i] += 1;
            if exps[i] < e {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == exps.len() {
            break;
        }
    }
    Ok(out)
}

/// Table for the group's construction family; cyclic groups of any
/// construction are recognised through an element of full order.
pub(crate) fn build_table(g: &FiniteGroup) -> Result<CharTable> {
    let chars = match g.shape() {
        Shape::Cyclic { n } => cyclic_table(*n, &(0..*n).collect::<Vec<_>>()),
        Shape::Dihedral { n } => dihedral_table(*n),
        Shape::CqC4 { q, rho } => metacyclic_table(*q, 4, *rho, true),
        Shape::Semidirect { q, complement, units } if matches!(complement.shape(), Shape::Cyclic { .. }) => {
            let k = complement.order();
            metacyclic_table(*q, k, if k > 1 { units[1] } else { 1 }, false)
        }
        Shape::Semidirect { q, .. } => transported_table(g, (g.order() / *q) as u32, *q as u32)?,
        Shape::AccolaMaclachlan { q } => accola_maclachlan_table(g, *q)?,
        Shape::Product { factors } => product_table(g, factors)?,
        _ => match (0..g.order()).find(|&x| g.element_order(x) == g.order()) {
            Some(x) => {
                let powers: Vec<usize> = (0..g.order()).map(|i| g.pow(x, i as i64)).collect();
                cyclic_table(g.order(), &powers)
            }
            None if g.is_abelian() => abelian_table(g)?,
            None => return Err(Error::Unsupported(format!("no character table for {}", g.spec()))),
        },
    };
    let table = CharTable { chars, classes: g.conjugacy_classes(), order: g.order() };
    table.validate()?;
    Ok(table)
}

/// A Galois orbit of complex irreducibles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalIrrep {
    pub label: String,
    /// Indices into the complex table.
    pub constituents: Vec<usize>,
    pub constituent_labels: Vec<String>,
    /// Degree of the character field over Q.
    pub m: u32,
    pub schur: u32,
    pub d: u32,
    /// d / s.
    pub n: u32,
}

/// Galois orbits of the complex table. Schur indices are 1 for every
/// family supported here.
pub fn rational_irreps(g: &FiniteGroup) -> Result<Vec<RationalIrrep>> {
    let table = g.char_table()?;
    let l = table.chars.iter().fold(1, |a, c| lcm(a, c.l));
    let reps = table.class_reps();
    let key = |c: &Character| -> Vec<Vec<i64>> {
        reps.iter().map(|&x| reduce(l, &lift_counts(&c.counts[x], c.l, l))).collect()
    };
    let keys: HashMap<Vec<Vec<i64>>, usize> = table.chars.iter().enumerate().map(|(i, c)| (key(c), i)).collect();
    let mut orbit_of = vec![usize::MAX; table.len()];
    let mut out = Vec::new();
    for i in 0..table.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let base = &table.chars[i];
        let lifted = Character { label: base.label.clone(), l, denom: base.denom, counts: base.at(l) };
        let mut members = Vec::new();
        for k in (1..l as i64).filter(|k| k.gcd(&(l as i64)) == 1).chain(std::iter::once(1)) {
            let img = key(&lifted.galois(k)?);
            let j = *keys
                .get(&img)
                .ok_or_else(|| Error::CrossCheck(format!("Galois conjugate of {} missing from the table", base.label)))?;
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = out.len();
                members.push(j);
            }
        }
        members.sort_unstable();
        let d = base.degree();
        out.push(RationalIrrep {
            label: format!("Q[{}]", base.label),
            constituent_labels: members.iter().map(|&j| table.chars[j].label.clone()).collect(),
            m: members.len() as u32,
            constituents: members,
            schur: 1,
            d,
            n: d,
        });
    }
    Ok(out)
}

impl RationalIrrep {
    /// Sum of the constituents; rational valued.
    pub fn character(&self, table: &CharTable) -> Character {
        let mut it = self.constituents.iter().map(|&i| table.chars[i].clone());
        let first = it.next().expect("orbits are non-empty");
        it.fold(first, |acc, c| acc.plus(&c)).with_label(self.label.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn group(s: &str) -> FiniteGroup {
        FiniteGroup::from_spec(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn table_shapes() {
        let am = group("AM:q=5");
        let t = am.char_table().unwrap();
        let degs = t.degrees();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 4);
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 9);
        let g4 = group("CqC4:q=5,rho=2");
        let t = g4.char_table().unwrap();
        let mut degs = t.degrees();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 1, 1, 4]);
        let mut d5 = group("D5").char_table().unwrap().degrees();
        d5.sort();
        assert_eq!(d5, vec![1, 1, 2, 2]);
    }

    #[test]
    fn orthogonality_across_families() {
        for spec in ["C6", "D5", "D6", "D10", "CqC4:q=5,rho=2", "CqC4:q=13,rho=5", "CqC4:q=5,rho=4", "AM:q=5", "C5xC2", "D5xC2", "C7xC3"] {
            let g = group(spec);
            let t = g.char_table().unwrap();
            for (i, a) in t.chars().iter().enumerate() {
                for (j, b) in t.chars().iter().enumerate() {
                    let ip = inner_product(a, b).unwrap();
                    assert_eq!(ip, r((i == j) as i64), "{spec}: {} vs {}", a.label(), b.label());
                }
            }
        }
    }

    #[test]
    fn galois_orbits() {
        let g4 = group("CqC4:q=5,rho=2");
        let irr = rational_irreps(&g4).unwrap();
        assert_eq!(irr.len(), 4);
        let mut ms: Vec<u32> = irr.iter().map(|r| r.m).collect();
        ms.sort();
        assert_eq!(ms, vec![1, 1, 1, 2]);

        for q in [5u32, 7] {
            let am = group(&format!("AM:q={q}"));
            let t = am.char_table().unwrap();
            let irr = rational_irreps(&am).unwrap();
            let one = t.index_of("chi^1-_1").unwrap();
            let orbit = irr.iter().find(|r| r.constituents.contains(&one)).unwrap();
            assert_eq!(orbit.m, q - 1);
            assert_eq!(orbit.d * orbit.m, 2 * (q - 1));
            assert!(orbit.constituent_labels.iter().all(|l| l.starts_with("chi^1-_") || l.starts_with("chi^2-_")));
            assert!(orbit.character(&t).is_rational_valued());
        }
        assert_eq!(rational_irreps(&group("C2")).unwrap().len(), 2);
    }

    #[test]
    fn fixed_dims() {
        let d = group("D7");
        let t = d.char_table().unwrap();
        let psi = t.get("psi_1").unwrap();
        let s = d.gen("s").unwrap();
        let r = d.gen("r").unwrap();
        assert_eq!(fixed_dim(&d, psi, &d.subgroup_generated(&[s])).unwrap(), 1);
        assert_eq!(fixed_dim(&d, psi, &d.subgroup_generated(&[r])).unwrap(), 0);
        assert_eq!(fixed_dim(&d, psi, &[0]).unwrap(), 2);
        assert!(fixed_dim(&d, psi, &[0, r]).is_err());
    }

    #[test]
    fn symmetric_squares() {
        let g = group("D5");
        let t = g.char_table().unwrap();
        let all: Vec<usize> = (0..g.order()).collect();
        for chi in t.chars() {
            let s = sym_square_char(&g, chi).unwrap();
            let d = chi.degree();
            assert_eq!(s.degree(), d * (d + 1) / 2);
            sym_sum_identity(&g, chi, &all).unwrap();
        }
        let triv = t.get("chi_1").unwrap();
        assert_eq!(sym_sum_identity(&g, triv, &all).unwrap(), r(10));
    }

    #[test]
    fn abelian_semidirect_with_trivial_action() {
        let g = FiniteGroup::from_spec(&"semi:q=7,K=C2xC2,phi=1.1".parse().unwrap()).unwrap();
        let t = g.char_table().unwrap();
        assert_eq!(t.len(), 28);
        assert!(t.degrees().iter().all(|&d| d == 1));
        let d = FiniteGroup::from_spec(&"semi:q=7,K=C2xC2,phi=1.6".parse().unwrap()).unwrap();
        assert_eq!(d.char_table().unwrap().len(), 10);
    }
}
