//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! A value is stored as its coefficient vector in the power basis
//! 1, ζ_n, …, ζ_n^{φ(n)−1}, i.e. reduced modulo the cyclotomic polynomial
//! Φ_n. Values of different conductors are compared and combined after
//! lifting both to the least common multiple.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Reduction data for one conductor.
#[derive(Debug)]
pub(crate) struct Field {
    pub phi: usize,
    /// ζ_n^j reduced into the power basis, for j in 0..n.
    pub powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both constant-term first, den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn build_field(n: u32) -> Field {
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by ζ, then eliminate ζ^phi
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * poly[i];
            }
        }
    }
    Field { phi, powers }
}

pub(crate) fn field(n: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(build_field(n))).clone()
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// An element of Q(ζ_n).
#[derive(Clone, Debug)]
pub struct CycNum {
    n: u32,
    coeffs: Vec<BigRational>,
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

impl CycNum {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let phi = field(n).phi;
        CycNum { n, coeffs: vec![BigRational::zero(); phi] }
    }

    pub fn from_rational(n: u32, r: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(n: u32, i: i64) -> Self {
        Self::from_rational(n, rat(i))
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    /// ζ_n^k for any integer k.
    pub fn zeta(n: u32, k: i64) -> Self {
        let mut counts = vec![0i64; n as usize];
        counts[k.rem_euclid(n as i64) as usize] = 1;
        Self::from_power_counts(n, &counts)
    }

    /// Σ counts[e]·ζ_n^e, with `counts` indexed by exponent mod n.
    pub fn from_power_counts(n: u32, counts: &[i64]) -> Self {
        let f = field(n);
        let mut acc = vec![0i64; f.phi];
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, p) in acc.iter_mut().zip(&f.powers[e % n as usize]) {
                    *a += c * p;
                }
            }
        }
        CycNum { n, coeffs: acc.into_iter().map(rat).collect() }
    }

    /// Σ coeffs[j]·ζ_n^j for an arbitrary-length coefficient list.
    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        let f = field(n);
        let mut acc = vec![BigRational::zero(); f.phi];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&f.powers[e % n as usize]) {
                if p != 0 {
                    *a += c * rat(p);
                }
            }
        }
        CycNum { n, coeffs: acc }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-express in Q(ζ_m); `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u32) -> CycNum {
        if m == self.n {
            return self.clone();
        }
        assert!(m.is_multiple_of(self.n), "cannot lift conductor {} to {}", self.n, m);
        let step = (m / self.n) as usize;
        let mut long = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            long[j * step] = c.clone();
        }
        CycNum::from_coeffs(m, &long)
    }

    fn unify(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.n, b.n);
        (a.lift(m), b.lift(m))
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        CycNum { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// The automorphism ζ_n ↦ ζ_n^k.
    pub fn galois(&self, k: i64) -> Result<CycNum> {
        let n = self.n as i64;
        if k.gcd(&n) != 1 {
            return invalid(format!("{k} is not a unit modulo {n}"));
        }
        let mut long = vec![BigRational::zero(); self.n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = (j as i64 * k).rem_euclid(n) as usize;
            long[e] += c;
        }
        Ok(CycNum::from_coeffs(self.n, &long))
    }

    pub fn conj(&self) -> CycNum {
        self.galois(-1).expect("-1 is always a unit")
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
            z += Complex64::from_polar(1.0, ang) * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }

    pub fn rational_part(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> CycNum {
        let mut acc = CycNum::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parses `cyc(n)[c0,c1,...]`; entries may be integers or fractions `p/q`.
    pub fn parse(s: &str) -> Result<CycNum> {
        let s = s.trim();
        let rest = s.strip_prefix("cyc(").ok_or_else(|| Error::Invalid(format!("bad cyclotomic literal {s:?}")))?;
        let (n_str, rest) = rest.split_once(')').ok_or_else(|| Error::Invalid(format!("bad cyclotomic literal {s:?}")))?;
        let n: u32 = n_str.trim().parse().map_err(|_| Error::Invalid(format!("bad conductor in {s:?}")))?;
        if n == 0 {
            return invalid("conductor must be positive");
        }
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Invalid(format!("bad coefficient list in {s:?}")))?;
        let mut coeffs = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let r: BigRational = tok.parse().map_err(|_| Error::Invalid(format!("bad coefficient {tok:?}")))?;
            coeffs.push(r);
        }
        Ok(CycNum::from_coeffs(n, &coeffs))
    }

    /// Complex value rendered with 12 significant digits.
    pub fn render_complex(&self) -> String {
        let z = self.to_complex();
        let fmt = |x: f64| {
            let x = if x.abs() < 1e-13 { 0.0 } else { x };
            format_sig(x, 12)
        };
        if z.im.abs() < 1e-13 {
            fmt(z.re)
        } else {
            let sign = if z.im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", fmt(z.re), sign, fmt(z.im.abs()))
        }
    }
}

/// Formats with the given number of significant digits, trimming zeros.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycNum::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cyc({})[", self.n)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = CycNum::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = CycNum::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        let (a, b) = CycNum::unify(self, rhs);
        let phi = a.coeffs.len();
        let mut long = vec![BigRational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    long[i + j] += x * y;
                }
            }
        }
        CycNum::from_coeffs(a.n, &long)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
