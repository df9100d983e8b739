//! Small finite groups as dense multiplication tables.
//!
//! Every group keeps the coordinates it was built from (`Shape`), so that
//! character tables and element names can be produced per family.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};


use crate::characters::CharTable;
use crate::error::{invalid, Error, Result};

/// Largest group the exhaustive searches accept.
pub const MAX_ORDER: usize = 200;

/// Constructor descriptor with a canonical text form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    DirectProduct(Vec<GroupSpec>),
    /// C_q ⋊ C_4 with B A B⁻¹ = A^ρ.
    SemidirectCqC4 { q: u32, rho: u32 },
    /// ⟨x,y,z | x^{2q}=y²=z²=1, [x,y]=[z,y]=1, zxz=x⁻¹y⟩, order 8q.
    AccolaMaclachlan(u32),
    AllOfOrderLambdaQ { lambda: u32, q: u32 },
    Quaternion,
    Alternating4,
    /// The affine group x ↦ Mx + b of F₂³ with M of order 7, i.e. C₂³ ⋊ C₇.
    Frobenius56,
    /// C_q ⋊_φ K, φ given by the unit images of K's generators.
    CqSemidirect { q: u32, complement: Box<GroupSpec>, action: Vec<u32> },
    /// Subgroup of `parent` generated by the listed element indices.
    Subgroup { parent: Box<GroupSpec>, gens: Vec<usize> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::DirectProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join("x"))
            }
            GroupSpec::SemidirectCqC4 { q, rho } => write!(f, "CqC4:q={q},rho={rho}"),
            GroupSpec::AccolaMaclachlan(q) => write!(f, "AM:q={q}"),
            GroupSpec::AllOfOrderLambdaQ { lambda, q } => write!(f, "all:lambda={lambda},q={q}"),
            GroupSpec::Quaternion => write!(f, "Q8"),
            GroupSpec::Alternating4 => write!(f, "A4"),
            GroupSpec::Frobenius56 => write!(f, "F56"),
            GroupSpec::CqSemidirect { q, complement, action } => {
                let phi: Vec<String> = action.iter().map(|u| u.to_string()).collect();
                write!(f, "semi:q={q},K={complement},phi={}", phi.join("."))
            }
            GroupSpec::Subgroup { parent, gens } => {
                let g: Vec<String> = gens.iter().map(|u| u.to_string()).collect();
                write!(f, "sub[{}]@{parent}", g.join("."))
            }
        }
    }
}

fn parse_kv(body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected key=value, got {part:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn kv_u32(map: &BTreeMap<String, String>, key: &str) -> Result<u32> {
    map.get(key)
        .ok_or_else(|| Error::Invalid(format!("missing {key}=")))?
        .parse()
        .map_err(|_| Error::Invalid(format!("bad value for {key}")))
}

fn parse_atom(s: &str) -> Result<GroupSpec> {
    let num = |t: &str| -> Result<u32> {
        let t = t.strip_prefix(':').unwrap_or(t);
        t.parse().map_err(|_| Error::Invalid(format!("bad group size in {s:?}")))
    };
    match s {
        "Q8" => return Ok(GroupSpec::Quaternion),
        "A4" => return Ok(GroupSpec::Alternating4),
        "F56" => return Ok(GroupSpec::Frobenius56),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix('C') {
        return Ok(GroupSpec::Cyclic(num(rest)?));
    }
    if let Some(rest) = s.strip_prefix('D') {
        return Ok(GroupSpec::Dihedral(num(rest)?));
    }
    invalid(format!("unknown group {s:?}"))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sub[") {
            let (gens, parent) = rest
                .split_once("]@")
                .ok_or_else(|| Error::Invalid(format!("bad subgroup spec {s:?}")))?;
            let gens = gens
                .split('.')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Invalid(format!("bad element {t:?}"))))
                .collect::<Result<Vec<usize>>>()?;
            return Ok(GroupSpec::Subgroup { parent: Box::new(parent.parse()?), gens });
        }
        if let Some(rest) = s.strip_prefix("semi:") {
            let kv = parse_kv(rest)?;
            let action = kv
                .get("phi")
                .ok_or_else(|| Error::Invalid("missing phi=".into()))?
                .split('.')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Invalid(format!("bad unit {t:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            let complement = kv.get("K").ok_or_else(|| Error::Invalid("missing K=".into()))?.parse()?;
            return Ok(GroupSpec::CqSemidirect { q: kv_u32(&kv, "q")?, complement: Box::new(complement), action });
        }
        if let Some(rest) = s.strip_prefix("CqC4:") {
            let kv = parse_kv(rest)?;
            return Ok(GroupSpec::SemidirectCqC4 { q: kv_u32(&kv, "q")?, rho: kv_u32(&kv, "rho")? });
        }
        if let Some(rest) = s.strip_prefix("AM:") {
            return Ok(GroupSpec::AccolaMaclachlan(kv_u32(&parse_kv(rest)?, "q")?));
        }
        if let Some(rest) = s.strip_prefix("all:") {
            let kv = parse_kv(rest)?;
            return Ok(GroupSpec::AllOfOrderLambdaQ { lambda: kv_u32(&kv, "lambda")?, q: kv_u32(&kv, "q")? });
        }
        // `D:5x2` is shorthand for D5 x C2.
        for (prefix, head) in [("D:", 'D'), ("C:", 'C')] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let mut parts = rest.split('x');
                let first = parse_atom(&format!("{head}{}", parts.next().unwrap_or("")))?;
                let mut factors = vec![first];
                for p in parts {
                    factors.push(if p.starts_with(['C', 'D', 'Q', 'A']) { parse_atom(p)? } else { parse_atom(&format!("C{p}"))? });
                }
                return Ok(if factors.len() == 1 { factors.pop().unwrap() } else { GroupSpec::DirectProduct(factors) });
            }
        }
        let parts: Vec<&str> = s.split('x').collect();
        if parts.len() > 1 {
            return Ok(GroupSpec::DirectProduct(parts.into_iter().map(parse_atom).collect::<Result<_>>()?));
        }
        parse_atom(s)
    }
}

/// Coordinates an element index encodes, per construction.
#[derive(Clone, Debug)]
pub enum Shape {
    /// index i is g^i
    Cyclic { n: usize },
    /// index i + n·e is r^i s^e
    Dihedral { n: usize },
    /// mixed radix, first factor fastest
    Product { factors: Vec<Arc<FiniteGroup>> },
    /// index i + q·e is A^i B^e
    CqC4 { q: usize, rho: usize },
    /// index i + 2q·(j + 2k) is x^i y^j z^k
    AccolaMaclachlan { q: usize },
    /// index a + q·k is (a, k) with k in the complement
    Semidirect { q: usize, complement: Arc<FiniteGroup>, units: Vec<usize> },
    /// elements are listed by their parent indices
    Subgroup { parent: Arc<FiniteGroup>, elements: Vec<usize> },
    Other,
}

/// A finite group given by its full multiplication table. Element 0 is the identity.
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    generators: Vec<(String, usize)>,
    spec: GroupSpec,
    shape: Shape,
    chars: OnceLock<std::result::Result<Arc<CharTable>, Error>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.spec, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

/// A map on element indices; for automorphisms source and target coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub image: Vec<usize>,
}

impl GroupHom {
    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        (0..source.order()).all(|a| {
            (0..source.order()).all(|b| self.image[source.mul(a, b)] == target.mul(self.image[a], self.image[b]))
        })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        self.image.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    }
}

impl FiniteGroup {
    fn from_fn(
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
        generators: Vec<(String, usize)>,
        spec: GroupSpec,
        shape: Shape,
    ) -> FiniteGroup {
        assert!(order <= u16::MAX as usize);
        let mut table = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b) as u16;
            }
        }
        Self::from_table(order, table, generators, spec, shape)
    }

    fn from_table(order: usize, table: Vec<u16>, generators: Vec<(String, usize)>, spec: GroupSpec, shape: Shape) -> FiniteGroup {
        let mut inverses = vec![0; order];
        for a in 0..order {
            inverses[a] = (0..order).find(|&b| table[a * order + b] == 0).expect("every element has an inverse");
        }
        let mut orders = vec![1; order];
        for a in 1..order {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        FiniteGroup { order, table, inverses, orders, generators, spec, shape, chars: OnceLock::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let k = e.unsigned_abs() % self.orders[a] as u64;
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, base);
        }
        x
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        // by⁻¹ g by
        self.mul(self.mul(self.inv(by), g), by)
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.orders[g]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    /// Element index of a named generator.
    pub fn gen(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|(n, _)| n == name).map(|&(_, g)| g)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.subgroup_generated(gens).len() == self.order
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in h {
            member[x] = true;
        }
        member[0] && h.iter().all(|&a| h.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// Conjugacy classes ordered by least element, each sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut cls = Vec::new();
            for h in 0..self.order {
                let c = self.conjugate(g, h);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    cls.push(c);
                }
            }
            cls.sort_unstable();
            classes.push(cls);
        }
        classes
    }

    /// Every axiom checked exhaustively.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a || self.mul(a, self.inv(a)) != 0 {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        self.generates(&self.generators.iter().map(|&(_, g)| g).collect::<Vec<_>>())
    }

    /// Cached complex character table, when the family is supported.
    pub fn char_table(&self) -> Result<Arc<CharTable>> {
        self.chars.get_or_init(|| crate::characters::build_table(self).map(Arc::new)).clone()
    }

    /// Element from a word in the generator names, such as `zx`, `x^-1`,
    /// `r^2*s` or `1`; `#7` is the raw index 7.
    pub fn parse_element(&self, s: &str) -> Result<usize> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(idx) = s.strip_prefix('#') {
            let i: usize = idx.parse().map_err(|_| Error::Invalid(format!("bad element index {idx:?}")))?;
            if i >= self.order() {
                return invalid(format!("element index {i} out of range"));
            }
            return Ok(i);
        }
        if s == "1" || s == "e" {
            return Ok(0);
        }
        if let Shape::Subgroup { parent, elements } = &self.shape {
            if let Some(i) = parent.parse_element(&s).ok().and_then(|x| elements.iter().position(|&e| e == x)) {
                return Ok(i);
            }
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return self.parse_coordinates(inner);
        }
        if let (Shape::Other, Some(Ok(i))) = (&self.shape, s.strip_prefix('e').map(str::parse::<usize>)) {
            if i < self.order() {
                return Ok(i);
            }
        }
        let mut names: Vec<(&str, usize)> = self.generators.iter().map(|(n, g)| (n.as_str(), *g)).collect();
        names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));
        let mut rest = s.as_str();
        let mut acc = 0;
        while !rest.is_empty() {
            rest = rest.strip_prefix('*').unwrap_or(rest);
            let Some(&(name, g)) = names.iter().find(|(n, _)| rest.starts_with(n)) else {
                return invalid(format!("cannot read {rest:?} as a word in the generators of {}", self.spec));
            };
            rest = &rest[name.len()..];
            let mut exp = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let r2 = r.strip_prefix('(').unwrap_or(r);
                let end = r2.char_indices().find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-'))).map_or(r2.len(), |(i, _)| i);
                exp = r2[..end].parse().map_err(|_| Error::Invalid(format!("bad exponent in {s:?}")))?;
                rest = &r2[end..];
                if r.starts_with('(') {
                    rest = rest.strip_prefix(')').ok_or_else(|| Error::Invalid(format!("unclosed exponent in {s:?}")))?;
                }
            }
            acc = self.mul(acc, self.pow(g, exp));
        }
        if s.is_empty() {
            return invalid("empty element");
        }
        Ok(acc)
    }

    /// Inverse of the tuple names used for products and semidirect products.
    fn parse_coordinates(&self, inner: &str) -> Result<usize> {
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&inner[start..]);
        let bad = || Error::Invalid(format!("cannot read ({inner}) as an element of {}", self.spec));
        match &self.shape {
            Shape::Product { factors } if factors.len() == parts.len() => {
                let (mut idx, mut stride) = (0, 1);
                for (f, p) in factors.iter().zip(parts) {
                    idx += stride * f.parse_element(p)?;
                    stride *= f.order();
                }
                Ok(idx)
            }
            Shape::Semidirect { q, complement, .. } if parts.len() == 2 => {
                let k: usize = match parts[0] {
                    "1" => 0,
                    "a" => 1,
                    p => p.strip_prefix("a^").and_then(|e| e.parse().ok()).ok_or_else(bad)?,
                };
                let q = *q;
                if k >= q {
                    return Err(bad());
                }
                Ok(k + q * complement.parse_element(parts[1])?)
            }
            _ => Err(bad()),
        }
    }

    /// Readable name of an element in the construction's coordinates.
    pub fn element_name(&self, g: usize) -> String {
        fn mono(sym: &str, e: usize) -> String {
            match e {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{e}"),
            }
        }
        fn join(parts: Vec<String>) -> String {
            let p: Vec<String> = parts.into_iter().filter(|s| !s.is_empty()).collect();
            if p.is_empty() {
                "1".into()
            } else {
                p.join("")
            }
        }
        match &self.shape {
            Shape::Cyclic { .. } => join(vec![mono("g", g)]),
            Shape::Dihedral { n } => join(vec![mono("r", g % n), mono("s", g / n)]),
            Shape::CqC4 { q, .. } => join(vec![mono("A", g % q), mono("B", g / q)]),
            Shape::AccolaMaclachlan { q } => {
                let m = 2 * q;
                join(vec![mono("x", g % m), mono("y", (g / m) % 2), mono("z", g / (2 * m))])
            }
            Shape::Product { factors } => {
                let mut rest = g;
                let mut parts = Vec::new();
                for f in factors {
                    parts.push(f.element_name(rest % f.order()));
                    rest /= f.order();
                }
                format!("({})", parts.join(","))
            }
            Shape::Semidirect { q, complement, .. } => {
                format!("(a^{},{})", g % q, complement.element_name(g / q))
            }
            Shape::Subgroup { parent, elements } => parent.element_name(elements[g]),
            Shape::Other => format!("e{g}"),
        }
    }
}

/// Least primitive fourth root of unity mod q, if any.
pub fn least_fourth_root(q: u32) -> Option<u32> {
    (2..q).find(|&r| (r as u64 * r as u64) % q as u64 == q as u64 - 1)
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn cyclic(n: u32) -> Result<FiniteGroup> {
    if n == 0 {
        return invalid("cyclic group of order 0");
    }
    let n = n as usize;
    Ok(FiniteGroup::from_fn(
        n,
        |a, b| (a + b) % n,
        vec![("g".into(), if n == 1 { 0 } else { 1 })],
        GroupSpec::Cyclic(n as u32),
        Shape::Cyclic { n },
    ))
}

fn dihedral(n: u32) -> Result<FiniteGroup> {
    if n < 2 {
        return invalid("dihedral group needs n >= 2");
    }
    let n = n as usize;
    // s r = r⁻¹ s
    let mul = |a: usize, b: usize| {
        let (i, e) = (a % n, a / n);
        let (j, f) = (b % n, b / n);
        let j = if e == 1 { (n - j) % n } else { j };
        (i + j) % n + n * ((e + f) % 2)
    };
    Ok(FiniteGroup::from_fn(
        2 * n,
        mul,
        vec![("r".into(), 1), ("s".into(), n)],
        GroupSpec::Dihedral(n as u32),
        Shape::Dihedral { n },
    ))
}

fn cq_c4(q: u32, rho: u32) -> Result<FiniteGroup> {
    if !is_prime(q) {
        return invalid(format!("q={q} is not prime"));
    }
    let rho = rho % q;
    let r2 = (rho as u64 * rho as u64) % q as u64;
    if rho == 0 || (r2 * r2) % q as u64 != 1 {
        return invalid(format!("rho={rho} is not a fourth root of unity mod {q}"));
    }
    let qq = q as usize;
    let mut rpow = [1usize; 4];
    for e in 1..4 {
        rpow[e] = rpow[e - 1] * rho as usize % qq;
    }
    let mul = move |a: usize, b: usize| {
        let (i, e) = (a % qq, a / qq);
        let (j, f) = (b % qq, b / qq);
        (i + rpow[e] * j) % qq + qq * ((e + f) % 4)
    };
    Ok(FiniteGroup::from_fn(
        4 * qq,
        mul,
        vec![("A".into(), 1), ("B".into(), qq)],
        GroupSpec::SemidirectCqC4 { q, rho },
        Shape::CqC4 { q: qq, rho: rho as usize },
    ))
}

fn accola_maclachlan(q: u32) -> Result<FiniteGroup> {
    if !is_prime(q) || q < 3 {
        return invalid(format!("q={q} must be an odd prime"));
    }
    let q = q as usize;
    let m = 2 * q;
    let decode = move |a: usize| (a % m, (a / m) % 2, a / (2 * m));
    // z x^l = x^{-l} y^l z
    let mul = move |a: usize, b: usize| {
        let (i, j, k) = decode(a);
        let (l, mm, n) = decode(b);
        let (xi, yj) = if k == 0 { ((i + l) % m, (j + mm) % 2) } else { ((i + m - l) % m, (j + mm + l) % 2) };
        xi + m * (yj + 2 * ((k + n) % 2))
    };
    Ok(FiniteGroup::from_fn(
        4 * m,
        mul,
        vec![("x".into(), 1), ("y".into(), m), ("z".into(), 2 * m)],
        GroupSpec::AccolaMaclachlan(q as u32),
        Shape::AccolaMaclachlan { q },
    ))
}

fn direct_product(specs: &[GroupSpec]) -> Result<FiniteGroup> {
    if specs.is_empty() {
        return invalid("empty direct product");
    }
    let factors: Vec<Arc<FiniteGroup>> = specs.iter().map(|s| FiniteGroup::from_spec(s).map(Arc::new)).collect::<Result<_>>()?;
    let order: usize = factors.iter().map(|f| f.order()).product();
    if order > u16::MAX as usize {
        return Err(Error::Limit(format!("direct product of order {order}")));
    }
    let mut strides = Vec::new();
    let mut s = 1;
    for f in &factors {
        strides.push(s);
        s *= f.order();
    }
    let fs = factors.clone();
    let st = strides.clone();
    let mul = move |a: usize, b: usize| {
        let mut out = 0;
        for (f, &stride) in fs.iter().zip(&st) {
            let x = (a / stride) % f.order();
            let y = (b / stride) % f.order();
            out += f.mul(x, y) * stride;
        }
        out
    };
    let mut gens = Vec::new();
    for (idx, (f, &stride)) in factors.iter().zip(&strides).enumerate() {
        for (name, g) in f.generators() {
            gens.push((format!("{name}{}", idx + 1), g * stride));
        }
    }
    Ok(FiniteGroup::from_fn(order, mul, gens, GroupSpec::DirectProduct(specs.to_vec()), Shape::Product { factors }))
}

fn quaternion() -> FiniteGroup {
    // a^i b^e with a⁴ = 1, b² = a², b a b⁻¹ = a⁻¹
    let mul = |x: usize, y: usize| {
        let (i, e) = (x % 4, x / 4);
        let (j, f) = (y % 4, y / 4);
        let j = if e == 1 { (4 - j) % 4 } else { j };
        let mut k = i + j;
        if e == 1 && f == 1 {
            k += 2;
        }
        k % 4 + 4 * ((e + f) % 2)
    };
    FiniteGroup::from_fn(8, mul, vec![("i".into(), 1), ("j".into(), 4)], GroupSpec::Quaternion, Shape::Other)
}

/// Closure of a set of permutations, identity first, breadth-first order.
fn from_permutations(gens: &[Vec<usize>], spec: GroupSpec) -> FiniteGroup {
    let deg = gens[0].len();
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..deg).map(|i| q[p[i]]).collect() };
    let mut elems: Vec<Vec<usize>> = vec![(0..deg).collect()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let c = compose(&elems[i], g);
            if !index.contains_key(&c) {
                index.insert(c.clone(), elems.len());
                elems.push(c);
            }
        }
        i += 1;
    }
    let gen_idx: Vec<(String, usize)> = gens.iter().enumerate().map(|(k, g)| (format!("p{}", k + 1), index[g])).collect();
    let n = elems.len();
    let mul = |a: usize, b: usize| index[&compose(&elems[a], &elems[b])];
    FiniteGroup::from_fn(n, mul, gen_idx, spec, Shape::Other)
}

fn alternating4() -> FiniteGroup {
    from_permutations(&[vec![1, 0, 3, 2], vec![1, 2, 0, 3]], GroupSpec::Alternating4)
}

fn frobenius56() -> FiniteGroup {
    // points of F₂³ as bit patterns; multiplication by x modulo x³ + x + 1
    let translate: Vec<usize> = (0..8).map(|v| v ^ 1).collect();
    let times_x: Vec<usize> = (0..8)
        .map(|v: usize| {
            let (v0, v1, v2) = (v & 1, (v >> 1) & 1, (v >> 2) & 1);
            v2 | ((v0 ^ v2) << 1) | (v1 << 2)
        })
        .collect();
    from_permutations(&[translate, times_x], GroupSpec::Frobenius56)
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    let mut b = b % m;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Per-element unit images of a hom K → (Z/q)^*, given generator images.
fn extend_unit_hom(k: &FiniteGroup, q: u32, gen_units: &[u32]) -> Option<Vec<usize>> {
    let mut map = vec![0usize; k.order()];
    map[0] = 1;
    let mut seen = vec![false; k.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&(_, g), &u) in k.generators().iter().zip(gen_units) {
            let y = k.mul(x, g);
            let v = map[x] * u as usize % q as usize;
            if seen[y] {
                if map[y] != v {
                    return None;
                }
            } else {
                seen[y] = true;
                map[y] = v;
                queue.push_back(y);
            }
        }
    }
    Some(map)
}

fn cq_semidirect(q: u32, complement: &GroupSpec, action: &[u32]) -> Result<FiniteGroup> {
    if !is_prime(q) {
        return invalid(format!("q={q} is not prime"));
    }
    let k = Arc::new(FiniteGroup::from_spec(complement)?);
    if action.len() != k.generators().len() {
        return invalid("action must give one unit per complement generator");
    }
    let units = extend_unit_hom(&k, q, action).ok_or_else(|| Error::Invalid("action is not a homomorphism".into()))?;
    let qq = q as usize;
    let kk = k.clone();
    let uu = units.clone();
    let mul = move |a: usize, b: usize| {
        let (x, s) = (a % qq, a / qq);
        let (y, t) = (b % qq, b / qq);
        (x + uu[s] * y) % qq + qq * kk.mul(s, t)
    };
    let mut gens = vec![("a".to_string(), 1usize)];
    for (i, (_, g)) in k.generators().iter().enumerate() {
        gens.push((format!("k{}", i + 1), g * qq));
    }
    let spec = GroupSpec::CqSemidirect { q, complement: Box::new(complement.clone()), action: action.to_vec() };
    Ok(FiniteGroup::from_fn(qq * k.order(), mul, gens, spec, Shape::Semidirect { q: qq, complement: k, units }))
}

/// Subgroup with induced multiplication; elements keep the parent's order.
pub fn subgroup(parent: &Arc<FiniteGroup>, gens: &[usize]) -> FiniteGroup {
    let elements = parent.subgroup_generated(gens);
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let n = elements.len();
    let mul = |a: usize, b: usize| pos[&parent.mul(elements[a], elements[b])];
    let named: Vec<(String, usize)> = gens.iter().enumerate().map(|(i, g)| (format!("h{}", i + 1), pos[g])).collect();
    let spec = GroupSpec::Subgroup { parent: Box::new(parent.spec().clone()), gens: gens.to_vec() };
    FiniteGroup::from_fn(n, mul, named, spec, Shape::Subgroup { parent: parent.clone(), elements: elements.clone() })
}

/// The groups K of order λ ≤ 8, one per isomorphism class.
pub fn small_groups(lambda: u32) -> Vec<GroupSpec> {
    use GroupSpec::*;
    let c = Cyclic;
    match lambda {
        1 => vec![c(1)],
        2 | 3 | 5 | 7 => vec![c(lambda)],
        4 => vec![c(4), DirectProduct(vec![c(2), c(2)])],
        6 => vec![c(6), Dihedral(3)],
        8 => vec![c(8), DirectProduct(vec![c(4), c(2)]), DirectProduct(vec![c(2), c(2), c(2)]), Dihedral(4), Quaternion],
        12 => vec![
            c(12),
            DirectProduct(vec![c(6), c(2)]),
            Dihedral(6),
            Alternating4,
            CqSemidirect { q: 3, complement: Box::new(c(4)), action: vec![2] },
        ],
        _ => vec![],
    }
}

impl FiniteGroup {
    /// Builds a single group; `AllOfOrderLambdaQ` must go through [`build_group`].
    pub fn from_spec(spec: &GroupSpec) -> Result<FiniteGroup> {
        match spec {
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::Dihedral(n) => dihedral(*n),
            GroupSpec::DirectProduct(fs) => direct_product(fs),
            GroupSpec::SemidirectCqC4 { q, rho } => cq_c4(*q, *rho),
            GroupSpec::AccolaMaclachlan(q) => accola_maclachlan(*q),
            GroupSpec::Quaternion => Ok(quaternion()),
            GroupSpec::Alternating4 => Ok(alternating4()),
            GroupSpec::Frobenius56 => Ok(frobenius56()),
            GroupSpec::CqSemidirect { q, complement, action } => cq_semidirect(*q, complement, action),
            GroupSpec::Subgroup { parent, gens } => {
                let p = Arc::new(FiniteGroup::from_spec(parent)?);
                if gens.iter().any(|&g| g >= p.order()) {
                    return invalid("subgroup generator out of range");
                }
                Ok(subgroup(&p, gens))
            }
            GroupSpec::AllOfOrderLambdaQ { .. } => invalid("use build_group for a list of groups"),
        }
    }
}

/// Every C_q ⋊ K with |K| = λ, up to isomorphism, one representative each:
/// the candidate with the lexicographically least table. When q > λ this is
/// every group of order λq.
pub(crate) fn semidirect_family(lambda: u32, q: u32) -> Result<Vec<FiniteGroup>> {
    let mut candidates = Vec::new();
    for kspec in small_groups(lambda) {
        let k = FiniteGroup::from_spec(&kspec)?;
        let choices: Vec<Vec<u32>> = k
            .generators()
            .iter()
            .map(|&(_, g)| (1..q).filter(|&u| pow_mod(u as u64, k.element_order(g) as u64, q as u64) == 1).collect())
            .collect();
        let mut idx = vec![0usize; choices.len()];
        'outer: loop {
            let action: Vec<u32> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if extend_unit_hom(&k, q, &action).is_some() {
                candidates.push(cq_semidirect(q, &kspec, &action)?);
            }
            for pos in 0..idx.len() {
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    continue 'outer;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    Ok(dedup_by_isomorphism(candidates))
}

fn dedup_by_isomorphism(mut candidates: Vec<FiniteGroup>) -> Vec<FiniteGroup> {
    candidates.sort_by(|a, b| a.table.cmp(&b.table));
    let mut reps: Vec<FiniteGroup> = Vec::new();
    for c in candidates {
        if !reps.iter().any(|r| find_isomorphism(r, &c).is_some()) {
            reps.push(c);
        }
    }
    reps
}

/// All groups of order λq up to isomorphism. For q > λ every such group is
/// C_q ⋊ K; the two cases q = 7, λ ∈ {7, 8} also need C₄₉ and C₂³ ⋊ C₇,
/// whose Sylow 7-subgroups are not of that form.
pub fn all_of_order(lambda: u32, q: u32) -> Result<Vec<FiniteGroup>> {
    if !is_prime(q) {
        return invalid(format!("q={q} is not prime"));
    }
    if lambda == 0 || lambda > 8 {
        return invalid(format!("lambda={lambda} out of range 1..=8"));
    }
    let mut extra = Vec::new();
    if q <= lambda {
        match (lambda, q) {
            (7, 7) => extra.push(cyclic(49)?),
            (8, 7) => extra.push(frobenius56()),
            _ => return invalid(format!("q={q} must exceed lambda={lambda}")),
        }
    }
    let mut all = semidirect_family(lambda, q)?;
    all.extend(extra);
    Ok(dedup_by_isomorphism(all))
}

/// One group, or the whole list for `AllOfOrderLambdaQ`.
pub fn build_group(spec: &GroupSpec) -> Result<Vec<FiniteGroup>> {
    match spec {
        GroupSpec::AllOfOrderLambdaQ { lambda, q } => all_of_order(*lambda, *q),
        other => Ok(vec![FiniteGroup::from_spec(other)?]),
    }
}

/// Greedy small generating set: repeatedly add an element of largest order
/// outside the current subgroup.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut sub = vec![0usize];
    while sub.len() < g.order() {
        let mut inside = vec![false; g.order()];
        for &x in &sub {
            inside[x] = true;
        }
        let best = (0..g.order()).filter(|&x| !inside[x]).max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x))).unwrap();
        gens.push(best);
        sub = g.subgroup_generated(&gens);
    }
    gens
}

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut counts = vec![0usize; g.order() + 1];
    for &o in g.element_orders() {
        counts[o] += 1;
    }
    counts
}

/// Depth-first search over generator images, checking consistency on the
/// subgroup generated so far. Calls `found` for every bijective hom; stops
/// when it returns false.
fn search_isos(g: &FiniteGroup, h: &FiniteGroup, found: &mut dyn FnMut(Vec<usize>) -> bool) {
    let gens = small_generating_set(g);
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..h.order()).filter(|&y| h.element_order(y) == g.element_order(x)).collect())
        .collect();
    let mut imgs = vec![0usize; gens.len()];

    fn close(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; g.order()];
        let mut used = vec![false; h.order()];
        map[0] = 0;
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in gens.iter().zip(imgs) {
                let y = g.mul(x, s);
                let v = h.mul(map[x], t);
                if map[y] == usize::MAX {
                    if used[v] {
                        return None;
                    }
                    used[v] = true;
                    map[y] = v;
                    queue.push_back(y);
                } else if map[y] != v {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn rec(
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        imgs: &mut Vec<usize>,
        depth: usize,
        found: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        if depth == gens.len() {
            let map = close(g, h, gens, imgs).expect("checked at previous depth");
            return found(map);
        }
        for &c in &cands[depth] {
            imgs[depth] = c;
            if close(g, h, &gens[..=depth], &imgs[..=depth]).is_some() && !rec(g, h, gens, cands, imgs, depth + 1, found) {
                return false;
            }
        }
        true
    }

    rec(g, h, &gens, &cands, &mut imgs, 0, found);
}

/// An isomorphism G → H as an element map, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() || order_profile(g) != order_profile(h) {
        return None;
    }
    let mut out = None;
    search_isos(g, h, &mut |m| {
        out = Some(m);
        false
    });
    out
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Result<bool> {
    if g.order() > MAX_ORDER || h.order() > MAX_ORDER {
        return Err(Error::Limit(format!("isomorphism test above order {MAX_ORDER}")));
    }
    Ok(find_isomorphism(g, h).is_some())
}

/// All automorphisms, sorted by image vector; the identity comes first.
pub fn automorphisms(g: &FiniteGroup) -> Result<Vec<GroupHom>> {
    if g.order() > MAX_ORDER {
        return Err(Error::Limit(format!("automorphism search above order {MAX_ORDER}")));
    }
    let mut out = Vec::new();
    search_isos(g, g, &mut |m| {
        out.push(GroupHom { image: m });
        true
    });
    out.sort();
    Ok(out)
}

/// Named constructions of order λq tried when labelling a group.
pub fn named_candidates(lambda: u32, q: u32) -> Vec<GroupSpec> {
    use GroupSpec::*;
    let n = lambda * q;
    let mut out = vec![Cyclic(n)];
    if lambda.is_multiple_of(2) {
        out.push(Dihedral(n / 2));
    }
    for k in small_groups(lambda) {
        if !matches!(k, Cyclic(_)) {
            out.push(DirectProduct(vec![Cyclic(q), k]));
        }
    }
    match lambda {
        4 => {
            if let Some(r) = least_fourth_root(q) {
                out.push(SemidirectCqC4 { q, rho: r });
            }
            out.push(SemidirectCqC4 { q, rho: q - 1 });
        }
        6 => {
            out.push(DirectProduct(vec![Dihedral(q), Cyclic(3)]));
            out.push(DirectProduct(vec![Cyclic(q), Dihedral(3)]));
        }
        8 => {
            out.push(AccolaMaclachlan(q));
            out.push(DirectProduct(vec![Dihedral(q), Cyclic(4)]));
            out.push(DirectProduct(vec![Dihedral(q), Cyclic(2), Cyclic(2)]));
            out.push(DirectProduct(vec![Dihedral(2 * q), Cyclic(2)]));
            if let Some(r) = least_fourth_root(q) {
                out.push(DirectProduct(vec![SemidirectCqC4 { q, rho: r }, Cyclic(2)]));
            }
            out.push(DirectProduct(vec![SemidirectCqC4 { q, rho: q - 1 }, Cyclic(2)]));
        }
        _ => {}
    }
    out
}

/// A familiar name for a group of order λq, when one of the named
/// constructions matches.
pub fn identify(g: &FiniteGroup, lambda: u32, q: u32) -> Option<GroupSpec> {
    named_candidates(lambda, q).into_iter().find(|s| {
        FiniteGroup::from_spec(s).map(|h| h.order() == g.order() && find_isomorphism(&h, g).is_some()).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteGroup {
        FiniteGroup::from_spec(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn constructions_satisfy_axioms() {
        for s in ["C10", "D5", "D7", "C5xC2", "CqC4:q=5,rho=2", "CqC4:q=5,rho=4", "AM:q=5", "AM:q=7", "Q8", "A4", "F56", "D5xC2"] {
            let g = build(s);
            assert!(g.check_axioms(), "{s}");
        }
    }

    #[test]
    fn orders_and_examples() {
        let c10 = build("C10");
        assert_eq!(c10.order(), 10);
        assert_eq!(c10.element_order(1), 10);
        let am = build("AM:q=5");
        assert_eq!(am.order(), 40);
        let x = am.gen("x").unwrap();
        let z = am.gen("z").unwrap();
        assert_eq!(am.element_order(x), 10);
        assert_eq!(am.element_order(am.mul(z, x)), 4);
        let d5 = build("D5");
        let (r, s) = (d5.gen("r").unwrap(), d5.gen("s").unwrap());
        assert_eq!(d5.element_order(d5.mul(s, r)), 2);
        assert_eq!(d5.subgroup_generated(&[r]).len(), 5);
        assert_eq!(am.subgroup_generated(&[z, am.mul(z, x)]).len(), 40);
        assert_eq!(c10.subgroup_generated(&[2]).len(), 5);
    }

    #[test]
    fn am_relations_hold() {
        let am = build("AM:q=5");
        let (x, y, z) = (am.gen("x").unwrap(), am.gen("y").unwrap(), am.gen("z").unwrap());
        assert_eq!(am.pow(x, 10), 0);
        assert_eq!(am.pow(y, 2), 0);
        assert_eq!(am.pow(z, 2), 0);
        assert_eq!(am.mul(x, y), am.mul(y, x));
        assert_eq!(am.mul(z, y), am.mul(y, z));
        assert_eq!(am.mul(am.mul(z, x), z), am.mul(am.inv(x), y));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&build("C5")).unwrap().len(), 4);
        assert_eq!(automorphisms(&build("C5xC2")).unwrap().len(), 4);
        assert_eq!(automorphisms(&build("D5")).unwrap().len(), 20);
        let auts = automorphisms(&build("D5")).unwrap();
        assert_eq!(auts[0].image, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn isomorphism_examples() {
        assert!(!are_isomorphic(&build("C10"), &build("D5")).unwrap());
        assert!(are_isomorphic(&build("D:5x2"), &build("D10")).unwrap());
        assert!(are_isomorphic(&build("CqC4:q=5,rho=2"), &build("CqC4:q=5,rho=3")).unwrap());
        assert!(!are_isomorphic(&build("CqC4:q=5,rho=2"), &build("CqC4:q=5,rho=4")).unwrap());
    }

    #[test]
    fn class_counts() {
        assert_eq!(build("C7").conjugacy_classes().len(), 7);
        let sizes: Vec<usize> = build("D5").conjugacy_classes().iter().map(|c| c.len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 2, 5]);
        assert_eq!(build("CqC4:q=5,rho=2").conjugacy_classes().len(), 5);
    }

    #[test]
    fn groups_of_order_2q() {
        let gs = all_of_order(2, 7).unwrap();
        assert_eq!(gs.len(), 2);
        let c14 = build("C14");
        let d7 = build("D7");
        assert_eq!(gs.iter().filter(|g| are_isomorphic(g, &c14).unwrap()).count(), 1);
        assert_eq!(gs.iter().filter(|g| are_isomorphic(g, &d7).unwrap()).count(), 1);
    }

    #[test]
    fn small_group_counts() {
        // known numbers of groups of orders 44, 42, 88, 104, 49, 56
        assert_eq!(all_of_order(4, 11).unwrap().len(), 4);
        assert_eq!(all_of_order(6, 7).unwrap().len(), 6);
        assert_eq!(all_of_order(8, 11).unwrap().len(), 12);
        assert_eq!(all_of_order(8, 13).unwrap().len(), 14);
        assert_eq!(all_of_order(7, 7).unwrap().len(), 2);
        assert_eq!(all_of_order(8, 7).unwrap().len(), 13);
        assert_eq!(FiniteGroup::from_spec(&GroupSpec::Frobenius56).unwrap().order(), 56);
    }

    #[test]
    fn spec_text_round_trip() {
        for s in ["C10", "D7", "CqC4:q=13,rho=5", "AM:q=5", "all:lambda=4,q=7", "C5xC2", "D5xC2", "Q8", "semi:q=7,K=C2xC2,phi=6.1", "sub[1.3]@AM:q=5"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("D:7".parse::<GroupSpec>().unwrap(), GroupSpec::Dihedral(7));
        assert_eq!("D:5x2".parse::<GroupSpec>().unwrap().to_string(), "D5xC2");
        assert!("E7".parse::<GroupSpec>().is_err());
        assert!(FiniteGroup::from_spec(&"CqC4:q=7,rho=2".parse().unwrap()).is_err());
        assert!(all_of_order(9, 11).is_err());
        assert!(all_of_order(2, 9).is_err());
        assert!(all_of_order(4, 3).is_err());
    }
}
