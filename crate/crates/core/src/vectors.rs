//! Surface-kernel generating vectors over genus-zero signatures, their
//! braid and automorphism moves, topological equivalence classes, and
//! extension of actions through explicit restriction words.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{automorphisms, find_isomorphism, is_prime, semidirect_family, subgroup, FiniteGroup, GroupHom, GroupSpec, MAX_ORDER};
use crate::signature::{format_periods, Signature};

pub const MAX_PERIODS: usize = 6;

/// Ambient groups in extension searches may exceed [`MAX_ORDER`].
const AMBIENT_MAX_ORDER: usize = 300;

/// Images (θ(x₁), …, θ(x_s)) of the canonical elliptic generators of a
/// genus-zero Fuchsian group. The periods travel with the vector because
/// braid moves permute them.
#[derive(Clone)]
pub struct GeneratingVector {
    group: Arc<FiniteGroup>,
    periods: Vec<u32>,
    images: Vec<usize>,
}

impl fmt::Debug for GeneratingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} in {}", self.describe(), format_periods(0, &self.periods), self.group.spec())
    }
}

impl PartialEq for GeneratingVector {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.periods == other.periods && *self.group == *other.group
    }
}

fn product(g: &FiniteGroup, images: &[usize]) -> usize {
    images.iter().fold(0, |acc, &x| g.mul(acc, x))
}

fn check(g: &FiniteGroup, periods: &[u32], images: &[usize]) -> bool {
    periods.len() == images.len()
        && images.iter().all(|&x| x < g.order())
        && images.iter().zip(periods).all(|(&x, &k)| g.element_order(x) == k as usize)
        && product(g, images) == 0
        && g.generates(images)
}

/// JSON form: `{"group":"D7","sigma":"(0;2,2,7,7)","images":[...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VectorJson {
    pub group: String,
    pub sigma: String,
    pub images: Vec<usize>,
}

impl GeneratingVector {
    pub fn new(group: Arc<FiniteGroup>, periods: Vec<u32>, images: Vec<usize>) -> Result<GeneratingVector> {
        if !check(&group, &periods, &images) {
            return invalid(format!(
                "{:?} is not a generating vector of {} for {}",
                images,
                group.spec(),
                format_periods(0, &periods)
            ));
        }
        Ok(GeneratingVector { group, periods, images })
    }

    /// Periods are read off the element orders.
    pub fn from_images(group: Arc<FiniteGroup>, images: Vec<usize>) -> Result<GeneratingVector> {
        let periods = images.iter().map(|&x| group.element_order(x.min(group.order() - 1)) as u32).collect();
        GeneratingVector::new(group, periods, images)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn periods(&self) -> &[u32] {
        &self.periods
    }

    /// The signature with periods sorted.
    pub fn signature(&self) -> Signature {
        Signature::genus_zero(&self.periods).expect("periods of a valid vector are at least 2")
    }

    /// Genus of the surface, from Riemann–Hurwitz.
    pub fn genus(&self) -> i64 {
        let g = crate::signature::rh_genus(self.group.order() as u64, &self.signature());
        g.to_integer()
    }

    pub fn describe(&self) -> String {
        let names: Vec<String> = self.images.iter().map(|&x| self.group.element_name(x)).collect();
        format!("({})", names.join(", "))
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson {
            group: self.group.spec().to_string(),
            sigma: format_periods(0, &self.periods),
            images: self.images.clone(),
        }
    }

    pub fn from_json(j: &VectorJson) -> Result<GeneratingVector> {
        let spec: GroupSpec = j.group.parse()?;
        let group = Arc::new(FiniteGroup::from_spec(&spec)?);
        let (gamma, periods) = Signature::parse_ordered(&j.sigma)?;
        if gamma != 0 {
            return Err(Error::Unsupported("only genus-zero quotients are supported".into()));
        }
        GeneratingVector::new(group, periods, j.images.clone())
    }
}

/// All three defining conditions: exact orders, product one, generation.
pub fn is_valid_vector(group: &FiniteGroup, sigma: &Signature, images: &[usize]) -> Result<bool> {
    if sigma.gamma != 0 {
        return Err(Error::Unsupported("only genus-zero quotients are supported".into()));
    }
    Ok(check(group, &sigma.periods, images))
}

fn elements_by_order(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.order() + 1];
    for x in 0..g.order() {
        out[g.element_order(x)].push(x);
    }
    out
}

fn check_bounds(g: &FiniteGroup, periods: &[u32], max_order: usize) -> Result<()> {
    if periods.len() > MAX_PERIODS {
        return Err(Error::Limit(format!("{} periods, at most {MAX_PERIODS} supported", periods.len())));
    }
    if g.order() > max_order {
        return Err(Error::Limit(format!("group order {} above {max_order}", g.order())));
    }
    Ok(())
}

/// Depth-first search over the first s−1 entries; the last is forced.
fn dfs(
    g: &FiniteGroup,
    periods: &[u32],
    by_order: &[Vec<usize>],
    cur: &mut Vec<usize>,
    prod: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let s = periods.len();
    if cur.len() == s - 1 {
        let last = g.inv(prod);
        if g.element_order(last) == periods[s - 1] as usize {
            cur.push(last);
            let go_on = if g.generates(cur) { visit(cur) } else { true };
            cur.pop();
            return go_on;
        }
        return true;
    }
    let k = periods[cur.len()] as usize;
    if k >= by_order.len() {
        return true;
    }
    for &x in &by_order[k] {
        cur.push(x);
        let go_on = dfs(g, periods, by_order, cur, g.mul(prod, x), visit);
        cur.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn first_choices(g: &FiniteGroup, periods: &[u32], by_order: &[Vec<usize>]) -> Vec<usize> {
    by_order.get(periods[0] as usize).cloned().unwrap_or_default()
        .into_iter()
        .filter(|_| g.order() > 0)
        .collect()
}

/// Every valid image tuple for periods in the given order, lexicographic.
pub(crate) fn enumerate_raw(g: &FiniteGroup, periods: &[u32], max_order: usize) -> Result<Vec<Vec<usize>>> {
    check_bounds(g, periods, max_order)?;
    if periods.len() < 2 {
        return Ok(Vec::new());
    }
    let by_order = elements_by_order(g);
    let chunks: Vec<Vec<Vec<usize>>> = first_choices(g, periods, &by_order)
        .par_iter()
        .map(|&x| {
            let mut out = Vec::new();
            let mut cur = vec![x];
            dfs(g, periods, &by_order, &mut cur, x, &mut |v| {
                out.push(v.to_vec());
                true
            });
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Whether at least one valid vector exists for the periods in this order.
pub fn vector_exists(g: &FiniteGroup, periods: &[u32]) -> Result<bool> {
    check_bounds(g, periods, AMBIENT_MAX_ORDER)?;
    if periods.len() < 2 {
        return Ok(false);
    }
    let by_order = elements_by_order(g);
    Ok(first_choices(g, periods, &by_order).par_iter().any(|&x| {
        let mut found = false;
        let mut cur = vec![x];
        dfs(g, periods, &by_order, &mut cur, x, &mut |_| {
            found = true;
            false
        });
        found
    }))
}

/// All valid vectors with the signature's sorted periods, deterministic order.
pub fn enumerate_vectors(group: &Arc<FiniteGroup>, sigma: &Signature) -> Result<Vec<GeneratingVector>> {
    if sigma.gamma != 0 {
        return Err(Error::Unsupported("only genus-zero quotients are supported".into()));
    }
    let raw = enumerate_raw(group, &sigma.periods, MAX_ORDER)?;
    Ok(raw
        .into_iter()
        .map(|images| GeneratingVector { group: group.clone(), periods: sigma.periods.clone(), images })
        .collect())
}

fn braid_raw(g: &FiniteGroup, v: &[usize], i: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w[i] = v[i + 1];
    w[i + 1] = g.conjugate(v[i], v[i + 1]);
    w
}

fn braid_inv_raw(g: &FiniteGroup, v: &[usize], i: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w[i] = g.mul(g.mul(v[i], v[i + 1]), g.inv(v[i]));
    w[i + 1] = v[i];
    w
}

fn braid_index(v: &GeneratingVector, i: usize) -> Result<usize> {
    if i == 0 || i >= v.images.len() {
        return invalid(format!("braid index {i} outside 1..{}", v.images.len()));
    }
    Ok(i - 1)
}

/// Φ_i (1-based): x_i ↦ x_{i+1}, x_{i+1} ↦ x_{i+1}⁻¹ x_i x_{i+1}.
pub fn braid_move(v: &GeneratingVector, i: usize) -> Result<GeneratingVector> {
    let k = braid_index(v, i)?;
    let mut periods = v.periods.clone();
    periods.swap(k, k + 1);
    Ok(GeneratingVector { group: v.group.clone(), periods, images: braid_raw(&v.group, &v.images, k) })
}

/// Φ_i⁻¹: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i.
pub fn braid_move_inverse(v: &GeneratingVector, i: usize) -> Result<GeneratingVector> {
    let k = braid_index(v, i)?;
    let mut periods = v.periods.clone();
    periods.swap(k, k + 1);
    Ok(GeneratingVector { group: v.group.clone(), periods, images: braid_inv_raw(&v.group, &v.images, k) })
}

pub fn aut_apply(omega: &GroupHom, v: &GeneratingVector) -> Result<GeneratingVector> {
    if omega.image.len() != v.group.order() || !omega.is_bijective() {
        return invalid("map is not a bijection of the group");
    }
    let images = v.images.iter().map(|&x| omega.apply(x)).collect();
    Ok(GeneratingVector { group: v.group.clone(), periods: v.periods.clone(), images })
}

/// A generating subset of Aut(G), chosen greedily from the full list.
pub fn aut_generators(g: &FiniteGroup) -> Result<Vec<GroupHom>> {
    let all = automorphisms(g)?;
    let mut gens: Vec<GroupHom> = Vec::new();
    let mut closure: HashSet<Vec<usize>> = HashSet::from([(0..g.order()).collect()]);
    for a in &all {
        if closure.len() == all.len() {
            break;
        }
        if closure.contains(&a.image) {
            continue;
        }
        gens.push(a.clone());
        let mut queue: VecDeque<Vec<usize>> = closure.iter().cloned().collect();
        while let Some(m) = queue.pop_front() {
            for s in &gens {
                let c: Vec<usize> = m.iter().map(|&x| s.image[x]).collect();
                if closure.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
    }
    Ok(gens)
}

fn distinct_orderings(periods: &[u32]) -> Vec<Vec<u32>> {
    let mut p = periods.to_vec();
    p.sort_unstable();
    let mut out = vec![p.clone()];
    // next lexicographic permutation
    loop {
        let n = p.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
    out
}

fn neighbours(g: &FiniteGroup, auts: &[GroupHom], v: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(auts.len() + v.len());
    for a in auts {
        out.push(v.iter().map(|&x| a.image[x]).collect());
    }
    for i in 0..v.len().saturating_sub(1) {
        out.push(braid_raw(g, v, i));
    }
    out
}

/// Every member of the (Aut(G) × braid)-orbit of `v`, all period orders.
pub fn orbit_members(v: &GeneratingVector) -> Result<HashSet<Vec<usize>>> {
    let auts = aut_generators(&v.group)?;
    Ok(orbit_members_with(&v.group, &auts, &v.images))
}

fn orbit_members_with(g: &FiniteGroup, auts: &[GroupHom], start: &[usize]) -> HashSet<Vec<usize>> {
    let mut seen = HashSet::from([start.to_vec()]);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for w in neighbours(g, auts, &v) {
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// One topological class of actions.
#[derive(Clone, Debug)]
pub struct Orbit {
    /// Least member with sorted periods.
    pub representative: GeneratingVector,
    /// Members with sorted periods.
    pub size: usize,
    /// Class index after the normalizer identification.
    pub merged_class: usize,
    pub extension: Option<Extension>,
}

impl Orbit {
    /// The whole stratum lies inside a larger action's stratum.
    pub fn extendable(&self) -> bool {
        self.extension.as_ref().is_some_and(|e| e.whole_stratum)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub group: Arc<FiniteGroup>,
    pub signature: Signature,
    /// Number of valid vectors with sorted periods.
    pub total: usize,
    pub orbits: Vec<Orbit>,
    /// Whether the normalizer identification applied to this signature.
    pub normalizer_merge: bool,
    /// Class count after that identification.
    pub merged_count: usize,
}

impl OrbitReport {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    pub fn extendable_count(&self) -> usize {
        self.orbits.iter().filter(|o| o.extendable()).count()
    }
}

/// Words for the conjugation by the extra normalizer element that a
/// triangle group with two equal periods picks up as an index-2 subgroup
/// of another triangle group. These identify surfaces, not topological
/// classes.
fn normalizer_words(periods: &[u32]) -> Option<Vec<Word>> {
    if periods.len() != 3 {
        return None;
    }
    let (a, b, c) = (periods[0], periods[1], periods[2]);
    if a == b && b < c {
        // (y1, y2, y3) ↦ (y2, y3 y1 y3⁻¹, y3)
        Some(vec![Word::new(&[(2, 1)]), Word::new(&[(3, 1), (1, 1), (3, -1)]), Word::new(&[(3, 1)])])
    } else if a < b && b == c {
        // (x1, x2, x3) ↦ (x2⁻¹ x1 x2, x3, x2)
        Some(vec![Word::new(&[(2, -1), (1, 1), (2, 1)]), Word::new(&[(3, 1)]), Word::new(&[(2, 1)])])
    } else {
        None
    }
}

/// Orbits without the extension search.
pub fn orbits_plain(group: &Arc<FiniteGroup>, sigma: &Signature) -> Result<OrbitReport> {
    if sigma.gamma != 0 {
        return Err(Error::Unsupported("only genus-zero quotients are supported".into()));
    }
    check_bounds(group, &sigma.periods, MAX_ORDER)?;
    let g: &FiniteGroup = group;
    let auts = aut_generators(g)?;
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut sorted_count = 0;
    for (k, ord) in distinct_orderings(&sigma.periods).iter().enumerate() {
        let vs = enumerate_raw(g, ord, MAX_ORDER)?;
        if k == 0 {
            sorted_count = vs.len();
        }
        all.extend(vs);
    }
    let index: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let edges: Vec<Vec<usize>> = all
        .par_iter()
        .map(|v| neighbours(g, &auts, v).iter().map(|w| index[w.as_slice()]).collect())
        .collect();
    let mut uf = UnionFind((0..all.len()).collect());
    for (i, es) in edges.iter().enumerate() {
        for &j in es {
            uf.union(i, j);
        }
    }
    // sorted-order vectors come first and in lexicographic order, so the
    // first member met is the least one
    let mut root_to_orbit: HashMap<usize, usize> = HashMap::new();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for i in 0..sorted_count {
        let r = uf.find(i);
        match root_to_orbit.get(&r) {
            Some(&o) => reps[o].1 += 1,
            None => {
                root_to_orbit.insert(r, reps.len());
                reps.push((i, 1));
            }
        }
    }
    let merge = normalizer_words(&sigma.periods);
    let mut classes = UnionFind((0..reps.len()).collect());
    if let Some(words) = &merge {
        for (o, &(i, _)) in reps.iter().enumerate() {
            let w: Vec<usize> = words.iter().map(|wd| wd.eval(g, &all[i])).collect();
            if let Some(&j) = index.get(w.as_slice()) {
                if let Some(&o2) = root_to_orbit.get(&uf.find(j)) {
                    classes.union(o, o2);
                }
            }
        }
    }
    let mut class_ids: HashMap<usize, usize> = HashMap::new();
    let orbits: Vec<Orbit> = reps
        .iter()
        .enumerate()
        .map(|(o, &(i, size))| {
            let root = classes.find(o);
            let next = class_ids.len();
            let merged_class = *class_ids.entry(root).or_insert(next);
            Orbit {
                representative: GeneratingVector { group: group.clone(), periods: sigma.periods.clone(), images: all[i].clone() },
                size,
                merged_class,
                extension: None,
            }
        })
        .collect();
    Ok(OrbitReport {
        group: group.clone(),
        signature: sigma.clone(),
        total: sorted_count,
        merged_count: class_ids.len(),
        normalizer_merge: merge.is_some(),
        orbits,
    })
}

/// Orbits with the extension search run on each representative whose
/// signature appears in the inclusion table.
pub fn orbits(group: &Arc<FiniteGroup>, sigma: &Signature) -> Result<OrbitReport> {
    let mut report = orbits_plain(group, sigma)?;
    for o in &mut report.orbits {
        o.extension = match extendability(&o.representative) {
            Ok(e) => e,
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(report)
}

/// A word in canonical generators: (1-based generator, exponent) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, i32)>);

impl Word {
    pub fn new(letters: &[(usize, i32)]) -> Word {
        Word(letters.to_vec())
    }

    pub fn eval(&self, g: &FiniteGroup, images: &[usize]) -> usize {
        self.0.iter().fold(0, |acc, &(i, e)| g.mul(acc, g.pow(images[i - 1], e as i64)))
    }

    pub fn render(&self, sym: &str) -> String {
        self.0
            .iter()
            .map(|&(i, e)| if e == 1 { format!("{sym}{i}") } else { format!("{sym}{i}^{e}") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A sub-signature Fuchsian group written in the generators of an ambient one.
#[derive(Clone, Debug)]
pub struct RestrictionRecipe {
    pub name: String,
    pub ambient: Signature,
    pub sub: Signature,
    pub words: Vec<Word>,
    /// Equal Teichmüller dimensions: the whole sub stratum lies in the
    /// ambient one. Otherwise only isolated surfaces do.
    pub whole_stratum: bool,
}

impl RestrictionRecipe {
    pub fn index(&self) -> usize {
        (self.sub.area() / self.ambient.area()).to_integer() as usize
    }
}

fn w(letters: &[(usize, i32)]) -> Word {
    Word::new(letters)
}

/// Inclusion table instantiated at the prime q.
pub fn recipes_for(q: u32) -> Vec<RestrictionRecipe> {
    let sig = |ks: &[u32]| Signature::genus_zero(ks).expect("periods >= 2");
    let mk = |name: &str, ambient: Signature, sub: Signature, words: Vec<Word>| {
        let whole = crate::signature::teich_dim(&ambient).ok() == crate::signature::teich_dim(&sub).ok();
        RestrictionRecipe { name: name.to_string(), ambient, sub, words, whole_stratum: whole }
    };
    vec![
        mk(
            "(0;q,2q,2q) in (0;2,2q,2q)",
            sig(&[2, 2 * q, 2 * q]),
            sig(&[q, 2 * q, 2 * q]),
            vec![w(&[(3, 2)]), w(&[(1, 1), (2, 1), (1, 1)]), w(&[(2, 1)])],
        ),
        mk(
            "(0;2,2,q,q) in (0;2,2,2,q), dihedral",
            sig(&[2, 2, 2, q]),
            sig(&[2, 2, q, q]),
            vec![w(&[(1, 1), (2, 1), (1, 1)]), w(&[(2, 1)]), w(&[(2, 1), (1, 1), (4, 1), (1, 1), (2, 1)]), w(&[(4, 1)])],
        ),
        mk(
            "(0;2,2,q,q) in (0;2,2,2,q), cyclic",
            sig(&[2, 2, 2, q]),
            sig(&[2, 2, q, q]),
            vec![w(&[(1, 1)]), w(&[(2, 1), (1, 1), (2, 1)]), w(&[(4, 1)]), w(&[(1, 1), (2, 1), (4, 1), (2, 1), (1, 1)])],
        ),
        mk(
            "(0;2,2q,2q) in (0;2,4,2q)",
            sig(&[2, 4, 2 * q]),
            sig(&[2, 2 * q, 2 * q]),
            vec![w(&[(2, -2)]), w(&[(3, -1)]), w(&[(2, -1), (3, -1), (2, 1)])],
        ),
        mk(
            "(0;4,4,q) in (0;2,4,2q)",
            sig(&[2, 4, 2 * q]),
            sig(&[4, 4, q]),
            vec![w(&[(2, 1)]), w(&[(3, 1), (2, 1), (3, -1)]), w(&[(3, 2)])],
        ),
        mk(
            "(0;3,q,3q) in (0;2,3,3q)",
            sig(&[2, 3, 3 * q]),
            sig(&[3, q, 3 * q]),
            vec![w(&[(2, 1)]), w(&[(3, 3)]), w(&[(1, 1), (2, -1), (3, 1), (2, 1), (1, 1)])],
        ),
        mk(
            "(0;2,2,2,q) in (0;2,4,2q)",
            sig(&[2, 4, 2 * q]),
            sig(&[2, 2, 2, q]),
            vec![w(&[(1, 1)]), w(&[(2, 1), (1, 1), (2, -1)]), w(&[(2, 2)]), w(&[(3, 2)])],
        ),
        mk(
            "(0;2,2,q,q) in (0;4,4,q)",
            sig(&[4, 4, q]),
            sig(&[2, 2, q, q]),
            vec![w(&[(1, 1), (2, 2), (1, -1)]), w(&[(1, 2)]), w(&[(1, -1), (3, 1), (1, 1)]), w(&[(3, 1)])],
        ),
    ]
}

/// Evaluates the recipe's words on an ambient vector; the result lives in
/// the subgroup they generate.
pub fn restrict_ske(ambient: &GeneratingVector, recipe: &RestrictionRecipe) -> Result<GeneratingVector> {
    if ambient.periods != recipe.ambient.periods {
        return invalid(format!("vector periods {:?} do not match {}", ambient.periods, recipe.ambient));
    }
    let g = &ambient.group;
    let elems: Vec<usize> = recipe.words.iter().map(|wd| wd.eval(g, &ambient.images)).collect();
    for (&x, &k) in elems.iter().zip(&recipe.sub.periods) {
        if g.element_order(x) != k as usize {
            return invalid(format!("restricted element has order {} instead of {k}", g.element_order(x)));
        }
    }
    if product(g, &elems) != 0 {
        return Err(Error::CrossCheck("restriction words do not multiply to one".into()));
    }
    let h = Arc::new(subgroup(g, &elems));
    let elements = g.subgroup_generated(&elems);
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let images = elems.iter().map(|x| pos[x]).collect();
    GeneratingVector::new(h, recipe.sub.periods.clone(), images)
}

/// Where an action extends: the ambient vector and the recipe used.
#[derive(Clone, Debug)]
pub struct Extension {
    pub recipe: String,
    pub whole_stratum: bool,
    pub ambient_label: String,
    pub ambient: GeneratingVector,
}

type GroupList = Arc<Vec<Arc<FiniteGroup>>>;

fn ambient_groups(lambda: u32, q: u32) -> Result<GroupList> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), GroupList>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(lambda, q)) {
        return Ok(v.clone());
    }
    let list = if lambda <= 8 && q > lambda { crate::group::all_of_order(lambda, q)? } else { semidirect_family(lambda, q)? };
    let list = Arc::new(list.into_iter().map(Arc::new).collect::<Vec<_>>());
    cache.lock().unwrap().insert((lambda, q), list.clone());
    Ok(list)
}

fn odd_prime_factors(periods: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for &k in periods {
        for p in (5..=k).filter(|&p| k % p == 0 && is_prime(p)) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Recipes whose sub signature is the vector's signature.
pub fn matching_recipes(sigma: &Signature) -> Vec<(u32, RestrictionRecipe)> {
    let mut out = Vec::new();
    for p in odd_prime_factors(&sigma.periods) {
        for r in recipes_for(p) {
            if r.sub == *sigma {
                out.push((p, r));
            }
        }
    }
    // whole-stratum inclusions first
    out.sort_by_key(|(_, r)| !r.whole_stratum);
    out
}

/// Searches the inclusion table for an ambient group and vector whose
/// restriction is topologically equivalent to `v`.
pub fn extendability(v: &GeneratingVector) -> Result<Option<Extension>> {
    let sigma = v.signature();
    let recipes = matching_recipes(&sigma);
    if recipes.is_empty() {
        return Err(Error::Unsupported(format!("{sigma} is not a sub signature in the inclusion table")));
    }
    let members = orbit_members(v)?;
    let g = &v.group;
    for (q, recipe) in recipes {
        let ambient_order = recipe.index() * g.order();
        if !ambient_order.is_multiple_of(q as usize) {
            continue;
        }
        let lambda = (ambient_order / q as usize) as u32;
        for amb in ambient_groups(lambda, q)?.iter() {
            if amb.order() > AMBIENT_MAX_ORDER {
                continue;
            }
            // subgroup elements -> (ambient index -> subgroup index, isomorphism), if any
            type Identification = Option<(HashMap<usize, usize>, Vec<usize>)>;
            let mut iso_cache: HashMap<Vec<usize>, Identification> = HashMap::new();
            for images in enumerate_raw(amb, &recipe.ambient.periods, AMBIENT_MAX_ORDER)? {
                let elems: Vec<usize> = recipe.words.iter().map(|wd| wd.eval(amb, &images)).collect();
                if elems.iter().zip(&recipe.sub.periods).any(|(&x, &k)| amb.element_order(x) != k as usize) {
                    continue;
                }
                let sub_elems = amb.subgroup_generated(&elems);
                if sub_elems.len() != g.order() {
                    continue;
                }
                let entry = iso_cache.entry(sub_elems.clone()).or_insert_with(|| {
                    let h = subgroup(amb, &elems);
                    find_isomorphism(&h, g).map(|iso| (sub_elems.iter().enumerate().map(|(i, &e)| (e, i)).collect(), iso))
                });
                let Some((pos, iso)) = entry else { continue };
                let mapped: Vec<usize> = elems.iter().map(|x| iso[pos[x]]).collect();
                if members.contains(&mapped) {
                    let ambient = GeneratingVector { group: amb.clone(), periods: recipe.ambient.periods.clone(), images };
                    let label = crate::group::identify(amb, lambda, q).map(|s| s.to_string()).unwrap_or_else(|| amb.spec().to_string());
                    return Ok(Some(Extension { recipe: recipe.name.clone(), whole_stratum: recipe.whole_stratum, ambient_label: label, ambient }));
                }
            }
        }
    }
    Ok(None)
}

/// Repeated extension until the table has nothing above.
pub fn extension_chain(v: &GeneratingVector) -> Result<Vec<Extension>> {
    let mut chain = Vec::new();
    let mut cur = v.clone();
    while chain.len() < 4 {
        match extendability(&cur) {
            Ok(Some(e)) => {
                cur = e.ambient.clone();
                chain.push(e);
            }
            Ok(None) | Err(Error::Unsupported(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_spec(&s.parse().unwrap()).unwrap())
    }

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn validity_examples() {
        let am = group("AM:q=5");
        let (x, z) = (am.gen("x").unwrap(), am.gen("z").unwrap());
        let imgs = [z, am.mul(z, x), am.inv(x)];
        assert!(is_valid_vector(&am, &sig("(0;2,4,10)"), &imgs).unwrap());

        let d5 = group("D5");
        let (r, s) = (d5.gen("r").unwrap(), d5.gen("s").unwrap());
        assert!(is_valid_vector(&d5, &sig("(0;2,2,5,5)"), &[s, s, r, d5.inv(r)]).unwrap());
        assert!(!is_valid_vector(&d5, &sig("(0;2,2,5,5)"), &[s, s, r, r]).unwrap());

        // C5 x C2 with a of order 5 and b of order 2: θ₁ = (a, ab, a⁻²b)
        let c = group("C5xC2");
        let (a, b) = (c.gen("g1").unwrap(), c.gen("g2").unwrap());
        let theta1 = [a, c.mul(a, b), c.mul(c.pow(a, -2), b)];
        assert!(is_valid_vector(&c, &sig("(0;5,10,10)"), &theta1).unwrap());
        assert!(is_valid_vector(&c, &sig("(1;5)"), &[a]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let c = group("C5xC2");
        let all = enumerate_vectors(&c, &sig("(0;5,10,10)")).unwrap();
        // a of order 5 (4 choices), second of order 10 (4), third forced
        assert_eq!(all.len(), 12);
        assert!(enumerate_vectors(&group("D5"), &sig("(0;3,3,5)")).unwrap().is_empty());
        let c21 = group("C7xC3");
        let r = orbits_plain(&c21, &sig("(0;3,7,21)")).unwrap();
        assert!(r.total > 0);
        assert_eq!(r.count(), 1);
    }

    #[test]
    fn braid_examples() {
        let d = group("D7");
        let (r, s) = (d.gen("r").unwrap(), d.gen("s").unwrap());
        let i = 2;
        let v = GeneratingVector::new(d.clone(), vec![2, 2, 7, 7], vec![s, d.mul(s, r), d.pow(r, i), d.pow(r, -i - 1)]).unwrap();
        let w = braid_move(&v, 3).unwrap();
        assert_eq!(w.images(), &[s, d.mul(s, r), d.pow(r, -i - 1), d.pow(r, i)]);

        let c = group("C5xC2");
        let (a, b) = (c.gen("g1").unwrap(), c.mul(c.gen("g1").unwrap(), c.gen("g2").unwrap()));
        let v = GeneratingVector::from_images(c.clone(), vec![a, b, c.inv(c.mul(a, b))]).unwrap();
        let w = braid_move(&v, 1).unwrap();
        assert_eq!(w.images(), &[b, a, c.inv(c.mul(a, b))]);
        assert_eq!(w.periods(), &[10, 5, 10]);

        let back = braid_move_inverse(&braid_move_inverse(&braid_move(&braid_move(&v, 1).unwrap(), 1).unwrap(), 1).unwrap(), 1).unwrap();
        assert_eq!(back, v);
        assert!(braid_move(&v, 3).is_err());
        assert!(braid_move(&v, 0).is_err());
    }

    #[test]
    fn aut_examples() {
        let d = group("D5");
        let (r, s) = (d.gen("r").unwrap(), d.gen("s").unwrap());
        let v = GeneratingVector::new(d.clone(), vec![2, 2, 5, 5], vec![s, s, r, d.inv(r)]).unwrap();
        let auts = automorphisms(&d).unwrap();
        assert_eq!(aut_apply(&auts[0], &v).unwrap(), v);
        let square = auts.iter().find(|a| a.apply(r) == d.pow(r, 2) && a.apply(s) == s).unwrap();
        assert_eq!(aut_apply(square, &v).unwrap().images(), &[s, s, d.pow(r, 2), d.pow(r, -2)]);
        let bad = GroupHom { image: vec![0; 10] };
        assert!(aut_apply(&bad, &v).is_err());
    }

    #[test]
    fn orbit_examples() {
        let r = orbits(&group("C5xC2"), &sig("(0;5,10,10)")).unwrap();
        assert_eq!(r.count(), 2);
        assert_eq!(r.extendable_count(), 1);
        assert_eq!(r.orbits.iter().map(|o| o.size).sum::<usize>(), r.total);
        assert_eq!(orbits_plain(&group("D7"), &sig("(0;2,2,7,7)")).unwrap().count(), 2);
        assert_eq!(orbits_plain(&group("D13"), &sig("(0;2,2,13,13)")).unwrap().count(), 4);
    }

    #[test]
    fn restriction_examples() {
        let am = group("AM:q=5");
        let (x, y, z) = (am.gen("x").unwrap(), am.gen("y").unwrap(), am.gen("z").unwrap());
        let v = GeneratingVector::new(am.clone(), vec![2, 4, 10], vec![z, am.mul(z, x), am.inv(x)]).unwrap();
        let recipes = recipes_for(5);
        let parent_images = |r: &GeneratingVector| -> Vec<usize> {
            match r.group().shape() {
                crate::group::Shape::Subgroup { elements, .. } => r.images().iter().map(|&i| elements[i]).collect(),
                _ => unreachable!(),
            }
        };
        let corona = recipes.iter().find(|r| r.name == "(0;2,2q,2q) in (0;2,4,2q)").unwrap();
        let r1 = restrict_ske(&v, corona).unwrap();
        assert_eq!(parent_images(&r1), vec![y, x, am.mul(am.inv(x), y)]);
        let corona2 = recipes.iter().find(|r| r.name == "(0;4,4,q) in (0;2,4,2q)").unwrap();
        let r2 = restrict_ske(&v, corona2).unwrap();
        assert_eq!(parent_images(&r2), vec![am.mul(z, x), am.mul(am.pow(x, -3), z), am.pow(x, -2)]);

        let d = group("D10");
        let (rr, t) = (d.gen("r").unwrap(), d.gen("s").unwrap());
        let v = GeneratingVector::new(d.clone(), vec![2, 2, 2, 5], vec![d.pow(rr, 5), t, d.mul(t, rr), d.pow(rr, 4)]).unwrap();
        let opa = recipes.iter().find(|r| r.name == "(0;2,2,q,q) in (0;2,2,2,q), dihedral").unwrap();
        let r3 = restrict_ske(&v, opa).unwrap();
        assert_eq!(parent_images(&r3), vec![t, t, d.pow(rr, -4), d.pow(rr, 4)]);
        assert!(restrict_ske(&v, corona).is_err());
    }

    #[test]
    fn words_multiply_to_one_on_every_ambient_vector() {
        for q in [5u32, 7] {
            for r in recipes_for(q) {
                let ambient = match r.ambient.periods.as_slice() {
                    [2, 4, _] => group(&format!("AM:q={q}")),
                    [2, 2, 2, _] => group(&format!("D{}", 2 * q)),
                    [2, _, _] if r.ambient.periods[1] == 2 * q => group(&format!("C{q}xC2xC2")),
                    [4, 4, _] => group(&format!("CqC4:q={q},rho={}", q - 1)),
                    _ => continue,
                };
                for images in enumerate_raw(&ambient, &r.ambient.periods, MAX_ORDER).unwrap() {
                    let e: Vec<usize> = r.words.iter().map(|wd| wd.eval(&ambient, &images)).collect();
                    assert_eq!(product(&ambient, &e), 0, "{}", r.name);
                }
            }
        }
    }
}
