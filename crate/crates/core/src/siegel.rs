//! Integer symplectic matrices acting on the Siegel upper half-space by
//! R·Z = (A + ZC)⁻¹(B + ZD), and a multi-start Newton solver for common
//! fixed points.
//!
//! With this formula [I Z]·R is row-equivalent to [I R·Z], so the action
//! is a right action: (R₁R₂)·Z = R₂·(R₁·Z).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const ENTRY_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-12;
pub const DEFAULT_STARTS: usize = 64;

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A 2g×2g integer matrix, blocks [[A, B], [C, D]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SymplecticMatrix {
    g: usize,
    entries: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for SymplecticMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<SymplecticMatrix> {
        SymplecticMatrix::from_rows(&rows)
    }
}

impl From<SymplecticMatrix> for Vec<Vec<i64>> {
    fn from(m: SymplecticMatrix) -> Vec<Vec<i64>> {
        m.rows()
    }
}

impl SymplecticMatrix {
    /// Any square integer matrix of even size; symplecticity is checked separately.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<SymplecticMatrix> {
        let n = rows.len();
        if n == 0 || !n.is_multiple_of(2) {
            return invalid(format!("matrix size {n} is not even"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return invalid("matrix is not square");
        }
        Ok(SymplecticMatrix { g: n / 2, entries: rows.concat() })
    }

    pub fn identity(g: usize) -> SymplecticMatrix {
        let n = 2 * g;
        SymplecticMatrix { g, entries: (0..n * n).map(|i| i64::from(i / n == i % n)).collect() }
    }

    /// J = [[0, I], [−I, 0]].
    pub fn j(g: usize) -> SymplecticMatrix {
        let n = 2 * g;
        let entries = (0..n * n)
            .map(|i| {
                let (r, col) = (i / n, i % n);
                if r < g && col == r + g {
                    1
                } else if r >= g && col + g == r {
                    -1
                } else {
                    0
                }
            })
            .collect();
        SymplecticMatrix { g, entries }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    fn n(&self) -> usize {
        2 * self.g
    }

    pub fn get(&self, r: usize, col: usize) -> i64 {
        self.entries[r * self.n() + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n()).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        let n = self.n();
        SymplecticMatrix { g: self.g, entries: (0..n * n).map(|i| self.get(i % n, i / n)).collect() }
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.g != other.g {
            return invalid("genus mismatch");
        }
        let n = self.n();
        let entries = (0..n * n).map(|i| (0..n).map(|k| self.get(i / n, k) * other.get(k, i % n)).sum()).collect();
        Ok(SymplecticMatrix { g: self.g, entries })
    }

    /// RᵀJR = J, exactly.
    pub fn is_symplectic(&self) -> bool {
        let j = SymplecticMatrix::j(self.g);
        self.transpose().mul(&j).and_then(|m| m.mul(self)).map(|m| m == j).unwrap_or(false)
    }

    /// R⁻¹ = −J Rᵀ J for symplectic R.
    pub fn inverse(&self) -> Result<SymplecticMatrix> {
        if !self.is_symplectic() {
            return invalid("matrix is not symplectic");
        }
        let j = SymplecticMatrix::j(self.g);
        let m = j.mul(&self.transpose())?.mul(&j)?;
        Ok(SymplecticMatrix { g: self.g, entries: m.entries.iter().map(|v| -v).collect() })
    }

    fn block(&self, r0: usize, c0: usize) -> CMat {
        CMat::from_fn(self.g, self.g, |r, col| c(self.get(r0 + r, c0 + col) as f64))
    }

    /// (A, B, C, D) as complex matrices.
    pub fn blocks(&self) -> (CMat, CMat, CMat, CMat) {
        let g = self.g;
        (self.block(0, 0), self.block(0, g), self.block(g, 0), self.block(g, g))
    }
}

/// Checks RᵀJR = J on raw rows; odd sizes are an error.
pub fn is_symplectic(rows: &[Vec<i64>]) -> Result<bool> {
    Ok(SymplecticMatrix::from_rows(rows)?.is_symplectic())
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn symmetry_defect(z: &CMat) -> f64 {
    (z - z.transpose()).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn imag(z: &CMat) -> DMatrix<f64> {
    z.map(|v| v.im)
}

/// A point of the Siegel upper half-space with its diagnostics.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    z: CMat,
    symmetry_defect: f64,
    min_im_eigenvalue: f64,
}

impl SiegelPoint {
    pub fn new(z: CMat) -> Result<SiegelPoint> {
        if !z.is_square() {
            return invalid("period matrix is not square");
        }
        let defect = symmetry_defect(&z);
        let scale = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if defect > 1e-10 * scale {
            return invalid(format!("matrix is not symmetric (defect {defect:.3e})"));
        }
        let z = (&z + z.transpose()) * c(0.5);
        let min_im = min_eigenvalue(&imag(&z));
        if min_im <= POSITIVITY_TOL {
            return invalid(format!("imaginary part is not positive definite (least eigenvalue {min_im:.3e})"));
        }
        Ok(SiegelPoint { z, symmetry_defect: defect, min_im_eigenvalue: min_im })
    }

    pub fn matrix(&self) -> &CMat {
        &self.z
    }

    pub fn genus(&self) -> usize {
        self.z.nrows()
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.symmetry_defect
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        self.min_im_eigenvalue
    }

    /// Rows of [re, im] pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        matrix_to_pairs(&self.z)
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<SiegelPoint> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("matrix is not square");
        }
        SiegelPoint::new(CMat::from_fn(n, n, |r, col| Complex64::new(rows[r][col][0], rows[r][col][1])))
    }
}

pub fn matrix_to_pairs(z: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..z.nrows()).map(|r| (0..z.ncols()).map(|col| [z[(r, col)].re, z[(r, col)].im]).collect()).collect()
}

/// R·Z = (A + ZC)⁻¹(B + ZD).
pub fn act(r: &SymplecticMatrix, z: &SiegelPoint) -> Result<SiegelPoint> {
    if r.genus() != z.genus() {
        return invalid("genus mismatch");
    }
    let (a, b, cc, d) = r.blocks();
    let zm = z.matrix();
    let left = &a + zm * &cc;
    let sv = left.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= 1e-12 * smax.max(1.0) {
        return invalid(format!("A + ZC is near-singular (condition {:.3e})", smax / smin));
    }
    let inv = left.try_inverse().ok_or_else(|| Error::Invalid("A + ZC is singular".into()))?;
    SiegelPoint::new(inv * (&b + zm * &d))
}

/// How composition acts on points, found by evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionConvention {
    /// (R₁R₂)·Z = R₂·(R₁·Z)
    Right,
    /// (R₁R₂)·Z = R₁·(R₂·Z)
    Left,
    Neither,
}

pub fn probe_convention(r1: &SymplecticMatrix, r2: &SymplecticMatrix, z: &SiegelPoint) -> Result<ActionConvention> {
    let prod = act(&r1.mul(r2)?, z)?;
    let right = act(r2, &act(r1, z)?)?;
    let left = act(r1, &act(r2, z)?)?;
    let close = |a: &SiegelPoint, b: &SiegelPoint| (a.matrix() - b.matrix()).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-9;
    Ok(match (close(&prod, &right), close(&prod, &left)) {
        (true, _) => ActionConvention::Right,
        (false, true) => ActionConvention::Left,
        _ => ActionConvention::Neither,
    })
}

struct Blocks {
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
}

fn residual_matrix(bl: &Blocks, z: &CMat) -> CMat {
    &bl.a * z + z * &bl.c * z - z * &bl.d - &bl.b
}

fn sym_basis(g: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..g {
        for j in i..g {
            out.push((i, j));
        }
    }
    out
}

fn basis_matrix(g: usize, (i, j): (usize, usize)) -> CMat {
    let mut e = CMat::zeros(g, g);
    e[(i, j)] = c(1.0);
    e[(j, i)] = c(1.0);
    e
}

fn stacked_residual(blocks: &[Blocks], z: &CMat) -> DVector<Complex64> {
    let parts: Vec<CMat> = blocks.iter().map(|bl| residual_matrix(bl, z)).collect();
    DVector::from_iterator(parts.len() * z.len(), parts.iter().flat_map(|m| m.iter().cloned()))
}

/// Column for E: A E + E C Z + Z C E − E D, stacked over generators.
fn jacobian(blocks: &[Blocks], z: &CMat) -> CMat {
    let g = z.nrows();
    let basis = sym_basis(g);
    let mut jac = CMat::zeros(blocks.len() * g * g, basis.len());
    for (col, &ij) in basis.iter().enumerate() {
        let e = basis_matrix(g, ij);
        for (k, bl) in blocks.iter().enumerate() {
            let m = &bl.a * &e + &e * &bl.c * z + z * &bl.c * &e - &e * &bl.d;
            for (idx, v) in m.iter().enumerate() {
                jac[(k * g * g + idx, col)] = *v;
            }
        }
    }
    jac
}

fn max_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn newton(blocks: &[Blocks], mut z: CMat, max_iter: usize) -> (CMat, f64) {
    let g = z.nrows();
    let basis = sym_basis(g);
    let mut res = max_norm(&stacked_residual(blocks, &z));
    for _ in 0..max_iter {
        if res < 1e-14 {
            break;
        }
        let f = stacked_residual(blocks, &z);
        let jac = jacobian(blocks, &z);
        let Ok(step) = jac.svd(true, true).solve(&(-f), 1e-12) else { break };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let mut trial = z.clone();
            for (k, &ij) in basis.iter().enumerate() {
                trial += basis_matrix(g, ij) * (step[k] * t);
            }
            let r = max_norm(&stacked_residual(blocks, &trial));
            if r.is_finite() && r < res {
                z = trial;
                res = r;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (z, res)
}

fn random_start(g: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut z = CMat::zeros(g, g);
    for i in 0..g {
        for j in i..g {
            let re = rng.gen_range(-1.0..1.0);
            let im = if i == j { rng.gen_range(0.5..2.0) } else { 0.0 };
            z[(i, j)] = Complex64::new(re, im);
            z[(j, i)] = z[(i, j)];
        }
    }
    z
}

/// Common fixed point of a set of symplectic matrices.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub generators: Vec<SymplecticMatrix>,
    pub solution: SiegelPoint,
    /// max |F_R(Z)| per generator.
    pub residuals: Vec<f64>,
    /// Rank of the Jacobian of the stacked residual at the solution.
    pub jacobian_rank: usize,
    /// g(g+1)/2 − rank: dimension of the local solution family.
    pub family_dim: usize,
    pub starts: usize,
    pub converged_starts: usize,
    /// Converged starts with Im ≻ 0.
    pub admissible_starts: usize,
    /// Number of distinct admissible solutions found.
    pub distinct_admissible: usize,
    pub seed: u64,
}

impl FixedPointReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn fixed_points(generators: &[SymplecticMatrix], starts: usize, seed: u64) -> Result<FixedPointReport> {
    let g = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?.genus();
    if g > 8 {
        return invalid(format!("genus {g} above 8"));
    }
    if generators.iter().any(|r| r.genus() != g || !r.is_symplectic()) {
        return invalid("every generator must be symplectic of the same size");
    }
    if starts == 0 {
        return invalid("at least one start is needed");
    }
    let blocks: Vec<Blocks> = generators
        .iter()
        .map(|r| {
            let (a, b, c, d) = r.blocks();
            Blocks { a, b, c, d }
        })
        .collect();
    let runs: Vec<(CMat, f64)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            newton(&blocks, random_start(g, &mut rng), 100)
        })
        .collect();
    let converged: Vec<&(CMat, f64)> = runs.iter().filter(|(_, r)| *r < RESIDUAL_TOL).collect();
    let mut admissible: Vec<(SiegelPoint, f64)> = converged
        .iter()
        .filter_map(|(z, r)| SiegelPoint::new(z.clone()).ok().map(|p| (p, *r)))
        .collect();
    if admissible.is_empty() {
        return Err(Error::NoSolution(format!(
            "{} of {starts} starts converged, none with positive definite imaginary part",
            converged.len()
        )));
    }
    let key = |p: &SiegelPoint| -> Vec<f64> { p.matrix().iter().flat_map(|v| [v.re, v.im]).collect() };
    admissible.sort_by(|(p, r), (q, s)| {
        r.partial_cmp(s)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| key(p).partial_cmp(&key(q)).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut distinct: Vec<&SiegelPoint> = Vec::new();
    for (p, _) in &admissible {
        if !distinct.iter().any(|d| (d.matrix() - p.matrix()).iter().all(|v| v.norm() < 1e-7)) {
            distinct.push(p);
        }
    }
    let solution = admissible[0].0.clone();
    let residuals: Vec<f64> = blocks
        .iter()
        .map(|bl| residual_matrix(bl, solution.matrix()).iter().map(|v| v.norm()).fold(0.0, f64::max))
        .collect();
    let sv = jacobian(&blocks, solution.matrix()).svd(false, false).singular_values;
    let smax = sv.max();
    let rank = if smax == 0.0 { 0 } else { sv.iter().filter(|&&s| s > 1e-8 * smax.max(1.0)).count() };
    let unknowns = g * (g + 1) / 2;
    Ok(FixedPointReport {
        generators: generators.to_vec(),
        residuals,
        jacobian_rank: rank,
        family_dim: unknowns - rank,
        starts,
        converged_starts: converged.len(),
        admissible_starts: admissible.len(),
        distinct_admissible: distinct.len(),
        seed,
        solution,
    })
}

/// The two generators of the genus-4 Accola–Maclachlan action in
/// Sp(8, Z), images of x⁻¹ and zx, as published with the period matrix.
pub fn am_generators() -> [SymplecticMatrix; 2] {
    let x_inv = vec![
        vec![0, 1, 1, 1, -1, 0, 0, 0],
        vec![1, 0, 0, 0, 0, -1, 0, 0],
        vec![0, 0, 0, 0, 0, 1, -1, 0],
        vec![0, 0, 0, 0, 0, 0, 1, -1],
        vec![1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0, 0, 0],
    ];
    let zx = vec![
        vec![0, 0, 1, 0, 0, 0, 0, 0],
        vec![1, 0, 0, 0, 0, -1, 0, 0],
        vec![-1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 0, -1, 1, 0],
        vec![0, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 0, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 0, 0, 0, 0],
    ];
    [SymplecticMatrix::from_rows(&x_inv).expect("8x8"), SymplecticMatrix::from_rows(&zx).expect("8x8")]
}

/// s = √(2/5·√5 + 5).
fn s_const() -> f64 {
    (0.4 * 5f64.sqrt() + 5.0).sqrt()
}

/// The closed-form period matrix of the genus-4 Accola–Maclachlan curve.
pub fn am_closed_form() -> CMat {
    let s = s_const();
    let s3 = s * s * s;
    let r5 = 5f64.sqrt();
    let i = |v: f64| Complex64::new(0.0, v);
    let z11 = i(25.0 / 22.0 * s3 - 70.0 / 11.0 * s);
    let z12 = c(r5 / 2.0 - 1.5);
    let z13 = c(-r5 / 2.0 + 1.0);
    let z22 = i(-5.0 / 22.0 * s3 + 39.0 / 22.0 * s);
    let z23 = i(5.0 / 44.0 * s3 - 39.0 / 44.0 * s);
    let z24 = i(25.0 / 44.0 * s3 - 151.0 / 44.0 * s);
    let z33 = i(s / 2.0);
    let z34 = i(-15.0 / 22.0 * s3 + 42.0 / 11.0 * s);
    CMat::from_row_slice(4, 4, &[z11, z12, z13, z13, z12, z22, z23, z24, z13, z23, z33, z34, z13, z24, z34, z33])
}

/// Roots k₁, k₂, k₃, k₄ of k⁴ + 5/2·k² + 121/80 = 0 in the published order.
pub fn quartic_roots() -> [Complex64; 4] {
    let r5 = 5f64.sqrt();
    let plus = 0.5 * (0.4 * r5 + 5.0).sqrt();
    let minus = 0.5 * (-0.4 * r5 + 5.0).sqrt();
    [Complex64::new(0.0, -plus), Complex64::new(0.0, plus), Complex64::new(0.0, -minus), Complex64::new(0.0, minus)]
}

pub fn quartic(k: Complex64) -> Complex64 {
    k.powi(4) + k * k * 2.5 + c(121.0 / 80.0)
}

/// The entries a … j as functions of k.
fn relation_values(k: Complex64) -> [(&'static str, Complex64); 10] {
    let k2 = k * k;
    let k3 = k2 * k;
    [
        ("a", k3 * (-100.0 / 11.0) + k * (-140.0 / 11.0)),
        ("b", k2 * -5.0 - c(31.0 / 4.0)),
        ("c", k2 * 5.0 + c(29.0 / 4.0)),
        ("d", k2 * 5.0 + c(29.0 / 4.0)),
        ("e", k3 * (20.0 / 11.0) + k * (39.0 / 11.0)),
        ("f", k3 * (-10.0 / 11.0) + k * (-39.0 / 22.0)),
        ("g", k3 * (-50.0 / 11.0) + k * (-151.0 / 22.0)),
        ("h", k),
        ("j", k3 * (60.0 / 11.0) + k * (84.0 / 11.0)),
        ("k", k),
    ]
}

const ENTRY_POS: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// The symmetric matrix the relations assign to a value of k.
pub fn am_relation_point(k: Complex64) -> CMat {
    let mut z = CMat::zeros(4, 4);
    for ((_, v), &(r, col)) in relation_values(k).iter().zip(&ENTRY_POS) {
        z[(r, col)] = *v;
        z[(col, r)] = *v;
    }
    z
}

/// Outcome of substituting k = Z₄₄ into the relations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationCheck {
    pub k: [f64; 2],
    /// (entry name, |entry − relation(k)|).
    pub relations: Vec<(String, f64)>,
    pub quartic: f64,
    pub im_a: f64,
    /// det Im of the top-left 2×2 block.
    pub delta: f64,
}

impl RelationCheck {
    pub fn relations_hold(&self) -> bool {
        self.quartic < ENTRY_TOL && self.relations.iter().all(|(_, e)| *e < ENTRY_TOL)
    }

    /// Im(a) > 0 first, then δ > 0.
    pub fn admissible(&self) -> bool {
        self.im_a > 0.0 && self.delta > 0.0
    }

    pub fn holds(&self) -> bool {
        self.relations_hold() && self.admissible()
    }
}

pub fn verify_am_relations(z: &CMat) -> Result<RelationCheck> {
    if z.nrows() != 4 || z.ncols() != 4 {
        return invalid("the relations are stated for genus 4");
    }
    let k = z[(3, 3)];
    let relations = relation_values(k)
        .iter()
        .zip(&ENTRY_POS)
        .map(|((name, v), &(r, col))| (name.to_string(), (z[(r, col)] - v).norm()))
        .collect();
    let a = z[(0, 0)];
    let (b, e) = (z[(0, 1)], z[(1, 1)]);
    let delta = a.im * e.im - b.im * b.im;
    Ok(RelationCheck { k: [k.re, k.im], relations, quartic: quartic(k).norm(), im_a: a.im, delta })
}

/// Verdict of the two-stage filter on each root.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootVerdict {
    pub name: String,
    pub k: [f64; 2],
    pub im_a: f64,
    pub delta: f64,
    pub accepted: bool,
}

pub fn root_filter() -> Vec<RootVerdict> {
    quartic_roots()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let check = verify_am_relations(&am_relation_point(k)).expect("4x4");
            RootVerdict { name: format!("k{}", i + 1), k: [k.re, k.im], im_a: check.im_a, delta: check.delta, accepted: check.admissible() }
        })
        .collect()
}

/// Solved period matrix with every published check attached.
#[derive(Clone, Debug)]
pub struct PeriodMatrixReport {
    pub fixed: FixedPointReport,
    pub relations: RelationCheck,
    /// Largest |Z − closed form| entry.
    pub closed_form_error: f64,
    pub roots: Vec<RootVerdict>,
    pub convention: ActionConvention,
}

impl PeriodMatrixReport {
    pub fn passes(&self) -> bool {
        self.fixed.max_residual() < RESIDUAL_TOL
            && self.closed_form_error < ENTRY_TOL
            && self.relations.holds()
            && self.fixed.solution.min_im_eigenvalue() > POSITIVITY_TOL
            && self.roots.iter().map(|r| r.accepted).collect::<Vec<_>>() == [false, true, false, false]
    }
}

pub fn am_period_matrix(starts: usize, seed: u64) -> Result<PeriodMatrixReport> {
    let gens = am_generators();
    if !gens.iter().all(SymplecticMatrix::is_symplectic) {
        return Err(Error::CrossCheck("published generators are not symplectic".into()));
    }
    let fixed = fixed_points(&gens, starts, seed)?;
    let relations = verify_am_relations(fixed.solution.matrix())?;
    let closed_form_error = (fixed.solution.matrix() - am_closed_form()).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let convention = probe_convention(&gens[0], &gens[1], &fixed.solution)?;
    Ok(PeriodMatrixReport { fixed, relations, closed_form_error, roots: root_filter(), convention })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_examples() {
        assert!(SymplecticMatrix::j(3).is_symplectic());
        assert!(SymplecticMatrix::identity(4).is_symplectic());
        for r in am_generators() {
            assert!(r.is_symplectic());
            let inv = r.inverse().unwrap();
            assert_eq!(r.mul(&inv).unwrap(), SymplecticMatrix::identity(4));
        }
        assert!(is_symplectic(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).is_err());
        assert!(!is_symplectic(&[vec![2, 0], vec![0, 1]]).unwrap());
    }

    #[test]
    fn closed_form_satisfies_relations() {
        let z = am_closed_form();
        let check = verify_am_relations(&z).unwrap();
        assert!(check.holds(), "{check:?}");
        assert!((z[(0, 1)].re - (-0.381966)).abs() < 1e-6);
        assert!((z[(2, 2)].im - 1.2139).abs() < 1e-4);
        let p = SiegelPoint::new(z).unwrap();
        for r in am_generators() {
            let moved = act(&r, &p).unwrap();
            assert!((moved.matrix() - p.matrix()).iter().all(|v| v.norm() < 1e-9));
        }
    }

    #[test]
    fn root_filter_keeps_only_k2() {
        let accepted: Vec<bool> = root_filter().iter().map(|r| r.accepted).collect();
        assert_eq!(accepted, vec![false, true, false, false]);
        let roots = root_filter();
        assert!(roots[0].im_a <= 0.0 && roots[3].im_a <= 0.0);
        assert!(roots[2].im_a > 0.0 && roots[2].delta <= 0.0);
        let k3 = verify_am_relations(&am_relation_point(quartic_roots()[2])).unwrap();
        assert!(k3.relations_hold() && !k3.holds());
        let zero = verify_am_relations(&am_relation_point(c(0.0))).unwrap();
        assert!(!zero.holds());
    }

    #[test]
    fn identity_is_fully_degenerate() {
        let rep = fixed_points(&[SymplecticMatrix::identity(3)], 2, 1).unwrap();
        assert_eq!(rep.jacobian_rank, 0);
        assert_eq!(rep.family_dim, 6);
    }

    #[test]
    fn action_round_trip() {
        let p = SiegelPoint::new(am_closed_form()).unwrap();
        let [r1, r2] = am_generators();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = SiegelPoint::new(random_start(4, &mut rng)).unwrap();
        let back = act(&r1, &act(&r1.inverse().unwrap(), &q).unwrap()).unwrap();
        assert!((back.matrix() - q.matrix()).iter().all(|v| v.norm() < 1e-10));
        assert_eq!(probe_convention(&r1, &r2, &q).unwrap(), ActionConvention::Right);
        assert!(act(&SymplecticMatrix::identity(4), &p).is_ok());
    }
}
