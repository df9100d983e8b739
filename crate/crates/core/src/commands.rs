//! Report builders behind the `equisym` command line tool. Each command
//! returns a serializable report and renders it as a table or as JSON.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curves::{curve_model, CurveFamily, CurveModel};
use crate::error::{invalid, Error, Result};
use crate::group::{build_group, FiniteGroup, GroupSpec};
use crate::jacobian::{chevalley_weil, group_algebra_decomposition, moduli_fixed_dim_on, quotient_decomposition, IsogenyFactor, NsReport, QuotientFactor};
use crate::characters::{rational_irreps, CharRow, RationalIrrep};
use crate::siegel::{self, matrix_to_pairs, ActionConvention, RelationCheck, RootVerdict, SymplecticMatrix};
use crate::signature::{format_periods, lambda_feasibility, teich_dim, Signature};
use crate::vectors::{orbits, orbits_plain, GeneratingVector, VectorJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Error::Invalid(format!("serialization failed: {e}")))
}

/// Builds the single group a spec names.
pub fn load_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    let spec: GroupSpec = spec.parse()?;
    let mut groups = build_group(&spec)?;
    if groups.len() != 1 {
        return invalid(format!("{spec} names {} groups, expected one", groups.len()));
    }
    Ok(Arc::new(groups.pop().expect("one group")))
}

/// Periods in the given order; only orbit genus zero is handled.
fn ordered_periods(sigma: &str) -> Result<Vec<u32>> {
    let (gamma, periods) = Signature::parse_ordered(sigma)?;
    if gamma != 0 {
        return Err(Error::Unsupported("only genus-zero quotients are supported".into()));
    }
    Ok(periods)
}

/// The vector given by comma separated element words, or one
/// representative per topological class.
pub fn select_vectors(group: &Arc<FiniteGroup>, sigma: &str, images: Option<&str>) -> Result<Vec<GeneratingVector>> {
    let periods = ordered_periods(sigma)?;
    match images {
        Some(text) => {
            let images = text.split(',').map(|w| group.parse_element(w)).collect::<Result<Vec<_>>>()?;
            Ok(vec![GeneratingVector::new(group.clone(), periods, images)?])
        }
        None => {
            let sig = Signature::genus_zero(&periods)?;
            Ok(orbits_plain(group, &sig)?.orbits.into_iter().map(|o| o.representative).collect())
        }
    }
}

fn subgroup_of(group: &FiniteGroup, gens: &str) -> Result<Vec<usize>> {
    let gens = gens.split(',').map(|w| group.parse_element(w)).collect::<Result<Vec<_>>>()?;
    Ok(group.subgroup_generated(&gens))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRow {
    pub group: String,
    pub order: usize,
    pub signature: Signature,
    pub teich_dim: i64,
    pub orbits: usize,
    /// Orbits whose whole stratum lies in a larger action's stratum.
    pub extendable: usize,
    pub family: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaRow {
    pub lambda: u32,
    pub groups_examined: usize,
    pub pairs: Vec<PairRow>,
}

/// Counts of surfaces and strata per family.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StrataSummary {
    pub x8: usize,
    pub x4: usize,
    pub x3: usize,
    pub x2k: usize,
    pub k_strata: usize,
    pub c_strata: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub q: u32,
    pub genus: u32,
    pub realizable: Vec<u32>,
    pub lambdas: Vec<LambdaRow>,
    pub summary: StrataSummary,
}

/// Family a pair's strata belong to. Abelian (0;2,2,q,q) actions and
/// (0;4,4,q) actions with B A B⁻¹ = A⁻¹ extend to the λ = 4 and λ = 8
/// families respectively.
fn family_of(lambda: u32, q: u32, group: &FiniteGroup, label: &str, periods: &[u32]) -> Option<&'static str> {
    let p = periods;
    match lambda {
        8 if p == [2, 4, 2 * q] => Some("X8"),
        4 if p == [4, 4, q] && label == format!("CqC4:q={q},rho={}", q - 1) => Some("X8"),
        4 if p == [4, 4, q] => Some("X4"),
        4 if p == [2, 2, 2, q] => Some("C_g"),
        4 if p == [2, 2 * q, 2 * q] => Some("X8"),
        3 if p == [3, q, 3 * q] => Some("X3"),
        2 if p == [q, 2 * q, 2 * q] => Some("X2k"),
        2 if p == [2, 2, q, q] && group.is_abelian() => Some("C_g"),
        2 if p == [2, 2, q, q] => Some("K_g"),
        _ => None,
    }
}

/// λ-classification for a prime 7 ≤ q ≤ 23 with orbit counts per pair.
pub fn classify(q: u32) -> Result<ClassifyReport> {
    if !(7..=23).contains(&q) {
        return invalid(format!("q = {q} outside the supported range 7..=23"));
    }
    let feas = lambda_feasibility(q)?;
    let mut summary = StrataSummary::default();
    let mut lambdas = Vec::new();
    for v in &feas.verdicts {
        let mut pairs = Vec::new();
        for p in &v.pairs {
            let rep = orbits(&p.group, &p.signature)?;
            let family = family_of(v.lambda, q, &p.group, &p.label, &p.signature.periods);
            let (n, ext) = (rep.count(), rep.extendable_count());
            match family {
                Some("X8") if v.lambda == 8 => summary.x8 += n,
                Some("X4") => summary.x4 += n - ext,
                Some("C_g") if v.lambda == 4 => summary.c_strata += n,
                Some("X3") => summary.x3 += n,
                Some("X2k") => summary.x2k += n - ext,
                Some("K_g") => summary.k_strata += n,
                _ => {}
            }
            pairs.push(PairRow {
                group: p.label.clone(),
                order: p.group.order(),
                signature: p.signature.clone(),
                teich_dim: teich_dim(&p.signature)?,
                orbits: n,
                extendable: ext,
                family: family.map(str::to_string),
            });
        }
        lambdas.push(LambdaRow { lambda: v.lambda, groups_examined: v.groups_examined, pairs });
    }
    Ok(ClassifyReport { q, genus: q - 1, realizable: feas.realizable(), lambdas, summary })
}

pub fn render_classify(r: &ClassifyReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    let realizable: Vec<String> = r.realizable.iter().map(|l| l.to_string()).collect();
    writeln!(out, "q = {}, genus {}", r.q, r.genus).unwrap();
    writeln!(out, "realizable lambda: {{{}}}", realizable.join(",")).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:>6}  {:<24} {:<16} {:>4} {:>6} {:>10}  family", "lambda", "group", "signature", "dim", "orbits", "extendable").unwrap();
    for l in &r.lambdas {
        if l.pairs.is_empty() {
            writeln!(out, "{:>6}  (none; {} groups examined)", l.lambda, l.groups_examined).unwrap();
        }
        for p in &l.pairs {
            writeln!(
                out,
                "{:>6}  {:<24} {:<16} {:>4} {:>6} {:>10}  {}",
                l.lambda,
                p.group,
                p.signature.to_string(),
                p.teich_dim,
                p.orbits,
                p.extendable,
                p.family.as_deref().unwrap_or("-")
            )
            .unwrap();
        }
    }
    let s = &r.summary;
    writeln!(out).unwrap();
    writeln!(out, "X8: {}  X4: {}  X3: {}  X2k: {}  K strata: {}  C strata: {}", s.x8, s.x4, s.x3, s.x2k, s.k_strata, s.c_strata).unwrap();
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRow {
    pub representative: VectorJson,
    pub words: String,
    pub size: usize,
    pub merged_class: usize,
    pub extendable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitsReport {
    pub group: String,
    pub signature: Signature,
    pub total: usize,
    pub orbits: Vec<OrbitRow>,
    pub merged_count: usize,
}

pub fn orbit_report(group: &str, sigma: &str) -> Result<OrbitsReport> {
    let g = load_group(group)?;
    let sig = Signature::genus_zero(&ordered_periods(sigma)?)?;
    let rep = orbits(&g, &sig)?;
    let rows = rep
        .orbits
        .iter()
        .map(|o| OrbitRow {
            representative: o.representative.to_json(),
            words: o.representative.describe(),
            size: o.size,
            merged_class: o.merged_class,
            extendable: o.extendable(),
            extension: o.extension.as_ref().map(|e| {
                let kind = if e.whole_stratum { "stratum" } else { "isolated" };
                format!("{} {} via {}", kind, e.ambient_label, e.recipe)
            }),
        })
        .collect();
    Ok(OrbitsReport { group: g.spec().to_string(), signature: sig, total: rep.total, orbits: rows, merged_count: rep.merged_count })
}

pub fn render_orbits(r: &OrbitsReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    writeln!(out, "{} acting with {}: {} vectors, {} classes, {} after normalizer identification", r.group, r.signature, r.total, r.orbits.len(), r.merged_count).unwrap();
    for (i, o) in r.orbits.iter().enumerate() {
        writeln!(out, "{:>3}  {:<32} size {:>6}  class {}  {}", i, o.words, o.size, o.merged_class, o.extension.as_deref().unwrap_or("not extendable")).unwrap();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuEntry {
    pub irrep: String,
    pub mu: u32,
}

/// μ as a JSON object keyed by character label, in table order.
mod mu_map {
    use super::MuEntry;
    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(entries: &[MuEntry], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(entries.len()))?;
        for e in entries {
            map.serialize_entry(&e.irrep, &e.mu)?;
        }
        map.end()
    }

    struct Entries;

    impl<'de> Visitor<'de> for Entries {
        type Value = Vec<MuEntry>;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a map from character labels to multiplicities")
        }
        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Vec<MuEntry>, A::Error> {
            let mut out = Vec::new();
            while let Some((irrep, mu)) = access.next_entry::<String, u32>()? {
                out.push(MuEntry { irrep, mu });
            }
            Ok(out)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<MuEntry>, D::Error> {
        d.deserialize_map(Entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientReport {
    pub subgroup_order: usize,
    pub factors: Vec<QuotientFactor>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JacobianReport {
    pub vector: VectorJson,
    pub words: String,
    #[serde(with = "mu_map")]
    pub mu: Vec<MuEntry>,
    pub factors: Vec<IsogenyFactor>,
    #[serde(rename = "N")]
    pub n: u32,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientReport>,
}

pub fn jacobian_report(v: &GeneratingVector, quotient: Option<&str>) -> Result<JacobianReport> {
    let d = group_algebra_decomposition(v)?;
    let g = v.group();
    let all: Vec<usize> = (0..g.order()).collect();
    let ns = moduli_fixed_dim_on(g, &d.analytic.character, &all)?;
    let quotient = match quotient {
        Some(gens) => {
            let h = subgroup_of(g, gens)?;
            Some(QuotientReport { subgroup_order: h.len(), factors: quotient_decomposition(&d, &h)? })
        }
        None => None,
    };
    Ok(JacobianReport {
        vector: v.to_json(),
        words: v.describe(),
        mu: d.analytic.mu.iter().map(|(l, m)| MuEntry { irrep: l.clone(), mu: *m }).collect(),
        summary: d.summary(),
        factors: d.factors,
        n: ns.n,
        quotient,
    })
}

pub fn decompose(group: &str, sigma: &str, images: Option<&str>, quotient: Option<&str>) -> Result<Vec<JacobianReport>> {
    let g = load_group(group)?;
    select_vectors(&g, sigma, images)?.iter().map(|v| jacobian_report(v, quotient)).collect()
}

pub fn render_decompose(reports: &[JacobianReport], format: Format) -> Result<String> {
    if format == Format::Json {
        return json(&reports);
    }
    let mut out = String::new();
    for r in reports {
        writeln!(out, "vector {} on {} in {}", r.words, r.vector.sigma, r.vector.group).unwrap();
        let mu: Vec<String> = r.mu.iter().filter(|m| m.mu > 0).map(|m| format!("{}:{}", m.irrep, m.mu)).collect();
        writeln!(out, "  mu      {}", mu.join(" ")).unwrap();
        for f in r.factors.iter().filter(|f| f.dim_b > 0) {
            writeln!(out, "  factor  {:<20} n = {}  dim B = {}  ({})", f.irrep, f.n, f.dim_b, f.constituents.join(",")).unwrap();
        }
        writeln!(out, "  {}", r.summary).unwrap();
        writeln!(out, "  N = {}", r.n).unwrap();
        if let Some(q) = &r.quotient {
            let parts: Vec<String> = q.factors.iter().filter(|f| f.dim_b > 0).map(|f| format!("{}^{} (dim {})", f.irrep, f.exponent, f.dim_b)).collect();
            writeln!(out, "  quotient by a subgroup of order {}: {}", q.subgroup_order, parts.join(" x ")).unwrap();
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsEntry {
    pub vector: VectorJson,
    pub words: String,
    #[serde(flatten)]
    pub report: NsReport,
}

pub fn ns(group: &str, sigma: &str, images: Option<&str>, subgroup: Option<&str>) -> Result<Vec<NsEntry>> {
    let g = load_group(group)?;
    let h = match subgroup {
        Some(gens) => subgroup_of(&g, gens)?,
        None => (0..g.order()).collect(),
    };
    select_vectors(&g, sigma, images)?
        .into_iter()
        .map(|v| {
            let a = chevalley_weil(&v)?;
            let report = moduli_fixed_dim_on(&g, &a.character, &h)?;
            Ok(NsEntry { vector: v.to_json(), words: v.describe(), report })
        })
        .collect()
}

pub fn render_ns(entries: &[NsEntry], format: Format) -> Result<String> {
    if format == Format::Json {
        return json(&entries);
    }
    let mut out = String::new();
    for e in entries {
        writeln!(
            out,
            "{} on {}: N = {}  (direct {}, via conjugate sum {}, |H| = {})",
            e.words, e.vector.sigma, e.report.n, e.report.direct, e.report.via_conjugate_sum, e.report.subgroup_order
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodMatrixOutput {
    pub generators: Vec<SymplecticMatrix>,
    #[serde(rename = "Z")]
    pub z: Vec<Vec<[f64; 2]>>,
    pub residuals: Vec<f64>,
    pub min_im_eigenvalue: f64,
    pub symmetry_defect: f64,
    pub jacobian_rank: usize,
    pub family_dim: usize,
    pub starts: usize,
    pub converged_starts: usize,
    pub admissible_starts: usize,
    pub distinct_admissible: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootVerdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<ActionConvention>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passes: Option<bool>,
}

fn output_of(fixed: &siegel::FixedPointReport) -> PeriodMatrixOutput {
    PeriodMatrixOutput {
        generators: fixed.generators.clone(),
        z: matrix_to_pairs(fixed.solution.matrix()),
        residuals: fixed.residuals.clone(),
        min_im_eigenvalue: fixed.solution.min_im_eigenvalue(),
        symmetry_defect: fixed.solution.symmetry_defect(),
        jacobian_rank: fixed.jacobian_rank,
        family_dim: fixed.family_dim,
        starts: fixed.starts,
        converged_starts: fixed.converged_starts,
        admissible_starts: fixed.admissible_starts,
        distinct_admissible: fixed.distinct_admissible,
        seed: fixed.seed,
        relations: None,
        closed_form_error: None,
        roots: None,
        convention: None,
        passes: None,
    }
}

/// The genus 4 Accola–Maclachlan period matrix with all checks; a failed
/// check is a cross-check error.
pub fn period_matrix_am(genus: u32, starts: usize, seed: u64) -> Result<PeriodMatrixOutput> {
    if genus != 4 {
        return Err(Error::Unsupported(format!("the symplectic generators are available for genus 4 only, not {genus}")));
    }
    let rep = siegel::am_period_matrix(starts, seed)?;
    let mut out = output_of(&rep.fixed);
    let passes = rep.passes();
    out.relations = Some(rep.relations);
    out.closed_form_error = Some(rep.closed_form_error);
    out.roots = Some(rep.roots);
    out.convention = Some(rep.convention);
    out.passes = Some(passes);
    Ok(out)
}

/// Common fixed point of generators read from JSON integer arrays.
pub fn period_matrix_from(generators_json: &str, starts: usize, seed: u64) -> Result<PeriodMatrixOutput> {
    let gens: Vec<SymplecticMatrix> =
        serde_json::from_str(generators_json).map_err(|e| Error::Invalid(format!("cannot read generators: {e}")))?;
    Ok(output_of(&siegel::fixed_points(&gens, starts, seed)?))
}

fn fmt_c(p: [f64; 2]) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(p[0]), clean(p[1]));
    format!("{re:>10.6}{}{:.6}i", if im < 0.0 { "-" } else { "+" }, im.abs())
}

pub fn render_period_matrix(r: &PeriodMatrixOutput, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    writeln!(out, "Z =").unwrap();
    for row in &r.z {
        let cells: Vec<String> = row.iter().map(|&p| fmt_c(p)).collect();
        writeln!(out, "  {}", cells.join("  ")).unwrap();
    }
    let res: Vec<String> = r.residuals.iter().map(|x| format!("{x:.1e}")).collect();
    writeln!(out, "residuals          {}", res.join(" ")).unwrap();
    writeln!(out, "min eig Im Z       {:.6}", r.min_im_eigenvalue).unwrap();
    writeln!(out, "jacobian rank      {} (family dimension {})", r.jacobian_rank, r.family_dim).unwrap();
    writeln!(out, "starts             {} converged, {} admissible, {} distinct of {} (seed {})", r.converged_starts, r.admissible_starts, r.distinct_admissible, r.starts, r.seed).unwrap();
    if let Some(rel) = &r.relations {
        writeln!(out, "k                  {}", fmt_c(rel.k)).unwrap();
        let worst = rel.relations.iter().map(|(_, e)| *e).fold(rel.quartic, f64::max);
        writeln!(out, "relations          worst error {worst:.1e}, Im a = {:.6}, delta = {:.6}", rel.im_a, rel.delta).unwrap();
    }
    if let Some(e) = r.closed_form_error {
        writeln!(out, "closed form error  {e:.1e}").unwrap();
    }
    if let Some(roots) = &r.roots {
        for v in roots {
            writeln!(out, "root {}  {}  Im a = {:>9.5}  delta = {:>9.5}  {}", v.name, fmt_c(v.k), v.im_a, v.delta, if v.accepted { "accepted" } else { "rejected" }).unwrap();
        }
    }
    if let Some(c) = r.convention {
        writeln!(out, "action convention  {c:?}").unwrap();
    }
    if let Some(p) = r.passes {
        writeln!(out, "checks             {}", if p { "pass" } else { "FAIL" }).unwrap();
    }
    Ok(out)
}

pub fn curve(tag: &str, q: u32) -> Result<CurveModel> {
    curve_model(tag.parse::<CurveFamily>()?, q)
}

pub fn render_curve(m: &CurveModel, format: Format) -> Result<String> {
    match format {
        Format::Json => json(m),
        Format::Table => Ok(m.to_string()),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharactersReport {
    pub group: String,
    pub order: usize,
    pub classes: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub characters: Vec<CharRow>,
    pub rational: Vec<RationalIrrep>,
}

pub fn characters(group: &str) -> Result<CharactersReport> {
    let g = load_group(group)?;
    let table = g.char_table()?;
    Ok(CharactersReport {
        group: g.spec().to_string(),
        order: g.order(),
        classes: table.class_reps().iter().map(|&x| g.element_name(x)).collect(),
        class_sizes: table.classes().iter().map(Vec::len).collect(),
        characters: table.rows(),
        rational: rational_irreps(&g)?,
    })
}

pub fn render_characters(r: &CharactersReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let g = load_group(&r.group)?;
    let table = g.char_table()?;
    let reps = table.class_reps();
    let mut out = String::new();
    writeln!(out, "{} (order {}), {} classes", r.group, r.order, r.classes.len()).unwrap();
    writeln!(out, "classes: {}", r.classes.iter().zip(&r.class_sizes).map(|(c, s)| format!("{c}[{s}]")).collect::<Vec<_>>().join(" ")).unwrap();
    for chi in table.chars() {
        let vals: Vec<String> = reps.iter().map(|&x| chi.value(x).render_complex()).collect();
        writeln!(out, "{:<14} {}", chi.label(), vals.join("  ")).unwrap();
    }
    writeln!(out).unwrap();
    for w in &r.rational {
        writeln!(out, "{:<16} m = {:<3} d = {:<2} s = {}  [{}]", w.label, w.m, w.d, w.schur, w.constituent_labels.join(",")).unwrap();
    }
    Ok(out)
}

/// Signature text in canonical order.
pub fn canonical_signature(sigma: &str) -> Result<String> {
    let (gamma, mut periods) = Signature::parse_ordered(sigma)?;
    periods.sort_unstable();
    Ok(format_periods(gamma, &periods))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_words() {
        let g = load_group("AM:q=5").unwrap();
        let zx = g.parse_element("zx").unwrap();
        assert_eq!(zx, g.mul(g.gen("z").unwrap(), g.gen("x").unwrap()));
        assert_eq!(g.element_order(zx), 4);
        assert_eq!(g.parse_element("x^-1").unwrap(), g.inv(g.gen("x").unwrap()));
        assert_eq!(g.parse_element("x^(-1)").unwrap(), g.inv(g.gen("x").unwrap()));
        assert_eq!(g.parse_element("1").unwrap(), 0);
        assert!(g.parse_element("w").is_err());
        for e in 0..g.order() {
            assert_eq!(g.parse_element(&g.element_name(e)).unwrap(), e);
        }
    }

    #[test]
    fn decompose_named_vector() {
        let r = decompose("AM:q=5", "(0;2,4,10)", Some("z,zx,x^-1"), Some("z")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].n, 0);
        assert_eq!(r[0].summary, "JS ~ B^2, dim B = 2");
        let q = r[0].quotient.as_ref().unwrap();
        assert!(q.factors.iter().filter(|f| f.dim_b > 0).all(|f| f.exponent == 1));
        assert!(decompose("AM:q=5", "(0;2,4,10)", Some("z,z,x"), None).is_err());
    }

    #[test]
    fn classify_range() {
        assert!(classify(6).is_err());
        assert!(classify(29).is_err());
    }

    #[test]
    fn json_shapes() {
        let r = decompose("D:5x2", "(0;2,2,2,5)", None, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&render_decompose(&r, Format::Json).unwrap()).unwrap();
        let first = &v[0];
        for key in ["vector", "mu", "factors", "N"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert!(first["factors"][0].get("dimB").is_some());
        let back: VectorJson = serde_json::from_value(first["vector"].clone()).unwrap();
        assert!(GeneratingVector::from_json(&back).is_ok());
        assert_eq!(canonical_signature("(0;10,2,4)").unwrap(), "(0;2,4,10)");
    }
}
