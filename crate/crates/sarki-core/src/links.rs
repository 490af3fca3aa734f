//! Sarkisov links between minimal models: the type II solver and its filters,
//! types I, III and IV, links over curves, and the global link graph.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    all_families, allowed_point_degrees, BundleBase, Closure, FamilyTag, FieldProfile, GeometricClass,
    MinimalModel, ModelKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("({k2}, {lambda}, {h2}) is not a valid normalization")]
    BadNormalization { k2: i64, lambda: i64, h2: i64 },
    #[error("point degree {a} out of range 1..{k2}")]
    BadDegree { a: i64, k2: i64 },
    #[error("{0}")]
    Constraint(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkType {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeIIPoint,
    #[serde(rename = "II/curve")]
    TypeIICurve,
    #[serde(rename = "III")]
    TypeIII,
    #[serde(rename = "IV")]
    TypeIV,
}

impl LinkType {
    pub fn name(&self) -> &'static str {
        match self {
            LinkType::TypeI => "I",
            LinkType::TypeIIPoint => "II",
            LinkType::TypeIICurve => "II/curve",
            LinkType::TypeIII => "III",
            LinkType::TypeIV => "IV",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Existence {
    Constructed,
    NumericOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkDescriptor {
    pub variant: LinkType,
    pub source: MinimalModel,
    pub target: MinimalModel,
    pub a: i64,
    pub b: i64,
    /// `E' = dH - mE` as `(d, m)`.
    pub eprime: Option<(i64, i64)>,
    /// Fibration class `C = uH - vE` of a type I link (or the inverse type III) as `(u, v)`.
    pub fibre_class: Option<(i64, i64)>,
    pub fibre_delta: Option<i64>,
    pub hirzebruch_shift: Option<(u32, u32)>,
    pub existence: Existence,
}

impl LinkDescriptor {
    fn new(variant: LinkType, source: MinimalModel, target: MinimalModel, a: i64, b: i64) -> Self {
        LinkDescriptor {
            variant,
            source,
            target,
            a,
            b,
            eprime: None,
            fibre_class: None,
            fibre_delta: None,
            hirzebruch_shift: None,
            existence: Existence::NumericOnly,
        }
    }

    /// Descriptor carrying only type, endpoints and degrees.
    pub fn bare(variant: LinkType, source: MinimalModel, target: MinimalModel, a: i64, b: i64) -> Self {
        Self::new(variant, source, target, a, b)
    }

    pub fn target_k2(&self) -> i64 {
        self.target.k2()
    }

    /// The same link read backwards.
    pub fn inverse(&self) -> LinkDescriptor {
        let mut inv = self.clone();
        inv.source = self.target.clone();
        inv.target = self.source.clone();
        inv.a = self.b;
        inv.b = self.a;
        inv.hirzebruch_shift = self.hirzebruch_shift.map(|(n, m)| (m, n));
        match self.variant {
            LinkType::TypeI => inv.variant = LinkType::TypeIII,
            LinkType::TypeIII => inv.variant = LinkType::TypeI,
            LinkType::TypeIIPoint => {
                inv.eprime = self.eprime.and_then(|(d, m)| {
                    let lambda = self.source.lambda()?;
                    reciprocal(&self.source, lambda, self.a, self.b, d, m).ok().map(|r| (r.1, r.2))
                });
            }
            _ => {}
        }
        inv
    }

    fn with_existence(mut self, field: &FieldProfile) -> Self {
        self.existence = existence(&self, field);
        self
    }
}

/// Whether a link of this kind is known to exist over an imperfect field of the profile.
pub fn existence(link: &LinkDescriptor, field: &FieldProfile) -> Existence {
    if field.closure != Closure::SeparablyClosed || field.characteristic == 0 {
        return Existence::NumericOnly;
    }
    let p = i64::from(field.characteristic);
    let constructed = match link.variant {
        LinkType::TypeI | LinkType::TypeIII => true,
        LinkType::TypeIIPoint => {
            let p2_self = link.source == MinimalModel::p2() && link.target == MinimalModel::p2();
            link.a <= 5 || (p2_self && link.a == link.b && matches!((p, link.a), (2, 8) | (3, 3) | (7, 7)))
        }
        _ => false,
    };
    if constructed {
        Existence::Constructed
    } else {
        Existence::NumericOnly
    }
}

/// A root of the type II quadratic before any geometric filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RawRow {
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub d: Ratio<i64>,
}

fn check_normalization(k2: i64, lambda: i64, h2: i64) -> Result<(), LinkError> {
    let ok = matches!((k2, lambda, h2), (9, 3, 1) | (8, 2, 2) | (9, 1, 9) | (8, 1, 8))
        || ((1..=6).contains(&k2) && lambda == 1 && h2 == k2);
    if ok {
        Ok(())
    } else {
        Err(LinkError::BadNormalization { k2, lambda, h2 })
    }
}

/// Positive integer roots `m` of `m^2 a(a-K^2) + 2abm + b(b+K^2) = 0` for every `b`,
/// with `d = (b + am) / (lambda H^2)` kept as a rational.
pub fn solve_type_II_raw(k2: i64, lambda: i64, h2: i64, a: i64) -> Result<Vec<RawRow>, LinkError> {
    check_normalization(k2, lambda, h2)?;
    if a < 1 || a >= k2 {
        return Err(LinkError::BadDegree { a, k2 });
    }
    let mut out = Vec::new();
    for b in 1..=(9 - k2 + a) {
        let qa = a * (a - k2);
        let qb = 2 * a * b;
        let qc = b * (b + k2);
        let disc = qb * qb - 4 * qa * qc;
        if disc < 0 {
            continue;
        }
        let s = disc.sqrt();
        if s * s != disc {
            continue;
        }
        let mut roots = BTreeSet::new();
        for num in [-qb + s, -qb - s] {
            if num % (2 * qa) == 0 {
                roots.insert(num / (2 * qa));
            }
        }
        for m in roots.into_iter().filter(|m| *m > 0) {
            let d = Ratio::new(b + a * m, lambda * h2);
            // K.E' = -b and E'^2 = -b
            let kdot = d * Ratio::from(-lambda * h2) + Ratio::from(a * m);
            let sq = d * d * Ratio::from(h2) - Ratio::from(a * m * m);
            if kdot == Ratio::from(-b) && sq == Ratio::from(-b) && d > Ratio::from(0) {
                out.push(RawRow { a, b, m, d });
            }
        }
    }
    Ok(out)
}

/// Rows `(b, m, d)` of the type II quadratic with integral `d`.
pub fn solve_type_II_quadratic(k2: i64, lambda: i64, h2: i64, a: i64) -> Result<Vec<(i64, i64, i64)>, LinkError> {
    Ok(solve_type_II_raw(k2, lambda, h2, a)?
        .into_iter()
        .filter(|r| r.d.is_integer())
        .map(|r| (r.b, r.m, r.d.to_integer()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RejectReason {
    SourceDegree,
    FieldProfile,
    NonIntegral,
    NoTargetFamily,
    NoReciprocal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub source: MinimalModel,
    pub row: RawRow,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TypeIIReport {
    pub accepted: Vec<LinkDescriptor>,
    pub rejected: Vec<Rejection>,
}

/// Target of the row and the `(b, a, d', m')` row of the way back.
fn reciprocal(
    source: &MinimalModel,
    lambda: i64,
    a: i64,
    b: i64,
    d: i64,
    m: i64,
) -> Result<(MinimalModel, i64, i64), RejectReason> {
    let h2 = source.h2().ok_or(RejectReason::NoTargetFamily)?;
    let k2t = source.k2() - a + b;
    // pull-back of -K on the target: (lambda + d) H - (1 + m) E
    let (pn, qn) = (lambda + d, 1 + m);
    let lt = pn.gcd(&qn);
    let target = MinimalModel::from_point_invariants(k2t, lt).ok_or(RejectReason::NoTargetFamily)?;
    let ht2 = pn * pn * h2 - qn * qn * a;
    if ht2 != target.h2().unwrap_or(0) * lt * lt {
        return Err(RejectReason::NoTargetFamily);
    }
    let (p, q) = (pn / lt, qn / lt);
    let det = p * m - d * q;
    if det <= 0 || d % det != 0 || p % det != 0 {
        return Err(RejectReason::NoReciprocal);
    }
    Ok((target, d / det, p / det))
}

fn point_sources() -> Vec<MinimalModel> {
    all_families()
        .into_iter()
        .filter(|m| m.is_point_family() && m.geometric_class == GeometricClass::Smooth && m.k2() >= 2)
        .collect()
}

/// All type II links between rank one del Pezzo surfaces over `field`, with every
/// solver root that the filters threw away.
type RowKey = (String, i64, i64, i64, i64);
type LiveRow = (MinimalModel, MinimalModel, RawRow, i64, i64);

pub fn type_II_report(field: &FieldProfile) -> TypeIIReport {
    let mut report = TypeIIReport::default();
    // (source family, a, b, d, m) -> (target, d', m')
    let mut alive: BTreeMap<RowKey, LiveRow> = BTreeMap::new();
    for source in point_sources() {
        let lambda = source.lambda().expect("point family");
        let h2 = source.h2().expect("point family");
        let divisor_ok = allowed_point_degrees(&source, &FieldProfile::arbitrary());
        for a in 1..source.k2() {
            let rows = solve_type_II_raw(source.k2(), lambda, h2, a).expect("catalog normalizations are valid");
            for row in rows {
                let reject = |reason| Rejection { source: source.clone(), row, reason };
                if !divisor_ok(row.a) {
                    report.rejected.push(reject(RejectReason::SourceDegree));
                    continue;
                }
                if !row.d.is_integer() {
                    report.rejected.push(reject(RejectReason::NonIntegral));
                    continue;
                }
                let d = row.d.to_integer();
                match reciprocal(&source, lambda, row.a, row.b, d, row.m) {
                    Err(reason) => report.rejected.push(reject(reason)),
                    Ok((target, d2, m2)) => {
                        let field_ok = source.exists_over(field)
                            && target.exists_over(field)
                            && field.allows_degree(row.a)
                            && field.allows_degree(row.b);
                        if !field_ok {
                            report.rejected.push(reject(RejectReason::FieldProfile));
                            continue;
                        }
                        let key = (source.family_name(), row.a, row.b, d, row.m);
                        alive.insert(key, (source.clone(), target, row, d2, m2));
                    }
                }
            }
        }
    }
    loop {
        let dead: Vec<_> = alive
            .iter()
            .filter(|(_, (_, target, row, d2, m2))| {
                !alive.contains_key(&(target.family_name(), row.b, row.a, *d2, *m2))
            })
            .map(|(k, _)| k.clone())
            .collect();
        if dead.is_empty() {
            break;
        }
        for k in dead {
            let (source, _, row, _, _) = alive.remove(&k).expect("present");
            report.rejected.push(Rejection { source, row, reason: RejectReason::NoReciprocal });
        }
    }
    for (source, target, row, _, _) in alive.into_values() {
        let d = row.d.to_integer();
        let mut link = LinkDescriptor::new(LinkType::TypeIIPoint, source.over(field), target.over(field), row.a, row.b);
        link.eprime = Some((d, row.m));
        report.accepted.push(link.with_existence(field));
    }
    report.accepted.sort_by_key(|l| (l.source.family_name(), l.a, l.b, l.eprime));
    report.rejected.sort_by(|x, y| {
        (x.source.family_name(), x.row.a, x.row.b).cmp(&(y.source.family_name(), y.row.a, y.row.b))
    });
    report
}

/// Type II links from a rank one del Pezzo surface, sorted by `(a, b, d, m)`.
pub fn enumerate_type_II_point(source: &MinimalModel, field: &FieldProfile) -> Vec<LinkDescriptor> {
    if !source.is_point_family() || source.geometric_class == GeometricClass::GeomNonNormal {
        return Vec::new();
    }
    let name = source.family_name();
    type_II_report(field)
        .accepted
        .into_iter()
        .filter(|l| l.source.family_name() == name)
        .collect()
}

/// Type I links out of a rank one del Pezzo surface (any field).
pub fn enumerate_type_I(source: &MinimalModel) -> Vec<LinkDescriptor> {
    if source.geometric_class == GeometricClass::GeomNonNormal {
        return Vec::new();
    }
    let cases: Vec<(i64, MinimalModel, (i64, i64))> = match source.kind {
        ModelKind::DelPezzoPoint { family: FamilyTag::P2, .. } => vec![
            (1, MinimalModel::hirzebruch(1), (1, 1)),
            (4, MinimalModel::conic(5), (2, 1)),
        ],
        ModelKind::DelPezzoPoint { family: FamilyTag::Quadric, .. } => {
            vec![(2, MinimalModel::conic(6), (1, 1))]
        }
        ModelKind::DelPezzoPoint { family: FamilyTag::DP8NonQuadric, .. } => {
            vec![(2, MinimalModel::conic_over(6, BundleBase::Pointless), (1, 2))]
        }
        ModelKind::DelPezzoPoint { family: FamilyTag::DPd, k2: 4, .. } => {
            vec![(1, MinimalModel::conic(3), (1, 2))]
        }
        _ => Vec::new(),
    };
    cases
        .into_iter()
        .map(|(a, target, c)| {
            let mut l = LinkDescriptor::new(LinkType::TypeI, source.clone(), target, a, 0);
            l.fibre_class = Some(c);
            l
        })
        .collect()
}

pub fn enumerate_type_I_over(source: &MinimalModel, field: &FieldProfile) -> Vec<LinkDescriptor> {
    if !source.exists_over(field) {
        return Vec::new();
    }
    let allowed = allowed_point_degrees(source, field);
    enumerate_type_I(source)
        .into_iter()
        .filter(|l| allowed(l.a) && l.target.exists_over(field))
        .map(|mut l| {
            l.source = l.source.over(field);
            l.with_existence(field)
        })
        .collect()
}

/// Type III links out of a conic bundle or `F_1`: inverses of type I.
pub fn enumerate_type_III(bundle: &MinimalModel, field: &FieldProfile) -> Vec<LinkDescriptor> {
    all_families()
        .iter()
        .filter(|m| m.is_point_family())
        .flat_map(|m| enumerate_type_I_over(m, field))
        .filter(|l| l.target == *bundle)
        .map(|l| l.inverse())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeIVKind {
    ProductOfConics,
    DegreeFour,
    Geiser,
    Bertini,
}

impl TypeIVKind {
    pub fn of_k2(k2: i64) -> Option<Self> {
        match k2 {
            8 => Some(TypeIVKind::ProductOfConics),
            4 => Some(TypeIVKind::DegreeFour),
            2 => Some(TypeIVKind::Geiser),
            1 => Some(TypeIVKind::Bertini),
            _ => None,
        }
    }
}

/// `K^2 = 8 d1 d2 / (f1.f2)` when it lands in `{1, 2, 4, 8}`.
pub fn type_IV_analysis(d1: i64, d2: i64, f1f2: i64) -> Result<Option<i64>, LinkError> {
    if d1 < 1 || d2 < 1 || f1f2 < 1 || f1f2 % (d1 * d2) != 0 {
        return Err(LinkError::Invalid(format!(
            "f1.f2 = {f1f2} is not a positive multiple of {d1}*{d2}"
        )));
    }
    let num = 8 * d1 * d2;
    if num % f1f2 != 0 {
        return Ok(None);
    }
    let k2 = num / f1f2;
    Ok([1, 2, 4, 8].contains(&k2).then_some(k2))
}

fn type_IV_links(bundle: &MinimalModel, field: &FieldProfile) -> Vec<LinkDescriptor> {
    let ok = match bundle.kind {
        ModelKind::Hirzebruch { n } => n == 0,
        ModelKind::MoriConicBundle { k2, base: BundleBase::P1 } => matches!(k2, 1 | 2 | 4),
        _ => false,
    };
    if !ok || !bundle.exists_over(field) {
        return Vec::new();
    }
    vec![LinkDescriptor::new(LinkType::TypeIV, bundle.clone(), bundle.clone(), 0, 0).with_existence(field)]
}

/// Elementary transformation of a conic bundle at a point of relative degree `delta`.
/// For `F_n` the target index defaults to `|n - delta|`.
pub fn type_II_over_curve(
    bundle: &MinimalModel,
    delta: i64,
    field: &FieldProfile,
    target_n: Option<u32>,
) -> Result<LinkDescriptor, LinkError> {
    if !matches!(bundle.kind, ModelKind::MoriConicBundle { .. } | ModelKind::Hirzebruch { .. }) {
        return Err(LinkError::Invalid(format!("{bundle} is not a conic bundle")));
    }
    if !bundle.exists_over(field) {
        return Err(LinkError::Constraint(format!("{bundle} does not occur over {field}")));
    }
    if delta < 1 || !field.allows_degree(delta) {
        return Err(LinkError::Constraint(format!("no point of degree {delta} over {field}")));
    }
    let mut target = bundle.clone();
    let mut shift = None;
    if let ModelKind::Hirzebruch { n } = bundle.kind {
        let (ni, e) = (i64::from(n), delta);
        let nt = match target_n {
            None => (ni - e).abs(),
            Some(t) => {
                let t = i64::from(t);
                if (t - ni - e).rem_euclid(2) != 0 || (ni - t).abs() > e {
                    return Err(LinkError::Constraint(format!(
                        "F{n} cannot become F{t} through a point of degree {e}"
                    )));
                }
                t
            }
        };
        let nt = u32::try_from(nt).expect("non-negative index");
        target = MinimalModel::hirzebruch(nt);
        shift = Some((n, nt));
    }
    let mut l = LinkDescriptor::new(LinkType::TypeIICurve, bundle.over(field), target.over(field), delta, delta);
    l.fibre_delta = Some(delta);
    l.hirzebruch_shift = shift;
    Ok(l.with_existence(field))
}

/// `A d^2 = B m^2` has a solution in positive integers.
pub fn square_solvable(a: u64, b: u64) -> bool {
    let p = u128::from(a) * u128::from(b);
    let r = p.sqrt();
    r * r == p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixedPart {
    pub c_squared: i64,
    pub geometrically_integral: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConicBundleContraction {
    SecondConicBundle { fixed_part: Option<FixedPart> },
    BirationalTarget { target_k2: i64, degree: i64, flagged: bool },
}

/// What the other extremal ray of a del Pezzo conic bundle of degree `k2` does.
pub fn conic_bundle_contractions(k2: i64) -> Result<ConicBundleContraction, LinkError> {
    use ConicBundleContraction::*;
    Ok(match k2 {
        1 => SecondConicBundle { fixed_part: Some(FixedPart { c_squared: -3, geometrically_integral: true }) },
        2 => SecondConicBundle { fixed_part: Some(FixedPart { c_squared: -6, geometrically_integral: false }) },
        4 => SecondConicBundle { fixed_part: None },
        3 => BirationalTarget { target_k2: 4, degree: 1, flagged: false },
        5 => BirationalTarget { target_k2: 9, degree: 4, flagged: false },
        6 => BirationalTarget { target_k2: 8, degree: 2, flagged: false },
        7 => BirationalTarget { target_k2: 8, degree: 1, flagged: true },
        _ => return Err(LinkError::Invalid(format!("no conic bundle of degree {k2}"))),
    })
}

/// Every link starting at `model`; links over curves are listed for degrees up to `bound`.
pub fn links_from(model: &MinimalModel, field: &FieldProfile, bound: i64) -> Vec<LinkDescriptor> {
    if !model.exists_over(field) {
        return Vec::new();
    }
    let mut out = Vec::new();
    if model.is_point_family() {
        out.extend(enumerate_type_II_point(model, field));
        out.extend(enumerate_type_I_over(model, field));
    } else {
        for e in 1..=bound {
            if let Ok(l) = type_II_over_curve(model, e, field, None) {
                out.push(l);
            }
        }
        out.extend(enumerate_type_III(model, field));
        out.extend(type_IV_links(model, field));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkGraph {
    pub nodes: Vec<MinimalModel>,
    pub edges: Vec<LinkDescriptor>,
    pub components: Vec<Vec<usize>>,
}

impl LinkGraph {
    pub fn node_index(&self, family: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.family_name() == family)
    }

    pub fn component_of(&self, family: &str) -> Option<Vec<&MinimalModel>> {
        let i = self.node_index(family)?;
        let comp = self.components.iter().find(|c| c.contains(&i))?;
        Some(comp.iter().map(|j| &self.nodes[*j]).collect())
    }
}

/// Family-level graph of all links over `field`.
pub fn build_link_graph(field: &FieldProfile, include_nonrational: bool) -> LinkGraph {
    let nodes: Vec<MinimalModel> = all_families()
        .into_iter()
        .filter(|m| m.exists_over(field) && (include_nonrational || m.is_rational()))
        .map(|m| m.over(field))
        .collect();
    let index = |m: &MinimalModel| nodes.iter().position(|n| n.family_name() == m.family_name());
    let mut edges = Vec::new();
    for node in &nodes {
        let reps: Vec<MinimalModel> = match node.kind {
            ModelKind::Hirzebruch { .. } => vec![MinimalModel::hirzebruch(0), MinimalModel::hirzebruch(1)],
            _ => vec![node.clone()],
        };
        for rep in reps {
            for l in links_from(&rep, field, 1) {
                if index(&l.source).is_some() && index(&l.target).is_some() && !edges.contains(&l) {
                    edges.push(l);
                }
            }
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for l in &edges {
        if let (Some(i), Some(j)) = (index(&l.source), index(&l.target)) {
            uf.union(i, j);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    components.sort();
    LinkGraph { nodes, edges, components }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        assert_eq!(solve_type_II_quadratic(9, 3, 1, 8).unwrap(), vec![(8, 17, 48)]);
        assert_eq!(solve_type_II_quadratic(8, 2, 2, 4).unwrap(), vec![(4, 3, 4)]);
        assert!(solve_type_II_quadratic(3, 1, 3, 1).unwrap().contains(&(6, 9, 5)));
        assert!(solve_type_II_quadratic(9, 2, 1, 1).is_err());
        assert!(solve_type_II_quadratic(9, 3, 1, 9).is_err());
    }

    #[test]
    fn p2_rows() {
        let rows: Vec<(i64, i64)> = enumerate_type_II_point(&MinimalModel::p2(), &FieldProfile::arbitrary())
            .iter()
            .map(|l| (l.a, l.b))
            .collect();
        assert_eq!(rows, vec![(2, 1), (3, 3), (5, 1), (6, 6), (7, 7), (8, 8)]);
    }

    #[test]
    fn reciprocity_exclusions() {
        let rep = type_II_report(&FieldProfile::arbitrary());
        let find = |fam: &str, a, b| {
            rep.rejected
                .iter()
                .find(|r| r.source.family_name() == fam && r.row.a == a && r.row.b == b)
                .map(|r| r.reason)
        };
        assert_eq!(find("dp3", 1, 6), Some(RejectReason::NoReciprocal));
        assert_eq!(find("dp2", 1, 8), Some(RejectReason::NoReciprocal));
        assert_eq!(find("severi_brauer", 2, 1), Some(RejectReason::SourceDegree));
    }

    #[test]
    fn inverse_rows() {
        let rep = type_II_report(&FieldProfile::arbitrary());
        for l in &rep.accepted {
            let inv = l.inverse();
            assert!(rep.accepted.contains(&inv), "{l:?}");
        }
    }

    #[test]
    fn type_i_cases() {
        let p2 = enumerate_type_I(&MinimalModel::p2());
        assert_eq!(p2.len(), 2);
        assert_eq!(p2[0].target, MinimalModel::hirzebruch(1));
        assert_eq!(p2[0].fibre_class, Some((1, 1)));
        let q = enumerate_type_I(&MinimalModel::quadric());
        assert_eq!(q[0].target, MinimalModel::conic(6));
        let x4 = enumerate_type_I(&MinimalModel::dp(4));
        assert_eq!(x4[0].fibre_class, Some((1, 2)));
        assert!(enumerate_type_I(&MinimalModel::dp(5)).is_empty());
    }

    #[test]
    fn type_iv() {
        assert_eq!(type_IV_analysis(1, 1, 1), Ok(Some(8)));
        assert_eq!(type_IV_analysis(1, 1, 4), Ok(Some(2)));
        assert_eq!(type_IV_analysis(1, 1, 3), Ok(None));
        assert!(type_IV_analysis(2, 2, 6).is_err());
        assert_eq!(TypeIVKind::of_k2(2), Some(TypeIVKind::Geiser));
    }

    #[test]
    fn over_curve() {
        let arb = FieldProfile::arbitrary();
        let l = type_II_over_curve(&MinimalModel::hirzebruch(0), 5, &arb, None).unwrap();
        assert_eq!(l.target, MinimalModel::hirzebruch(5));
        let l = type_II_over_curve(&MinimalModel::hirzebruch(2), 1, &arb, Some(3)).unwrap();
        assert_eq!(l.hirzebruch_shift, Some((2, 3)));
        assert!(type_II_over_curve(&MinimalModel::hirzebruch(2), 1, &arb, Some(4)).is_err());
        let sep3 = FieldProfile::separably_closed(3);
        assert!(type_II_over_curve(&MinimalModel::conic(6), 2, &sep3, None).is_err());
        let l = type_II_over_curve(&MinimalModel::conic(5), 3, &arb, None).unwrap();
        assert_eq!(l.source.k2(), l.target.k2());
    }

    #[test]
    fn squares() {
        assert!(!square_solvable(2, 1));
        assert!(square_solvable(4, 1));
        assert!(!square_solvable(6, 5));
        assert!(square_solvable(8, 2));
    }

    #[test]
    fn conic_contractions() {
        use ConicBundleContraction::*;
        assert_eq!(
            conic_bundle_contractions(5),
            Ok(BirationalTarget { target_k2: 9, degree: 4, flagged: false })
        );
        assert_eq!(
            conic_bundle_contractions(6),
            Ok(BirationalTarget { target_k2: 8, degree: 2, flagged: false })
        );
        assert_eq!(conic_bundle_contractions(4), Ok(SecondConicBundle { fixed_part: None }));
        assert!(matches!(conic_bundle_contractions(7), Ok(BirationalTarget { flagged: true, .. })));
        assert!(conic_bundle_contractions(8).is_err());
    }

    #[test]
    fn hirzebruch_links_sep_closed() {
        let sep2 = FieldProfile::separably_closed(2);
        let es: Vec<i64> = links_from(&MinimalModel::hirzebruch(0), &sep2, 16)
            .iter()
            .filter(|l| l.variant == LinkType::TypeIICurve)
            .map(|l| l.a)
            .collect();
        assert_eq!(es, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn graph_components() {
        let g = build_link_graph(&FieldProfile::arbitrary(), true);
        let mut fams: Vec<String> = g.component_of("p2").unwrap().iter().map(|m| m.family_name()).collect();
        fams.sort();
        assert_eq!(fams, ["conic5", "conic6", "dp5", "dp6", "hirzebruch", "p2", "quadric"]);
        let low: Vec<String> = g.component_of("conic3").unwrap().iter().map(|m| m.family_name()).collect();
        assert!(low.contains(&"dp4".to_string()));
        assert!(!low.contains(&"p2".to_string()));
    }
}
