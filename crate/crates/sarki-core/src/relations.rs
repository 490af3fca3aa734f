//! Elementary relations: the polygon of Sarkisov links dominated by a rank three
//! fibration, built from the cone of curves and, independently, by walking the
//! 2-rays game through the link tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{allowed_point_degrees, BundleBase, FieldProfile, MinimalModel, ModelKind};
use crate::lattice::{content, primitive, ClassKind, HBasis, LatticeError, MarkedLattice};
use crate::links::{enumerate_type_I, type_II_over_curve, type_II_report, LinkDescriptor, LinkError, LinkType};

pub const DEFAULT_BOUND: i64 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("no rank three fibration over {0}")]
    NotApplicable(String),
    #[error("the cycle does not close; walked {partial:?}")]
    OpenCycle { partial: Vec<String> },
    #[error("inconsistent relation: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Base {
    Point,
    Curve,
}

/// Blow-up of a minimal model in two points (one point on `F_0` or the degree four conic bundle).
#[derive(Debug, Clone)]
pub struct RankThreeFibration {
    pub origin: MinimalModel,
    pub degrees: (i64, i64),
    pub base: Base,
    pub lattice: Arc<MarkedLattice>,
}

impl RankThreeFibration {
    /// `a = 0` selects the single-point form on a two-ruling origin.
    pub fn over_point(origin: &MinimalModel, a: i64, b: i64, strict: bool) -> Result<Self, RelationError> {
        let pair = matches!(
            origin.kind,
            ModelKind::Hirzebruch { n: 0 } | ModelKind::MoriConicBundle { k2: 4, base: BundleBase::P1 }
        );
        if !(origin.is_point_family() || pair) {
            return Err(RelationError::NotApplicable(origin.spec()));
        }
        let mut l = MarkedLattice::of_model(origin)?;
        if pair {
            if a != 0 {
                return Err(RelationError::NotApplicable(format!("{} with two points", origin.spec())));
            }
        } else {
            l = l.blow_up(a, strict)?;
        }
        l = l.blow_up(b, strict)?;
        Ok(RankThreeFibration {
            origin: origin.clone(),
            degrees: (a, b),
            base: Base::Point,
            lattice: Arc::new(l),
        })
    }

    pub fn k2(&self) -> i64 {
        self.lattice.canonical_self_intersection()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Candidates {
    /// `(class, degree)` of exceptional classes of the first kind.
    pub first_kind: Vec<(Vec<i64>, i64)>,
    /// `(class, delta)` of primitive fibre classes.
    pub fibres: Vec<(Vec<i64>, i64)>,
    /// Some extremal class came within 5 of the coefficient bound.
    pub near_bound: bool,
}

fn isqrt_exact(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = num_integer::Roots::sqrt(&n);
    (r * r == n).then_some(r)
}

/// Extremal classes of the first kind and all fibre classes with coefficients in `[-bound, bound]`.
pub fn curve_candidates(t: &RankThreeFibration, bound: i64) -> Candidates {
    let l = &t.lattice;
    let r = l.rank();
    let hn = l.h_basis().len();
    let c = -l.gram()[r - 1][r - 1];
    let mut first_kind = Vec::new();
    let mut fibres = Vec::new();
    let mut prefix = vec![0i64; r - 1];
    for (i, p) in prefix.iter_mut().enumerate() {
        *p = if i < hn { 0 } else { -bound };
    }
    loop {
        let mut v = prefix.clone();
        v.push(0);
        let q0 = l.dot(&v, &v);
        let l0 = l.k_dot(&v);
        // D^2 = q0 - c y^2, K.D = l0 - c y
        if let Some(s) = isqrt_exact(c * c - 4 * c * (l0 - q0)) {
            for num in [c + s, c - s] {
                if num % (2 * c) == 0 {
                    let y = num / (2 * c);
                    if y.abs() <= bound {
                        v[r - 1] = y;
                        if let ClassKind::FirstKind(d) = l.classify(&v) {
                            if !first_kind.iter().any(|(u, _)| *u == v) {
                                first_kind.push((v.clone(), d));
                            }
                        }
                    }
                }
            }
        }
        if q0 % c == 0 {
            if let Some(y) = isqrt_exact(q0 / c) {
                for y in [y, -y] {
                    if y.abs() <= bound {
                        v[r - 1] = y;
                        if let ClassKind::FibreClass(delta) = l.classify(&v) {
                            if !fibres.iter().any(|(u, _)| *u == v) {
                                fibres.push((v.clone(), delta));
                            }
                        }
                    }
                }
            }
        }
        // advance the odometer
        let mut i = r - 1;
        loop {
            if i == 0 {
                let first_kind = hull_vertices(l, first_kind);
                let near_bound = first_kind
                    .iter()
                    .any(|(v, _)| v.iter().any(|x| x.abs() > bound - 5));
                return Candidates { first_kind, fibres, near_bound };
            }
            i -= 1;
            if prefix[i] < bound {
                prefix[i] += 1;
                for (j, p) in prefix.iter_mut().enumerate().skip(i + 1) {
                    *p = if j < hn { 0 } else { -bound };
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Contraction,
    Fibration,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub class: Vec<i64>,
    /// Degree of the contracted point, or `delta` of a fibration.
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Side {
    pub label: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub label: String,
    /// `point`, `P1` or `B`.
    pub base: String,
    #[serde(skip)]
    pub model: MinimalModel,
}

impl Corner {
    fn of(model: MinimalModel) -> Self {
        let base = match model.kind {
            ModelKind::DelPezzoPoint { .. } => "point".to_string(),
            ModelKind::MoriConicBundle { base, .. } => base.suffix().to_string(),
            ModelKind::Hirzebruch { .. } => "P1".to_string(),
        };
        Corner { label: model.label(), base, model }
    }

    pub fn is_point(&self) -> bool {
        self.base == "point"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub family: String,
    pub k2: i64,
    pub lambda: Option<i64>,
}

impl Origin {
    fn of(model: &MinimalModel) -> Self {
        let family = match model.kind {
            ModelKind::Hirzebruch { n: 0 } => "f0".to_string(),
            _ => model.family_name(),
        };
        Origin { family, k2: model.k2(), lambda: model.lambda() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Center {
    pub k2: i64,
    pub label: String,
    pub origin: Origin,
    pub degrees: [i64; 2],
}

/// Closed polygon; corner `i` sits between side `i` and side `i + 1`, and
/// `links[i]` is the link of side `i`, from corner `i - 1` to corner `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryRelation {
    pub center: Center,
    pub basis: Vec<String>,
    pub sides: Vec<Side>,
    pub corners: Vec<Corner>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    pub links: Vec<LinkDescriptor>,
}

impl ElementaryRelation {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Rotate by `rot` sides, after reversing the orientation if `reflect`.
    pub fn transformed(&self, rot: usize, reflect: bool) -> ElementaryRelation {
        let n = self.len();
        let mut out = self.clone();
        if reflect {
            for k in 0..n {
                let s = n - 1 - k;
                out.sides[k] = self.sides[s].clone();
                out.edges[k] = self.edges[s].clone();
                out.links[k] = self.links[s].inverse();
                out.corners[k] = self.corners[(2 * n - 2 - k) % n].clone();
            }
        }
        out.sides.rotate_left(rot % n);
        out.edges.rotate_left(rot % n);
        out.links.rotate_left(rot % n);
        out.corners.rotate_left(rot % n);
        out
    }

    fn key(&self) -> Vec<(String, String, String)> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                (
                    self.corners[i].label.clone(),
                    self.sides[j].label.clone(),
                    format!("{:?}", self.edges[j]),
                )
            })
            .collect()
    }

    /// Representative with the smallest corner key first, oriented so the second
    /// corner key does not exceed the last; remaining ties broken lexicographically.
    pub fn canonical(&self) -> ElementaryRelation {
        let n = self.len();
        (0..n)
            .flat_map(|r| [false, true].map(|f| self.transformed(r, f)))
            .min_by_key(|rel| rel.key())
            .expect("non-empty relation")
    }

    /// Sum of the `K^2` jumps of the links around the cycle.
    pub fn k2_circulation(&self) -> i64 {
        self.links.iter().map(|l| l.target.k2() - l.source.k2()).sum()
    }
}

fn cross(u: &[i64], v: &[i64]) -> Vec<i64> {
    vec![
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn gram_mul(l: &MarkedLattice, v: &[i64]) -> Vec<i64> {
    l.gram().iter().map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum()).collect()
}

/// Primitive fibre class orthogonal to two classes, oriented with `-K.N > 0`.
fn fibre_between(l: &MarkedLattice, u: &[i64], v: &[i64]) -> Vec<i64> {
    let n = primitive(&cross(&gram_mul(l, u), &gram_mul(l, v)));
    if l.k_dot(&n) > 0 {
        n.iter().map(|x| -x).collect()
    } else {
        n
    }
}

/// Z-basis of the integer kernel of the linear form `x -> row . x`.
fn kernel_basis(row: &[i64]) -> Vec<Vec<i64>> {
    let n = row.len();
    let mut r = row.to_vec();
    let mut cols: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let lead = r.iter().position(|x| *x != 0);
    let Some(lead) = lead else { return cols };
    r.swap(0, lead);
    cols.swap(0, lead);
    for j in 1..n {
        if r[j] == 0 {
            continue;
        }
        let e = r[0].extended_gcd(&r[j]);
        let (a0, aj, g) = (r[0], r[j], e.gcd);
        let c0: Vec<i64> = (0..n).map(|k| e.x * cols[0][k] + e.y * cols[j][k]).collect();
        let cj: Vec<i64> = (0..n).map(|k| (-aj / g) * cols[0][k] + (a0 / g) * cols[j][k]).collect();
        cols[0] = c0;
        cols[j] = cj;
        r[0] = g;
        r[j] = 0;
    }
    cols.into_iter().skip(1).collect()
}

/// Index `n` of the Hirzebruch surface obtained by contracting `c`, fibred by `n_class`.
fn hirzebruch_index(l: &MarkedLattice, c: &[i64]) -> u32 {
    let odd = kernel_basis(&gram_mul(l, c)).iter().any(|v| l.dot(v, v).rem_euclid(2) == 1);
    u32::from(odd)
}

fn point_corner(l: &MarkedLattice, k2t: i64, (c1, d1): (&[i64], i64), (c2, d2): (&[i64], i64)) -> Result<MinimalModel, RelationError> {
    let v: Vec<i64> = l.canonical().iter().zip(c1).zip(c2).map(|((k, x), y)| -k + x + y).collect();
    let lambda = content(&v);
    let k2 = k2t + d1 + d2;
    MinimalModel::from_point_invariants(k2, lambda)
        .ok_or_else(|| RelationError::Inconsistent(format!("no rank one surface with K^2 = {k2}, lambda = {lambda}")))
}

fn fibration_corner(l: &MarkedLattice, k2t: i64, c: &[i64], deg: i64, delta: i64) -> MinimalModel {
    let k2 = k2t + deg;
    if k2 == 8 && delta == 1 {
        MinimalModel::hirzebruch(hirzebruch_index(l, c))
    } else {
        MinimalModel::conic_over(k2 as u8, BundleBase::from_delta(delta))
    }
}

/// Vertices of the convex hull of the classes on the slice `-K.v = 1`, in cyclic order.
fn hull_vertices(l: &MarkedLattice, list: Vec<(Vec<i64>, i64)>) -> Vec<(Vec<i64>, i64)> {
    type P = (Ratio<i64>, Ratio<i64>);
    let mut pts: Vec<(P, Vec<i64>, i64)> = list
        .into_iter()
        .map(|(v, d)| {
            let w = -l.k_dot(&v);
            ((Ratio::new(v[1], w), Ratio::new(v[2], w)), v, d)
        })
        .collect();
    pts.sort();
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < 3 {
        return pts.into_iter().map(|(_, v, d)| (v, d)).collect();
    }
    let cr = |o: &P, a: &P, b: &P| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let chain = |order: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in order {
            while h.len() >= 2 && cr(&pts[h[h.len() - 2]].0, &pts[h[h.len() - 1]].0, &pts[i].0) <= Ratio::from(0) {
                h.pop();
            }
            h.push(i);
        }
        h.pop();
        h
    };
    let lower = chain(&mut (0..pts.len()));
    let upper = chain(&mut (0..pts.len()).rev());
    lower.into_iter().chain(upper).map(|i| (pts[i].1.clone(), pts[i].2)).collect()
}

/// Cyclic edge sequence from the convex hull of the first-kind classes on the slice `-K.v = 1`.
fn hull_edges(t: &RankThreeFibration, cands: &Candidates) -> Result<Vec<Edge>, RelationError> {
    let l = &t.lattice;
    let rays = hull_vertices(l, cands.first_kind.clone());
    if rays.len() < 3 {
        return Err(RelationError::Inconsistent("fewer than three extremal classes".into()));
    }
    let n = rays.len();
    let mut edges = Vec::new();
    for i in 0..n {
        let (u, du) = (&rays[i].0, rays[i].1);
        let v = &rays[(i + 1) % n].0;
        edges.push(Edge { kind: EdgeKind::Contraction, class: u.clone(), degree: du });
        let dot = l.dot(u, v);
        if dot > 0 {
            let f = fibre_between(l, u, v);
            let delta = match l.classify(&f) {
                ClassKind::FibreClass(delta) => delta,
                _ => {
                    return Err(RelationError::Inconsistent(format!(
                        "{} between {} and {} is not a fibre",
                        l.render(&f),
                        l.render(u),
                        l.render(v)
                    )))
                }
            };
            edges.push(Edge { kind: EdgeKind::Fibration, class: f, degree: delta });
        } else if dot < 0 {
            return Err(RelationError::Inconsistent(format!(
                "adjacent extremal classes {} and {} meet negatively",
                l.render(u),
                l.render(v)
            )));
        }
    }
    Ok(edges)
}

fn corner_models(l: &MarkedLattice, k2t: i64, edges: &[Edge]) -> Result<Vec<MinimalModel>, RelationError> {
    let n = edges.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&edges[i], &edges[(i + 1) % n]);
            match (a.kind, b.kind) {
                (EdgeKind::Contraction, EdgeKind::Contraction) => {
                    if l.dot(&a.class, &b.class) != 0 {
                        return Err(RelationError::Inconsistent("corner classes meet".into()));
                    }
                    point_corner(l, k2t, (&a.class, a.degree), (&b.class, b.degree))
                }
                (EdgeKind::Contraction, EdgeKind::Fibration) => Ok(fibration_corner(l, k2t, &a.class, a.degree, b.degree)),
                (EdgeKind::Fibration, EdgeKind::Contraction) => Ok(fibration_corner(l, k2t, &b.class, b.degree, a.degree)),
                _ => Err(RelationError::Inconsistent("two adjacent fibrations".into())),
            }
        })
        .collect()
}

fn side_labels(k2t: i64, edges: &[Edge], corners: &[Corner]) -> Vec<Side> {
    let n = edges.len();
    (0..n)
        .map(|i| {
            let e = &edges[i];
            let label = match e.kind {
                EdgeKind::Contraction => {
                    let k2 = k2t + e.degree;
                    if k2 == 8 {
                        let near_point = corners[i].is_point() || corners[(i + n - 1) % n].is_point();
                        if near_point { "F1" } else { "F0" }.to_string()
                    } else {
                        format!("X{k2}")
                    }
                }
                EdgeKind::Fibration => format!("X{k2t}/{}", BundleBase::from_delta(e.degree).suffix()),
            };
            Side { label, kind: e.kind }
        })
        .collect()
}

fn ample_generator(l: &MarkedLattice, c1: &[i64], c2: &[i64]) -> Vec<i64> {
    let v: Vec<i64> = l.canonical().iter().zip(c1).zip(c2).map(|((k, x), y)| -k + x + y).collect();
    primitive(&v)
}

/// Link of every side, read from the classes and corner surfaces.
fn side_links(l: &MarkedLattice, edges: &[Edge], corners: &[Corner]) -> Result<Vec<LinkDescriptor>, RelationError> {
    let n = edges.len();
    let arb = FieldProfile::arbitrary();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = &corners[(i + n - 1) % n];
        let next = &corners[i];
        let before = &edges[(i + n - 1) % n];
        let cur = &edges[i];
        let after = &edges[(i + 1) % n];
        let link = match cur.kind {
            EdgeKind::Fibration => {
                if before.degree % cur.degree != 0 {
                    return Err(RelationError::Inconsistent("fibre degree does not divide".into()));
                }
                let delta = before.degree / cur.degree;
                let target_n = match next.model.kind {
                    ModelKind::Hirzebruch { n } => Some(n),
                    _ => None,
                };
                let mut link = type_II_over_curve(&prev.model, delta, &arb, target_n)?;
                link.target = next.model.clone();
                link.b = after.degree;
                link.a = before.degree;
                link
            }
            EdgeKind::Contraction => {
                let variant = match (prev.is_point(), next.is_point()) {
                    (true, true) => LinkType::TypeIIPoint,
                    (true, false) => LinkType::TypeI,
                    (false, true) => LinkType::TypeIII,
                    (false, false) => LinkType::TypeIV,
                };
                let mut link = LinkDescriptor {
                    variant,
                    source: prev.model.clone(),
                    target: next.model.clone(),
                    a: if prev.is_point() { before.degree } else { 0 },
                    b: if next.is_point() { after.degree } else { 0 },
                    eprime: None,
                    fibre_class: None,
                    fibre_delta: None,
                    hirzebruch_shift: None,
                    existence: crate::links::Existence::NumericOnly,
                };
                let coords = |h: &[i64], e: &[i64], deg: i64, x: &[i64]| {
                    let h2 = l.dot(h, h);
                    (l.dot(x, h) / h2, l.dot(x, e) / deg)
                };
                match variant {
                    LinkType::TypeIIPoint | LinkType::TypeI => {
                        let h = ample_generator(l, &before.class, &cur.class);
                        let uv = coords(&h, &before.class, before.degree, &after.class);
                        if variant == LinkType::TypeIIPoint {
                            link.eprime = Some(uv);
                        } else {
                            link.fibre_class = Some(uv);
                        }
                    }
                    LinkType::TypeIII => {
                        let h = ample_generator(l, &cur.class, &after.class);
                        link.fibre_class = Some(coords(&h, &after.class, after.degree, &before.class));
                    }
                    _ => {}
                }
                link
            }
        };
        out.push(link);
    }
    Ok(out)
}

fn assemble(
    l: &Arc<MarkedLattice>,
    origin: &MinimalModel,
    degrees: (i64, i64),
    edges: Vec<Edge>,
    models: Vec<MinimalModel>,
) -> Result<ElementaryRelation, RelationError> {
    let k2t = l.canonical_self_intersection();
    let corners: Vec<Corner> = models.into_iter().map(Corner::of).collect();
    let sides = side_labels(k2t, &edges, &corners);
    let links = side_links(l, &edges, &corners)?;
    Ok(ElementaryRelation {
        center: Center {
            k2: k2t,
            label: format!("X{k2t}"),
            origin: Origin::of(origin),
            degrees: [degrees.0, degrees.1],
        },
        basis: l.symbols(),
        sides,
        corners,
        edges,
        links,
    })
}

/// The relation of `t`, with curve candidates up to `bound`.
pub fn build_relation_with_bound(t: &RankThreeFibration, bound: i64) -> Result<ElementaryRelation, RelationError> {
    let cands = curve_candidates(t, bound);
    let edges = hull_edges(t, &cands)?;
    let models = corner_models(&t.lattice, t.k2(), &edges)?;
    assemble(&t.lattice, &t.origin, t.degrees, edges, models)
}

pub fn build_relation(t: &RankThreeFibration) -> Result<ElementaryRelation, RelationError> {
    build_relation_with_bound(t, DEFAULT_BOUND)
}

/// Link tables used by the 2-rays walk (all fields, before field filtering).
#[derive(Debug, Clone)]
pub struct LinkTables {
    pub type_ii: Vec<LinkDescriptor>,
    pub type_i: Vec<LinkDescriptor>,
}

impl LinkTables {
    pub fn arbitrary() -> Self {
        let type_ii = type_II_report(&FieldProfile::arbitrary()).accepted;
        let type_i = crate::catalog::all_families().iter().flat_map(enumerate_type_I).collect();
        LinkTables { type_ii, type_i }
    }
}

/// A corner of the walk: the Mori fibre space between the sides `incoming` and `outgoing`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkState {
    pub incoming: Edge,
    pub outgoing: Edge,
    pub corner: MinimalModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub link: LinkDescriptor,
    pub next: WalkState,
}

fn solve3(m: [[i64; 3]; 3], rhs: [i64; 3]) -> Option<Vec<Ratio<i64>>> {
    let det = |a: [[i64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    if d == 0 {
        return None;
    }
    Some(
        (0..3)
            .map(|c| {
                let mut a = m;
                for (row, r) in a.iter_mut().zip(rhs) {
                    row[c] = r;
                }
                Ratio::new(det(a), d)
            })
            .collect(),
    )
}

fn scaled(v: &[i64], k: i64) -> Vec<i64> {
    v.iter().map(|x| k * x).collect()
}

fn sub(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Parity search for the Hirzebruch index: a section `S` with `S.C = 0`, `S.N = 1`.
fn walk_hirzebruch_index(l: &MarkedLattice, c: &[i64], n: &[i64]) -> Result<u32, RelationError> {
    const R: i64 = 12;
    for x in -R..=R {
        for y in -R..=R {
            for z in -R..=R {
                let s = [x, y, z];
                if l.dot(&s, c) == 0 && l.dot(&s, n) == 1 {
                    return Ok(l.dot(&s, &s).rem_euclid(2) as u32);
                }
            }
        }
    }
    Err(RelationError::Inconsistent("no section found".into()))
}

fn walk_fibration_corner(l: &MarkedLattice, c: &Edge, n: &Edge) -> Result<MinimalModel, RelationError> {
    let k2 = l.canonical_self_intersection() + c.degree;
    if k2 == 8 && n.degree == 1 {
        Ok(MinimalModel::hirzebruch(walk_hirzebruch_index(l, &c.class, &n.class)?))
    } else {
        Ok(MinimalModel::conic_over(k2 as u8, BundleBase::from_delta(n.degree)))
    }
}

fn first_kind(l: &MarkedLattice, v: Vec<i64>) -> Result<Edge, RelationError> {
    match l.classify(&v) {
        ClassKind::FirstKind(d) => Ok(Edge { kind: EdgeKind::Contraction, class: v, degree: d }),
        _ => Err(RelationError::Inconsistent(format!("{} is not of the first kind", l.render(&v)))),
    }
}

fn fibre(l: &MarkedLattice, v: Vec<i64>) -> Result<Edge, RelationError> {
    match l.classify(&v) {
        ClassKind::FibreClass(d) => Ok(Edge { kind: EdgeKind::Fibration, class: v, degree: d }),
        _ => Err(RelationError::Inconsistent(format!("{} is not a fibre", l.render(&v)))),
    }
}

/// One move of the 2-rays game: play the side `outgoing` out of the corner.
pub fn two_ray_step(l: &MarkedLattice, state: &WalkState, tables: &LinkTables) -> Result<WalkStep, RelationError> {
    let k2t = l.canonical_self_intersection();
    let (inc, out) = (&state.incoming, &state.outgoing);
    let lookup = |what: String| RelationError::Inconsistent(format!("no link in the tables for {what}"));
    match (inc.kind, out.kind) {
        (EdgeKind::Contraction, EdgeKind::Contraction) => {
            let x = &state.corner;
            let minus_k: Vec<i64> = l.canonical().iter().map(|k| -k).collect();
            let pull: Vec<i64> = minus_k.iter().zip(&inc.class).zip(&out.class).map(|((k, a), b)| k + a + b).collect();
            let lambda = x.lambda().ok_or_else(|| lookup(x.spec()))?;
            if pull.iter().any(|c| c % lambda != 0) {
                return Err(RelationError::Inconsistent(format!("-K of {} is not divisible by {lambda}", x.spec())));
            }
            let h: Vec<i64> = pull.iter().map(|c| c / lambda).collect();
            let a = inc.degree;
            if let Some(row) = tables.type_ii.iter().find(|r| r.source.family_name() == x.family_name() && r.a == a) {
                let (d, m) = row.eprime.expect("type II row");
                let next = first_kind(l, sub(&scaled(&h, d), &scaled(&inc.class, m)))?;
                if next.degree != row.b {
                    return Err(RelationError::Inconsistent(format!("{row:?} lands on degree {}", next.degree)));
                }
                return Ok(WalkStep {
                    link: row.clone(),
                    next: WalkState { incoming: out.clone(), outgoing: next, corner: row.target.clone() },
                });
            }
            if let Some(row) = tables.type_i.iter().find(|r| r.source.family_name() == x.family_name() && r.a == a) {
                let (u, v) = row.fibre_class.expect("type I row");
                let next = fibre(l, sub(&scaled(&h, u), &scaled(&inc.class, v)))?;
                let corner = walk_fibration_corner(l, out, &next)?;
                if corner.family_name() != row.target.family_name() {
                    return Err(RelationError::Inconsistent(format!("{row:?} lands on {}", corner.spec())));
                }
                let mut link = row.clone();
                link.target = corner.clone();
                return Ok(WalkStep { link, next: WalkState { incoming: out.clone(), outgoing: next, corner } });
            }
            Err(lookup(format!("{} at a point of degree {a}", x.spec())))
        }
        (EdgeKind::Fibration, EdgeKind::Contraction) => {
            let z = &state.corner;
            let kz = k2t + out.degree;
            let k = l.canonical();
            let gk = gram_mul(l, k);
            let gout = gram_mul(l, &out.class);
            let gn = gram_mul(l, &inc.class);
            for row in tables.type_i.iter().filter(|r| r.target == *z) {
                let (u, v) = row.fibre_class.expect("type I row");
                let a = row.a;
                let x = &row.source;
                if x.k2() != kz + a {
                    continue;
                }
                let m = [
                    [gout[0], gout[1], gout[2]],
                    [gk[0], gk[1], gk[2]],
                    [gn[0], gn[1], gn[2]],
                ];
                let Some(sol) = solve3(m, [0, -a, v * a]) else { continue };
                if !sol.iter().all(|r| r.is_integer()) {
                    continue;
                }
                let e: Vec<i64> = sol.iter().map(|r| r.to_integer()).collect();
                if l.classify(&e) != ClassKind::FirstKind(a) {
                    continue;
                }
                let hn: Vec<i64> = inc.class.iter().zip(&e).map(|(n, e)| n + v * e).collect();
                if hn.iter().any(|c| c % u != 0) {
                    continue;
                }
                let h: Vec<i64> = hn.iter().map(|c| c / u).collect();
                if Some(l.dot(&h, &h)) != x.h2() {
                    continue;
                }
                let next = first_kind(l, e)?;
                return Ok(WalkStep {
                    link: row.inverse(),
                    next: WalkState { incoming: out.clone(), outgoing: next, corner: x.clone() },
                });
            }
            if ![1, 2, 4, 8].contains(&kz) {
                return Err(lookup(format!("{} over a point", z.spec())));
            }
            let mk: Vec<i64> = k.iter().zip(&out.class).map(|(k, c)| -k + c).collect();
            let n = &inc.class;
            let m2 = l.dot(&mk, &mk);
            let nm = l.dot(n, &mk);
            let reflected: Vec<i64> = n.iter().zip(&mk).map(|(n, m)| -m2 * n + 2 * nm * m).collect();
            let mut other = primitive(&reflected);
            if l.k_dot(&other) > 0 {
                other = other.iter().map(|x| -x).collect();
            }
            let next = fibre(l, other)?;
            let corner = walk_fibration_corner(l, out, &next)?;
            let link = LinkDescriptor {
                variant: LinkType::TypeIV,
                source: z.clone(),
                target: corner.clone(),
                a: 0,
                b: 0,
                eprime: None,
                fibre_class: None,
                fibre_delta: None,
                hirzebruch_shift: None,
                existence: crate::links::Existence::NumericOnly,
            };
            Ok(WalkStep { link, next: WalkState { incoming: out.clone(), outgoing: next, corner } })
        }
        (EdgeKind::Contraction, EdgeKind::Fibration) => {
            if inc.degree % out.degree != 0 {
                return Err(RelationError::Inconsistent("fibre degree does not divide".into()));
            }
            let delta = inc.degree / out.degree;
            let next = first_kind(l, sub(&scaled(&out.class, delta), &inc.class))?;
            let corner = walk_fibration_corner(l, &next, out)?;
            let target_n = match corner.kind {
                ModelKind::Hirzebruch { n } => Some(n),
                _ => None,
            };
            let mut link = type_II_over_curve(&state.corner, delta, &FieldProfile::arbitrary(), target_n)?;
            link.target = corner.clone();
            Ok(WalkStep { link, next: WalkState { incoming: out.clone(), outgoing: next, corner } })
        }
        (EdgeKind::Fibration, EdgeKind::Fibration) => {
            Err(RelationError::Inconsistent("two adjacent fibrations".into()))
        }
    }
}

/// Walk the 2-rays game around `t` until it returns to its start.
pub fn two_ray_walk(t: &RankThreeFibration, tables: &LinkTables) -> Result<ElementaryRelation, RelationError> {
    let l = &t.lattice;
    let r = l.rank();
    let last = l.exceptional(r - l.h_basis().len() - 1);
    let out = first_kind(l, last)?;
    let start = match l.h_basis() {
        HBasis::Single { .. } => {
            let e = first_kind(l, l.exceptional(0))?;
            WalkState { incoming: e, outgoing: out, corner: t.origin.clone() }
        }
        HBasis::Pair { .. } => {
            let mut h1 = vec![0; r];
            h1[0] = 1;
            WalkState { incoming: fibre(l, h1)?, outgoing: out, corner: t.origin.clone() }
        }
    };
    let mut state = start.clone();
    let mut edges = Vec::new();
    let mut corners = Vec::new();
    for _ in 0..64 {
        let step = two_ray_step(l, &state, tables)?;
        edges.push(state.outgoing.clone());
        corners.push(step.next.corner.clone());
        state = step.next;
        if state.incoming == start.incoming && state.outgoing == start.outgoing {
            // the walk stores corners after their incoming side; shift so that
            // corner i sits between side i and side i + 1
            return assemble(l, &t.origin, t.degrees, edges, corners);
        }
    }
    Err(RelationError::OpenCycle { partial: edges.iter().map(|e| l.render(&e.class)).collect() })
}

/// Generic relation of a conic bundle blown up in two points of relative degrees `delta_x`, `delta_y`.
pub fn relation_over_curve(bundle: &MinimalModel, delta_x: i64, delta_y: i64) -> Result<ElementaryRelation, RelationError> {
    let arb = FieldProfile::arbitrary();
    let base = match bundle.kind {
        ModelKind::MoriConicBundle { base, .. } => base,
        ModelKind::Hirzebruch { .. } => BundleBase::P1,
        _ => return Err(RelationError::NotApplicable(bundle.spec())),
    };
    if delta_x < 1 || delta_y < 1 {
        return Err(LinkError::Constraint(format!("relative degrees must be positive, got {delta_x}, {delta_y}")).into());
    }
    let db = if base == BundleBase::P1 { 1 } else { 2 };
    let k2 = bundle.k2();
    let (dx, dy) = (delta_x * db, delta_y * db);
    let k2t = k2 - dx - dy;
    let edge = |class: Vec<i64>, degree| Edge { kind: EdgeKind::Contraction, class, degree };
    let edges = vec![
        edge(vec![0, 1, 0], dx),
        edge(vec![delta_y, 0, -1], dy),
        edge(vec![delta_x, -1, 0], dx),
        edge(vec![0, 0, 1], dy),
    ];
    // corner 3 is the original bundle; crossing a side transforms at one point
    let to_y = type_II_over_curve(bundle, delta_y, &arb, None)?;
    let to_x = type_II_over_curve(bundle, delta_x, &arb, None)?;
    let both = type_II_over_curve(&to_y.target, delta_x, &arb, None)?;
    let models = [to_y.target.clone(), both.target.clone(), to_x.target.clone(), bundle.clone()];
    let back = type_II_over_curve(&to_x.target, delta_y, &arb, match both.target.kind {
        ModelKind::Hirzebruch { n } => Some(n),
        _ => None,
    })?;
    let mut links = vec![to_y, both, back.inverse(), to_x.inverse()];
    for (i, link) in links.iter_mut().enumerate() {
        link.source = models[(i + 3) % 4].clone();
        link.target = models[i].clone();
    }
    let side_label = |remaining: i64| format!("X{}/{}", k2 - remaining, base.suffix());
    let sides = vec![
        Side { label: side_label(dy), kind: EdgeKind::Contraction },
        Side { label: side_label(dx), kind: EdgeKind::Contraction },
        Side { label: side_label(dy), kind: EdgeKind::Contraction },
        Side { label: side_label(dx), kind: EdgeKind::Contraction },
    ];
    let corners = models
        .iter()
        .map(|m| Corner { label: format!("X{k2}/{}", base.suffix()), base: base.suffix().to_string(), model: m.clone() })
        .collect();
    Ok(ElementaryRelation {
        center: Center {
            k2: k2t,
            label: format!("X{k2t}/{}", base.suffix()),
            origin: Origin::of(bundle),
            degrees: [delta_x, delta_y],
        },
        basis: vec!["f".into(), "E".into(), "F".into()],
        sides,
        corners,
        edges,
        links,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Piece {
    pub id: String,
    pub rational: bool,
    pub relation: ElementaryRelation,
}

fn figure_prefix(m: &MinimalModel) -> Option<(usize, &'static str)> {
    use crate::catalog::FamilyTag::*;
    let ModelKind::DelPezzoPoint { family, k2, .. } = m.kind else { return None };
    Some(match (family, k2) {
        (P2, _) => (0, "P2"),
        (Quadric, _) => (1, "X8"),
        (DPd, 6) => (2, "X6"),
        (DPd, 5) => (3, "X5"),
        (SeveriBrauerNontrivial, _) => (4, "X9"),
        (DP8NonQuadric, _) => (5, "X8nq"),
        (DPd, 4) => (6, "X4"),
        (DPd, 3) => (7, "X3"),
        _ => (8, "X"),
    })
}

/// Figure name of a relation over a point, read off its best corner.
pub fn figure_id(rel: &ElementaryRelation) -> String {
    let n = rel.len();
    let best = (0..n)
        .filter(|i| rel.corners[*i].is_point())
        .filter_map(|i| {
            let (rank, prefix) = figure_prefix(&rel.corners[i].model)?;
            let mut d = [rel.edges[i].degree, rel.edges[(i + 1) % n].degree];
            d.sort();
            Some((rank, d, prefix))
        })
        .min();
    match best {
        Some((_, [a, b], prefix)) => format!("{prefix}_{a}{b}"),
        None => {
            let k2t = rel.center.k2;
            if rel.sides.iter().any(|s| s.label == "F0") {
                format!("F0_0{}", 8 - k2t)
            } else {
                format!("X4_0{}", 4 - k2t)
            }
        }
    }
}

fn origin_pairs(origin: &MinimalModel, field: &FieldProfile) -> Vec<(i64, i64)> {
    let allowed = allowed_point_degrees(origin, field);
    let k2 = origin.k2();
    if origin.is_point_family() {
        let mut out = Vec::new();
        for a in 1..k2 {
            for b in a..k2 - a {
                if allowed(a) && allowed(b) {
                    out.push((a, b));
                }
            }
        }
        out
    } else {
        (1..k2).filter(|d| allowed(*d)).map(|d| (0, d)).collect()
    }
}

/// All distinct relations over a point, one per figure, sorted by figure name.
pub fn enumerate_pieces(field: &FieldProfile, include_nonrational: bool) -> Result<Vec<Piece>, RelationError> {
    let rational = [
        MinimalModel::p2(),
        MinimalModel::quadric(),
        MinimalModel::dp(6),
        MinimalModel::dp(5),
        MinimalModel::hirzebruch(0),
    ];
    let nonrational = [
        MinimalModel::severi_brauer(),
        MinimalModel::dp8_nonquadric(),
        MinimalModel::dp(4),
        MinimalModel::dp(3),
        MinimalModel::conic(4),
    ];
    let mut found: BTreeMap<String, Piece> = BTreeMap::new();
    let groups: &[(&[MinimalModel], bool)] = if include_nonrational {
        &[(&rational, true), (&nonrational, false)]
    } else {
        &[(&rational, true)]
    };
    for (origins, is_rational) in groups {
        for origin in origins.iter().filter(|o| o.exists_over(field)) {
            for (a, b) in origin_pairs(origin, field) {
                let t = RankThreeFibration::over_point(origin, a, b, true)?;
                let relation = build_relation(&t)?;
                let id = figure_id(&relation);
                found.entry(id.clone()).or_insert(Piece { id, rational: *is_rational, relation });
            }
        }
    }
    Ok(found.into_values().collect())
}

/// DOT digraph of a relation: center, side and corner nodes.
pub fn render_dot(rel: &ElementaryRelation) -> String {
    let render = |v: &[i64]| crate::lattice::render_class(&rel.basis, v);
    let n = rel.len();
    let mut s = String::from("digraph relation {\n");
    let _ = writeln!(s, "  center [label=\"{}\"];", rel.center.label);
    for (i, side) in rel.sides.iter().enumerate() {
        let _ = writeln!(s, "  s{i} [label=\"{}\"];", side.label);
    }
    for (i, c) in rel.corners.iter().enumerate() {
        let _ = writeln!(s, "  c{i} [label=\"{}\"];", c.label);
    }
    for (i, e) in rel.edges.iter().enumerate() {
        let _ = writeln!(s, "  center -> s{i} [label=\"{}\"];", render(&e.class));
        let before = &rel.edges[(i + n - 1) % n];
        let after = &rel.edges[(i + 1) % n];
        let _ = writeln!(s, "  s{i} -> c{} [label=\"{}\"];", (i + n - 1) % n, render(&before.class));
        let _ = writeln!(s, "  s{i} -> c{i} [label=\"{}\"];", render(&after.class));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn piece(origin: MinimalModel, a: i64, b: i64) -> ElementaryRelation {
        build_relation(&RankThreeFibration::over_point(&origin, a, b, true).unwrap()).unwrap()
    }

    #[test]
    fn candidates_p2_11() {
        let t = RankThreeFibration::over_point(&MinimalModel::p2(), 1, 1, true).unwrap();
        let c = curve_candidates(&t, DEFAULT_BOUND);
        let mut fk: Vec<Vec<i64>> = c.first_kind.iter().map(|x| x.0.clone()).collect();
        fk.sort();
        assert_eq!(fk, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, -1, -1]]);
        let mut fb: Vec<Vec<i64>> = c.fibres.iter().map(|x| x.0.clone()).collect();
        fb.sort();
        assert!(fb.contains(&vec![1, -1, 0]) && fb.contains(&vec![1, 0, -1]));
        assert!(!c.near_bound);
    }

    #[test]
    fn candidates_contain_figure_classes() {
        let t = RankThreeFibration::over_point(&MinimalModel::p2(), 1, 3, true).unwrap();
        let c = curve_candidates(&t, DEFAULT_BOUND);
        assert!(c.first_kind.iter().any(|x| x.0 == vec![3, 0, -2]));
        assert!(c.first_kind.iter().any(|x| x.0 == vec![3, -3, -1]));
        let t = RankThreeFibration::over_point(&MinimalModel::p2(), 1, 6, true).unwrap();
        let c = curve_candidates(&t, DEFAULT_BOUND);
        assert!(c.first_kind.iter().any(|x| x.0 == vec![18, -6, -7]));
    }

    #[test]
    fn pentagon() {
        let rel = piece(MinimalModel::p2(), 1, 1);
        assert_eq!(rel.len(), 5);
        assert_eq!(rel.center.label, "X7");
        assert_eq!(figure_id(&rel), "P2_11");
        let mut labels: Vec<&str> = rel.corners.iter().map(|c| c.label.as_str()).collect();
        labels.sort();
        assert_eq!(labels, ["F0/P1", "F0/P1", "F1/P1", "F1/P1", "P2"]);
        assert_eq!(rel.k2_circulation(), 0);
    }

    #[test]
    fn walk_matches_hull_small() {
        let tables = LinkTables::arbitrary();
        for (o, a, b) in [(MinimalModel::p2(), 1, 1), (MinimalModel::p2(), 1, 3), (MinimalModel::quadric(), 2, 2)] {
            let t = RankThreeFibration::over_point(&o, a, b, true).unwrap();
            let hull = build_relation(&t).unwrap().canonical();
            let walk = two_ray_walk(&t, &tables).unwrap().canonical();
            assert_eq!(hull, walk, "{}", o.spec());
        }
    }

    #[test]
    fn kernel() {
        let b = kernel_basis(&[2, 3, 0]);
        assert_eq!(b.len(), 2);
        for v in &b {
            assert_eq!(2 * v[0] + 3 * v[1], 0);
        }
    }

    #[test]
    fn square() {
        let rel = relation_over_curve(&MinimalModel::conic(5), 2, 3).unwrap();
        assert_eq!(rel.len(), 4);
        assert_eq!(rel.edges[1].class, vec![3, 0, -1]);
        assert_eq!(rel.edges[2].class, vec![2, -1, 0]);
        assert!(rel.links.iter().all(|l| l.variant == LinkType::TypeIICurve));
        let dot = render_dot(&rel);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 9);
        assert!(relation_over_curve(&MinimalModel::p2(), 1, 1).is_err());
    }

    #[test]
    fn strict_rejects() {
        assert!(RankThreeFibration::over_point(&MinimalModel::p2(), 5, 5, true).is_err());
    }
}
