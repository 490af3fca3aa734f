//! Minimal Mori fibre spaces, field profiles and the static classification tables.

use std::fmt;
use std::str::FromStr;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("invalid surface spec `{0}`")]
    BadSurface(String),
    #[error("invalid field spec `{0}`")]
    BadField(String),
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("not applicable to {0}")]
    NotApplicable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Closure {
    Arbitrary,
    Perfect,
    SeparablyClosed,
    AlgebraicallyClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldProfile {
    pub closure: Closure,
    pub characteristic: u32,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(e: i64, p: i64) -> bool {
    if e < 1 {
        return false;
    }
    let mut e = e;
    while e % p == 0 {
        e /= p;
    }
    e == 1
}

impl FieldProfile {
    pub fn arbitrary() -> Self {
        FieldProfile { closure: Closure::Arbitrary, characteristic: 0 }
    }

    pub fn perfect(p: u32) -> Self {
        FieldProfile { closure: Closure::Perfect, characteristic: p }
    }

    pub fn separably_closed(p: u32) -> Self {
        FieldProfile { closure: Closure::SeparablyClosed, characteristic: p }
    }

    pub fn algebraically_closed(p: u32) -> Self {
        FieldProfile { closure: Closure::AlgebraicallyClosed, characteristic: p }
    }

    /// Whether closed points of degree `e` can exist at all.
    pub fn allows_degree(&self, e: i64) -> bool {
        if e < 1 {
            return false;
        }
        match self.closure {
            Closure::Arbitrary | Closure::Perfect => true,
            Closure::SeparablyClosed if self.characteristic > 0 => {
                is_power_of(e, i64::from(self.characteristic))
            }
            Closure::SeparablyClosed | Closure::AlgebraicallyClosed => e == 1,
        }
    }
}

impl fmt::Display for FieldProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.characteristic;
        match self.closure {
            Closure::Arbitrary => write!(f, "arbitrary"),
            Closure::Perfect if p == 0 => write!(f, "perfect"),
            Closure::Perfect => write!(f, "perfect:{p}"),
            Closure::SeparablyClosed => write!(f, "sep-closed:{p}"),
            Closure::AlgebraicallyClosed => write!(f, "alg-closed:{p}"),
        }
    }
}

impl FromStr for FieldProfile {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::BadField(s.to_string());
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let p = match parts.next() {
            None => None,
            Some(t) => Some(t.parse::<u32>().map_err(|_| bad())?),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        if let Some(p) = p {
            if p != 0 && !is_prime(p) {
                return Err(CatalogError::NotPrime(p));
            }
        }
        match (head, p) {
            ("arbitrary", None) => Ok(FieldProfile::arbitrary()),
            ("perfect", p) => Ok(FieldProfile::perfect(p.unwrap_or(0))),
            ("sep-closed", Some(p)) => Ok(FieldProfile::separably_closed(p)),
            ("alg-closed", Some(p)) => Ok(FieldProfile::algebraically_closed(p)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    P2,
    SeveriBrauerNontrivial,
    Quadric,
    DP8NonQuadric,
    DPd,
}

/// Base of a Mori conic bundle: `P1`, or a pointless conic `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BundleBase {
    P1,
    Pointless,
}

impl BundleBase {
    pub fn from_delta(delta: i64) -> Self {
        if delta == 1 {
            BundleBase::P1
        } else {
            BundleBase::Pointless
        }
    }

    pub fn suffix(&self) -> &'static str {
        match self {
            BundleBase::P1 => "P1",
            BundleBase::Pointless => "B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    DelPezzoPoint { k2: u8, lambda: u8, family: FamilyTag },
    MoriConicBundle { k2: u8, base: BundleBase },
    Hirzebruch { n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeometricClass {
    Smooth,
    GeomCanonical,
    GeomNonNormal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinimalModel {
    pub kind: ModelKind,
    pub rho: u8,
    pub geometric_class: GeometricClass,
}

impl MinimalModel {
    fn point(k2: u8, lambda: u8, family: FamilyTag) -> Self {
        MinimalModel {
            kind: ModelKind::DelPezzoPoint { k2, lambda, family },
            rho: 1,
            geometric_class: GeometricClass::Smooth,
        }
    }

    pub fn p2() -> Self {
        Self::point(9, 3, FamilyTag::P2)
    }

    pub fn severi_brauer() -> Self {
        Self::point(9, 1, FamilyTag::SeveriBrauerNontrivial)
    }

    pub fn quadric() -> Self {
        Self::point(8, 2, FamilyTag::Quadric)
    }

    pub fn dp8_nonquadric() -> Self {
        Self::point(8, 1, FamilyTag::DP8NonQuadric)
    }

    /// Del Pezzo surface of degree `k2 <= 6` and Picard rank one.
    pub fn dp(k2: u8) -> Self {
        assert!((1..=6).contains(&k2), "dp degree {k2} out of range");
        Self::point(k2, 1, FamilyTag::DPd)
    }

    pub fn dp_nonnormal(k2: u8) -> Self {
        let mut m = match k2 {
            9 => Self::p2(),
            8 => Self::dp8_nonquadric(),
            _ => Self::dp(k2),
        };
        m.geometric_class = GeometricClass::GeomNonNormal;
        m
    }

    pub fn hirzebruch(n: u32) -> Self {
        MinimalModel {
            kind: ModelKind::Hirzebruch { n },
            rho: 2,
            geometric_class: GeometricClass::Smooth,
        }
    }

    pub fn conic(k2: u8) -> Self {
        Self::conic_over(k2, BundleBase::P1)
    }

    pub fn conic_over(k2: u8, base: BundleBase) -> Self {
        MinimalModel {
            kind: ModelKind::MoriConicBundle { k2, base },
            rho: 2,
            geometric_class: GeometricClass::Smooth,
        }
    }

    /// Model of the given point family with `K^2` and anticanonical divisibility.
    pub fn from_point_invariants(k2: i64, lambda: i64) -> Option<Self> {
        match (k2, lambda) {
            (9, 3) => Some(Self::p2()),
            (9, 1) => Some(Self::severi_brauer()),
            (8, 2) => Some(Self::quadric()),
            (8, 1) => Some(Self::dp8_nonquadric()),
            (1..=6, 1) => Some(Self::dp(k2 as u8)),
            _ => None,
        }
    }

    pub fn k2(&self) -> i64 {
        match self.kind {
            ModelKind::DelPezzoPoint { k2, .. } | ModelKind::MoriConicBundle { k2, .. } => i64::from(k2),
            ModelKind::Hirzebruch { .. } => 8,
        }
    }

    pub fn lambda(&self) -> Option<i64> {
        match self.kind {
            ModelKind::DelPezzoPoint { lambda, .. } => Some(i64::from(lambda)),
            _ => None,
        }
    }

    /// `H^2` of the ample generator.
    pub fn h2(&self) -> Option<i64> {
        self.lambda().map(|l| self.k2() / (l * l))
    }

    pub fn family_tag(&self) -> Option<FamilyTag> {
        match self.kind {
            ModelKind::DelPezzoPoint { family, .. } => Some(family),
            _ => None,
        }
    }

    pub fn is_point_family(&self) -> bool {
        matches!(self.kind, ModelKind::DelPezzoPoint { .. })
    }

    /// Family-level name, shared by all members (all `F_n`, all quadrics, ...).
    pub fn family_name(&self) -> String {
        match self.kind {
            ModelKind::DelPezzoPoint { family, k2, .. } => {
                let base = match family {
                    FamilyTag::P2 => "p2".to_string(),
                    FamilyTag::SeveriBrauerNontrivial => "severi_brauer".to_string(),
                    FamilyTag::Quadric => "quadric".to_string(),
                    FamilyTag::DP8NonQuadric => "dp8_nonquadric".to_string(),
                    FamilyTag::DPd => format!("dp{k2}"),
                };
                if self.geometric_class == GeometricClass::GeomNonNormal {
                    format!("{base}_nonnormal")
                } else {
                    base
                }
            }
            ModelKind::MoriConicBundle { k2, base: BundleBase::P1 } => format!("conic{k2}"),
            ModelKind::MoriConicBundle { k2, base: BundleBase::Pointless } => format!("conic{k2}_pointless"),
            ModelKind::Hirzebruch { .. } => "hirzebruch".to_string(),
        }
    }

    /// Surface spec in the command-line grammar.
    pub fn spec(&self) -> String {
        match self.kind {
            ModelKind::DelPezzoPoint { k2, lambda, family } => {
                let mut s = format!("dp:{k2}");
                if k2 >= 8 {
                    s.push_str(&format!(":l{lambda}"));
                }
                match family {
                    FamilyTag::SeveriBrauerNontrivial => s.push_str(":sb"),
                    FamilyTag::DP8NonQuadric => s.push_str(":nonquadric"),
                    _ => {}
                }
                if self.geometric_class == GeometricClass::GeomNonNormal {
                    s.push_str(":nonnormal");
                }
                s
            }
            ModelKind::MoriConicBundle { k2, base: BundleBase::P1 } => format!("conic:{k2}"),
            ModelKind::MoriConicBundle { k2, base: BundleBase::Pointless } => format!("conic:{k2}:b"),
            ModelKind::Hirzebruch { n } => format!("hirz:{n}"),
        }
    }

    /// Short figure-style label: `P2`, `X8`, `F1/P1`, `X6/B`.
    pub fn label(&self) -> String {
        match self.kind {
            ModelKind::DelPezzoPoint { family: FamilyTag::P2, .. } => "P2".into(),
            ModelKind::DelPezzoPoint { k2, .. } => format!("X{k2}"),
            ModelKind::MoriConicBundle { k2, base } => format!("X{k2}/{}", base.suffix()),
            ModelKind::Hirzebruch { n } => format!("F{n}/P1"),
        }
    }

    pub fn is_rational(&self) -> bool {
        if self.geometric_class == GeometricClass::GeomNonNormal {
            return false;
        }
        match self.kind {
            ModelKind::DelPezzoPoint { family, k2, .. } => match family {
                FamilyTag::P2 | FamilyTag::Quadric => true,
                FamilyTag::DPd => k2 >= 5,
                _ => false,
            },
            ModelKind::MoriConicBundle { k2, base } => base == BundleBase::P1 && k2 >= 5,
            ModelKind::Hirzebruch { .. } => true,
        }
    }

    /// Geometric singularity of the model over a separably closed field, if any.
    pub fn geometric_singularity(&self) -> Option<&'static str> {
        if self.geometric_class != GeometricClass::GeomCanonical {
            return None;
        }
        match self.kind {
            ModelKind::DelPezzoPoint { family: FamilyTag::Quadric, .. } => Some("A1"),
            ModelKind::DelPezzoPoint { k2: 5, .. } => Some("A4"),
            _ => None,
        }
    }

    fn record(&self) -> Option<&'static FamilyRecord> {
        let name = self.family_name();
        let name = name.trim_end_matches("_nonnormal");
        CATALOG.families.iter().find(|r| r.family == name)
    }

    /// Whether models of this family occur over the field at all.
    pub fn exists_over(&self, field: &FieldProfile) -> bool {
        let nonnormal = self.geometric_class == GeometricClass::GeomNonNormal;
        if nonnormal {
            let p = field.characteristic;
            let ok_k2 = match p {
                2 => matches!(self.k2(), 1 | 2 | 4),
                3 => matches!(self.k2(), 1 | 3),
                _ => false,
            };
            return ok_k2 && matches!(field.closure, Closure::Arbitrary | Closure::SeparablyClosed);
        }
        match field.closure {
            Closure::Arbitrary | Closure::Perfect => true,
            Closure::AlgebraicallyClosed => matches!(
                self.kind,
                ModelKind::DelPezzoPoint { family: FamilyTag::P2, .. } | ModelKind::Hirzebruch { .. }
            ),
            Closure::SeparablyClosed => {
                let p = field.characteristic;
                match self.kind {
                    ModelKind::Hirzebruch { .. } => true,
                    ModelKind::DelPezzoPoint { family, k2, .. } => match family {
                        FamilyTag::P2 => true,
                        FamilyTag::Quadric => p == 2,
                        FamilyTag::SeveriBrauerNontrivial | FamilyTag::DP8NonQuadric => false,
                        FamilyTag::DPd => match k2 {
                            6 => false,
                            5 => p == 5,
                            _ => true,
                        },
                    },
                    ModelKind::MoriConicBundle { k2, base } => {
                        base == BundleBase::P1 && (k2 <= 4 || (matches!(k2, 5 | 6) && p == 2))
                    }
                }
            }
        }
    }

    /// Representative model as it occurs over `field` (geometric class adjusted).
    pub fn over(&self, field: &FieldProfile) -> MinimalModel {
        let mut m = self.clone();
        if field.closure == Closure::SeparablyClosed
            && m.geometric_class == GeometricClass::Smooth
            && matches!(
                m.kind,
                ModelKind::DelPezzoPoint { family: FamilyTag::Quadric, .. }
                    | ModelKind::DelPezzoPoint { family: FamilyTag::DPd, k2: 5, .. }
            )
        {
            m.geometric_class = GeometricClass::GeomCanonical;
        }
        m
    }
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl FromStr for MinimalModel {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::BadSurface(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        match parts.as_slice() {
            ["hirz", n] => Ok(MinimalModel::hirzebruch(num(n)?)),
            ["conic", k] => {
                let k = num(k)?;
                if !(1..=6).contains(&k) {
                    return Err(bad());
                }
                Ok(MinimalModel::conic(k as u8))
            }
            ["conic", k, "b"] => {
                let k = num(k)?;
                if !(1..=6).contains(&k) {
                    return Err(bad());
                }
                Ok(MinimalModel::conic_over(k as u8, BundleBase::Pointless))
            }
            ["dp", k, rest @ ..] => {
                let k2 = num(k)?;
                let mut lambda = None;
                let mut tag = None;
                for t in rest {
                    if let Some(l) = t.strip_prefix('l') {
                        if lambda.is_some() {
                            return Err(bad());
                        }
                        lambda = Some(num(l)?);
                    } else if tag.is_none() && matches!(*t, "nonquadric" | "sb" | "nonnormal") {
                        tag = Some(*t);
                    } else {
                        return Err(bad());
                    }
                }
                let model = match (k2, lambda, tag) {
                    (9, None | Some(3), None) => MinimalModel::p2(),
                    (9, None | Some(1), Some("sb")) | (9, Some(1), None) => MinimalModel::severi_brauer(),
                    (8, None | Some(2), None) => MinimalModel::quadric(),
                    (8, None | Some(1), Some("nonquadric")) | (8, Some(1), None) => {
                        MinimalModel::dp8_nonquadric()
                    }
                    (1..=6, None | Some(1), None) => MinimalModel::dp(k2 as u8),
                    (1..=4, None | Some(1), Some("nonnormal")) => MinimalModel::dp_nonnormal(k2 as u8),
                    _ => return Err(bad()),
                };
                Ok(model)
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub family: String,
    pub k2: u8,
    pub lambda: Option<u8>,
    pub h2: Option<u8>,
    pub degree_divisor: u8,
    pub geometric_class: GeometricClass,
    pub rational: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CatalogFile {
    pub version: u32,
    pub families: Vec<FamilyRecord>,
}

pub static CATALOG: Lazy<CatalogFile> = Lazy::new(|| {
    serde_json::from_str(include_str!("../../../data/catalog.json")).expect("embedded catalog.json is malformed")
});

/// Degrees of closed points that may be blown up on `model` over `field`.
pub fn allowed_point_degrees(model: &MinimalModel, field: &FieldProfile) -> impl Fn(i64) -> bool {
    let divisor = model.record().map_or(1, |r| i64::from(r.degree_divisor));
    let field = *field;
    move |e| e >= 1 && e % divisor == 0 && field.allows_degree(e)
}

/// Rational minimal models; `hirz:0` stands for the whole family `F_n`.
pub fn rational_minimal_models(field: &FieldProfile) -> Vec<MinimalModel> {
    [
        MinimalModel::p2(),
        MinimalModel::quadric(),
        MinimalModel::dp(6),
        MinimalModel::dp(5),
        MinimalModel::hirzebruch(0),
        MinimalModel::conic(5),
        MinimalModel::conic(6),
    ]
    .into_iter()
    .filter(|m| m.exists_over(field))
    .map(|m| m.over(field))
    .collect()
}

/// Every family the engine knows about, rational ones first.
pub fn all_families() -> Vec<MinimalModel> {
    let mut out = rational_minimal_models(&FieldProfile::arbitrary());
    out.extend([
        MinimalModel::severi_brauer(),
        MinimalModel::dp8_nonquadric(),
        MinimalModel::dp(4),
        MinimalModel::dp(3),
        MinimalModel::dp(2),
        MinimalModel::dp(1),
        MinimalModel::conic_over(6, BundleBase::Pointless),
        MinimalModel::conic(4),
        MinimalModel::conic(3),
        MinimalModel::conic(2),
        MinimalModel::conic(1),
    ]);
    out.extend([1, 2, 3, 4].map(MinimalModel::dp_nonnormal));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonNormalRow {
    pub y: &'static str,
    pub c: &'static str,
    pub pullback_k2: u8,
    pub rho_sep: u8,
}

const fn nn(y: &'static str, c: &'static str, pullback_k2: u8, rho_sep: u8) -> NonNormalRow {
    NonNormalRow { y, c, pullback_k2, rho_sep }
}

const NON_NORMAL_P3: [NonNormalRow; 2] = [nn("P2", "H", 1, 1), nn("P(1,1,3)", "H", 3, 1)];

const NON_NORMAL_P2: [NonNormalRow; 12] = [
    nn("P2", "H", 4, 1),
    nn("P2", "2H", 1, 1),
    nn("P(1,1,2)", "2H", 2, 1),
    nn("P(1,1,4)", "2H", 4, 1),
    nn("P1xP1", "F", 4, 2),
    nn("P1xP1", "F+G", 2, 2),
    nn("F1", "S1", 5, 2),
    nn("F1", "S1+F", 3, 2),
    nn("F2", "S2", 6, 2),
    nn("F2", "S2+F", 4, 2),
    nn("F4", "S4", 8, 2),
    nn("F4", "S4+F", 6, 2),
];

/// Normalised base changes of geometrically non-normal del Pezzo surfaces.
pub fn non_normal_dp_table(p: u32) -> Result<Vec<NonNormalRow>, CatalogError> {
    if !is_prime(p) {
        return Err(CatalogError::NotPrime(p));
    }
    Ok(match p {
        2 => NON_NORMAL_P2.to_vec(),
        3 => NON_NORMAL_P3.to_vec(),
        _ => Vec::new(),
    })
}

pub fn is_super_rigid(model: &MinimalModel) -> Result<bool, CatalogError> {
    if !model.is_point_family() {
        return Err(CatalogError::NotApplicable(model.spec()));
    }
    Ok(model.geometric_class == GeometricClass::GeomNonNormal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_rules() {
        let sep2 = FieldProfile::separably_closed(2);
        assert!(allowed_point_degrees(&MinimalModel::p2(), &sep2)(8));
        assert!(!allowed_point_degrees(&MinimalModel::p2(), &sep2)(6));
        let arb = FieldProfile::arbitrary();
        assert!(!allowed_point_degrees(&MinimalModel::severi_brauer(), &arb)(2));
        assert!(allowed_point_degrees(&MinimalModel::severi_brauer(), &arb)(6));
        assert!(!allowed_point_degrees(&MinimalModel::dp8_nonquadric(), &arb)(3));
        assert!(!allowed_point_degrees(&MinimalModel::p2(), &FieldProfile::algebraically_closed(0))(2));
    }

    #[test]
    fn rational_lists() {
        assert_eq!(rational_minimal_models(&FieldProfile::arbitrary()).len(), 7);
        let p3 = rational_minimal_models(&FieldProfile::separably_closed(3));
        assert_eq!(p3, vec![MinimalModel::p2(), MinimalModel::hirzebruch(0)]);
        let p5 = rational_minimal_models(&FieldProfile::separably_closed(5));
        assert!(p5.iter().any(|m| m.geometric_singularity() == Some("A4")));
        let p2 = rational_minimal_models(&FieldProfile::separably_closed(2));
        assert_eq!(p2.len(), 5);
        assert!(p2.iter().any(|m| m.geometric_singularity() == Some("A1")));
        for f in ["arbitrary", "sep-closed:2", "sep-closed:5", "alg-closed:0"] {
            let f: FieldProfile = f.parse().unwrap();
            assert!(rational_minimal_models(&f).iter().all(|m| m.k2() >= 5));
        }
    }

    #[test]
    fn non_normal() {
        let t = non_normal_dp_table(3).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], nn("P2", "H", 1, 1));
        let t = non_normal_dp_table(2).unwrap();
        assert_eq!(t.len(), 12);
        assert!(t.contains(&nn("F4", "S4", 8, 2)));
        assert!(non_normal_dp_table(11).unwrap().is_empty());
        assert_eq!(non_normal_dp_table(9), Err(CatalogError::NotPrime(9)));
        let k2s: Vec<u8> = non_normal_dp_table(3).unwrap().iter().map(|r| r.pullback_k2).collect();
        assert!(k2s.iter().all(|k| [1, 3].contains(k)));
        let k2s: Vec<u8> = non_normal_dp_table(2).unwrap().iter().map(|r| r.pullback_k2).collect();
        assert!(k2s.iter().all(|k| [1, 2, 3, 4, 5, 6, 8].contains(k)));
    }

    #[test]
    fn rigidity() {
        assert_eq!(is_super_rigid(&MinimalModel::dp_nonnormal(2)), Ok(true));
        assert_eq!(is_super_rigid(&MinimalModel::dp_nonnormal(4)), Ok(true));
        assert_eq!(is_super_rigid(&MinimalModel::dp(5)), Ok(false));
        assert!(is_super_rigid(&MinimalModel::hirzebruch(1)).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for m in all_families().into_iter().chain([MinimalModel::hirzebruch(3)]) {
            let back: MinimalModel = m.spec().parse().unwrap();
            assert_eq!(back, m, "{}", m.spec());
        }
        assert_eq!("dp:9".parse::<MinimalModel>().unwrap(), MinimalModel::p2());
        assert_eq!("dp:8:l1".parse::<MinimalModel>().unwrap(), MinimalModel::dp8_nonquadric());
        assert!("dp:7".parse::<MinimalModel>().is_err());
        assert!("dp:9:l2".parse::<MinimalModel>().is_err());
        assert!("dp:5:nonnormal".parse::<MinimalModel>().is_err());
        assert!("hirz:x".parse::<MinimalModel>().is_err());
    }

    #[test]
    fn field_specs() {
        for s in ["arbitrary", "perfect", "perfect:5", "sep-closed:2", "alg-closed:0"] {
            assert_eq!(s.parse::<FieldProfile>().unwrap().to_string(), s);
        }
        assert_eq!("sep-closed:4".parse::<FieldProfile>(), Err(CatalogError::NotPrime(4)));
        assert!("sep-closed".parse::<FieldProfile>().is_err());
    }

    #[test]
    fn catalog_consistent() {
        assert_eq!(CATALOG.version, 1);
        for m in all_families() {
            let r = m.record().unwrap_or_else(|| panic!("no record for {}", m.family_name()));
            assert_eq!(i64::from(r.k2), m.k2());
            assert_eq!(r.lambda.map(i64::from), m.lambda());
            assert_eq!(r.h2.map(i64::from), m.h2());
            if m.geometric_class != GeometricClass::GeomNonNormal {
                assert_eq!(r.rational, m.is_rational(), "{}", r.family);
            }
        }
    }
}
