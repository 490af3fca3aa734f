//! Picard lattices of marked blow-ups of minimal surfaces.
//!
//! A lattice is spanned by an H-part (one ample generator `H`, or two rulings
//! `H1`, `H2`) followed by one exceptional class per blown-up point.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{MinimalModel, ModelKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("classes belong to different lattices")]
    LatticeMismatch,
    #[error("coefficient vector has length {got}, lattice has rank {rank}")]
    RankMismatch { got: usize, rank: usize },
    #[error("blowing up a point of degree {degree} exceeds the del Pezzo bound: {sum} >= K^2 = {k2}")]
    DegreeBound { degree: i64, sum: i64, k2: i64 },
    #[error("point degrees must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("no marked lattice for {0}")]
    Unsupported(String),
}

/// Shape of the H-part of the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HBasis {
    /// One generator with `H^2 = h2` and `-K = lambda H`.
    Single { h2: i64, lambda: i64 },
    /// Two isotropic rulings with `H1.H2 = h1h2` and `-K = mu (H1 + H2)`.
    Pair { h1h2: i64, mu: i64 },
}

impl HBasis {
    pub fn len(&self) -> usize {
        match self {
            HBasis::Single { .. } => 1,
            HBasis::Pair { .. } => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> Vec<String> {
        match self {
            HBasis::Single { .. } => vec!["H".into()],
            HBasis::Pair { .. } => vec!["H1".into(), "H2".into()],
        }
    }
}

/// Picard lattice of a surface obtained by blowing up points on a minimal model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedLattice {
    ambient: MinimalModel,
    h_basis: HBasis,
    exceptional_degrees: Vec<i64>,
    gram: Vec<Vec<i64>>,
    canonical: Vec<i64>,
}

fn checked_dot(gram: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    let mut acc: i64 = 0;
    for (i, row) in gram.iter().enumerate() {
        if u[i] == 0 {
            continue;
        }
        for (j, g) in row.iter().enumerate() {
            if *g == 0 || v[j] == 0 {
                continue;
            }
            let t = u[i]
                .checked_mul(*g)
                .and_then(|x| x.checked_mul(v[j]))
                .expect("intersection product overflow");
            acc = acc.checked_add(t).expect("intersection product overflow");
        }
    }
    acc
}

impl MarkedLattice {
    /// Lattice of the minimal model itself, before any blow-up.
    pub fn of_model(model: &MinimalModel) -> Result<Self, LatticeError> {
        let h_basis = match model.kind {
            ModelKind::DelPezzoPoint { k2, lambda, .. } => {
                let lambda = i64::from(lambda);
                HBasis::Single {
                    h2: i64::from(k2) / (lambda * lambda),
                    lambda,
                }
            }
            ModelKind::Hirzebruch { n: 0 } => HBasis::Pair { h1h2: 1, mu: 2 },
            ModelKind::MoriConicBundle { k2: 4, .. } => HBasis::Pair { h1h2: 2, mu: 1 },
            _ => return Err(LatticeError::Unsupported(model.spec())),
        };
        let (gram, canonical) = match h_basis {
            HBasis::Single { h2, lambda } => (vec![vec![h2]], vec![-lambda]),
            HBasis::Pair { h1h2, mu } => (vec![vec![0, h1h2], vec![h1h2, 0]], vec![-mu, -mu]),
        };
        Ok(MarkedLattice {
            ambient: model.clone(),
            h_basis,
            exceptional_degrees: Vec::new(),
            gram,
            canonical,
        })
    }

    /// Blow up a point of the given degree. With `strict`, the total degree of
    /// blown-up points must stay below `K^2` of the ambient surface.
    pub fn blow_up(&self, degree: i64, strict: bool) -> Result<Self, LatticeError> {
        if degree < 1 {
            return Err(LatticeError::NonPositiveDegree(degree));
        }
        let sum: i64 = self.exceptional_degrees.iter().sum::<i64>() + degree;
        let k2 = self.ambient_k2();
        if strict && sum >= k2 {
            return Err(LatticeError::DegreeBound { degree, sum, k2 });
        }
        let r = self.rank();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.push(0);
                row
            })
            .collect();
        let mut last = vec![0; r + 1];
        last[r] = -degree;
        gram.push(last);
        let mut canonical = self.canonical.clone();
        canonical.push(1);
        let mut exceptional_degrees = self.exceptional_degrees.clone();
        exceptional_degrees.push(degree);
        Ok(MarkedLattice {
            ambient: self.ambient.clone(),
            h_basis: self.h_basis,
            exceptional_degrees,
            gram,
            canonical,
        })
    }

    pub fn ambient(&self) -> &MinimalModel {
        &self.ambient
    }

    pub fn h_basis(&self) -> HBasis {
        self.h_basis
    }

    pub fn exceptional_degrees(&self) -> &[i64] {
        &self.exceptional_degrees
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &[i64] {
        &self.canonical
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn ambient_k2(&self) -> i64 {
        let k = &self.canonical[..self.h_basis.len()];
        checked_dot(&self.gram, &pad(k, self.rank()), &pad(k, self.rank()))
    }

    /// `K_T^2`, computed from the Gram matrix.
    pub fn canonical_self_intersection(&self) -> i64 {
        self.dot(&self.canonical, &self.canonical)
    }

    /// Bilinear form on raw coefficient vectors.
    pub fn dot(&self, u: &[i64], v: &[i64]) -> i64 {
        debug_assert_eq!(u.len(), self.rank());
        debug_assert_eq!(v.len(), self.rank());
        checked_dot(&self.gram, u, v)
    }

    pub fn k_dot(&self, v: &[i64]) -> i64 {
        self.dot(&self.canonical, v)
    }

    /// Raw-vector version of [`classify_class`].
    pub fn classify(&self, v: &[i64]) -> ClassKind {
        if v.iter().all(|c| *c == 0) {
            return ClassKind::Other;
        }
        let sq = self.dot(v, v);
        let k = self.k_dot(v);
        if sq == k && sq < 0 {
            return ClassKind::FirstKind(-sq);
        }
        if sq == 0 && k < 0 && k % 2 == 0 && is_primitive(v) {
            return ClassKind::FibreClass(-k / 2);
        }
        ClassKind::Other
    }

    /// Basis symbols: `H` or `H1,H2`, then `E`, `F` for two points, `E1..Er` otherwise.
    pub fn symbols(&self) -> Vec<String> {
        let mut s = self.h_basis.symbols();
        let r = self.exceptional_degrees.len();
        match r {
            0 => {}
            1 if matches!(self.h_basis, HBasis::Pair { .. }) => s.push("F".into()),
            1 => s.push("E".into()),
            2 => {
                s.push("E".into());
                s.push("F".into());
            }
            _ => s.extend((1..=r).map(|i| format!("E{i}"))),
        }
        s
    }

    pub fn render(&self, v: &[i64]) -> String {
        render_class(&self.symbols(), v)
    }

    pub fn class(self: &Arc<Self>, coeffs: Vec<i64>) -> Result<DivisorClass, LatticeError> {
        DivisorClass::new(self.clone(), coeffs)
    }

    /// Exceptional basis vector of the `i`-th blown-up point.
    pub fn exceptional(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[self.h_basis.len() + i] = 1;
        v
    }
}

fn pad(v: &[i64], n: usize) -> Vec<i64> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, c| g.gcd(c)) == 1
}

/// Divide by the gcd of the coefficients.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, c| g.gcd(c));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|c| c / g).collect()
}

pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, c| g.gcd(c))
}

/// Render a class like `3H-2E-F`.
pub fn render_class(symbols: &[String], v: &[i64]) -> String {
    let mut out = String::new();
    for (c, s) in v.iter().zip(symbols) {
        if *c == 0 {
            continue;
        }
        if *c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(s);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    FirstKind(i64),
    FibreClass(i64),
    Other,
}

/// Integer class in a marked lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<MarkedLattice>,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(lattice: Arc<MarkedLattice>, coeffs: Vec<i64>) -> Result<Self, LatticeError> {
        if coeffs.len() != lattice.rank() {
            return Err(LatticeError::RankMismatch {
                got: coeffs.len(),
                rank: lattice.rank(),
            });
        }
        Ok(DivisorClass { lattice, coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn lattice(&self) -> &Arc<MarkedLattice> {
        &self.lattice
    }

    fn same_lattice(&self, other: &DivisorClass) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice
    }

    /// `a*self + b*other`.
    pub fn combine(&self, a: i64, other: &DivisorClass, b: i64) -> Result<DivisorClass, LatticeError> {
        if !self.same_lattice(other) {
            return Err(LatticeError::LatticeMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(DivisorClass {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lattice.render(&self.coeffs))
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<i64, LatticeError> {
    if !d1.same_lattice(d2) {
        return Err(LatticeError::LatticeMismatch);
    }
    Ok(d1.lattice.dot(&d1.coeffs, &d2.coeffs))
}

pub fn canonical_self_intersection(l: &MarkedLattice) -> i64 {
    l.canonical_self_intersection()
}

pub fn classify_class(d: &DivisorClass) -> ClassKind {
    d.lattice.classify(&d.coeffs)
}

pub fn blow_up(l: &MarkedLattice, degree: i64, strict: bool) -> Result<MarkedLattice, LatticeError> {
    l.blow_up(degree, strict)
}
