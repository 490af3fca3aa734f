//! Reference data on disk: figure pieces and the link tables.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{all_families, FieldProfile, MinimalModel};
use crate::links::{enumerate_type_I, enumerate_type_II_point};
use crate::relations::{enumerate_pieces, EdgeKind, ElementaryRelation, RelationError};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Compute(RelationError),
}

/// `SARKI_DATA_DIR` if set, else the `data/` directory shipped with the workspace.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("SARKI_DATA_DIR") {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| DataError::Parse { path: path.into(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenOrigin {
    pub family: String,
    pub k2: i64,
    pub lambda: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCenter {
    pub k2: i64,
    pub label: String,
    pub origin: GoldenOrigin,
    pub degrees: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenSide {
    pub label: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCorner {
    pub label: String,
    pub base: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEdge {
    pub kind: EdgeKind,
    /// `None` where the figure leaves the class unspecified.
    pub class: Option<Vec<i64>>,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenPiece {
    pub id: String,
    pub rational: bool,
    pub center: GoldenCenter,
    pub basis: Vec<String>,
    pub sides: Vec<GoldenSide>,
    pub corners: Vec<GoldenCorner>,
    pub edges: Vec<GoldenEdge>,
}

pub fn load_pieces(dir: &Path) -> Result<Vec<GoldenPiece>, DataError> {
    let pdir = dir.join("pieces");
    let entries = fs::read_dir(&pdir).map_err(|source| DataError::Io { path: pdir.clone(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read_json(p)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceKey {
    pub family: String,
    pub k2: i64,
    pub lambda: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIIRow {
    #[serde(rename = "type")]
    pub kind: String,
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub m: i64,
    pub target_k2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIIBlock {
    pub surface: SurfaceKey,
    pub links: Vec<TypeIIRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIRow {
    #[serde(rename = "type")]
    pub kind: String,
    pub a: i64,
    pub target: String,
    pub c: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIBlock {
    pub surface: SurfaceKey,
    pub links: Vec<TypeIRow>,
}

pub fn load_type_II(dir: &Path) -> Result<Vec<TypeIIBlock>, DataError> {
    read_json(&dir.join("table_linkII.json"))
}

pub fn load_type_I(dir: &Path) -> Result<Vec<TypeIBlock>, DataError> {
    read_json(&dir.join("table_linkI.json"))
}

fn same_shape(rel: &ElementaryRelation, g: &GoldenPiece) -> bool {
    rel.sides.iter().zip(&g.sides).all(|(s, t)| s.label == t.label && s.kind == t.kind)
        && rel.corners.iter().zip(&g.corners).all(|(c, t)| c.label == t.label && c.base == t.base)
        && rel.edges.iter().zip(&g.edges).all(|(e, t)| {
            e.kind == t.kind && e.degree == t.degree && t.class.as_ref().is_none_or(|c| *c == e.class)
        })
}

/// Whether `rel` agrees with the reference figure up to rotation and reflection.
pub fn matches_golden(rel: &ElementaryRelation, g: &GoldenPiece) -> bool {
    let n = rel.len();
    if n != g.sides.len() || n != g.corners.len() || n != g.edges.len() {
        return false;
    }
    if rel.center.k2 != g.center.k2 || rel.center.label != g.center.label || rel.basis != g.basis {
        return false;
    }
    let o = &rel.center.origin;
    let go = &g.center.origin;
    if o.family != go.family || o.k2 != go.k2 || o.lambda != go.lambda {
        return false;
    }
    (0..n).any(|r| [false, true].into_iter().any(|f| same_shape(&rel.transformed(r, f), g)))
}

/// Which reference tables to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    TypeII,
    TypeI,
    Pieces,
}

fn family(name: &str) -> Option<MinimalModel> {
    all_families().into_iter().find(|m| m.family_name() == name)
}

fn diff_rows<T: Ord + std::fmt::Debug>(what: &str, got: BTreeSet<T>, want: BTreeSet<T>, out: &mut Vec<String>) {
    for r in want.difference(&got) {
        out.push(format!("{what}: missing row {r:?}"));
    }
    for r in got.difference(&want) {
        out.push(format!("{what}: unexpected row {r:?}"));
    }
}

type IIRow = (String, i64, i64, i64, i64, i64);

/// Recompute the type II table and list every row that differs from the reference.
pub fn check_type_II(dir: &Path) -> Result<Vec<String>, DataError> {
    let blocks = load_type_II(dir)?;
    let arb = FieldProfile::arbitrary();
    let mut out = Vec::new();
    for block in &blocks {
        let name = &block.surface.family;
        let Some(src) = family(name) else {
            out.push(format!("type II: unknown surface {name}"));
            continue;
        };
        let want: BTreeSet<IIRow> =
            block.links.iter().map(|r| (name.clone(), r.a, r.b, r.d, r.m, r.target_k2)).collect();
        let got: BTreeSet<IIRow> = enumerate_type_II_point(&src, &arb)
            .into_iter()
            .filter_map(|l| l.eprime.map(|(d, m)| (name.clone(), l.a, l.b, d, m, l.target_k2())))
            .collect();
        diff_rows("type II", got, want, &mut out);
    }
    Ok(out)
}

pub fn check_type_I(dir: &Path) -> Result<Vec<String>, DataError> {
    let blocks = load_type_I(dir)?;
    let mut out = Vec::new();
    let mut want = BTreeSet::new();
    for block in &blocks {
        for r in &block.links {
            want.insert((block.surface.family.clone(), r.a, r.target.clone(), r.c[0], r.c[1]));
        }
    }
    let mut got = BTreeSet::new();
    for m in all_families() {
        for l in enumerate_type_I(&m) {
            let (u, v) = l.fibre_class.unwrap_or_default();
            got.insert((m.family_name(), l.a, l.target.spec(), u, v));
        }
    }
    diff_rows("type I", got, want, &mut out);
    Ok(out)
}

pub fn check_pieces(dir: &Path) -> Result<Vec<String>, DataError> {
    let goldens = load_pieces(dir)?;
    let pieces = enumerate_pieces(&FieldProfile::arbitrary(), true).map_err(DataError::Compute)?;
    let mut out = Vec::new();
    for g in &goldens {
        match pieces.iter().find(|p| p.id == g.id) {
            None => out.push(format!("piece {}: not generated", g.id)),
            Some(p) if p.rational != g.rational => out.push(format!("piece {}: rationality differs", g.id)),
            Some(p) if !matches_golden(&p.relation, g) => out.push(format!("piece {}: polygon differs", g.id)),
            Some(_) => {}
        }
    }
    for p in &pieces {
        if !goldens.iter().any(|g| g.id == p.id) {
            out.push(format!("piece {}: no reference figure", p.id));
        }
    }
    Ok(out)
}

pub fn check(dir: &Path, which: Check) -> Result<Vec<String>, DataError> {
    match which {
        Check::TypeII => check_type_II(dir),
        Check::TypeI => check_type_I(dir),
        Check::Pieces => check_pieces(dir),
    }
}
