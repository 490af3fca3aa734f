//! Words of Sarkisov links and their image in a free product of elementary abelian 2-groups.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{BundleBase, CatalogError, MinimalModel, ModelKind};
use crate::links::{LinkDescriptor, LinkType};
use crate::relations::ElementaryRelation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("{0} needs a class id")]
    MissingClassId(String),
    #[error("marker {marker} does not fit link {link}")]
    MarkerMismatch { marker: String, link: String },
    #[error("letters {0} and {1} do not compose")]
    NotComposable(usize, usize),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Marker {
    HirzebruchIi { e: u64 },
    ConicIi { class_id: String, d: u8, e: u64 },
    Bertini { class_id: String },
    Silent,
}

/// Caller-supplied names for birational classes that lattice data cannot tell apart.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassIds {
    pub conic5: Option<String>,
    pub conic6: Option<String>,
    pub bertini: Option<String>,
}

impl ClassIds {
    pub fn conic(d: u8, id: &str) -> Self {
        let mut ids = ClassIds::default();
        match d {
            5 => ids.conic5 = Some(id.into()),
            _ => ids.conic6 = Some(id.into()),
        }
        ids
    }

    pub fn bertini(id: &str) -> Self {
        ClassIds { bertini: Some(id.into()), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkLetter {
    pub link: LinkDescriptor,
    pub marker: Marker,
    pub source_key: String,
    pub target_key: String,
}

fn is_hirzebruch(m: &MinimalModel) -> bool {
    matches!(m.kind, ModelKind::Hirzebruch { .. })
}

fn conic_degree(m: &MinimalModel) -> Option<u8> {
    match m.kind {
        ModelKind::MoriConicBundle { k2: k2 @ (5 | 6), base: BundleBase::P1 } => Some(k2),
        _ => None,
    }
}

fn is_bertini(link: &LinkDescriptor) -> bool {
    link.variant == LinkType::TypeIIPoint
        && link.source == MinimalModel::p2()
        && link.target == MinimalModel::p2()
        && link.a == 8
        && link.b == 8
}

fn base_degree(link: &LinkDescriptor) -> u64 {
    u64::try_from(link.a).unwrap_or(0)
}

fn expected_marker(link: &LinkDescriptor, ids: &ClassIds) -> Result<Marker, WordError> {
    if link.variant == LinkType::TypeIICurve {
        if is_hirzebruch(&link.source) && is_hirzebruch(&link.target) {
            return Ok(Marker::HirzebruchIi { e: base_degree(link) });
        }
        if let (Some(d), Some(d2)) = (conic_degree(&link.source), conic_degree(&link.target)) {
            if d == d2 {
                let id = if d == 5 { &ids.conic5 } else { &ids.conic6 };
                let class_id = id.clone().ok_or_else(|| WordError::MissingClassId(format!("conic bundle of degree {d}")))?;
                return Ok(Marker::ConicIi { class_id, d, e: base_degree(link) });
            }
        }
    }
    if is_bertini(link) {
        let class_id = ids.bertini.clone().ok_or_else(|| WordError::MissingClassId("Bertini involution".into()))?;
        return Ok(Marker::Bertini { class_id });
    }
    Ok(Marker::Silent)
}

pub fn classify_letter(link: &LinkDescriptor, ids: &ClassIds) -> Result<LinkLetter, WordError> {
    let marker = expected_marker(link, ids)?;
    Ok(LinkLetter { link: link.clone(), marker, source_key: link.source.spec(), target_key: link.target.spec() })
}

impl LinkLetter {
    /// Letter with an explicit marker, checked against the link.
    pub fn with_marker(link: LinkDescriptor, marker: Marker) -> Result<Self, WordError> {
        let ids = match &marker {
            Marker::ConicIi { class_id, d, .. } => ClassIds::conic(*d, class_id),
            Marker::Bertini { class_id } => ClassIds::bertini(class_id),
            _ => ClassIds::default(),
        };
        let mismatch = || WordError::MarkerMismatch { marker: format!("{marker:?}"), link: describe(&link) };
        let expected = expected_marker(&link, &ids).map_err(|_| mismatch())?;
        if expected != marker {
            return Err(mismatch());
        }
        Ok(LinkLetter { source_key: link.source.spec(), target_key: link.target.spec(), link, marker })
    }

    /// The same letter read backwards.
    pub fn inverse(&self) -> LinkLetter {
        let link = self.link.inverse();
        let marker = match &self.marker {
            Marker::HirzebruchIi { .. } => Marker::HirzebruchIi { e: base_degree(&link) },
            Marker::ConicIi { class_id, d, .. } => Marker::ConicIi { class_id: class_id.clone(), d: *d, e: base_degree(&link) },
            m => m.clone(),
        };
        LinkLetter { link, marker, source_key: self.target_key.clone(), target_key: self.source_key.clone() }
    }

    /// Generator hit by this letter, if any.
    pub fn image(&self) -> Option<(String, u64)> {
        match &self.marker {
            Marker::HirzebruchIi { e } if *e >= 8 => Some(("hirz".into(), *e)),
            Marker::ConicIi { class_id, d, e } if *e >= u64::from(*d) => Some((format!("c{d}:{class_id}"), *e)),
            Marker::Bertini { class_id } => Some((format!("bertini:{class_id}"), 0)),
            _ => None,
        }
    }
}

fn describe(link: &LinkDescriptor) -> String {
    format!("{} {} -> {} ({}, {})", link.variant.name(), link.source.spec(), link.target.spec(), link.a, link.b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LetterRecord {
    #[serde(rename = "type")]
    variant: LinkType,
    source: String,
    target: String,
    a: i64,
    b: i64,
    marker: Marker,
}

impl Serialize for LinkLetter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LetterRecord {
            variant: self.link.variant,
            source: self.source_key.clone(),
            target: self.target_key.clone(),
            a: self.link.a,
            b: self.link.b,
            marker: self.marker.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinkLetter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = LetterRecord::deserialize(d)?;
        let source: MinimalModel = r.source.parse().map_err(D::Error::custom)?;
        let target: MinimalModel = r.target.parse().map_err(D::Error::custom)?;
        let link = LinkDescriptor::bare(r.variant, source, target, r.a, r.b);
        LinkLetter::with_marker(link, r.marker).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SarkisovWord {
    pub letters: Vec<LinkLetter>,
}

impl SarkisovWord {
    pub fn new(letters: Vec<LinkLetter>) -> Self {
        SarkisovWord { letters }
    }

    pub fn concat(&self, other: &SarkisovWord) -> SarkisovWord {
        SarkisovWord { letters: self.letters.iter().chain(&other.letters).cloned().collect() }
    }

    /// Inverse letters in reverse order.
    pub fn inverse(&self) -> SarkisovWord {
        SarkisovWord { letters: self.letters.iter().rev().map(LinkLetter::inverse).collect() }
    }
}

/// Index of the first non-composable adjacent pair.
fn first_break(word: &SarkisovWord) -> Option<usize> {
    word.letters.windows(2).position(|w| w[0].target_key != w[1].source_key)
}

pub fn compose_check(word: &SarkisovWord) -> bool {
    first_break(word).is_none()
}

/// Reduced word in the free product: no empty blocks, no two adjacent blocks of one factor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuotientElement(pub Vec<(String, BTreeSet<u64>)>);

impl QuotientElement {
    pub fn identity() -> Self {
        QuotientElement(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generator(factor: &str, g: u64) -> Self {
        QuotientElement(vec![(factor.to_string(), BTreeSet::from([g]))])
    }

    fn push(&mut self, factor: &str, g: u64) {
        if let Some((f, set)) = self.0.last_mut() {
            if f == factor {
                if !set.remove(&g) {
                    set.insert(g);
                }
                if set.is_empty() {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((factor.to_string(), BTreeSet::from([g])));
    }

    /// Product `self * other`, reduced.
    pub fn mul(&self, other: &QuotientElement) -> QuotientElement {
        let mut out = self.clone();
        for (f, set) in &other.0 {
            for g in set {
                out.push(f, *g);
            }
        }
        out
    }

    /// Each generator has order two and blocks commute internally, so inversion reverses the blocks.
    pub fn inverse(&self) -> QuotientElement {
        QuotientElement(self.0.iter().rev().cloned().collect())
    }
}

impl std::fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "identity");
        }
        let json = serde_json::to_string(self).map_err(|_| std::fmt::Error)?;
        write!(f, "{json}")
    }
}

pub fn phi(word: &SarkisovWord) -> Result<QuotientElement, WordError> {
    if let Some(i) = first_break(word) {
        return Err(WordError::NotComposable(i, i + 1));
    }
    let mut out = QuotientElement::identity();
    for (f, g) in word.letters.iter().filter_map(LinkLetter::image) {
        out.push(&f, g);
    }
    Ok(out)
}

/// The links around a relation as a closed word starting at its last corner.
pub fn relation_to_word(rel: &ElementaryRelation, ids: &ClassIds) -> Result<SarkisovWord, WordError> {
    let letters = rel.links.iter().map(|l| classify_letter(l, ids)).collect::<Result<Vec<_>, _>>()?;
    let word = SarkisovWord::new(letters);
    if let Some(i) = first_break(&word) {
        return Err(WordError::NotComposable(i, i + 1));
    }
    Ok(word)
}
