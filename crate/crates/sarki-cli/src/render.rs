use std::collections::BTreeSet;
use std::fmt::Write;

use sarki_core::lattice::render_class;
use sarki_core::links::{Existence, LinkDescriptor, LinkGraph, LinkType};
use sarki_core::relations::ElementaryRelation;
use serde::Serialize;

use crate::commands::CliError;

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(data)?;
    s.push('\n');
    Ok(s)
}

pub fn csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(data)?;
    }
    String::from_utf8(w.into_inner().map_err(data)?).map_err(data)
}

#[derive(Debug, Serialize)]
pub struct LinkRow {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub source: String,
    pub target: String,
    pub a: i64,
    pub b: i64,
    /// `E'` of a type II link or the fibre class of a type I/III link.
    pub class: String,
    pub target_k2: i64,
    pub existence: Existence,
}

impl From<&LinkDescriptor> for LinkRow {
    fn from(l: &LinkDescriptor) -> Self {
        let hb = ["H".to_string(), "E".to_string()];
        let class = match (l.variant, l.eprime, l.fibre_class) {
            (LinkType::TypeIIPoint, Some((d, m)), _) => render_class(&hb, &[d, -m]),
            (_, _, Some((u, v))) => render_class(&hb, &[u, -v]),
            _ => String::new(),
        };
        LinkRow {
            kind: l.variant.name(),
            source: l.source.spec(),
            target: l.target.spec(),
            a: l.a,
            b: l.b,
            class,
            target_k2: l.target_k2(),
            existence: l.existence,
        }
    }
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            let _ = write!(s, "{c:<w$}", w = widths[i]);
            if i + 1 < cells.len() {
                s.push_str("  ");
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn links_table(rows: &[LinkRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.kind.to_string(),
                r.target.clone(),
                r.a.to_string(),
                r.b.to_string(),
                r.class.clone(),
                r.target_k2.to_string(),
                format!("{:?}", r.existence),
            ]
        })
        .collect();
    aligned(&["type", "target", "a", "b", "E'/C", "K2'", "existence"], &body)
}

pub fn relation_json(rel: &ElementaryRelation, id: Option<&str>) -> Result<String, CliError> {
    let mut v = serde_json::to_value(rel).map_err(data)?;
    if let (Some(id), Some(obj)) = (id, v.as_object_mut()) {
        obj.insert("id".into(), id.into());
    }
    json(&v)
}

#[derive(Serialize)]
struct EdgeRow<'a> {
    index: usize,
    side: &'a str,
    kind: &'a str,
    class: String,
    degree: i64,
    corner: &'a str,
}

fn edge_rows(rel: &ElementaryRelation) -> Vec<EdgeRow<'_>> {
    rel.edges
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeRow {
            index: i,
            side: &rel.sides[i].label,
            kind: match e.kind {
                sarki_core::relations::EdgeKind::Contraction => "contraction",
                sarki_core::relations::EdgeKind::Fibration => "fibration",
            },
            class: render_class(&rel.basis, &e.class),
            degree: e.degree,
            corner: &rel.corners[i].label,
        })
        .collect()
}

pub fn relation_csv(rel: &ElementaryRelation) -> Result<String, CliError> {
    csv(&edge_rows(rel))
}

pub fn relation_table(rel: &ElementaryRelation, id: Option<&str>) -> String {
    let c = &rel.center;
    let mut out = String::new();
    if let Some(id) = id {
        let _ = writeln!(out, "{id}");
    }
    let _ = writeln!(
        out,
        "center {} over {} (degrees {}, {}), {} sides",
        c.label,
        c.origin.family,
        c.degrees[0],
        c.degrees[1],
        rel.len()
    );
    let body: Vec<Vec<String>> = edge_rows(rel)
        .into_iter()
        .map(|r| vec![r.index.to_string(), r.side.into(), r.kind.into(), r.class, r.degree.to_string(), r.corner.into()])
        .collect();
    out + &aligned(&["#", "side", "kind", "class", "degree", "next corner"], &body)
}

#[derive(Debug, Serialize)]
pub struct NodeRow {
    pub family: String,
    pub spec: String,
    pub k2: i64,
    pub rational: bool,
}

#[derive(Debug, Serialize)]
pub struct ComponentRow {
    pub families: Vec<String>,
    pub min_k2: i64,
    pub max_k2: i64,
}

#[derive(Debug, Serialize)]
pub struct EdgeSummary {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub nodes: Vec<NodeRow>,
    pub components: Vec<ComponentRow>,
    pub edges: Vec<EdgeSummary>,
}

impl GraphSummary {
    pub fn new(g: &LinkGraph) -> Self {
        let nodes = g
            .nodes
            .iter()
            .map(|m| NodeRow { family: m.family_name(), spec: m.spec(), k2: m.k2(), rational: m.is_rational() })
            .collect();
        let mut components: Vec<ComponentRow> = g
            .components
            .iter()
            .map(|c| {
                let k2s: Vec<i64> = c.iter().map(|i| g.nodes[*i].k2()).collect();
                ComponentRow {
                    families: c.iter().map(|i| g.nodes[*i].family_name()).collect(),
                    min_k2: k2s.iter().copied().min().unwrap_or(0),
                    max_k2: k2s.iter().copied().max().unwrap_or(0),
                }
            })
            .collect();
        components.sort_by(|a, b| b.max_k2.cmp(&a.max_k2).then(a.families.cmp(&b.families)));
        let edges: BTreeSet<(&'static str, String, String)> =
            g.edges.iter().map(|l| (l.variant.name(), l.source.family_name(), l.target.family_name())).collect();
        let edges = edges.into_iter().map(|(kind, source, target)| EdgeSummary { kind, source, target }).collect();
        GraphSummary { nodes, components, edges }
    }
}

pub fn graph_table(s: &GraphSummary) -> String {
    let body: Vec<Vec<String>> = s
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![(i + 1).to_string(), c.families.len().to_string(), format!("{}..{}", c.min_k2, c.max_k2), c.families.join(", ")]
        })
        .collect();
    aligned(&["component", "size", "K2", "families"], &body)
}

#[derive(Serialize)]
struct GraphCsvRow<'a> {
    component: usize,
    family: &'a str,
    k2: i64,
    rational: bool,
}

pub fn graph_csv(s: &GraphSummary) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for (i, c) in s.components.iter().enumerate() {
        for f in &c.families {
            let node = s.nodes.iter().find(|n| &n.family == f).expect("component member is a node");
            rows.push(GraphCsvRow { component: i + 1, family: f, k2: node.k2, rational: node.rational });
        }
    }
    csv(&rows)
}

pub fn graph_dot(s: &GraphSummary) -> String {
    let mut out = String::from("digraph links {\n");
    for n in &s.nodes {
        let _ = writeln!(out, "  \"{}\" [label=\"{}\\nK2={}\"];", n.family, n.family, n.k2);
    }
    for e in &s.edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.source, e.target, e.kind);
    }
    out.push_str("}\n");
    out
}
