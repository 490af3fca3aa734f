use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sarki_core::catalog::{allowed_point_degrees, FieldProfile, MinimalModel, ModelKind};
use sarki_core::golden::{check, data_dir, Check, DataError};
use sarki_core::links::{build_link_graph, links_from};
use sarki_core::relations::{
    build_relation_with_bound, figure_id, relation_over_curve, render_dot, RankThreeFibration, DEFAULT_BOUND,
};
use sarki_core::words::{phi, SarkisovWord};
use thiserror::Error;

use crate::render;

/// Default degree bound when listing links over curves.
const LINK_BOUND: i64 = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Data(String),
    #[error("verification mismatch")]
    Mismatch,
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Mismatch => 1,
            CliError::Input(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Only {
    TypeIi,
    TypeI,
    Pieces,
}

#[derive(Debug, Parser)]
#[command(name = "sarki", version, about = "Sarkisov links and elementary relations of surfaces")]
pub struct Cli {
    /// Field profile: arbitrary, perfect[:p], sep-closed:<p>, alg-closed:<p>.
    #[arg(long, global = true, default_value = "arbitrary")]
    pub field: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Enumeration bound (point degrees for links over curves, coefficients for relations).
    #[arg(long, global = true)]
    pub bound: Option<i64>,
    /// Enforce the del Pezzo degree-sum bound when blowing up.
    #[arg(long, global = true, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the Sarkisov links starting at a minimal surface.
    Links { surface: String },
    /// Build the elementary relation of a rank 3 fibration.
    Relation {
        origin: String,
        /// Degrees of the two blown-up points, `a,b` (`0,d` on F0 and conic:4).
        #[arg(long, conflicts_with = "deltas", required_unless_present = "deltas")]
        degrees: Option<String>,
        /// Degrees of the two fibre points over the base curve, `x,y`.
        #[arg(long)]
        deltas: Option<String>,
    },
    /// Recompute the tables and figures and compare them with the reference data.
    Verify {
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Only>,
    },
    /// Connected components of the link graph.
    Graph {
        #[arg(long)]
        rational_only: bool,
    },
    /// Image of a word of links in the quotient (`-` reads stdin).
    Quotient { word: PathBuf },
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn parse_pair(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("expected two integers `a,b`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn require_format(format: Format, allowed: &[Format], cmd: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Input(format!("format {format:?} is not available for {cmd}").to_lowercase()))
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let field: FieldProfile = cli.field.parse().map_err(input)?;
    if let Some(b) = cli.bound {
        if b < 1 {
            return Err(CliError::Input(format!("bound must be positive, got {b}")));
        }
    }
    let text = match &cli.command {
        Command::Links { surface } => cmd_links(cli, &field, surface)?,
        Command::Relation { origin, degrees, deltas } => cmd_relation(cli, &field, origin, degrees, deltas)?,
        Command::Verify { only } => return cmd_verify(cli, only),
        Command::Graph { rational_only } => cmd_graph(cli, &field, *rational_only)?,
        Command::Quotient { word } => cmd_quotient(cli, word)?,
    };
    emit(cli, &text)
}

fn cmd_links(cli: &Cli, field: &FieldProfile, surface: &str) -> Result<String, CliError> {
    require_format(cli.format, &[Format::Table, Format::Json, Format::Csv], "links")?;
    let model: MinimalModel = surface.parse().map_err(input)?;
    let links = links_from(&model, field, cli.bound.unwrap_or(LINK_BOUND));
    let rows: Vec<render::LinkRow> = links.iter().map(render::LinkRow::from).collect();
    match cli.format {
        Format::Json => render::json(&rows),
        Format::Csv => render::csv(&rows),
        _ => Ok(render::links_table(&rows)),
    }
}

fn cmd_relation(
    cli: &Cli,
    field: &FieldProfile,
    origin: &str,
    degrees: &Option<String>,
    deltas: &Option<String>,
) -> Result<String, CliError> {
    let model: MinimalModel = origin.parse().map_err(input)?;
    if !model.exists_over(field) {
        return Err(CliError::Input(format!("{} does not occur over {field}", model.spec())));
    }
    let (rel, id) = if let Some(d) = deltas {
        let (x, y) = parse_pair(d)?;
        for e in [x, y] {
            if !field.allows_degree(e) {
                return Err(CliError::Input(format!("no point of degree {e} over {field}")));
            }
        }
        (relation_over_curve(&model, x, y).map_err(input)?, None)
    } else {
        let (a, b) = parse_pair(degrees.as_deref().unwrap_or_default())?;
        let allowed = allowed_point_degrees(&model, field);
        let pair = matches!(model.kind, ModelKind::Hirzebruch { .. } | ModelKind::MoriConicBundle { .. });
        for e in if pair { vec![b] } else { vec![a, b] } {
            if !allowed(e) {
                return Err(CliError::Input(format!("no point of degree {e} on {} over {field}", model.spec())));
            }
        }
        let t = RankThreeFibration::over_point(&model, a, b, cli.strict).map_err(input)?;
        let rel = build_relation_with_bound(&t, cli.bound.unwrap_or(DEFAULT_BOUND)).map_err(input)?;
        let id = figure_id(&rel);
        (rel, Some(id))
    };
    Ok(match cli.format {
        Format::Dot => render_dot(&rel),
        Format::Json => render::relation_json(&rel, id.as_deref())?,
        Format::Csv => render::relation_csv(&rel)?,
        Format::Table => render::relation_table(&rel, id.as_deref()),
    })
}

fn cmd_verify(cli: &Cli, only: &[Only]) -> Result<(), CliError> {
    require_format(cli.format, &[Format::Table], "verify")?;
    let dir = data_dir();
    let all = [Only::TypeIi, Only::TypeI, Only::Pieces];
    let selected: &[Only] = if only.is_empty() { &all } else { only };
    let mut report = String::new();
    let mut mismatches = 0;
    for which in selected {
        let (name, c) = match which {
            Only::TypeIi => ("type II table", Check::TypeII),
            Only::TypeI => ("type I table", Check::TypeI),
            Only::Pieces => ("pieces", Check::Pieces),
        };
        let diffs = check(&dir, c).map_err(|e| match e {
            DataError::Compute(e) => CliError::Data(format!("{name}: {e}")),
            e => CliError::Data(e.to_string()),
        })?;
        if diffs.is_empty() {
            report.push_str(&format!("{name}: ok\n"));
        } else {
            report.push_str(&format!("{name}: {} mismatches\n", diffs.len()));
            for d in &diffs {
                report.push_str(&format!("  {d}\n"));
            }
            mismatches += diffs.len();
        }
    }
    emit(cli, &report)?;
    if mismatches > 0 {
        Err(CliError::Mismatch)
    } else {
        Ok(())
    }
}

fn cmd_graph(cli: &Cli, field: &FieldProfile, rational_only: bool) -> Result<String, CliError> {
    let graph = build_link_graph(field, !rational_only);
    let summary = render::GraphSummary::new(&graph);
    match cli.format {
        Format::Json => render::json(&summary),
        Format::Csv => render::graph_csv(&summary),
        Format::Dot => Ok(render::graph_dot(&summary)),
        Format::Table => Ok(render::graph_table(&summary)),
    }
}

fn cmd_quotient(cli: &Cli, path: &PathBuf) -> Result<String, CliError> {
    require_format(cli.format, &[Format::Table, Format::Json], "quotient")?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    let word: SarkisovWord =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad word file: {e}")))?;
    let q = phi(&word).map_err(input)?;
    Ok(match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string(&q).map_err(input)?),
        _ => format!("{q}\n"),
    })
}
