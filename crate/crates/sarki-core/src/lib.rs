//! Exact lattice arithmetic for two-dimensional Sarkisov links and relations.

#![allow(non_snake_case)]

pub mod catalog;
pub mod golden;
pub mod lattice;
pub mod links;
pub mod relations;
pub mod words;

pub use catalog::{Closure, FieldProfile, MinimalModel, ModelKind};
pub use lattice::{ClassKind, DivisorClass, MarkedLattice};
pub use links::{LinkDescriptor, LinkGraph, LinkType};
pub use relations::{ElementaryRelation, Piece, RankThreeFibration};
pub use words::{LinkLetter, Marker, QuotientElement, SarkisovWord};
