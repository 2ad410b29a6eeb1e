//! Embedded graphs, list colorings, inert sets and reductions.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`embedding`] — adjacency graphs and rotation systems;
//! * [`topology`] — contractibility, edge-width, face-width, natural partitions, chords;
//! * [`listcolor`] — lists, partial colorings, the exact oracle, inertness and reductions;
//! * [`planar`] — constructive planar extension (Thomassen-style) and obstruction classes;
//! * [`rainbow`], [`collar`], [`filament`] — boundary and path reduction machinery;
//! * [`generators`] — deterministic instance families and exhaustive enumerators;
//! * [`verify`] — lemma harnesses that fan out over enumerated instances.

pub mod collar;
pub mod colorset;
pub mod embedding;
pub mod error;
pub mod filament;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod listcolor;
pub mod planar;
pub mod rainbow;
pub mod topology;
pub mod verify;

pub use colorset::{Color, ColorSet};
pub use embedding::RotationEmbedding;
pub use error::{Error, Result};
pub use graph::Graph;
