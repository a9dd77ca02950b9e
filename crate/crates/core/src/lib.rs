//! Exact enumeration of tilings of quasi-hexagonal regions on the square
//! lattice with drawn-in diagonals.
//!
//! The crate is organised in layers:
//!
//! * [`lattice`] builds regions from integer parameters and computes the
//!   statistics that the closed-form counts consume.
//! * [`graph`] holds the weighted matching graph, the dual-graph extraction,
//!   the exact counter, an independent brute-force oracle and the graph
//!   splitting test.
//! * [`families`] constructs the named graph families (Aztec rectangles and
//!   their trimmed, combed and L-shaped relatives, half-honeycombs, Γ-graphs).
//! * [`transforms`] implements local rewrites that carry exact multipliers,
//!   together with pipelines that chain them.
//! * [`formulas`] evaluates every closed form exactly.
//! * [`verify`] sweeps parameter grids and compares formulas with counts.

pub mod error;
pub mod exact;
pub mod families;
pub mod formulas;
pub mod graph;
pub mod lattice;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use exact::ExactCount;
pub use graph::{count_matchings, count_matchings_oracle, MatchGraph, Side, VertexId};
pub use lattice::{Region, RegionKind, RegionParams, RegionStats};
