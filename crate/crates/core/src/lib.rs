//! Computational tools for spectral Turán problems.
//!
//! * [`graph`]: bitmask graphs on at most 64 vertices and the named families.
//! * [`graph6`] and [`canon`]: interchange format and canonical labelling.
//! * [`spectra`]: adjacency and signless Laplacian spectral radii with
//!   Perron vectors.
//! * [`pattern`]: forbidden subgraphs, containment and chromatic number.
//! * [`search`]: isomorph-free exhaustive computation of `ex`, `ex_λ`, `ex_q`.
//! * [`verify`]: finite-n checks of the inequalities relating these
//!   quantities, and convergence tables.

pub mod canon;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod pattern;
pub mod search;
pub mod spectra;
pub mod verify;

pub use canon::{canonical_form, canonical_labeling, Canonical};
pub use error::{Graph6Error, GraphError, PatternError, SpectralError};
pub use graph::{Adjacency, AdjacencyList, Graph, NamedFamily, MAX_VERTICES};
pub use pattern::ForbiddenPattern;
pub use search::{ExtremalRecord, Measure, SearchConfig, SearchError, SearchMode};
pub use spectra::{MatrixKind, Method, SpectralResult};
pub use verify::{CheckReport, ConvergenceRow, Verdict};

