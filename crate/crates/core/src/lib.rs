//! Hypergraph dilutions, width oracles, grid-minor extraction and a small
//! conjunctive query engine built around them.

pub mod bits;
pub mod cq;
pub mod decomposition;
pub mod dilution;
pub mod error;
pub mod format;
pub mod generators;
pub mod hypergraph;
pub mod iso;
pub mod minors;
pub mod prejigsaw;
pub mod suite;

pub use dilution::{apply_sequence, search_dilution, verify_dilution, DilutionSequence, DilutionStep, SearchOutcome};
pub use error::{Error, Result};
pub use hypergraph::{reduce, Edge, Hypergraph, Vertex};
pub use iso::{certificate, isomorphic, IsoWitness};
