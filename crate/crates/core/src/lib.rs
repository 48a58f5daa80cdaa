//! Regular subgraphs of high girth in lattice grids.
//!
//! The crate builds periodic subgraphs of the grids of `Z^n`, BCC, FCC and
//! `D4`, checks their degree, girth and spread exactly, reruns the
//! exhaustive searches over unit hypercubes that pin down the extremal
//! cases, and computes the tree-versus-grid ball bounds on attainable girth.

pub mod bounds;
pub mod error;
pub mod gallery;
pub mod hypercube;
pub mod lattice;
pub mod metrics;
pub mod report;
pub mod rulegraph;
pub mod zlattice;

pub use error::{Error, Result};
pub use lattice::{LatticeSpec, Point};
pub use rulegraph::PeriodicGraphSpec;
