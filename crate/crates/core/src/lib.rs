//! Exact k-factor, perfect-matching and 1-factorization toolkit for small
//! graphs, with Tutte-style non-existence certificates, an isomorph-free
//! search harness for Ore-type degree conditions, and integer-grid checks
//! of the inequalities behind the k-factor theorem.

mod bits;
pub mod canon;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod factor;
pub mod factorization;
pub mod graph;
pub mod graph6;
pub mod ledger;
pub mod matching;

pub use error::{Error, Result};
pub use graph::Graph;
