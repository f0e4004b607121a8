//! Model checking of first-order and monadic second-order sentences on
//! graphs of small vertex integrity.
//!
//! The pipeline has three stages: find a separator witnessing the vertex
//! integrity of the input ([`integrity`]), shrink the graph by deleting
//! surplus components of repeated type ([`kernel`]), and evaluate the
//! sentence on what is left ([`eval`]). The [`construct`] module builds
//! hardness instances with companion formulas that exercise the whole
//! stack end to end, and [`testkit`] holds the brute-force oracles and
//! random generators the test suites lean on.

pub mod construct;
pub mod error;
pub mod eval;
pub mod graph;
pub mod integrity;
pub mod kernel;
pub mod logic;
pub mod testkit;

pub use error::Error;
pub use graph::{Component, Graph, Structure};
pub use logic::{Formula, QuantifierProfile};
