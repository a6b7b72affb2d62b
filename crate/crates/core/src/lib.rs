//! Growth models for directed attributed networks, the measurements used to
//! compare them with observed networks, and grid-search model fitting.

pub mod arw;
pub mod baselines;
pub mod error;
pub mod fitting;
pub mod graph;
pub mod growth;
pub mod io;
pub mod metrics;
pub mod model;
pub mod runner;
pub mod schedule;

pub use error::{Error, Result};
pub use graph::{AttrId, GraphSnapshot, NodeId, TemporalDigraph};
