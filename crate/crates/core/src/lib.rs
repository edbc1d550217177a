//! Hamilton cycles under sequence constraints in random graphs.
//!
//! Vertices are labeled `1..=n`. Every random procedure takes a 64-bit
//! master seed and draws from named substreams (see [`rng`]), so results are
//! reproducible and independent of thread scheduling.

pub mod coloring;
pub mod error;
pub mod graph;
pub mod ham;
pub mod inversion;
pub mod ordered;
pub mod pattern;
pub mod io;
pub mod rng;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, LayeredGraph, Vertex};
pub use ham::HamCycle;
