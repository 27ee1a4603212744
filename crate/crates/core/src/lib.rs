//! Unbreakable tree decompositions and exact minimum p-way cut.

pub mod error;
pub mod flow;
pub mod graph;
pub mod set;

pub use error::{Error, Result};
pub use flow::{CapacitatedGraph, Capacity, FlowResult, FlowValue};
pub use graph::{Graph, Subgraph, VertexCut};
pub use set::VertexSet;
pub mod config;
pub mod isolating;
pub mod params;

pub use config::Limits;
pub use params::{Epsilon, Params};
pub mod rng;
pub mod ssmc;
mod bitgraph;
pub mod origin;
pub mod carving;
pub mod adhesion;
pub use config::PipelineConfig;
pub mod decomp;
pub use decomp::{decompose, DecompositionReport, RootedTreeDecomposition, Variant};
pub mod pwaycut;
pub mod verify;
pub use pwaycut::{min_pway_cut, CutValue};
pub mod gen;
pub mod io;
