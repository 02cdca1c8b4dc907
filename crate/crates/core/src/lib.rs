//! Structural sparsity toolkit: generalised colouring numbers and
//! admissibility of vertex orders, a radius-independent order
//! construction, scatter extraction, the splitter game and
//! degree-bounded spanning-tree augmentation.

pub mod augment;
pub mod brute;
pub mod error;
pub mod generate;
pub mod graph;
pub mod reach;
pub mod scatter;
pub mod splitter;
pub mod suite;
pub mod uniform;

pub(crate) mod flow;

pub use error::{Error, Result};
pub use graph::{parse_graph, parse_order, Graph, LinearOrder, ParsedGraph, VertexSet};
pub use reach::{AdmMode, Admissibility, Metric, MetricProfile};
pub use uniform::{build_uniform_order, ConstructionTrace, Variant};
