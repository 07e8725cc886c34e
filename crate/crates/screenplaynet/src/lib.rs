//! Parse movie scripts into scenes, extract characters, locations and
//! dialogue keywords, assemble them into a three-layer network, and report
//! topological statistics, centrality rankings and graph exports.
//!
//! The crate is organized along the pipeline:
//!
//! - [`parser`] — scene chunking, heading grammar, block classification,
//!   conversation segmentation
//! - [`entities`] — entity catalog, curation config, TF-IDF and LDA keyword
//!   scoring
//! - [`graph`] — the multilayer graph, its six edge families and subgraph
//!   views
//! - [`metrics`] — density, diameter, clustering, assortativity, path
//!   lengths and centrality measures
//! - [`report`] / [`export`] — report tables, GraphML and MuxViz writers
//! - [`pipeline`] — end-to-end orchestration behind the CLI

pub mod entities;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod parser;
pub mod pipeline;
pub mod report;
