//! Dominated torsos of finitely presented infinite graphs.
//!
//! A [`GraphPresentation`] describes an infinite graph `G` together with an
//! induced subgraph `H` of finite adhesion. From it the crate classifies the
//! components of `G - H` by adhesion set, builds the dominated torso `K`,
//! projects rays of `G` onto `K`, and checks separation claims on finite
//! truncations with path certificates.

pub mod address;
pub mod adhesion;
pub mod cardinal;
pub mod dot;
pub mod example4;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod parse;
pub mod presentation;
pub mod projection;
pub mod ray;
pub mod report;
pub mod scenario;
pub mod search;
pub mod separation;
pub mod torso;

pub use adhesion::{classify_adhesion, AdhesionClassification, Side};
pub use address::{ComponentId, Index, Selector, SymVertex, Vertex};
pub use cardinal::Cardinal;
pub use graph::FiniteGraph;
pub use parse::{parse_presentation, ParseError};
pub use presentation::{FiniteTruncation, GraphPresentation, PresentationError};
pub use report::Report;
pub use torso::{build_torso, choose_eta, torso_of, Torso};
pub use flow::{min_vertex_separator, MinCut};
pub use projection::{k_project, project_ray, ProjectionError, ProjectionSeq};
pub use ray::{validate_ray, Lasso, RayError, RaySpec};
pub use separation::{Certificate, Grid, LemmaOutcome, SeparationError};
