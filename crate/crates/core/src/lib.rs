//! Orthogonal representations of graphs.
//!
//! A representation assigns each vertex of a graph a vector in `R^D`; it is
//! orthogonal (OR) when non-adjacent vertices get orthogonal vectors, and a
//! GOR when additionally every `D` of the vectors are linearly independent.
//! A graph on `n` vertices has a GOR in `R^D` exactly when it is
//! `(n - D)`-connected.
//!
//! - [`graph`]: graphs, edge-list and graph6 I/O, ordering queries
//! - [`connectivity`]: vertex connectivity with cut certificates
//! - [`linalg`]: exact/float linear algebra and the complement map
//! - [`construct`]: sequential and randomized constructions
//! - [`verify`]: OR / general position / GOR checks
//! - [`ordering`]: constraint signatures and exchange rewriting
//! - [`harness`]: graph generators and seeded experiments

pub mod connectivity;
pub mod construct;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod ordering;
pub mod seed;
pub mod verify;

pub use connectivity::{
    is_k_connected, vertex_connectivity, ConnectivityCertificate, KConnectivity, Witness,
};
pub use construct::{
    construct_gor_plus, construct_lss_randomized, construct_with_retries, sample_parameters,
    AnyRepresentation, ConstructionTrace, ParameterBundle, Representation, RetryConfig,
    RetryOutcome,
};
pub use graph::{path_within_prefix, preceding_non_neighbors, Graph, GraphFormat, VertexOrdering};
pub use linalg::{Mode, Rational, Scalar, Tolerance, Vector};
pub use verify::{certify_no_gor, verify_gor, verify_gp_subset, verify_or, VerificationReport};
