//! Kernelization for Connected Vertex Cover on planar graphs.
//!
//! [`pipeline::kernelize`] reduces an instance `(G, k)` to an equivalent one
//! with at most `11k/3` vertices, or answers NO. The returned journal lifts
//! any connected vertex cover of the kernel back to the input graph.

pub mod embedding;
pub mod face_matching;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod reductions;

pub use embedding::{embed, EmbedError, Embedding, Face};
pub use graph::{Graph, GraphError, VertexId};
pub use matching::{maximum_matching, Matching};
pub use oracle::{decide_cvc, minimum_cvc, verify_cvc, CoverCertificate, OracleError};
pub use pipeline::{kernelize, lift_solution, Instance, KernelOutcome, NoReason, ReductionJournal};
pub use reductions::{ReductionStep, RuleId, Site};
