//! Exact and approximate evaluation of graph homomorphism partition functions.
//!
//! For a graph `G = (V, E)` and per-edge symmetric `k x k` weight blocks `B`,
//!
//! ```text
//! Q_G(B) = sum_{phi: V -> {0..k}} prod_{{u,v} in E} b^{uv}_{phi(u) phi(v)}
//! ```
//!
//! [`oracle`] evaluates this by enumeration. [`taylor`] approximates
//! `ln Q_G(B)` by a truncated Taylor series along `J + t (B - J)` whenever
//! every entry satisfies `|1 - b| <= gamma / Delta(G)`, with an a-priori error
//! bound. [`applications`] builds the soft coloring, independent-set, max-cut
//! and homomorphism-distinguishing quantities on top.

pub mod applications;
pub mod cli;
pub mod constants;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod sum;
pub mod taylor;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{parse_colored_graph, parse_graph, ColoredGraph, Degrees, Graph};
pub use num_complex::Complex64;
pub use weights::{EdgeWeightTensor, SymmetricWeightMatrix, ZeroFreeCertificate};
