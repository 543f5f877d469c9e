//! Beta models for random hypergraphs.
//!
//! Three exponential-family variants are supported over complete edge strata:
//!
//! * **uniform**: every edge has size `k`; one parameter per node,
//! * **layered**: one parameter vector per edge size,
//! * **general**: edges of several sizes share a single parameter vector.
//!
//! Edges occur independently with `logit(p_e) = Σ_{i∈e} β_i`. The crate provides
//! sampling ([`sampler`]), maximum likelihood by fixed-point iteration
//! ([`fixedpoint`]) and by iterative proportional scaling ([`ips`]), operational
//! MLE-existence diagnostics ([`existence`]) and a layered-vs-general likelihood
//! ratio test ([`stats`]).
//!
//! Node indices are 0-based throughout the library API; the text formats in
//! [`hypergraph::io`] and [`model::io`] use 1-based labels.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod existence;
pub mod fixedpoint;
pub mod hypergraph;
pub mod ips;
pub mod model;
pub mod numeric;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
pub use existence::{scan_existence, screen_boundary, ExistenceScan, Verdict};
pub use fixedpoint::{fit_fixed_point, Damping, FitResult, FitStatus, FixedPointOptions};
pub use hypergraph::{degrees, DegreeSequence, Edge, EdgeSpace, Hypergraph};
pub use ips::{ips_fit, ips_fit_general, ips_fit_layered, logits_to_beta, IpsFit, IpsOptions};
pub use model::{ModelSpec, ParamVector, Variant};
pub use sampler::SampleConfig;
pub use stats::{chi2_quantile, chi2_sf, lrt_layered_vs_general, LrtResult};
