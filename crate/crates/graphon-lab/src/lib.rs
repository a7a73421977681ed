//! Sampling graphs from graphons and measuring degree/spectral concentration.
//!
//! A graphon is a symmetric kernel `W: [0,1]^2 -> [0,1]`. Drawing latent
//! positions `x_1..x_N` (i.i.d. uniforms, or the deterministic grid `i/N`)
//! and connecting `i~j` with probability `W(x_i, x_j)` yields a random graph
//! whose degrees and Laplacian spectrum concentrate, as `N` grows, around
//! those of the expected matrix `Abar_ij = W(x_i, x_j)`. This crate provides
//! the pieces needed to check the finite-sample side of that story
//! numerically:
//!
//! * [`graphon`] — a small catalog of kernels with piecewise-Lipschitz
//!   metadata, plus degree functions via adaptive quadrature ([`quad`]);
//! * [`sampling`] — reproducible latent/edge sampling with a fixed,
//!   documented PRNG scheme;
//! * [`spectra`] — a dense symmetric eigensolver (Householder + implicit QL)
//!   with an independent Jacobi cross-check, and per-pair summaries;
//! * [`bounds`] — the closed-form concentration bounds and predicates;
//! * [`experiments`] — Monte-Carlo harnesses that count how often the bounds
//!   are violated, verify degree floors, fit decay rates, and sweep
//!   discretization errors;
//! * [`report`] — deterministic CSV/JSON rendering of results;
//! * [`cli`] — the `graphon-lab` binary's subcommands.
//!
//! The numeric core is generic over the scalar type through [`num::Real`]
//! (any `num_traits::Float` with the usual extras; `f32` and `f64` are
//! provided). The experiment harness and CLI run concrete `f64`; the
//! aliases below name the `f64` instantiations of the core types.
//!
//! ```
//! use graphon_lab::graphon::{make_catalog_graphon, CatalogSpec};
//! use graphon_lab::sampling::{GraphPair, LatentMode};
//! use graphon_lab::spectra::summarize;
//!
//! let g = make_catalog_graphon::<f64>(&CatalogSpec::Constant { p: 0.5 }).unwrap();
//! let pair = GraphPair::generate(&g, 50, LatentMode::Stochastic, 7).unwrap();
//! let summary = summarize(&pair, 1e-10).unwrap();
//! // Laplacians are singular: the smallest normalized eigenvalue is 0.
//! assert!(summary.mu[0].abs() <= 1e-10);
//! assert!(summary.mu_bar[0].abs() <= 1e-10);
//! ```

// Validation guards negate comparisons on purpose: unlike the inverted
// operator, `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod graphon;
pub mod num;
pub mod quad;
pub mod report;
pub mod sampling;
pub mod spectra;

pub use error::{Error, Result};

/// `f64` kernel.
pub type Graphon64 = graphon::Graphon<f64>;
/// `f64` tabulated degree function.
pub type DegreeFunction64 = graphon::DegreeFunction<f64>;
/// `f64` latent positions.
pub type LatentSample64 = sampling::LatentSample<f64>;
/// `f64` sampled/expected adjacency pair.
pub type GraphPair64 = sampling::GraphPair<f64>;
/// `f64` per-pair spectral summary.
pub type SpectralSummary64 = spectra::SpectralSummary<f64>;
/// `f64` concentration bounds.
pub type BoundSet64 = bounds::BoundSet<f64>;
/// `f64` size-condition report.
pub type SizeConditions64 = bounds::SizeConditions<f64>;
/// `f64` stochastic degree floor.
pub type DegreeFloor64 = bounds::DegreeFloor<f64>;
