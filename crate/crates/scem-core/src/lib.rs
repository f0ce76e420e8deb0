//! Word-embedding toolkit for small corpora.
//!
//! Two model families over one pipeline: counting (tf-idf plus truncated
//! SVD, in [`lsa`]) and prediction (skip-gram with negative sampling, in
//! [`sgns`]). The [`evalsuite`] module scores embeddings by semantic
//! categorization and word-pair similarity and sweeps dimension against
//! corpus size; [`dreamcase`] runs the escape/chase rank-distance study on
//! dream series. Everything downstream of a seed is deterministic.
//!
//! Numeric code is generic over the [`Scalar`] floating type; [`Embedding32`]
//! and [`Embedding64`] name the two concrete instantiations. Statistics
//! (correlation, regression, KS) always run in f64, see [`stats`].

pub mod corpus;
pub mod dreamcase;
pub mod error;
pub mod evalsuite;
pub mod lexicon;
mod linalg;
pub mod lsa;
#[cfg(any(test, feature = "reference-oracles"))]
pub mod reference;
pub mod scalar;
pub mod seed;
pub mod semspace;
pub mod sgns;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Single-precision embedding: the default for trained artifacts, half the
/// memory and file size of f64 at equal vocabulary.
pub type Embedding32 = semspace::Embedding<f32>;

/// Double-precision embedding, used where downstream arithmetic must match
/// reference computations to tight tolerances.
pub type Embedding64 = semspace::Embedding<f64>;

/// Verification helper surfaced alongside the reference oracles.
#[cfg(any(test, feature = "reference-oracles"))]
pub use linalg::orthonormality_defect;
