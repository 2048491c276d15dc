//! Decay bounds for spectral projectors and inverses of banded symmetric
//! matrices, together with the tooling to test them: seeded matrix
//! generation with a prescribed spectrum and bandwidth, exact projectors,
//! decay profiles and truncation reports.

// `!(x > 0.0)` is how NaN gets rejected along with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod factory;
mod householder;
pub mod io;
pub mod projector;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod spectrum;

pub use dense::Mat;
pub use error::{Error, Result};
pub use factory::{
    assemble_dense, band_reduce, band_reduce_with_transform, generate, jacobi_eigh, random_orthogonal, BandedHermitian,
    Eigenbasis,
};
pub use rng::SeededRng;
pub use spectrum::{distinct_magnitudes, distinct_magnitudes_in, normalize_spectrum, EigenvalueLadder, SpectrumSpec};
