//! Compressive wideband spectrum sensing.
//!
//! The pipeline synthesizes a sparse wideband spectrum, acquires it through a
//! randomly subsampled inverse-DFT operator whose observed version carries a
//! bounded additive distortion, recovers the spectrum with one of three convex
//! programs, and scores per-subband energies.
//!
//! | module | role |
//! |---|---|
//! | [`signal`] | spectrum profiles, synthesis, time/frequency conversion, AWGN |
//! | [`measurement`] | selection, ideal and perturbed operators, acquisition, RIP probe |
//! | [`solver`] | ADMM conic solver with complex lifting and KKT checks |
//! | [`recovery`] | basis pursuit, constrained LASSO, distortion-aware epigraph program |
//! | [`detection`] | subband energies, enhancement ratio, threshold detection |
//! | [`harness`] | seeded single trials and Monte Carlo aggregation |

pub mod detection;
pub mod error;
pub mod fourier;
pub mod harness;
pub mod io;
pub mod measurement;
pub mod recovery;
pub mod rng;
pub mod signal;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64;
