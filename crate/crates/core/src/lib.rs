//! Beam codebook learning for multi-antenna links.
//!
//! The crate simulates narrowband ray-based channels for uniform linear
//! arrays, learns a transmit beam codebook by clustering the channels'
//! dominant directions on the complex unit sphere, and measures the
//! achievable-rate advantage of that learned codebook over a uniform
//! (DFT-style) baseline with seeded Monte Carlo sweeps.
//!
//! Module map:
//!
//! - [`numerics`]: complex matrices/unit vectors, deterministic random
//!   streams, and the power-iteration eigensolver.
//! - [`channel`]: steering vectors, ray-based channel sampling, datasets and
//!   their on-disk text format.
//! - [`clustering`]: Lloyd iteration under the chordal metric, plus a
//!   brute-force partition search used as a reference on tiny instances.
//! - [`codebook`]: beam angle extraction, codebook construction (clustered
//!   and uniform), and the codebook text format.
//! - [`evaluation`]: codeword selection, achievable rate, Monte Carlo rate
//!   sweeps with common random numbers, and quantization-distortion reports.

pub mod channel;
pub mod clustering;
pub mod codebook;
pub mod error;
pub mod evaluation;
pub mod numerics;
mod textio;

pub use error::{Error, Result};
pub use textio::{fmt_f64_exact, fmt_f64_short};
