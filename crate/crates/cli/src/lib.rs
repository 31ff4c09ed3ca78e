//! Command-line pipeline around the `beamcluster` library: seeded dataset
//! generation, codebook training, Monte Carlo rate sweeps, and the
//! clustered-vs-uniform comparison experiment. Every subcommand is a pure
//! function of its config and input files, so reruns are byte-identical.

pub mod commands;
pub mod config;
pub mod error;
