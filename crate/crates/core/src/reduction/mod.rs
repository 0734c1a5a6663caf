//! Classical simulation of the forgery reduction: lazy random oracles, the
//! reprogrammed hash `Z`, the game sequence, and the bound calculator.
//!
//! Adversaries here only make classical queries. The quantum-query terms of
//! the bound enter through [`bound`] alone.

pub mod bound;
pub mod games;
pub mod lazy;
pub mod measure;

pub use bound::{
    condition_check, parse_log2_literal, render_bound_report, theorem1_bound, zhandry_bound,
    BoundInputs, ConditionReport, ReductionBound,
};
pub use games::{
    extract_doom_solution, run_game, run_trial, Adversary, Game, GameOracles, GameSetup, GameStats,
    GameTranscript, KeyFamily, NullAdversary, PlantedAdversary, ReplayAdversary,
};
pub use lazy::{
    z_output_distribution, FlaggedErrorSampler, LazyOracle, Sampler, UniformBits, ZOracle,
};
pub use measure::{empirical_decoder_distance, measure_expected_public_distance};
