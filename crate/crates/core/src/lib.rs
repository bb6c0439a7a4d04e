//! Instantly trained corner-classification (CC4) networks.
//!
//! A CC4 network is built in one pass over its training samples: each sample
//! becomes a hidden unit that fires exactly when a query lies within a fixed
//! Hamming radius of the sample. Inputs are usually integer coordinates in
//! unary or spread-unary code, where Hamming distance tracks numeric
//! distance.
//!
//! - [`encoding`]: bit vectors, unary and spread-unary codecs, Hamming distance
//! - [`network`]: training, evaluation and the JSON model format
//! - [`oracle`]: brute-force reference classifier
//! - [`pattern`]: grid patterns, training masks and radius sweeps
//! - [`cli`]: the `cc4` command-line tool

pub mod cli;
pub mod encoding;
pub mod error;
pub mod network;
pub mod oracle;
pub mod pattern;

pub use encoding::{hamming, BitVector, SpreadUnaryCodec, UnaryCodec};
pub use error::{Error, Result};
pub use network::{CC4Network, HiddenUnit, ModelDocument, TieBreaker, TiePolicy, TrainingSample};
pub use oracle::oracle_classify;
pub use pattern::{
    encode_point, run_experiment, sample_training_points, score, stability_metric,
    ExperimentConfig, ExperimentResult, GridPattern, Scheme, TrainingMask,
};
