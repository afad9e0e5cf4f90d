//! Adversarial attack forensics toolkit.
//!
//! Generates white-box adversarial examples (FGSM, FGM, PGD variants,
//! DeepFool) against a zoo of small feedforward classifiers, records every
//! clean/adversarial output pair, and trains random-forest detectors that
//! answer, from a model's output vector alone: did an attack occur, which
//! model was attacked, and which attack family was used.

pub mod attacks;
pub mod cli;
pub mod config;
pub mod error;
pub mod forest;
pub mod nn;
pub mod numcore;
pub mod pipeline;

pub use error::{Error, Result};
