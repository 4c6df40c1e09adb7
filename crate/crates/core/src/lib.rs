//! Stability, Hopf bifurcation and normal-form analysis for a predator–prey
//! reaction–diffusion system with memory-based cross-diffusion and an
//! optional gestation delay, plus a method-of-lines simulator.
//!
//! The pipeline runs `model` → `spectral` → `normalform`, and `simulator`
//! checks the predictions by direct integration.

// `!(x > 0.0)` deliberately rejects NaN; index loops mirror the tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod linalg;
pub mod model;
pub mod normalform;
pub mod report;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{linearize, steady_state, Linearization, ModelParams, SteadyState, Variant};
pub use normalform::{normal_form, Direction, NormalFormResult, OrbitStability};
pub use spectral::{HopfPoint, SpectralSlice, Verdict};
