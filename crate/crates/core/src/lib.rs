//! Personality regression from earnings-call language and its use as a
//! volatility regressor.
//!
//! The crate is organized bottom-up:
//!
//! - [`corpus`]: transcript parsing, CEO name normalization, per-call CEO documents.
//! - [`labels`]: crowd votes to continuous MBTI scores, label summaries, MBTI/Big 5 correlations.
//! - [`agreement`]: percentage agreement, Krippendorff's alpha, Brennan-Prediger, Gwet's AC1.
//! - [`features`]: tokenizer, n-gram tf-idf, category dictionaries.
//! - [`model`]: Box-Cox, group split, linear SVR, feed-forward regressor, metrics, selection, attributions.
//! - [`econ`]: volatility labels, fixed-effects OLS with standardized coefficients, VIF.
//! - [`synth`]: seeded synthetic worlds with planted personalities and risk effects.

pub mod agreement;
pub mod corpus;
pub mod econ;
mod error;
pub mod features;
pub mod labels;
pub mod model;
pub mod synth;

pub use error::{Error, Result};
