//! Feature-importance explanations for black-box prediction functions.
//!
//! The library estimates how much individual input features (pixels of an
//! image, positional k-mers of a discrete sequence) contribute to the output
//! of an arbitrary scoring function `s(x)`, using nothing but conditional
//! sampling over an empirical sample set. Four related measures are provided:
//!
//! - **MFI** — the conditional covariance `E[s(X)·φ(X) | f(X)=t] − μ_s·μ_φ`
//!   of the score and an "explanation mode" output `φ(X)`
//!   ([`estimator::mfi_estimate`]).
//! - **kernel MFI** — the kernelized variant, estimated through the empirical
//!   Hilbert-Schmidt independence criterion ([`estimator::kernel_mfi_map`],
//!   [`kernels::hsic`]).
//! - **POIM** — positional oligomer importance matrices for sequence models
//!   ([`estimator::poim`]).
//! - **FIRM** — the feature importance ranking measure
//!   ([`estimator::firm`]).
//!
//! Explanations are validated with the Most-Relevant-First perturbation
//! protocol in [`eval`]: features are degraded in relevance order and the
//! resulting accuracy decay is compared against random orderings.
//!
//! Predictors can be built-in kernel machines ([`predictors::train_ls`]) or
//! any external process speaking a line-oriented score protocol
//! ([`predictors::ExternalPredictor`]).

pub mod alphabet;
pub mod condition;
pub mod data;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod importance;
pub mod kernels;
pub mod linalg;
pub mod mode;
pub mod predictor;
pub mod predictors;
pub mod sample;

pub use alphabet::AlphabetSpec;
pub use condition::{ConditionSpec, FeatureSelector, MatchStrategy, TargetValue};
pub use error::{Error, Result};
pub use importance::{ImportanceMap, MapLayout, MapMetadata};
pub use mode::{enumerate_pos, ExplanationMode, FeatureCoord};
pub use predictor::{FnPredictor, Predictor};
pub use sample::{ImageSample, Sample, SampleSet, SampleShape, SequenceSample};
