//! Glucose / insulin / glucagon dynamics of the oral glucose tolerance test.
//!
//! * [`model`]: the seven-compartment Erlang-chain ODE and its integrator.
//! * [`stability`]: characteristic roots of the two linear modes.
//! * [`identifiability`]: similarity transforms of the reduced system.
//! * [`inference`]: priors, likelihood, t-walk sampling and summaries.
//! * [`classify`]: OGTT categories and the insulin-score SVM ensemble.

pub mod classify;
pub mod error;
pub mod identifiability;
pub mod inference;
pub mod model;
pub mod patient;
pub mod stability;

pub use classify::{
    categorize, insulin_scores, predict, quantile_ensemble, quantile_ensemble_at, train_linear_svm,
    Category, Class, ClassifierModel, Estimate, Hyperplane, Prediction,
};
pub use error::{Error, Result};
pub use inference::{
    infer_patient, summarize, twalk_sample, InferenceConfig, PosteriorChain, PosteriorSummary,
    PriorSpec,
};
pub use model::{
    gi_closed_form, gi_erlang_stage, observe, positive_part, rhs, simulate, ModelParams,
    ParamVector, SystemState, Trajectory,
};
pub use patient::PatientRecord;
