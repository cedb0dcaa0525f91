//! Numerical search: Powell maximisation of the figure of merit over probe
//! interactions, rank-one POVM optimisation, and the outcome-count experiment.

mod davies;
mod merit;
mod povm;
pub mod powell;

pub use davies::{davies_experiment, outcome_sweep, DaviesTrial};
pub use merit::{
    lambda_zero_study, maximize_merit, LambdaStudyRow, MeritConfig, MeritMode, OptimizeReport,
    LAMBDA_SNAP,
};
pub use povm::optimize_povm;
