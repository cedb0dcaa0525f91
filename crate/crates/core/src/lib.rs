//! Information gain versus disturbance when an eavesdropper probes one of two
//! equiprobable, non-orthogonal qubit states.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`]: small dense complex matrices, partial traces over the
//!   2 ⊗ 4 system/probe space, Hermitian eigenvalues and seeded random states.
//! * [`model`]: the signal pair, the four-angle probe parameterisation and the
//!   16-coefficient interaction tensor.
//! * [`channel`]: propagation of a signal through the probe interaction, the
//!   reduced states seen by the receiver and by the probe, and the disturbance.
//! * [`infotheory`]: Shannon entropy, POVMs, Bayesian mutual information and the
//!   closed-form accessible information of symmetric qubit pairs.
//! * [`frontier`]: the analytic information/disturbance tradeoff curve.
//! * [`optimizer`]: derivative-free maximisation of the penalised figure of
//!   merit, POVM optimisation and the outcome-count experiment.
//! * [`scenario`]: three-party mutual informations for the maximal-information
//!   attack.
//!
//! All logarithms are natural, so every information value is in nats.

pub mod channel;
pub mod error;
pub mod frontier;
pub mod infotheory;
pub mod matcore;
pub mod model;
pub mod optimizer;
pub mod scenario;

pub use error::{Error, Result};
pub use infotheory::{Ensemble, Povm, SymmetricPair};
pub use matcore::{Matrix, SeededRng, C64};
pub use model::{CoefficientVector, InteractionTensor, ProbeParams, SignalPair};
