//! Anderson acceleration for nonsmooth fixed-point optimization algorithms.
//!
//! Every solver in this crate is expressed as a fixed-point map `H` with
//! residual `r(x) = H(x) - x`. The [`anderson`] engine accelerates any such
//! map with a safeguarded, Tikhonov-regularized Anderson step, and the
//! [`harness`] runs baseline and accelerated variants side by side while
//! recording residual traces, fitted linear rates and the iteration at which
//! the active manifold (sign or bound pattern) is identified.
//!
//! Module map:
//!
//! - [`linalg`]: dense/CSR matrices, power-method norm estimate, conjugate gradients.
//! - [`prox`]: soft thresholding, projections and the least-squares prox.
//! - [`anderson`]: weight computation, candidate formation, safeguard, rate fit.
//! - [`algorithms`]: PPA, PGA/ISTA, FISTA, PLA, cyclic PCD, DRS, ADMM and IRL1.
//! - [`problems`]: Lasso, SVM dual, NNLS and sparse logistic instances, LIBSVM input.
//! - [`manifold`]: sign/activity patterns and identification detection.
//! - [`harness`]: experiment configs, runs, traces and summaries.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod anderson;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod manifold;
pub mod problems;
pub mod prox;

pub use algorithms::FixedPointOperator;
pub use anderson::{AaConfig, AaDiagnostics, AaState, RateFit, Tikhonov};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, IterationRecord, IterationTrace, RunStatus, RunSummary};
pub use linalg::{CsrMatrix, DenseMatrix, LinearOperator};
pub use manifold::SignPattern;
pub use problems::{Phi, PhiFamily};
pub use prox::{BoxBounds, Prox};
