//! Faster-than-Nyquist non-orthogonal FDM built on the fractional cosine
//! transform.
//!
//! The crate covers the whole desk-scale study of the scheme:
//!
//! * [`transforms`]: fractional cosine/Hartley multiplexing kernels.
//! * [`icimodel`]: correlation matrix, ICI power and the two-level Gaussian
//!   mixture used to check that ICI is approximately Gaussian.
//! * [`modem`]: PAM mapping, framing, cyclic prefix and rate accounting.
//! * [`channel`]: seeded AWGN channel parameterised by Eb/N0.
//! * [`equalize`]: iterative-detection ICI cancellation.
//! * [`capacity`]: Shannon and FTN capacity bounds.
//! * [`berlab`]: Monte Carlo BER sweeps, PSD estimation and result export.

pub mod berlab;
pub mod capacity;
pub mod channel;
pub mod equalize;
mod error;
pub mod icimodel;
mod linalg;
pub mod modem;
pub mod parallel;
pub mod rng;
pub mod stats;
pub mod transforms;

pub use error::{Error, Result};
pub use parallel::Execution;
pub use transforms::{TransformKind, TransformPlan};
