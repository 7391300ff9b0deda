//! Exact continued fractions of `sqrt(D)` and the arithmetic built on them.
//!
//! The crate is organised bottom-up: integer kernels, the expansion engine,
//! continuants, the half-period structure, checks of the classification
//! statements over primes, Friesen families, and the analytic period bound.

pub mod analytic;
pub mod cf;
pub mod continuant;
pub mod error;
pub mod family;
pub mod int;
pub mod midpoint;
pub mod scan;
pub mod theorems;

pub use cf::{expand_sqrt, expand_surd, QuadraticSurd, SqrtExpansion};
pub use error::{Error, Result};
pub use midpoint::Form;
pub use theorems::TheoremId;
