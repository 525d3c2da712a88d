//! Cumulative distribution functions of the K-prime and K-square
//! distributions, evaluated as mixtures of incomplete beta ratios, and the
//! statistical procedures built on them.
//!
//! ```
//! use kdist::kprime::{kprime_cdf, KPrimeParams};
//! use kdist::series::EvalOptions;
//!
//! let params = KPrimeParams::new(5.0, 20.0, 10.0).unwrap();
//! let report = kprime_cdf(&params, 1.0, &EvalOptions::with_tolerance(1e-4)).unwrap();
//! assert!((report.value - 0.0007).abs() < 5e-5);
//! ```

pub mod applications;
pub mod bench;
pub mod error;
pub mod kprime;
pub mod ksquare;
mod root;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use series::{EvalOptions, EvalReport, Strategy, StrategyUsed};
