//! Citation-percentile impact indicators.
//!
//! Computes per-paper percentiles under four counting rules (strict quantile,
//! the +0.9 correction, the self-inclusive rule, and its zero-floored
//! revision), aggregates them into I3 and %I3 per set under continuous or
//! class-based weighting, and compares rules with correlation and
//! two-proportion z-tests.
//!
//! ```
//! use citerank_core::indicator::{percentile_of, PercentileRule};
//!
//! let group: Vec<u64> = (0..10).collect();
//! assert_eq!(percentile_of(9, &group, PercentileRule::Quantile).unwrap(), 90.0);
//! assert_eq!(percentile_of(9, &group, PercentileRule::Lb09).unwrap(), 99.0);
//! assert_eq!(percentile_of(9, &group, PercentileRule::RousseauRaw).unwrap(), 100.0);
//! ```

pub mod error;
pub mod indicator;
pub mod pipeline;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
