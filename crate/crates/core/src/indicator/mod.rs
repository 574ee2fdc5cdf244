//! Percentile counting rules, rank classes, and I3 aggregation.

mod oracle;
mod percentile;
mod rule;
mod scheme;

pub use oracle::oracle_percentiles;
pub use percentile::{compute_percentiles, percentile_of, PercentileAssignment, PercentileEntry};
pub use rule::{CitationRecord, PercentileRule, ReferenceScope};
pub use scheme::{
    class_histogram, classify, count_at_or_above, i3, percent_i3, top_share, RankClassScheme,
    DEFAULT_TOP_THRESHOLD, NSF6_LOWER_BOUNDS,
};
pub(crate) use scheme::{histogram_of, weight_sum};
