//! Quadratic pairwise-comparison reference for [`compute_percentiles`].
//!
//! Every record is compared against every other record of its set, with no
//! sorting or searching. Property tests hold the fast path to this exactly.
//!
//! [`compute_percentiles`]: super::compute_percentiles

use super::percentile::{check_records, PercentileAssignment, PercentileEntry};
use super::rule::{CitationRecord, PercentileRule, ReferenceScope};
use crate::error::Result;

/// Per-set percentiles by explicit pairwise comparison.
pub fn oracle_percentiles(
    records: &[CitationRecord],
    rule: PercentileRule,
) -> Result<PercentileAssignment> {
    check_records(records, ReferenceScope::PerSet)?;

    let entries = records
        .iter()
        .map(|rec| {
            let mut n = 0;
            let mut below = 0;
            let mut at_or_below = 0;
            for other in records.iter().filter(|o| o.set_id == rec.set_id) {
                n += 1;
                if other.citations < rec.citations {
                    below += 1;
                }
                if other.citations <= rec.citations {
                    at_or_below += 1;
                }
            }
            PercentileEntry {
                paper_id: rec.paper_id.clone(),
                set_id: rec.set_id.clone(),
                citations: rec.citations,
                group_key: rec.set_id.clone(),
                percentile: rule.from_tallies(rec.citations, below, at_or_below, n),
            }
        })
        .collect();

    Ok(PercentileAssignment::from_entries(
        rule,
        ReferenceScope::PerSet,
        entries,
    ))
}
