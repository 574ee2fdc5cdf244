use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::rule::{CitationRecord, PercentileRule, ReferenceScope};
use crate::error::{Error, Result};

/// Percentile of `count` within `group_counts` under `rule`.
///
/// `group_counts` must contain `count`; order does not matter.
pub fn percentile_of(count: u64, group_counts: &[u64], rule: PercentileRule) -> Result<f64> {
    if group_counts.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut below = 0;
    let mut at_or_below = 0;
    let mut present = false;
    for &c in group_counts {
        if c < count {
            below += 1;
        }
        if c <= count {
            at_or_below += 1;
        }
        present |= c == count;
    }
    if !present {
        return Err(Error::NotInGroup(count));
    }
    Ok(rule.from_tallies(count, below, at_or_below, group_counts.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentileEntry {
    pub paper_id: String,
    pub set_id: String,
    pub citations: u64,
    pub group_key: String,
    pub percentile: f64,
}

/// Percentile of every record, sorted by `paper_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentileAssignment {
    pub rule: PercentileRule,
    pub scope: ReferenceScope,
    entries: Vec<PercentileEntry>,
}

impl PercentileAssignment {
    pub(crate) fn from_entries(
        rule: PercentileRule,
        scope: ReferenceScope,
        mut entries: Vec<PercentileEntry>,
    ) -> Self {
        entries.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        PercentileAssignment {
            rule,
            scope,
            entries,
        }
    }

    pub fn entries(&self) -> &[PercentileEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, paper_id: &str) -> Option<&PercentileEntry> {
        self.entries
            .binary_search_by(|e| e.paper_id.as_str().cmp(paper_id))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn percentile(&self, paper_id: &str) -> Option<f64> {
        self.get(paper_id).map(|e| e.percentile)
    }

    /// Distinct set ids, ascending.
    pub fn set_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.entries.iter().map(|e| e.set_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Percentiles grouped by set id, each list ascending.
    pub fn by_set(&self) -> BTreeMap<&str, Vec<f64>> {
        let mut sets: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for e in &self.entries {
            sets.entry(e.set_id.as_str())
                .or_default()
                .push(e.percentile);
        }
        for values in sets.values_mut() {
            values.sort_by(f64::total_cmp);
        }
        sets
    }

    /// Percentiles of one set's papers, ascending.
    pub fn set_percentiles(&self, set_id: &str) -> Result<Vec<f64>> {
        let mut values: Vec<f64> = self
            .entries
            .iter()
            .filter(|e| e.set_id == set_id)
            .map(|e| e.percentile)
            .collect();
        if values.is_empty() {
            return Err(Error::UnknownSet(set_id.to_string()));
        }
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}

pub(crate) fn check_records(records: &[CitationRecord], scope: ReferenceScope) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut seen = HashSet::with_capacity(records.len());
    for rec in records {
        if !seen.insert(rec.paper_id.as_str()) {
            return Err(Error::DuplicatePaperId {
                paper_id: rec.paper_id.clone(),
            });
        }
        if scope.uses_doc_type() && rec.doc_type.is_none() {
            return Err(Error::MissingDocType {
                paper_id: rec.paper_id.clone(),
            });
        }
    }
    Ok(())
}

/// Percentiles of all records, each computed within its reference group.
pub fn compute_percentiles(
    records: &[CitationRecord],
    rule: PercentileRule,
    scope: ReferenceScope,
) -> Result<PercentileAssignment> {
    check_records(records, scope)?;

    let keys = records
        .iter()
        .map(|r| r.group_key(scope))
        .collect::<Result<Vec<_>>>()?;

    let mut groups: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for (rec, key) in records.iter().zip(&keys) {
        groups.entry(key.as_str()).or_default().push(rec.citations);
    }
    for counts in groups.values_mut() {
        counts.sort_unstable();
    }

    let entries = records
        .iter()
        .zip(&keys)
        .map(|(rec, key)| {
            let sorted = &groups[key.as_str()];
            let below = sorted.partition_point(|&c| c < rec.citations);
            let at_or_below = sorted.partition_point(|&c| c <= rec.citations);
            PercentileEntry {
                paper_id: rec.paper_id.clone(),
                set_id: rec.set_id.clone(),
                citations: rec.citations,
                group_key: key.clone(),
                percentile: rule.from_tallies(rec.citations, below, at_or_below, sorted.len()),
            }
        })
        .collect();

    Ok(PercentileAssignment::from_entries(rule, scope, entries))
}
