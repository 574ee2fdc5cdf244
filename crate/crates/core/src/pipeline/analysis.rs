use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::ingest::InputDataset;
use crate::error::{Error, Result};
use crate::indicator::{
    compute_percentiles, histogram_of, percent_i3, weight_sum, PercentileRule, RankClassScheme,
    ReferenceScope, DEFAULT_TOP_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub rules: Vec<PercentileRule>,
    pub schemes: Vec<RankClassScheme>,
    pub scope: ReferenceScope,
    /// Percentile at or above which a paper counts toward `top_share`.
    pub top_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            rules: vec![PercentileRule::Quantile],
            schemes: vec![RankClassScheme::P100],
            scope: ReferenceScope::GlobalPool,
            top_threshold: DEFAULT_TOP_THRESHOLD,
        }
    }
}

impl AnalysisConfig {
    pub fn new(
        rules: Vec<PercentileRule>,
        schemes: Vec<RankClassScheme>,
        scope: ReferenceScope,
    ) -> Self {
        AnalysisConfig {
            rules,
            schemes,
            scope,
            ..Default::default()
        }
    }

    /// (rule, scheme) columns in report order: rules outer, schemes inner.
    pub fn columns(&self) -> Vec<(PercentileRule, RankClassScheme)> {
        self.rules
            .iter()
            .flat_map(|&r| self.schemes.iter().map(move |&s| (r, s)))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.rules.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one rule is required".into(),
            ));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one scheme is required".into(),
            ));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.rules.iter().find(|r| !seen.insert(**r)) {
            return Err(Error::InvalidParameter(format!("duplicate rule {dup}")));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.schemes.iter().find(|s| !seen.insert(s.token())) {
            return Err(Error::InvalidParameter(format!("duplicate scheme {dup}")));
        }
        if !(0.0..=100.0).contains(&self.top_threshold) {
            return Err(Error::InvalidThreshold(self.top_threshold));
        }
        Ok(())
    }
}

/// One (rule, scheme) cell of a set's report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorValue {
    pub rule: PercentileRule,
    pub scheme: RankClassScheme,
    pub i3: f64,
    pub percent_i3: f64,
    /// Competition rank by descending `percent_i3` at 6-decimal precision.
    pub rank: usize,
    /// Class counts, bottom class first; absent for the continuous scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Vec<usize>>,
}

impl IndicatorValue {
    pub fn column_suffix(&self) -> String {
        column_suffix(self.rule, &self.scheme)
    }
}

pub fn column_suffix(rule: PercentileRule, scheme: &RankClassScheme) -> String {
    format!("{}_{}", rule.token(), scheme.token())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetReport {
    pub set_id: String,
    pub n_papers: usize,
    pub total_citations: u64,
    /// In `AnalysisConfig::columns` order.
    pub indicators: Vec<IndicatorValue>,
    /// Under the first rule, at `top_threshold`.
    pub top_share: f64,
}

impl SetReport {
    pub fn indicator(
        &self,
        rule: PercentileRule,
        scheme: &RankClassScheme,
    ) -> Option<&IndicatorValue> {
        self.indicators
            .iter()
            .find(|v| v.rule == rule && v.scheme.token() == scheme.token())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub rows: Vec<SetReport>,
    pub rules: Vec<PercentileRule>,
    pub schemes: Vec<RankClassScheme>,
    pub scope: ReferenceScope,
    pub top_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
}

impl RankingReport {
    pub fn row(&self, set_id: &str) -> Option<&SetReport> {
        self.rows.iter().find(|r| r.set_id == set_id)
    }

    /// `percent_i3` per set for one column, in row order.
    pub fn shares(&self, rule: PercentileRule, scheme: &RankClassScheme) -> Option<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.indicator(rule, scheme).map(|v| v.percent_i3))
            .collect()
    }
}

/// Values equal at the report's printed precision share a rank.
pub(crate) fn tie_key(value: f64) -> i64 {
    (value * 1e6).round() as i64
}

/// Competition ranks ("1224"): tied values share the smaller rank.
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    let keys: Vec<i64> = values.iter().map(|&v| tie_key(v)).collect();
    keys.iter()
        .map(|k| 1 + keys.iter().filter(|&&other| other > *k).count())
        .collect()
}

/// Percentiles, I3, %I3, class histograms and top-share for every set.
pub fn run_analysis(dataset: &InputDataset, config: &AnalysisConfig) -> Result<RankingReport> {
    config.validate()?;
    let records = &dataset.records;

    let mut sets: BTreeMap<&str, (usize, u64)> = BTreeMap::new();
    for rec in records {
        let entry = sets.entry(rec.set_id.as_str()).or_default();
        entry.0 += 1;
        entry.1 += rec.citations;
    }

    let mut rows: Vec<SetReport> = sets
        .iter()
        .map(|(&set_id, &(n_papers, total_citations))| SetReport {
            set_id: set_id.to_string(),
            n_papers,
            total_citations,
            indicators: Vec::new(),
            top_share: 0.0,
        })
        .collect();

    for (rule_idx, &rule) in config.rules.iter().enumerate() {
        let assignment = compute_percentiles(records, rule, config.scope)?;
        let by_set = assignment.by_set();

        if rule_idx == 0 {
            for row in rows.iter_mut() {
                let values = &by_set[row.set_id.as_str()];
                let hits = values
                    .iter()
                    .filter(|&&p| p >= config.top_threshold)
                    .count();
                row.top_share = hits as f64 / values.len() as f64;
            }
        }

        for scheme in &config.schemes {
            let mut i3_by_set = BTreeMap::new();
            for row in &rows {
                let values = &by_set[row.set_id.as_str()];
                i3_by_set.insert(row.set_id.clone(), weight_sum(values, scheme)?);
            }
            let shares = percent_i3(&i3_by_set)?;
            let share_vec: Vec<f64> = rows.iter().map(|r| shares[&r.set_id]).collect();
            let ranks = competition_ranks(&share_vec);

            for (i, row) in rows.iter_mut().enumerate() {
                let histogram = match scheme {
                    RankClassScheme::P100 => None,
                    _ => Some(histogram_of(&by_set[row.set_id.as_str()], scheme)?),
                };
                row.indicators.push(IndicatorValue {
                    rule,
                    scheme: *scheme,
                    i3: i3_by_set[&row.set_id],
                    percent_i3: share_vec[i],
                    rank: ranks[i],
                    histogram,
                });
            }
        }
    }

    // Rows are in ascending set_id order here; a stable sort keeps that as the tie-break.
    rows.sort_by_key(|r| std::cmp::Reverse(tie_key(r.indicators[0].percent_i3)));

    Ok(RankingReport {
        rows,
        rules: config.rules.clone(),
        schemes: config.schemes.clone(),
        scope: config.scope,
        top_threshold: config.top_threshold,
        generated_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicator::{i3, oracle_percentiles, CitationRecord};

    fn dataset(sets: &[(&str, &[u64])]) -> InputDataset {
        let mut records = Vec::new();
        for (set_id, counts) in sets {
            for (i, &c) in counts.iter().enumerate() {
                records.push(CitationRecord::new(*set_id, format!("{set_id}-{i}"), c));
            }
        }
        InputDataset::from_records(records, "mem")
    }

    fn all_columns_config() -> AnalysisConfig {
        AnalysisConfig::new(
            PercentileRule::ALL.to_vec(),
            vec![
                RankClassScheme::P100,
                RankClassScheme::Nsf6,
                RankClassScheme::top10(),
            ],
            ReferenceScope::GlobalPool,
        )
    }

    #[test]
    fn single_set_gets_everything() {
        let report =
            run_analysis(&dataset(&[("A", &[1, 2, 3, 9])]), &all_columns_config()).unwrap();
        assert_eq!(report.rows.len(), 1);
        for v in &report.rows[0].indicators {
            assert_eq!(v.percent_i3, 100.0);
            assert_eq!(v.rank, 1);
        }
    }

    #[test]
    fn identical_sets_split_evenly() {
        let ds = dataset(&[("A", &[0, 4, 4, 7]), ("B", &[4, 0, 7, 4])]);
        let report = run_analysis(&ds, &all_columns_config()).unwrap();
        for row in &report.rows {
            for v in &row.indicators {
                assert_eq!(v.percent_i3, 50.0, "{}", v.column_suffix());
                assert_eq!(v.rank, 1);
            }
        }
        assert_eq!(report.rows[0].set_id, "A");
    }

    #[test]
    fn pooled_fixture_matches_oracle() {
        let ds = dataset(&[("A", &[0, 1, 1, 2, 5]), ("B", &[0, 0, 0, 0, 3])]);
        let report = run_analysis(&ds, &AnalysisConfig::default()).unwrap();

        // Oracle over the pooled ten counts, relabelled as one set.
        let pooled: Vec<CitationRecord> = ds
            .records
            .iter()
            .map(|r| CitationRecord::new("*", r.paper_id.clone(), r.citations))
            .collect();
        let oracle = oracle_percentiles(&pooled, PercentileRule::Quantile).unwrap();
        let sum_for = |set: &str| -> f64 {
            let mut v: Vec<f64> = ds
                .records
                .iter()
                .filter(|r| r.set_id == set)
                .map(|r| oracle.percentile(&r.paper_id).unwrap())
                .collect();
            v.sort_by(f64::total_cmp);
            v.iter().sum()
        };
        let (a, b) = (sum_for("A"), sum_for("B"));
        // Pooled {0,0,0,0,0,1,1,2,3,5}: A = 0+50+50+70+90, B = 0*4+80.
        assert_eq!((a, b), (260.0, 80.0));

        let row_a = report.row("A").unwrap();
        let row_b = report.row("B").unwrap();
        assert_eq!(row_a.indicators[0].i3, a);
        assert_eq!(row_b.indicators[0].i3, b);
        assert!((row_a.indicators[0].percent_i3 - 100.0 * a / (a + b)).abs() < 1e-12);
        assert_eq!(report.rows[0].set_id, "A");
        assert_eq!(row_a.top_share, 0.2);
    }

    #[test]
    fn cells_match_library_calls() {
        let ds = dataset(&[("A", &[0, 1, 1, 2, 5]), ("B", &[0, 0, 3]), ("C", &[7, 8])]);
        let config = all_columns_config();
        let report = run_analysis(&ds, &config).unwrap();
        for (rule, scheme) in config.columns() {
            let a = compute_percentiles(&ds.records, rule, config.scope).unwrap();
            for row in &report.rows {
                let cell = row.indicator(rule, &scheme).unwrap();
                assert_eq!(cell.i3, i3(&a, &scheme, &row.set_id).unwrap());
            }
        }
    }

    #[test]
    fn totals_and_counts() {
        let report = run_analysis(
            &dataset(&[("A", &[3, 4]), ("B", &[10])]),
            &AnalysisConfig::default(),
        )
        .unwrap();
        let a = report.row("A").unwrap();
        assert_eq!((a.n_papers, a.total_citations), (2, 7));
    }

    #[test]
    fn config_validation() {
        let ds = dataset(&[("A", &[1])]);
        let mut cfg = AnalysisConfig::default();
        cfg.rules.push(PercentileRule::Quantile);
        assert!(run_analysis(&ds, &cfg).is_err());
        cfg.rules.clear();
        assert!(run_analysis(&ds, &cfg).is_err());
        let cfg = AnalysisConfig {
            schemes: vec![],
            ..Default::default()
        };
        assert!(run_analysis(&ds, &cfg).is_err());
    }

    #[test]
    fn all_uncited_pool_is_degenerate() {
        let err = run_analysis(
            &dataset(&[("A", &[0, 0]), ("B", &[0])]),
            &AnalysisConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegeneratePool));
    }

    #[test]
    fn competition_ranking() {
        assert_eq!(competition_ranks(&[5.0, 9.0, 5.0, 1.0]), vec![2, 1, 2, 4]);
        assert_eq!(competition_ranks(&[1.0, 1.0 + 1e-12]), vec![1, 1]);
    }
}
