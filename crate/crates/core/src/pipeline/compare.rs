use serde::{Deserialize, Serialize};

use super::analysis::{tie_key, RankingReport};
use crate::error::{Error, Result};
use crate::indicator::{PercentileRule, RankClassScheme};
use crate::stats::{pearson_r, spearman_rho};

/// Pairwise agreement between counting rules over per-set %I3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleComparison {
    pub scheme: RankClassScheme,
    pub rules: Vec<PercentileRule>,
    pub n_sets: usize,
    /// Pearson over %I3, `rules.len()` square.
    pub pearson: Vec<Vec<f64>>,
    /// Spearman over %I3 (average ranks for ties).
    pub spearman: Vec<Vec<f64>>,
    /// Highest-%I3 set per rule; ties go to the smallest set_id.
    pub top_set: Vec<String>,
}

impl RuleComparison {
    pub fn index_of(&self, rule: PercentileRule) -> Option<usize> {
        self.rules.iter().position(|&r| r == rule)
    }

    pub fn pearson_between(&self, a: PercentileRule, b: PercentileRule) -> Option<f64> {
        Some(self.pearson[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn spearman_between(&self, a: PercentileRule, b: PercentileRule) -> Option<f64> {
        Some(self.spearman[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn top_set_for(&self, rule: PercentileRule) -> Option<&str> {
        self.index_of(rule).map(|i| self.top_set[i].as_str())
    }
}

/// Correlation matrices between the listed rules' %I3 columns under `scheme`.
///
/// `rules` may repeat a rule; each must be a column of `report`.
pub fn compare_rules(
    report: &RankingReport,
    rules: &[PercentileRule],
    scheme: &RankClassScheme,
) -> Result<RuleComparison> {
    if rules.len() < 2 {
        return Err(Error::InvalidParameter(
            "at least two rules are needed for a comparison".into(),
        ));
    }
    let columns = rules
        .iter()
        .map(|&rule| {
            report.shares(rule, scheme).ok_or_else(|| {
                Error::InvalidParameter(format!("report has no column for {rule} / {scheme}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let k = rules.len();
    let mut pearson = vec![vec![1.0; k]; k];
    let mut spearman = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r = pearson_r(&columns[i], &columns[j])?.coefficient;
            let rho = spearman_rho(&columns[i], &columns[j])?.coefficient;
            pearson[i][j] = r;
            pearson[j][i] = r;
            spearman[i][j] = rho;
            spearman[j][i] = rho;
        }
    }

    let top_set = columns
        .iter()
        .map(|shares| {
            let mut best = 0;
            for (idx, row) in report.rows.iter().enumerate() {
                let (cur, top) = (tie_key(shares[idx]), tie_key(shares[best]));
                if cur > top || (cur == top && row.set_id < report.rows[best].set_id) {
                    best = idx;
                }
            }
            report.rows[best].set_id.clone()
        })
        .collect();

    Ok(RuleComparison {
        scheme: *scheme,
        rules: rules.to_vec(),
        n_sets: report.rows.len(),
        pearson,
        spearman,
        top_set,
    })
}
