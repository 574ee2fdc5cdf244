//! Seeded synthetic citation sets and the rule-divergence experiment.
//!
//! Each set draws from its own ChaCha8 stream (`rand_chacha`), seeded with the
//! set's 64-bit seed. Cited papers get `floor(exp(N(mu, sigma^2)))` citations,
//! clamped to at least 1; exactly `floor(uncited_share * n)` papers are uncited.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicator::{CitationRecord, PercentileRule, RankClassScheme, ReferenceScope};
use crate::pipeline::{compare_rules, run_analysis, AnalysisConfig, InputDataset, RuleComparison};

pub const RNG_ALGORITHM: &str = "ChaCha8";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    pub set_id: String,
    pub n: usize,
    pub uncited_share: f64,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl SetSpec {
    /// Number of uncited papers. The small epsilon keeps shares such as 0.29
    /// from losing a paper to binary rounding of `share * n`.
    pub fn uncited_count(&self) -> usize {
        ((self.uncited_share * self.n as f64 + 1e-9).floor() as usize).min(self.n)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| {
            Err(Error::InvalidParameter(format!(
                "set {}: {msg}",
                self.set_id
            )))
        };
        if self.set_id.is_empty() {
            return Err(Error::InvalidParameter("empty set_id".into()));
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.uncited_share) {
            return bad(format!(
                "uncited_share {} outside [0, 1]",
                self.uncited_share
            ));
        }
        if !self.mu.is_finite() {
            return bad(format!("mu {} is not finite", self.mu));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!(
                "sigma {} must be finite and non-negative",
                self.sigma
            ));
        }
        Ok(())
    }
}

/// Records for one synthetic set: uncited papers first, then the cited draws.
pub fn generate_set(spec: &SetSpec) -> Result<Vec<CitationRecord>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(spec.mu, spec.sigma)
        .map_err(|e| Error::InvalidParameter(format!("set {}: {e}", spec.set_id)))?;
    let zeros = spec.uncited_count();

    Ok((0..spec.n)
        .map(|i| {
            let citations = if i < zeros {
                0
            } else {
                // `as` saturates at u64::MAX for huge draws.
                (normal.sample(&mut rng).exp().floor() as u64).max(1)
            };
            CitationRecord::new(
                spec.set_id.clone(),
                format!("{}-{i:06}", spec.set_id),
                citations,
            )
        })
        .collect())
}

/// Set specs plus the analysis to run on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sets: Vec<SetSpec>,
    pub rules: Vec<PercentileRule>,
    #[serde(default = "default_scheme")]
    pub scheme: RankClassScheme,
    #[serde(default)]
    pub scope: ReferenceScope,
}

fn default_scheme() -> RankClassScheme {
    RankClassScheme::P100
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Replace every set's seed with `base + index` (wrapping).
    pub fn reseed(&mut self, base: u64) {
        for (i, spec) in self.sets.iter_mut().enumerate() {
            spec.seed = base.wrapping_add(i as u64);
        }
    }

    pub fn run(&self) -> Result<DivergenceResult> {
        run_divergence_experiment(&self.sets, &self.rules, &self.scheme, self.scope)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceResult {
    pub comparison: RuleComparison,
}

impl DivergenceResult {
    pub fn pearson(&self, a: PercentileRule, b: PercentileRule) -> Option<f64> {
        self.comparison.pearson_between(a, b)
    }

    pub fn top_set(&self, rule: PercentileRule) -> Option<&str> {
        self.comparison.top_set_for(rule)
    }
}

/// Pool all generated sets, compute %I3 under each rule, and correlate the rules.
pub fn run_divergence_experiment(
    specs: &[SetSpec],
    rules: &[PercentileRule],
    scheme: &RankClassScheme,
    scope: ReferenceScope,
) -> Result<DivergenceResult> {
    if specs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two sets".into()));
    }
    if rules.len() < 2 {
        return Err(Error::InvalidParameter("need at least two rules".into()));
    }
    let mut ids = BTreeSet::new();
    if let Some(dup) = specs.iter().find(|s| !ids.insert(s.set_id.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "duplicate set_id {}",
            dup.set_id
        )));
    }

    let mut records = Vec::new();
    for spec in specs {
        records.extend(generate_set(spec)?);
    }
    let dataset = InputDataset::from_records(records, "synthetic");

    let mut distinct = Vec::new();
    for &r in rules {
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    let report = run_analysis(
        &dataset,
        &AnalysisConfig::new(distinct, vec![*scheme], scope),
    )?;
    Ok(DivergenceResult {
        comparison: compare_rules(&report, rules, scheme)?,
    })
}
