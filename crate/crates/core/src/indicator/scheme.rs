use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::percentile::PercentileAssignment;
use crate::error::{Error, Result};

/// Lower bounds of the six NSF percentile rank classes, bottom class first.
pub const NSF6_LOWER_BOUNDS: [f64; 6] = [0.0, 50.0, 75.0, 90.0, 95.0, 99.0];

pub const DEFAULT_TOP_THRESHOLD: f64 = 90.0;

/// How percentiles are weighted when summed into I3.
///
/// Class intervals are lower-inclusive; the top class is closed at 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum RankClassScheme {
    /// Continuous: a paper's weight is its percentile.
    P100,
    /// bottom-50%, 50-75%, 75-90%, 90-95%, 95-99%, top-1%; weights 1..=6.
    Nsf6,
    /// `[0, threshold)` weighs 1, `[threshold, 100]` weighs 2.
    TwoClass { threshold: f64 },
}

impl RankClassScheme {
    pub fn two_class(threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 100.0) {
            return Err(Error::InvalidThreshold(threshold));
        }
        Ok(RankClassScheme::TwoClass { threshold })
    }

    pub fn top10() -> Self {
        RankClassScheme::TwoClass {
            threshold: DEFAULT_TOP_THRESHOLD,
        }
    }

    /// Number of classes. P100 is histogrammed into 100 one-point bins.
    pub fn class_count(&self) -> usize {
        match self {
            RankClassScheme::P100 => 100,
            RankClassScheme::Nsf6 => 6,
            RankClassScheme::TwoClass { .. } => 2,
        }
    }

    pub fn token(&self) -> String {
        match *self {
            RankClassScheme::P100 => "p100".to_string(),
            RankClassScheme::Nsf6 => "nsf6".to_string(),
            RankClassScheme::TwoClass { threshold } => {
                let top = 100.0 - threshold;
                if top.fract() == 0.0 {
                    format!("top{top}")
                } else {
                    format!("two-class:{threshold}")
                }
            }
        }
    }

    /// Contribution of one paper to I3.
    pub fn weight(&self, percentile: f64) -> Result<f64> {
        match self {
            RankClassScheme::P100 => {
                check_range(percentile)?;
                Ok(percentile)
            }
            _ => classify(percentile, self).map(|c| c as f64),
        }
    }
}

impl fmt::Display for RankClassScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for RankClassScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownToken {
            kind: "rank-class scheme",
            token: s.to_string(),
        };
        match token.as_str() {
            "p100" => Ok(RankClassScheme::P100),
            "nsf6" | "6pr" => Ok(RankClassScheme::Nsf6),
            _ => {
                if let Some(rest) = token.strip_prefix("top") {
                    let top: f64 = rest.parse().map_err(|_| unknown())?;
                    RankClassScheme::two_class(100.0 - top)
                } else if let Some(rest) = token.strip_prefix("two-class:") {
                    let threshold: f64 = rest.parse().map_err(|_| unknown())?;
                    RankClassScheme::two_class(threshold)
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

impl From<RankClassScheme> for String {
    fn from(s: RankClassScheme) -> String {
        s.token()
    }
}

impl TryFrom<String> for RankClassScheme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn check_range(percentile: f64) -> Result<()> {
    if (0.0..=100.0).contains(&percentile) {
        Ok(())
    } else {
        Err(Error::PercentileOutOfRange(percentile))
    }
}

/// 1-based class of `percentile`, lowest class = 1.
pub fn classify(percentile: f64, scheme: &RankClassScheme) -> Result<usize> {
    check_range(percentile)?;
    Ok(match *scheme {
        RankClassScheme::P100 => (percentile.floor() as usize + 1).min(100),
        RankClassScheme::Nsf6 => NSF6_LOWER_BOUNDS
            .iter()
            .take_while(|&&lower| percentile >= lower)
            .count(),
        RankClassScheme::TwoClass { threshold } => {
            if percentile >= threshold {
                2
            } else {
                1
            }
        }
    })
}

/// Number of the set's papers in each class, bottom class first.
pub fn class_histogram(
    assignment: &PercentileAssignment,
    scheme: &RankClassScheme,
    set_id: &str,
) -> Result<Vec<usize>> {
    histogram_of(&assignment.set_percentiles(set_id)?, scheme)
}

pub(crate) fn histogram_of(values: &[f64], scheme: &RankClassScheme) -> Result<Vec<usize>> {
    let mut counts = vec![0; scheme.class_count()];
    for &p in values {
        counts[classify(p, scheme)? - 1] += 1;
    }
    Ok(counts)
}

/// Integrated impact of one set: the sum of its papers' weights under `scheme`.
pub fn i3(
    assignment: &PercentileAssignment,
    scheme: &RankClassScheme,
    set_id: &str,
) -> Result<f64> {
    weight_sum(&assignment.set_percentiles(set_id)?, scheme)
}

/// Sum of weights over `values`, which must be sorted ascending so that equal
/// multisets give bit-identical sums.
pub(crate) fn weight_sum(values: &[f64], scheme: &RankClassScheme) -> Result<f64> {
    values.iter().map(|&p| scheme.weight(p)).sum()
}

/// Each set's share of the summed I3, in percent.
pub fn percent_i3(i3_by_set: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    if i3_by_set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some((set_id, &value)) = i3_by_set.iter().find(|(_, v)| v.is_nan() || **v < 0.0) {
        return Err(Error::NegativeI3 {
            set_id: set_id.clone(),
            value,
        });
    }
    let total: f64 = i3_by_set.values().sum();
    if total == 0.0 {
        return Err(Error::DegeneratePool);
    }
    Ok(i3_by_set
        .iter()
        .map(|(k, v)| (k.clone(), 100.0 * v / total))
        .collect())
}

/// Papers of the set at or above `threshold`.
pub fn count_at_or_above(
    assignment: &PercentileAssignment,
    set_id: &str,
    threshold: f64,
) -> Result<(usize, usize)> {
    let values = assignment.set_percentiles(set_id)?;
    let hits = values.iter().filter(|&&p| p >= threshold).count();
    Ok((hits, values.len()))
}

/// Fraction of the set's papers with percentile ≥ `threshold`.
pub fn top_share(assignment: &PercentileAssignment, set_id: &str, threshold: f64) -> Result<f64> {
    let (hits, n) = count_at_or_above(assignment, set_id, threshold)?;
    Ok(hits as f64 / n as f64)
}
