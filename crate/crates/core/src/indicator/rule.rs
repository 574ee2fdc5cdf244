use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counting convention that turns a citation count into a percentile.
///
/// All four rules share one arithmetic path: a tally of reference-group items
/// measured in tenths, scaled to `[0, 100]` by the group size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PercentileRule {
    /// Share of items with strictly fewer citations.
    Quantile,
    /// Strictly-lower tally plus 0.9, for every item.
    Lb09,
    /// Share of items with at most as many citations; the item counts itself.
    RousseauRaw,
    /// As `RousseauRaw`, but uncited items are floored to 0.
    #[serde(rename = "rousseau")]
    RousseauRevised,
}

impl PercentileRule {
    pub const ALL: [PercentileRule; 4] = [
        PercentileRule::Quantile,
        PercentileRule::Lb09,
        PercentileRule::RousseauRaw,
        PercentileRule::RousseauRevised,
    ];

    pub fn token(self) -> &'static str {
        match self {
            PercentileRule::Quantile => "quantile",
            PercentileRule::Lb09 => "lb09",
            PercentileRule::RousseauRaw => "rousseau-raw",
            PercentileRule::RousseauRevised => "rousseau",
        }
    }

    /// Percentile from pre-computed tallies.
    ///
    /// `below` is the number of group items with fewer citations than `count`,
    /// `at_or_below` the number with at most `count` citations, `n` the group size.
    pub fn from_tallies(self, count: u64, below: usize, at_or_below: usize, n: usize) -> f64 {
        let tenths = match self {
            PercentileRule::Quantile => 10 * below as u64,
            PercentileRule::Lb09 => 10 * below as u64 + 9,
            PercentileRule::RousseauRaw => 10 * at_or_below as u64,
            PercentileRule::RousseauRevised if count == 0 => 0,
            PercentileRule::RousseauRevised => 10 * at_or_below as u64,
        };
        tenths as f64 * 10.0 / n as f64
    }
}

impl fmt::Display for PercentileRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PercentileRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quantile" => Ok(PercentileRule::Quantile),
            "lb09" => Ok(PercentileRule::Lb09),
            "rousseau-raw" => Ok(PercentileRule::RousseauRaw),
            "rousseau" => Ok(PercentileRule::RousseauRevised),
            _ => Err(Error::UnknownToken {
                kind: "percentile rule",
                token: s.to_string(),
            }),
        }
    }
}

/// Which records form the reference distribution a percentile is computed in.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceScope {
    #[default]
    GlobalPool,
    PerSet,
    PerDocTypePool,
    PerSetAndDocType,
}

impl ReferenceScope {
    pub fn token(self) -> &'static str {
        match self {
            ReferenceScope::GlobalPool => "global",
            ReferenceScope::PerSet => "per-set",
            ReferenceScope::PerDocTypePool => "per-doc-type",
            ReferenceScope::PerSetAndDocType => "per-set-and-doc-type",
        }
    }

    pub fn uses_doc_type(self) -> bool {
        matches!(
            self,
            ReferenceScope::PerDocTypePool | ReferenceScope::PerSetAndDocType
        )
    }
}

impl fmt::Display for ReferenceScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ReferenceScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "global" | "global-pool" => Ok(ReferenceScope::GlobalPool),
            "per-set" | "set" => Ok(ReferenceScope::PerSet),
            "per-doc-type" | "doc-type" => Ok(ReferenceScope::PerDocTypePool),
            "per-set-and-doc-type" | "set-doc-type" => Ok(ReferenceScope::PerSetAndDocType),
            _ => Err(Error::UnknownToken {
                kind: "reference scope",
                token: s.to_string(),
            }),
        }
    }
}

/// One document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationRecord {
    pub set_id: String,
    pub paper_id: String,
    pub citations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_type: Option<String>,
}

impl CitationRecord {
    pub fn new(set_id: impl Into<String>, paper_id: impl Into<String>, citations: u64) -> Self {
        CitationRecord {
            set_id: set_id.into(),
            paper_id: paper_id.into(),
            citations,
            doc_type: None,
        }
    }

    pub fn with_doc_type(mut self, doc_type: impl Into<String>) -> Self {
        self.doc_type = Some(doc_type.into());
        self
    }

    /// Label of the reference group this record falls in under `scope`.
    pub fn group_key(&self, scope: ReferenceScope) -> Result<String> {
        let doc_type = || {
            self.doc_type
                .as_deref()
                .ok_or_else(|| Error::MissingDocType {
                    paper_id: self.paper_id.clone(),
                })
        };
        Ok(match scope {
            ReferenceScope::GlobalPool => "*".to_string(),
            ReferenceScope::PerSet => self.set_id.clone(),
            ReferenceScope::PerDocTypePool => format!("doc:{}", doc_type()?),
            ReferenceScope::PerSetAndDocType => format!("{}|doc:{}", self.set_id, doc_type()?),
        })
    }
}
