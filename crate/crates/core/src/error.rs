use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty reference group")]
    EmptyGroup,

    #[error("item not in reference group (count {0})")]
    NotInGroup(u64),

    #[error("no records supplied")]
    EmptyInput,

    #[error("missing doc_type for paper {paper_id} under a doc_type reference scope")]
    MissingDocType { paper_id: String },

    #[error("duplicate paper_id {paper_id}")]
    DuplicatePaperId { paper_id: String },

    #[error("percentile {0} outside [0, 100]")]
    PercentileOutOfRange(f64),

    #[error("invalid rank-class threshold {0}: must lie strictly between 0 and 100")]
    InvalidThreshold(f64),

    #[error("unknown set_id {0}")]
    UnknownSet(String),

    #[error("degenerate pool: total I3 is zero")]
    DegeneratePool,

    #[error("negative I3 value {value} for set {set_id}")]
    NegativeI3 { set_id: String, value: f64 },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("zero variance")]
    ZeroVariance,

    #[error("degenerate proportions: pooled proportion is {0}, variance is zero")]
    DegenerateProportions(f64),

    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing required column {0}")]
    MissingColumn(String),

    #[error("negative citations at row {row}")]
    NegativeCitations { row: usize },

    #[error("invalid citations {value:?} at row {row}")]
    InvalidCitations { row: usize, value: String },

    #[error("empty {field} at row {row}")]
    EmptyField { row: usize, field: &'static str },

    #[error("duplicate paper_id {paper_id} at rows {first_row} and {second_row}")]
    DuplicateRow {
        paper_id: String,
        first_row: usize,
        second_row: usize,
    },

    #[error("malformed input at row {row}: {message}")]
    Malformed { row: usize, message: String },

    #[error("empty report")]
    EmptyReport,

    #[error("unknown token {token:?} for {kind}")]
    UnknownToken { kind: &'static str, token: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
