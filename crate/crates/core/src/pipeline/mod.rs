//! Record ingestion, analysis runs, and report emission.

mod analysis;
mod compare;
mod ingest;
mod report;

pub use analysis::{
    column_suffix, competition_ranks, run_analysis, AnalysisConfig, IndicatorValue, RankingReport,
    SetReport,
};
pub use compare::{compare_rules, RuleComparison};
pub use ingest::{parse_records, InputDataset, InputFormat};
pub use report::{
    emit_comparison, emit_paper_table, emit_ranking_table, parse_ranking_table, ParsedTable,
    ReportFormat, LEADER_TAG,
};
