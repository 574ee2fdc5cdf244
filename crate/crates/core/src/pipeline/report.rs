//! Report emission: delimited (CSV), aligned text, and JSON.
//!
//! Delimited and aligned output start with one `# citerank-i3 <version>`
//! leader line. Percentile-derived numbers are printed with 6 decimals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::analysis::{column_suffix, RankingReport};
use super::compare::RuleComparison;
use crate::error::{Error, Result};
use crate::indicator::{CitationRecord, PercentileAssignment};

pub const LEADER_TAG: &str = "citerank-i3";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Delimited,
    Aligned,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" | "delimited" => Ok(ReportFormat::Delimited),
            "text" | "aligned" | "table" => Ok(ReportFormat::Aligned),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::UnknownToken {
                kind: "output format",
                token: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Delimited => "csv",
            ReportFormat::Aligned => "text",
            ReportFormat::Json => "json",
        })
    }
}

fn leader(extra: &[String]) -> String {
    let mut line = format!("# {LEADER_TAG} {}", env!("CARGO_PKG_VERSION"));
    for e in extra {
        line.push(' ');
        line.push_str(e);
    }
    line.push('\n');
    line
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

/// A header plus string cells, rendered as CSV or padded columns.
struct Grid {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// First column left-aligned, the rest right-aligned.
    fn to_aligned(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut out = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                if i == 0 {
                    out.push_str(&format!("{cell:<w$}"));
                } else {
                    out.push_str(&format!("{cell:>w$}"));
                }
            }
            out.trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        let rule: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        out.push_str(&"-".repeat(rule));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    fn render(&self, format: ReportFormat, leader_extra: &[String]) -> Result<String> {
        let body = match format {
            ReportFormat::Delimited => self.to_csv()?,
            ReportFormat::Aligned => self.to_aligned(),
            ReportFormat::Json => unreachable!("json is rendered from the typed value"),
        };
        Ok(leader(leader_extra) + &body)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn ranking_grid(report: &RankingReport) -> Grid {
    let mut header: Vec<String> = ["set_id", "n_papers", "total_citations"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for rule in &report.rules {
        for scheme in &report.schemes {
            let suffix = column_suffix(*rule, scheme);
            header.push(format!("pI3_{suffix}"));
            header.push(format!("rank_{suffix}"));
        }
    }
    header.push("top_share".into());

    let rows = report
        .rows
        .iter()
        .map(|row| {
            let mut cells = vec![
                row.set_id.clone(),
                row.n_papers.to_string(),
                row.total_citations.to_string(),
            ];
            for v in &row.indicators {
                cells.push(fixed(v.percent_i3));
                cells.push(v.rank.to_string());
            }
            cells.push(fixed(row.top_share));
            cells
        })
        .collect();
    Grid { header, rows }
}

/// Render a ranking report as one per-set table.
pub fn emit_ranking_table(report: &RankingReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        ReportFormat::Json => to_json(report),
        _ => {
            let extra: Vec<String> = report
                .generated_at
                .iter()
                .map(|t| format!("generated_at={t}"))
                .collect();
            ranking_grid(report).render(format, &extra)
        }
    }
}

/// A delimited table read back: header, and per row the first column plus
/// every other cell as a number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub header: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl ParsedTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        if idx == 0 {
            return None;
        }
        Some(self.rows.iter().map(|(_, v)| v[idx - 1]).collect())
    }
}

/// Parse the delimited output of [`emit_ranking_table`] (or any table whose
/// non-first columns are numeric). Leader lines starting with `#` are skipped.
pub fn parse_ranking_table(text: &str) -> Result<ParsedTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = idx + 1;
        let mut cells = rec.iter();
        let key = cells.next().unwrap_or_default().to_string();
        let values = cells
            .map(|c| {
                c.parse::<f64>().map_err(|_| Error::Malformed {
                    row,
                    message: format!("non-numeric cell {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((key, values));
    }
    Ok(ParsedTable { header, rows })
}

#[derive(Serialize)]
struct PaperRow<'a> {
    set_id: &'a str,
    paper_id: &'a str,
    citations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    doc_type: Option<&'a str>,
    group_key: &'a str,
    percentiles: Vec<(String, f64)>,
}

/// Paper-level table: one percentile column per assignment.
///
/// Rows are ordered by set_id, then descending citations, then paper_id.
/// `group_key` is taken from the first assignment.
pub fn emit_paper_table(
    records: &[CitationRecord],
    assignments: &[PercentileAssignment],
    format: ReportFormat,
) -> Result<String> {
    if records.is_empty() || assignments.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut ordered: Vec<&CitationRecord> = records.iter().collect();
    ordered.sort_by(|a, b| {
        a.set_id
            .cmp(&b.set_id)
            .then(b.citations.cmp(&a.citations))
            .then(a.paper_id.cmp(&b.paper_id))
    });

    let missing = |rec: &CitationRecord| {
        Error::InvalidParameter(format!("no percentile for {}", rec.paper_id))
    };
    let lookup = |rec: &CitationRecord, a: &PercentileAssignment| {
        a.percentile(&rec.paper_id).ok_or_else(|| missing(rec))
    };

    let mut table = Vec::with_capacity(ordered.len());
    for rec in ordered {
        let group_key = &assignments[0]
            .get(&rec.paper_id)
            .ok_or_else(|| missing(rec))?
            .group_key;
        let percentiles = assignments
            .iter()
            .map(|a| Ok((a.rule.token().to_string(), lookup(rec, a)?)))
            .collect::<Result<Vec<_>>>()?;
        table.push(PaperRow {
            set_id: &rec.set_id,
            paper_id: &rec.paper_id,
            citations: rec.citations,
            doc_type: rec.doc_type.as_deref(),
            group_key,
            percentiles,
        });
    }

    if format == ReportFormat::Json {
        return to_json(&table);
    }

    let mut header: Vec<String> = ["set_id", "paper_id", "citations", "doc_type", "group_key"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(
        assignments
            .iter()
            .map(|a| format!("pct_{}", a.rule.token())),
    );
    let rows = table
        .iter()
        .map(|row| {
            let mut cells = vec![
                row.set_id.to_string(),
                row.paper_id.to_string(),
                row.citations.to_string(),
                row.doc_type.unwrap_or_default().to_string(),
                row.group_key.to_string(),
            ];
            cells.extend(row.percentiles.iter().map(|(_, p)| fixed(*p)));
            cells
        })
        .collect();
    let scope = format!("scope={}", assignments[0].scope);
    Grid { header, rows }.render(format, &[scope])
}

/// Render a rule comparison. Each matrix row carries the top set of its rule.
pub fn emit_comparison(cmp: &RuleComparison, format: ReportFormat) -> Result<String> {
    if format == ReportFormat::Json {
        return to_json(cmp);
    }
    let mut header = vec!["measure".to_string(), "rule".to_string()];
    header.extend(cmp.rules.iter().map(|r| r.token().to_string()));
    header.push("top_set".into());
    let mut rows = Vec::new();
    for (measure, matrix) in [("pearson", &cmp.pearson), ("spearman", &cmp.spearman)] {
        for (i, rule) in cmp.rules.iter().enumerate() {
            let mut cells = vec![measure.to_string(), rule.token().to_string()];
            cells.extend(matrix[i].iter().map(|&v| fixed(v)));
            cells.push(cmp.top_set[i].clone());
            rows.push(cells);
        }
    }
    let extra = [
        format!("scheme={}", cmp.scheme),
        format!("n_sets={}", cmp.n_sets),
    ];
    Grid { header, rows }.render(format, &extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicator::{compute_percentiles, PercentileRule, RankClassScheme, ReferenceScope};
    use crate::pipeline::{run_analysis, AnalysisConfig, InputDataset};

    fn two_set_report() -> RankingReport {
        let records = vec![
            CitationRecord::new("A", "a1", 9),
            CitationRecord::new("A", "a2", 4),
            CitationRecord::new("B", "b1", 0),
            CitationRecord::new("B", "b2", 4),
        ];
        run_analysis(
            &InputDataset::from_records(records, "mem"),
            &AnalysisConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn delimited_layout() {
        let text = emit_ranking_table(&two_set_report(), ReportFormat::Delimited).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            format!("# citerank-i3 {}", env!("CARGO_PKG_VERSION"))
        );
        assert_eq!(
            lines.next().unwrap(),
            "set_id,n_papers,total_citations,pI3_quantile_p100,rank_quantile_p100,top_share"
        );
        // Pool {0,4,4,9}: A = 25 + 75, B = 0 + 25.
        assert_eq!(lines.next().unwrap(), "A,2,13,80.000000,1,0.000000");
        assert_eq!(lines.next().unwrap(), "B,2,4,20.000000,2,0.000000");
        assert!(lines.next().is_none());
    }

    #[test]
    fn parse_recovers_cells() {
        let report = two_set_report();
        let text = emit_ranking_table(&report, ReportFormat::Delimited).unwrap();
        let parsed = parse_ranking_table(&text).unwrap();
        let shares = parsed.column("pI3_quantile_p100").unwrap();
        assert_eq!(shares.iter().sum::<f64>(), 100.0);
        assert_eq!(parsed.rows[0].0, "A");
    }

    #[test]
    fn tied_shares_share_rank() {
        let records = vec![
            CitationRecord::new("X", "x1", 2),
            CitationRecord::new("Y", "y1", 2),
            CitationRecord::new("Z", "z1", 1),
        ];
        let report = run_analysis(
            &InputDataset::from_records(records, "mem"),
            &AnalysisConfig::default(),
        )
        .unwrap();
        let parsed =
            parse_ranking_table(&emit_ranking_table(&report, ReportFormat::Delimited).unwrap())
                .unwrap();
        assert_eq!(
            parsed.column("rank_quantile_p100").unwrap(),
            vec![1.0, 1.0, 3.0]
        );
    }

    #[test]
    fn empty_report_rejected() {
        let mut report = two_set_report();
        report.rows.clear();
        assert!(matches!(
            emit_ranking_table(&report, ReportFormat::Delimited),
            Err(Error::EmptyReport)
        ));
    }

    #[test]
    fn json_and_aligned_render() {
        let report = two_set_report();
        let json = emit_ranking_table(&report, ReportFormat::Json).unwrap();
        let back: RankingReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        let text = emit_ranking_table(&report, ReportFormat::Aligned).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("set_id"));
        assert!(text.contains("80.000000"));
    }

    #[test]
    fn generated_at_goes_to_leader() {
        let mut report = two_set_report();
        report.generated_at = Some("1700000000".into());
        let text = emit_ranking_table(&report, ReportFormat::Delimited).unwrap();
        assert!(text
            .lines()
            .next()
            .unwrap()
            .ends_with("generated_at=1700000000"));
    }

    #[test]
    fn paper_table_columns() {
        let records: Vec<CitationRecord> = (0..10)
            .map(|c| CitationRecord::new("J", format!("r{c}"), c))
            .collect();
        let assignments: Vec<_> = [PercentileRule::Quantile, PercentileRule::Lb09]
            .iter()
            .map(|&r| compute_percentiles(&records, r, ReferenceScope::GlobalPool).unwrap())
            .collect();
        let text = emit_paper_table(&records, &assignments, ReportFormat::Delimited).unwrap();
        let second = text.lines().nth(1).unwrap();
        assert_eq!(
            second,
            "set_id,paper_id,citations,doc_type,group_key,pct_quantile,pct_lb09"
        );
        assert_eq!(
            text.lines().nth(2).unwrap(),
            "J,r9,9,,*,90.000000,99.000000"
        );
        let json = emit_paper_table(&records, &assignments, ReportFormat::Json).unwrap();
        assert!(json.contains("\"lb09\""));
    }

    #[test]
    fn comparison_layout() {
        let cmp = RuleComparison {
            scheme: RankClassScheme::P100,
            rules: vec![PercentileRule::Quantile, PercentileRule::Lb09],
            n_sets: 3,
            pearson: vec![vec![1.0, 0.5], vec![0.5, 1.0]],
            spearman: vec![vec![1.0, 0.25], vec![0.25, 1.0]],
            top_set: vec!["A".into(), "B".into()],
        };
        let text = emit_comparison(&cmp, ReportFormat::Delimited).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].ends_with("scheme=p100 n_sets=3"));
        assert_eq!(lines[1], "measure,rule,quantile,lb09,top_set");
        assert_eq!(lines[2], "pearson,quantile,1.000000,0.500000,A");
        assert_eq!(lines[5], "spearman,lb09,0.250000,1.000000,B");
    }

    #[test]
    fn format_tokens() {
        assert_eq!(
            "csv".parse::<ReportFormat>().unwrap(),
            ReportFormat::Delimited
        );
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert!("xlsx".parse::<ReportFormat>().is_err());
    }
}
