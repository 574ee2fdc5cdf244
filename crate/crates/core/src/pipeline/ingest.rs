use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicator::CitationRecord;

/// Delimiter and quoting for the record file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputFormat {
    pub delimiter: u8,
}

impl Default for InputFormat {
    fn default() -> Self {
        InputFormat { delimiter: b',' }
    }
}

impl InputFormat {
    pub fn tab() -> Self {
        InputFormat { delimiter: b'\t' }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDataset {
    pub records: Vec<CitationRecord>,
    pub source_path: String,
    pub row_count: usize,
}

impl InputDataset {
    pub fn from_records(records: Vec<CitationRecord>, source_path: impl Into<String>) -> Self {
        InputDataset {
            row_count: records.len(),
            records,
            source_path: source_path.into(),
        }
    }
}

struct Columns {
    set_id: usize,
    paper_id: usize,
    citations: usize,
    doc_type: Option<usize>,
}

impl Columns {
    fn locate(header: &csv::StringRecord) -> Result<Self> {
        let find = |name: &str| header.iter().position(|h| h.trim() == name);
        let require = |name: &str| find(name).ok_or_else(|| Error::MissingColumn(name.into()));
        Ok(Columns {
            set_id: require("set_id")?,
            paper_id: require("paper_id")?,
            citations: require("citations")?,
            doc_type: find("doc_type"),
        })
    }
}

fn parse_citations(raw: &str, row: usize) -> Result<u64> {
    if let Ok(v) = raw.parse::<u64>() {
        return Ok(v);
    }
    match raw.parse::<i128>() {
        Ok(v) if v < 0 => Err(Error::NegativeCitations { row }),
        _ => Err(Error::InvalidCitations {
            row,
            value: raw.to_string(),
        }),
    }
}

/// Parse a record file. Rows are numbered from 1, excluding the header.
pub fn parse_records<R: Read>(
    input: R,
    format: InputFormat,
    source_path: &str,
) -> Result<InputDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);

    let columns = Columns::locate(reader.headers()?)?;
    let mut records = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();

    for (idx, row) in reader.records().enumerate() {
        let row_no = idx + 1;
        let row = row.map_err(|e| Error::Malformed {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |i: usize| row.get(i).unwrap_or("");

        let set_id = field(columns.set_id);
        if set_id.is_empty() {
            return Err(Error::EmptyField {
                row: row_no,
                field: "set_id",
            });
        }
        let paper_id = field(columns.paper_id);
        if paper_id.is_empty() {
            return Err(Error::EmptyField {
                row: row_no,
                field: "paper_id",
            });
        }
        let citations = parse_citations(field(columns.citations), row_no)?;
        let doc_type = columns
            .doc_type
            .map(field)
            .filter(|s| !s.is_empty())
            .map(str::to_string);

        if let Some(&first_row) = first_seen.get(paper_id) {
            return Err(Error::DuplicateRow {
                paper_id: paper_id.to_string(),
                first_row,
                second_row: row_no,
            });
        }
        first_seen.insert(paper_id.to_string(), row_no);

        records.push(CitationRecord {
            set_id: set_id.to_string(),
            paper_id: paper_id.to_string(),
            citations,
            doc_type,
        });
    }

    Ok(InputDataset::from_records(records, source_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<InputDataset> {
        parse_records(text.as_bytes(), InputFormat::default(), "mem.csv")
    }

    #[test]
    fn two_rows() {
        let ds = parse("set_id,paper_id,citations\nJ1,p1,5\nJ1,p2,0\n").unwrap();
        assert_eq!(ds.row_count, 2);
        assert_eq!(ds.records[0], CitationRecord::new("J1", "p1", 5));
        assert_eq!(ds.source_path, "mem.csv");
    }

    #[test]
    fn negative_citations_reports_row() {
        let err = parse("set_id,paper_id,citations\nJ1,p1,5\nJ1,p2,0\nJ1,p3,-2\n").unwrap_err();
        assert_eq!(err.to_string(), "negative citations at row 3");
    }

    #[test]
    fn non_integer_citations() {
        let err = parse("set_id,paper_id,citations\nJ1,p1,2.5\n").unwrap_err();
        assert!(matches!(err, Error::InvalidCitations { row: 1, .. }));
    }

    #[test]
    fn missing_column_is_named() {
        let err = parse("set_id,paper,citations\nJ1,p1,5\n").unwrap_err();
        assert_eq!(err.to_string(), "missing required column paper_id");
    }

    #[test]
    fn duplicate_paper_names_both_rows() {
        let err = parse("set_id,paper_id,citations\nJ1,p1,5\nJ2,p9,1\nJ2,p1,3\n").unwrap_err();
        match err {
            Error::DuplicateRow {
                paper_id,
                first_row,
                second_row,
            } => assert_eq!((paper_id.as_str(), first_row, second_row), ("p1", 1, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn doc_type_trimmed_and_optional() {
        let ds = parse("paper_id, citations ,set_id,doc_type\n p1 , 3 , J1 , review \np2,4,J1,\n")
            .unwrap();
        assert_eq!(ds.records[0].doc_type.as_deref(), Some("review"));
        assert_eq!(ds.records[0].paper_id, "p1");
        assert_eq!(ds.records[1].doc_type, None);
    }

    #[test]
    fn ten_review_fixture() {
        let mut text = String::from("set_id,paper_id,citations,doc_type\n");
        for c in 0..10 {
            text.push_str(&format!("J,r{c},{c},review\n"));
        }
        let ds = parse(&text).unwrap();
        assert_eq!(ds.row_count, 10);
        let counts: Vec<u64> = ds.records.iter().map(|r| r.citations).collect();
        assert_eq!(counts, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn tab_delimited() {
        let ds = parse_records(
            "set_id\tpaper_id\tcitations\nA\tx\t1\n".as_bytes(),
            InputFormat::tab(),
            "t.tsv",
        )
        .unwrap();
        assert_eq!(ds.records.len(), 1);
    }
}
