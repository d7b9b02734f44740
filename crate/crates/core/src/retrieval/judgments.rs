use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Graded relevance per query: `query id → (document id → grade)`.
/// Grades are finite and non-negative; binary judgments use grade 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RelevanceJudgments {
    by_query: BTreeMap<String, BTreeMap<String, f64>>,
}

impl RelevanceJudgments {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one judgment. Re-judging the same pair is an error.
    pub fn insert(&mut self, query: &str, doc: &str, grade: f64) -> Result<()> {
        if query.is_empty() || doc.is_empty() {
            return Err(Error::InvalidArgument("query and document ids must be non-empty".into()));
        }
        if !(grade.is_finite() && grade >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grade for ({query}, {doc}) must be finite and non-negative, got {grade}"
            )));
        }
        let docs = self.by_query.entry(query.to_owned()).or_default();
        if docs.insert(doc.to_owned(), grade).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate judgment for ({query}, {doc})")));
        }
        Ok(())
    }

    pub fn get(&self, query: &str) -> Option<&BTreeMap<String, f64>> {
        self.by_query.get(query)
    }

    pub fn grade(&self, query: &str, doc: &str) -> f64 {
        self.by_query
            .get(query)
            .and_then(|d| d.get(doc))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn queries(&self) -> impl Iterator<Item = &str> {
        self.by_query.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.by_query.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_query.is_empty()
    }

    /// Serialises as judgment TSV with a header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("query_id\tdoc_id\tgrade\n");
        for (q, docs) in &self.by_query {
            for (d, g) in docs {
                out.push_str(&format!("{q}\t{d}\t{g}\n"));
            }
        }
        out
    }
}

/// Parses judgment TSV: `query_id<TAB>doc_id<TAB>grade` per line. An initial
/// `query_id\tdoc_id\tgrade` header and empty lines are ignored.
pub fn parse_judgments(text: &str) -> Result<RelevanceJudgments> {
    let mut judgments = RelevanceJudgments::new();
    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || (idx == 0 && line == "query_id\tdoc_id\tgrade") {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [query, doc, grade] = fields[..] else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        };
        let grade: f64 = grade.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("grade {grade:?} is not a number"),
        })?;
        judgments.insert(query, doc, grade).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
    }
    Ok(judgments)
}

pub fn read_judgments(path: &Path) -> Result<RelevanceJudgments> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    parse_judgments(text)
}
