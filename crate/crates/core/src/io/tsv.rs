//! Plain-text embeddings: `id<TAB>v1<TAB>…<TAB>vD`, one item per LF-terminated line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::write_atomic;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Parses TSV embeddings. Empty lines are skipped; every other line must
/// carry the same number of values. Decimals are rounded to nearest `f64`.
pub fn parse_tsv(text: &str) -> Result<EmbeddingMatrix> {
    let mut ids = Vec::new();
    let mut values = Vec::new();
    let mut dims = None;
    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let id = fields.next().unwrap_or_default();
        let start = values.len();
        for field in fields {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite value {field:?}"),
                });
            }
            values.push(v);
        }
        let found = values.len() - start;
        match dims {
            None if found == 0 => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "no values after id".into(),
                })
            }
            None => dims = Some(found),
            Some(d) if d != found => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {d} values, found {found}"),
                })
            }
            Some(_) => {}
        }
        ids.push(id.to_owned());
    }
    let dims = dims.ok_or_else(|| Error::Parse {
        line: 0,
        message: "no embeddings in input".into(),
    })?;
    let count = ids.len();
    EmbeddingMatrix::new(DMatrix::from_vec(dims, count, values), ids)
}

/// Formats `m` as TSV using the shortest representation that parses back
/// to the same `f64`.
pub fn format_tsv(m: &EmbeddingMatrix) -> Result<String> {
    let mut out = String::new();
    for (id, col) in m.ids().iter().zip(m.values().column_iter()) {
        if id.contains(['\t', '\n']) {
            return Err(Error::InvalidId(id.clone()));
        }
        out.push_str(id);
        for v in col.iter() {
            write!(out, "\t{v:?}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_tsv(path: &Path) -> Result<EmbeddingMatrix> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    parse_tsv(text)
}

pub fn write_tsv(m: &EmbeddingMatrix, path: &Path) -> Result<()> {
    write_atomic(path, format_tsv(m)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_input() {
        let m = parse_tsv("a\t1\t2\nb\t3.5\t-4e-1\n").unwrap();
        assert_eq!(m.ids(), &["a", "b"]);
        assert_eq!(m.values().as_slice(), &[1.0, 2.0, 3.5, -0.4]);
    }

    #[test]
    fn missing_final_newline_and_blank_lines() {
        let m = parse_tsv("a\t1\n\nb\t2").unwrap();
        assert_eq!(m.count(), 2);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = parse_tsv("a\t1\t2\nb\t3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bad_numbers_are_rejected() {
        assert!(parse_tsv("a\tone\n").is_err());
        assert!(parse_tsv("a\tNaN\n").is_err());
        assert!(parse_tsv("a\tinf\n").is_err());
        assert!(parse_tsv("a\n").is_err());
        assert!(parse_tsv("").is_err());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        assert_eq!(parse_tsv("a\t1\na\t2\n").unwrap_err().code(), "duplicate_id");
    }

    #[test]
    fn format_round_trips_exactly() {
        let m = parse_tsv("a\t0.1\t1e-300\nb\t-2.5\t3.141592653589793\n").unwrap();
        assert_eq!(parse_tsv(&format_tsv(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn tab_in_id_cannot_be_written() {
        let m = EmbeddingMatrix::from_columns(&["a\tb"], &[vec![1.0]]).unwrap();
        assert!(format_tsv(&m).is_err());
    }
}
