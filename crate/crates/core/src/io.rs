//! Plain CSV helpers shared by every serializable result type.
//!
//! Numbers are written with 17 significant digits so doubles round-trip.
//! Lines starting with `#` are provenance comments and are skipped on read.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Formats a double with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Builds CSV text from a header and numeric rows.
pub fn write_csv(
    comment: Option<&str>,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// A parsed numeric CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Parses numeric CSV with a mandatory header row.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match &header {
            None => {
                let cols: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
                if cols.iter().any(String::is_empty) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "empty column name in header".into(),
                    });
                }
                header = Some(cols);
            }
            Some(h) => {
                let cells: Vec<&str> = line.split(',').collect();
                if cells.len() != h.len() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected {} fields, found {}", h.len(), cells.len()),
                    });
                }
                let mut row = Vec::with_capacity(cells.len());
                for c in cells {
                    let v: f64 = c.trim().parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("not a number: {:?}", c.trim()),
                    })?;
                    if !v.is_finite() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("non-finite value {v}"),
                        });
                    }
                    row.push(v);
                }
                rows.push(row);
            }
        }
    }
    let header = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header row".into(),
    })?;
    Ok(CsvTable { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let vals = vec![0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI];
        let text = write_csv(Some("provenance"), &["v"], vals.iter().map(|v| vec![*v]));
        assert!(text.starts_with("# provenance\nv\n"));
        let t = parse_csv(&text).unwrap();
        let back: Vec<f64> = t.rows.iter().map(|r| r[0]).collect();
        assert_eq!(back, vals);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = parse_csv("a,b\n1,2\n3\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "expected 2 fields, found 1".into()
            }
        );
        assert!(parse_csv("# only a comment\n").is_err());
        assert!(parse_csv("a\nnan\n").is_err());
    }
}
