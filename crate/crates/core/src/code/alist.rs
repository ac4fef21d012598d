//! MacKay's alist text format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! col degrees (n values)
//! row degrees (m values)
//! n lines: 1-based row indices of each column, zero-padded to max_col_degree
//! m lines: 1-based column indices of each row, zero-padded to max_row_degree
//! ```
//!
//! Padding zeros are written on export and optional on import.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

pub fn to_alist(h: &BinaryMatrix) -> String {
    let ht = h.transpose();
    let col_deg = ht.row_weights();
    let row_deg = h.row_weights();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    out.push_str(&join(col_deg.iter().copied()));
    out.push('\n');
    out.push_str(&join(row_deg.iter().copied()));
    out.push('\n');
    for (m, width) in [(&ht, max_col), (h, max_row)] {
        for i in 0..m.rows() {
            let row = m.row(i);
            let padded = row
                .iter()
                .map(|&k| k + 1)
                .chain(std::iter::repeat_n(0, width - row.len()));
            out.push_str(&join(padded));
            out.push('\n');
        }
    }
    out
}

fn join(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next line as parsed integers, with its 1-based line number. Blank
    /// lines are skipped in the header; in the adjacency body a blank line is
    /// an unpadded degree-zero node.
    fn next(&mut self, what: &str, skip_blank: bool) -> Result<(usize, Vec<usize>)> {
        for (idx, line) in self.inner.by_ref() {
            self.last = idx + 1;
            if skip_blank && line.trim().is_empty() {
                continue;
            }
            let values = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Alist {
                        line: idx + 1,
                        msg: format!("expected a non-negative integer, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((idx + 1, values));
        }
        Err(Error::Alist {
            line: self.last + 1,
            msg: format!("unexpected end of input while reading {what}"),
        })
    }

    fn expect(&mut self, what: &str, count: usize) -> Result<(usize, Vec<usize>)> {
        let (line, values) = self.next(what, true)?;
        if values.len() != count {
            return Err(Error::Alist {
                line,
                msg: format!("{what}: expected {count} values, found {}", values.len()),
            });
        }
        Ok((line, values))
    }
}

/// Reads one adjacency line: `degree` indices in `1..=bound`, then optional
/// zero padding up to `max_degree` entries.
fn adjacency(
    lines: &mut Lines<'_>,
    what: &str,
    degree: usize,
    max_degree: usize,
    bound: usize,
) -> Result<Vec<usize>> {
    let (line, values) = lines.next(what, false)?;
    if values.len() < degree {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: expected {degree} indices, found {}", values.len()),
        });
    }
    if values.len() > max_degree.max(degree) {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: more than {max_degree} entries"),
        });
    }
    let (indices, padding) = values.split_at(degree);
    if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k > bound) {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: index {bad} outside 1..={bound}"),
        });
    }
    if padding.iter().any(|&k| k != 0) {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: more nonzero indices than the declared degree {degree}"),
        });
    }
    let mut out: Vec<usize> = indices.iter().map(|&k| k - 1).collect();
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: repeated index"),
        });
    }
    Ok(out)
}

pub fn from_alist(text: &str) -> Result<BinaryMatrix> {
    let mut lines = Lines::new(text);
    let (_, header) = lines.expect("dimensions", 2)?;
    let (n, m) = (header[0], header[1]);
    let (max_line, maxes) = lines.expect("maximum degrees", 2)?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let (col_line, col_deg) = lines.expect("column degrees", n)?;
    let (row_line, row_deg) = lines.expect("row degrees", m)?;

    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col || d > m) {
        return Err(Error::Alist {
            line: col_line,
            msg: format!(
                "column degree {d} exceeds the declared maximum {max_col} or the row count {m}"
            ),
        });
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row || d > n) {
        return Err(Error::Alist {
            line: row_line,
            msg: format!(
                "row degree {d} exceeds the declared maximum {max_row} or the column count {n}"
            ),
        });
    }
    let col_total: usize = col_deg.iter().sum();
    let row_total: usize = row_deg.iter().sum();
    if col_total != row_total {
        return Err(Error::Alist {
            line: row_line,
            msg: format!("column degrees sum to {col_total} but row degrees sum to {row_total}"),
        });
    }
    if col_deg.iter().max().copied().unwrap_or(0) != max_col
        || row_deg.iter().max().copied().unwrap_or(0) != max_row
    {
        return Err(Error::Alist {
            line: max_line,
            msg: "declared maximum degrees do not match the degree lists".into(),
        });
    }

    let mut cols = Vec::with_capacity(n);
    for (j, &d) in col_deg.iter().enumerate() {
        cols.push(adjacency(
            &mut lines,
            &format!("column {}", j + 1),
            d,
            max_col,
            m,
        )?);
    }
    let mut rows = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for (i, &d) in row_deg.iter().enumerate() {
        rows.push(adjacency(
            &mut lines,
            &format!("row {}", i + 1),
            d,
            max_row,
            n,
        )?);
        row_lines.push(lines.last);
    }

    let h = BinaryMatrix::from_rows(n, rows)?;
    let ht = h.transpose();
    for (j, col) in cols.iter().enumerate() {
        if ht.row(j) != col.as_slice() {
            let line = row_lines.last().copied().unwrap_or(row_line);
            return Err(Error::Alist {
                line,
                msg: format!(
                    "row lists disagree with the adjacency list of column {}",
                    j + 1
                ),
            });
        }
    }
    Ok(h)
}
