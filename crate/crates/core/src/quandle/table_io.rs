//! Table file format.
//!
//! ```text
//! 3
//! 0 2 1
//! 2 1 0
//! 1 0 2
//! # name 0 a
//! # name 1 b
//! # name 2 a*b
//! ```
//!
//! Line 1 is the size `m`, followed by `m` rows of `m` whitespace-separated
//! indices (row `a` lists `a*0 … a*(m-1)`). Trailing `# name i word` lines
//! attach canonical names; any other `#` line is a comment. Elements whose
//! name is a single letter are taken as generators, in index order.

use std::fmt::Write as _;

use super::FiniteQuandle;
use crate::error::{Error, ParseError, Result};

impl FiniteQuandle {
    pub fn to_table_text(&self) -> String {
        let m = self.size();
        let mut out = String::with_capacity(m * m * 3 + 16);
        writeln!(out, "{m}").unwrap();
        for a in 0..m {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        if let Some(names) = self.names() {
            for (i, n) in names.iter().enumerate() {
                writeln!(out, "# name {i} {n}").unwrap();
            }
        }
        out
    }

    pub fn from_table_text(text: &str) -> Result<FiniteQuandle> {
        let mut size: Option<(usize, usize)> = None;
        let mut numbers: Vec<(usize, usize, usize)> = Vec::new();
        let mut names: Vec<(usize, String, usize)> = Vec::new();

        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut parts = comment.split_whitespace();
                if parts.next() == Some("name") {
                    let idx = parts.next().and_then(|s| s.parse::<usize>().ok());
                    let word = parts.next();
                    match (idx, word, parts.next()) {
                        (Some(idx), Some(word), None) => {
                            names.push((idx, word.to_string(), line_no))
                        }
                        _ => {
                            return Err(ParseError::new(line_no, 1, "expected `# name <index> <word>`")
                                .into())
                        }
                    }
                }
                continue;
            }
            let mut column = 1;
            for tok in line.split_whitespace() {
                let offset = line[column - 1..].find(tok).unwrap() + column - 1;
                column = offset + tok.len() + 1;
                let v: usize = tok.parse().map_err(|_| {
                    ParseError::new(line_no, offset + 1, format!("expected an integer, found `{tok}`"))
                })?;
                if size.is_none() {
                    size = Some((v, line_no));
                } else {
                    numbers.push((v, line_no, offset + 1));
                }
            }
        }

        let (m, size_line) = size.ok_or_else(|| ParseError::new(1, 1, "missing size line"))?;
        if m == 0 {
            return Err(ParseError::new(size_line, 1, "size must be positive").into());
        }
        if numbers.len() != m * m {
            let (line, col) = numbers.last().map(|&(_, l, c)| (l, c)).unwrap_or((size_line, 1));
            return Err(ParseError::new(
                line,
                col,
                format!("expected {} table entries, found {}", m * m, numbers.len()),
            )
            .into());
        }
        let rows: Vec<Vec<usize>> = numbers
            .chunks(m)
            .map(|row| row.iter().map(|&(v, _, _)| v).collect())
            .collect();
        let q = FiniteQuandle::from_rows(rows)?;

        if names.is_empty() {
            return Ok(q);
        }
        let mut slots: Vec<Option<String>> = vec![None; m];
        for (idx, word, line) in names {
            if idx >= m {
                return Err(ParseError::new(line, 1, format!("name index {idx} out of range")).into());
            }
            if slots[idx].replace(word).is_some() {
                return Err(ParseError::new(line, 1, format!("duplicate name for {idx}")).into());
            }
        }
        let names: Vec<String> = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::MalformedTable(format!("element {i} has no name"))))
            .collect::<Result<_>>()?;
        let gens: Vec<usize> = names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.contains('*'))
            .map(|(i, _)| i)
            .collect();
        q.with_names(names)?.with_generators(gens)
    }
}
