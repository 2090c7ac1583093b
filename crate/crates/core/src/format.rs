//! Text formats for kernels and permutations.
//!
//! Kernel file:
//!
//! ```text
//! # name: toy
//! 4
//! 1000
//! 1100
//! 0010
//! 1001
//! ```
//!
//! Permutation lists: one comma-separated 1-based permutation per line,
//! optionally wrapped in braces.

use std::fmt;

use crate::error::Result;
use crate::gf2::BitMatrix;
use crate::kernel::{Kernel, Permutation, MAX_KERNEL_SIZE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, 0 when the input as a whole is at fault.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Matrix and optional name from a kernel file, without checking invertibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelText {
    pub name: Option<String>,
    pub matrix: BitMatrix,
}

pub fn parse_kernel_text(text: &str) -> Result<KernelText, ParseError> {
    let mut name = None;
    let mut size: Option<usize> = None;
    let mut rows: Vec<String> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        last_line = line_no;
        let Some(l) = size else {
            let l: usize = line
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("expected kernel size, found {line:?}")))?;
            if l == 0 || l > MAX_KERNEL_SIZE {
                return Err(ParseError::new(
                    line_no,
                    format!("kernel size {l} outside 1..={MAX_KERNEL_SIZE}"),
                ));
            }
            size = Some(l);
            continue;
        };
        if rows.len() == l {
            return Err(ParseError::new(line_no, format!("more than {l} rows")));
        }
        if let Some(bad) = line.chars().find(|c| *c != '0' && *c != '1') {
            return Err(ParseError::new(line_no, format!("unexpected character {bad:?} in row")));
        }
        if line.len() != l {
            return Err(ParseError::new(
                line_no,
                format!("row has {} entries, expected {l}", line.len()),
            ));
        }
        rows.push(line.to_string());
    }
    let Some(l) = size else {
        return Err(ParseError::new(0, "missing kernel size line"));
    };
    if rows.len() != l {
        return Err(ParseError::new(
            last_line + 1,
            format!("expected {l} rows, found {}", rows.len()),
        ));
    }
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    Ok(KernelText {
        name,
        matrix: BitMatrix::from_strs(&refs),
    })
}

/// Parses and validates a kernel file.
pub fn parse_kernel(text: &str) -> Result<Kernel> {
    let parsed = parse_kernel_text(text)?;
    let k = Kernel::new(parsed.matrix)?;
    Ok(match parsed.name {
        Some(n) => k.with_name(n),
        None => k,
    })
}

pub fn write_kernel(kernel: &Kernel) -> String {
    let mut out = String::new();
    if let Some(name) = kernel.name() {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(&format!("{}\n", kernel.size()));
    for r in 0..kernel.size() {
        let row: String = kernel
            .matrix()
            .row_bits(r)
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// One 1-based permutation such as `16, 12, 14, 10` or `{1,2,4,3}`.
pub fn parse_permutation(text: &str) -> Result<Permutation, ParseError> {
    parse_permutation_line(text, 0)
}

fn parse_permutation_line(text: &str, line_no: usize) -> Result<Permutation, ParseError> {
    let mut body = text.trim();
    if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
        body = inner;
    }
    let entries = body
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid permutation entry {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::from_one_based(&entries).map_err(|e| ParseError::new(line_no, e.to_string()))
}

/// Every permutation in a list file, skipping blank and `#` lines.
pub fn parse_permutation_list(text: &str) -> Result<Vec<Permutation>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(i, l)| parse_permutation_line(l, i + 1))
        .collect()
}

pub fn write_permutation(p: &Permutation) -> String {
    p.to_one_based()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
