//! Plain-text matrix format: first line `n`, then `n` whitespace-separated rows.
//! Lines starting with `#` and blank lines are ignored.

use super::{LinalgError, SymMat};

/// Formats one number: integers without a decimal point, everything else in
/// shortest round-trip form.
pub fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

pub fn write_symmat(a: &SymMat) -> String {
    let mut out = format!("{}\n", a.n());
    for i in 0..a.n() {
        let row: Vec<String> = (0..a.n()).map(|j| fmt_num(a.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a dense rectangular block of numbers after a header line holding
/// the dimensions. Returns `(rows, line numbers)`.
pub(crate) fn parse_rows(text: &str, expect_rows: usize) -> Result<Vec<Vec<f64>>, LinalgError> {
    let mut rows = Vec::new();
    for (lineno, line) in content_lines(text).skip(1) {
        if rows.len() == expect_rows {
            return Err(LinalgError::Parse { line: lineno, msg: "trailing data after matrix".into() });
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| LinalgError::Parse { line: lineno, msg: format!("bad number `{t}`") })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.len() != expect_rows {
        return Err(LinalgError::Parse {
            line: content_lines(text).last().map_or(1, |(l, _)| l),
            msg: format!("expected {expect_rows} rows, found {}", rows.len()),
        });
    }
    Ok(rows)
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads a symmetric matrix. Integer files must be exactly symmetric; files
/// with fractional entries allow `1e-12` relative asymmetry.
pub fn parse_symmat(text: &str) -> Result<SymMat, LinalgError> {
    let (lineno, header) = content_lines(text)
        .next()
        .ok_or(LinalgError::Parse { line: 1, msg: "empty input".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| LinalgError::Parse { line: lineno, msg: format!("bad order `{header}`") })?;
    let rows = parse_rows(text, n)?;
    for (k, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(LinalgError::Parse {
                line: content_lines(text).nth(k + 1).map_or(lineno, |(l, _)| l),
                msg: format!("expected {n} entries, found {}", r.len()),
            });
        }
    }
    let integral = rows.iter().flatten().all(|v| v.fract() == 0.0);
    SymMat::from_rows_tol(&rows, if integral { 0.0 } else { 1e-12 })
}
