//! Dense matrix text format for the row-removal command:
//!
//! ```text
//! matrix v1 rows=<m> cols=<n>
//! <n numbers per row, space separated>
//! ```

use nalgebra::DMatrix;

use crate::format::FormatError;

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let rest = header
        .strip_prefix("matrix v1 ")
        .ok_or_else(|| parse_err(1, "expected header 'matrix v1 rows=<m> cols=<n>'"))?;
    let mut rows = None;
    let mut cols = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("rows=") {
            rows = v.parse::<usize>().ok();
        } else if let Some(v) = field.strip_prefix("cols=") {
            cols = v.parse::<usize>().ok();
        }
    }
    let rows = rows.ok_or_else(|| parse_err(1, "missing or invalid rows="))?;
    let cols = cols.ok_or_else(|| parse_err(1, "missing or invalid cols="))?;

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        let values = values.map_err(|e| parse_err(idx + 1, format!("bad number: {e}")))?;
        if values.len() != cols {
            return Err(parse_err(
                idx + 1,
                format!("expected {cols} values, got {}", values.len()),
            ));
        }
        data.extend(values);
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(parse_err(
            0,
            format!("header declares rows={rows} but body has {seen_rows}"),
        ));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

pub fn render_matrix(m: &DMatrix<f64>) -> String {
    let mut out = format!("matrix v1 rows={} cols={}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
