//! CSV point formats.
//!
//! One point per row, comma-separated decimals. The labeled format appends a
//! final column holding `-1` or `1`. A header row is optional and is recognized
//! by a non-numeric first field. Blank lines and lines starting with `#` are
//! ignored.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use polycoreset::{Label, LabeledPointSet, PointSet};

use crate::error::CliError;

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input)
}

/// Parses every data row into floats, returning `(line, values)` pairs.
fn numeric_rows<R: Read>(input: R, source: &str) -> Result<Vec<(u64, Vec<f64>)>, CliError> {
    let parse_err = |line: u64, message: String| CliError::Parse {
        input: source.to_string(),
        line,
        message,
    };
    let mut rows = Vec::new();
    for (i, record) in reader(input).records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if i == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    parse_err(
                        line,
                        format!("column {}: '{field}' is not a number", col + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(parse_err(
                line,
                format!("column {}: value is not finite", col + 1),
            ));
        }
        rows.push((line, values));
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no data rows".into()));
    }
    let width = rows[0].1.len();
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != width) {
        return Err(parse_err(
            *line,
            format!("expected {width} columns, found {}", row.len()),
        ));
    }
    Ok(rows)
}

pub fn parse_points<R: Read>(input: R, source: &str) -> Result<PointSet, CliError> {
    let rows = numeric_rows(input, source)?;
    PointSet::new(rows.into_iter().map(|(_, r)| r)).map_err(CliError::from)
}

pub fn parse_labeled<R: Read>(input: R, source: &str) -> Result<LabeledPointSet, CliError> {
    let rows = numeric_rows(input, source)?;
    if rows[0].1.len() < 2 {
        return Err(CliError::Parse {
            input: source.to_string(),
            line: rows[0].0,
            message: "labeled rows need at least one coordinate and a label".into(),
        });
    }
    let mut points = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (line, mut row) in rows {
        let raw = row.pop().expect("nonempty row");
        let label = Label::from_value(raw).ok_or_else(|| CliError::Parse {
            input: source.to_string(),
            line,
            message: format!("label must be -1 or 1, got {raw}"),
        })?;
        points.push(row);
        labels.push(label);
    }
    Ok(LabeledPointSet::new(PointSet::new(points)?, labels)?)
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_points(path: &Path) -> Result<PointSet, CliError> {
    parse_points(open(path)?, &path.display().to_string())
}

pub fn read_labeled(path: &Path) -> Result<LabeledPointSet, CliError> {
    parse_labeled(open(path)?, &path.display().to_string())
}

/// 17 significant digits, which round-trips every finite `f64`.
pub fn format_coordinate(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_points<W: Write>(out: &mut W, points: &PointSet) -> std::io::Result<()> {
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|&v| format_coordinate(v)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_labeled<W: Write>(out: &mut W, labeled: &LabeledPointSet) -> std::io::Result<()> {
    for (p, y) in labeled.points().iter().zip(labeled.labels()) {
        let mut row: Vec<String> = p.iter().map(|&v| format_coordinate(v)).collect();
        row.push(if y.sign() > 0.0 { "1" } else { "-1" }.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
