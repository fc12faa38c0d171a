//! Annual CSV datasets: a `year` column followed by one column per series.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Column, Panel};

/// Reads a dataset and marks `target` as the modelling target.
pub fn ingest_csv(path: &Path, target: &str) -> Result<Panel> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_csv(file, target)
}

pub fn read_csv(input: impl Read, target: &str) -> Result<Panel> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Schema(e.to_string()))?
        .clone();
    if headers.get(0) != Some("year") {
        return Err(Error::Schema(format!(
            "first column must be `year`, found `{}`",
            headers.get(0).unwrap_or("")
        )));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    if names.is_empty() {
        return Err(Error::Schema("no series columns after `year`".into()));
    }
    if let Some(blank) = names.iter().position(|n| n.is_empty()) {
        return Err(Error::Schema(format!(
            "column {} has an empty header",
            blank + 2
        )));
    }

    let mut years: Vec<i32> = Vec::new();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Schema(format!("data row {row}: {e}")))?;
        let year_cell = &record[0];
        let year: i32 = year_cell.parse().map_err(|_| Error::Parse {
            row,
            column: "year".into(),
            message: format!("`{year_cell}` is not an integer year"),
        })?;
        if let Some(&previous) = years.last() {
            if year != previous + 1 {
                return Err(Error::Frequency {
                    previous,
                    next: year,
                });
            }
        }
        years.push(year);
        for (j, name) in names.iter().enumerate() {
            let cell = &record[j + 1];
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row,
                    column: name.clone(),
                    message: format!("`{cell}` is not a finite decimal number"),
                })?;
            values[j].push(v);
        }
    }
    if years.is_empty() {
        return Err(Error::Schema("dataset has no rows".into()));
    }
    let columns = names
        .into_iter()
        .zip(values)
        .map(|(n, v)| Column::new(n, v))
        .collect();
    Panel::new(years, columns, target)
}

/// Writes a panel in the same layout `read_csv` accepts.
pub fn write_csv(panel: &Panel) -> String {
    let mut out = String::from("year");
    for c in panel.columns() {
        out.push(',');
        out.push_str(&c.name);
    }
    out.push('\n');
    for (r, year) in panel.years().iter().enumerate() {
        out.push_str(&year.to_string());
        for c in panel.columns() {
            out.push(',');
            out.push_str(&c.values[r].to_string());
        }
        out.push('\n');
    }
    out
}
