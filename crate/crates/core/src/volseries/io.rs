//! CSV ingestion (`date,close` with a header row) and export (`date,value`).

use std::io::{Read, Write};

use chrono::NaiveDate;

use super::{DatedSeries, PriceSeries};
use crate::error::{Error, Result};

fn csv_err(line: u64, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        message: message.into(),
    }
}

/// Reads a two-column dated CSV with a header row.
pub fn read_dated_csv<R: Read>(reader: R) -> Result<DatedSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_err(1, e.to_string()))?.clone();
    if headers.len() != 2 {
        return Err(csv_err(
            1,
            format!("expected a two-column header, got {} columns", headers.len()),
        ));
    }
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            csv_err(line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != 2 {
            return Err(csv_err(line, format!("expected 2 fields, got {}", rec.len())));
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d")
            .map_err(|e| csv_err(line, format!("bad date '{}': {e}", &rec[0])))?;
        let value: f64 = rec[1]
            .parse()
            .map_err(|_| csv_err(line, format!("bad number '{}'", &rec[1])))?;
        if !value.is_finite() {
            return Err(csv_err(line, format!("non-finite value '{}'", &rec[1])));
        }
        if let Some(prev) = dates.last() {
            if date <= *prev {
                return Err(csv_err(line, format!("date {date} does not follow {prev}")));
            }
        }
        dates.push(date);
        values.push(value);
    }
    if dates.is_empty() {
        return Err(Error::Data("CSV contains no data rows".into()));
    }
    DatedSeries::new(dates, values)
}

pub fn read_prices_csv<R: Read>(reader: R) -> Result<PriceSeries> {
    let s = read_dated_csv(reader)?;
    PriceSeries::new(s.dates, s.values)
}

pub fn write_series_csv<W: Write>(writer: W, dates: &[NaiveDate], values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["date", "value"]).map_err(io)?;
    for (d, v) in dates.iter().zip(values) {
        w.write_record([d.format("%Y-%m-%d").to_string(), format!("{v}")])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
