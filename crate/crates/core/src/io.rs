//! Input parsers and output writers.
//!
//! Inputs:
//! * basket CSV: header `transaction_id,item[,count]`, one (transaction, item) per row;
//! * matrix CSV: first row holds item names, first column transaction ids,
//!   cells are non-negative integer counts;
//! * similarity CSV: the format produced by [`write_matrix`].
//!
//! Outputs are CSV with six decimal places, plus a JSON cluster document.

use std::collections::HashMap;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::similarity::{ItemStats, Measure, SimilarityMatrix};

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(bytes)
}

fn line_of(record: &StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

fn records(bytes: &[u8]) -> Result<Vec<StringRecord>> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        Error::parse(line, "input is not valid UTF-8")
    })?;
    let mut out = Vec::new();
    for rec in reader(text.as_bytes()).into_records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::parse(1, "empty input"));
    }
    Ok(out)
}

pub fn parse_basket_file(bytes: &[u8]) -> Result<Dataset> {
    let recs = records(bytes)?;
    let header = &recs[0];
    let header_line = line_of(header);
    let with_count = match header.iter().collect::<Vec<_>>().as_slice() {
        ["transaction_id", "item"] => false,
        ["transaction_id", "item", "count"] => true,
        _ => {
            return Err(Error::parse(
                header_line,
                "expected header `transaction_id,item` or `transaction_id,item,count`",
            ))
        }
    };

    let mut order: Vec<(String, Vec<(String, i64)>)> = Vec::new();
    let mut slot: HashMap<String, usize> = HashMap::new();
    for rec in &recs[1..] {
        let line = line_of(rec);
        if rec.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let (tid, item) = (&rec[0], &rec[1]);
        if tid.is_empty() {
            return Err(Error::parse(line, "empty transaction id"));
        }
        if item.is_empty() {
            return Err(Error::parse(line, "empty item"));
        }
        let count = if with_count {
            let raw = &rec[2];
            let count: i64 = raw
                .parse()
                .map_err(|_| Error::parse(line, format!("count `{raw}` is not an integer")))?;
            if count < 1 {
                return Err(Error::parse(
                    line,
                    format!("count must be >= 1, got {count}"),
                ));
            }
            count
        } else {
            1
        };
        let k = *slot.entry(tid.to_owned()).or_insert_with(|| {
            order.push((tid.to_owned(), Vec::new()));
            order.len() - 1
        });
        order[k].1.push((item.to_owned(), count));
    }
    if order.is_empty() {
        return Err(Error::parse(
            header_line + 1,
            "no transactions after header",
        ));
    }
    Dataset::from_records(order)
}

type LabelledRows<T> = (Vec<String>, Vec<(String, Vec<T>)>);

/// Shared layout of the matrix-shaped CSV files: header of column names, then
/// one labelled row per entity.
fn labelled_rows<T>(
    bytes: &[u8],
    mut cell: impl FnMut(&str) -> std::result::Result<T, String>,
) -> Result<LabelledRows<T>> {
    let recs = records(bytes)?;
    let header = &recs[0];
    if header.len() < 2 {
        return Err(Error::parse(
            line_of(header),
            "header needs at least one column",
        ));
    }
    let columns: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut rows = Vec::with_capacity(recs.len() - 1);
    for rec in &recs[1..] {
        let line = line_of(rec);
        if rec.len() != header.len() {
            return Err(Error::parse(
                line,
                format!(
                    "ragged row: expected {} fields, found {}",
                    header.len(),
                    rec.len()
                ),
            ));
        }
        let label = rec[0].to_owned();
        if label.is_empty() {
            return Err(Error::parse(line, "empty row label"));
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|raw| cell(raw).map_err(|m| Error::parse(line, m)))
            .collect::<Result<Vec<T>>>()?;
        rows.push((label, values));
    }
    if rows.is_empty() {
        return Err(Error::parse(line_of(header) + 1, "no rows after header"));
    }
    Ok((columns, rows))
}

pub fn parse_matrix_file(bytes: &[u8]) -> Result<Dataset> {
    let (items, rows) = labelled_rows(bytes, |raw| {
        raw.parse::<u32>()
            .map_err(|_| format!("cell `{raw}` is not a non-negative integer"))
    })?;
    Dataset::from_rows(items, rows)
}

/// Reads a similarity matrix previously written by [`write_matrix`].
pub fn parse_similarity_file(bytes: &[u8], measure: Measure) -> Result<SimilarityMatrix> {
    let (ids, rows) = labelled_rows(bytes, |raw| {
        raw.parse::<f64>()
            .map_err(|_| format!("cell `{raw}` is not a number"))
    })?;
    if rows.len() != ids.len() {
        return Err(Error::InvalidMatrix(format!(
            "{} columns but {} rows",
            ids.len(),
            rows.len()
        )));
    }
    let mut values = Vec::with_capacity(ids.len() * ids.len());
    for (expected, (label, row)) in ids.iter().zip(rows) {
        if *expected != label {
            return Err(Error::InvalidMatrix(format!(
                "row `{label}` does not match column `{expected}`"
            )));
        }
        values.extend(row);
    }
    SimilarityMatrix::new(ids, values, measure)
}

fn csv_bytes(rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = WriterBuilder::new()
        .flexible(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn format_value(v: f64) -> String {
    format!("{v:.6}")
}

pub fn write_matrix(matrix: &SimilarityMatrix) -> Vec<u8> {
    let header = std::iter::once(String::new()).chain(matrix.ids().iter().cloned());
    let body = (0..matrix.len()).map(|i| {
        std::iter::once(matrix.ids()[i].clone())
            .chain(matrix.row(i).iter().map(|&v| format_value(v)))
            .collect()
    });
    csv_bytes(std::iter::once(header.collect()).chain(body))
}

pub fn write_clusters(clustering: &Clustering) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(clustering).expect("clustering serializes");
    out.push(b'\n');
    out
}

pub fn parse_clusters(bytes: &[u8]) -> Result<Clustering> {
    serde_json::from_slice(bytes).map_err(|e| Error::parse(e.line(), e.to_string()))
}

/// Per-item σ and the Gaussian factor a unit mismatch on that item costs.
pub fn write_stats(ds: &Dataset, stats: &ItemStats) -> Vec<u8> {
    let header = ["item", "sigma", "unit_penalty"].map(String::from).to_vec();
    let body = ds.catalog().items().iter().enumerate().map(|(k, item)| {
        vec![
            item.clone(),
            format_value(stats.sigma[k]),
            format_value(stats.unit_penalty(k)),
        ]
    });
    csv_bytes(std::iter::once(header).chain(body))
}
