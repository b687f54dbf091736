//! CSV tables: one row per generation, and an optional point-cloud export.
//!
//! Reals are written with 17 significant digits, so every `f64` re-reads
//! to the same bits.

use std::io::{Read, Write};

use chm_core::{DensityRecord, PointCloud};
use serde::{Deserialize, Serialize};

pub const COLUMNS: [&str; 8] =
    ["generation", "m_tilde", "d_tilde", "center_code", "witness_code", "ball_measure", "certified", "upper_bound"];

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A generation row as it appears in the CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub generation: usize,
    pub m_tilde: f64,
    pub d_tilde: f64,
    pub center_code: String,
    pub witness_code: String,
    pub ball_measure: f64,
    pub certified: bool,
    pub upper_bound: Option<f64>,
}

impl From<&DensityRecord> for Row {
    fn from(r: &DensityRecord) -> Self {
        Row {
            generation: r.generation,
            m_tilde: r.m_tilde,
            d_tilde: r.d_tilde,
            center_code: r.center.code.to_string(),
            witness_code: r.witness.code.to_string(),
            ball_measure: r.ball_discrete_measure,
            certified: r.certified,
            upper_bound: r.certified_upper_bound,
        }
    }
}

/// Writes rows as they arrive and flushes after each one, so an aborted
/// run leaves every finished generation on disk.
pub struct RowWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RowWriter<W> {
    pub fn new(out: W) -> csv::Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(COLUMNS)?;
        inner.flush()?;
        Ok(RowWriter { inner })
    }

    pub fn write(&mut self, record: &DensityRecord) -> csv::Result<()> {
        let row = Row::from(record);
        self.inner.write_record([
            row.generation.to_string(),
            fmt_real(row.m_tilde),
            fmt_real(row.d_tilde),
            row.center_code,
            row.witness_code,
            fmt_real(row.ball_measure),
            row.certified.to_string(),
            row.upper_bound.map(fmt_real).unwrap_or_default(),
        ])?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.inner.into_inner().map_err(|e| e.into_error()).expect("flushed after every row")
    }
}

pub fn read_rows(input: impl Read) -> csv::Result<Vec<Row>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Writes `code, x1..xn, weight` for every point of the cloud.
pub fn write_cloud(cloud: &PointCloud<'_>, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["code".to_string()];
    header.extend((1..=cloud.dim()).map(|k| format!("x{k}")));
    header.push("weight".into());
    w.write_record(&header)?;
    for p in cloud.iter() {
        let mut rec = vec![chm_core::Code::from(p.code).to_string()];
        rec.extend(p.coords.iter().map(|&x| fmt_real(x)));
        rec.push(fmt_real(p.weight));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
