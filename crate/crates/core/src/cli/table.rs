//! CSV formats: metric tables and rank reports.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::{Metric, MetricRecord};
use crate::ranking::RankReport;

pub const METRICS_HEADER: [&str; 5] = ["patient_id", "strategy", "class", "metric", "value"];

pub fn fmt_value(v: f64) -> String {
    format!("{v:.6}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Data(e.to_string()))
}

/// Metric table text, one row per record, in the given order.
pub fn metrics_csv(records: &[MetricRecord<f64>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(METRICS_HEADER).map_err(csv_err)?;
    let mut seen = BTreeSet::new();
    for r in records {
        let key = (&r.patient_id, &r.strategy_id, &r.class_name, r.metric);
        if !seen.insert(key) {
            return Err(Error::Data(format!("duplicate row {key:?}")));
        }
        w.write_record([
            r.patient_id.as_str(),
            r.strategy_id.as_str(),
            r.class_name.as_str(),
            r.metric.name(),
            &fmt_value(r.value),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<MetricRecord<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != METRICS_HEADER {
        return Err(Error::Data(format!(
            "{}: header must be `{}`",
            path.display(),
            METRICS_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, row) in r.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let field = |i: usize| row.get(i).unwrap_or_default().to_string();
        let value: f64 = field(4).parse().map_err(|_| {
            Error::Data(format!(
                "{}: row {}: bad value `{}`",
                path.display(),
                line + 2,
                field(4)
            ))
        })?;
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        out.push(MetricRecord {
            patient_id: field(0),
            strategy_id: field(1),
            class_name: field(2),
            metric: field(3).parse::<Metric>()?,
            value,
        });
    }
    Ok(out)
}

/// Per-patient section, a blank line, then the global summary sorted by rank.
pub fn rank_csv(report: &RankReport<f64>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["patient_id", "strategy", "avg_rank"])
        .map_err(csv_err)?;
    for (patient, ranks) in &report.per_patient {
        for (s, r) in report.strategies.iter().zip(ranks) {
            w.write_record([patient.as_str(), s.as_str(), &fmt_value(*r)])
                .map_err(csv_err)?;
        }
    }
    let mut text = finish(w)?;
    text.push('\n');

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["strategy", "global_avg_rank"])
        .map_err(csv_err)?;
    for (s, r) in report.ordering() {
        w.write_record([s, &fmt_value(r)]).map_err(csv_err)?;
    }
    text.push_str(&finish(w)?);
    Ok(text)
}

/// Reads back the summary block of a rank report.
pub fn read_rank_summary(text: &str) -> Result<Vec<(String, f64)>> {
    let block = text
        .split("\n\n")
        .nth(1)
        .ok_or_else(|| Error::Data("rank report has no summary block".into()))?;
    let mut r = csv::Reader::from_reader(block.as_bytes());
    r.records()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            let v = row
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::Data("bad rank value".into()))?;
            Ok((row.get(0).unwrap_or_default().to_string(), v))
        })
        .collect()
}
