//! Sweep results and their CSV form.

use std::io::{Read, Write};

use anyhow::{bail, Context};
use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::{DiscreteChannelParams, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::model::Model;

pub const FLAGS_COLUMN: &str = "flags";

/// Provenance of a curve; written as a JSON sidecar since the CSV keeps a
/// single header line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub version: String,
    pub physical: PhysicalParams,
    pub discrete: DiscreteChannelParams,
    pub tolerances: QuadratureSpec,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub power_dbm: f64,
    /// Bits per channel use, one per model; NaN where evaluation failed.
    pub values: Vec<f64>,
    /// `model: reason` entries.
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub models: Vec<Model>,
    pub rows: Vec<Row>,
    pub meta: Option<CurveMeta>,
}

impl BoundCurve {
    pub fn column(&self, model: Model) -> Option<Vec<f64>> {
        let j = self.models.iter().position(|&m| m == model)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }

    /// Whether the cell for `model` in `row` carries a flag.
    pub fn is_flagged(&self, row: &Row, model: Model) -> bool {
        let prefix = format!("{model}:");
        row.flags.iter().any(|f| f.starts_with(&prefix))
    }
}

pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        format!("{v}")
    }
}

pub fn write_csv<W: Write>(curve: &BoundCurve, out: W) -> anyhow::Result<()> {
    if curve.rows.is_empty() {
        bail!("refusing to write an empty curve");
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["power_dbm".to_string()];
    header.extend(curve.models.iter().map(|m| m.to_string()));
    header.push(FLAGS_COLUMN.to_string());
    w.write_record(&header)?;
    for row in &curve.rows {
        let mut rec = vec![format!("{}", row.power_dbm)];
        rec.extend(row.values.iter().map(|&v| format_value(v)));
        rec.push(row.flags.join("; "));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(curve: &BoundCurve) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    write_csv(curve, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

pub fn read_csv<R: Read>(input: R) -> anyhow::Result<BoundCurve> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = r.headers()?.clone();
    let n = header.len();
    if n < 3 || &header[0] != "power_dbm" || &header[n - 1] != FLAGS_COLUMN {
        bail!("unexpected CSV header");
    }
    let models = header
        .iter()
        .skip(1)
        .take(n - 2)
        .map(|s| s.parse())
        .collect::<anyhow::Result<Vec<Model>>>()?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.parse::<f64>()
                .with_context(|| format!("row {}: bad number `{s}`", i + 1))
        };
        let power_dbm = parse(&rec[0])?;
        let values = (1..n - 1)
            .map(|j| parse(&rec[j]))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let flags = match &rec[n - 1] {
            "" => Vec::new(),
            s => s.split("; ").map(str::to_string).collect(),
        };
        rows.push(Row {
            power_dbm,
            values,
            flags,
        });
    }
    Ok(BoundCurve {
        models,
        rows,
        meta: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> BoundCurve {
        BoundCurve {
            models: vec![Model::Lpc, Model::MncChi(1.5)],
            rows: vec![
                Row {
                    power_dbm: -30.0,
                    values: vec![0.18360979123, f64::NAN],
                    flags: vec!["mnc-chi:1.5: quadrature, did \"not\" converge".into()],
                },
                Row {
                    power_dbm: 2.5,
                    values: vec![7.9e-12, 1.0],
                    flags: vec![],
                },
            ],
            meta: None,
        }
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_value(0.18360979123), "1.83609791e-1");
        assert_eq!(format_value(f64::NAN), "NaN");
        assert_eq!(format_value(f64::INFINITY), "inf");
    }

    #[test]
    fn quoting_follows_rfc4180() {
        let s = csv_string(&curve()).unwrap();
        let line = s.lines().nth(1).unwrap();
        assert!(
            line.ends_with("\"mnc-chi:1.5: quadrature, did \"\"not\"\" converge\""),
            "{line}"
        );
    }

    #[test]
    fn single_row_has_two_lines() {
        let mut c = curve();
        c.rows.truncate(1);
        assert_eq!(csv_string(&c).unwrap().lines().count(), 2);
    }
}
