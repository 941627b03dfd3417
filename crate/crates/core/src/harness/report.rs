//! CSV tables.
//!
//! Numbers are written with 12 significant digits in the style of C's
//! `%.12g` (shortest of fixed and exponent notation, trailing zeros removed),
//! negative zero is written as `0`, and rows end with a bare `\n`.

use std::io::Write;

use crate::certification::CertificationResult;
use crate::error::{Error, Result};

/// `%.12g` formatting.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const DIGITS: i32 = 12;
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        let s = trim_zeros(&format!("{x:.decimals$}"));
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

pub(crate) fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Dimension(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

pub const CERTIFY_HEADER: [&str; 14] = [
    "probe",
    "channel",
    "povm",
    "qdet",
    "output_entropy",
    "prob_entropy",
    "log_tp",
    "private_lower",
    "ea_classical_lower",
    "input_entropy",
    "coherent_information",
    "grouping",
    "shots",
    "qdet_estimate",
];

/// One-row table for a certification run.
pub fn certify_table(
    result: &CertificationResult<f64>,
    shots: u64,
    estimate: Option<f64>,
) -> Result<Table> {
    let mut table = Table::new(&CERTIFY_HEADER);
    table.push(vec![
        result.probe_label.clone(),
        result.channel_label.clone(),
        result.povm_label.clone(),
        format_number(result.qdet),
        format_number(result.output_entropy),
        format_number(result.prob_entropy),
        format_number(result.log_tp),
        format_number(result.private_lower),
        format_number(result.ea_classical_lower),
        format_number(result.input_entropy),
        format_number(result.coherent_information),
        result.grouping.describe(),
        shots.to_string(),
        format_optional(estimate),
    ])?;
    Ok(table)
}
