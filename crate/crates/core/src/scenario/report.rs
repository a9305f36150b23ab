use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Significant digits of every number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// `label,value` table from pairs.
    pub fn label_value<'a>(name: &str, rows: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        let mut t = Self::new(name, &["label", "value"]);
        for (label, value) in rows {
            t.push(vec![label.to_string(), format_number(value)]);
        }
        t
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Value column of the row with the given label.
    pub fn value(&self, label: &str) -> Option<&str> {
        self.rows.iter().find(|r| r[0] == label).map(|r| r[1].as_str())
    }
}

/// Result tables plus the metadata needed to reproduce them.
/// Every number is stored as a decimal string, so serialization is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub kind: String,
    pub tables: Vec<Table>,
    pub metadata: BTreeMap<String, String>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Parsed value of `label` in table `table`.
    pub fn number(&self, table: &str, label: &str) -> Option<f64> {
        self.table(table)?.value(label)?.parse().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// 12 significant digits: fixed notation for exponents in [-5, 12),
/// scientific otherwise. Negative zero prints as `0`.
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
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => emit_csv(report),
    }
}

/// One header row, then every table's rows. With several tables the label
/// is prefixed by `<table>/`; narrower tables are padded with empty cells.
fn emit_csv(report: &Report) -> Vec<u8> {
    let columns = report
        .tables
        .iter()
        .map(|t| &t.columns)
        .max_by_key(|c| c.len())
        .cloned()
        .unwrap_or_else(|| vec!["label".into(), "value".into()]);
    let prefixed = report.tables.len() > 1;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(&columns).expect("in-memory write");
    for table in &report.tables {
        for row in &table.rows {
            let mut record: Vec<String> = row.clone();
            if prefixed {
                record[0] = format!("{}/{}", table.name, record[0]);
            }
            record.resize(columns.len(), String::new());
            writer.write_record(&record).expect("in-memory write");
        }
    }
    writer.into_inner().expect("in-memory flush")
}

pub fn parse_json_report(bytes: &[u8]) -> Result<Report> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0), "1.00000000000");
        assert_eq!(format_number(0.5), "0.500000000000");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(format_number(123456.789), "123456.789000");
        assert_eq!(format_number(1.5e-3), "0.00150000000000");
        assert_eq!(format_number(2.5e-7), "2.50000000000e-7");
        assert_eq!(format_number(5e15), "5.00000000000e15");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(0.99999999999999), "1.00000000000");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn formatted_values_keep_twelve_digits() {
        for &x in &[std::f64::consts::PI, 1e-9 / 7.0, 7.0e11 / 3.0, -1e20 / 3.0] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 5e-12, "{x}");
        }
    }

    fn sample() -> Report {
        Report {
            scenario: "s".into(),
            kind: "abl".into(),
            tables: vec![Table::label_value("abl", [("box-1", 1.0), ("not-box-1", 0.0)])],
            metadata: BTreeMap::from([("seed".to_string(), "0".to_string())]),
        }
    }

    #[test]
    fn csv_shape() {
        let text = String::from_utf8(emit_report(&sample(), Format::Csv)).unwrap();
        assert_eq!(text, "label,value\nbox-1,1.00000000000\nnot-box-1,0\n");
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn csv_prefixes_labels_with_several_tables() {
        let mut r = sample();
        r.tables.push(Table::label_value("born", [("box-1", 1.0 / 3.0)]));
        let text = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
        assert!(text.contains("\nabl/box-1,"));
        assert!(text.contains("\nborn/box-1,0.333333333333\n"));
    }

    #[test]
    fn deterministic_and_round_trips() {
        let r = sample();
        assert_eq!(emit_report(&r, Format::Json), emit_report(&r, Format::Json));
        assert_eq!(emit_report(&r, Format::Csv), emit_report(&r, Format::Csv));
        assert_eq!(parse_json_report(&emit_report(&r, Format::Json)).unwrap(), r);
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
