//! Text, CSV and JSON emitters.
//!
//! Every report is a serializable struct plus a tabular view; text and CSV
//! print the same tables, differing only in number formatting.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            title: None,
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub type NumFmt = fn(f64) -> String;

pub trait Report: Serialize {
    fn tables(&self, num: NumFmt) -> Vec<Table>;
}

/// `%g` with six significant digits.
pub fn short(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest representation that round-trips.
pub fn full(x: f64) -> String {
    x.to_string()
}

pub fn emit<R: Report>(report: &R, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            for (i, table) in report.tables(full).iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                let mut w = csv::WriterBuilder::new().from_writer(&mut *out);
                w.write_record(&table.headers)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Ok(())
        }
        Format::Text => {
            for (i, table) in report.tables(short).iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write_aligned(table, out)?;
            }
            Ok(())
        }
    }
}

fn write_aligned(table: &Table, out: &mut dyn Write) -> io::Result<()> {
    if let Some(title) = &table.title {
        writeln!(out, "{title}")?;
    }
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&table.headers))?;
    for row in &table.rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(short(0.4), "0.4");
        assert_eq!(short(2.0 / 3.0), "0.666667");
        assert_eq!(short(1.0), "1");
        assert_eq!(short(123456789.0), "1.23457e+08");
        assert_eq!(short(0.00001234), "1.234e-05");
        assert_eq!(short(0.0001), "0.0001");
        assert_eq!(short(999999.7), "1e+06");
        assert_eq!(short(-0.25), "-0.25");
        assert_eq!(short(100000.0), "100000");
    }

    #[test]
    fn full_precision_round_trips() {
        let x = 0.1 + 0.2;
        assert_eq!(full(x).parse::<f64>().unwrap(), x);
    }

    #[derive(Serialize)]
    struct Demo {
        value: f64,
    }

    impl Report for Demo {
        fn tables(&self, num: NumFmt) -> Vec<Table> {
            let mut t = Table::new(&["name", "value"]).titled("demo");
            t.push(vec!["x".into(), num(self.value)]);
            vec![t, Table::new(&["empty"])]
        }
    }

    #[test]
    fn formats() {
        let demo = Demo { value: 1.0 / 3.0 };
        let render = |f| {
            let mut buf = Vec::new();
            emit(&demo, f, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert_eq!(
            render(Format::Text),
            "demo\nname  value\nx     0.333333\n\nempty\n"
        );
        assert_eq!(
            render(Format::Csv),
            "name,value\nx,0.3333333333333333\n\nempty\n"
        );
        assert!(render(Format::Json).contains("\"value\": 0.3333333333333333"));
    }
}
