use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command's result: a JSON document plus a flat table for CSV and text.
pub struct Output {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(json: Value, headers: &[&str]) -> Self {
        Output { json, headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &self.json)?;
                writeln!(w)
            }
            Format::Csv => {
                let mut cw = csv::Writer::from_writer(w);
                cw.write_record(&self.headers)?;
                for r in &self.rows {
                    cw.write_record(r)?;
                }
                cw.flush()
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
                for r in &self.rows {
                    for (k, c) in r.iter().enumerate() {
                        widths[k] = widths[k].max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let parts: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, &wd)| format!("{c:<wd$}")).collect();
                    parts.join("  ").trim_end().to_string()
                };
                writeln!(w, "{}", line(&self.headers))?;
                for r in &self.rows {
                    writeln!(w, "{}", line(r))?;
                }
                Ok(())
            }
        }
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}
