use std::collections::BTreeMap;
use std::io::Write;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// One table row. `ok` and `note` are emitted as the trailing columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<String>,
    pub ok: bool,
    pub note: String,
}

impl Row {
    pub fn new(cells: Vec<String>, ok: bool) -> Self {
        Row {
            cells,
            ok,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Result of one subcommand. Every value is a string so the JSON and CSV
/// encodings carry the same text.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl OutputRecord {
    pub fn new(subcommand: &str, columns: &[&str]) -> Self {
        OutputRecord {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Row) {
        debug_assert_eq!(row.cells.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn status(&self) -> Status {
        if self.rows.iter().all(|r| r.ok) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Notes of failing rows, or the row cells when a row has no note.
    pub fn failures(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| !r.ok)
            .map(|r| {
                if r.note.is_empty() {
                    r.cells.join(",")
                } else {
                    r.note.clone()
                }
            })
            .collect()
    }

    /// Column names of the CSV encoding: subcommand and status, each
    /// parameter, the table columns, then `ok` and `note`.
    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["subcommand".to_string(), "status".to_string()];
        h.extend(self.parameters.keys().cloned());
        h.extend(self.columns.iter().cloned());
        h.push("ok".into());
        h.push("note".into());
        debug_assert!(
            h.iter().enumerate().all(|(i, a)| !h[..i].contains(a)),
            "duplicate CSV column in {h:?}"
        );
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let status = self.status().as_str().to_string();
        self.rows
            .iter()
            .map(|row| {
                let mut out = vec![self.subcommand.clone(), status.clone()];
                out.extend(self.parameters.values().cloned());
                out.extend(row.cells.iter().cloned());
                out.push(row.ok.to_string());
                out.push(row.note.clone());
                out
            })
            .collect()
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(out);
        w.write_record(self.csv_header())?;
        for row in self.csv_rows() {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("string-only record serializes")
    }

    pub fn write_json(&self, mut out: impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }
}

impl Serialize for OutputRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            subcommand: &'a str,
            status: &'static str,
            parameters: &'a BTreeMap<String, String>,
            columns: Vec<&'a str>,
            rows: Vec<BTreeMap<&'a str, String>>,
            failures: Vec<String>,
        }
        let mut columns: Vec<&str> = self.columns.iter().map(String::as_str).collect();
        columns.extend(["ok", "note"]);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut map: BTreeMap<&str, String> = self
                    .columns
                    .iter()
                    .map(String::as_str)
                    .zip(r.cells.iter().cloned())
                    .collect();
                map.insert("ok", r.ok.to_string());
                map.insert("note", r.note.clone());
                map
            })
            .collect();
        Json {
            subcommand: &self.subcommand,
            status: self.status().as_str(),
            parameters: &self.parameters,
            columns,
            rows,
            failures: self.failures(),
        }
        .serialize(s)
    }
}
