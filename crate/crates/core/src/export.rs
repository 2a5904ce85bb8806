//! CSV and JSON output with a metadata header.
//!
//! Floats in CSV are written with 17 significant digits in scientific
//! notation, which is locale independent and round-trips `f64` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const TOOL_VERSION: &str = concat!("toric-nk ", env!("CARGO_PKG_VERSION"));

/// Metadata recorded at the top of every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tool_version: String,
    pub command_line: String,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Meta {
    pub fn new(command_line: impl Into<String>) -> Self {
        Meta {
            tool_version: TOOL_VERSION.to_string(),
            command_line: command_line.into(),
            seed: None,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV cell; floats get the fixed 17-digit format.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Renders `#`-prefixed metadata lines, a header row, and the data rows.
pub fn to_csv(meta: &Meta, columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# tool_version: {}", meta.tool_version);
    let _ = writeln!(out, "# command_line: {}", meta.command_line);
    match meta.seed {
        Some(s) => {
            let _ = writeln!(out, "# seed: {s}");
        }
        None => out.push_str("# seed: none\n"),
    }
    for (k, v) in &meta.tolerances {
        let _ = writeln!(out, "# tolerance.{k}: {}", fmt_f64(*v));
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Float(x) => fmt_f64(*x),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `{"meta": ..., <body fields>}` pretty-printed; `body` must serialize to an object.
pub fn to_json<T: Serialize>(meta: &Meta, body: &T) -> String {
    let mut value = serde_json::to_value(body).expect("serializable body");
    let obj = value.as_object_mut().expect("JSON body must be an object");
    let mut doc = serde_json::Map::new();
    doc.insert("meta".into(), serde_json::to_value(meta).expect("meta"));
    doc.append(obj);
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("json");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let meta = Meta::new("toricnk surface").with_seed(3).with_tolerance("tol", 1e-10);
        let csv = to_csv(&meta, &["mu1", "flag"], &[vec![0.1.into(), true.into()]]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[2], "# seed: 3");
        assert_eq!(lines[3], "# tolerance.tol: 1.0000000000000000e-10");
        assert_eq!(lines[4], "mu1,flag");
        assert_eq!(lines[5], "1.0000000000000001e-1,1");
        let back: f64 = lines[5].split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_embeds_meta() {
        #[derive(Serialize)]
        struct Body {
            n: u32,
        }
        let s = to_json(&Meta::new("x"), &Body { n: 4 });
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["n"], 4);
        assert_eq!(v["meta"]["command_line"], "x");
    }
}
