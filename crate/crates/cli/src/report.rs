//! Run reports and their table, CSV and JSON renderings.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Non-finite numbers are flagged rather than printed.
    fn flag(x: f64) -> Option<&'static str> {
        if x.is_nan() {
            Some("singular")
        } else if x.is_infinite() {
            Some("divergent")
        } else {
            None
        }
    }

    fn json_number(x: f64) -> String {
        // 17 significant digits round-trip every f64.
        format!("{x:.16e}")
    }

    fn table_text(&self) -> String {
        match self {
            Cell::Number(x) => match Cell::flag(*x) {
                Some(f) => f.to_string(),
                None => format_significant(*x, 9),
            },
            Cell::Integer(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Number(x) => match Cell::flag(*x) {
                Some(f) => f.to_string(),
                None => Cell::json_number(*x),
            },
            other => other.table_text(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Integer(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Integer(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Number(x) => match Cell::flag(*x) {
                Some(f) => s.serialize_str(f),
                None => RawValue::from_string(Cell::json_number(*x))
                    .map_err(serde::ser::Error::custom)?
                    .serialize(s),
            },
            Cell::Integer(i) => s.serialize_i64(*i),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
        }
    }
}

/// `x` with `digits` significant digits, fixed-point when that is readable.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = digits - 1)
    }
}

/// Column names plus rows of cells.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Ordered key/value parameters, serialised as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Parameters(pub Vec<(String, Cell)>);

impl Serialize for Parameters {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A verdict line; failures make the process exit with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub passed: bool,
    pub description: String,
}

impl Verdict {
    pub fn check(passed: bool, description: impl Into<String>) -> Self {
        Verdict {
            passed,
            description: description.into(),
        }
    }

    pub fn line(&self) -> String {
        format!("{}: {}", if self.passed { "PASS" } else { "FAIL" }, self.description)
    }
}

struct VerdictLines<'a>(&'a [Verdict]);

impl Serialize for VerdictLines<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for v in self.0 {
            seq.serialize_element(&v.line())?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub parameters: Parameters,
    pub results: Table,
    pub verdicts: Vec<Verdict>,
    /// Seconds; omitted in deterministic mode.
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, results: Table) -> Self {
        RunReport {
            command: command.into(),
            parameters: Parameters::default(),
            results,
            verdicts: Vec::new(),
            wall_time: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.parameters.0.push((key.to_string(), value.into()));
        self
    }

    pub fn verdict(mut self, passed: bool, description: impl Into<String>) -> Self {
        self.verdicts.push(Verdict::check(passed, description));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Json<'a> {
            command: &'a str,
            parameters: &'a Parameters,
            results: &'a Table,
            verdicts: VerdictLines<'a>,
            #[serde(skip_serializing_if = "Option::is_none")]
            wall_time: Option<Cell>,
        }
        let json = Json {
            command: &self.command,
            parameters: &self.parameters,
            results: &self.results,
            verdicts: VerdictLines(&self.verdicts),
            wall_time: self.wall_time.map(Cell::Number),
        };
        serde_json::to_string_pretty(&json).expect("report serialisation cannot fail")
    }

    /// The results table as RFC 4180 CSV.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.results.columns).expect("in-memory write");
        for row in &self.results.rows {
            w.write_record(row.iter().map(Cell::csv_text)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is UTF-8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.parameters.0 {
            let _ = writeln!(out, "  {k} = {}", v.table_text());
        }
        let cells: Vec<Vec<String>> = self
            .results
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::table_text).collect())
            .collect();
        let widths: Vec<usize> = self
            .results
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(
            out,
            "{}",
            line(self.results.columns.iter().map(String::as_str).collect())
        );
        for row in &cells {
            let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "{}", v.line());
        }
        if let Some(t) = self.wall_time {
            let _ = writeln!(out, "wall time: {} s", format_significant(t, 3));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut t = Table::new(&["x", "label", "n"]);
        t.push(vec![Cell::from(0.1), Cell::from("a,b"), Cell::from(3usize)]);
        t.push(vec![
            Cell::from(f64::INFINITY),
            Cell::from("q\"uote"),
            Cell::from(4usize),
        ]);
        t.push(vec![Cell::from(f64::NAN), Cell::from("plain"), Cell::from(5usize)]);
        RunReport::new("demo", t).param("seed", 42u64).verdict(true, "ok")
    }

    #[test]
    fn json_numbers_round_trip() {
        let json = sample().to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["results"]["rows"][0][0].as_f64().unwrap(), 0.1);
        assert!(json.contains("1.0000000000000001e-1"));
        assert_eq!(parsed["results"]["rows"][1][0], "divergent");
        assert_eq!(parsed["results"]["rows"][2][0], "singular");
        assert_eq!(parsed["verdicts"][0], "PASS: ok");
        assert!(parsed.get("wall_time").is_none());
    }

    #[test]
    fn csv_quotes_fields() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,label,n");
        assert_eq!(lines[1], "1.0000000000000001e-1,\"a,b\",3");
        assert_eq!(lines[2], "divergent,\"q\"\"uote\",4");
    }

    #[test]
    fn table_uses_nine_significant_digits() {
        assert_eq!(format_significant(1.4469189829363254, 9), "1.44691898");
        assert_eq!(format_significant(16.696713921, 9), "16.6967139");
        assert_eq!(format_significant(1.2e-7, 9), "1.20000000e-7");
        assert!(sample().to_table().contains("PASS: ok"));
    }
}
