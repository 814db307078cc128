//! Check records and their CSV/JSON encodings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "check_id,theorem,lambda,p,measured,reference,margin,pass";

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub theorem: String,
    pub lambda: f64,
    pub p: Option<f64>,
    pub measured: f64,
    pub reference: f64,
    pub margin: f64,
    pub pass: bool,
}

impl Record {
    /// A record passing when `measured <= reference`; margin = reference − measured.
    pub fn at_most(check_id: impl Into<String>, theorem: &str, lambda: f64, measured: f64, reference: f64) -> Self {
        Record {
            check_id: check_id.into(),
            theorem: theorem.to_string(),
            lambda,
            p: None,
            measured,
            reference,
            margin: reference - measured,
            pass: measured <= reference,
        }
    }

    /// A record passing when `measured >= reference`; margin = measured − reference.
    pub fn at_least(check_id: impl Into<String>, theorem: &str, lambda: f64, measured: f64, reference: f64) -> Self {
        Record {
            margin: measured - reference,
            pass: measured >= reference,
            ..Self::at_most(check_id, theorem, lambda, measured, reference)
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

/// Records in check-id order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let passed = records.iter().filter(|r| r.pass).count();
        let summary = Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            all_pass: passed == records.len(),
        };
        Report { records, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.all_pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config("output", format!("expected csv or json, got {other}"))),
        }
    }
}

// shortest round-trip form in exponent notation
fn num(x: f64) -> String {
    format!("{x:e}")
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(report: &Report, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in &report.records {
                let p = r.p.map(num).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    quote(&r.check_id),
                    quote(&r.theorem),
                    num(r.lambda),
                    p,
                    num(r.measured),
                    num(r.reference),
                    num(r.margin),
                    r.pass
                ));
            }
            out.into_bytes()
        }
        OutputFormat::Json => {
            let mut v = serde_json::to_vec_pretty(report).expect("report serializes");
            v.push(b'\n');
            v
        }
    }
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

/// Reads the CSV form back.
pub fn parse_csv(text: &str) -> Result<Report> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse("missing or wrong CSV header".into()));
    }
    let f = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
    let mut records = Vec::new();
    for line in lines {
        let c = split_csv_line(line);
        if c.len() != 8 {
            return Err(Error::Parse(format!("expected 8 columns: {line}")));
        }
        records.push(Record {
            check_id: c[0].clone(),
            theorem: c[1].clone(),
            lambda: f(&c[2])?,
            p: if c[3].is_empty() { None } else { Some(f(&c[3])?) },
            measured: f(&c[4])?,
            reference: f(&c[5])?,
            margin: f(&c[6])?,
            pass: match c[7].as_str() {
                "true" => true,
                "false" => false,
                other => return Err(Error::Parse(format!("pass must be true or false, got {other}"))),
            },
        });
    }
    Ok(Report::new(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        let out = emit(&Report::new(vec![]), OutputFormat::Csv);
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn record_roundtrips_bit_identically() {
        let r = Record::at_most("a.b", "kernel, \"series\"", 0.3, 1.0 / 3.0, 1e-10).with_p(0.85);
        let q = Record::at_least("a.c", "x", 2.5, f64::MIN_POSITIVE, 0.0);
        let rep = Report::new(vec![q, r]);
        let once = emit(&rep, OutputFormat::Csv);
        let back = parse_csv(std::str::from_utf8(&once).unwrap()).unwrap();
        assert_eq!(back, rep);
        assert_eq!(emit(&back, OutputFormat::Csv), once);
        let text = String::from_utf8(once).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(",false"));
        assert!(text.lines().nth(2).unwrap().ends_with(",true"));
        let json: Report = serde_json::from_slice(&emit(&rep, OutputFormat::Json)).unwrap();
        assert_eq!(json, rep);
    }
}
