//! Report records and their JSON/CSV encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// How `value` is compared with `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `value <= bound + tol·|bound|`
    Le,
    /// `value >= bound - tol·|bound|`
    Ge,
    /// `value < bound`
    Lt,
    /// `value > bound`
    Gt,
    /// `|value - bound| <= tol`
    Abs,
    /// `|value - bound| <= tol·max(|value|, |bound|)`
    Rel,
}

impl Relation {
    /// Amount by which the comparison fails; zero when it holds.
    pub fn violation(self, value: f64, bound: f64, tol: f64) -> f64 {
        let v = match self {
            Relation::Le => value - bound - tol * bound.abs(),
            Relation::Ge => bound - value - tol * bound.abs(),
            Relation::Lt => {
                if value < bound {
                    0.0
                } else {
                    (value - bound).max(f64::MIN_POSITIVE)
                }
            }
            Relation::Gt => {
                if value > bound {
                    0.0
                } else {
                    (bound - value).max(f64::MIN_POSITIVE)
                }
            }
            Relation::Abs => (value - bound).abs() - tol,
            Relation::Rel => (value - bound).abs() - tol * value.abs().max(bound.abs()),
        };
        if v.is_nan() {
            f64::INFINITY
        } else {
            v.max(0.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub body: String,
    pub n: usize,
    pub t: f64,
    pub a_canonical: Vec<f64>,
    pub method: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub tol: f64,
    pub pass: bool,
    /// Evidence rows are reported but do not count towards the summary.
    #[serde(default)]
    pub evidence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseRecord {
    pub fn new(body: &str, n: usize, t: f64, method: &str, value: f64, bound: f64, relation: Relation, tol: f64) -> Self {
        let mut r = CaseRecord {
            body: body.to_string(),
            n,
            t,
            a_canonical: Vec::new(),
            method: method.to_string(),
            value,
            bound,
            relation,
            tol,
            pass: false,
            evidence: false,
            samples: None,
            note: None,
        };
        r.pass = r.check();
        r
    }

    pub fn with_direction(mut self, a: &[f64]) -> Self {
        self.a_canonical = a.to_vec();
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = Some(samples);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn as_evidence(mut self) -> Self {
        self.evidence = true;
        self
    }

    pub fn violation(&self) -> f64 {
        self.relation.violation(self.value, self.bound, self.tol)
    }

    /// Recomputes the verdict from the stored numbers.
    pub fn check(&self) -> bool {
        self.violation() == 0.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    pub runtime_ms: Option<u64>,
}

fn case_order(x: &CaseRecord, y: &CaseRecord) -> std::cmp::Ordering {
    (x.body.as_str(), x.n).cmp(&(y.body.as_str(), y.n)).then(x.t.total_cmp(&y.t)).then(x.method.cmp(&y.method))
}

impl Report {
    /// Sorts the cases into canonical order and fills in the summary.
    pub fn assemble(suite: &str, seed: u64, mut cases: Vec<CaseRecord>) -> Self {
        cases.sort_by(case_order);
        let summary = summarize(&cases);
        Report { suite: suite.to_string(), seed, cases, summary, runtime_ms: None }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// True when every stored verdict and the summary agree with the numbers.
    pub fn is_consistent(&self) -> bool {
        self.cases.iter().all(|c| c.pass == c.check()) && summarize(&self.cases) == self.summary
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for c in &self.cases {
            let a: Vec<String> = c.a_canonical.iter().map(|&x| sig17(x)).collect();
            w.write_record([
                self.suite.clone(),
                c.body.clone(),
                c.n.to_string(),
                sig17(c.t),
                a.join(";"),
                c.method.clone(),
                sig17(c.value),
                sig17(c.bound),
                c.pass.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn emit(&self, format: Format, out: &mut dyn Write) -> Result<(), HarnessError> {
        let s = match format {
            Format::Json => self.to_json()?,
            Format::Csv => self.to_csv()?,
        };
        out.write_all(s.as_bytes())?;
        Ok(())
    }
}

pub const CSV_HEADER: [&str; 9] = ["suite", "body", "n", "t", "a_canonical", "method", "value", "bound", "pass"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn summarize(cases: &[CaseRecord]) -> Summary {
    let mut s = Summary::default();
    for c in cases.iter().filter(|c| !c.evidence) {
        if c.pass {
            s.passed += 1;
        } else {
            s.failed += 1;
        }
        s.max_violation = s.max_violation.max(c.violation());
    }
    s
}

/// Seventeen significant digits in scientific notation.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
