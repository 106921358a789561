//! Reports, golden files and CSV emission.
//!
//! A report echoes the exact configuration it ran under, lists one record
//! per check with the tolerance the value was tested against, and is byte
//! deterministic for a fixed `(config, seed)` apart from the timing field,
//! which golden comparison ignores.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One check: a name, an optional pass verdict, an optional numeric value
/// and the tolerance it is compared under in golden mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn verdict(name: impl Into<String>, pass: bool) -> Self {
        CheckResult { name: name.into(), pass: Some(pass), value: None, tol: None, detail: None }
    }

    pub fn value(name: impl Into<String>, value: f64, tol: f64) -> Self {
        CheckResult {
            name: name.into(),
            pass: None,
            value: Some(value),
            tol: Some(tol),
            detail: None,
        }
    }

    pub fn checked(name: impl Into<String>, value: f64, tol: f64, pass: bool) -> Self {
        CheckResult {
            name: name.into(),
            pass: Some(pass),
            value: Some(value),
            tol: Some(tol),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub results: Vec<CheckResult>,
    pub passed: bool,
    /// Wall time; excluded from golden comparison and determinism claims.
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, config: serde_json::Value) -> Self {
        Report {
            command: command.into(),
            seed,
            config,
            results: Vec::new(),
            passed: true,
            timing_ms: 0.0,
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        if r.pass == Some(false) {
            self.passed = false;
        }
        self.results.push(r);
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Report> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Plain-text summary, one line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = match r.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "info",
            };
            let value = r.value.map_or(String::new(), |v| format!(" value={v:.12e}"));
            let tol = r.tol.map_or(String::new(), |t| format!(" tol={t:.1e}"));
            let detail = r.detail.as_deref().map_or(String::new(), |d| format!(" ({d})"));
            out.push_str(&format!("{status} {}{value}{tol}{detail}\n", r.name));
        }
        out.push_str(&format!(
            "{}: {} checks, overall {}\n",
            self.command,
            self.results.len(),
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }

    /// Merges several reports, prefixing check names with the source command.
    pub fn merge(reports: &[Report], seed: u64) -> Report {
        let mut merged = Report::new(
            "report-merge",
            seed,
            serde_json::json!({ "sources": reports.iter().map(|r| r.command.clone()).collect::<Vec<_>>() }),
        );
        for r in reports {
            for c in &r.results {
                let mut c = c.clone();
                c.name = format!("{}::{}", r.command, c.name);
                merged.push(c);
            }
        }
        merged
    }
}

/// Outcome of a golden comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenDiff {
    pub field: String,
    pub expected: Option<f64>,
    pub actual: Option<f64>,
    pub tol: f64,
}

/// Compares `report` against the golden file; every golden check must be
/// present with a matching verdict and a value within the golden tolerance.
/// Timing is ignored.
pub fn golden_verify(report: &Report, golden_path: &Path) -> Result<Vec<GoldenDiff>> {
    let golden = Report::read(golden_path)?;
    let mut diffs = Vec::new();
    for g in &golden.results {
        match report.find(&g.name) {
            None => diffs.push(GoldenDiff {
                field: g.name.clone(),
                expected: g.value,
                actual: None,
                tol: g.tol.unwrap_or(0.0),
            }),
            Some(r) => {
                if g.pass.is_some() && r.pass != g.pass {
                    diffs.push(GoldenDiff {
                        field: format!("{} (verdict)", g.name),
                        expected: g.pass.map(|b| if b { 1.0 } else { 0.0 }),
                        actual: r.pass.map(|b| if b { 1.0 } else { 0.0 }),
                        tol: 0.0,
                    });
                }
                if let Some(gv) = g.value {
                    let tol = g.tol.unwrap_or(1e-9);
                    let rv = r.value.unwrap_or(f64::NAN);
                    if !((rv - gv).abs() <= tol) {
                        diffs.push(GoldenDiff {
                            field: g.name.clone(),
                            expected: Some(gv),
                            actual: r.value,
                            tol,
                        });
                    }
                }
            }
        }
    }
    Ok(diffs)
}

/// Writes the report as the new golden file.
pub fn golden_update(report: &Report, golden_path: &Path) -> Result<()> {
    report.write(golden_path)
}

/// Writes a CSV table with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Validation("CSV row width differs from header".into()));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Named tolerance table with CLI overrides (`--tol-overrides name=value`).
#[derive(Debug, Clone)]
pub struct Tolerances {
    map: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in [
            ("negativity", 1e-8),
            ("schoenberg", 1e-8),
            ("cocycle", crate::cocycle::DEFAULT_COCYCLE_TOL),
            ("residual", 1e-8),
            ("roundtrip", 1e-10),
            ("reconstruction", 1e-9),
            ("ks", crate::algebra::KS_TOLERANCE),
            ("l2law", 1e-9),
            ("gamma", 1e-10),
        ] {
            map.insert(k.to_string(), v);
        }
        Tolerances { map }
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        *self.map.get(name).unwrap_or_else(|| panic!("unknown tolerance '{name}'"))
    }

    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for o in overrides {
            let Some((k, v)) = o.split_once('=') else {
                return Err(Error::Usage(format!("tolerance override '{o}' is not K=V")));
            };
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Usage(format!("bad tolerance value in '{o}'")))?;
            if !self.map.contains_key(k) {
                return Err(Error::Usage(format!(
                    "unknown tolerance '{k}'; known: {}",
                    self.map.keys().cloned().collect::<Vec<_>>().join(", ")
                )));
            }
            self.map.insert(k.to_string(), v);
        }
        Ok(())
    }
}
