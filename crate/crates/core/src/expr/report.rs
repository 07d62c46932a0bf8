//! Plain-text reports: one `[result]` section of `key = value` lines, then
//! one `[check]` section per check.

use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Vec<(String, String)>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            details: Vec::new(),
        }
    }

    pub fn detail(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub result: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.result.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend_checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.result.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from("[result]\n");
        for (k, v) in &self.result {
            let _ = writeln!(out, "{k} = {v}");
        }
        for c in &self.checks {
            let _ = write!(out, "\n[check]\nname = {}\nstatus = {}\n", c.name, c.status());
            for (k, v) in &c.details {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    /// Flat key/value view: result keys as they are, check fields as
    /// `check.<name>.<field>`.
    pub fn flatten(&self) -> Vec<(String, String)> {
        let mut out = self.result.clone();
        for c in &self.checks {
            out.push((format!("check.{}.status", c.name), c.status().to_string()));
            for (k, v) in &c.details {
                out.push((format!("check.{}.{k}", c.name), v.clone()));
            }
        }
        out
    }
}
