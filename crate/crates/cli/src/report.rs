//! Command output: sections of key/value lines and checks, rendered as
//! aligned text or as a JSON record.

use serde::Serialize;

use wdparity_core::{CheckItem, IdentityCheck};

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub values: Vec<Entry>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl From<CheckItem> for Check {
    fn from(c: CheckItem) -> Self {
        Check {
            name: c.name.into(),
            passed: c.passed,
            detail: c.detail,
        }
    }
}

impl From<IdentityCheck> for Check {
    fn from(c: IdentityCheck) -> Self {
        Check {
            name: c.name.into(),
            passed: c.passed,
            detail: format!("{} = {}", c.lhs, c.rhs),
        }
    }
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            ..Section::default()
        }
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.values.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        self
    }

    pub fn checks_from<C: Into<Check>>(&mut self, items: impl IntoIterator<Item = C>) -> &mut Self {
        self.checks.extend(items.into_iter().map(Into::into));
        self
    }

    /// Records a computation that failed outright.
    pub fn failure(&mut self, name: impl Into<String>, err: impl ToString) -> &mut Self {
        self.check(name, false, err.to_string())
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.sections.iter().flat_map(|s| &s.checks)
    }

    /// Every check passed, and under `strict` there are no warnings.
    pub fn passed(&self, strict: bool) -> bool {
        self.checks().all(|c| c.passed) && !(strict && !self.warnings.is_empty())
    }

    /// Looks up the first value with this key in any section.
    pub fn value(&self, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .flat_map(|s| &s.values)
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    pub fn to_text(&self, strict: bool) -> String {
        let mut out = String::new();
        for s in &self.sections {
            out.push_str(&format!("== {}\n", s.title));
            let width = s.values.iter().map(|e| e.key.len()).max().unwrap_or(0);
            for e in &s.values {
                out.push_str(&format!("  {:width$} = {}\n", e.key, e.value));
            }
            for c in &s.checks {
                let tag = if c.passed { "pass" } else { "FAIL" };
                if c.detail.is_empty() {
                    out.push_str(&format!("  [{tag}] {}\n", c.name));
                } else {
                    out.push_str(&format!("  [{tag}] {}: {}\n", c.name, c.detail));
                }
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        let total = self.checks().count();
        let failed = self.checks().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{}: {} of {total} checks passed, {} warnings\n",
            if self.passed(strict) { "OK" } else { "FAILED" },
            total - failed,
            self.warnings.len()
        ));
        out
    }

    pub fn to_record(&self, strict: bool) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            #[serde(flatten)]
            report: &'a Report,
            passed: bool,
        }
        let mut out = serde_json::to_string_pretty(&Record {
            report: self,
            passed: self.passed(strict),
        })
        .expect("reports serialize");
        out.push('\n');
        out
    }
}
