//! Machine-readable check reports.
//!
//! Every law check in the crate produces a [`CheckReport`]. Reports are
//! deterministic: violations are sorted and deduplicated, witness bindings
//! live in a `BTreeMap`, so two runs on identical input serialize to the
//! same bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    InputError,
}

impl Status {
    /// Pass and not-applicable both count as success for exit codes.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::NotApplicable)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::InputError => "input-error",
        };
        f.write_str(s)
    }
}

/// One violated law instance, or one skipped instance, with named witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: BTreeMap<String, String>,
}

impl Violation {
    pub fn new<K, V>(law: impl Into<String>, witness: impl IntoIterator<Item = (K, V)>) -> Self
    where
        K: Into<String>,
        V: Into<String>,
    {
        Violation {
            law: law.into(),
            witness: witness.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// True if any witness binding has the given value.
    pub fn mentions(&self, value: &str) -> bool {
        self.witness.values().any(|v| v == value)
    }
}

/// Bounds on the diagram shapes a finite-scale check quantified over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_shape_objects: usize,
    pub max_nonidentity_arrows: usize,
    pub shapes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub violations: Vec<Violation>,
    /// Instances that were skipped: missing (co)limits, unmet hypotheses.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub not_applicable: Vec<Violation>,
    /// Number of law instances evaluated, keyed by law tag.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub checked: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            status: Status::Pass,
            violations: Vec::new(),
            not_applicable: Vec::new(),
            checked: BTreeMap::new(),
            truncation: None,
        }
    }

    pub fn input_error(check: impl Into<String>, message: impl Into<String>) -> Self {
        let mut r = CheckReport::new(check);
        r.status = Status::InputError;
        r.violations
            .push(Violation::new("input", [("message", message.into())]));
        r
    }

    pub fn violation<K, V>(&mut self, law: &str, witness: impl IntoIterator<Item = (K, V)>)
    where
        K: Into<String>,
        V: Into<String>,
    {
        self.violations.push(Violation::new(law, witness));
    }

    pub fn skip<K, V>(&mut self, tag: &str, witness: impl IntoIterator<Item = (K, V)>)
    where
        K: Into<String>,
        V: Into<String>,
    {
        self.not_applicable.push(Violation::new(tag, witness));
    }

    /// Record one evaluated instance of `law`.
    pub fn tick(&mut self, law: &str) {
        *self.checked.entry(law.to_string()).or_insert(0) += 1;
    }

    /// Record an instance and, if `holds` is false, a violation.
    pub fn expect<K, V>(&mut self, law: &str, holds: bool, witness: impl FnOnce() -> Vec<(K, V)>)
    where
        K: Into<String>,
        V: Into<String>,
    {
        self.tick(law);
        if !holds {
            self.violation(law, witness());
        }
    }

    /// Fold another report's findings into this one, prefixing law tags.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        let tag = |law: String| {
            if prefix.is_empty() {
                law
            } else {
                format!("{prefix}/{law}")
            }
        };
        for mut v in other.violations {
            v.law = tag(v.law);
            self.violations.push(v);
        }
        for mut v in other.not_applicable {
            v.law = tag(v.law);
            self.not_applicable.push(v);
        }
        for (k, n) in other.checked {
            *self.checked.entry(tag(k)).or_insert(0) += n;
        }
    }

    /// Sort, dedupe and settle the status. Idempotent.
    pub fn finish(mut self) -> Self {
        if self.status == Status::InputError {
            return self;
        }
        self.violations.sort();
        self.violations.dedup();
        self.not_applicable.sort();
        self.not_applicable.dedup();
        let evaluated: usize = self.checked.values().sum();
        self.status = if !self.violations.is_empty() {
            Status::Fail
        } else if evaluated == 0 && !self.not_applicable.is_empty() {
            Status::NotApplicable
        } else {
            Status::Pass
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_ok()
    }

    pub fn violations_of<'a>(&'a self, law: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations
            .iter()
            .filter(move |v| v.law == law || v.law.starts_with(&format!("{law}/")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.check, self.status);
        if let Some(t) = &self.truncation {
            out.push_str(&format!(
                "  finite scale: shapes {} (<= {} objects, <= {} non-identity arrows)\n",
                t.shapes.join(", "),
                t.max_shape_objects,
                t.max_nonidentity_arrows
            ));
        }
        for (law, n) in &self.checked {
            out.push_str(&format!("  checked {law}: {n}\n"));
        }
        for v in &self.violations {
            out.push_str(&format!("  FAIL {} {}\n", v.law, fmt_witness(&v.witness)));
        }
        for v in &self.not_applicable {
            out.push_str(&format!("  n/a  {} {}\n", v.law, fmt_witness(&v.witness)));
        }
        out
    }
}

fn fmt_witness(w: &BTreeMap<String, String>) -> String {
    let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}
