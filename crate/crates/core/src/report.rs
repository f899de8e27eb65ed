//! Structured results of axiom and theorem checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{IntBox, Point};

/// At most this many witnesses and counterexamples are stored per report; the
/// totals are kept in the universe counters.
pub const EVIDENCE_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub points: Vec<Point>,
    pub values: Vec<i64>,
}

impl Evidence {
    pub fn new(label: impl Into<String>, points: Vec<Point>, values: Vec<i64>) -> Self {
        Evidence {
            label: label.into(),
            points,
            values,
        }
    }

    pub fn describe(&self) -> String {
        let pts: Vec<String> = self.points.iter().map(Point::to_string).collect();
        if self.values.is_empty() {
            pts.join(" ")
        } else {
            format!("{} values {:?}", pts.join(" "), self.values)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedBox {
    pub name: String,
    pub bounds: IntBox,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    pub boxes: Vec<NamedBox>,
    pub points_checked: u64,
    pub witness_count: u64,
    pub counterexample_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Invariant: `passed == counterexamples.is_empty()`; construct through
/// [`ReportBuilder`] to keep it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub passed: bool,
    pub universe: Universe,
    pub witnesses: Vec<Evidence>,
    pub counterexamples: Vec<Evidence>,
    pub flags: BTreeMap<String, bool>,
}

impl CheckReport {
    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.get(name).copied()
    }

    pub fn equality_everywhere(&self) -> Option<bool> {
        self.flag("equality_everywhere")
    }

    pub fn witness(&self, label: &str) -> Option<&Evidence> {
        self.witnesses.iter().find(|w| w.label == label)
    }

    pub fn counterexample(&self, label: &str) -> Option<&Evidence> {
        self.counterexamples.iter().find(|w| w.label == label)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.check_name,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        for (name, value) in &self.flags {
            writeln!(f, "  {name}: {value}")?;
        }
        for b in &self.universe.boxes {
            writeln!(f, "  universe {}: {}", b.name, b.bounds)?;
        }
        writeln!(f, "  points checked: {}", self.universe.points_checked)?;
        if let Some(seed) = self.universe.seed {
            writeln!(f, "  seed: {seed}")?;
        }
        for note in &self.universe.notes {
            writeln!(f, "  note: {note}")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  witness {}: {}", w.label, w.describe())?;
        }
        if self.universe.witness_count > self.witnesses.len() as u64 {
            writeln!(f, "  ({} witnesses in total)", self.universe.witness_count)?;
        }
        for c in &self.counterexamples {
            writeln!(f, "  counterexample {}: {}", c.label, c.describe())?;
        }
        if self.universe.counterexample_count > self.counterexamples.len() as u64 {
            writeln!(
                f,
                "  ({} counterexamples in total)",
                self.universe.counterexample_count
            )?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct ReportBuilder {
    report: CheckReport,
}

impl ReportBuilder {
    pub fn new(check_name: impl Into<String>) -> Self {
        ReportBuilder {
            report: CheckReport {
                check_name: check_name.into(),
                passed: true,
                universe: Universe::default(),
                witnesses: Vec::new(),
                counterexamples: Vec::new(),
                flags: BTreeMap::new(),
            },
        }
    }

    pub fn boxed(&mut self, name: impl Into<String>, bounds: &IntBox) -> &mut Self {
        self.report.universe.boxes.push(NamedBox {
            name: name.into(),
            bounds: bounds.clone(),
        });
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.report.universe.seed = Some(seed);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.report.universe.notes.push(note.into());
        self
    }

    pub fn checked(&mut self, n: u64) -> &mut Self {
        self.report.universe.points_checked += n;
        self
    }

    pub fn witness(&mut self, ev: Evidence) -> &mut Self {
        self.report.universe.witness_count += 1;
        if self.report.witnesses.len() < EVIDENCE_CAP {
            self.report.witnesses.push(ev);
        }
        self
    }

    pub fn counterexample(&mut self, ev: Evidence) -> &mut Self {
        self.report.universe.counterexample_count += 1;
        if self.report.counterexamples.len() < EVIDENCE_CAP {
            self.report.counterexamples.push(ev);
        }
        self
    }

    pub fn flag(&mut self, name: impl Into<String>, value: bool) -> &mut Self {
        self.report.flags.insert(name.into(), value);
        self
    }

    pub fn has_counterexamples(&self) -> bool {
        !self.report.counterexamples.is_empty()
    }

    pub fn finish(self) -> CheckReport {
        let mut report = self.report;
        report.passed = report.counterexamples.is_empty();
        report
    }
}

/// Several reports produced by one command, e.g. `check all`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub check_name: String,
    pub passed: bool,
    pub reports: Vec<CheckReport>,
}

impl ReportBundle {
    pub fn new(check_name: impl Into<String>, reports: Vec<CheckReport>) -> Self {
        ReportBundle {
            check_name: check_name.into(),
            passed: reports.iter().all(|r| r.passed),
            reports,
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.check_name == name)
    }
}

impl fmt::Display for ReportBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reports {
            write!(f, "{r}")?;
        }
        writeln!(
            f,
            "{}: {}",
            self.check_name,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_counterexamples() {
        let mut b = ReportBuilder::new("x");
        b.witness(Evidence::new("w", vec![Point::from([1])], vec![]));
        assert!(b.clone_finish().passed);
        for _ in 0..40 {
            b.counterexample(Evidence::new("c", vec![], vec![1]));
        }
        let r = b.finish();
        assert!(!r.passed);
        assert_eq!(r.counterexamples.len(), EVIDENCE_CAP);
        assert_eq!(r.universe.counterexample_count, 40);
    }

    #[test]
    fn json_roundtrip() {
        let mut b = ReportBuilder::new("rho");
        b.flag("equality_everywhere", false)
            .seed(7)
            .witness(Evidence::new("strict", vec![Point::from([0, 0])], vec![3]));
        let r = b.finish();
        let text = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["flags"]["equality_everywhere"], false);
        assert_eq!(v["witnesses"][0]["points"][0], serde_json::json!([0, 0]));
    }

    impl ReportBuilder {
        fn clone_finish(&self) -> CheckReport {
            ReportBuilder {
                report: self.report.clone(),
            }
            .finish()
        }
    }
}
