//! Flat pass/fail records shared by the CLI commands, with a plain-text table
//! renderer whose numbers round-trip to the values in the JSON.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::check::{Comparison, Relation, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckRelation {
    /// `|computed − expected| ≤ tolerance`
    Approx,
    /// `computed ≤ expected + tolerance`
    AtMost,
    /// `computed ≥ expected − tolerance`
    AtLeast,
    /// `computed < expected`
    Below,
    /// `computed > expected`
    Above,
}

impl CheckRelation {
    pub fn symbol(self) -> &'static str {
        match self {
            CheckRelation::Approx => "~=",
            CheckRelation::AtMost => "<=",
            CheckRelation::AtLeast => ">=",
            CheckRelation::Below => "<",
            CheckRelation::Above => ">",
        }
    }

    fn holds(self, computed: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            CheckRelation::Approx => (computed - expected).abs() <= tolerance,
            CheckRelation::AtMost => computed <= expected + tolerance,
            CheckRelation::AtLeast => computed >= expected - tolerance,
            CheckRelation::Below => computed < expected,
            CheckRelation::Above => computed > expected,
        }
    }
}

impl From<Relation> for CheckRelation {
    fn from(r: Relation) -> Self {
        match r {
            Relation::AtMost => CheckRelation::AtMost,
            Relation::AtLeast => CheckRelation::AtLeast,
            Relation::Approx => CheckRelation::Approx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Absent when the quantity could not be evaluated (see `detail`).
    pub computed: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub relation: CheckRelation,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn evaluate(
        name: impl Into<String>,
        computed: f64,
        relation: CheckRelation,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            computed: Some(computed),
            expected: Some(expected),
            tolerance,
            relation,
            pass: computed.is_finite() && relation.holds(computed, expected, tolerance),
            detail: None,
        }
    }

    /// Exact comparison of rationals; the stored floats are for display.
    pub fn exact(
        name: impl Into<String>,
        computed: &Ratio<i64>,
        relation: CheckRelation,
        expected: &Ratio<i64>,
        tolerance: f64,
    ) -> Self {
        let gap = computed - expected;
        let pass = match relation {
            CheckRelation::Approx => gap.abs().to_f64().is_some_and(|g| g <= tolerance),
            CheckRelation::AtMost => gap.to_f64().is_some_and(|g| g <= tolerance),
            CheckRelation::AtLeast => gap.to_f64().is_some_and(|g| g >= -tolerance),
            CheckRelation::Below => computed < expected,
            CheckRelation::Above => computed > expected,
        };
        Self {
            name: name.into(),
            computed: computed.to_f64(),
            expected: expected.to_f64(),
            tolerance,
            relation,
            pass,
            detail: Some(format!("{computed} {} {expected}", relation.symbol())),
        }
    }

    pub fn from_comparison(name: impl Into<String>, c: &Comparison, settings: &Settings) -> Self {
        Self {
            name: name.into(),
            computed: Some(c.value),
            expected: Some(c.bound),
            tolerance: settings.allowance(c.bound),
            relation: c.relation.into(),
            pass: c.holds,
            detail: None,
        }
    }

    pub fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            computed: None,
            expected: None,
            tolerance: 0.0,
            relation: CheckRelation::Approx,
            pass: false,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub overall_pass: bool,
    pub duration_ms: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, checks: Vec<CheckRecord>, duration_ms: f64) -> Self {
        let overall_pass = checks.iter().all(|c| c.pass);
        Self {
            command,
            checks,
            overall_pass,
            duration_ms,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render_table(&self) -> String {
        let cell = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:?}"));
        let rows: Vec<[String; 6]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    cell(c.computed),
                    c.relation.symbol().to_string(),
                    cell(c.expected),
                    format!("{:?}", c.tolerance),
                    if c.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let header = ["check", "computed", "rel", "expected", "tol", "result"];
        let mut width = header.map(str::len);
        for row in &rows {
            for (w, s) in width.iter_mut().zip(row) {
                *w = (*w).max(s.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        let line = |out: &mut String, cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&width)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &header.map(String::from));
        for (row, c) in rows.iter().zip(&self.checks) {
            line(&mut out, row);
            if let (false, Some(d)) = (c.pass, &c.detail) {
                let _ = writeln!(out, "    {d}");
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "overall: {} ({} checks, {} failed) in {:.3} ms",
            if self.overall_pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed,
            self.duration_ms
        );
        out
    }
}
