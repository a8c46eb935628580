use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::model::{Objective, Point};

/// Witness lists are cut to this length after sorting.
pub const MAX_WITNESSES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Violation,
    /// A near-tie where a strict inequality was claimed.
    Strictness,
}

/// A concrete input on which a claimed inequality `lhs >= rhs` (or `>` for
/// strict claims) fails. `margin = rhs - lhs + offset > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationWitness {
    pub property: String,
    pub kind: WitnessKind,
    pub function_id: String,
    pub x0: Option<Point>,
    pub delta: Option<f64>,
    /// Points the two sides were evaluated at, `lhs` first.
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
    pub offset: f64,
    pub margin: f64,
}

impl ViolationWitness {
    pub fn new(
        property: &str,
        function_id: &str,
        points: Vec<Point>,
        lhs: f64,
        rhs: f64,
        offset: f64,
    ) -> Self {
        ViolationWitness {
            property: property.to_string(),
            kind: WitnessKind::Violation,
            function_id: function_id.to_string(),
            x0: None,
            delta: None,
            points,
            lhs,
            rhs,
            offset,
            margin: rhs - lhs + offset,
        }
    }

    pub fn strictness(mut self) -> Self {
        self.kind = WitnessKind::Strictness;
        self
    }

    pub fn at(mut self, x0: &Point, delta: Option<f64>) -> Self {
        self.x0 = Some(x0.clone());
        self.delta = delta;
        self
    }

    /// Recomputes the margin of a two-point witness by evaluating `obj` at the
    /// recorded points.
    pub fn replay(&self, obj: &Objective) -> Result<f64> {
        let lhs = obj.evaluate(&self.points[0])?.to_f64();
        let rhs = obj.evaluate(&self.points[1])?.to_f64();
        Ok(rhs - lhs + self.offset)
    }

    fn order(&self, other: &Self) -> std::cmp::Ordering {
        other.margin.total_cmp(&self.margin).then_with(|| {
            for (a, b) in self.points.iter().zip(&other.points) {
                let c = a.lex_cmp(b);
                if c.is_ne() {
                    return c;
                }
            }
            self.points.len().cmp(&other.points.len())
        })
    }
}

/// Named scalar reported alongside a check, e.g. an envelope value at a probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub x: Option<Point>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub function_id: String,
    pub passed: bool,
    pub instances: usize,
    /// Total before truncation.
    pub violation_count: usize,
    pub violations: Vec<ViolationWitness>,
    pub tie_count: usize,
    pub ties: Vec<ViolationWitness>,
    pub diagnostics: Vec<Diagnostic>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(property: &str, function_id: &str) -> Self {
        CheckReport {
            property: property.to_string(),
            function_id: function_id.to_string(),
            passed: true,
            instances: 0,
            violation_count: 0,
            violations: Vec::new(),
            tie_count: 0,
            ties: Vec::new(),
            diagnostics: Vec::new(),
            seed: None,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn push(&mut self, w: ViolationWitness) {
        match w.kind {
            WitnessKind::Violation => self.violations.push(w),
            WitnessKind::Strictness => self.ties.push(w),
        }
    }

    pub fn diagnostic(&mut self, name: &str, x: Option<Point>, value: f64) {
        self.diagnostics.push(Diagnostic {
            name: name.to_string(),
            x,
            value,
        });
    }

    /// Sorts witnesses canonically, truncates, and sets `passed`.
    pub fn finish(mut self) -> Self {
        for list in [&mut self.violations, &mut self.ties] {
            list.sort_by(ViolationWitness::order);
        }
        self.violation_count = self.violations.len();
        self.tie_count = self.ties.len();
        self.violations.truncate(MAX_WITNESSES);
        self.ties.truncate(MAX_WITNESSES);
        self.passed = self.violation_count == 0;
        self
    }
}
