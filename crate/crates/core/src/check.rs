//! Tolerances, signed comparisons and the strict-contraction gate shared by
//! every inequality check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// Inequality tolerance and strict-contraction margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// `x ≤ y` passes iff `x ≤ y + tol·(1 + |y|)`.
    pub tol: f64,
    /// Strict contraction means `1 − σ₁ ≥ margin`.
    pub margin: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl Settings {
    pub fn new(tol: f64, margin: f64) -> Self {
        Self { tol, margin }
    }

    pub fn allowance(&self, bound: f64) -> f64 {
        self.tol * (1.0 + bound.abs())
    }

    /// Singular values of `a`, or `NotContractive` if `1 − σ₁ < margin`.
    pub fn contraction_singular_values(&self, a: &ComplexMatrix) -> Result<Vec<f64>> {
        let r = singular_values(a);
        if 1.0 - r[0] < self.margin {
            return Err(Error::NotContractive {
                sigma1: r[0],
                margin: self.margin,
            });
        }
        Ok(r)
    }

    pub fn at_most(&self, value: f64, bound: f64) -> Comparison {
        Comparison::new(value, bound, Relation::AtMost, self.allowance(bound))
    }

    pub fn at_least(&self, value: f64, bound: f64) -> Comparison {
        Comparison::new(value, bound, Relation::AtLeast, self.allowance(bound))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Approx,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Approx => "~=",
        }
    }
}

/// One evaluated inequality. `slack` is signed so that `slack ≥ −allowance`
/// means the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub slack: f64,
    pub holds: bool,
}

impl Comparison {
    pub fn new(value: f64, bound: f64, relation: Relation, allowance: f64) -> Self {
        let slack = match relation {
            Relation::AtMost => bound - value,
            Relation::AtLeast => value - bound,
            Relation::Approx => -(value - bound).abs(),
        };
        Self {
            value,
            bound,
            relation,
            slack,
            holds: slack >= -allowance,
        }
    }
}
