//! Evaluators for the open eigenvalue lower bounds on `Re((I−A)⁻¹)`, the
//! weaker bounds that are known to hold, and the settled special cases.
//!
//! The central quantity is the per-index slack
//! `λ_j(Re((I−A)⁻¹)) − λ_j((I+|A|)⁻¹)`, where
//! `λ_j((I+|A|)⁻¹) = 1/(1+r_{n−j+1})`.

mod search;

use serde::{Deserialize, Serialize};

use crate::check::{Comparison, Settings};
use crate::error::Result;
use crate::harnack::{harnack_quotient, resolvent};
use crate::linalg::{
    general_eigenvalues, hermitian_eigenvalues, inverse, polar_abs, singular_values, Complex,
    ComplexMatrix, GenerationMode,
};

pub use search::{
    search, DescentSummary, ModeHistogram, SearchConfig, SearchOutcome, SearchSummary,
    HISTOGRAM_EDGES, VIOLATION_THRESHOLD,
};

/// Slacks of the per-index conjecture for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub matrix: ComplexMatrix,
    /// `λ_j(Re((I−A)⁻¹)) − 1/(1+r_{n−j+1})`, j = 1..n.
    pub slacks: Vec<f64>,
    pub min_slack: f64,
    /// 1-based index attaining `min_slack` (lowest such index).
    pub min_j: usize,
    /// `‖Re((I−A)⁻¹)‖ − ‖(I+|A|)⁻¹‖`.
    pub norm_slack: f64,
    pub trial_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<GenerationMode>,
}

impl ConjectureRecord {
    /// Rebuilds `min_slack`/`min_j` from `slacks`.
    pub fn refresh_minimum(&mut self) {
        let (j, s) = self
            .slacks
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (j, s)| if s < best.1 { (j, s) } else { best });
        self.min_slack = s;
        self.min_j = j + 1;
    }

    pub fn is_violation(&self) -> bool {
        self.min_slack < VIOLATION_THRESHOLD
    }
}

pub fn j_conjecture_slack(a: &ComplexMatrix, settings: &Settings) -> Result<ConjectureRecord> {
    let r = settings.contraction_singular_values(a)?;
    let n = r.len();
    let re_resolvent = resolvent(a)?.real_part();
    let lam = hermitian_eigenvalues(&re_resolvent)?;
    let slacks: Vec<f64> = (0..n).map(|j| lam[j] - 1.0 / (1.0 + r[n - 1 - j])).collect();
    let norm = singular_values(&re_resolvent)[0];
    let mut rec = ConjectureRecord {
        matrix: a.clone(),
        slacks,
        min_slack: 0.0,
        min_j: 1,
        norm_slack: norm - 1.0 / (1.0 + r[n - 1]),
        trial_seed: 0,
        mode: None,
    };
    rec.refresh_minimum();
    Ok(rec)
}

/// Slacks of the companion statement for `H(A)`:
/// `λ_j(H(A)) − (1−r_{n−j+1})/(1+r_{n−j+1})`.
pub fn harnack_form_slacks(a: &ComplexMatrix, settings: &Settings) -> Result<Vec<f64>> {
    let r = settings.contraction_singular_values(a)?;
    let n = r.len();
    let lam = hermitian_eigenvalues(&harnack_quotient(a)?)?;
    Ok((0..n)
        .map(|j| {
            let s = r[n - 1 - j];
            lam[j] - (1.0 - s) / (1.0 + s)
        })
        .collect())
}

/// The `j = 1` statement rewritten through `(I−A)⁻¹ = I + (I−A)⁻¹A`:
/// `λ₁(Re((I−A)⁻¹A)) ≥ −rₙ/(1+rₙ)`.
pub fn shifted_norm_form(a: &ComplexMatrix, settings: &Settings) -> Result<Comparison> {
    let r = settings.contraction_singular_values(a)?;
    let rn = *r.last().expect("n >= 1");
    let lam = hermitian_eigenvalues(&(&resolvent(a)? * a).real_part())?;
    Ok(settings.at_least(lam[0], -rn / (1.0 + rn)))
}

/// Loewner comparisons of `(I−A*)⁻¹+(I−A)⁻¹` with `2(I−|A|)⁻¹` (above) and
/// `2(I+|A|)⁻¹` (below).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoewnerReport {
    pub resolvent_sum: ComplexMatrix,
    pub upper_reference: ComplexMatrix,
    pub lower_reference: ComplexMatrix,
    /// `λₙ(2(I−|A|)⁻¹ − sum)`.
    pub upper_gap_min_eigenvalue: f64,
    /// `λₙ(sum − 2(I+|A|)⁻¹)`.
    pub lower_gap_min_eigenvalue: f64,
    pub upper_order_holds: bool,
    pub lower_order_holds: bool,
}

const PSD_TOLERANCE: f64 = 1e-10;

pub fn loewner_counterexample_check(a: &ComplexMatrix, settings: &Settings) -> Result<LoewnerReport> {
    settings.contraction_singular_values(a)?;
    let r = resolvent(a)?;
    let sum = &r + &r.adjoint();
    let abs = polar_abs(a);
    let upper_reference = inverse(&abs.identity_minus())?.scale_real(2.0).real_part();
    let lower_reference = inverse(&abs.shift(1.0.into()))?.scale_real(2.0).real_part();
    let upper_gap = hermitian_eigenvalues(&(&upper_reference - &sum))?;
    let lower_gap = hermitian_eigenvalues(&(&sum - &lower_reference))?;
    let upper_min = *upper_gap.last().expect("n >= 1");
    let lower_min = *lower_gap.last().expect("n >= 1");
    Ok(LoewnerReport {
        resolvent_sum: sum,
        upper_reference,
        lower_reference,
        upper_gap_min_eigenvalue: upper_min,
        lower_gap_min_eigenvalue: lower_min,
        upper_order_holds: upper_min >= -PSD_TOLERANCE,
        lower_order_holds: lower_min >= -PSD_TOLERANCE,
    })
}

/// Proven lower bounds at index j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakBoundRow {
    pub j: usize,
    /// `λ_j(Re((I−A)⁻¹)) ≥ 1/(1+s) − (r₁²−s²)/(2(1+s)²)` with `s = r_{n−j+1}`.
    pub shifted: Comparison,
    /// `λ_j(Re((I−A)⁻¹)) ≥ 1/(1+r₁) + (r₁²−s²)/(2(1+r₁)²)`.
    pub uniform: Comparison,
    /// `λ_j(H(A)) ≥ (1−s²)/(1+r₁)²`.
    pub harnack: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakBoundsReport {
    pub rows: Vec<WeakBoundRow>,
    /// `‖Re((I−A)⁻¹)‖ ≥ ‖(I+|A|)⁻¹‖ − (r₁²−rₙ²)/(2(1+rₙ)²)`.
    pub norm: Comparison,
}

impl WeakBoundsReport {
    pub fn all_hold(&self) -> bool {
        self.norm.holds
            && self
                .rows
                .iter()
                .all(|r| r.shifted.holds && r.uniform.holds && r.harnack.holds)
    }
}

pub fn weak_bounds_check(a: &ComplexMatrix, settings: &Settings) -> Result<WeakBoundsReport> {
    let r = settings.contraction_singular_values(a)?;
    let n = r.len();
    let r1 = r[0];
    let re_resolvent = resolvent(a)?.real_part();
    let lam = hermitian_eigenvalues(&re_resolvent)?;
    let lam_h = hermitian_eigenvalues(&harnack_quotient(a)?)?;
    let rows = (1..=n)
        .map(|j| {
            let s = r[n - j];
            let gap = r1 * r1 - s * s;
            WeakBoundRow {
                j,
                shifted: settings.at_least(lam[j - 1], 1.0 / (1.0 + s) - gap / (2.0 * (1.0 + s).powi(2))),
                uniform: settings.at_least(lam[j - 1], 1.0 / (1.0 + r1) + gap / (2.0 * (1.0 + r1).powi(2))),
                harnack: settings.at_least(lam_h[j - 1], (1.0 - s * s) / (1.0 + r1).powi(2)),
            }
        })
        .collect();
    let rn = r[n - 1];
    let norm_value = singular_values(&re_resolvent)[0];
    let norm_bound = 1.0 / (1.0 + rn) - (r1 * r1 - rn * rn) / (2.0 * (1.0 + rn).powi(2));
    Ok(WeakBoundsReport {
        rows,
        norm: settings.at_least(norm_value, norm_bound),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// Normal contractions: every index.
    Normal,
    /// Any contraction: the last index.
    LastIndex,
    /// Singular contractions: the first index.
    SingularFirstIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseVerdict {
    pub case: SpecialCase,
    pub indices: Vec<usize>,
    pub min_slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCaseReport {
    pub is_normal: bool,
    pub is_singular: bool,
    pub cases: Vec<CaseVerdict>,
    /// `λ₁((I+|A|)⁻¹)`, equal to 1 for singular input.
    pub top_reference: f64,
}

impl SpecialCaseReport {
    pub fn all_hold(&self) -> bool {
        self.cases.iter().all(|c| c.holds)
    }

    pub fn case(&self, which: SpecialCase) -> Option<&CaseVerdict> {
        self.cases.iter().find(|c| c.case == which)
    }
}

const CASE_TOLERANCE: f64 = 1e-9;

pub fn special_case_check(a: &ComplexMatrix, settings: &Settings) -> Result<SpecialCaseReport> {
    let rec = j_conjecture_slack(a, settings)?;
    let r = singular_values(a);
    let n = r.len();
    let scale = 1.0 + a.frobenius_norm().powi(2);
    let is_normal = a.normality_defect() <= CASE_TOLERANCE * scale;
    let is_singular = r[n - 1] <= CASE_TOLERANCE;
    let verdict = |case, indices: Vec<usize>| {
        let min_slack = indices
            .iter()
            .map(|&j| rec.slacks[j - 1])
            .fold(f64::INFINITY, f64::min);
        CaseVerdict {
            case,
            indices,
            min_slack,
            holds: min_slack >= -CASE_TOLERANCE,
        }
    };
    let mut cases = Vec::new();
    if is_normal {
        cases.push(verdict(SpecialCase::Normal, (1..=n).collect()));
    }
    cases.push(verdict(SpecialCase::LastIndex, vec![n]));
    if is_singular {
        cases.push(verdict(SpecialCase::SingularFirstIndex, vec![1]));
    }
    Ok(SpecialCaseReport {
        is_normal,
        is_singular,
        cases,
        top_reference: 1.0 / (1.0 + r[n - 1]),
    })
}

/// Whether some eigenvalue `λ` of `A` has `Re((1−λ)⁻¹) ≥ 1/(1+rₙ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventReport {
    pub eigenvalues: Vec<Complex>,
    pub max_re_resolvent: f64,
    /// `1/(1+rₙ)`.
    pub threshold: f64,
    /// `‖Re((I−A)⁻¹)‖`.
    pub norm_value: f64,
}

impl ResolventReport {
    pub fn eigenvalue_route_succeeds(&self) -> bool {
        self.max_re_resolvent >= self.threshold
    }
}

pub fn eigen_resolvent_check(a: &ComplexMatrix) -> Result<ResolventReport> {
    let re_resolvent = resolvent(a)?.real_part();
    let eigenvalues = general_eigenvalues(a)?;
    let one = Complex::new(1.0, 0.0);
    let max_re_resolvent = eigenvalues
        .iter()
        .map(|&l| (one / (one - l)).re)
        .fold(f64::NEG_INFINITY, f64::max);
    let rn = *singular_values(a).last().expect("n >= 1");
    Ok(ResolventReport {
        eigenvalues,
        max_re_resolvent,
        threshold: 1.0 / (1.0 + rn),
        norm_value: singular_values(&re_resolvent)[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 0.1], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn imaginary_scalar() {
        let a = ComplexMatrix::diag(&[Complex::new(0.0, 0.5)]);
        let rec = j_conjecture_slack(&a, &Settings::default()).unwrap();
        assert!((rec.slacks[0] - 2.0 / 15.0).abs() < 1e-15);
        assert!((rec.norm_slack - 2.0 / 15.0).abs() < 1e-15);
        assert_eq!(rec.min_j, 1);
    }

    #[test]
    fn nilpotent_norm_form() {
        let c = shifted_norm_form(&nilpotent(), &Settings::default()).unwrap();
        assert!((c.value - 0.05).abs() < 1e-15);
        assert_eq!(c.bound, 0.0);
        assert!(c.holds);
    }

    #[test]
    fn nilpotent_breaks_both_loewner_orders() {
        let rep = loewner_counterexample_check(&nilpotent(), &Settings::default()).unwrap();
        let sum = ComplexMatrix::from_real_rows(&[vec![2.0, 0.1], vec![0.1, 2.0]]).unwrap();
        assert!(rep.resolvent_sum.distance(&sum) < 1e-12);
        assert!(rep.upper_reference.distance(&ComplexMatrix::diag_real(&[2.0, 20.0 / 9.0])) < 1e-12);
        assert!(!rep.upper_order_holds);
        assert!(!rep.lower_order_holds);
    }

    #[test]
    fn normal_scalar_keeps_both_orders() {
        let rep = loewner_counterexample_check(&ComplexMatrix::diag_real(&[0.5]), &Settings::default()).unwrap();
        assert!(rep.upper_order_holds && rep.lower_order_holds);
        assert!(rep.upper_gap_min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn weak_bounds_at_zero_are_tight() {
        let rep = weak_bounds_check(&ComplexMatrix::zeros(3), &Settings::default()).unwrap();
        assert!(rep.all_hold());
        for row in &rep.rows {
            for c in [&row.shifted, &row.uniform, &row.harnack] {
                assert_eq!((c.value, c.bound), (1.0, 1.0));
            }
        }
    }

    #[test]
    fn special_cases_detected() {
        let s = Settings::default();
        let normal = special_case_check(&ComplexMatrix::diag_real(&[0.5, -0.3]), &s).unwrap();
        assert!(normal.is_normal && !normal.is_singular);
        assert!(normal.case(SpecialCase::Normal).is_some());
        assert!(normal.all_hold());

        let singular = special_case_check(&nilpotent(), &s).unwrap();
        assert!(!singular.is_normal && singular.is_singular);
        assert_eq!(singular.top_reference, 1.0);
        assert!(singular.case(SpecialCase::SingularFirstIndex).unwrap().holds);
    }

    #[test]
    fn eigen_resolvent_simple_cases() {
        let rep = eigen_resolvent_check(&ComplexMatrix::diag_real(&[0.5])).unwrap();
        assert_eq!(rep.max_re_resolvent, 2.0);
        assert!((rep.threshold - 2.0 / 3.0).abs() < 1e-15);
        let zero = eigen_resolvent_check(&ComplexMatrix::zeros(2)).unwrap();
        assert_eq!((zero.max_re_resolvent, zero.threshold), (1.0, 1.0));
        assert!((zero.norm_value - 1.0).abs() < 1e-15);
        assert!(matches!(
            eigen_resolvent_check(&ComplexMatrix::identity(2)),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn record_minimum() {
        let mut rec = j_conjecture_slack(&ComplexMatrix::zeros(2), &Settings::default()).unwrap();
        assert_eq!(rec.min_slack, 0.0);
        rec.slacks = vec![0.3, -0.5];
        rec.refresh_minimum();
        assert_eq!((rec.min_slack, rec.min_j), (-0.5, 2));
        assert!(rec.is_violation());
    }
}
