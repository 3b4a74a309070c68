//! Cayley transforms `𝒞(X) = (X−iI)(X+iI)⁻¹` of strict contractions and
//! log-majorization bounds on their singular values.
//!
//! The lower bound of the difference chain uses `(1+σ_j)` denominators:
//! it is the bound produced by the product lower bound
//! `∏σ_{i_j}(XY) ≥ ∏σ_{n−j+1}(X)σ_{i_j}(Y)` together with
//! `σ_{n−j+1}((X+iI)⁻¹) ≥ 1/(1+σ_j(X))`. Reports label it `corrected`.

use serde::{Deserialize, Serialize};

use crate::check::{Comparison, Settings};
use crate::error::{Error, Result};
use crate::harnack::IDENTITY_TOLERANCE;
use crate::index_set::IndexSet;
use crate::linalg::{inverse, singular_values, Complex, ComplexMatrix};

const I: Complex = Complex::new(0.0, 1.0);

/// `(X−iI)(X+iI)⁻¹`.
pub fn cayley(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let plus = inverse(&x.shift(I))?;
    Ok(&x.shift(-I) * &plus)
}

/// `I − 2i(X+iI)⁻¹`, the same transform written with one inverse.
pub fn cayley_resolvent_form(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let plus = inverse(&x.shift(I))?;
    Ok(plus.scale(Complex::new(0.0, -2.0)).shift(Complex::new(1.0, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundForm {
    /// Bound as derived for a single transform.
    Standard,
    /// `(1+σ_j)` denominators in the difference chain.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainVerdict {
    pub lower: bool,
    pub upper: bool,
}

/// `lower ≤ lhs ≤ upper` for one index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CayleyReport {
    pub index_set: IndexSet,
    pub lhs: f64,
    pub lower: f64,
    pub upper: f64,
    pub verdict: ChainVerdict,
    pub lower_bound_form: LowerBoundForm,
    /// Residual of `𝒞(A)−𝒞(B) = 2i(B+iI)⁻¹(A−B)(A+iI)⁻¹` relative to
    /// `1 + ‖𝒞(A)−𝒞(B)‖_F` (difference chain only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_residual: Option<f64>,
}

impl CayleyReport {
    pub fn passes(&self) -> bool {
        self.verdict.lower
            && self.verdict.upper
            && self
                .identity_residual
                .is_none_or(|r| r <= IDENTITY_TOLERANCE)
    }
}

fn chain(
    settings: &Settings,
    s: &IndexSet,
    lhs: f64,
    lower: f64,
    upper: f64,
    form: LowerBoundForm,
    identity_residual: Option<f64>,
) -> CayleyReport {
    CayleyReport {
        index_set: s.clone(),
        lhs,
        lower,
        upper,
        verdict: ChainVerdict {
            lower: settings.at_least(lhs, lower).holds,
            upper: settings.at_most(lhs, upper).holds,
        },
        lower_bound_form: form,
        identity_residual,
    }
}

/// Singular values of `A` and of `𝒞(A)`, reusable across index sets.
#[derive(Debug, Clone)]
pub struct CayleySpectrum {
    pub singular_values: Vec<f64>,
    pub transform_singular_values: Vec<f64>,
    settings: Settings,
}

impl CayleySpectrum {
    pub fn new(a: &ComplexMatrix, settings: &Settings) -> Result<Self> {
        let sigma = settings.contraction_singular_values(a)?;
        let transform_singular_values = singular_values(&cayley(a)?);
        Ok(Self {
            singular_values: sigma,
            transform_singular_values,
            settings: *settings,
        })
    }

    pub fn report(&self, s: &IndexSet) -> Result<CayleyReport> {
        let sa = &self.singular_values;
        let n = sa.len();
        s.check_range(n)?;
        let mut lhs = 1.0;
        let mut lower = 1.0;
        let mut upper = 1.0;
        for (j, i) in s.pairs() {
            lhs *= self.transform_singular_values[i - 1];
            lower *= (1.0 - sa[n - i]) / (1.0 + sa[j - 1]);
            upper *= (1.0 + sa[i - 1]) / (1.0 - sa[j - 1]);
        }
        Ok(chain(&self.settings, s, lhs, lower, upper, LowerBoundForm::Standard, None))
    }

    /// `k = 1` corollary: `(1−σ_{n−j+1})/(1+σ₁) ≤ σ_j(𝒞(A)) ≤ (1+σ_j)/(1−σ₁)`.
    pub fn per_index(&self) -> Vec<(Comparison, Comparison)> {
        let sa = &self.singular_values;
        let n = sa.len();
        (0..n)
            .map(|j| {
                let v = self.transform_singular_values[j];
                (
                    self.settings.at_least(v, (1.0 - sa[n - 1 - j]) / (1.0 + sa[0])),
                    self.settings.at_most(v, (1.0 + sa[j]) / (1.0 - sa[0])),
                )
            })
            .collect()
    }
}

pub fn cayley_bounds(a: &ComplexMatrix, s: &IndexSet, settings: &Settings) -> Result<CayleyReport> {
    CayleySpectrum::new(a, settings)?.report(s)
}

/// Everything the difference chain needs for a fixed pair `(A, B)`.
#[derive(Debug, Clone)]
pub struct CayleyDifference {
    pub sigma_a: Vec<f64>,
    pub sigma_b: Vec<f64>,
    pub sigma_diff: Vec<f64>,
    pub sigma_transform_diff: Vec<f64>,
    pub identity_residual: f64,
    settings: Settings,
}

impl CayleyDifference {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix, settings: &Settings) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                found: b.n(),
            });
        }
        let sigma_a = settings.contraction_singular_values(a)?;
        let sigma_b = settings.contraction_singular_values(b)?;
        let diff = a - b;
        let transform_diff = &cayley(a)? - &cayley(b)?;
        let factored = &(&inverse(&b.shift(I))?.scale(Complex::new(0.0, 2.0)) * &diff)
            * &inverse(&a.shift(I))?;
        Ok(Self {
            sigma_a,
            sigma_b,
            sigma_diff: singular_values(&diff),
            sigma_transform_diff: singular_values(&transform_diff),
            identity_residual: transform_diff.distance(&factored)
                / (1.0 + transform_diff.frobenius_norm()),
            settings: *settings,
        })
    }

    pub fn report(&self, s: &IndexSet) -> Result<CayleyReport> {
        s.check_range(self.sigma_a.len())?;
        let mut lhs = 1.0;
        let mut lower = 1.0;
        let mut upper = 1.0;
        for (j, i) in s.pairs() {
            let (sa, sb) = (self.sigma_a[j - 1], self.sigma_b[j - 1]);
            let d = 2.0 * self.sigma_diff[i - 1];
            lhs *= self.sigma_transform_diff[i - 1];
            upper *= d / ((1.0 - sa) * (1.0 - sb));
            lower *= d / ((1.0 + sa) * (1.0 + sb));
        }
        Ok(chain(
            &self.settings,
            s,
            lhs,
            lower,
            upper,
            LowerBoundForm::Corrected,
            Some(self.identity_residual),
        ))
    }
}

pub fn cayley_difference_bounds(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    s: &IndexSet,
    settings: &Settings,
) -> Result<CayleyReport> {
    CayleyDifference::new(a, b, settings)?.report(s)
}

/// For Hermitian `A`, `B`: `σ_j(𝒞(A)−𝒞(B)) ≤ 2σ_j(A−B)` per j, and the
/// partial-sum consequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanHoffmanReport {
    pub per_index: Vec<Comparison>,
    pub partial_sums: Vec<Comparison>,
    /// `max(‖𝒞(A)*𝒞(A) − I‖, ‖𝒞(B)*𝒞(B) − I‖)`.
    pub unitarity_defect: f64,
}

impl FanHoffmanReport {
    pub fn passes(&self) -> bool {
        self.per_index.iter().chain(&self.partial_sums).all(|c| c.holds)
            && self.unitarity_defect <= IDENTITY_TOLERANCE
    }
}

pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    (&m.adjoint() * m).distance(&ComplexMatrix::identity(m.n()))
}

const HERMITIAN_TOLERANCE: f64 = 1e-10;

pub fn fan_hoffman_check(a: &ComplexMatrix, b: &ComplexMatrix, settings: &Settings) -> Result<FanHoffmanReport> {
    for m in [a, b] {
        let skew = m.hermitian_defect();
        if skew > HERMITIAN_TOLERANCE * (1.0 + m.frobenius_norm()) {
            return Err(Error::NotHermitian { skew });
        }
    }
    let ca = cayley(a)?;
    let cb = cayley(b)?;
    let lhs = singular_values(&(&ca - &cb));
    let rhs: Vec<f64> = singular_values(&(a - b)).iter().map(|x| 2.0 * x).collect();
    let per_index = lhs
        .iter()
        .zip(&rhs)
        .map(|(&l, &r)| settings.at_most(l, r))
        .collect();
    let mut partial_sums = Vec::with_capacity(lhs.len());
    let (mut sl, mut sr) = (0.0, 0.0);
    for (l, r) in lhs.iter().zip(&rhs) {
        sl += l;
        sr += r;
        partial_sums.push(settings.at_most(sl, sr));
    }
    Ok(FanHoffmanReport {
        per_index,
        partial_sums,
        unitarity_defect: unitarity_defect(&ca).max(unitarity_defect(&cb)),
    })
}
