//! The Harnack quotient `H(A) = (I−A*)⁻¹(I−A*A)(I−A)⁻¹`, its equivalent
//! forms, and the eigenvalue bounds in terms of the singular values of `A`.
//!
//! Singular values `r₁ ≥ … ≥ rₙ` of `A` and eigenvalues `λ₁ ≥ … ≥ λₙ` of
//! `H(A)` are indexed from 1 in every public formula and report.

use std::collections::BTreeMap;

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::check::{Comparison, Relation, Settings};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::linalg::{
    determinant, hermitian_eigenvalues, inverse, psd_sqrt, singular_values, ComplexMatrix,
};

/// Residual threshold for the algebraic identities, relative to `1 + ‖H‖`.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// `(I−A)⁻¹`, or `SingularMatrix` when `1 ∈ Λ(A)`.
pub fn resolvent(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    inverse(&a.identity_minus())
}

fn harnack_from_resolvent(a: &ComplexMatrix, r: &ComplexMatrix) -> ComplexMatrix {
    let defect = (&a.adjoint() * a).identity_minus();
    (&(&r.adjoint() * &defect) * r).real_part()
}

/// `H(A)`, symmetrized.
pub fn harnack_quotient(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let r = resolvent(a)?;
    Ok(harnack_from_resolvent(a, &r))
}

/// Frobenius residuals of `H(A)` against its four equivalent expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `2 Re((I−A)⁻¹) − I`
    pub expz: f64,
    /// `2 Re((I−A)⁻¹ − ½ I)`
    pub exp2: f64,
    /// `Re((I+A)(I−A)⁻¹)`
    pub fan: f64,
    /// `S*S` with `S = (I−A*A)^{1/2}(I−A)⁻¹`; absent when `A` is not a strict contraction.
    pub exp3: Option<f64>,
    /// `1 + ‖H‖_F`, the scale the residuals are judged against.
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp3_error: Option<String>,
}

impl IdentityResiduals {
    pub fn threshold(&self) -> f64 {
        IDENTITY_TOLERANCE * self.scale
    }

    /// Named residuals that were evaluated.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![("expz", self.expz), ("exp2", self.exp2), ("fan", self.fan)];
        if let Some(x) = self.exp3 {
            v.push(("exp3", x));
        }
        v
    }

    pub fn all_hold(&self) -> bool {
        self.entries().iter().all(|&(_, r)| r <= self.threshold())
    }
}

pub fn identity_residuals(a: &ComplexMatrix, settings: &Settings) -> Result<IdentityResiduals> {
    let n = a.n();
    let id = ComplexMatrix::identity(n);
    let r = resolvent(a)?;
    let h = harnack_from_resolvent(a, &r);

    let re_r = r.real_part();
    let expz = &re_r.scale_real(2.0) - &id;
    let exp2 = (&r - &id.scale_real(0.5)).real_part().scale_real(2.0);
    let fan = (&a.shift(1.0.into()) * &r).real_part();

    let (exp3, exp3_error) = match settings.contraction_singular_values(a) {
        Ok(_) => {
            let root = psd_sqrt(&(&a.adjoint() * a).identity_minus());
            let s = &root * &r;
            (Some(h.distance(&(&s.adjoint() * &s))), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };

    Ok(IdentityResiduals {
        expz: h.distance(&expz),
        exp2: h.distance(&exp2),
        fan: h.distance(&fan),
        exp3,
        scale: 1.0 + h.frobenius_norm(),
        exp3_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualitySide {
    None,
    Left,
    Right,
}

/// Determinantal Harnack chain `lower ≤ det(I−Z*Z)/|det(I−UZ)|² ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TungReport {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    /// When all `r_k = 0` both ends coincide and `Right` is reported.
    pub equality_side: EqualitySide,
    pub holds: bool,
}

const EQUALITY_TOLERANCE: f64 = 1e-9;
const UNITARY_TOLERANCE: f64 = 1e-9;

pub fn tung_check(z: &ComplexMatrix, u: &ComplexMatrix, settings: &Settings) -> Result<TungReport> {
    let n = z.n();
    if u.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.n(),
        });
    }
    let deviation = (&u.adjoint() * u).distance(&ComplexMatrix::identity(n));
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    let r = settings.contraction_singular_values(z)?;
    let lower: f64 = r.iter().map(|&x| (1.0 - x) / (1.0 + x)).product();
    let upper: f64 = r.iter().map(|&x| (1.0 + x) / (1.0 - x)).product();
    let numerator = determinant(&(&z.adjoint() * z).identity_minus())?.re;
    let denominator = determinant(&(u * z).identity_minus())?.norm_sqr();
    let middle = numerator / denominator;

    let equality_side = if (middle - upper).abs() <= EQUALITY_TOLERANCE * upper {
        EqualitySide::Right
    } else if (middle - lower).abs() <= EQUALITY_TOLERANCE * lower {
        EqualitySide::Left
    } else {
        EqualitySide::None
    };
    let holds = settings.at_least(middle, lower).holds && settings.at_most(middle, upper).holds;
    Ok(TungReport {
        lower,
        middle,
        upper,
        equality_side,
        holds,
    })
}

/// `∏ λ_k(H(A))` against `det(I−A*A)/|det(I−A)|²`, relative agreement.
pub fn determinant_consistency(a: &ComplexMatrix) -> Result<(f64, f64, f64)> {
    let h = harnack_quotient(a)?;
    let product: f64 = hermitian_eigenvalues(&h)?.iter().product();
    let ratio = determinant(&(&a.adjoint() * a).identity_minus())?.re
        / determinant(&a.identity_minus())?.norm_sqr();
    let relative = (product - ratio).abs() / ratio.abs().max(f64::MIN_POSITIVE);
    Ok((product, ratio, relative))
}

/// `r_i` for a 1-based index.
fn at<T: Clone>(r: &[T], i: usize) -> T {
    r[i - 1].clone()
}

/// The five upper bounds on `∏ λ_{i_j}(H(A))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBounds<T = f64> {
    #[serde(rename = "R1")]
    pub r1: T,
    #[serde(rename = "R2")]
    pub r2: T,
    #[serde(rename = "R3")]
    pub r3: T,
    #[serde(rename = "R4")]
    pub r4: T,
    #[serde(rename = "R5")]
    pub r5: T,
}

/// The lower bounds on `∏ λ_{n−i_j+1}(H(A))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBounds<T = f64> {
    #[serde(rename = "Jb")]
    pub jb: T,
    #[serde(rename = "Jb_swapped")]
    pub jb_swapped: T,
    #[serde(rename = "JbX")]
    pub jbx: T,
    #[serde(rename = "JbY")]
    pub jby: T,
    pub fan_lower: T,
}

impl<T: Clone> UpperBounds<T> {
    pub fn named(&self) -> [(&'static str, T); 5] {
        [
            ("R1", self.r1.clone()),
            ("R2", self.r2.clone()),
            ("R3", self.r3.clone()),
            ("R4", self.r4.clone()),
            ("R5", self.r5.clone()),
        ]
    }
}

impl<T: Clone> LowerBounds<T> {
    pub fn named(&self) -> [(&'static str, T); 5] {
        [
            ("Jb", self.jb.clone()),
            ("Jb_swapped", self.jb_swapped.clone()),
            ("JbX", self.jbx.clone()),
            ("JbY", self.jby.clone()),
            ("fan_lower", self.fan_lower.clone()),
        ]
    }
}

impl UpperBounds<f64> {
    /// `R1 ≤ R2 ≤ R4 ≤ R5` and `R1 ≤ R3 ≤ R5` under the shared tolerance.
    pub fn lattice_holds(&self, settings: &Settings) -> bool {
        [
            (self.r1, self.r2),
            (self.r1, self.r3),
            (self.r2, self.r4),
            (self.r3, self.r5),
            (self.r4, self.r5),
        ]
        .iter()
        .all(|&(lo, hi)| settings.at_most(lo, hi).holds)
    }
}

/// Upper bounds from a descending singular value list; exact for rational `T`.
pub fn upper_bounds<T: Num + Clone>(r: &[T], s: &IndexSet) -> UpperBounds<T> {
    let n = r.len();
    let one = T::one;
    let sq = |x: T| x.clone() * x;
    let mut b = UpperBounds {
        r1: one(),
        r2: one(),
        r3: one(),
        r4: one(),
        r5: one(),
    };
    for (j, i) in s.pairs() {
        let ri = at(r, i);
        let rj = at(r, j);
        let r_rev_j = at(r, n - j + 1);
        let r_rev_i = at(r, n - i + 1);
        b.r1 = b.r1 * ((one() + ri.clone()) / (one() - ri.clone()));
        b.r2 = b.r2 * ((one() + rj.clone()) / (one() - rj.clone()));
        b.r3 = b.r3 * ((one() - sq(r_rev_j.clone())) / sq(one() - ri));
        b.r4 = b.r4 * ((one() - sq(r_rev_i)) / sq(one() - rj.clone()));
        b.r5 = b.r5 * ((one() - sq(r_rev_j)) / sq(one() - rj));
    }
    b
}

/// Lower bounds from a descending singular value list; exact for rational `T`.
pub fn lower_bounds<T: Num + Clone>(r: &[T], s: &IndexSet) -> LowerBounds<T> {
    let one = T::one;
    let sq = |x: T| x.clone() * x;
    let r1 = at(r, 1);
    let mut b = LowerBounds {
        jb: one(),
        jb_swapped: one(),
        jbx: one(),
        jby: one(),
        fan_lower: one(),
    };
    for (j, i) in s.pairs() {
        let ri = at(r, i);
        let rj = at(r, j);
        b.jb = b.jb * ((one() - sq(ri.clone())) / sq(one() + rj.clone()));
        b.jb_swapped = b.jb_swapped * ((one() - sq(rj.clone())) / sq(one() + ri.clone()));
        b.jbx = b.jbx * ((one() - sq(ri.clone())) / sq(one() + r1.clone()));
        b.jby = b.jby * ((one() - sq(r1.clone())) / sq(one() + ri));
        b.fan_lower = b.fan_lower * ((one() - rj.clone()) / (one() + rj));
    }
    b
}

/// Upper and lower partial-product bounds for one index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub matrix_id: String,
    pub index_set: IndexSet,
    /// `∏ λ_{i_j}(H)`, compared against the upper bounds.
    pub lhs: f64,
    /// `∏ λ_{n−i_j+1}(H)`, compared against the lower bounds.
    pub lower_lhs: f64,
    pub upper_bounds: UpperBounds,
    pub lower_bounds: LowerBounds,
    pub slacks: BTreeMap<String, f64>,
    pub verdict: BTreeMap<String, bool>,
}

impl BoundReport {
    pub fn passes(&self) -> bool {
        self.verdict.values().all(|&v| v)
    }
}

/// Singular values of `A` and eigenvalues of `H(A)` for a strict contraction,
/// computed once and reused across index sets.
#[derive(Debug, Clone)]
pub struct HarnackSpectrum {
    pub singular_values: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub settings: Settings,
}

impl HarnackSpectrum {
    pub fn new(a: &ComplexMatrix, settings: &Settings) -> Result<Self> {
        let singular_values = settings.contraction_singular_values(a)?;
        let eigenvalues = hermitian_eigenvalues(&harnack_quotient(a)?)?;
        Ok(Self {
            singular_values,
            eigenvalues,
            settings: *settings,
        })
    }

    pub fn n(&self) -> usize {
        self.singular_values.len()
    }

    /// `λ_j(H) ≤ (1+r_j)/(1−r_j)` for each j.
    pub fn eigenvalue_bounds(&self) -> Vec<Comparison> {
        self.eigenvalues
            .iter()
            .zip(&self.singular_values)
            .map(|(&lam, &r)| self.settings.at_most(lam, (1.0 + r) / (1.0 - r)))
            .collect()
    }

    pub fn report(&self, matrix_id: &str, s: &IndexSet) -> Result<BoundReport> {
        let n = self.n();
        s.check_range(n)?;
        let lhs: f64 = s.indices().iter().map(|&i| self.eigenvalues[i - 1]).product();
        let lower_lhs: f64 = s
            .indices()
            .iter()
            .map(|&i| self.eigenvalues[n - i])
            .product();
        let upper = upper_bounds(&self.singular_values, s);
        let lower = lower_bounds(&self.singular_values, s);
        let mut slacks = BTreeMap::new();
        let mut verdict = BTreeMap::new();
        for (name, bound) in upper.named() {
            let c = self.settings.at_most(lhs, bound);
            slacks.insert(name.to_string(), c.slack);
            verdict.insert(name.to_string(), c.holds);
        }
        for (name, bound) in lower.named() {
            let c = self.settings.at_least(lower_lhs, bound);
            slacks.insert(name.to_string(), c.slack);
            verdict.insert(name.to_string(), c.holds);
        }
        Ok(BoundReport {
            matrix_id: matrix_id.to_string(),
            index_set: s.clone(),
            lhs,
            lower_lhs,
            upper_bounds: upper,
            lower_bounds: lower,
            slacks,
            verdict,
        })
    }
}

/// `(λ_j(H), (1+r_j)/(1−r_j))` comparisons for each j.
pub fn eigen_bound_j0(a: &ComplexMatrix, settings: &Settings) -> Result<Vec<Comparison>> {
    Ok(HarnackSpectrum::new(a, settings)?.eigenvalue_bounds())
}

pub fn bound_report(
    a: &ComplexMatrix,
    s: &IndexSet,
    settings: &Settings,
    matrix_id: &str,
) -> Result<BoundReport> {
    HarnackSpectrum::new(a, settings)?.report(matrix_id, s)
}

/// Per-j comparison of `λ_j(H)` with the naive reversal `(1−r_j)/(1+r_j)`,
/// alongside the two lower bounds that do hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveLowerRow {
    pub j: usize,
    pub eigenvalue: f64,
    pub naive_bound: f64,
    /// The naive reversal fails as a lower bound.
    pub violated: bool,
    /// `λ_j(H) ≥ (1−r²_{n−j+1})/(1+r₁)²`
    pub valid_reversed: Comparison,
    /// `λ_j(H) ≥ (1−r₁²)/(1+r_{n−j+1})²`
    pub valid_swapped: Comparison,
}

pub fn naive_lower_bound_check(a: &ComplexMatrix, settings: &Settings) -> Result<Vec<NaiveLowerRow>> {
    let spec = HarnackSpectrum::new(a, settings)?;
    let r = &spec.singular_values;
    let n = r.len();
    let r1 = r[0];
    Ok((1..=n)
        .map(|j| {
            let lam = spec.eigenvalues[j - 1];
            let rj = r[j - 1];
            let rrev = r[n - j];
            let naive_bound = (1.0 - rj) / (1.0 + rj);
            NaiveLowerRow {
                j,
                eigenvalue: lam,
                naive_bound,
                violated: lam < naive_bound - settings.allowance(naive_bound),
                valid_reversed: settings.at_least(lam, (1.0 - rrev * rrev) / (1.0 + r1).powi(2)),
                valid_swapped: settings.at_least(lam, (1.0 - r1 * r1) / (1.0 + rrev).powi(2)),
            }
        })
        .collect())
}

/// Two-matrix extension with `BA⁻¹` in place of `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiMatrixReport {
    pub index_set: IndexSet,
    /// Frobenius residual of the two-matrix identity.
    pub identity_residual: f64,
    pub identity_scale: f64,
    pub lhs: f64,
    /// `∏ (σₙ(A)+σ_j(B))/(σₙ(A)−σ_j(B))`; `None` when some `σ_j(B) ≥ σₙ(A)`
    /// makes the bound vacuous.
    pub rhs: Option<f64>,
    pub holds: bool,
}

pub fn multi_matrix_bound(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    s: &IndexSet,
    settings: &Settings,
) -> Result<MultiMatrixReport> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.n(),
        });
    }
    s.check_range(n)?;
    let a_inv = inverse(a)?;
    let diff = a - b;
    let diff_inv = inverse(&diff)?;
    let ratio = b * &a_inv;
    let ratio_norm = singular_values(&ratio)[0];
    if 1.0 - ratio_norm < settings.margin {
        return Err(Error::DomainViolation(format!(
            "‖BA⁻¹‖ = {ratio_norm} is not below 1 − {}",
            settings.margin
        )));
    }
    let gram_gap = &(&a.adjoint() * a) - &(&b.adjoint() * b);
    let middle = (&(&diff_inv.adjoint() * &gram_gap) * &diff_inv).real_part();
    let via_ratio = &resolvent(&ratio)?.real_part().scale_real(2.0) - &ComplexMatrix::identity(n);
    let identity_residual = middle.distance(&via_ratio);

    let lam = hermitian_eigenvalues(&middle)?;
    let lhs: f64 = s.indices().iter().map(|&i| lam[i - 1]).product();
    let sa_min = *singular_values(a).last().expect("n >= 1");
    let sb = singular_values(b);
    let rhs = s.pairs().try_fold(1.0, |acc, (j, _)| {
        let sbj = sb[j - 1];
        (sbj < sa_min).then(|| acc * (sa_min + sbj) / (sa_min - sbj))
    });
    let holds = match rhs {
        Some(r) => settings.at_most(lhs, r).holds,
        None => true,
    };
    Ok(MultiMatrixReport {
        index_set: s.clone(),
        identity_residual,
        identity_scale: 1.0 + middle.frobenius_norm(),
        lhs,
        rhs,
        holds,
    })
}

/// Relative comparison used for the determinant consistency check.
pub fn relative_agreement(value: f64, reference: f64, rel: f64) -> Comparison {
    Comparison::new(value, reference, Relation::Approx, rel * reference.abs())
}
