//! Embedded reference examples with their printed values and tolerances.
//!
//! Values printed to four decimals get `1e-4` when the matrix is given
//! exactly and `1e-3` when the matrix entries are themselves rounded.
//! Rational witnesses are compared exactly.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::check::Settings;
use crate::conjectures::{eigen_resolvent_check, loewner_counterexample_check, LoewnerReport, ResolventReport};
use crate::error::Result;
use crate::harnack::{harnack_quotient, resolvent, upper_bounds};
use crate::index_set::IndexSet;
use crate::linalg::{hermitian_eigenvalues, singular_values, ComplexMatrix};
use crate::report::{CheckRecord, CheckRelation};

pub const ROUNDED_MATRIX_TOLERANCE: f64 = 1e-3;
pub const EXACT_MATRIX_TOLERANCE: f64 = 1e-4;
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleInput {
    Matrix(ComplexMatrix),
    /// Singular values of a diagonal matrix and the index set the bounds use.
    SingularValues { values: Vec<Ratio<i64>>, indices: IndexSet },
}

/// Quantities are 1-based where indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    SingularValue(usize),
    /// `λ_j(Re((I−A)⁻¹))`
    ResolventEigenvalue(usize),
    /// `λ_j(H(A))`
    HarnackEigenvalue(usize),
    /// `(1−r_j)/(1+r_j)`
    NaiveLowerBound(usize),
    /// `(1+r_j)/(1−r_j)`
    NaiveUpperBound(usize),
    /// Real part of an entry of `(I−A*)⁻¹ + (I−A)⁻¹`.
    ResolventSumEntry(usize, usize),
    /// Entry of `2(I−|A|)⁻¹`.
    UpperReferenceEntry(usize, usize),
    /// Entry of `2(I+|A|)⁻¹`.
    LowerReferenceEntry(usize, usize),
    /// `λₙ(2(I−|A|)⁻¹ − sum)`
    UpperOrderGap,
    /// `λₙ(sum − 2(I+|A|)⁻¹)`
    LowerOrderGap,
    /// Eigenvalues of `A` in spectral order.
    EigenvalueRe(usize),
    EigenvalueIm(usize),
    /// `max Re((1−λ)⁻¹)` over eigenvalues.
    MaxReResolvent,
    /// `1/(1+rₙ)`
    ResolventThreshold,
    /// `‖Re((I−A)⁻¹)‖`
    ResolventNorm,
    /// Upper bound `R1..R5`, evaluated exactly.
    Upper(usize),
}

impl Quantity {
    pub fn label(&self) -> String {
        match *self {
            Quantity::SingularValue(j) => format!("sigma_{j}"),
            Quantity::ResolventEigenvalue(j) => format!("lambda_{j}(Re((I-A)^-1))"),
            Quantity::HarnackEigenvalue(j) => format!("lambda_{j}(H)"),
            Quantity::NaiveLowerBound(j) => format!("(1-r_{j})/(1+r_{j})"),
            Quantity::NaiveUpperBound(j) => format!("(1+r_{j})/(1-r_{j})"),
            Quantity::ResolventSumEntry(i, j) => format!("resolvent_sum[{i},{j}]"),
            Quantity::UpperReferenceEntry(i, j) => format!("2(I-|A|)^-1[{i},{j}]"),
            Quantity::LowerReferenceEntry(i, j) => format!("2(I+|A|)^-1[{i},{j}]"),
            Quantity::UpperOrderGap => "min_eig(2(I-|A|)^-1 - sum)".into(),
            Quantity::LowerOrderGap => "min_eig(sum - 2(I+|A|)^-1)".into(),
            Quantity::EigenvalueRe(k) => format!("Re(eig_{k})"),
            Quantity::EigenvalueIm(k) => format!("Im(eig_{k})"),
            Quantity::MaxReResolvent => "max Re(1/(1-lambda))".into(),
            Quantity::ResolventThreshold => "1/(1+r_n)".into(),
            Quantity::ResolventNorm => "||Re((I-A)^-1)||".into(),
            Quantity::Upper(k) => format!("R{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Value(f64),
    Exact(Ratio<i64>),
    Quantity(Quantity),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub quantity: Quantity,
    pub relation: CheckRelation,
    pub target: Target,
    pub tolerance: f64,
}

impl Expected {
    fn approx(quantity: Quantity, value: f64, tolerance: f64) -> Self {
        Self {
            quantity,
            relation: CheckRelation::Approx,
            target: Target::Value(value),
            tolerance,
        }
    }

    fn exact(quantity: Quantity, value: Ratio<i64>) -> Self {
        Self {
            quantity,
            relation: CheckRelation::Approx,
            target: Target::Exact(value),
            tolerance: EXACT_TOLERANCE,
        }
    }

    fn compare(quantity: Quantity, relation: CheckRelation, other: Quantity) -> Self {
        Self {
            quantity,
            relation,
            target: Target::Quantity(other),
            tolerance: 0.0,
        }
    }

    fn below_zero(quantity: Quantity) -> Self {
        Self {
            quantity,
            relation: CheckRelation::Below,
            target: Target::Value(0.0),
            tolerance: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkedExample {
    pub id: &'static str,
    pub source: &'static str,
    pub input: ExampleInput,
    pub expected: Vec<Expected>,
}

fn matrix(rows: [[f64; 3]; 3]) -> ComplexMatrix {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    ComplexMatrix::from_real_rows(&rows).expect("finite literal")
}

fn witness(values: &[(i64, i64)], indices: &[usize]) -> ExampleInput {
    let values: Vec<Ratio<i64>> = values.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
    let indices = IndexSet::new(values.len(), indices.to_vec()).expect("valid literal");
    ExampleInput::SingularValues { values, indices }
}

pub fn corpus() -> Vec<WorkedExample> {
    use Quantity::*;
    let t4 = EXACT_MATRIX_TOLERANCE;
    let t3 = ROUNDED_MATRIX_TOLERANCE;
    let ri = |p, q| Ratio::new(p, q);

    let mut naive = vec![];
    for (j, v) in [0.9468, 0.3969, 0.0049].into_iter().enumerate() {
        naive.push(Expected::approx(SingularValue(j + 1), v, t4));
    }
    for (j, v) in [9.9860, 1.5616, 0.7789].into_iter().enumerate() {
        naive.push(Expected::approx(ResolventEigenvalue(j + 1), v, t4));
    }
    for (j, v) in [18.9720, 2.1232, 0.5578].into_iter().enumerate() {
        naive.push(Expected::approx(HarnackEigenvalue(j + 1), v, t4));
    }
    naive.push(Expected::approx(NaiveLowerBound(3), 0.9902, t4));
    naive.push(Expected::compare(HarnackEigenvalue(3), CheckRelation::Below, NaiveLowerBound(3)));
    naive.push(Expected::approx(NaiveLowerBound(1), 0.0273, t4));
    naive.push(Expected::compare(HarnackEigenvalue(3), CheckRelation::AtLeast, NaiveLowerBound(1)));
    naive.push(Expected::compare(HarnackEigenvalue(1), CheckRelation::AtMost, NaiveUpperBound(1)));

    let mut nilpotent = vec![];
    for (i, j, v) in [(1, 1, 2.0), (1, 2, 0.1), (2, 1, 0.1), (2, 2, 2.0)] {
        nilpotent.push(Expected::approx(ResolventSumEntry(i, j), v, EXACT_TOLERANCE));
    }
    for (i, j, v) in [(1, 1, 2.0), (1, 2, 0.0), (2, 1, 0.0), (2, 2, 20.0 / 9.0)] {
        nilpotent.push(Expected::approx(UpperReferenceEntry(i, j), v, EXACT_TOLERANCE));
    }
    for (i, j, v) in [(1, 1, 2.0), (1, 2, 0.0), (2, 1, 0.0), (2, 2, 20.0 / 11.0)] {
        nilpotent.push(Expected::approx(LowerReferenceEntry(i, j), v, EXACT_TOLERANCE));
    }
    nilpotent.push(Expected::below_zero(UpperOrderGap));
    nilpotent.push(Expected::below_zero(LowerOrderGap));

    let mut eigen = vec![];
    for (k, (re, im)) in [(-0.5309, 0.0), (-0.1482, 0.3451), (-0.1482, -0.3451)]
        .into_iter()
        .enumerate()
    {
        eigen.push(Expected::approx(EigenvalueRe(k + 1), re, t3));
        eigen.push(Expected::approx(EigenvalueIm(k + 1), im, t3));
    }
    for (j, v) in [0.9554, 0.5556, 0.1411].into_iter().enumerate() {
        eigen.push(Expected::approx(SingularValue(j + 1), v, t3));
    }
    eigen.push(Expected::approx(MaxReResolvent, 0.7988, t3));
    eigen.push(Expected::approx(ResolventThreshold, 0.8763, t3));
    eigen.push(Expected::approx(ResolventNorm, 1.0301, t3));
    eigen.push(Expected::compare(MaxReResolvent, CheckRelation::Below, ResolventThreshold));
    eigen.push(Expected::compare(ResolventNorm, CheckRelation::Above, ResolventThreshold));

    vec![
        WorkedExample {
            id: "naive-reversal-3x3",
            source: "3x3 real contraction whose smallest eigenvalue of H(A) falls below (1-r_3)/(1+r_3)",
            input: ExampleInput::Matrix(matrix([
                [0.4831, 0.2041, 0.0447],
                [0.4689, 0.3308, 0.3671],
                [0.1308, 0.2583, 0.4787],
            ])),
            expected: naive,
        },
        WorkedExample {
            id: "nilpotent-2x2",
            source: "A = [[0, 0.1], [0, 0]]: the resolvent sum is comparable with neither 2(I-|A|)^-1 nor 2(I+|A|)^-1",
            input: ExampleInput::Matrix(
                ComplexMatrix::from_real_rows(&[vec![0.0, 0.1], vec![0.0, 0.0]]).expect("finite literal"),
            ),
            expected: nilpotent,
        },
        WorkedExample {
            id: "lattice-witness-1",
            source: "r = (1/2, 1/2, 0, 0), i = (3): R3 can be smaller than R2",
            input: witness(&[(1, 2), (1, 2), (0, 1), (0, 1)], &[3]),
            expected: vec![
                Expected::exact(Upper(2), ri(3, 1)),
                Expected::exact(Upper(3), ri(1, 1)),
                Expected::compare(Upper(2), CheckRelation::Above, Upper(3)),
            ],
        },
        WorkedExample {
            id: "lattice-witness-2",
            source: "r = (1/2, 9/20, 0, 0), i = (2): R2 < R3 < R4",
            input: witness(&[(1, 2), (9, 20), (0, 1), (0, 1)], &[2]),
            expected: vec![
                Expected::exact(Upper(2), ri(3, 1)),
                Expected::exact(Upper(3), ri(400, 121)),
                Expected::exact(Upper(4), ri(4, 1)),
                Expected::compare(Upper(2), CheckRelation::Below, Upper(3)),
                Expected::compare(Upper(3), CheckRelation::Below, Upper(4)),
            ],
        },
        WorkedExample {
            id: "lattice-witness-3",
            source: "r = (1/2, 1/2, 1/2, 0, 0), i = (2, 3): R3 can exceed R4",
            input: witness(&[(1, 2), (1, 2), (1, 2), (0, 1), (0, 1)], &[2, 3]),
            expected: vec![
                Expected::exact(Upper(3), ri(16, 1)),
                Expected::exact(Upper(4), ri(12, 1)),
                Expected::compare(Upper(3), CheckRelation::Above, Upper(4)),
            ],
        },
        WorkedExample {
            id: "eigen-resolvent-3x3",
            source: "3x3 matrix with 4-decimal entries where no eigenvalue reaches 1/(1+r_n) but the norm does",
            input: ExampleInput::Matrix(matrix([
                [-0.2007, 0.0263, -0.4910],
                [0.5055, -0.2419, 0.5709],
                [0.3799, 0.1640, -0.3848],
            ])),
            expected: eigen,
        },
    ]
}

/// Everything a matrix example can ask for, computed once.
struct MatrixFacts {
    sigma: Vec<f64>,
    resolvent_eigs: Vec<f64>,
    harnack_eigs: Vec<f64>,
    loewner: LoewnerReport,
    resolvent: ResolventReport,
}

impl MatrixFacts {
    fn new(a: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            sigma: singular_values(a),
            resolvent_eigs: hermitian_eigenvalues(&resolvent(a)?.real_part())?,
            harnack_eigs: hermitian_eigenvalues(&harnack_quotient(a)?)?,
            loewner: loewner_counterexample_check(a, &Settings::default())?,
            resolvent: eigen_resolvent_check(a)?,
        })
    }

    fn value(&self, q: Quantity) -> Option<f64> {
        let get = |v: &[f64], j: usize| v.get(j.checked_sub(1)?).copied();
        match q {
            Quantity::SingularValue(j) => get(&self.sigma, j),
            Quantity::ResolventEigenvalue(j) => get(&self.resolvent_eigs, j),
            Quantity::HarnackEigenvalue(j) => get(&self.harnack_eigs, j),
            Quantity::NaiveLowerBound(j) => get(&self.sigma, j).map(|r| (1.0 - r) / (1.0 + r)),
            Quantity::NaiveUpperBound(j) => get(&self.sigma, j).map(|r| (1.0 + r) / (1.0 - r)),
            Quantity::ResolventSumEntry(i, j) => Some(self.loewner.resolvent_sum[(i - 1, j - 1)].re),
            Quantity::UpperReferenceEntry(i, j) => Some(self.loewner.upper_reference[(i - 1, j - 1)].re),
            Quantity::LowerReferenceEntry(i, j) => Some(self.loewner.lower_reference[(i - 1, j - 1)].re),
            Quantity::UpperOrderGap => Some(self.loewner.upper_gap_min_eigenvalue),
            Quantity::LowerOrderGap => Some(self.loewner.lower_gap_min_eigenvalue),
            Quantity::EigenvalueRe(k) => self.resolvent.eigenvalues.get(k - 1).map(|z| z.re),
            Quantity::EigenvalueIm(k) => self.resolvent.eigenvalues.get(k - 1).map(|z| z.im),
            Quantity::MaxReResolvent => Some(self.resolvent.max_re_resolvent),
            Quantity::ResolventThreshold => Some(self.resolvent.threshold),
            Quantity::ResolventNorm => Some(self.resolvent.norm_value),
            Quantity::Upper(_) => None,
        }
    }
}

fn exact_upper(values: &[Ratio<i64>], s: &IndexSet, k: usize) -> Option<Ratio<i64>> {
    let b = upper_bounds(values, s);
    Some(match k {
        1 => b.r1,
        2 => b.r2,
        3 => b.r3,
        4 => b.r4,
        5 => b.r5,
        _ => return None,
    })
}

fn check_name(example: &WorkedExample, e: &Expected) -> String {
    let rhs = match &e.target {
        Target::Quantity(q) if e.relation != CheckRelation::Approx => {
            format!(" {} {}", e.relation.symbol(), q.label())
        }
        Target::Value(_) if e.relation != CheckRelation::Approx => {
            format!(" {} 0", e.relation.symbol())
        }
        _ => String::new(),
    };
    format!("{}/{}{}", example.id, e.quantity.label(), rhs)
}

pub fn evaluate_example(example: &WorkedExample) -> Vec<CheckRecord> {
    match &example.input {
        ExampleInput::Matrix(a) => {
            let facts = match MatrixFacts::new(a) {
                Ok(f) => f,
                Err(err) => return vec![CheckRecord::failed(example.id, err.to_string())],
            };
            example
                .expected
                .iter()
                .map(|e| {
                    let name = check_name(example, e);
                    let target = match &e.target {
                        Target::Value(v) => Some(*v),
                        Target::Exact(r) => r.to_f64(),
                        Target::Quantity(q) => facts.value(*q),
                    };
                    match (facts.value(e.quantity), target) {
                        (Some(c), Some(t)) => CheckRecord::evaluate(name, c, e.relation, t, e.tolerance),
                        _ => CheckRecord::failed(name, "quantity not available for this input"),
                    }
                })
                .collect()
        }
        ExampleInput::SingularValues { values, indices } => example
            .expected
            .iter()
            .map(|e| {
                let name = check_name(example, e);
                let computed = match e.quantity {
                    Quantity::Upper(k) => exact_upper(values, indices, k),
                    _ => None,
                };
                let target = match &e.target {
                    Target::Exact(r) => Some(*r),
                    Target::Quantity(Quantity::Upper(k)) => exact_upper(values, indices, *k),
                    Target::Value(v) if v.is_zero() => Some(Ratio::zero()),
                    Target::Value(v) if *v == 1.0 => Some(Ratio::one()),
                    _ => None,
                };
                match (computed, target) {
                    (Some(c), Some(t)) => CheckRecord::exact(name, &c, e.relation, &t, e.tolerance),
                    _ => CheckRecord::failed(name, "only exact upper bounds apply to a singular-value list"),
                }
            })
            .collect(),
    }
}

pub fn evaluate_corpus(examples: &[WorkedExample]) -> Vec<CheckRecord> {
    examples.iter().flat_map(evaluate_example).collect()
}
