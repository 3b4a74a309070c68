use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Square dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, z: Complex) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag(values: &[Complex]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<Complex> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(n: usize, data: Vec<Complex>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from real and (optionally) imaginary row arrays.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in re.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                let y = match im {
                    Some(im) => {
                        let im_row = im.get(i).ok_or(Error::DimensionMismatch {
                            expected: n,
                            found: im.len(),
                        })?;
                        if im_row.len() != n {
                            return Err(Error::DimensionMismatch {
                                expected: n,
                                found: im_row.len(),
                            });
                        }
                        im_row[j]
                    }
                    None => 0.0,
                };
                data.push(Complex::new(x, y));
            }
        }
        if let Some(im) = im {
            if im.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: im.len(),
                });
            }
        }
        Self::from_row_major(n, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Hermitian part `(X + X*) / 2`.
    pub fn real_part(&self) -> Self {
        let mut out = self + &self.adjoint();
        out.scale_mut(Complex::new(0.5, 0.0));
        out
    }

    /// Skew part `(X - X*) / (2i)`, which is Hermitian.
    pub fn imag_part(&self) -> Self {
        let mut out = self - &self.adjoint();
        out.scale_mut(Complex::new(0.0, -0.5));
        out
    }

    pub fn scale(&self, z: Complex) -> Self {
        let mut out = self.clone();
        out.scale_mut(z);
        out
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex::new(x, 0.0))
    }

    pub fn scale_mut(&mut self, z: Complex) {
        for v in &mut self.data {
            *v *= z;
        }
    }

    /// `self + z I`.
    pub fn shift(&self, z: Complex) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] += z;
        }
        out
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Self {
        let mut out = -self;
        for i in 0..self.n {
            out[(i, i)] += Complex::new(1.0, 0.0);
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of column `j`.
    pub fn column_norm(&self, j: usize) -> f64 {
        (0..self.n)
            .map(|i| self[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self - self*`.
    pub fn hermitian_defect(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    /// Frobenius norm of `self* self - self self*`.
    pub fn normality_defect(&self) -> f64 {
        let h = self.adjoint();
        (&h * self).distance(&(self * &h))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"n": int, "re": [[...]], "im": [[...]]}`, `im` optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let has_im = m.as_slice().iter().any(|z| z.im != 0.0);
        MatrixJson {
            n: m.n(),
            re: m.re_rows(),
            im: has_im.then(|| m.im_rows()),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.n {
            return Err(Error::Parse(format!(
                "declared n = {} but \"re\" has {} rows",
                j.n,
                j.re.len()
            )));
        }
        ComplexMatrix::from_parts(&j.re, j.im.as_deref())
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.adjoint(), i2);

        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 0.1], vec![0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.1, 0.0]]).unwrap();
        assert_eq!(a.adjoint(), expected);

        let z = ComplexMatrix::diag(&[c(0.0, 1.0)]);
        assert_eq!(z.adjoint()[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn cartesian_parts() {
        let h = ComplexMatrix::from_row_major(2, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)])
            .unwrap();
        assert!(h.real_part().distance(&h) < 1e-15);

        let ii = ComplexMatrix::scalar(3, c(0.0, 1.0));
        assert!(ii.imag_part().distance(&ComplexMatrix::identity(3)) < 1e-15);

        let x = ComplexMatrix::from_row_major(2, vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.25, 4.0), c(0.0, -1.0)])
            .unwrap();
        let rebuilt = &x.real_part() + &x.imag_part().scale(c(0.0, 1.0));
        assert!(rebuilt.distance(&x) < 1e-15);
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 0 });
    }

    #[test]
    fn json_with_and_without_imaginary_part() {
        let m = ComplexMatrix::from_json(r#"{"n": 2, "re": [[1, 2], [3, 4]]}"#).unwrap();
        assert_eq!(m[(1, 0)], c(3.0, 0.0));
        assert!(!m.to_json().contains("\"im\""));

        let z = ComplexMatrix::from_json(r#"{"n": 1, "re": [[0.5]], "im": [[-0.25]]}"#).unwrap();
        assert_eq!(z[(0, 0)], c(0.5, -0.25));
        assert_eq!(ComplexMatrix::from_json(&z.to_json()).unwrap(), z);
    }

    #[test]
    fn json_shape_errors() {
        assert!(matches!(
            ComplexMatrix::from_json(r#"{"n": 3, "re": [[1, 2], [3, 4]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            ComplexMatrix::from_json(r#"{"n": 2, "re": [[1, 2], [3]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            ComplexMatrix::from_json(r#"{"n": 2, "re": [[1, 2], [3, 4]], "im": [[0, 0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(ComplexMatrix::from_json("not json"), Err(Error::Parse(_))));
    }
}
