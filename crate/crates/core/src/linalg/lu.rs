//! LU factorization with partial pivoting.

use super::matrix::{Complex, ComplexMatrix};
use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_TOLERANCE * max column norm`
/// marks the matrix singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Packed `PA = LU` factors (unit lower triangle implicit).
#[derive(Debug, Clone)]
pub struct Lu {
    factors: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.n();
        let scale = (0..n).map(|j| a.column_norm(j)).fold(0.0, f64::max);
        let threshold = PIVOT_TOLERANCE * scale;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;

        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot < threshold || pivot == 0.0 {
                return Err(Error::SingularMatrix { pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self {
            factors: lu,
            perm,
            swaps,
        })
    }

    pub fn determinant(&self) -> Complex {
        let n = self.factors.n();
        let prod: Complex = (0..n).map(|i| self.factors[(i, i)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.factors.n();
        assert_eq!(b.n(), n, "dimension mismatch");
        let mut x = ComplexMatrix::zeros(n);
        let mut col = vec![Complex::new(0.0, 0.0); n];
        for c in 0..n {
            for i in 0..n {
                col[i] = b[(self.perm[i], c)];
            }
            self.solve_in_place(&mut col);
            for i in 0..n {
                x[(i, c)] = col[i];
            }
        }
        x
    }

    fn solve_in_place(&self, v: &mut [Complex]) {
        let n = v.len();
        let lu = &self.factors;
        for i in 0..n {
            let mut s = v[i];
            for j in 0..i {
                s -= lu[(i, j)] * v[j];
            }
            v[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = v[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * v[j];
            }
            v[i] = s / lu[(i, i)];
        }
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(&ComplexMatrix::identity(self.factors.n()))
    }
}

/// Solves `A X = B`.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::new(a)?.inverse())
}

/// Determinant; a matrix failing the pivot test reports `SingularMatrix`.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex> {
    Ok(Lu::new(a)?.determinant())
}
