use super::eigen::hermitian_eigen;
use super::matrix::{Complex, ComplexMatrix};

const ORTHOGONALITY_TOLERANCE: f64 = 1e-15;
const MAX_SWEEPS: usize = 60;

/// Singular values, descending, by one-sided Jacobi: plane rotations on the
/// columns of `A` until they are mutually orthogonal, then column norms.
/// Working on `A` itself keeps small singular values accurate to about
/// `ε‖A‖`, where the Gram matrix would only resolve `√ε‖A‖`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.n();
    let mut cols: Vec<Vec<Complex>> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                if rotate_pair(&mut left[p], &mut right[0]) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Makes columns `x` and `y` orthogonal; false when they already are.
fn rotate_pair(x: &mut [Complex], y: &mut [Complex]) -> bool {
    let alpha: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let gamma: Complex = x.iter().zip(y.iter()).map(|(u, v)| u.conj() * v).sum();
    let g = gamma.norm();
    if g <= ORTHOGONALITY_TOLERANCE * (alpha * beta).sqrt() || g == 0.0 {
        return false;
    }
    // rotate y by the phase of gamma, then a real rotation zeroes the product
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for (u, v) in x.iter_mut().zip(y.iter_mut()) {
        let w = *v * phase;
        let new_u = *u * c - w * s;
        *v = *u * s + w * c;
        *u = new_u;
    }
    true
}

/// Spectral norm `σ₁(A)`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// `|A| = (A*A)^{1/2}`.
pub fn polar_abs(a: &ComplexMatrix) -> ComplexMatrix {
    psd_sqrt(&(&a.adjoint() * a))
}

/// Hermitian square root of a positive semidefinite matrix; negative
/// eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(h).expect("input is Hermitian");
    let roots: Vec<Complex> = values
        .iter()
        .map(|&x| Complex::new(x.max(0.0).sqrt(), 0.0))
        .collect();
    let scaled = &vectors * &ComplexMatrix::diag(&roots);
    (&scaled * &vectors.adjoint()).real_part()
}
