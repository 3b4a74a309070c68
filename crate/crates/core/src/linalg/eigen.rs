//! Eigenvalue solvers: cyclic Jacobi for Hermitian matrices and a
//! Hessenberg + Wilkinson-shifted QR iteration for general ones.

use std::cmp::Ordering;

use super::matrix::{Complex, ComplexMatrix};
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-10;
const JACOBI_TOLERANCE: f64 = 1e-14;
const MAX_JACOBI_SWEEPS: usize = 100;
const DEFLATION_TOLERANCE: f64 = 1e-13;

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let skew = h.hermitian_defect();
    if skew > HERMITIAN_TOLERANCE * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { skew });
    }
    let (mut values, _) = jacobi(&h.real_part(), false);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Eigenvalues (descending) with the matching unit eigenvectors as columns.
pub(crate) fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let skew = h.hermitian_defect();
    if skew > HERMITIAN_TOLERANCE * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { skew });
    }
    let (values, vectors) = jacobi(&h.real_part(), true);
    let vectors = vectors.expect("vectors requested");
    let n = h.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut sorted = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            sorted[(i, dst)] = vectors[(i, src)];
        }
    }
    Ok((order.iter().map(|&i| values[i]).collect(), sorted))
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = h.n();
    let mut a = h.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let target = JACOBI_TOLERANCE * h.frobenius_norm();

    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_mass(&a) <= target {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let magnitude = apq.norm();
                if magnitude == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Negligible next to both diagonal entries: rotation would not change them.
                if app.abs() + magnitude == app.abs() && aqq.abs() + magnitude == aqq.abs() {
                    a[(p, q)] = Complex::new(0.0, 0.0);
                    a[(q, p)] = Complex::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let phase = apq / magnitude;
                let theta = (aqq - app) / (2.0 * magnitude);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q)
                let upq = Complex::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                apply_rotation(&mut a, p, q, c, upq, uqp, uqq);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vp = v[(k, p)];
                        let vq = v[(k, q)];
                        v[(k, p)] = vp * c + vq * uqp;
                        v[(k, q)] = vp * upq + vq * uqq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// `A <- U* A U` where `U` is the identity except on rows/columns `p`, `q`.
fn apply_rotation(
    a: &mut ComplexMatrix,
    p: usize,
    q: usize,
    upp: f64,
    upq: Complex,
    uqp: Complex,
    uqq: Complex,
) {
    let n = a.n();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * upp + aqk * uqp.conj();
        a[(q, k)] = apk * upq.conj() + aqk * uqq.conj();
    }
    a[(p, q)] = Complex::new(0.0, 0.0);
    a[(q, p)] = Complex::new(0.0, 0.0);
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);
}

/// Descending modulus, then descending real part, then descending imaginary part.
pub fn spectral_order(a: &Complex, b: &Complex) -> Ordering {
    // conjugate pairs differ in computed modulus and real part only by rounding
    let grid = |x: f64| (x * 1e12).round();
    grid(b.norm())
        .total_cmp(&grid(a.norm()))
        .then(grid(b.re).total_cmp(&grid(a.re)))
        .then(b.im.total_cmp(&a.im))
}

/// Eigenvalues of a general complex matrix in [`spectral_order`].
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex>> {
    let n = a.n();
    let mut h = hessenberg(a);
    let mut values = Vec::with_capacity(n);
    let max_iterations = 100 * n * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n;

    while hi > 0 {
        let last = hi - 1;
        // find the start of the trailing unreduced block
        let mut lo = last;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo, lo)].l1_norm() + h[(lo - 1, lo - 1)].l1_norm();
            let scale = if local == 0.0 { h.max_abs() } else { local };
            if sub <= DEFLATION_TOLERANCE * scale {
                h[(lo, lo - 1)] = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == last {
            values.push(h[(last, last)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iterations {
            return Err(Error::ConvergenceFailure { iterations: total });
        }
        total += 1;
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift breaks cycles
            h[(last, last)] + Complex::new(0.75 * h[(last, last - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(last - 1, last - 1)],
                h[(last - 1, last)],
                h[(last, last - 1)],
                h[(last, last)],
            )
        };
        qr_step(&mut h, lo, last, shift);
    }
    values.sort_by(spectral_order);
    Ok(values)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = d + half + disc;
    let mu2 = d + half - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// One explicit shifted QR sweep `H - mu I = QR, H <- RQ + mu I` on rows/cols `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let rows = (k + 2).min(hi + 1);
        for i in lo..rows {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// Unitary similarity to upper Hessenberg form by Householder reflections.
pub(crate) fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    let mut v = vec![Complex::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        v.fill(Complex::new(0.0, 0.0));
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = h[(i, k)];
        }
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().skip(k + 1) {
            *vi /= vnorm;
        }
        // H <- (I - 2 v v*) H
        for j in 0..n {
            let dot: Complex = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                let vi = v[i];
                h[(i, j)] -= vi * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v*)
        for i in 0..n {
            let dot: Complex = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            for j in k + 1..n {
                let vj = v[j];
                h[(i, j)] -= dot * vj.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::new(0.0, 0.0);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_hermitian() {
        let d = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&a),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, 1+i], [1-i, 3]]: eigenvalues (5 ± sqrt(9)) / 2 = 4, 1
        let h = ComplexMatrix::from_row_major(2, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)])
            .unwrap();
        let ev = hermitian_eigenvalues(&h).unwrap();
        assert!((ev[0] - 4.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let h = ComplexMatrix::from_row_major(
            3,
            vec![
                c(1.0, 0.0),
                c(0.5, -0.2),
                c(0.0, 0.3),
                c(0.5, 0.2),
                c(-2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.3),
                c(1.0, -1.0),
                c(0.25, 0.0),
            ],
        )
        .unwrap();
        let (values, vectors) = hermitian_eigen(&h).unwrap();
        let d = &(&vectors.adjoint() * &h) * &vectors;
        assert!(d.distance(&ComplexMatrix::diag_real(&values)) < 1e-12);
    }

    #[test]
    fn diagonal_general() {
        let d = ComplexMatrix::diag(&[c(0.0, 1.0), c(2.0, 0.0)]);
        let ev = general_eigenvalues(&d).unwrap();
        assert_eq!(ev, vec![c(2.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn rotation_matrix_has_conjugate_pair() {
        let r = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let ev = general_eigenvalues(&r).unwrap();
        assert!((ev[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn jordan_block_converges() {
        let j = ComplexMatrix::from_real_rows(&[
            vec![0.5, 1.0, 0.0],
            vec![0.0, 0.5, 1.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        let ev = general_eigenvalues(&j).unwrap();
        for z in ev {
            // defective eigenvalue: perturbation of order eps^(1/3)
            assert!((z - c(0.5, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn hessenberg_is_similar() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![1.0, 2.0, 3.0, 4.0],
            vec![-1.0, 0.5, 0.0, 2.0],
            vec![3.0, 1.0, -2.0, 1.0],
            vec![0.5, 0.5, 0.5, 0.5],
        ])
        .unwrap();
        let h = hessenberg(&a);
        for i in 2..4 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], c(0.0, 0.0));
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn ordering_contract() {
        let mut v = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        v.sort_by(spectral_order);
        assert_eq!(
            v,
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-1.0, 0.0)]
        );
    }
}
