//! Independent oracles for the eigen/singular value solvers.
//!
//! Nothing here calls the crate's eigensolvers: characteristic polynomial
//! coefficients are formed from traces and minors, then solved in closed form
//! (Hermitian) or by Durand–Kerner iteration (general).

#![allow(dead_code)]

use harnack::linalg::{Complex, ComplexMatrix, SplitMix64};

/// Monic characteristic polynomial coefficients `[c0, c1, ..., c_{n-1}]` of
/// `λⁿ + c_{n-1} λ^{n-1} + ... + c0`, for n ∈ {1, 2, 3}.
pub fn char_poly(a: &ComplexMatrix) -> Vec<Complex> {
    let n = a.n();
    let m = |i: usize, j: usize| a[(i, j)];
    match n {
        1 => vec![-m(0, 0)],
        2 => {
            let tr = m(0, 0) + m(1, 1);
            let det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            vec![det, -tr]
        }
        3 => {
            let tr = m(0, 0) + m(1, 1) + m(2, 2);
            let minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2)
                - m(0, 2) * m(2, 0)
                + m(1, 1) * m(2, 2)
                - m(1, 2) * m(2, 1);
            let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            vec![-det, minors, -tr]
        }
        _ => panic!("oracle only covers n <= 3"),
    }
}

/// Real roots (descending) of a characteristic polynomial with only real
/// roots, via the quadratic formula or the trigonometric cubic solution.
pub fn real_roots(coeffs: &[Complex]) -> Vec<f64> {
    let c: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
    let mut roots = match c.len() {
        1 => vec![-c[0]],
        2 => {
            let (b, q) = (c[1], c[0]);
            let disc = (b * b - 4.0 * q).max(0.0).sqrt();
            vec![(-b + disc) / 2.0, (-b - disc) / 2.0]
        }
        3 => {
            let (a2, a1, a0) = (c[2], c[1], c[0]);
            // depressed cubic t³ + p t + q with λ = t - a2/3
            let p = a1 - a2 * a2 / 3.0;
            let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
            let shift = -a2 / 3.0;
            if p.abs() < 1e-300 {
                vec![shift + (-q).cbrt(); 3]
            } else {
                let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
                let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
                let theta = arg.acos() / 3.0;
                (0..3)
                    .map(|k| {
                        shift + m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos()
                    })
                    .collect()
            }
        }
        _ => unreachable!(),
    };
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Durand–Kerner iteration on a monic polynomial, finished with Newton steps.
pub fn complex_roots(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len();
    let eval = |z: Complex| {
        let mut acc = Complex::new(1.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * z + coeffs[k];
        }
        acc
    };
    let deriv = |z: Complex| {
        let mut acc = Complex::new(n as f64, 0.0);
        for k in (1..n).rev() {
            acc = acc * z + coeffs[k] * k as f64;
        }
        acc
    };
    let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-16 * scale {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let d = deriv(*zi);
            if d.norm() > 1e-12 {
                *zi -= eval(*zi) / d;
            }
        }
    }
    z
}

/// Greedy matching distance between two root multisets.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    let mut remaining: Vec<Complex> = b.to_vec();
    let mut worst = 0.0f64;
    for x in a {
        let (idx, d) = remaining
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("same length");
        worst = worst.max(d);
        remaining.swap_remove(idx);
    }
    worst
}

pub fn random_hermitian(rng: &mut SplitMix64, n: usize) -> ComplexMatrix {
    rng.gaussian_matrix(n).real_part()
}

/// Hermitian eigenvalue oracle (n ≤ 3).
pub fn hermitian_oracle(h: &ComplexMatrix) -> Vec<f64> {
    real_roots(&char_poly(h))
}

/// Singular value oracle (n ≤ 3): square roots of the Gram matrix's roots.
pub fn singular_value_oracle(a: &ComplexMatrix) -> Vec<f64> {
    let gram = &a.adjoint() * a;
    hermitian_oracle(&gram)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect()
}

/// Ascending-order enumeration of all index sets `1 ≤ i₁ < … < i_k ≤ n`.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect())
        .collect()
}

pub mod suites;
