//! Seeded random matrix generation.
//!
//! All randomness comes from a SplitMix64 stream; Gaussians use Box–Muller.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{Complex, ComplexMatrix};
use super::svd::{singular_values, spectral_norm};
use crate::error::{Error, Result};

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Standard complex Gaussian: `E|z|² = 1`.
    pub fn complex_gaussian(&mut self) -> Complex {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex::new(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn gaussian_matrix(&mut self, n: usize) -> ComplexMatrix {
        let data = (0..n * n).map(|_| self.complex_gaussian()).collect();
        ComplexMatrix::from_row_major(n, data).expect("gaussian entries are finite")
    }

    /// Random unitary from Gram–Schmidt on a Gaussian matrix.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        loop {
            let g = self.gaussian_matrix(n);
            if let Some(q) = gram_schmidt(&g) {
                return q;
            }
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `index` derived from `seed`, independent of evaluation order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Orthonormalizes the columns (modified Gram–Schmidt, two passes).
/// Returns `None` if the columns are numerically dependent.
pub fn gram_schmidt(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.n();
    let mut q = a.clone();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let dot: Complex = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..n {
                    let qik = q[(i, k)];
                    q[(i, j)] -= dot * qik;
                }
            }
        }
        let norm = q.column_norm(j);
        if norm < 1e-10 * a.column_norm(j).max(f64::MIN_POSITIVE) {
            return None;
        }
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    Some(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationMode {
    GaussianScaled,
    PrescribedSingularValues,
    Hermitian,
    Normal,
    SingularContraction,
}

impl GenerationMode {
    pub const ALL: [GenerationMode; 5] = [
        GenerationMode::GaussianScaled,
        GenerationMode::PrescribedSingularValues,
        GenerationMode::Hermitian,
        GenerationMode::Normal,
        GenerationMode::SingularContraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenerationMode::GaussianScaled => "gaussian-scaled",
            GenerationMode::PrescribedSingularValues => "prescribed-singular-values",
            GenerationMode::Hermitian => "hermitian",
            GenerationMode::Normal => "normal",
            GenerationMode::SingularContraction => "singular-contraction",
        }
    }
}

impl fmt::Display for GenerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenerationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-scaled" | "gaussian" => Ok(GenerationMode::GaussianScaled),
            "prescribed-singular-values" | "prescribed" => {
                Ok(GenerationMode::PrescribedSingularValues)
            }
            "hermitian" => Ok(GenerationMode::Hermitian),
            "normal" => Ok(GenerationMode::Normal),
            "singular-contraction" | "singular" => Ok(GenerationMode::SingularContraction),
            other => Err(Error::InvalidSpec(format!("unknown generation mode {other:?}"))),
        }
    }
}

/// Recipe for one random matrix.
///
/// Prescribed and singular modes sample a spread spectrum with `σ₁ = max_norm`
/// when `prescribed` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    pub mode: GenerationMode,
    pub max_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prescribed: Option<Vec<f64>>,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, mode: GenerationMode, max_norm: f64, seed: u64) -> Self {
        Self {
            n,
            mode,
            max_norm,
            prescribed: None,
            seed,
        }
    }

    pub fn prescribed(values: Vec<f64>, seed: u64) -> Self {
        Self {
            n: values.len(),
            mode: GenerationMode::PrescribedSingularValues,
            max_norm: values.first().copied().unwrap_or(0.0).clamp(0.5, 0.999_999),
            prescribed: Some(values),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if !(self.max_norm > 0.0 && self.max_norm < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "max_norm must lie in (0, 1), got {}",
                self.max_norm
            )));
        }
        if let Some(p) = &self.prescribed {
            if p.len() != self.n {
                return Err(Error::InvalidSpec(format!(
                    "expected {} prescribed singular values, got {}",
                    self.n,
                    p.len()
                )));
            }
            if p.iter().any(|&x| !(0.0..1.0).contains(&x)) {
                return Err(Error::InvalidSpec(
                    "prescribed singular values must lie in [0, 1)".into(),
                ));
            }
            if p.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidSpec(
                    "prescribed singular values must be sorted descending".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Deterministic function of `spec` (including its seed).
pub fn random_matrix(spec: &RandomSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = SplitMix64::new(spec.seed);
    let m = match spec.mode {
        GenerationMode::GaussianScaled => {
            let g = rng.gaussian_matrix(n);
            rescale(&g, spec.max_norm)
        }
        GenerationMode::Hermitian => {
            let g = rng.gaussian_matrix(n).real_part();
            rescale(&g, spec.max_norm)
        }
        GenerationMode::Normal => {
            let u = rng.unitary(n);
            let mut z: Vec<Complex> = (0..n)
                .map(|_| {
                    let r = rng.next_f64().sqrt();
                    Complex::from_polar(r, std::f64::consts::TAU * rng.next_f64())
                })
                .collect();
            let largest = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if largest > 0.0 {
                for v in &mut z {
                    *v *= spec.max_norm / largest;
                }
            }
            &(&u * &ComplexMatrix::diag(&z)) * &u.adjoint()
        }
        GenerationMode::PrescribedSingularValues | GenerationMode::SingularContraction => {
            let mut sigma = match &spec.prescribed {
                Some(p) => p.clone(),
                None => spread_spectrum(&mut rng, n, spec.max_norm),
            };
            if spec.mode == GenerationMode::SingularContraction {
                sigma[n - 1] = 0.0;
            }
            let u = rng.unitary(n);
            let v = rng.unitary(n);
            with_singular_values(&u, &sigma, &v)
        }
    };
    Ok(m)
}

/// `U diag(σ) V*`.
pub fn with_singular_values(u: &ComplexMatrix, sigma: &[f64], v: &ComplexMatrix) -> ComplexMatrix {
    &(u * &ComplexMatrix::diag_real(sigma)) * &v.adjoint()
}

/// `σ₁ = max_norm`, `σₙ` pushed toward zero, the rest uniform in between.
fn spread_spectrum(rng: &mut SplitMix64, n: usize, max_norm: f64) -> Vec<f64> {
    let mut sigma = vec![max_norm; n];
    if n > 1 {
        let floor = max_norm * rng.next_f64().powi(3);
        sigma[n - 1] = floor;
        for s in sigma.iter_mut().take(n - 1).skip(1) {
            *s = floor + (max_norm - floor) * rng.next_f64();
        }
        sigma.sort_by(|a, b| b.total_cmp(a));
    }
    sigma
}

fn rescale(m: &ComplexMatrix, target: f64) -> ComplexMatrix {
    let s = spectral_norm(m);
    if s == 0.0 {
        m.clone()
    } else {
        m.scale_real(target / s)
    }
}

/// Rescales `m` so that `σ₁(m) ≤ limit`; matrices already inside are returned unchanged.
pub fn project_to_ball(m: &ComplexMatrix, limit: f64) -> ComplexMatrix {
    let s = singular_values(m)[0];
    if s > limit {
        m.scale_real(limit / s)
    } else {
        m.clone()
    }
}
