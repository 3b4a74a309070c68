//! Seeded randomized suites shared by the acceptance gate and the property
//! tests. Each returns the number of cases run and a description of every
//! failure.

use harnack::cayley::{fan_hoffman_check, CayleyDifference, CayleySpectrum};
use harnack::conjectures::{j_conjecture_slack, special_case_check, weak_bounds_check, SpecialCase};
use harnack::harnack::{
    determinant_consistency, identity_residuals, multi_matrix_bound, naive_lower_bound_check,
    tung_check, HarnackSpectrum,
};
use harnack::linalg::{
    derive_seed, general_eigenvalues, hermitian_eigenvalues, random_matrix, singular_values,
    Complex, ComplexMatrix, GenerationMode, RandomSpec, SplitMix64,
};
use harnack::{IndexSet, Settings};

use super::{char_poly, complex_roots, hermitian_oracle, multiset_distance, random_hermitian, singular_value_oracle};

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, what: String) {
        // keep reports readable when something is systematically wrong
        if self.failures.len() < 20 {
            self.failures.push(what);
        }
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{} cases", self.cases)
        } else {
            format!("{} cases, first failures: {:?}", self.cases, self.failures)
        }
    }
}

/// Strict contraction for trial `t`: n cycles through 2..=6 and the
/// generation mode through every mode; `σ₁` is drawn from [0.05, 0.999].
pub fn contraction(seed: u64, t: usize) -> ComplexMatrix {
    contraction_of_size(seed, t, 2 + t % 5)
}

pub fn contraction_of_size(seed: u64, t: usize, n: usize) -> ComplexMatrix {
    let mode = GenerationMode::ALL[(t / 5) % GenerationMode::ALL.len()];
    let mut rng = SplitMix64::new(derive_seed(seed, t as u64));
    let max_norm = 0.05 + 0.949 * rng.next_f64();
    random_matrix(&RandomSpec::new(n, mode, max_norm, rng.next_u64())).expect("valid spec")
}

/// Matrix with `σ₁ ∈ [1.05, 3]` whose eigenvalues stay away from 1.
pub fn non_contraction(seed: u64, t: usize) -> ComplexMatrix {
    let n = 2 + t % 5;
    let mut rng = SplitMix64::new(derive_seed(seed, t as u64));
    loop {
        let g = rng.gaussian_matrix(n);
        let target = 1.05 + 1.95 * rng.next_f64();
        let a = g.scale_real(target / singular_values(&g)[0]);
        let one = Complex::new(1.0, 0.0);
        let gap = general_eigenvalues(&a)
            .expect("converges")
            .iter()
            .map(|l| (one - l).norm())
            .fold(f64::INFINITY, f64::min);
        if gap > 1e-3 {
            return a;
        }
    }
}

pub fn identity_suite(count: usize, seed: u64) -> SuiteOutcome {
    let settings = Settings::default();
    let mut out = SuiteOutcome::default();
    for t in 0..count {
        let contractive = t % 2 == 0;
        let a = if contractive { contraction(seed, t) } else { non_contraction(seed, t) };
        out.cases += 1;
        match identity_residuals(&a, &settings) {
            Ok(res) => {
                if !res.all_hold() {
                    out.fail(format!("trial {t}: residuals {:?} over {}", res.entries(), res.threshold()));
                }
                if res.exp3.is_some() != contractive {
                    out.fail(format!("trial {t}: exp3 presence {:?} for contractive={contractive}", res.exp3));
                }
            }
            Err(e) => out.fail(format!("trial {t}: {e}")),
        }
    }
    out
}

fn inequality_case(a: &ComplexMatrix, seed: u64, t: usize, settings: &Settings) -> Result<Vec<String>, String> {
    let e = |err: harnack::Error| err.to_string();
    let mut bad = Vec::new();
    let n = a.n();
    let spectrum = HarnackSpectrum::new(a, settings).map_err(e)?;
    for (j, c) in spectrum.eigenvalue_bounds().iter().enumerate() {
        if !c.holds {
            bad.push(format!("eigenvalue bound j={} {c:?}", j + 1));
        }
    }
    if spectrum.eigenvalues[n - 1] <= 0.0 {
        bad.push(format!("H not positive definite: {:?}", spectrum.eigenvalues));
    }
    for s in IndexSet::enumerate(n, 50, derive_seed(seed, t as u64 + 1)) {
        let rep = spectrum.report("sample", &s).map_err(e)?;
        if !rep.passes() {
            let failing: Vec<_> = rep.verdict.iter().filter(|(_, &v)| !v).map(|(k, _)| k).collect();
            bad.push(format!("index set {s}: {failing:?} slacks {:?}", rep.slacks));
        }
        if !rep.upper_bounds.lattice_holds(settings) {
            bad.push(format!("lattice order at {s}: {:?}", rep.upper_bounds));
        }
    }
    for row in naive_lower_bound_check(a, settings).map_err(e)? {
        if !row.valid_reversed.holds || !row.valid_swapped.holds {
            bad.push(format!("valid lower ends at j={}: {row:?}", row.j));
        }
    }
    let mut rng = SplitMix64::new(derive_seed(seed ^ 0x5eed, t as u64));
    let tung = tung_check(a, &rng.unitary(n), settings).map_err(e)?;
    if !tung.holds {
        bad.push(format!("determinant chain {tung:?}"));
    }
    let (product, ratio, relative) = determinant_consistency(a).map_err(e)?;
    if relative > 1e-9 {
        bad.push(format!("product of eigenvalues {product} vs determinant ratio {ratio}"));
    }
    let weak = weak_bounds_check(a, settings).map_err(e)?;
    if !weak.all_hold() {
        bad.push(format!("weak bounds {weak:?}"));
    }

    // two-matrix extension with ‖BA⁻¹‖ ≤ 0.9 by construction
    let floor = 0.3 + 0.2 * rng.next_f64();
    let mut sigma: Vec<f64> = (0..n).map(|_| floor + (0.95 - floor) * rng.next_f64()).collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    let big = random_matrix(&RandomSpec::prescribed(sigma.clone(), rng.next_u64())).map_err(e)?;
    let small_norm = 0.9 * sigma[n - 1] * (0.05 + 0.95 * rng.next_f64());
    let small = random_matrix(&RandomSpec::new(n, GenerationMode::GaussianScaled, small_norm, rng.next_u64())).map_err(e)?;
    let s = IndexSet::enumerate(n, 50, t as u64);
    let s = &s[t % s.len()];
    let multi = multi_matrix_bound(&big, &small, s, settings).map_err(e)?;
    if !multi.holds || multi.rhs.is_none() || multi.identity_residual > 1e-10 * multi.identity_scale {
        bad.push(format!("two-matrix bound {multi:?}"));
    }
    Ok(bad)
}

pub fn inequality_suite(count: usize, seed: u64) -> SuiteOutcome {
    let settings = Settings::default();
    let mut out = SuiteOutcome::default();
    for t in 0..count {
        let a = contraction(seed, t);
        out.cases += 1;
        match inequality_case(&a, seed, t, &settings) {
            Ok(bad) => bad.into_iter().for_each(|b| out.fail(format!("trial {t}: {b}"))),
            Err(err) => out.fail(format!("trial {t}: {err}")),
        }
    }
    out
}

pub fn cayley_pair_suite(count: usize, seed: u64) -> SuiteOutcome {
    let settings = Settings::default();
    let mut out = SuiteOutcome::default();
    for t in 0..count {
        let n = 2 + t % 5;
        let a = contraction_of_size(seed, 2 * t, n);
        let b = contraction_of_size(seed, 2 * t + 1, n);
        out.cases += 1;
        let result = (|| -> harnack::Result<Vec<String>> {
            let mut bad = Vec::new();
            let single = CayleySpectrum::new(&a, &settings)?;
            let diff = CayleyDifference::new(&a, &b, &settings)?;
            if diff.identity_residual > 1e-10 {
                bad.push(format!("factorization residual {}", diff.identity_residual));
            }
            for (lo, hi) in single.per_index() {
                if !lo.holds || !hi.holds {
                    bad.push(format!("per-index chain {lo:?} {hi:?}"));
                }
            }
            for s in IndexSet::enumerate(n, 50, derive_seed(seed, t as u64)) {
                for rep in [single.report(&s)?, diff.report(&s)?] {
                    if !rep.passes() {
                        bad.push(format!("{rep:?}"));
                    }
                }
            }
            Ok(bad)
        })();
        match result {
            Ok(bad) => bad.into_iter().for_each(|b| out.fail(format!("pair {t}: {b}"))),
            Err(err) => out.fail(format!("pair {t}: {err}")),
        }
    }
    out
}

pub fn hermitian_pair_suite(count: usize, seed: u64) -> SuiteOutcome {
    let settings = Settings::default();
    let mut out = SuiteOutcome::default();
    let mut rng = SplitMix64::new(seed);
    for t in 0..count {
        let n = 2 + t % 5;
        let scale = 0.1 + 4.0 * rng.next_f64();
        let a = random_hermitian(&mut rng, n).scale_real(scale);
        let b = random_hermitian(&mut rng, n).scale_real(scale);
        out.cases += 1;
        match fan_hoffman_check(&a, &b, &settings) {
            Ok(rep) if rep.passes() => {}
            Ok(rep) => out.fail(format!("pair {t}: {rep:?}")),
            Err(err) => out.fail(format!("pair {t}: {err}")),
        }
    }
    out
}

/// Special-case suites for the per-index conjecture, slack ≥ −1e-9.
pub fn special_case_suite(count: usize, seed: u64, case: SpecialCase) -> SuiteOutcome {
    let settings = Settings::default();
    let mut out = SuiteOutcome::default();
    let mode = match case {
        SpecialCase::Normal => Some(GenerationMode::Normal),
        SpecialCase::SingularFirstIndex => Some(GenerationMode::SingularContraction),
        SpecialCase::LastIndex => None,
    };
    for t in 0..count {
        let n = 1 + t % 6;
        let a = match mode {
            Some(mode) => {
                let mut rng = SplitMix64::new(derive_seed(seed, t as u64));
                let max_norm = 0.05 + 0.949 * rng.next_f64();
                random_matrix(&RandomSpec::new(n, mode, max_norm, rng.next_u64())).expect("valid spec")
            }
            None => contraction_of_size(seed, t, n),
        };
        out.cases += 1;
        let report = match special_case_check(&a, &settings) {
            Ok(r) => r,
            Err(err) => {
                out.fail(format!("trial {t}: {err}"));
                continue;
            }
        };
        match report.case(case) {
            Some(v) if v.min_slack >= -1e-9 => {}
            Some(v) => out.fail(format!("trial {t}: {v:?}")),
            None => out.fail(format!("trial {t}: case {case:?} not detected (normal={}, singular={})", report.is_normal, report.is_singular)),
        }
        if let Ok(rec) = j_conjecture_slack(&a, &settings) {
            let idx = match case {
                SpecialCase::Normal => None,
                SpecialCase::LastIndex => Some(n - 1),
                SpecialCase::SingularFirstIndex => Some(0),
            };
            let s = idx.map_or(rec.min_slack, |i| rec.slacks[i]);
            if s < -1e-9 {
                out.fail(format!("trial {t}: direct slack {s}"));
            }
        }
    }
    out
}

/// Hermitian eigenvalues and singular values (n ∈ {2, 3}) against the
/// characteristic-polynomial oracles, and general eigenvalues against
/// polynomial roots plus trace/determinant consistency.
pub fn oracle_suite(count: usize, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    let mut rng = SplitMix64::new(seed);
    for t in 0..count {
        for n in [2, 3] {
            out.cases += 1;
            let scale = 0.1 + 3.0 * rng.next_f64();
            let h = random_hermitian(&mut rng, n).scale_real(scale);
            let a = rng.gaussian_matrix(n).scale_real(scale);

            let got = hermitian_eigenvalues(&h).expect("hermitian");
            let want = hermitian_oracle(&h);
            if got.iter().zip(&want).any(|(g, w)| (g - w).abs() > 1e-9) {
                out.fail(format!("trial {t} n={n}: hermitian {got:?} vs {want:?}"));
            }
            let got = singular_values(&a);
            let want = singular_value_oracle(&a);
            if got.iter().zip(&want).any(|(g, w)| (g - w).abs() > 1e-9) {
                out.fail(format!("trial {t} n={n}: singular {got:?} vs {want:?}"));
            }
            let eig = general_eigenvalues(&a).expect("converges");
            let roots = complex_roots(&char_poly(&a));
            let norm = a.frobenius_norm();
            if multiset_distance(&eig, &roots) > 1e-8 * (1.0 + norm) {
                out.fail(format!("trial {t} n={n}: eigenvalues {eig:?} vs roots {roots:?}"));
            }
            let trace: Complex = eig.iter().sum();
            let det: Complex = eig.iter().product();
            let want_det = harnack::linalg::determinant(&a).expect("square");
            if (trace - a.trace()).norm() > 1e-10 * n as f64 * (1.0 + norm)
                || (det - want_det).norm() > 1e-9 * (1.0 + norm.powi(n as i32))
            {
                out.fail(format!("trial {t} n={n}: trace/det mismatch"));
            }
        }
    }
    out
}
