//! Seeded randomized search for the smallest per-index slack, followed by a
//! local random descent from the best trial.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{j_conjecture_slack, ConjectureRecord};
use crate::check::{Settings, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::{
    derive_seed, project_to_ball, random_matrix, ComplexMatrix, GenerationMode, RandomSpec,
    SplitMix64,
};

/// A `min_slack` below this counts as a counterexample.
pub const VIOLATION_THRESHOLD: f64 = -1e-8;

/// Upper edges of the slack histogram bins; the last bin is open.
pub const HISTOGRAM_EDGES: [f64; 6] = [VIOLATION_THRESHOLD, 0.0, 1e-4, 1e-3, 1e-2, 1e-1];

const SMALLEST_NORM: f64 = 0.05;
const REJECTIONS_BEFORE_SHRINK: usize = 20;
const DESCENT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub modes: Vec<GenerationMode>,
    pub descent_steps: usize,
    pub descent_scale: f64,
    pub margin: f64,
    /// Fixed spectrum for the prescribed and singular modes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prescribed: Option<Vec<f64>>,
}

impl SearchConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            modes: GenerationMode::ALL.to_vec(),
            descent_steps: 0,
            descent_scale: 0.05,
            margin: DEFAULT_MARGIN,
            prescribed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.n == 0 {
            return bad("n must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be positive");
        }
        if self.modes.is_empty() {
            return bad("at least one generation mode is required");
        }
        if !(self.margin > 0.0 && self.margin < 0.25) {
            return bad("margin must lie in (0, 0.25)");
        }
        if self.descent_steps > 0 && !(self.descent_scale > 0.0 && self.descent_scale.is_finite()) {
            return bad("descent scale must be positive");
        }
        if let Some(p) = &self.prescribed {
            if p.len() != self.n {
                return bad("prescribed spectrum length must equal n");
            }
            if p.iter().any(|&s| !(0.0..=1.0 - self.margin).contains(&s)) {
                return bad("prescribed singular values must lie in [0, 1 - margin]");
            }
            if p.windows(2).any(|w| w[0] < w[1]) {
                return bad("prescribed singular values must be sorted descending");
            }
        }
        Ok(())
    }

    fn settings(&self) -> Settings {
        Settings {
            margin: self.margin,
            ..Settings::default()
        }
    }

    /// Matrix for trial `t`; a pure function of the config and `t`.
    pub fn trial_matrix(&self, t: usize) -> Result<(GenerationMode, u64, ComplexMatrix)> {
        let trial_seed = derive_seed(self.seed, t as u64);
        let mode = self.modes[t % self.modes.len()];
        let mut rng = SplitMix64::new(trial_seed);
        let ceiling = 1.0 - 2.0 * self.margin;
        let u = rng.next_f64();
        let max_norm = if ceiling > SMALLEST_NORM {
            SMALLEST_NORM + (ceiling - SMALLEST_NORM) * u.sqrt()
        } else {
            ceiling
        };
        let prescribed = match mode {
            GenerationMode::PrescribedSingularValues | GenerationMode::SingularContraction => {
                self.prescribed.clone()
            }
            _ => None,
        };
        let spec = RandomSpec {
            n: self.n,
            mode,
            max_norm,
            prescribed,
            seed: rng.next_u64(),
        };
        Ok((mode, trial_seed, random_matrix(&spec)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeHistogram {
    pub mode: GenerationMode,
    pub count: usize,
    pub min_slack: f64,
    pub max_slack: f64,
    pub mean_slack: f64,
    /// Counts per bin, bounded above by `HISTOGRAM_EDGES` and then open.
    pub bins: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentSummary {
    pub steps: usize,
    pub accepted: usize,
    pub initial_slack: f64,
    pub final_slack: f64,
    pub final_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub config: SearchConfig,
    pub trials_completed: usize,
    pub best: ConjectureRecord,
    pub best_trial: usize,
    pub histograms: Vec<ModeHistogram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descent: Option<DescentSummary>,
    pub violation_threshold: f64,
    pub violation_found: bool,
}

impl SearchSummary {
    /// Recomputes the violation flag from `best`.
    pub fn refresh_violation(&mut self) {
        self.violation_found = self.best.min_slack < self.violation_threshold;
    }
}

/// Summary plus the per-trial `(mode, min_slack)` stream in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub summary: SearchSummary,
    pub trials: Vec<(GenerationMode, f64)>,
}

pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let settings = config.settings();
    let trials: Vec<(GenerationMode, f64)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let (mode, _, a) = config.trial_matrix(t)?;
            Ok((mode, j_conjecture_slack(&a, &settings)?.min_slack))
        })
        .collect::<Result<_>>()?;

    // first index wins ties
    let best_trial = trials
        .iter()
        .enumerate()
        .fold(0, |b, (t, x)| if x.1 < trials[b].1 { t } else { b });
    let (mode, trial_seed, a) = config.trial_matrix(best_trial)?;
    let mut best = j_conjecture_slack(&a, &settings)?;
    best.trial_seed = trial_seed;
    best.mode = Some(mode);

    let descent = (config.descent_steps > 0).then(|| descend(config, &settings, &mut best));
    let mut summary = SearchSummary {
        config: config.clone(),
        trials_completed: trials.len(),
        best,
        best_trial,
        histograms: histograms(config, &trials),
        descent,
        violation_threshold: VIOLATION_THRESHOLD,
        violation_found: false,
    };
    summary.refresh_violation();
    Ok(SearchOutcome { summary, trials })
}

fn descend(config: &SearchConfig, settings: &Settings, best: &mut ConjectureRecord) -> DescentSummary {
    let mut rng = SplitMix64::new(derive_seed(config.seed, DESCENT_STREAM));
    let limit = (1.0 - config.margin) * (1.0 - 1e-12);
    let initial_slack = best.min_slack;
    let mut scale = config.descent_scale;
    let mut rejections = 0;
    let mut accepted = 0;
    for _ in 0..config.descent_steps {
        let step = rng.gaussian_matrix(config.n).scale_real(scale);
        let candidate = project_to_ball(&(&best.matrix + &step), limit);
        match j_conjecture_slack(&candidate, settings) {
            Ok(rec) if rec.min_slack < best.min_slack => {
                best.matrix = rec.matrix;
                best.slacks = rec.slacks;
                best.min_slack = rec.min_slack;
                best.min_j = rec.min_j;
                best.norm_slack = rec.norm_slack;
                accepted += 1;
                rejections = 0;
            }
            _ => {
                rejections += 1;
                if rejections == REJECTIONS_BEFORE_SHRINK {
                    scale *= 0.5;
                    rejections = 0;
                }
            }
        }
    }
    DescentSummary {
        steps: config.descent_steps,
        accepted,
        initial_slack,
        final_slack: best.min_slack,
        final_scale: scale,
    }
}

fn histograms(config: &SearchConfig, trials: &[(GenerationMode, f64)]) -> Vec<ModeHistogram> {
    let mut modes = config.modes.clone();
    modes.sort();
    modes.dedup();
    modes
        .into_iter()
        .filter_map(|mode| {
            let slacks: Vec<f64> = trials.iter().filter(|t| t.0 == mode).map(|t| t.1).collect();
            if slacks.is_empty() {
                return None;
            }
            let mut bins = vec![0; HISTOGRAM_EDGES.len() + 1];
            for &s in &slacks {
                bins[HISTOGRAM_EDGES.iter().take_while(|&&e| s >= e).count()] += 1;
            }
            Some(ModeHistogram {
                mode,
                count: slacks.len(),
                min_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
                max_slack: slacks.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_slack: slacks.iter().sum::<f64>() / slacks.len() as f64,
                bins,
            })
        })
        .collect()
}
