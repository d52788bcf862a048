//! Projected stochastic hillclimbing reference optimizer.
//!
//! A gradient-free accept-reject baseline for the same layered scalar
//! surrogate as the ascent runs. Each iteration makes up to `retries + 1`
//! trials: pick one point uniformly at random, move it along a random unit
//! direction, project the configuration, and accept the trial if the
//! surrogate does not decrease. A failed trial shrinks the trial step; an
//! accepted trial makes its step the new working step. When every trial
//! fails the iterate and the working step are kept unchanged. The accepted
//! value sequence is therefore nondecreasing by construction, which makes
//! the method mainly diagnostic: it checks whether simple local moves can
//! still improve the indicator where gradient information is unreliable.

use crate::ascent::{
    objective_image, perturb_points, project, surrogate_value, AscentError, FeasibleRegion,
    ObjectiveMap, RecoveryConfig, RunResult, TraceRecord,
};
use crate::geometry::{nondominated_sort, PointSet};
use crate::indicators::SurrogateConfig;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Step-control parameters of the hillclimber.
///
/// The random stream is fixed by `seed` and consumed per trial as: point
/// index first, then the direction coordinates; an optional recovery kick
/// consumes its draws in the same stream.
#[derive(Debug, Clone, PartialEq)]
pub struct HillclimbConfig {
    /// Initial step size.
    pub alpha0: f64,
    /// Multiplicative shrink factor applied after a failed trial.
    pub rho: f64,
    /// Step-size floor.
    pub alpha_min: f64,
    /// Extra trials per iteration after the first.
    pub retries: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Optional stagnation coupling: when set, a stagnating run applies the
    /// same multi-point perturbation as the gradient episodes, accepted
    /// unconditionally. Off by default, which keeps the accepted-value
    /// sequence nondecreasing.
    pub recovery: Option<RecoveryConfig>,
}

impl Default for HillclimbConfig {
    fn default() -> Self {
        Self {
            alpha0: 0.05,
            rho: 0.5,
            alpha_min: 2e-3,
            retries: 10,
            max_iters: 1000,
            seed: 8,
            recovery: None,
        }
    }
}

impl HillclimbConfig {
    fn validate(&self) -> Result<(), AscentError> {
        if !(self.alpha0 > 0.0) {
            return Err(AscentError::InvalidConfig("alpha0 must be positive"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(AscentError::InvalidConfig("rho must be in (0, 1)"));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min <= self.alpha0) {
            return Err(AscentError::InvalidConfig(
                "alpha_min must be positive and at most alpha0",
            ));
        }
        if self.max_iters == 0 {
            return Err(AscentError::InvalidConfig("max_iters must be at least 1"));
        }
        Ok(())
    }
}

fn snapshot(iteration: usize, value: f64, state: &PointSet, map: &dyn ObjectiveMap) -> TraceRecord {
    let image = objective_image(state, map);
    TraceRecord {
        iteration,
        value,
        layer_sizes: nondominated_sort(&image).layer_sizes(),
        points: state.points().to_vec(),
        objective_points: if map.is_identity() {
            None
        } else {
            Some(image.points().to_vec())
        },
        perturbation: false,
    }
}

/// Runs the projected stochastic hillclimber and returns the final
/// configuration with its per-iteration trace.
pub fn hillclimb(
    x0: &PointSet,
    region: &FeasibleRegion,
    surrogate: &SurrogateConfig,
    cfg: &HillclimbConfig,
    map: &dyn ObjectiveMap,
) -> Result<RunResult, AscentError> {
    cfg.validate()?;
    region.validate_for(x0.dim())?;
    if x0.is_empty() {
        return Err(AscentError::InvalidConfig(
            "the approximation set must contain at least one point",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = project(x0, region)?;
    let mut value = surrogate_value(&state, map, surrogate);
    let mut alpha = cfg.alpha0;
    let mut values = vec![value];
    let mut trace = vec![snapshot(0, value, &state, map)];
    let mut last_kick: Option<usize> = None;
    for k in 0..cfg.max_iters {
        if let Some(recovery) = &cfg.recovery {
            let quiet = last_kick.is_none_or(|p| k - p >= recovery.window);
            let stagnating = k >= recovery.window
                && quiet
                && values[k] - values[k - recovery.window] < recovery.min_growth;
            let frozen = k >= cfg.max_iters.saturating_sub(recovery.freeze_tail);
            if stagnating && !frozen {
                last_kick = Some(k);
                state = perturb_points(&state, region, recovery, &mut rng)?;
                value = surrogate_value(&state, map, surrogate);
                values.push(value);
                let mut record = snapshot(k + 1, value, &state, map);
                record.perturbation = true;
                trace.push(record);
                continue;
            }
        }
        let mut alpha_trial = alpha;
        for _ in 0..=cfg.retries {
            let i = rng.random_range(0..state.len());
            let direction = unit_direction(state.dim(), &mut rng);
            let mut trial = state.clone();
            let moved: Vec<f64> = state
                .point(i)
                .iter()
                .zip(&direction)
                .map(|(x, d)| x + alpha_trial * d)
                .collect();
            trial.replace_point(i, region.project_point(&moved)?);
            let trial_value = surrogate_value(&trial, map, surrogate);
            if trial_value >= value {
                state = trial;
                value = trial_value;
                alpha = alpha_trial;
                break;
            }
            alpha_trial = (cfg.rho * alpha_trial).max(cfg.alpha_min);
        }
        // On full failure the iterate and working step stay unchanged.
        values.push(value);
        trace.push(snapshot(k + 1, value, &state, map));
    }
    Ok(RunResult {
        final_state: state,
        trace,
    })
}

fn unit_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return d.into_iter().map(|v| v / norm).collect();
        }
    }
}
