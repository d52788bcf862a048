//! Projected set-gradient ascent for layered indicator surrogates.
//!
//! The state is a labelled point set, either directly in objective space or
//! in a decision space that an [`ObjectiveMap`] sends to objective space.
//! Each iteration builds a direction field over all point coordinates
//! (symmetric finite differences of the composed surrogate, or the analytic
//! layered gradient when the state already lives in objective space),
//! optionally normalizes it per point, takes a fixed step, and projects the
//! result back onto the feasible region.
//!
//! Finite-difference probes are themselves projected before evaluation, so
//! a point pinned to a constraint face sees a one-sided quotient. Because
//! the surrogate recomputes nondomination layers on every evaluation, a
//! probe that crosses a layer switch reflects the resulting value jump; the
//! normalized step keeps that from producing an unbounded move.
//!
//! [`run_with_recovery`] wraps the same step in an episode loop with a
//! stagnation rule: when the surrogate has grown too little over a trailing
//! window, several points are perturbed simultaneously along random unit
//! directions and the perturbed state is accepted unconditionally, allowing
//! a temporary drop before gradient ascent resumes. Perturbations are
//! disabled during the final episodes so every run ends with a
//! deterministic polishing phase.

use crate::geometry::{nondominated_sort, GeometryError, PointSet};
use crate::indicators::{layered_gradient, layered_value, SurrogateConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Direction fields with Frobenius norm at or below this floor stop the
/// ascent; pointwise normalization skips rows at or below it as well.
const GRADIENT_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum AscentError {
    #[error("region dimension {region} does not match point dimension {points}")]
    RegionDimensionMismatch { region: usize, points: usize },
    #[error("box bounds must satisfy lo < hi in every coordinate")]
    InvalidBox,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("analytic gradients require the identity objective map")]
    AnalyticRequiresIdentityMap,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Feasible region for a single point; the feasible set of a configuration
/// is the product over all points.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleRegion {
    /// Axis-aligned box with per-coordinate bounds.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `{x in [0,1]^2 : x1 + x2 <= 1}`, for biobjective objective space.
    TriangleSumLe1,
    /// Standard 2-simplex `{x in R^3 : x >= 0, sum x = 1}`.
    Simplex,
}

impl FeasibleRegion {
    /// Uniform box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        FeasibleRegion::Box {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleRegion::Box { lo, .. } => lo.len(),
            FeasibleRegion::TriangleSumLe1 => 2,
            FeasibleRegion::Simplex => 3,
        }
    }

    pub fn validate_for(&self, point_dim: usize) -> Result<(), AscentError> {
        if let FeasibleRegion::Box { lo, hi } = self {
            if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                return Err(AscentError::InvalidBox);
            }
        }
        if self.dim() != point_dim {
            return Err(AscentError::RegionDimensionMismatch {
                region: self.dim(),
                points: point_dim,
            });
        }
        Ok(())
    }

    /// Euclidean projection of a single point onto the region.
    ///
    /// Boxes clip coordinatewise. The triangle first clips to the unit
    /// square, then projects onto the halfplane boundary if the coordinate
    /// sum still exceeds one, and re-clips. The simplex uses the sorting
    /// projection onto `{x >= 0, sum x = 1}`.
    pub fn project_point(&self, p: &[f64]) -> Result<Vec<f64>, AscentError> {
        self.validate_for(p.len())?;
        match self {
            FeasibleRegion::Box { lo, hi } => Ok(p
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| v.clamp(*a, *b))
                .collect()),
            FeasibleRegion::TriangleSumLe1 => {
                let mut x = p[0].clamp(0.0, 1.0);
                let mut y = p[1].clamp(0.0, 1.0);
                let excess = x + y - 1.0;
                if excess > 0.0 {
                    x -= excess / 2.0;
                    y -= excess / 2.0;
                    x = x.clamp(0.0, 1.0);
                    y = y.clamp(0.0, 1.0);
                }
                Ok(vec![x, y])
            }
            FeasibleRegion::Simplex => Ok(project_simplex(p)),
        }
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        match self {
            FeasibleRegion::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| *v >= a - tol && *v <= b + tol),
            FeasibleRegion::TriangleSumLe1 => {
                p.len() == 2
                    && p.iter().all(|v| *v >= -tol && *v <= 1.0 + tol)
                    && p[0] + p[1] <= 1.0 + tol
            }
            FeasibleRegion::Simplex => {
                p.len() == 3
                    && p.iter().all(|v| *v >= -tol)
                    && (p.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }
}

/// Sorting-based Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&vi| (vi - theta).max(0.0)).collect()
}

/// Projects every point of the set onto the region.
pub fn project(set: &PointSet, region: &FeasibleRegion) -> Result<PointSet, AscentError> {
    region.validate_for(set.dim())?;
    let mut out = set.clone();
    for i in 0..set.len() {
        let projected = region.project_point(set.point(i))?;
        out.replace_point(i, projected);
    }
    Ok(out)
}

/// Map from the state space of one point to objective space.
pub trait ObjectiveMap {
    fn objective_dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    /// True when the map is the identity, in which case the analytic
    /// gradient path is available.
    fn is_identity(&self) -> bool {
        false
    }
}

/// State space equals objective space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityMap {
    pub dim: usize,
}

impl ObjectiveMap for IdentityMap {
    fn objective_dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }

    fn is_identity(&self) -> bool {
        true
    }
}

/// Objective-space image of a state configuration.
pub fn objective_image(state: &PointSet, map: &dyn ObjectiveMap) -> PointSet {
    let pts = state.iter().map(|x| map.apply(x)).collect();
    PointSet::new(map.objective_dim(), pts).expect("objective map produced invalid points")
}

/// Composed surrogate: layered value of the objective-space image.
pub fn surrogate_value(
    state: &PointSet,
    map: &dyn ObjectiveMap,
    surrogate: &SurrogateConfig,
) -> f64 {
    layered_value(&objective_image(state, map), surrogate)
}

/// How the ascent direction field is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    /// Symmetric finite differences of the composed surrogate, with probes
    /// projected back to feasibility before evaluation.
    FiniteDifference,
    /// Analytic layered gradient; requires the identity objective map.
    Analytic,
}

/// Step-loop parameters of the projected ascent.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentConfig {
    /// Ascent step size.
    pub alpha: f64,
    /// Central finite-difference radius.
    pub fd_radius: f64,
    /// Maximum number of iterations.
    pub max_iters: usize,
    /// Stop when the absolute surrogate change falls to this tolerance.
    /// Zero keeps the loop running to the full budget.
    pub value_tolerance: f64,
    /// Normalize each point's direction to unit length before stepping.
    pub normalize_per_point: bool,
    pub gradient_mode: GradientMode,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.005,
            fd_radius: 1e-6,
            max_iters: 200,
            value_tolerance: 0.0,
            normalize_per_point: true,
            gradient_mode: GradientMode::FiniteDifference,
        }
    }
}

impl AscentConfig {
    fn validate(&self) -> Result<(), AscentError> {
        if !(self.alpha > 0.0) {
            return Err(AscentError::InvalidConfig("alpha must be positive"));
        }
        if !(self.fd_radius > 0.0) {
            return Err(AscentError::InvalidConfig("fd radius must be positive"));
        }
        if self.max_iters == 0 {
            return Err(AscentError::InvalidConfig("max_iters must be at least 1"));
        }
        if !(self.value_tolerance >= 0.0) {
            return Err(AscentError::InvalidConfig(
                "value tolerance must be nonnegative",
            ));
        }
        Ok(())
    }
}

/// Stagnation-recovery rule for episode runs.
///
/// When the surrogate grew by less than `min_growth` over the last `window`
/// episodes, `perturb_count` randomly chosen points are moved by
/// `perturb_step` along random unit directions and the result is accepted
/// unconditionally. No perturbation happens during the final `freeze_tail`
/// episodes. The random stream is fixed by `seed` and consumed in a
/// documented order: the point indices are drawn first (uniformly, redrawing
/// duplicates), then each chosen point's direction coordinates in choice
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryConfig {
    pub window: usize,
    pub min_growth: f64,
    pub perturb_step: f64,
    pub perturb_count: usize,
    pub freeze_tail: usize,
    pub seed: u64,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            window: 10,
            min_growth: 5e-3,
            perturb_step: 0.16,
            perturb_count: 3,
            freeze_tail: 10,
            seed: 8,
        }
    }
}

/// Snapshot of one iteration or episode.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Surrogate value of the current configuration.
    pub value: f64,
    /// Sizes of the objective-space nondomination layers; sums to the set size.
    pub layer_sizes: Vec<usize>,
    /// State-space coordinates of every labelled point.
    pub points: Vec<Vec<f64>>,
    /// Objective-space images, present when the state is a decision space.
    pub objective_points: Option<Vec<Vec<f64>>>,
    /// True when this episode applied a stagnation perturbation.
    pub perturbation: bool,
}

/// Final configuration plus the per-iteration trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_state: PointSet,
    pub trace: Vec<TraceRecord>,
}

impl RunResult {
    /// Number of steps that strictly increased the surrogate.
    pub fn accepted_steps(&self) -> usize {
        self.trace
            .windows(2)
            .filter(|w| w[1].value > w[0].value)
            .count()
    }

    /// Iterations actually performed.
    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}

fn snapshot(
    iteration: usize,
    value: f64,
    state: &PointSet,
    map: &dyn ObjectiveMap,
    perturbation: bool,
) -> TraceRecord {
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
        perturbation,
    }
}

/// Central finite-difference direction field of `eval` over all point
/// coordinates. Each probe is projected back onto the region before
/// evaluation, so probes from a constraint face collapse to one-sided
/// quotients.
pub fn fd_set_gradient<F: Fn(&PointSet) -> f64>(
    state: &PointSet,
    region: &FeasibleRegion,
    fd_radius: f64,
    eval: F,
) -> Result<Vec<Vec<f64>>, AscentError> {
    region.validate_for(state.dim())?;
    let dim = state.dim();
    let mut grads = vec![vec![0.0; dim]; state.len()];
    let mut probe = state.clone();
    for i in 0..state.len() {
        for c in 0..dim {
            let base = state.point(i)[c];
            probe.set_coord(i, c, base + fd_radius);
            let up_point = region.project_point(probe.point(i))?;
            probe.replace_point(i, up_point);
            let up = eval(&probe);
            probe.replace_point(i, state.point(i).to_vec());

            probe.set_coord(i, c, base - fd_radius);
            let down_point = region.project_point(probe.point(i))?;
            probe.replace_point(i, down_point);
            let down = eval(&probe);
            probe.replace_point(i, state.point(i).to_vec());

            grads[i][c] = (up - down) / (2.0 * fd_radius);
        }
    }
    Ok(grads)
}

/// Divides each row by its Euclidean norm; rows at or below the norm floor
/// are left unchanged.
pub fn normalize_pointwise(grads: &[Vec<f64>]) -> Vec<Vec<f64>> {
    grads
        .iter()
        .map(|row| {
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > GRADIENT_FLOOR {
                row.iter().map(|v| v / norm).collect()
            } else {
                row.clone()
            }
        })
        .collect()
}

fn frobenius_norm(grads: &[Vec<f64>]) -> f64 {
    grads
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

fn build_direction(
    state: &PointSet,
    region: &FeasibleRegion,
    surrogate: &SurrogateConfig,
    cfg: &AscentConfig,
    map: &dyn ObjectiveMap,
) -> Result<Vec<Vec<f64>>, AscentError> {
    let mut grads = match cfg.gradient_mode {
        GradientMode::FiniteDifference => fd_set_gradient(state, region, cfg.fd_radius, |s| {
            surrogate_value(s, map, surrogate)
        })?,
        GradientMode::Analytic => layered_gradient(state, surrogate),
    };
    if cfg.normalize_per_point {
        grads = normalize_pointwise(&grads);
    }
    Ok(grads)
}

fn step_and_project(
    state: &PointSet,
    direction: &[Vec<f64>],
    alpha: f64,
    region: &FeasibleRegion,
) -> Result<PointSet, AscentError> {
    let mut next = state.clone();
    for i in 0..state.len() {
        let moved: Vec<f64> = state
            .point(i)
            .iter()
            .zip(&direction[i])
            .map(|(x, g)| x + alpha * g)
            .collect();
        next.replace_point(i, region.project_point(&moved)?);
    }
    Ok(next)
}

fn validate_run_inputs(
    x0: &PointSet,
    region: &FeasibleRegion,
    cfg: &AscentConfig,
    map: &dyn ObjectiveMap,
) -> Result<(), AscentError> {
    cfg.validate()?;
    region.validate_for(x0.dim())?;
    if x0.is_empty() {
        return Err(AscentError::InvalidConfig(
            "the approximation set must contain at least one point",
        ));
    }
    if cfg.gradient_mode == GradientMode::Analytic && !map.is_identity() {
        return Err(AscentError::AnalyticRequiresIdentityMap);
    }
    Ok(())
}

/// Projected set-gradient ascent.
///
/// Projects the start configuration, then repeats: build the direction
/// field, optionally normalize per point, stop if the field is numerically
/// zero, take an `alpha` step, project, and stop when the surrogate change
/// falls to the value tolerance or the iteration budget is exhausted. Every
/// iteration is recorded in the trace, starting with the projected initial
/// configuration.
pub fn run_ascent(
    x0: &PointSet,
    region: &FeasibleRegion,
    surrogate: &SurrogateConfig,
    cfg: &AscentConfig,
    map: &dyn ObjectiveMap,
) -> Result<RunResult, AscentError> {
    validate_run_inputs(x0, region, cfg, map)?;
    let mut state = project(x0, region)?;
    let mut value = surrogate_value(&state, map, surrogate);
    let mut trace = vec![snapshot(0, value, &state, map, false)];
    for k in 0..cfg.max_iters {
        let direction = build_direction(&state, region, surrogate, cfg, map)?;
        if frobenius_norm(&direction) <= GRADIENT_FLOOR {
            break;
        }
        state = step_and_project(&state, &direction, cfg.alpha, region)?;
        let next_value = surrogate_value(&state, map, surrogate);
        trace.push(snapshot(k + 1, next_value, &state, map, false));
        let improvement = (next_value - value).abs();
        value = next_value;
        if improvement <= cfg.value_tolerance {
            break;
        }
    }
    Ok(RunResult {
        final_state: state,
        trace,
    })
}

/// Episode loop with stagnation recovery; one episode is one ascent step or
/// one multi-point perturbation.
pub fn run_with_recovery(
    x0: &PointSet,
    region: &FeasibleRegion,
    surrogate: &SurrogateConfig,
    cfg: &AscentConfig,
    recovery: &RecoveryConfig,
    episodes: usize,
    map: &dyn ObjectiveMap,
) -> Result<RunResult, AscentError> {
    validate_run_inputs(x0, region, cfg, map)?;
    if recovery.window == 0 {
        return Err(AscentError::InvalidConfig("window must be at least 1"));
    }
    if episodes < recovery.freeze_tail {
        return Err(AscentError::InvalidConfig(
            "episodes must be at least the freeze tail",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recovery.seed);
    let mut state = project(x0, region)?;
    let mut values = vec![surrogate_value(&state, map, surrogate)];
    let mut trace = vec![snapshot(0, values[0], &state, map, false)];
    let mut last_perturbation: Option<usize> = None;
    for k in 0..episodes {
        // Gradient ascent must run for a full window after a perturbation
        // before the stagnation test can fire again.
        let quiet = last_perturbation.is_none_or(|p| k - p >= recovery.window);
        let stagnating = k >= recovery.window
            && quiet
            && values[k] - values[k - recovery.window] < recovery.min_growth;
        let frozen = k >= episodes - recovery.freeze_tail;
        let perturbation = stagnating && !frozen;
        if perturbation {
            last_perturbation = Some(k);
            state = perturb_points(&state, region, recovery, &mut rng)?;
        } else {
            let direction = build_direction(&state, region, surrogate, cfg, map)?;
            if frobenius_norm(&direction) > GRADIENT_FLOOR {
                state = step_and_project(&state, &direction, cfg.alpha, region)?;
            }
        }
        let value = surrogate_value(&state, map, surrogate);
        values.push(value);
        trace.push(snapshot(k + 1, value, &state, map, perturbation));
    }
    Ok(RunResult {
        final_state: state,
        trace,
    })
}

/// Moves several distinct points along random unit directions and projects;
/// the move is accepted regardless of the surrogate value.
pub(crate) fn perturb_points(
    state: &PointSet,
    region: &FeasibleRegion,
    recovery: &RecoveryConfig,
    rng: &mut ChaCha8Rng,
) -> Result<PointSet, AscentError> {
    let count = recovery.perturb_count.min(state.len());
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    while chosen.len() < count {
        let i = rng.random_range(0..state.len());
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    let mut next = state.clone();
    for &i in &chosen {
        let direction = random_unit_direction(state.dim(), rng);
        let moved: Vec<f64> = state
            .point(i)
            .iter()
            .zip(&direction)
            .map(|(x, d)| x + recovery.perturb_step * d)
            .collect();
        next.replace_point(i, region.project_point(&moved)?);
    }
    Ok(next)
}

fn random_unit_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > GRADIENT_FLOOR {
            return d.into_iter().map(|v| v / norm).collect();
        }
    }
}
