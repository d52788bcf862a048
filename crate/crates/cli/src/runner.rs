//! Resolves manifests into concrete runs and executes them.

use layered_ascent::ascent::{
    run_ascent, run_with_recovery, AscentConfig, FeasibleRegion, GradientMode, IdentityMap,
    ObjectiveMap, RecoveryConfig, RunResult, TraceRecord,
};
use layered_ascent::benchmarks::{
    das_dennis, layered_box_start, quadratic_perturbed_start, reference_archive,
    triangle_line_start, triangle_nested_start, ProblemSpec, QuadraticMap, SuperesphereMap,
};
use layered_ascent::geometry::{
    hypervolume, nondominated_sort, Anchor, PointSet,
};
use layered_ascent::indicators::{igd, magnitude_2d, magnitude_3d, BaseIndicator, SurrogateConfig};
use layered_ascent::stochastic::{hillclimb, HillclimbConfig};

use crate::manifest::{
    IndicatorName, InitName, OptimizerName, ProblemName, RunManifest,
};
use crate::CliError;

/// Archive resolutions per problem for the IGD cross-evaluation.
const ARCHIVE_RESOLUTION_2D: usize = 200;
const ARCHIVE_RESOLUTION_3D: usize = 40;

/// The eight-point integer-grid example with layers of sizes 3, 3, 2.
pub fn fig1_points() -> PointSet {
    let pts = [
        [1.0, 8.0],
        [5.0, 4.0],
        [7.0, 3.0],
        [1.0, 7.0],
        [3.0, 4.0],
        [6.0, 2.0],
        [1.0, 4.0],
        [4.0, 1.0],
    ];
    PointSet::new(2, pts.iter().map(|p| p.to_vec()).collect()).expect("grid points are finite")
}

/// A manifest resolved into the concrete pieces a run needs.
pub struct ResolvedRun {
    pub manifest: RunManifest,
    pub seed: u64,
    pub region: FeasibleRegion,
    pub map: Box<dyn ObjectiveMap>,
    pub start: PointSet,
    pub surrogate: SurrogateConfig,
    pub archive: Option<PointSet>,
}

fn base_indicator(indicator: IndicatorName) -> BaseIndicator {
    match indicator {
        IndicatorName::Mag => BaseIndicator::Magnitude,
        IndicatorName::Hv => BaseIndicator::Hypervolume,
    }
}

fn lattice_size(h: usize) -> usize {
    (h + 1) * (h + 2) / 2
}

pub fn resolve(manifest: &RunManifest) -> Result<ResolvedRun, CliError> {
    let seed = manifest.effective_seed()?;
    let problem_spec = match manifest.problem {
        ProblemName::Triangle | ProblemName::Fig1 => ProblemSpec::triangle(),
        ProblemName::Quadratic => ProblemSpec::summed_quadratic(),
        ProblemName::Supersphere => ProblemSpec::supersphere(manifest.gamma),
        ProblemName::SupersphereBox => ProblemSpec::supersphere_box(manifest.gamma),
        ProblemName::LayeredBox => ProblemSpec::supersphere_layered_box(manifest.gamma),
    };
    let region = match manifest.problem {
        // The static grid example lives on an integer grid, not in the
        // triangle; give it an enclosing box.
        ProblemName::Fig1 => FeasibleRegion::cube(2, 0.0, 10.0),
        _ => problem_spec.decision_region.clone(),
    };
    let map: Box<dyn ObjectiveMap> = match manifest.problem {
        ProblemName::Triangle | ProblemName::Fig1 => Box::new(IdentityMap { dim: 2 }),
        ProblemName::Quadratic => Box::new(QuadraticMap),
        _ => Box::new(SuperesphereMap {
            gamma: manifest.gamma,
        }),
    };

    let init = manifest.init.unwrap_or(match manifest.problem {
        ProblemName::Triangle => InitName::TriangleLine,
        ProblemName::Quadratic => InitName::QuadraticPerturbed,
        ProblemName::Supersphere | ProblemName::SupersphereBox => InitName::DasDennis,
        ProblemName::LayeredBox => InitName::LayeredBox,
        ProblemName::Fig1 => InitName::Fig1,
    });
    let mu = manifest.mu.unwrap_or(match init {
        InitName::DasDennis | InitName::LayeredBox => lattice_size(manifest.lattice_h),
        _ => 10,
    });
    if mu == 0 {
        return Err(CliError::Usage("mu must be at least 1".into()));
    }
    let start = match init {
        InitName::TriangleLine => triangle_line_start(mu),
        InitName::TriangleNested => triangle_nested_start(),
        InitName::QuadraticPerturbed => quadratic_perturbed_start(),
        InitName::DasDennis => das_dennis(manifest.lattice_h, manifest.dd_sigma, seed),
        InitName::LayeredBox => layered_box_start(mu, seed, &region),
        InitName::Fig1 => fig1_points(),
    };
    if start.dim() != region.dim() {
        return Err(CliError::Usage(format!(
            "initializer dimension {} does not fit problem `{}`",
            start.dim(),
            manifest.problem
        )));
    }

    let objective_dim = map.objective_dim();
    let surrogate = SurrogateConfig::new(
        base_indicator(manifest.indicator),
        manifest.epsilon,
        manifest.tau,
        manifest.sigma,
        Anchor::origin(objective_dim),
        manifest.exact_front_threshold,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let archive = match manifest.problem {
        ProblemName::Fig1 => None,
        ProblemName::Triangle => {
            Some(reference_archive(&problem_spec, ARCHIVE_RESOLUTION_2D).unwrap())
        }
        ProblemName::Quadratic => {
            Some(reference_archive(&problem_spec, ARCHIVE_RESOLUTION_2D).unwrap())
        }
        _ => Some(reference_archive(&ProblemSpec::supersphere(manifest.gamma), ARCHIVE_RESOLUTION_3D).unwrap()),
    };

    Ok(ResolvedRun {
        manifest: manifest.clone(),
        seed,
        region,
        map,
        start,
        surrogate,
        archive,
    })
}

/// Indicator cross-evaluations of one configuration's objective image.
#[derive(Debug, Clone)]
pub struct CrossEval {
    /// Layered surrogate value.
    pub surrogate: f64,
    pub layer_profile: Vec<usize>,
    /// First-front magnitude and hypervolume.
    pub first_layer_mag: f64,
    pub first_layer_hv: f64,
    /// Per-layer `(hv, mag)` pairs, best layer first.
    pub layer_values: Vec<(f64, f64)>,
    pub igd: Option<f64>,
}

pub fn cross_evaluate(
    objective_points: &PointSet,
    surrogate: &SurrogateConfig,
    archive: Option<&PointSet>,
) -> CrossEval {
    let origin = Anchor::origin(objective_points.dim());
    let threshold = surrogate.exact_threshold;
    let partition = nondominated_sort(objective_points);
    let layer_values: Vec<(f64, f64)> = partition
        .layers()
        .iter()
        .map(|layer| {
            let subset = objective_points.subset(layer);
            let hv = hypervolume(&subset, &origin, threshold);
            let mag = match subset.dim() {
                2 => magnitude_2d(&subset, &origin),
                _ => magnitude_3d(&subset, &origin, threshold),
            };
            (hv, mag)
        })
        .collect();
    CrossEval {
        surrogate: layered_ascent::indicators::layered_value(objective_points, surrogate),
        layer_profile: partition.layer_sizes(),
        first_layer_mag: layer_values[0].1,
        first_layer_hv: layer_values[0].0,
        layer_values,
        igd: archive.map(|a| igd(objective_points, a).expect("nonempty archive and set")),
    }
}

/// Everything a run produces: the trace plus initial and final
/// cross-evaluations.
pub struct RunReport {
    pub label: String,
    pub result: RunResult,
    pub initial: CrossEval,
    pub final_eval: CrossEval,
    pub accepted: usize,
    pub iterations: usize,
}

fn objective_points_of(record: &TraceRecord, map: &dyn ObjectiveMap) -> PointSet {
    let pts = record
        .objective_points
        .clone()
        .unwrap_or_else(|| record.points.clone());
    PointSet::new(map.objective_dim(), pts).expect("objective image is finite")
}

pub fn execute(run: &ResolvedRun) -> Result<RunReport, CliError> {
    let manifest = &run.manifest;
    let result = if manifest.iters == 0 && !manifest.recovery {
        // Evaluation-only run: a single trace record of the projected start.
        let state = layered_ascent::ascent::project(&run.start, &run.region)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let value = layered_ascent::ascent::surrogate_value(&state, run.map.as_ref(), &run.surrogate);
        let image = layered_ascent::ascent::objective_image(&state, run.map.as_ref());
        let record = TraceRecord {
            iteration: 0,
            value,
            layer_sizes: nondominated_sort(&image).layer_sizes(),
            points: state.points().to_vec(),
            objective_points: if run.map.is_identity() {
                None
            } else {
                Some(image.points().to_vec())
            },
            perturbation: false,
        };
        RunResult {
            final_state: state,
            trace: vec![record],
        }
    } else {
        match manifest.optimizer {
            OptimizerName::Gradient => {
                let ascent_cfg = AscentConfig {
                    alpha: manifest.alpha,
                    fd_radius: manifest.fd_radius,
                    max_iters: manifest.iters.max(1),
                    value_tolerance: 0.0,
                    normalize_per_point: manifest.normalize,
                    gradient_mode: GradientMode::FiniteDifference,
                };
                if manifest.recovery {
                    let recovery = RecoveryConfig {
                        window: manifest.recovery_window,
                        min_growth: manifest.recovery_min_growth,
                        perturb_step: manifest.recovery_step,
                        perturb_count: manifest.recovery_perturb_count,
                        freeze_tail: manifest.freeze_tail,
                        seed: run.seed,
                    };
                    run_with_recovery(
                        &run.start,
                        &run.region,
                        &run.surrogate,
                        &ascent_cfg,
                        &recovery,
                        manifest.episodes,
                        run.map.as_ref(),
                    )
                    .map_err(|e| CliError::Usage(e.to_string()))?
                } else {
                    run_ascent(
                        &run.start,
                        &run.region,
                        &run.surrogate,
                        &ascent_cfg,
                        run.map.as_ref(),
                    )
                    .map_err(|e| CliError::Usage(e.to_string()))?
                }
            }
            OptimizerName::Hillclimb => {
                let cfg = HillclimbConfig {
                    alpha0: manifest.hc_alpha0,
                    rho: manifest.hc_rho,
                    alpha_min: manifest.hc_alpha_min,
                    retries: manifest.hc_retries,
                    max_iters: manifest.iters.max(1),
                    seed: run.seed,
                    recovery: manifest.recovery.then_some(RecoveryConfig {
                        window: manifest.recovery_window,
                        min_growth: manifest.recovery_min_growth,
                        perturb_step: manifest.recovery_step,
                        perturb_count: manifest.recovery_perturb_count,
                        freeze_tail: manifest.freeze_tail,
                        seed: run.seed,
                    }),
                };
                hillclimb(
                    &run.start,
                    &run.region,
                    &run.surrogate,
                    &cfg,
                    run.map.as_ref(),
                )
                .map_err(|e| CliError::Usage(e.to_string()))?
            }
        }
    };

    let first = objective_points_of(&result.trace[0], run.map.as_ref());
    let last = objective_points_of(result.trace.last().unwrap(), run.map.as_ref());
    let initial = cross_evaluate(&first, &run.surrogate, run.archive.as_ref());
    let final_eval = cross_evaluate(&last, &run.surrogate, run.archive.as_ref());
    Ok(RunReport {
        label: manifest.label(),
        accepted: result.accepted_steps(),
        iterations: result.iterations(),
        result,
        initial,
        final_eval,
    })
}

/// Trace rows at the sampling stride, with the final row always included.
pub fn sampled_rows(trace: &[TraceRecord], stride: usize) -> Vec<&TraceRecord> {
    let stride = stride.max(1);
    let last = trace.len() - 1;
    trace
        .iter()
        .enumerate()
        .filter(|(k, _)| k % stride == 0 || *k == last)
        .map(|(_, r)| r)
        .collect()
}
