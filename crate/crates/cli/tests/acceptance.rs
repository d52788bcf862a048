#![allow(clippy::needless_range_loop)]

//! Acceptance suite: every release-gating check, one test per criterion,
//! each printing a `[PASS]` line with the measured quantities.
//!
//! Run with `cargo test -p layered-ascent-cli --test acceptance -- --nocapture`.

use approx::assert_relative_eq;
use layered_ascent::benchmarks::supersphere_map;
use layered_ascent::geometry::{
    hypervolume_3d, nondominated_sort, Anchor, PointSet,
};
use layered_ascent::indicators::{
    layered_gradient, layered_value, magnitude_2d, magnitude_3d, magnitude_nd, BaseIndicator,
    SurrogateConfig,
};
use layered_ascent::stochastic::{hillclimb, HillclimbConfig};
use layered_ascent_cli::presets::load_preset;
use layered_ascent_cli::runner::fig1_points;
use layered_ascent_cli::{execute, resolve};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point_set(dim: usize, pts: Vec<Vec<f64>>) -> PointSet {
    PointSet::new(dim, pts).unwrap()
}

fn surrogate(base: BaseIndicator, dim: usize, epsilon: f64, tau: f64, sigma: f64) -> SurrogateConfig {
    SurrogateConfig {
        base,
        epsilon,
        tau,
        sigma,
        anchor: Anchor::origin(dim),
        exact_threshold: 6,
    }
}

#[test]
fn criterion_01_grid_example_exact_values() {
    let grid = fig1_points();
    let origin = Anchor::origin(2);
    let partition = nondominated_sort(&grid);
    assert_eq!(partition.layer_sizes(), vec![3, 3, 2]);
    let expected_hv = [30.0, 21.0, 7.0];
    let expected_mag = [16.0, 51.0 / 4.0, 27.0 / 4.0];
    for (l, layer) in partition.layers().iter().enumerate() {
        let subset = grid.subset(layer);
        let hv = layered_ascent::geometry::hypervolume_2d(&subset, &origin);
        let mag = magnitude_2d(&subset, &origin);
        assert!((hv - expected_hv[l]).abs() <= 1e-12, "layer {l} hv {hv}");
        assert!((mag - expected_mag[l]).abs() <= 1e-12, "layer {l} mag {mag}");
    }
    println!("[PASS] criterion 1: grid layer values HV=(30,21,7) Mag=(16,12.75,6.75) exact");
}

#[test]
fn criterion_02_projection_expansion_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for dim in [2usize, 3] {
        let origin = Anchor::origin(dim);
        for _ in 0..1000 {
            let mu = rng.random_range(1..=20);
            let pts: Vec<Vec<f64>> = (0..mu)
                .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.5)).collect())
                .collect();
            let set = point_set(dim, pts);
            let expanded = magnitude_nd(&set, &origin);
            let closed = match dim {
                2 => magnitude_2d(&set, &origin),
                _ => magnitude_3d(&set, &origin, 6),
            };
            worst = worst.max((expanded - closed).abs());
        }
    }
    assert!(worst <= 1e-12, "worst deviation {worst}");
    println!("[PASS] criterion 2: subset expansion matches closed forms on 2000 sets (worst |diff| = {worst:.2e})");
}

/// Coordinates pairwise separated per dimension, so finite-difference probes
/// keep the layer assignment and active geometry fixed.
fn tie_free_points(rng: &mut ChaCha8Rng, mu: usize, dim: usize) -> Vec<Vec<f64>> {
    let min_gap = 1e-3;
    let mut per_dim: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        loop {
            let vals: Vec<f64> = (0..mu).map(|_| rng.random_range(0.05..1.0)).collect();
            let mut sorted = vals.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if sorted.windows(2).all(|w| w[1] - w[0] >= min_gap) {
                per_dim.push(vals);
                break;
            }
        }
    }
    (0..mu)
        .map(|i| (0..dim).map(|c| per_dim[c][i]).collect())
        .collect()
}

#[test]
fn criterion_03_analytic_gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for base in [BaseIndicator::Magnitude, BaseIndicator::Hypervolume] {
        for dim in [2usize, 3] {
            for trial in 0..150 {
                let mu = rng.random_range(2..=6);
                let tau = if trial % 2 == 0 { 0.0 } else { 0.1 };
                let cfg = surrogate(base, dim, 1e-3, tau, 0.4);
                let set = point_set(dim, tie_free_points(&mut rng, mu, dim));
                let analytic = layered_gradient(&set, &cfg);
                let mut err2 = 0.0;
                let mut norm2 = 0.0;
                let mut probe = set.clone();
                for i in 0..set.len() {
                    for c in 0..dim {
                        let center = set.point(i)[c];
                        probe.set_coord(i, c, center + h);
                        let up = layered_value(&probe, &cfg);
                        probe.set_coord(i, c, center - h);
                        let down = layered_value(&probe, &cfg);
                        probe.set_coord(i, c, center);
                        let fd = (up - down) / (2.0 * h);
                        err2 += (analytic[i][c] - fd).powi(2);
                        norm2 += fd * fd;
                    }
                }
                let rel = err2.sqrt() / norm2.sqrt().max(1e-12);
                worst = worst.max(rel);
                assert!(
                    rel <= 1e-5,
                    "relative gradient error {rel} for {base:?} in dimension {dim}"
                );
                checked += 1;
            }
        }
    }
    println!("[PASS] criterion 3: analytic gradients match FD on {checked} configurations (worst rel = {worst:.2e})");
}

#[test]
fn criterion_04_layer_switch_discontinuity() {
    let eta = 1e-6;
    for base in [BaseIndicator::Magnitude, BaseIndicator::Hypervolume] {
        let cfg = surrogate(base, 2, 1e-3, 0.0, 1.0);
        let lower_value = cfg.base_value(&point_set(2, vec![vec![0.9, 0.5]]));
        let stacked = point_set(2, vec![vec![1.0, 0.5], vec![0.9, 0.5]]);
        let merged = point_set(2, vec![vec![1.0, 0.5], vec![0.9, 0.5 + eta]]);
        let jump = layered_value(&stacked, &cfg) - layered_value(&merged, &cfg);
        let floor = 0.9 * cfg.epsilon * lower_value;
        assert!(
            jump >= floor,
            "{base:?}: jump {jump} below 0.9 * epsilon * I = {floor}"
        );
    }
    println!("[PASS] criterion 4: hard-layer value jump exceeds 0.9 * epsilon * I for both bases");
}

#[test]
fn criterion_05_chamberwise_lipschitz_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0usize;
    let mut worst_ratio: f64 = 0.0;
    while checked < 10_000 {
        let mu = rng.random_range(2..=6);
        let pts_a: Vec<Vec<f64>> = (0..mu)
            .map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
            .collect();
        let scale = rng.random_range(0.01..0.3);
        let pts_b: Vec<Vec<f64>> = pts_a
            .iter()
            .map(|p| {
                vec![
                    (p[0] + rng.random_range(-scale..scale)).clamp(0.0, 1.0),
                    (p[1] + rng.random_range(-scale..scale)).clamp(0.0, 1.0),
                ]
            })
            .collect();
        let a = point_set(2, pts_a.clone());
        let b = point_set(2, pts_b.clone());
        if nondominated_sort(&a).layers() != nondominated_sort(&b).layers() {
            continue;
        }
        let moved: f64 = pts_a
            .iter()
            .zip(&pts_b)
            .map(|(p, q)| (p[0] - q[0]).abs() + (p[1] - q[1]).abs())
            .sum();
        for (base, constant) in [
            (BaseIndicator::Magnitude, 0.5 + 0.25),
            (BaseIndicator::Hypervolume, 1.0),
        ] {
            let cfg = surrogate(base, 2, 1e-3, 0.0, 1.0);
            let diff = (layered_value(&a, &cfg) - layered_value(&b, &cfg)).abs();
            assert!(
                diff <= constant * moved + 1e-9,
                "{base:?}: |dJ| = {diff} exceeds {constant} * {moved}"
            );
            if moved > 0.0 {
                worst_ratio = worst_ratio.max(diff / (constant * moved));
            }
        }
        checked += 1;
    }
    println!("[PASS] criterion 5: chamberwise Lipschitz bound held on {checked} same-partition pairs (worst ratio {worst_ratio:.3})");
}

#[test]
fn criterion_06_triangle_runs_reach_reported_values() {
    let line = execute(&resolve(&load_preset("triangle-line").unwrap()).unwrap()).unwrap();
    let hv = line.final_eval.first_layer_hv;
    let mag = line.final_eval.first_layer_mag;
    assert!(
        (hv - 0.4439).abs() <= 0.002,
        "line-start first-layer HV {hv} outside 0.4439 +- 0.002"
    );
    assert!(
        (mag - 2.1110).abs() <= 0.002,
        "line-start first-layer Mag {mag} outside 2.1110 +- 0.002"
    );
    let nested = execute(&resolve(&load_preset("triangle-nested").unwrap()).unwrap()).unwrap();
    let hv_nested = nested.final_eval.first_layer_hv;
    assert!(
        (hv_nested - 0.4444).abs() <= 0.002,
        "nested-start first-layer HV {hv_nested} outside 0.4444 +- 0.002"
    );
    println!("[PASS] criterion 6: triangle line HV={hv:.5} Mag={mag:.5}, nested HV={hv_nested:.5}");
}

#[test]
fn criterion_07_quadratic_run_reaches_the_front_curve() {
    let report = execute(&resolve(&load_preset("quadratic-perturbed").unwrap()).unwrap()).unwrap();
    assert_eq!(
        report.final_eval.layer_profile,
        vec![10],
        "final set is not a single nondominated layer"
    );
    let last = report.result.trace.last().unwrap();
    let image = last.objective_points.as_ref().unwrap();
    let distance_to_curve = |p: &[f64]| -> f64 {
        (0..=10_000)
            .map(|k| {
                let t = k as f64 / 10_000.0;
                let f = [2.0 * t - t * t, 1.0 - t * t];
                ((p[0] - f[0]).powi(2) + (p[1] - f[1]).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let max_distance = image
        .iter()
        .map(|p| distance_to_curve(p))
        .fold(0.0, f64::max);
    assert!(
        max_distance <= 0.02,
        "a final objective vector is {max_distance} from the front curve"
    );
    println!("[PASS] criterion 7: all 10 final vectors within {max_distance:.5} of the front curve, single layer");
}

#[test]
fn criterion_08_supersphere_vertices_and_barycenter() {
    for gamma in [0.25, 0.5, 1.0] {
        assert_eq!(supersphere_map([1.0, 0.0, 0.0], gamma), [1.0, 0.0, 0.0]);
        assert_eq!(supersphere_map([0.0, 1.0, 0.0], gamma), [0.0, 1.0, 0.0]);
        assert_eq!(supersphere_map([0.0, 0.0, 1.0], gamma), [0.0, 0.0, 1.0]);
        let c = 1.0 / 3.0;
        let expected = 1.0 - 3f64.powf(-gamma);
        for value in supersphere_map([c, c, c], gamma) {
            assert_relative_eq!(value, expected, epsilon = 1e-14);
        }
    }
    println!("[PASS] criterion 8: vertex images exact, barycenter images match 1 - 3^-gamma to 1e-14");
}

#[test]
fn criterion_09_layer_collapse_on_the_layered_start_box() {
    let report = execute(&resolve(&load_preset("layered-start-box").unwrap()).unwrap()).unwrap();
    assert_eq!(
        report.initial.layer_profile,
        vec![8, 5, 2],
        "documented seed should start at the 8+5+2 profile"
    );
    assert!(
        report.initial.layer_profile.len() >= 2,
        "start must be multi-layered"
    );
    let collapse = report
        .result
        .trace
        .iter()
        .find(|r| r.layer_sizes.len() == 1)
        .map(|r| r.iteration);
    assert!(
        matches!(collapse, Some(k) if k <= 40),
        "no single layer within 40 iterations (collapse at {collapse:?})"
    );
    let final_mag = report.final_eval.surrogate;
    assert!(final_mag >= 3.10, "final layered magnitude {final_mag} < 3.10");
    println!(
        "[PASS] criterion 9: 8+5+2 start, single layer at iteration {}, final layered Mag {final_mag:.5}",
        collapse.unwrap()
    );
}

#[test]
fn criterion_10_indicator_cross_dominance() {
    let mut hv_wins = 0;
    let mut mag_wins = 0;
    for gamma in [0.25, 0.5, 1.0] {
        let mut mag = load_preset("supersphere").unwrap();
        mag.gamma = gamma;
        let mut hv = mag.clone();
        hv.indicator = "hv".parse().unwrap();
        let mag_report = execute(&resolve(&mag).unwrap()).unwrap();
        let hv_report = execute(&resolve(&hv).unwrap()).unwrap();
        assert_eq!(
            mag_report.initial.first_layer_hv, hv_report.initial.first_layer_hv,
            "shared seed must give identical initial values"
        );
        if hv_report.final_eval.first_layer_hv >= mag_report.final_eval.first_layer_hv {
            hv_wins += 1;
        }
        if mag_report.final_eval.first_layer_mag >= hv_report.final_eval.first_layer_mag {
            mag_wins += 1;
        }
    }
    assert!(hv_wins >= 2, "hypervolume run won the HV column only {hv_wins}/3 times");
    assert!(mag_wins >= 2, "magnitude run won the Mag column only {mag_wins}/3 times");
    println!("[PASS] criterion 10: cross-dominance {hv_wins}/3 (HV) and {mag_wins}/3 (Mag)");
}

#[test]
fn criterion_11_hillclimber_monotone_and_deterministic() {
    for preset in ["triangle-line", "quadratic-perturbed", "supersphere"] {
        let resolved = resolve(&load_preset(preset).unwrap()).unwrap();
        let cfg = HillclimbConfig {
            max_iters: 5000,
            seed: resolved.seed,
            ..HillclimbConfig::default()
        };
        let run = || {
            hillclimb(
                &resolved.start,
                &resolved.region,
                &resolved.surrogate,
                &cfg,
                resolved.map.as_ref(),
            )
            .unwrap()
        };
        let first = run();
        for pair in first.trace.windows(2) {
            assert!(
                pair[1].value >= pair[0].value,
                "accepted values decreased on {preset}"
            );
        }
        assert_eq!(first, run(), "repeated run differs on {preset}");
    }
    println!("[PASS] criterion 11: 5000-iteration hillclimbs nondecreasing and seed-deterministic on 3 presets");
}

#[test]
fn criterion_12_volume_paths_and_measure_oracle_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let origin = Anchor::origin(3);
    let mut worst: f64 = 0.0;
    let mut sets = Vec::new();
    for _ in 0..1000 {
        let mu = rng.random_range(1..=12);
        let pts: Vec<Vec<f64>> = (0..mu)
            .map(|_| (0..3).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let set = point_set(3, pts);
        let exact = hypervolume_3d(&set, &origin, usize::MAX);
        let sweep = hypervolume_3d(&set, &origin, 0);
        let rel = (exact - sweep).abs() / exact.abs().max(1e-300);
        worst = worst.max(rel);
        assert!(rel <= 1e-12, "paths disagree: exact {exact} vs sweep {sweep}");
        sets.push(set);
    }
    // Monte Carlo measure oracle on a handful of the generated sets.
    let samples = 1_000_000usize;
    for set in sets.iter().take(5) {
        let value = hypervolume_3d(set, &origin, 0);
        let bound: Vec<f64> = (0..3)
            .map(|c| set.iter().map(|p| p[c]).fold(0.0, f64::max))
            .collect();
        let box_volume: f64 = bound.iter().product();
        if box_volume == 0.0 {
            assert!(value.abs() <= 1e-15);
            continue;
        }
        let mut hits = 0usize;
        for _ in 0..samples {
            let q: Vec<f64> = bound.iter().map(|b| rng.random_range(0.0..*b)).collect();
            if set
                .iter()
                .any(|p| p.iter().zip(&q).all(|(coord, sample)| sample <= coord))
            {
                hits += 1;
            }
        }
        let fraction = hits as f64 / samples as f64;
        let estimate = fraction * box_volume;
        let standard_error = box_volume * (fraction * (1.0 - fraction) / samples as f64).sqrt();
        assert!(
            (value - estimate).abs() <= 3.0 * standard_error,
            "volume {value} vs Monte Carlo {estimate} (3 SE = {})",
            3.0 * standard_error
        );
    }
    println!("[PASS] criterion 12: inclusion-exclusion and sweep agree on 1000 sets (worst rel {worst:.2e}); Monte Carlo within 3 SE");
}
