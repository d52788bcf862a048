//! Analytic benchmark problems with known Pareto fronts, their
//! initializers, and reference archives for IGD.
//!
//! Three problems are provided. The triangle problem lives directly in
//! objective space: the feasible region is `{F in [0,1]^2 : F1 + F2 <= 1}`
//! and the front is the segment `F1 + F2 = 1`. The summed quadratic problem
//! maps a planar decision box through two concave quadratics; its efficient
//! set is the diagonal `x1 = x2 = t` and its front the curve
//! `(2t - t^2, 1 - t^2)`. The supersphere problem maps three-dimensional
//! decisions through `f_i(x) = 1 - (|x - e_i|^2 / 2)^gamma`; on the standard
//! simplex all objectives lie in `[0, 1]`, the simplex itself is the
//! efficient set, and the front surface has the explicit parameterization
//! over `(u, v) in [0,1]^2` used by [`supersphere_front`].

use crate::ascent::{FeasibleRegion, ObjectiveMap};
use crate::geometry::PointSet;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BenchmarkError {
    #[error("parameter {name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("problem has no analytic front archive")]
    NoArchive,
}

/// Benchmark problem identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Triangle,
    SummedQuadratic,
    Supersphere,
}

/// A problem together with its decision region and objective dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub decision_region: FeasibleRegion,
    pub objective_dim: usize,
    /// Bulge parameter of the supersphere map; unused otherwise.
    pub gamma: f64,
}

impl ProblemSpec {
    /// Objective-space triangle problem; the map is the identity.
    pub fn triangle() -> Self {
        Self {
            problem: Problem::Triangle,
            decision_region: FeasibleRegion::TriangleSumLe1,
            objective_dim: 2,
            gamma: 1.0,
        }
    }

    /// Summed quadratic problem restricted to the unit box, which contains
    /// the whole efficient set.
    pub fn summed_quadratic() -> Self {
        Self {
            problem: Problem::SummedQuadratic,
            decision_region: FeasibleRegion::cube(2, 0.0, 1.0),
            objective_dim: 2,
            gamma: 1.0,
        }
    }

    /// Simplex-constrained supersphere problem.
    pub fn supersphere(gamma: f64) -> Self {
        Self {
            problem: Problem::Supersphere,
            decision_region: FeasibleRegion::Simplex,
            objective_dim: 3,
            gamma,
        }
    }

    /// Box-constrained supersphere stress variant on `[-2, 2]^3`; objective
    /// values may fall below zero there and are not clamped.
    pub fn supersphere_box(gamma: f64) -> Self {
        Self {
            decision_region: FeasibleRegion::cube(3, -2.0, 2.0),
            ..Self::supersphere(gamma)
        }
    }

    /// Supersphere on the mildly enlarged box `[-0.4, 1.4]^3` used by the
    /// layered-start runs.
    pub fn supersphere_layered_box(gamma: f64) -> Self {
        Self {
            decision_region: FeasibleRegion::cube(3, -0.4, 1.4),
            ..Self::supersphere(gamma)
        }
    }

    pub fn objective_map(&self) -> Box<dyn ObjectiveMap> {
        match self.problem {
            Problem::Triangle => Box::new(crate::ascent::IdentityMap { dim: 2 }),
            Problem::SummedQuadratic => Box::new(QuadraticMap),
            Problem::Supersphere => Box::new(SuperesphereMap { gamma: self.gamma }),
        }
    }
}

/// The summed quadratic objective pair.
pub fn quadratic_map(x: [f64; 2]) -> [f64; 2] {
    let f1 = 0.5 * (1.0 - (x[0] - 1.0).powi(2)) + 0.5 * (1.0 - (x[1] - 1.0).powi(2));
    let f2 = 0.5 * (1.0 - x[0].powi(2)) + 0.5 * (1.0 - x[1].powi(2));
    [f1, f2]
}

/// Point of the quadratic problem's Pareto front, the image of the diagonal
/// decision `(t, t)`.
pub fn quadratic_front(t: f64) -> Result<[f64; 2], BenchmarkError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BenchmarkError::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok([2.0 * t - t * t, 1.0 - t * t])
}

/// The supersphere objective triple `f_i(x) = 1 - (|x - e_i|^2 / 2)^gamma`.
pub fn supersphere_map(x: [f64; 3], gamma: f64) -> [f64; 3] {
    let mut f = [0.0; 3];
    for (i, fi) in f.iter_mut().enumerate() {
        let mut dist2 = 0.0;
        for (c, xc) in x.iter().enumerate() {
            let e = if c == i { 1.0 } else { 0.0 };
            dist2 += (xc - e) * (xc - e);
        }
        *fi = 1.0 - (dist2 / 2.0).powf(gamma);
    }
    f
}

/// Point of the supersphere Pareto-front surface via the simplex
/// parameterization `x = (u, (1-u)v, (1-u)(1-v))`.
pub fn supersphere_front(u: f64, v: f64, gamma: f64) -> Result<[f64; 3], BenchmarkError> {
    for (name, value) in [("u", u), ("v", v)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(BenchmarkError::OutOfRange {
                name,
                value,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(supersphere_map([u, (1.0 - u) * v, (1.0 - u) * (1.0 - v)], gamma))
}

/// Objective map wrapper for [`quadratic_map`].
#[derive(Debug, Clone, Copy)]
pub struct QuadraticMap;

impl ObjectiveMap for QuadraticMap {
    fn objective_dim(&self) -> usize {
        2
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        quadratic_map([x[0], x[1]]).to_vec()
    }
}

/// Objective map wrapper for [`supersphere_map`].
#[derive(Debug, Clone, Copy)]
pub struct SuperesphereMap {
    pub gamma: f64,
}

impl ObjectiveMap for SuperesphereMap {
    fn objective_dim(&self) -> usize {
        3
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        supersphere_map([x[0], x[1], x[2]], self.gamma).to_vec()
    }
}

/// Simplex-lattice initializer: all `(H+1)(H+2)/2` points
/// `(i/H, j/H, k/H)` with `i + j + k = H`, each perturbed by seeded
/// Gaussian noise of scale `perturb_sigma` and projected back onto the
/// simplex. The stream draws three normals per lattice point in lattice
/// order (`i` outer, `j` inner).
pub fn das_dennis(h: usize, perturb_sigma: f64, seed: u64) -> PointSet {
    assert!(h >= 1, "lattice parameter must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let simplex = FeasibleRegion::Simplex;
    let mut points = Vec::with_capacity((h + 1) * (h + 2) / 2);
    for i in 0..=h {
        for j in 0..=(h - i) {
            let k = h - i - j;
            let mut p = vec![
                i as f64 / h as f64,
                j as f64 / h as f64,
                k as f64 / h as f64,
            ];
            for coord in p.iter_mut() {
                let noise: f64 = rng.sample(StandardNormal);
                *coord += perturb_sigma * noise;
            }
            if perturb_sigma != 0.0 {
                p = simplex.project_point(&p).expect("simplex projection");
            }
            points.push(p);
        }
    }
    PointSet::new(3, points).expect("lattice points are finite")
}

/// Ten mutually nondominated interior points on the line `F1 + F2 = 0.7`,
/// the nondominated line start of the triangle problem.
pub fn triangle_line_start(mu: usize) -> PointSet {
    let points = (0..mu)
        .map(|i| {
            let t = (i + 1) as f64 / (mu + 1) as f64;
            vec![0.7 * t, 0.7 * (1.0 - t)]
        })
        .collect();
    PointSet::new(2, points).expect("line points are finite")
}

/// Dominated triangular `4+3+2+1` start: the ten lattice points of the
/// subtriangle with vertices `(0,0)`, `(0,0.5)`, and `(0.5,0)`.
pub fn triangle_nested_start() -> PointSet {
    let mut points = Vec::with_capacity(10);
    for j in 0..4usize {
        for i in 0..(4 - j) {
            points.push(vec![i as f64 / 6.0, j as f64 / 6.0]);
        }
    }
    PointSet::new(2, points).expect("lattice points are finite")
}

/// The ten perturbed interior decision points of the quadratic example.
pub fn quadratic_perturbed_start() -> PointSet {
    let pts = [
        [0.10, 0.74],
        [0.18, 0.49],
        [0.12, 0.61],
        [0.33, 0.58],
        [0.46, 0.28],
        [0.41, 0.45],
        [0.63, 0.12],
        [0.57, 0.26],
        [0.71, 0.33],
        [0.82, 0.08],
    ];
    PointSet::new(2, pts.iter().map(|p| p.to_vec()).collect()).expect("start points are finite")
}

/// Layered-start initializer: `mu` decision points sampled uniformly from
/// `[-0.25, 1.25]^3` and projected onto the run box. The stream draws three
/// uniforms per point.
pub fn layered_box_start(mu: usize, seed: u64, run_box: &FeasibleRegion) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..mu)
        .map(|_| {
            let p: Vec<f64> = (0..3).map(|_| rng.random_range(-0.25..1.25)).collect();
            run_box.project_point(&p).expect("run box projection")
        })
        .collect();
    PointSet::new(3, points).expect("sampled points are finite")
}

/// Reference archive of front points for IGD.
///
/// The triangle archive holds `resolution + 1` evenly spaced points on
/// `F1 + F2 = 1`; the quadratic archive evaluates [`quadratic_front`] on a
/// uniform `t` grid; the supersphere archive evaluates
/// [`supersphere_front`] on a uniform `(u, v)` grid with exact duplicates
/// removed.
pub fn reference_archive(
    problem: &ProblemSpec,
    resolution: usize,
) -> Result<PointSet, BenchmarkError> {
    assert!(resolution >= 1, "archive resolution must be at least 1");
    let points: Vec<Vec<f64>> = match problem.problem {
        Problem::Triangle => (0..=resolution)
            .map(|i| {
                let t = i as f64 / resolution as f64;
                vec![t, 1.0 - t]
            })
            .collect(),
        Problem::SummedQuadratic => (0..=resolution)
            .map(|i| {
                let t = i as f64 / resolution as f64;
                quadratic_front(t).expect("grid parameter in range").to_vec()
            })
            .collect(),
        Problem::Supersphere => {
            let mut pts: Vec<Vec<f64>> = Vec::new();
            for i in 0..=resolution {
                for j in 0..=resolution {
                    let u = i as f64 / resolution as f64;
                    let v = j as f64 / resolution as f64;
                    let f = supersphere_front(u, v, problem.gamma)
                        .expect("grid parameters in range")
                        .to_vec();
                    if !pts.contains(&f) {
                        pts.push(f);
                    }
                }
            }
            pts
        }
    };
    Ok(PointSet::new(problem.objective_dim, points).expect("archive points are finite"))
}
