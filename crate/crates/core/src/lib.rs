// `!(x > 0)` in config checks rejects NaN; index-parallel loops mirror the
// point/coordinate structure of the gradient matrices.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

//! Layered set-indicator ascent for Pareto-front approximation.
//!
//! The optimization state is a labelled set of points. A base set indicator
//! (anchored hypervolume or the magnitude of the anchored dominated set) is
//! evaluated on every nondomination layer of the set, and the layer values
//! are combined with rapidly decreasing weights into a scalar surrogate.
//! Maximizing that surrogate moves the whole set toward the Pareto front:
//! the first layer dominates the objective, while deeper layers still
//! receive an ascent signal.
//!
//! The crate provides:
//! - dominance relations, nondominated sorting, and exact anchored
//!   hypervolume values and gradients in dimensions 1-3 ([`geometry`]);
//! - the magnitude indicator via its coordinate-projection expansion, the
//!   layered scalar surrogate with short-range repulsion, and IGD
//!   ([`indicators`]);
//! - projected set-gradient ascent with finite-difference or analytic
//!   direction fields, plus a stagnation-recovery variant ([`ascent`]);
//! - a projected stochastic hillclimber as a gradient-free reference
//!   ([`stochastic`]);
//! - analytic benchmark problems with known Pareto fronts, initializers,
//!   and reference archives ([`benchmarks`]).

pub mod ascent;
pub mod benchmarks;
pub mod geometry;
pub mod indicators;
pub mod stochastic;

pub use ascent::{
    fd_set_gradient, normalize_pointwise, project, run_ascent, run_with_recovery, AscentConfig,
    AscentError, FeasibleRegion, GradientMode, IdentityMap, ObjectiveMap, RecoveryConfig,
    RunResult, TraceRecord,
};
pub use geometry::{
    nondominated_sort, strictly_dominates, weakly_dominates, Anchor, GeometryError,
    LayerPartition, PointSet, DEFAULT_EXACT_THRESHOLD,
};
pub use indicators::{
    igd, layered_gradient, layered_value, BaseIndicator, IndicatorError, SurrogateConfig,
};
pub use stochastic::{hillclimb, HillclimbConfig};
