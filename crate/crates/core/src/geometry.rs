//! Dominance relations, nondomination layers, and anchored hypervolume
//! values and gradients in dimensions 1-3.
//!
//! Everything here uses the maximization convention: `y` weakly dominates
//! `z` when every coordinate of `y` is at least the corresponding coordinate
//! of `z`. The anchored dominated set of a point set is the union of the
//! axis-aligned boxes spanned between the anchor and each point, with boxes
//! of negative side length omitted; the hypervolume indicator is its
//! top-dimensional Lebesgue measure.

use thiserror::Error;

/// Number of first-front points up to which the 3-D hypervolume uses exact
/// inclusion-exclusion before switching to the plane sweep.
pub const DEFAULT_EXACT_THRESHOLD: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {coord} of point {point} is not finite")]
    NonFinite { point: usize, coord: usize },
}

/// An ordered, labelled collection of points of a fixed dimension.
///
/// Index identity is stable: optimizers treat index `i` as the same labelled
/// point across iterations, so gradients and traces line up positionally.
/// The set may be empty (indicators of an empty set are well defined).
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    /// Builds a set after checking that every point has dimension `dim` and
    /// only finite coordinates.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            for (c, v) in p.iter().enumerate() {
                if !v.is_finite() {
                    return Err(GeometryError::NonFinite { point: i, coord: c });
                }
            }
        }
        Ok(Self { dim, points })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.as_slice())
    }

    /// The sub-set formed by the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// Overwrites one coordinate of one labelled point.
    pub fn set_coord(&mut self, point: usize, coord: usize, value: f64) {
        assert!(value.is_finite(), "coordinates must be finite");
        self.points[point][coord] = value;
    }

    /// Replaces the coordinates of one labelled point.
    pub fn replace_point(&mut self, point: usize, coords: Vec<f64>) {
        assert_eq!(coords.len(), self.dim, "replacement dimension mismatch");
        self.points[point] = coords;
    }
}

/// Reference point that anchors dominated sets.
///
/// All indicator formulas are stated for the origin anchor; a nonzero anchor
/// is handled by shifting coordinates and clamping at zero, so that boxes of
/// negative side length are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor(Vec<f64>);

impl Anchor {
    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        for (c, v) in coords.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::NonFinite { point: 0, coord: c });
            }
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Anchor-relative coordinates, clamped at zero.
    pub fn shift(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .zip(&self.0)
            .map(|(v, r)| (v - r).max(0.0))
            .collect()
    }
}

fn check_same_dim(y: &[f64], z: &[f64]) -> Result<(), GeometryError> {
    if y.len() != z.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: y.len(),
            got: z.len(),
        });
    }
    Ok(())
}

/// `y` weakly dominates `z`: every coordinate of `y` is >= that of `z`.
pub fn weakly_dominates(y: &[f64], z: &[f64]) -> Result<bool, GeometryError> {
    check_same_dim(y, z)?;
    Ok(weak_dom(y, z))
}

/// `y` strictly dominates `z`: weak dominance plus `y != z`.
pub fn strictly_dominates(y: &[f64], z: &[f64]) -> Result<bool, GeometryError> {
    check_same_dim(y, z)?;
    Ok(strict_dom(y, z))
}

pub(crate) fn weak_dom(y: &[f64], z: &[f64]) -> bool {
    debug_assert_eq!(y.len(), z.len());
    y.iter().zip(z).all(|(a, b)| a >= b)
}

pub(crate) fn strict_dom(y: &[f64], z: &[f64]) -> bool {
    weak_dom(y, z) && y != z
}

/// Ordered partition of point indices into nondomination layers.
///
/// Layer 1 holds the maximal points of the set; layer `k` holds the maximal
/// points of what remains after peeling layers `1..k`. Exact duplicates do
/// not strictly dominate each other, so they always share a layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerPartition {
    layers: Vec<Vec<usize>>,
    ranks: Vec<usize>,
}

impl LayerPartition {
    /// Index sets per layer, best layer first.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// 1-based layer rank of each point.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_of(&self, point: usize) -> usize {
        self.ranks[point]
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.len()).collect()
    }
}

/// Peels off nondomination layers until every point has a rank.
pub fn nondominated_sort(set: &PointSet) -> LayerPartition {
    let n = set.len();
    let mut ranks = vec![0usize; n];
    let mut layers = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rank = 1usize;
    while !remaining.is_empty() {
        let mut layer = Vec::new();
        let mut rest = Vec::new();
        for &i in &remaining {
            let dominated = remaining
                .iter()
                .any(|&j| j != i && strict_dom(set.point(j), set.point(i)));
            if dominated {
                rest.push(i);
            } else {
                layer.push(i);
            }
        }
        for &i in &layer {
            ranks[i] = rank;
        }
        layers.push(layer);
        remaining = rest;
        rank += 1;
    }
    LayerPartition { layers, ranks }
}

/// Anchored extent in one dimension: the largest anchor-relative coordinate,
/// clamped at zero. Empty sets contribute nothing.
pub fn hypervolume_1d(set: &PointSet, anchor: &Anchor) -> f64 {
    set.iter()
        .map(|p| (p[0] - anchor.coords()[0]).max(0.0))
        .fold(0.0, f64::max)
}

/// Active 2-D staircase after anchor shift: positive, not strictly
/// dominated, first of any exact duplicates, sorted by ascending x.
/// Returns `(original index, x, y)` triples; y is strictly decreasing.
fn staircase_2d(shifted: &[Vec<f64>]) -> Vec<(usize, f64, f64)> {
    let mut active: Vec<(usize, f64, f64)> = Vec::new();
    'outer: for (i, p) in shifted.iter().enumerate() {
        if p[0] <= 0.0 || p[1] <= 0.0 {
            continue;
        }
        for (j, q) in shifted.iter().enumerate() {
            if j == i {
                continue;
            }
            if strict_dom(q, p) || (q == p && j < i) {
                continue 'outer;
            }
        }
        active.push((i, p[0], p[1]));
    }
    // Ascending x with ties broken by descending y; after the dominance
    // filter only exact duplicates could tie, and those were removed.
    active.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap()
            .then(b.2.partial_cmp(&a.2).unwrap())
    });
    active
}

/// Area of an origin-anchored box union given shifted coordinate pairs.
/// Sorts by descending x; a point contributes the strip above the running
/// maximum height, which silently drops dominated points and duplicates.
pub(crate) fn area_2d_of(pairs: &mut [(f64, f64)]) -> f64 {
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut area = 0.0;
    let mut height = 0.0;
    for &(x, y) in pairs.iter() {
        if x <= 0.0 {
            break;
        }
        if y > height {
            area += x * (y - height);
            height = y;
        }
    }
    area
}

/// Area of the anchored dominated set in the plane, by sort-and-sweep.
pub fn hypervolume_2d(set: &PointSet, anchor: &Anchor) -> f64 {
    let r = anchor.coords();
    let mut pairs: Vec<(f64, f64)> = set
        .iter()
        .map(|p| ((p[0] - r[0]).max(0.0), (p[1] - r[1]).max(0.0)))
        .collect();
    area_2d_of(&mut pairs)
}

/// Per-point gradient of [`hypervolume_2d`].
///
/// For staircase points sorted by ascending x, the derivative in x is the
/// height of the exposed horizontal edge and the derivative in y is the
/// width of the exposed vertical edge. Strictly dominated points, points at
/// or below the anchor, and duplicates beyond the first receive zeros. When
/// active points tie in a coordinate the sorted order above fixes a
/// one-sided value.
pub fn hypervolume_gradient_2d(set: &PointSet, anchor: &Anchor) -> Vec<Vec<f64>> {
    let shifted: Vec<Vec<f64>> = set.iter().map(|p| anchor.shift(p)).collect();
    let stairs = staircase_2d(&shifted);
    let mut grads = vec![vec![0.0; 2]; set.len()];
    for (k, &(i, x, y)) in stairs.iter().enumerate() {
        let next_y = stairs.get(k + 1).map(|s| s.2).unwrap_or(0.0);
        let prev_x = if k == 0 { 0.0 } else { stairs[k - 1].1 };
        grads[i][0] = y - next_y;
        grads[i][1] = x - prev_x;
    }
    grads
}

/// Nondominated, strictly positive, deduplicated points after anchor shift.
fn positive_front(shifted: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut front: Vec<Vec<f64>> = Vec::new();
    'outer: for (i, p) in shifted.iter().enumerate() {
        if p.iter().any(|&v| v <= 0.0) {
            continue;
        }
        for (j, q) in shifted.iter().enumerate() {
            if j == i {
                continue;
            }
            if strict_dom(q, p) || (q == p && j < i) {
                continue 'outer;
            }
        }
        front.push(p.clone());
    }
    front
}

/// Volume of the anchored orthogonal union by inclusion-exclusion over all
/// nonempty subsets of the front. Works in any dimension; exponential in the
/// front size, so only suitable for small fronts.
pub fn hypervolume_union(set: &PointSet, anchor: &Anchor) -> f64 {
    let shifted: Vec<Vec<f64>> = set.iter().map(|p| anchor.shift(p)).collect();
    let front = positive_front(&shifted);
    inclusion_exclusion(&front, set.dim())
}

fn inclusion_exclusion(front: &[Vec<f64>], dim: usize) -> f64 {
    let n = front.len();
    let mut total = 0.0;
    for mask in 1u64..(1u64 << n) {
        let mut meet = vec![f64::INFINITY; dim];
        for (i, p) in front.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for c in 0..dim {
                    meet[c] = meet[c].min(p[c]);
                }
            }
        }
        let vol: f64 = meet.iter().product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

/// Staircase of maximal `(x, y)` pairs, sorted by ascending x with strictly
/// decreasing y, plus the area of the box union it spans. Supports
/// incremental insertion for the 3-D sweep.
struct Staircase {
    steps: Vec<(f64, f64)>,
    area: f64,
}

impl Staircase {
    fn new() -> Self {
        Self {
            steps: Vec::new(),
            area: 0.0,
        }
    }

    fn insert(&mut self, x: f64, y: f64) {
        if x <= 0.0 || y <= 0.0 {
            return;
        }
        let idx = self.steps.partition_point(|s| s.0 < x);
        if idx < self.steps.len() && self.steps[idx].1 >= y {
            return;
        }
        // Steps left of the insertion point with no greater height are
        // covered by the new box.
        let mut lo = idx;
        while lo > 0 && self.steps[lo - 1].1 <= y {
            lo -= 1;
        }
        let x_prev = if lo == 0 { 0.0 } else { self.steps[lo - 1].0 };
        let mut removed = 0.0;
        let mut left = x_prev;
        for &(sx, sy) in &self.steps[lo..idx] {
            removed += (sx - left) * sy;
            left = sx;
        }
        // The surviving right neighbor keeps only the strip beyond x.
        let shrink = if idx < self.steps.len() {
            (x - left) * self.steps[idx].1
        } else {
            0.0
        };
        self.area += (x - x_prev) * y - removed - shrink;
        self.steps.splice(lo..idx, std::iter::once((x, y)));
    }
}

fn inclusion_exclusion_3(front: &[[f64; 3]]) -> f64 {
    let n = front.len();
    let mut total = 0.0;
    for mask in 1u64..(1u64 << n) {
        let mut meet = [f64::INFINITY; 3];
        for (i, p) in front.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for c in 0..3 {
                    meet[c] = meet[c].min(p[c]);
                }
            }
        }
        let vol = meet[0] * meet[1] * meet[2];
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

/// Volume of an origin-anchored box union given shifted coordinate triples.
pub(crate) fn volume_3d_of(triples: &[[f64; 3]], exact_threshold: usize) -> f64 {
    let positive: Vec<[f64; 3]> = triples
        .iter()
        .copied()
        .filter(|p| p.iter().all(|&v| v > 0.0))
        .collect();
    let mut front: Vec<[f64; 3]> = Vec::with_capacity(positive.len());
    'outer: for (i, p) in positive.iter().enumerate() {
        for (j, q) in positive.iter().enumerate() {
            if j == i {
                continue;
            }
            let covers = q.iter().zip(p).all(|(a, b)| a >= b);
            if covers && (q != p || j < i) {
                continue 'outer;
            }
        }
        front.push(*p);
    }
    if front.len() <= exact_threshold {
        return inclusion_exclusion_3(&front);
    }
    // Sweep downward in z; between consecutive z-levels the cross-section is
    // the staircase union of the (x, y)-shadows inserted so far.
    front.sort_by(|a, b| {
        b[2].partial_cmp(&a[2])
            .unwrap()
            .then(a[0].partial_cmp(&b[0]).unwrap())
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut stairs = Staircase::new();
    let mut volume = 0.0;
    for k in 0..front.len() {
        stairs.insert(front[k][0], front[k][1]);
        let z_top = front[k][2];
        let z_bottom = if k + 1 < front.len() { front[k + 1][2] } else { 0.0 };
        if z_top > z_bottom {
            volume += stairs.area * (z_top - z_bottom);
        }
    }
    volume
}

/// Volume of the anchored orthogonal union in three dimensions.
///
/// Fronts of at most `exact_threshold` points are evaluated by
/// inclusion-exclusion; larger fronts use a plane sweep along the third
/// coordinate that accumulates staircase areas of the prefix shadows. The
/// two paths agree to within accumulated rounding.
pub fn hypervolume_3d(set: &PointSet, anchor: &Anchor, exact_threshold: usize) -> f64 {
    let r = anchor.coords();
    let triples: Vec<[f64; 3]> = set
        .iter()
        .map(|p| {
            [
                (p[0] - r[0]).max(0.0),
                (p[1] - r[1]).max(0.0),
                (p[2] - r[2]).max(0.0),
            ]
        })
        .collect();
    volume_3d_of(&triples, exact_threshold)
}

/// Per-point gradient of [`hypervolume_3d`] by central finite differences of
/// the exact value.
pub fn hypervolume_gradient_3d(set: &PointSet, anchor: &Anchor, fd_radius: f64) -> Vec<Vec<f64>> {
    let mut grads = vec![vec![0.0; 3]; set.len()];
    let mut probe = set.clone();
    for i in 0..set.len() {
        for c in 0..3 {
            let base = set.point(i)[c];
            probe.set_coord(i, c, base + fd_radius);
            let up = hypervolume_3d(&probe, anchor, DEFAULT_EXACT_THRESHOLD);
            probe.set_coord(i, c, base - fd_radius);
            let down = hypervolume_3d(&probe, anchor, DEFAULT_EXACT_THRESHOLD);
            probe.set_coord(i, c, base);
            grads[i][c] = (up - down) / (2.0 * fd_radius);
        }
    }
    grads
}

/// Anchored hypervolume with dimension dispatch: exact closed forms in
/// dimensions 1-3, inclusion-exclusion beyond.
pub fn hypervolume(set: &PointSet, anchor: &Anchor, exact_threshold: usize) -> f64 {
    match set.dim() {
        0 => 0.0,
        1 => hypervolume_1d(set, anchor),
        2 => hypervolume_2d(set, anchor),
        3 => hypervolume_3d(set, anchor, exact_threshold),
        _ => hypervolume_union(set, anchor),
    }
}
