//! Fixed-resolution Lovejoy grid over a belief simplex, and the Freudenthal
//! triangulation that writes any belief as a convex combination of at most
//! `N` neighbouring grid points.

use std::collections::HashMap;

use thiserror::Error;

/// Coordinates of the cdf transform closer than this to an integer are
/// snapped before flooring.
pub const SNAP_EPS: f64 = 1e-9;

/// Barycentric weights below this are treated as zero.
pub const WEIGHT_EPS: f64 = 1e-12;

/// Default cap on the number of points a single grid may have.
pub const DEFAULT_GRID_LIMIT: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid dimension and resolution must be positive (got N={dim}, M={resolution})")]
    InvalidSpec { dim: usize, resolution: u32 },
    #[error("grid with N={dim}, M={resolution} exceeds the capacity of {limit} points")]
    Capacity { dim: usize, resolution: u32, limit: u64 },
    #[error("belief has length {found}, grid dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("belief is not a distribution (sum {0})")]
    NotNormalized(f64),
    #[error("vector {0:?} is not a valid cdf grid vector")]
    MalformedCdf(Vec<i64>),
    #[error("no value stored for grid point {0:?}")]
    MissingValue(Vec<u32>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dim: usize,
    resolution: u32,
}

impl GridSpec {
    pub fn new(dim: usize, resolution: u32) -> Result<Self, GridError> {
        if dim == 0 || resolution == 0 {
            return Err(GridError::InvalidSpec { dim, resolution });
        }
        Ok(GridSpec { dim, resolution })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }
}

/// Integer counts `v` with `Σ v = M`; denotes the belief `v / M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    counts: Vec<u32>,
}

impl GridPoint {
    pub fn new(counts: Vec<u32>) -> Self {
        GridPoint { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn belief(&self) -> Vec<f64> {
        let m: u32 = self.counts.iter().sum();
        self.counts.iter().map(|&c| c as f64 / m as f64).collect()
    }
}

/// Convex combination of grid points (at most `N` of them).
#[derive(Debug, Clone, PartialEq)]
pub struct CornerWeights {
    entries: Vec<(GridPoint, f64)>,
}

impl CornerWeights {
    pub fn entries(&self) -> &[(GridPoint, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ λ_j g_j` as a dense belief.
    pub fn reconstruct(&self) -> Vec<f64> {
        let dim = self.entries.first().map(|e| e.0.counts.len()).unwrap_or(0);
        let mut out = vec![0.0; dim];
        for (g, w) in &self.entries {
            for (o, b) in out.iter_mut().zip(g.belief()) {
                *o += w * b;
            }
        }
        out
    }
}

/// Number of grid points, `(M+N−1)! / (M!(N−1)!)`.
pub fn grid_count(spec: GridSpec) -> Result<u64, GridError> {
    let overflow = GridError::Capacity { dim: spec.dim, resolution: spec.resolution, limit: u64::MAX };
    let m = spec.resolution as u128;
    let k = (spec.dim - 1) as u128;
    // C(m + k, k) built incrementally; every intermediate is itself a binomial.
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(m + i).ok_or_else(|| overflow.clone())? / i;
        if acc > u64::MAX as u128 {
            return Err(overflow);
        }
    }
    Ok(acc as u64)
}

pub fn enumerate_grid(spec: GridSpec) -> Result<Vec<GridPoint>, GridError> {
    enumerate_grid_with_limit(spec, DEFAULT_GRID_LIMIT)
}

/// All compositions of `M` into `N` non-negative parts in ascending
/// lexicographic order.
pub fn enumerate_grid_with_limit(spec: GridSpec, limit: u64) -> Result<Vec<GridPoint>, GridError> {
    let count = grid_count(spec)?;
    if count > limit {
        return Err(GridError::Capacity { dim: spec.dim, resolution: spec.resolution, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; spec.dim];
    fill(&mut current, 0, spec.resolution, &mut out);
    Ok(out)
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<GridPoint>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(GridPoint::new(current.clone()));
        return;
    }
    for c in 0..=remaining {
        current[pos] = c;
        fill(current, pos + 1, remaining - c, out);
    }
}

/// `x(i) = M · Σ_{j ≥ i} b(j)`, with `x(1)` forced to exactly `M`.
pub fn to_cdf(b: &[f64], resolution: u32) -> Vec<f64> {
    let m = resolution as f64;
    let mut x = vec![0.0; b.len()];
    let mut tail = 0.0;
    for i in (0..b.len()).rev() {
        tail += b[i];
        x[i] = m * tail;
    }
    if let Some(first) = x.first_mut() {
        *first = m;
    }
    x
}

/// Maps a cdf vector `q` (non-increasing, `q(1) = M`, `q(N) ≥ 0`) back to
/// the grid point with counts `(q(1)−q(2), …, q(N−1)−q(N), q(N))`.
pub fn from_cdf(q: &[i64], resolution: u32) -> Result<GridPoint, GridError> {
    let malformed = || GridError::MalformedCdf(q.to_vec());
    let (&first, _) = q.split_first().ok_or_else(malformed)?;
    if first != resolution as i64 || *q.last().unwrap() < 0 || q.windows(2).any(|w| w[0] < w[1]) {
        return Err(malformed());
    }
    let mut counts = Vec::with_capacity(q.len());
    for i in 0..q.len() {
        let next = q.get(i + 1).copied().unwrap_or(0);
        counts.push((q[i] - next) as u32);
    }
    Ok(GridPoint::new(counts))
}

/// Freudenthal triangulation of `b` on the resolution-`M` grid.
///
/// Ties between equal fractional parts are broken towards the smaller
/// coordinate index, so the result is deterministic.
pub fn triangulate(b: &[f64], spec: GridSpec) -> Result<CornerWeights, GridError> {
    let n = spec.dim;
    if b.len() != n {
        return Err(GridError::DimensionMismatch { expected: n, found: b.len() });
    }
    let sum: f64 = b.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || b.iter().any(|&p| p < -1e-12) {
        return Err(GridError::NotNormalized(sum));
    }

    let mut x = to_cdf(b, spec.resolution);
    for xi in x.iter_mut() {
        let r = xi.round();
        if (*xi - r).abs() <= SNAP_EPS {
            *xi = r;
        }
    }
    let v: Vec<i64> = x.iter().map(|xi| xi.floor() as i64).collect();
    let d: Vec<f64> = x.iter().zip(&v).map(|(xi, &vi)| xi - vi as f64).collect();

    let mut perm: Vec<usize> = (0..n).collect();
    // stable: equal fractional parts keep ascending index order
    perm.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap_or(std::cmp::Ordering::Equal));

    // Corner vectors v_1 = v, v_{k+1} = v_k + e_{p(k)}, and their weights
    // λ_k = d(p(k−1)) − d(p(k)) for k ≥ 2, λ_1 = 1 − Σ_{k≥2} λ_k.
    let mut corners: Vec<Vec<i64>> = Vec::with_capacity(n);
    corners.push(v.clone());
    for k in 0..n - 1 {
        let mut next = corners[k].clone();
        next[perm[k]] += 1;
        corners.push(next);
    }
    let mut lambda = vec![0.0; n];
    for k in 1..n {
        lambda[k] = d[perm[k - 1]] - d[perm[k]];
    }
    lambda[0] = 1.0 - lambda[1..].iter().sum::<f64>();

    let mut entries = Vec::with_capacity(n);
    for (corner, &w) in corners.iter().zip(&lambda) {
        if w < WEIGHT_EPS {
            continue;
        }
        entries.push((from_cdf(corner, spec.resolution)?, w));
    }
    let total: f64 = entries.iter().map(|e| e.1).sum();
    for e in entries.iter_mut() {
        e.1 /= total;
    }
    Ok(CornerWeights { entries })
}

/// `Σ λ_j · values(g_j)`.
pub fn interpolate(weights: &CornerWeights, values: &HashMap<GridPoint, f64>) -> Result<f64, GridError> {
    let mut total = 0.0;
    for (g, w) in &weights.entries {
        let v = values.get(g).ok_or_else(|| GridError::MissingValue(g.counts.clone()))?;
        total += w * v;
    }
    Ok(total)
}

/// Grid points of one simplex stored contiguously, with lexicographic
/// ranking so corner lookups need no hash map.
#[derive(Debug, Clone)]
pub struct IndexedGrid {
    spec: GridSpec,
    counts: Vec<u32>,
    /// `comp[k][r]`: number of compositions of `r` into `k` parts.
    comp: Vec<Vec<u64>>,
}

impl IndexedGrid {
    pub fn new(spec: GridSpec, limit: u64) -> Result<Self, GridError> {
        let count = grid_count(spec)?;
        if count > limit {
            return Err(GridError::Capacity { dim: spec.dim, resolution: spec.resolution, limit });
        }
        let (n, m) = (spec.dim, spec.resolution as usize);
        let mut comp = vec![vec![0u64; m + 1]; n + 1];
        comp[0][0] = 1;
        for k in 1..=n {
            let mut acc = 0u64;
            for r in 0..=m {
                acc += comp[k - 1][r];
                comp[k][r] = acc;
            }
        }
        let mut counts = Vec::with_capacity(count as usize * n);
        for g in enumerate_grid_with_limit(spec, limit)? {
            counts.extend_from_slice(&g.counts);
        }
        Ok(IndexedGrid { spec, counts, comp })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.counts.len() / self.spec.dim
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u32] {
        let n = self.spec.dim;
        &self.counts[i * n..(i + 1) * n]
    }

    pub fn belief(&self, i: usize) -> Vec<f64> {
        let m = self.spec.resolution as f64;
        self.point(i).iter().map(|&c| c as f64 / m).collect()
    }

    /// Position of `counts` in lexicographic order.
    pub fn rank(&self, counts: &[u32]) -> Option<usize> {
        let n = self.spec.dim;
        if counts.len() != n || counts.iter().map(|&c| c as u64).sum::<u64>() != self.spec.resolution as u64 {
            return None;
        }
        let mut rank = 0u64;
        let mut rem = self.spec.resolution as usize;
        for (i, &c) in counts[..n - 1].iter().enumerate() {
            let c = c as usize;
            let k = n - i - 1;
            // compositions with a smaller entry at position i
            rank += self.comp[k + 1][rem] - if c > rem { 0 } else { self.comp[k + 1][rem - c] };
            rem -= c;
        }
        Some(rank as usize)
    }

    /// Triangulates `b` and resolves the corners to indices into this grid.
    pub fn corners(&self, b: &[f64]) -> Result<Vec<(usize, f64)>, GridError> {
        let w = triangulate(b, self.spec)?;
        w.entries
            .into_iter()
            .map(|(g, l)| self.rank(&g.counts).map(|i| (i, l)).ok_or(GridError::MissingValue(g.counts)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(n: usize, m: u32) -> GridSpec {
        GridSpec::new(n, m).unwrap()
    }

    /// Brute force: every vector in {0..M}^N whose entries sum to M.
    fn brute_grid(n: usize, m: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let total = (m as usize + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((c % (m as usize + 1)) as u32);
                c /= m as usize + 1;
            }
            v.reverse();
            if v.iter().sum::<u32>() == m {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn counts_small_grids() {
        assert_eq!(grid_count(spec(1, 7)).unwrap(), 1);
        assert_eq!(grid_count(spec(3, 2)).unwrap(), 6);
        assert_eq!(grid_count(spec(4, 8)).unwrap(), enumerate_grid(spec(4, 8)).unwrap().len() as u64);
    }

    #[test]
    fn rejects_degenerate_specs() {
        assert!(GridSpec::new(0, 2).is_err());
        assert!(GridSpec::new(2, 0).is_err());
    }

    #[test]
    fn count_overflow_is_reported() {
        assert!(matches!(grid_count(spec(200, 1000)), Err(GridError::Capacity { .. })));
        assert!(matches!(
            enumerate_grid_with_limit(spec(5, 20), 100),
            Err(GridError::Capacity { limit: 100, .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g: Vec<Vec<u32>> = enumerate_grid(spec(2, 2)).unwrap().into_iter().map(|p| p.counts).collect();
        assert_eq!(g, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let g: Vec<Vec<u32>> = enumerate_grid(spec(3, 1)).unwrap().into_iter().map(|p| p.counts).collect();
        assert_eq!(g, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=4 {
            for m in 1..=5 {
                let g: Vec<Vec<u32>> =
                    enumerate_grid(spec(n, m)).unwrap().into_iter().map(|p| p.counts).collect();
                assert_eq!(g, brute_grid(n, m), "N={n} M={m}");
            }
        }
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(to_cdf(&[1.0, 0.0, 0.0], 4), vec![4.0, 0.0, 0.0]);
        assert_eq!(to_cdf(&[0.5, 0.5], 2), vec![2.0, 1.0]);
        assert_eq!(from_cdf(&[2, 1, 0], 2).unwrap().belief(), vec![0.5, 0.5, 0.0]);
        assert_eq!(from_cdf(&[3, 3, 3], 3).unwrap().counts(), &[0, 0, 3]);
        assert!(from_cdf(&[2, 3, 0], 2).is_err());
        assert!(from_cdf(&[1, 0], 2).is_err());
    }

    #[test]
    fn cdf_round_trip_on_grid() {
        for g in enumerate_grid(spec(3, 4)).unwrap() {
            let x = to_cdf(&g.belief(), 4);
            let q: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
            assert_eq!(from_cdf(&q, 4).unwrap(), g);
        }
    }

    #[test]
    fn two_point_example() {
        let w = triangulate(&[0.75, 0.25], spec(2, 2)).unwrap();
        let mut entries: Vec<(Vec<u32>, f64)> = w.entries().iter().map(|(g, l)| (g.counts.clone(), *l)).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].0, vec![1, 1]);
        assert_eq!(entries[1].0, vec![2, 0]);
        assert!((entries[0].1 - 0.5).abs() < 1e-12);
        assert!((entries[1].1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn grid_points_triangulate_to_themselves() {
        for n in 1..=4 {
            for m in 1..=6 {
                for g in enumerate_grid(spec(n, m)).unwrap() {
                    let w = triangulate(&g.belief(), spec(n, m)).unwrap();
                    assert_eq!(w.entries().len(), 1);
                    assert_eq!(w.entries()[0].0, g);
                    assert_eq!(w.entries()[0].1, 1.0);
                }
            }
        }
    }

    #[test]
    fn interpolation_uses_weights() {
        let w = triangulate(&[0.75, 0.25], spec(2, 2)).unwrap();
        let values: HashMap<GridPoint, f64> =
            [(GridPoint::new(vec![2, 0]), 0.0), (GridPoint::new(vec![1, 1]), 1.0)].into_iter().collect();
        assert!((interpolate(&w, &values).unwrap() - 0.5).abs() < 1e-12);
        let single = triangulate(&[1.0, 0.0], spec(2, 2)).unwrap();
        assert_eq!(interpolate(&single, &values).unwrap(), 0.0);
        let empty = HashMap::new();
        assert!(matches!(interpolate(&w, &empty), Err(GridError::MissingValue(_))));
    }

    #[test]
    fn ranking_matches_enumeration_order() {
        for n in 1..=5 {
            for m in 1..=6 {
                let grid = IndexedGrid::new(spec(n, m), u64::MAX).unwrap();
                for i in 0..grid.len() {
                    assert_eq!(grid.rank(grid.point(i)), Some(i));
                }
            }
        }
        let grid = IndexedGrid::new(spec(3, 2), u64::MAX).unwrap();
        assert_eq!(grid.rank(&[1, 1, 1]), None);
    }

    #[test]
    fn triangulate_rejects_bad_input() {
        assert!(matches!(triangulate(&[0.5, 0.4], spec(2, 2)), Err(GridError::NotNormalized(_))));
        assert!(matches!(triangulate(&[1.0], spec(2, 2)), Err(GridError::DimensionMismatch { .. })));
    }

    fn belief_strategy() -> impl Strategy<Value = (Vec<f64>, u32)> {
        (2usize..=6, 1u32..=8).prop_flat_map(|(n, m)| {
            (prop::collection::vec(0.0f64..1.0, n), Just(m)).prop_map(|(raw, m)| {
                let s: f64 = raw.iter().sum::<f64>().max(1e-9);
                (raw.iter().map(|r| r / s).collect(), m)
            })
        })
    }

    proptest! {
        #[test]
        fn reconstruction_identity((b, m) in belief_strategy()) {
            let w = triangulate(&b, spec(b.len(), m)).unwrap();
            prop_assert!(w.len() <= b.len());
            let total: f64 = w.entries().iter().map(|e| e.1).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            for (g, l) in w.entries() {
                prop_assert!(*l >= 0.0 && *l <= 1.0);
                prop_assert_eq!(g.counts().iter().sum::<u32>(), m);
            }
            let r = w.reconstruct();
            for (x, y) in r.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }

        #[test]
        fn affine_functions_interpolate_exactly(
            (b, m) in belief_strategy(),
            coeffs in prop::collection::vec(-3.0f64..3.0, 7),
        ) {
            let f = |p: &[f64]| coeffs[6] + p.iter().zip(&coeffs).map(|(x, c)| x * c).sum::<f64>();
            let w = triangulate(&b, spec(b.len(), m)).unwrap();
            let values: HashMap<GridPoint, f64> =
                w.entries().iter().map(|(g, _)| (g.clone(), f(&g.belief()))).collect();
            prop_assert!((interpolate(&w, &values).unwrap() - f(&b)).abs() <= 1e-9);
        }
    }
}
