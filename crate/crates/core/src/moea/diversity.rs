//! Cell-occupation diversity metric with cells laid out uniformly on the
//! known front surface and projected onto each objective axis.

use crate::benchmarks::FrontShape;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Window values for a non-boundary cell, indexed by the occupation bits
/// `(left, centre, right)` read as a binary number.
pub const NON_BOUNDARY: [f64; 8] = [0.0, 0.5, 0.75, 0.67, 0.5, 0.75, 0.67, 1.0];

/// Window values for a boundary cell and its single inner neighbour.
pub const BOUNDARY: [f64; 4] = [0.0, 0.67, 0.67, 1.0];

/// Sample size used to estimate projected cell edges when `M > 2`.
pub const FRONT_SAMPLES: usize = 100_000;

const FRONT_SAMPLE_SEED: u64 = 0x5eed_f407;

/// Normalised diversity of one axis' occupation vector.
pub fn score_occupation(occ: &[bool]) -> Result<f64> {
    let n = occ.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 cells, got {n}")));
    }
    let bit = |i: usize| occ[i] as usize;
    let mut sum = BOUNDARY[2 * bit(0) + bit(1)] + BOUNDARY[2 * bit(n - 1) + bit(n - 2)];
    for i in 1..n - 1 {
        sum += NON_BOUNDARY[4 * bit(i - 1) + 2 * bit(i) + bit(i + 1)];
    }
    Ok(sum / n as f64)
}

/// Projected cell edges on one objective axis (identical for every axis by
/// symmetry of the fronts).
#[derive(Debug, Clone, PartialEq)]
pub struct CellPartition {
    edges: Vec<f64>,
}

impl CellPartition {
    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 4 {
            return Err(Error::InvalidParameter("need at least 3 cells".into()));
        }
        if edges.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidParameter("cell edges must be non-decreasing".into()));
        }
        Ok(Self { edges })
    }

    /// `n_cells` cells of equal area on the front of the given shape.
    ///
    /// Two objectives use the exact projection (uniform along the segment,
    /// or uniform in arc angle). More objectives use quantiles of the
    /// axis-marginal of a fixed-seed uniform sample of the front.
    pub fn for_front(shape: FrontShape, n_obj: usize, n_cells: usize) -> Result<Self> {
        if n_obj < 2 {
            return Err(Error::InvalidParameter("need at least 2 objectives".into()));
        }
        if n_cells < 3 {
            return Err(Error::InvalidParameter(format!("need at least 3 cells, got {n_cells}")));
        }
        let top = shape_extent(shape);
        let edges = if n_obj == 2 {
            (0..=n_cells)
                .map(|j| {
                    let q = j as f64 / n_cells as f64;
                    match shape {
                        FrontShape::Linear => top * q,
                        FrontShape::Spherical => (q * std::f64::consts::FRAC_PI_2).sin(),
                    }
                })
                .collect()
        } else {
            let mut values = sample_front_coordinates(shape, n_obj, FRONT_SAMPLES);
            values.sort_by(f64::total_cmp);
            let last = values.len() - 1;
            let mut edges: Vec<f64> = (0..=n_cells)
                .map(|j| values[(j * last + n_cells / 2) / n_cells])
                .collect();
            edges[0] = 0.0;
            edges[n_cells] = top;
            edges
        };
        Self::from_edges(edges)
    }

    pub fn n_cells(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Cell holding `v`, or `None` outside the front's axis range. The last
    /// cell is closed on the right.
    pub fn cell_of(&self, v: f64) -> Option<usize> {
        let n = self.n_cells();
        if !(v >= self.edges[0] && v <= self.edges[n]) {
            return None;
        }
        let idx = self.edges.partition_point(|e| *e <= v);
        Some(idx.saturating_sub(1).min(n - 1))
    }

    pub fn occupation(&self, values: impl IntoIterator<Item = f64>) -> Vec<bool> {
        let mut occ = vec![false; self.n_cells()];
        for v in values {
            if let Some(c) = self.cell_of(v) {
                occ[c] = true;
            }
        }
        occ
    }
}

fn shape_extent(shape: FrontShape) -> f64 {
    match shape {
        FrontShape::Linear => 0.5,
        FrontShape::Spherical => 1.0,
    }
}

/// All coordinates of `count` points drawn uniformly on the front surface.
fn sample_front_coordinates(shape: FrontShape, n_obj: usize, count: usize) -> Vec<f64> {
    let mut rng = Rng::new(FRONT_SAMPLE_SEED);
    let mut out = Vec::with_capacity(count * n_obj);
    let mut p = vec![0.0; n_obj];
    for _ in 0..count {
        match shape {
            FrontShape::Linear => {
                for v in p.iter_mut() {
                    *v = rng.exp1();
                }
                let s: f64 = p.iter().sum();
                out.extend(p.iter().map(|v| 0.5 * v / s));
            }
            FrontShape::Spherical => {
                for v in p.iter_mut() {
                    *v = rng.standard_normal().abs();
                }
                let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                out.extend(p.iter().map(|v| v / r));
            }
        }
    }
    out
}

/// Mean over objectives of the per-axis occupation score of `obtained`.
pub fn diversity_metric2(partition: &CellPartition, obtained: &[Vec<f64>]) -> Result<f64> {
    let Some(first) = obtained.first() else {
        return Err(Error::Empty("obtained solutions"));
    };
    let m = first.len();
    if let Some(bad) = obtained.iter().find(|f| f.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: bad.len() });
    }
    let mut total = 0.0;
    for axis in 0..m {
        let occ = partition.occupation(obtained.iter().map(|f| f[axis]));
        total += score_occupation(&occ)?;
    }
    Ok(total / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn bits(s: &[u8]) -> Vec<bool> {
        s.iter().map(|b| *b == 1).collect()
    }

    #[test]
    fn worked_occupation_example() {
        let v = score_occupation(&bits(&[1, 0, 1, 1, 0, 1])).unwrap();
        assert!((v - 4.18 / 6.0).abs() < 1e-12);
        assert!((v - 0.697).abs() < 0.001);
    }

    #[test]
    fn extremes() {
        assert_eq!(score_occupation(&[true; 10]).unwrap(), 1.0);
        assert_eq!(score_occupation(&[false; 10]).unwrap(), 0.0);
        assert!(score_occupation(&[true, true]).is_err());
    }

    #[test]
    fn arc_cells_on_two_objective_sphere() {
        let p = CellPartition::for_front(FrontShape::Spherical, 2, 6).unwrap();
        let e = p.edges();
        assert_eq!(e[0], 0.0);
        assert!((e[3] - (std::f64::consts::PI / 4.0).sin()).abs() < 1e-15);
        assert!((e[6] - 1.0).abs() < 1e-15);
        // cells shrink towards the tip of the quarter circle
        assert!(e[6] - e[5] < e[1] - e[0]);
    }

    #[test]
    fn worked_example_on_the_quarter_circle() {
        // Six arc-uniform cells; points at the centres of cells 0, 2, 3, 5.
        let p = CellPartition::for_front(FrontShape::Spherical, 2, 6).unwrap();
        let pts: Vec<Vec<f64>> = [0usize, 2, 3, 5]
            .iter()
            .map(|&c| {
                let t = (c as f64 + 0.5) / 6.0 * std::f64::consts::FRAC_PI_2;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let d = diversity_metric2(&p, &pts).unwrap();
        assert!((d - 0.697).abs() < 0.001, "{d}");
    }

    #[test]
    fn sampled_edges_agree_with_exact_two_objective_edges() {
        for shape in [FrontShape::Linear, FrontShape::Spherical] {
            let exact = CellPartition::for_front(shape, 2, 10).unwrap();
            let mut v = sample_front_coordinates(shape, 2, FRONT_SAMPLES);
            v.sort_by(f64::total_cmp);
            for j in 1..10 {
                let q = v[j * (v.len() - 1) / 10];
                assert!((q - exact.edges()[j]).abs() < 0.01, "{shape:?} {j}");
            }
        }
    }

    #[test]
    fn three_objective_simplex_edges() {
        // Marginal of a uniform point on the 2-simplex scaled by 1/2 has
        // CDF 1 - (1 - 2v)^2, so the median edge sits at (1 - 1/sqrt 2) / 2.
        let p = CellPartition::for_front(FrontShape::Linear, 3, 10).unwrap();
        let expected = (1.0 - 0.5f64.sqrt()) / 2.0;
        assert!((p.edges()[5] - expected).abs() < 2e-3);
        assert_eq!(p.edges()[10], 0.5);
    }

    #[test]
    fn out_of_range_projections_are_ignored() {
        let p = CellPartition::for_front(FrontShape::Linear, 2, 4).unwrap();
        assert_eq!(p.cell_of(0.5), Some(3));
        assert_eq!(p.cell_of(0.0), Some(0));
        assert_eq!(p.cell_of(0.51), None);
        assert_eq!(p.cell_of(f64::NAN), None);
    }

    proptest! {
        #[test]
        fn score_is_bounded(occ in prop::collection::vec(any::<bool>(), 3..40)) {
            let s = score_occupation(&occ).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
        }

        #[test]
        fn metric_is_permutation_invariant(
            pts in prop::collection::vec(prop::collection::vec(0.0f64..1.2, 3), 1..30),
            seed in any::<u64>(),
        ) {
            static P: std::sync::OnceLock<CellPartition> = std::sync::OnceLock::new();
            let p = P.get_or_init(|| CellPartition::for_front(FrontShape::Spherical, 3, 12).unwrap());
            let a = diversity_metric2(p, &pts).unwrap();
            let mut shuffled = pts.clone();
            Rng::new(seed).shuffle(&mut shuffled);
            let b = diversity_metric2(p, &shuffled).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }
}
