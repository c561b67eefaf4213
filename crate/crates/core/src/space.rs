//! Search-space definitions: initialization ranges, boundary handling and
//! velocity caps.

use crate::error::{Error, Result};
use crate::rng::Rng;

/// How positions are treated after a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Positions may take any value.
    #[default]
    Unbounded,
    /// Positions may not fall below `hard_lo` but may exceed the upper end of
    /// the initialization range.
    ClampLowerOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    init_lo: Vec<f64>,
    init_hi: Vec<f64>,
    hard_lo: Option<Vec<f64>>,
    vmax: Option<Vec<f64>>,
    policy: BoundaryPolicy,
}

impl SearchSpace {
    /// Unbounded space with per-dimension initialization ranges.
    ///
    /// Degenerate ranges (`lo == hi`) are accepted so that fixed starting
    /// points can be expressed; `lo > hi` is rejected.
    pub fn new(init_lo: Vec<f64>, init_hi: Vec<f64>) -> Result<Self> {
        if init_lo.is_empty() {
            return Err(Error::InvalidSpace("zero dimensions".into()));
        }
        if init_lo.len() != init_hi.len() {
            return Err(Error::DimensionMismatch {
                expected: init_lo.len(),
                got: init_hi.len(),
            });
        }
        for (i, (lo, hi)) in init_lo.iter().zip(&init_hi).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidSpace(format!(
                    "dimension {i}: range [{lo}, {hi}] is not valid"
                )));
            }
        }
        Ok(Self {
            init_lo,
            init_hi,
            hard_lo: None,
            vmax: None,
            policy: BoundaryPolicy::Unbounded,
        })
    }

    /// Same range `[lo, hi]` in every one of `dims` dimensions.
    pub fn cube(dims: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dims], vec![hi; dims])
    }

    /// Symmetric speed cap applied to every dimension.
    pub fn with_vmax(mut self, vmax: Vec<f64>) -> Result<Self> {
        self.check_len(vmax.len())?;
        if let Some(bad) = vmax.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidSpace(format!(
                "velocity cap must be strictly positive, got {bad}"
            )));
        }
        self.vmax = Some(vmax);
        Ok(self)
    }

    /// Clamp positions from below at `hard_lo` and leave them unbounded above.
    pub fn with_lower_clamp(mut self, hard_lo: Vec<f64>) -> Result<Self> {
        self.check_len(hard_lo.len())?;
        self.hard_lo = Some(hard_lo);
        self.policy = BoundaryPolicy::ClampLowerOnly;
        Ok(self)
    }

    /// Lower clamp at the initialization lower bounds.
    pub fn clamped_at_init_lo(self) -> Self {
        let lo = self.init_lo.clone();
        self.with_lower_clamp(lo).expect("lengths agree")
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.dims() {
            Err(Error::DimensionMismatch {
                expected: self.dims(),
                got,
            })
        } else {
            Ok(())
        }
    }

    pub fn dims(&self) -> usize {
        self.init_lo.len()
    }

    pub fn init_lo(&self) -> &[f64] {
        &self.init_lo
    }

    pub fn init_hi(&self) -> &[f64] {
        &self.init_hi
    }

    pub fn hard_lo(&self) -> Option<&[f64]> {
        self.hard_lo.as_deref()
    }

    pub fn vmax(&self) -> Option<&[f64]> {
        self.vmax.as_deref()
    }

    pub fn policy(&self) -> BoundaryPolicy {
        self.policy
    }

    /// Width of the initialization range in dimension `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.init_hi[i] - self.init_lo[i]
    }

    /// Uniform sample inside the initialization box.
    pub fn sample_uniform(&self, rng: &mut Rng) -> Vec<f64> {
        self.init_lo
            .iter()
            .zip(&self.init_hi)
            .map(|(&lo, &hi)| rng.range(lo, hi))
            .collect()
    }

    /// Applies the boundary policy in place.
    pub fn apply_boundary_in_place(&self, x: &mut [f64]) {
        if let (BoundaryPolicy::ClampLowerOnly, Some(lo)) = (self.policy, &self.hard_lo) {
            for (xi, &l) in x.iter_mut().zip(lo) {
                if *xi < l {
                    *xi = l;
                }
            }
        }
    }

    pub fn apply_boundary(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        self.apply_boundary_in_place(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_range() {
        assert!(SearchSpace::new(vec![1.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![], vec![]).is_err());
        assert!(SearchSpace::cube(2, 0.0, 1.0)
            .unwrap()
            .with_vmax(vec![1.0, 0.0])
            .is_err());
    }

    #[test]
    fn degenerate_range_samples_zero() {
        let s = SearchSpace::cube(5, 0.0, 0.0).unwrap();
        let mut rng = Rng::new(3);
        assert_eq!(s.sample_uniform(&mut rng), vec![0.0; 5]);
    }

    #[test]
    fn sampling_replays_with_seed() {
        let s = SearchSpace::cube(10, -6.0, 6.0).unwrap();
        let a = s.sample_uniform(&mut Rng::new(99));
        let b = s.sample_uniform(&mut Rng::new(99));
        assert_eq!(a, b);
        assert!(a.iter().all(|x| (-6.0..=6.0).contains(x)));
    }

    #[test]
    fn sample_mean_is_centered() {
        let s = SearchSpace::cube(1, -6.0, 6.0).unwrap();
        let mut rng = Rng::new(7);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| s.sample_uniform(&mut rng)[0]).sum::<f64>() / n as f64;
        // sd of U[-6,6] is 6/sqrt(3) ~ 3.46, so the standard error is ~0.035
        assert!(mean.abs() < 0.2, "mean {mean}");
    }

    #[test]
    fn unbounded_is_identity() {
        let s = SearchSpace::cube(3, -1.0, 1.0).unwrap();
        let x = [-100.0, 0.5, 1e9];
        assert_eq!(s.apply_boundary(&x), x.to_vec());
    }

    #[test]
    fn lower_clamp() {
        let s = SearchSpace::cube(2, 1.0, 3.0).unwrap().clamped_at_init_lo();
        assert_eq!(s.apply_boundary(&[0.5, 2.0]), vec![1.0, 2.0]);
        assert_eq!(s.apply_boundary(&[1.5, 20.0]), vec![1.5, 20.0]);
    }
}
