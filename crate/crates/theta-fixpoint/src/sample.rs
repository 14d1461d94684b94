//! Deterministic sample plans for the axiom and margin sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default grid resolution for interval-domain pair sweeps.
pub const DEFAULT_INTERVAL_POINTS: usize = 101;

/// Sampling schedule shared by all verification sweeps. A plan is pure data:
/// the same plan always yields the same sample sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Step of the grid on `[0, grid_max]` used for B-action and ζ checks.
    pub grid_step: f64,
    /// Upper end of that grid.
    pub grid_max: f64,
    /// Seeded uniform samples added on top of the grid.
    pub random_count: usize,
    /// Seed for every random draw the plan makes.
    pub seed: u64,
    /// Grid resolution for interval-domain point sweeps.
    pub interval_points: usize,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            grid_step: 0.1,
            grid_max: 10.0,
            random_count: 200,
            seed: 42,
            interval_points: DEFAULT_INTERVAL_POINTS,
        }
    }
}

impl SamplePlan {
    pub fn new(grid_step: f64, grid_max: f64, random_count: usize, seed: u64) -> Result<Self> {
        let plan = SamplePlan { grid_step, grid_max, random_count, seed, ..SamplePlan::default() };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step.is_finite() && self.grid_step > 0.0) {
            return Err(Error::InvalidPlan(format!("grid step must be positive, got {}", self.grid_step)));
        }
        if !(self.grid_max.is_finite() && self.grid_max > 0.0) {
            return Err(Error::InvalidPlan(format!("grid upper bound must be positive, got {}", self.grid_max)));
        }
        if self.interval_points < 2 {
            return Err(Error::InvalidPlan(format!("interval grid needs at least 2 points, got {}", self.interval_points)));
        }
        Ok(())
    }

    /// Grid values `0, step, 2·step, …` up to and including `grid_max`.
    pub fn grid_samples(&self) -> Vec<f64> {
        let n = (self.grid_max / self.grid_step).round() as usize;
        let mut grid: Vec<f64> = (0..=n).map(|i| i as f64 * self.grid_step).collect();
        // rounding can push the last point past the bound
        while grid.last().is_some_and(|&g| g > self.grid_max + self.grid_step * 1e-9) {
            grid.pop();
        }
        grid
    }

    /// Grid plus `random_count` seeded uniform draws from `[0, grid_max]`,
    /// in canonical order (grid first, then the draws).
    pub fn axis_samples(&self) -> Vec<f64> {
        let mut samples = self.grid_samples();
        let mut rng = self.rng(0);
        samples.extend((0..self.random_count).map(|_| rng.random_range(0.0..=self.grid_max)));
        samples
    }

    /// Every tenth grid value (always including the endpoints): a coarse axis
    /// for the cubic/quartic sweeps.
    pub fn coarse_grid(&self) -> Vec<f64> {
        let grid = self.grid_samples();
        let stride = grid.len().div_ceil(11).max(1);
        let mut coarse: Vec<f64> = grid.iter().copied().step_by(stride).collect();
        if coarse.last() != grid.last() {
            coarse.push(*grid.last().unwrap());
        }
        coarse
    }

    /// Independent RNG stream for one consumer of the plan.
    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_matches_the_documented_schedule() {
        let plan = SamplePlan::default();
        let grid = plan.grid_samples();
        assert_eq!(grid.len(), 101);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 10.0);
        assert_eq!(plan.axis_samples().len(), 301);
    }

    #[test]
    fn plans_are_deterministic() {
        let plan = SamplePlan::default();
        let a = plan.axis_samples();
        let b = plan.axis_samples();
        assert_eq!(a, b);
        let other_seed = SamplePlan { seed: 43, ..SamplePlan::default() };
        assert_ne!(a, other_seed.axis_samples());
    }

    #[test]
    fn plan_validation() {
        assert!(SamplePlan::new(0.0, 10.0, 10, 1).is_err());
        assert!(SamplePlan::new(0.1, -1.0, 10, 1).is_err());
        assert!(SamplePlan::new(0.1, 10.0, 0, 1).is_ok());
        assert!(SamplePlan { interval_points: 1, ..SamplePlan::default() }.validate().is_err());
    }

    #[test]
    fn coarse_grid_keeps_the_endpoints() {
        let coarse = SamplePlan::default().coarse_grid();
        assert_eq!(coarse.first(), Some(&0.0));
        assert_eq!(coarse.last(), Some(&10.0));
        assert!(coarse.len() <= 12);
    }

    #[test]
    fn random_samples_stay_in_range() {
        let plan = SamplePlan::default();
        for &s in &plan.axis_samples() {
            assert!((0.0..=plan.grid_max).contains(&s));
        }
    }
}
