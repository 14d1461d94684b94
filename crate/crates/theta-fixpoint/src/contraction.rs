//! Sampled certificates that a self-map is a (modified) Z-contraction with
//! respect to a simulation function.
//!
//! The certified quantity at a pair (x, y) is the margin ζ(d(Tx,Ty), q) with
//! q = d(x,y) for plain Z-contractions and q = M(x,y) for the modified kind.
//! Finite domains enumerate every ordered pair; interval domains sweep the
//! plan's point grid with the map's breakpoints injected, so piecewise maps
//! are sampled across their discontinuity.

use serde::{Deserialize, Serialize};

use crate::catalog::{SelfMap, SimulationFunction};
use crate::error::{Error, Result};
use crate::sample::SamplePlan;
use crate::space::{Point, ThetaMetricSpace, EPS_STRICT, EPS_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginVerdict {
    NonnegativeOnSamples,
    Violated,
}

/// Result of one margin sweep over sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub pair_count: usize,
    pub min_margin: f64,
    /// First pair (in canonical sweep order) attaining the minimum.
    pub argmin: Option<(Point, Point)>,
    pub verdict: MarginVerdict,
    /// Set when the minimum fell in [−εtol, 0): float noise near zero is
    /// clamped to a nonnegative verdict but flagged.
    pub clamped: bool,
    /// Minimum over pairs with distinct arguments, when any exist.
    pub distinct_min_margin: Option<f64>,
    pub distinct_argmin: Option<(Point, Point)>,
}

impl MarginReport {
    pub fn nonnegative(&self) -> bool {
        self.verdict == MarginVerdict::NonnegativeOnSamples
    }
}

fn require_same_domain(space: &ThetaMetricSpace, map: &SelfMap) -> Result<()> {
    if space.domain() != map.domain() {
        return Err(Error::DomainMismatch {
            point: format!("self-map on {}", map.domain()),
            domain: space.domain().to_string(),
        });
    }
    Ok(())
}

/// M(x, y) = max{d(x,y), d(x,Tx), d(y,Ty)}, the comparison quantity of the
/// modified contraction condition.
pub fn m_value(space: &ThetaMetricSpace, map: &SelfMap, x: &Point, y: &Point) -> Result<f64> {
    require_same_domain(space, map)?;
    let dxy = space.distance(x, y)?;
    let dx = space.distance(x, &map.apply(x)?)?;
    let dy = space.distance(y, &map.apply(y)?)?;
    Ok(dxy.max(dx).max(dy))
}

struct PairSweep {
    count: usize,
    min: f64,
    argmin: Option<(Point, Point)>,
    distinct_min: f64,
    distinct_argmin: Option<(Point, Point)>,
}

impl PairSweep {
    fn new() -> Self {
        PairSweep { count: 0, min: f64::INFINITY, argmin: None, distinct_min: f64::INFINITY, distinct_argmin: None }
    }

    fn observe(&mut self, x: Point, y: Point, margin: f64, distinct: bool) {
        self.count += 1;
        if margin < self.min {
            self.min = margin;
            self.argmin = Some((x, y));
        }
        if distinct && margin < self.distinct_min {
            self.distinct_min = margin;
            self.distinct_argmin = Some((x, y));
        }
    }

    fn finish(self, strict: bool) -> MarginReport {
        let min = if self.count == 0 { 0.0 } else { self.min };
        let (verdict, clamped) = if strict {
            (
                if min > EPS_STRICT { MarginVerdict::NonnegativeOnSamples } else { MarginVerdict::Violated },
                false,
            )
        } else if min >= 0.0 {
            (MarginVerdict::NonnegativeOnSamples, false)
        } else if min >= -EPS_TOL {
            (MarginVerdict::NonnegativeOnSamples, true)
        } else {
            (MarginVerdict::Violated, false)
        };
        MarginReport {
            pair_count: self.count,
            min_margin: min,
            argmin: self.argmin,
            verdict,
            clamped,
            distinct_min_margin: self.distinct_argmin.is_some().then_some(self.distinct_min),
            distinct_argmin: self.distinct_argmin,
        }
    }
}

fn margin_sweep<F>(
    space: &ThetaMetricSpace,
    map: &SelfMap,
    plan: &SamplePlan,
    skip_diagonal: bool,
    strict: bool,
    margin: F,
) -> Result<MarginReport>
where
    // margin(d(x,y), d(x,Tx), d(y,Ty), d(Tx,Ty))
    F: Fn(f64, f64, f64, f64) -> f64,
{
    plan.validate()?;
    require_same_domain(space, map)?;
    let pts = space.sample_points(plan.interval_points, map.breakpoints());
    let images: Vec<Point> = pts.iter().map(|p| map.apply(p)).collect::<Result<_>>()?;
    let step_dist: Vec<f64> = pts.iter().zip(&images).map(|(p, ip)| space.distance_raw(p, ip)).collect();

    let mut sweep = PairSweep::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if skip_diagonal && i == j {
                continue;
            }
            let dxy = space.distance_raw(&pts[i], &pts[j]);
            let dtt = space.distance_raw(&images[i], &images[j]);
            let m = margin(dxy, step_dist[i], step_dist[j], dtt);
            sweep.observe(pts[i], pts[j], m, i != j);
        }
    }
    Ok(sweep.finish(strict))
}

/// Minimum of ζ(d(Tx,Ty), d(x,y)) over sampled ordered pairs. Nonnegative on
/// samples means the map certifies as a Z-contraction for ζ at this
/// resolution.
pub fn z_margin(
    space: &ThetaMetricSpace,
    map: &SelfMap,
    zeta: &SimulationFunction,
    plan: &SamplePlan,
) -> Result<MarginReport> {
    margin_sweep(space, map, plan, false, false, |dxy, _, _, dtt| zeta.eval(dtt, dxy))
}

/// Minimum of ζ(d(Tx,Ty), M(x,y)) over sampled ordered pairs.
pub fn modified_z_margin(
    space: &ThetaMetricSpace,
    map: &SelfMap,
    zeta: &SimulationFunction,
    plan: &SamplePlan,
) -> Result<MarginReport> {
    margin_sweep(space, map, plan, false, false, |dxy, dx, dy, dtt| {
        zeta.eval(dtt, dxy.max(dx).max(dy))
    })
}

/// Minimum of d(x,y) − d(Tx,Ty) over sampled pairs with x ≠ y. A Z-contraction
/// shrinks every distinct pair, so the verdict demands a strictly positive
/// minimum.
pub fn contractivity_check(space: &ThetaMetricSpace, map: &SelfMap, plan: &SamplePlan) -> Result<MarginReport> {
    margin_sweep(space, map, plan, true, true, |dxy, _, _, dtt| dxy - dtt)
}
