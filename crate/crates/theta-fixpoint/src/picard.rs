//! Picard iteration and the convergence diagnostics the fixed-point
//! arguments rest on: step-distance decay (asymptotic regularity), the
//! finite-horizon Cauchy estimate Ĉ_n, and a multi-start uniqueness probe.

use serde::{Deserialize, Serialize};

use crate::catalog::SelfMap;
use crate::error::{Error, Result};
use crate::space::{DistanceFn, Point, ThetaMetricSpace, EPS_TOL};

/// Step-distance stopping tolerance used by the bundled experiments.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Iteration budget used by the bundled experiments.
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Pairwise limits within `UNIQUENESS_FACTOR · tol` count as one fixed point.
pub const UNIQUENESS_FACTOR: f64 = 10.0;

/// The iterate sequence x₀, x₁ = Tx₀, … with the step distances
/// d_n = d(x_n, x_{n+1}).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardTrace {
    iterates: Vec<Point>,
    steps: Vec<f64>,
}

impl PicardTrace {
    pub fn iterates(&self) -> &[Point] {
        &self.iterates
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub fn start(&self) -> &Point {
        &self.iterates[0]
    }

    pub fn last(&self) -> &Point {
        self.iterates.last().expect("trace holds at least the start")
    }

    /// Number of recorded Picard steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    /// Step distance dropped to the tolerance.
    Converged,
    /// Two consecutive iterates were identical, so the candidate is exactly
    /// fixed.
    ExactFixedPoint,
    /// Budget exhausted before either stop fired.
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub status: SolveStatus,
    pub candidate: Point,
    /// d(z, Tz), recomputed at the candidate.
    pub residual: f64,
    /// Picard steps recorded in the trace.
    pub iterations: usize,
    pub trace: PicardTrace,
}

impl FixedPointResult {
    pub fn converged(&self) -> bool {
        matches!(self.status, SolveStatus::Converged | SolveStatus::ExactFixedPoint)
    }
}

/// Iterate x_{n+1} = T x_n from `x0` until the step distance reaches `tol`,
/// an iterate repeats exactly, or `max_iter` applications are spent.
///
/// An exact repeat at the very first application leaves the trace a single
/// point; later repeats record the repeated iterate and its zero step so the
/// decay diagnostics can see the terminal step.
pub fn picard_iterate(
    space: &ThetaMetricSpace,
    map: &SelfMap,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    if space.domain() != map.domain() {
        return Err(Error::DomainMismatch {
            point: format!("self-map on {}", map.domain()),
            domain: space.domain().to_string(),
        });
    }
    space.require_member(x0)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter { kind: "picard".into(), reason: format!("tol must be positive, got {tol}") });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter { kind: "picard".into(), reason: "max_iter must be positive".into() });
    }

    let mut iterates = vec![*x0];
    let mut steps: Vec<f64> = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    for n in 0..max_iter {
        let current = *iterates.last().unwrap();
        let next = map.apply(&current)?;
        if next == current {
            if n > 0 {
                iterates.push(next);
                steps.push(space.distance_raw(&current, &next));
            }
            status = SolveStatus::ExactFixedPoint;
            break;
        }
        let step = space.distance_raw(&current, &next);
        iterates.push(next);
        steps.push(step);
        if step <= tol {
            status = SolveStatus::Converged;
            break;
        }
    }

    let candidate = *iterates.last().unwrap();
    let residual = space.distance_raw(&candidate, &map.apply(&candidate)?);
    Ok(FixedPointResult { status, candidate, residual, iterations: steps.len(), trace: PicardTrace { iterates, steps } })
}

/// Step-decay diagnostics of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    /// d_{n+1} ≤ d_n + εtol held along the whole trace.
    pub monotone: bool,
    pub final_step: f64,
    /// Final step at or below the tolerance.
    pub regular: bool,
}

/// Monotone-decay and vanishing-step check over a trace with at least two
/// recorded steps.
pub fn asymptotic_regularity(trace: &PicardTrace, tol: f64) -> Result<RegularityReport> {
    let steps = trace.steps();
    if steps.len() < 2 {
        return Err(Error::TraceTooShort(format!("need at least 2 steps, trace has {}", steps.len())));
    }
    let monotone = steps.windows(2).all(|w| w[1] <= w[0] + EPS_TOL);
    let final_step = *steps.last().unwrap();
    Ok(RegularityReport { monotone, final_step, regular: final_step <= tol })
}

/// Finite-horizon Cauchy estimates: Ĉ_n = max{d(x_i, x_j) : n ≤ i, j ≤ N}
/// for each n, a non-increasing lower bound for the tail suprema driven to
/// zero in the convergence argument.
///
/// Interval traces reduce the suffix sup to (suffix max − suffix min) of the
/// coordinates; finite traces fold labels in from the right. Both match the
/// quadratic double loop exactly.
pub fn cauchy_diagnostic(trace: &PicardTrace, space: &ThetaMetricSpace) -> Vec<f64> {
    let pts = trace.iterates();
    if pts.is_empty() {
        return vec![];
    }
    match space.distance_fn() {
        DistanceFn::Euclid => {
            let coords: Vec<f64> = pts
                .iter()
                .map(|p| p.as_coord().expect("interval space trace holds coordinates"))
                .collect();
            let n = coords.len();
            let mut out = vec![0.0; n];
            let (mut hi, mut lo) = (coords[n - 1], coords[n - 1]);
            for k in (0..n).rev() {
                hi = hi.max(coords[k]);
                lo = lo.min(coords[k]);
                out[k] = hi - lo;
            }
            out
        }
        DistanceFn::Table(table) => {
            let n = pts.len();
            let mut out = vec![0.0; n];
            let mut present = vec![false; table.len()];
            let mut running = 0.0_f64;
            for k in (0..n).rev() {
                let label = pts[k].as_label().expect("finite space trace holds labels");
                for (other, seen) in present.iter().enumerate() {
                    if *seen {
                        running = running.max(table.get(label, other));
                    }
                }
                present[label] = true;
                out[k] = running;
            }
            out
        }
    }
}

/// Outcome of running the solver from several starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub all_converged: bool,
    /// Largest d(z_i, z_j) between candidate limits.
    pub max_pairwise: f64,
    /// All runs converged and the limits agree within 10·tol.
    pub unique: bool,
    pub limits: Vec<Point>,
}

/// Summarize already-computed solver results into a uniqueness report.
pub fn uniqueness_from_results(
    space: &ThetaMetricSpace,
    results: &[FixedPointResult],
    tol: f64,
) -> Result<UniquenessReport> {
    if results.len() < 2 {
        return Err(Error::NotEnoughStarts(results.len()));
    }
    let all_converged = results.iter().all(FixedPointResult::converged);
    let limits: Vec<Point> = results.iter().map(|r| r.candidate).collect();
    let mut max_pairwise = 0.0_f64;
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            max_pairwise = max_pairwise.max(space.distance(&limits[i], &limits[j])?);
        }
    }
    Ok(UniquenessReport {
        all_converged,
        max_pairwise,
        unique: all_converged && max_pairwise <= UNIQUENESS_FACTOR * tol,
        limits,
    })
}

/// Run the solver from every start and compare the limits.
pub fn uniqueness_probe(
    space: &ThetaMetricSpace,
    map: &SelfMap,
    starts: &[Point],
    tol: f64,
    max_iter: usize,
) -> Result<UniquenessReport> {
    if starts.len() < 2 {
        return Err(Error::NotEnoughStarts(starts.len()));
    }
    let results: Vec<FixedPointResult> = starts
        .iter()
        .map(|x0| picard_iterate(space, map, x0, tol, max_iter))
        .collect::<Result<_>>()?;
    uniqueness_from_results(space, &results, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_b_action, make_self_map, SelfMap};
    use crate::space::{DistanceTable, PointDomain};

    fn unit_interval() -> ThetaMetricSpace {
        ThetaMetricSpace::interval(0.0, 1.0, make_b_action("product-sum", &[]).unwrap()).unwrap()
    }

    fn affine(space: &ThetaMetricSpace) -> SelfMap {
        make_self_map("affine", &[2.0, 0.25], space.domain()).unwrap()
    }

    #[test]
    fn affine_converges_to_its_closed_form_fixed_point() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.0), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(result.status, SolveStatus::Converged);
        // u = ab/(a−1) = 0.5
        let u = result.candidate.as_coord().unwrap();
        assert!((u - 0.5).abs() <= 1e-9, "candidate {u}");
        assert!(result.iterations <= 100);
        assert!(result.residual <= DEFAULT_TOL);
        // residual equals the recomputed step at the candidate
        let z = result.candidate;
        let tz = map.apply(&z).unwrap();
        assert_eq!(result.residual, space.distance(&z, &tz).unwrap());
    }

    #[test]
    fn starting_at_the_fixed_point_yields_a_single_point_trace() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.5), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(result.status, SolveStatus::ExactFixedPoint);
        assert_eq!(result.iterations, 0);
        assert_eq!(result.trace.iterates().len(), 1);
        assert_eq!(result.residual, 0.0);
    }

    #[test]
    fn reciprocal_converges_to_the_golden_ratio_conjugate() {
        let space = unit_interval();
        let map = make_self_map("reciprocal", &[], space.domain()).unwrap();
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        for x0 in [0.0, 0.5, 1.0] {
            let result = picard_iterate(&space, &map, &Point::coord(x0), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            assert!(result.converged());
            let u = result.candidate.as_coord().unwrap();
            assert!((u - golden).abs() <= 1e-9, "from {x0}: {u}");
        }
    }

    #[test]
    fn two_piece_map_reaches_its_fixed_point_exactly() {
        let space = unit_interval();
        let map = make_self_map("two-piece", &[2.0 / 9.0, 1.0 / 9.0, 0.5], space.domain()).unwrap();
        for x0 in [0.0, 0.3, 0.5, 0.7, 1.0] {
            let result = picard_iterate(&space, &map, &Point::coord(x0), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            assert_eq!(result.status, SolveStatus::ExactFixedPoint, "from {x0}");
            assert_eq!(result.candidate, Point::coord(2.0 / 9.0));
            assert_eq!(result.residual, 0.0);
            // the fixed point appears within two applications
            let reach = result
                .trace
                .iterates()
                .iter()
                .position(|p| *p == Point::coord(2.0 / 9.0))
                .unwrap();
            assert!(reach <= 2, "from {x0}: reached at {reach}");
        }
    }

    #[test]
    fn trace_replays_exactly() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.1), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let pts = result.trace.iterates();
        for w in pts.windows(2) {
            assert_eq!(map.apply(&w[0]).unwrap(), w[1]);
        }
        for (k, w) in pts.windows(2).enumerate() {
            assert_eq!(result.trace.steps()[k], space.distance(&w[0], &w[1]).unwrap());
        }
    }

    fn two_cycle() -> (ThetaMetricSpace, SelfMap) {
        let table = DistanceTable::from_pairs(2, &[(0, 1, 1.0)]).unwrap();
        let space =
            ThetaMetricSpace::finite(vec!["a", "b"], table, make_b_action("sum", &[]).unwrap()).unwrap();
        let map = SelfMap::finite_table(space.domain().clone(), vec![1, 0]).unwrap();
        (space, map)
    }

    #[test]
    fn a_two_cycle_exhausts_the_budget_and_is_not_regular() {
        let (space, map) = two_cycle();
        let result = picard_iterate(&space, &map, &Point::label(0), 1e-9, 40).unwrap();
        assert_eq!(result.status, SolveStatus::MaxIterations);
        assert_eq!(result.iterations, 40);
        let reg = asymptotic_regularity(&result.trace, 1e-9).unwrap();
        assert!(reg.monotone); // constant steps never increase
        assert!(!reg.regular);
        assert_eq!(reg.final_step, 1.0);
    }

    #[test]
    fn affine_trace_is_monotone_and_regular() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.0), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let reg = asymptotic_regularity(&result.trace, DEFAULT_TOL).unwrap();
        assert!(reg.monotone && reg.regular);
        // geometric decay at rate exactly 1/2 (dyadic iterates)
        let steps = result.trace.steps();
        for w in steps.windows(2) {
            assert_eq!(w[1], w[0] / 2.0);
        }
    }

    #[test]
    fn constant_map_trace_is_regular() {
        let space = unit_interval();
        let map = make_self_map("two-piece", &[0.3, 0.3, 0.5], space.domain()).unwrap();
        let result = picard_iterate(&space, &map, &Point::coord(0.9), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(result.status, SolveStatus::ExactFixedPoint);
        let reg = asymptotic_regularity(&result.trace, DEFAULT_TOL).unwrap();
        assert!(reg.monotone && reg.regular);
        assert_eq!(reg.final_step, 0.0);
    }

    #[test]
    fn regularity_needs_two_steps() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.5), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(matches!(asymptotic_regularity(&result.trace, DEFAULT_TOL), Err(Error::TraceTooShort(_))));
    }

    #[test]
    fn cauchy_estimates_match_the_double_loop_and_shrink() {
        let space = unit_interval();
        let map = affine(&space);
        let result = picard_iterate(&space, &map, &Point::coord(0.0), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let fast = cauchy_diagnostic(&result.trace, &space);
        let pts = result.trace.iterates();
        assert_eq!(fast.len(), pts.len());
        // quadratic reference
        for n in 0..pts.len() {
            let mut sup = 0.0_f64;
            for i in n..pts.len() {
                for j in n..pts.len() {
                    sup = sup.max(space.distance(&pts[i], &pts[j]).unwrap());
                }
            }
            assert_eq!(fast[n].to_bits(), sup.to_bits(), "mismatch at n = {n}");
        }
        for w in fast.windows(2) {
            assert!(w[1] <= w[0]);
        }
        // monotone iterates make the first estimate span start to limit
        assert!((fast[0] - 0.5).abs() <= 2e-9);
        // near the tail everything sits within twice the tolerance
        let settled = result.trace.steps().iter().position(|&d| d <= DEFAULT_TOL).unwrap();
        assert!(fast[settled] <= 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn cauchy_estimates_on_a_finite_trace() {
        let (space, map) = two_cycle();
        let result = picard_iterate(&space, &map, &Point::label(0), 1e-9, 9).unwrap();
        let fast = cauchy_diagnostic(&result.trace, &space);
        assert!(fast.iter().take(fast.len() - 1).all(|&c| c == 1.0));
        assert_eq!(*fast.last().unwrap(), 0.0);
        // constant trace collapses to zero everywhere
        let constant = PicardTrace { iterates: vec![Point::label(1); 5], steps: vec![0.0; 4] };
        assert!(cauchy_diagnostic(&constant, &space).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn uniqueness_probe_on_the_bundled_maps() {
        let space = unit_interval();
        let reciprocal = make_self_map("reciprocal", &[], space.domain()).unwrap();
        let starts = [Point::coord(0.0), Point::coord(0.5), Point::coord(1.0)];
        let report = uniqueness_probe(&space, &reciprocal, &starts, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(report.all_converged && report.unique);

        let sevenths = make_self_map("two-piece", &[1.0 / 7.0, 2.0 / 7.0, 0.5], space.domain()).unwrap();
        let grid: Vec<Point> = (0..=10).map(|i| Point::coord(i as f64 / 10.0)).collect();
        let report = uniqueness_probe(&space, &sevenths, &grid, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(report.unique);
        // both branches send 1/7 to itself, so every limit is exactly 1/7
        assert!(report.limits.iter().all(|p| *p == Point::coord(1.0 / 7.0)));
        assert_eq!(report.max_pairwise, 0.0);
    }

    #[test]
    fn identity_map_fails_the_uniqueness_probe() {
        let space = unit_interval();
        let id = make_self_map("identity", &[], space.domain()).unwrap();
        let starts = [Point::coord(0.0), Point::coord(1.0)];
        let report = uniqueness_probe(&space, &id, &starts, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(report.all_converged);
        assert_eq!(report.max_pairwise, 1.0);
        assert!(!report.unique);
    }

    #[test]
    fn probe_needs_two_starts() {
        let space = unit_interval();
        let id = make_self_map("identity", &[], space.domain()).unwrap();
        assert!(matches!(
            uniqueness_probe(&space, &id, &[Point::coord(0.0)], DEFAULT_TOL, DEFAULT_MAX_ITER),
            Err(Error::NotEnoughStarts(1))
        ));
    }

    #[test]
    fn solver_validates_its_inputs() {
        let space = unit_interval();
        let map = affine(&space);
        assert!(picard_iterate(&space, &map, &Point::coord(2.0), 1e-9, 10).is_err());
        assert!(picard_iterate(&space, &map, &Point::coord(0.0), 0.0, 10).is_err());
        assert!(picard_iterate(&space, &map, &Point::coord(0.0), 1e-9, 0).is_err());
        let other = PointDomain::interval(0.0, 2.0).unwrap();
        let foreign = make_self_map("identity", &[], &other).unwrap();
        assert!(picard_iterate(&space, &foreign, &Point::coord(0.0), 1e-9, 10).is_err());
    }
}
