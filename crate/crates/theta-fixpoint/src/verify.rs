//! Finite-sample verification of the B-action axioms B1–B4, the θ-metric
//! axioms θ1–θ3 and the simulation-function axioms ζ1–ζ3.
//!
//! Axioms quantified over all reals can only be refuted by sampling, so the
//! positive verdict is `holds-on-samples`, never "holds". Violations are
//! definitive and carry a witness that re-evaluates to the violation under
//! the module tolerances. Reports are deterministic functions of the checked
//! object and the plan: sweeps run in canonical sample order and witnesses
//! are picked by worst margin with earliest-sample tie-breaking.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::SimulationFunction;
use crate::error::{Error, Result};
use crate::sample::SamplePlan;
use crate::space::{BAction, Point, ThetaMetricSpace, EPS_STRICT, EPS_SYM, EPS_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomId {
    B1,
    B2,
    B3,
    B4,
    Theta1,
    Theta2,
    Theta3,
    Zeta1,
    Zeta2,
    Zeta3,
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomId::B1 => "B1",
            AxiomId::B2 => "B2",
            AxiomId::B3 => "B3",
            AxiomId::B4 => "B4",
            AxiomId::Theta1 => "theta1",
            AxiomId::Theta2 => "theta2",
            AxiomId::Theta3 => "theta3",
            AxiomId::Zeta1 => "zeta1",
            AxiomId::Zeta2 => "zeta2",
            AxiomId::Zeta3 => "zeta3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSamples,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Point(Point),
    Scalar(f64),
}

/// Concrete inputs demonstrating a violation, with the offending value and
/// the bound it had to meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub bindings: Vec<(String, WitnessValue)>,
    pub observed: f64,
    pub bound: f64,
}

impl Witness {
    fn scalars(pairs: &[(&str, f64)], observed: f64, bound: f64) -> Self {
        Witness {
            bindings: pairs.iter().map(|&(n, v)| (n.to_string(), WitnessValue::Scalar(v))).collect(),
            observed,
            bound,
        }
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.bindings.iter().find_map(|(n, v)| match v {
            WitnessValue::Scalar(s) if n == name => Some(*s),
            _ => None,
        })
    }

    pub fn point(&self, name: &str) -> Option<Point> {
        self.bindings.iter().find_map(|(n, v)| match v {
            WitnessValue::Point(p) if n == name => Some(*p),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: AxiomId,
    pub verdict: Verdict,
    pub samples_checked: usize,
    /// Smallest slack observed across the sweep; the margin convention is
    /// per-axiom (see the check functions), larger is always safer.
    pub worst_margin: f64,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnSamples
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(AxiomCheck::holds)
    }

    pub fn get(&self, axiom: AxiomId) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .unwrap_or_else(|| panic!("report has no {axiom} entry"))
    }

    pub fn violated(&self) -> Vec<AxiomId> {
        self.checks.iter().filter(|c| !c.holds()).map(|c| c.axiom).collect()
    }
}

/// Accumulates one axiom's sweep: worst margin over every sample, plus the
/// most-violating witness (earliest sample wins ties).
struct AxiomSweep {
    worst: f64,
    worst_violation: f64,
    witness: Option<Witness>,
    violated: bool,
    count: usize,
}

impl AxiomSweep {
    fn new() -> Self {
        AxiomSweep { worst: f64::INFINITY, worst_violation: f64::INFINITY, witness: None, violated: false, count: 0 }
    }

    fn observe(&mut self, margin: f64, violation: bool, witness: impl FnOnce() -> Witness) {
        self.count += 1;
        if margin < self.worst {
            self.worst = margin;
        }
        if violation {
            if !self.violated || margin < self.worst_violation {
                self.worst_violation = margin;
                self.witness = Some(witness());
            }
            self.violated = true;
        }
    }

    fn finish(self, axiom: AxiomId) -> AxiomCheck {
        AxiomCheck {
            axiom,
            verdict: if self.violated { Verdict::Violated } else { Verdict::HoldsOnSamples },
            samples_checked: self.count,
            worst_margin: if self.count == 0 { 0.0 } else { self.worst },
            witness: self.witness,
        }
    }
}

enum RootSearch {
    /// A `t` with θ(t, s) ≈ r was located; `residual` is |θ(t, s) − r|.
    Found { residual: f64 },
    /// No near-zero scan value and no sign change: the equation has no
    /// solution on `[0, r]` as far as the scan can tell.
    NoBracket { closest: f64 },
}

/// Scan `t` over `[0, r]` for a sign change of θ(t, s) − r, refining by
/// bisection; continuity is assumed, monotonicity is not. The smallest
/// near-zero or bracketing `t` wins.
fn locate_b3_root(action: &BAction, s: f64, r: f64, scan_points: usize) -> RootSearch {
    let f = |t: f64| action.eval_raw(t, s) - r;
    let mut prev_t = 0.0;
    let mut prev_f = f(0.0);
    if prev_f.abs() <= EPS_TOL {
        return RootSearch::Found { residual: prev_f.abs() };
    }
    let mut closest = prev_f;
    for k in 1..scan_points {
        let t = r * k as f64 / (scan_points - 1) as f64;
        let fk = f(t);
        if fk.abs() < closest.abs() {
            closest = fk;
        }
        if fk.abs() <= EPS_TOL {
            return RootSearch::Found { residual: fk.abs() };
        }
        if prev_f * fk < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_t, t, prev_f);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.abs() <= EPS_TOL || (hi - lo) <= EPS_STRICT * r.max(1.0) {
                    return RootSearch::Found { residual: fm.abs() };
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let mid = 0.5 * (lo + hi);
            return RootSearch::Found { residual: f(mid).abs() };
        }
        prev_t = t;
        prev_f = fk;
    }
    RootSearch::NoBracket { closest: closest + r }
}

fn even_subsample(values: Vec<f64>, cap: usize) -> Vec<f64> {
    if values.len() <= cap {
        return values;
    }
    (0..cap)
        .map(|i| values[i * (values.len() - 1) / (cap - 1)])
        .collect()
}

/// Check B1–B4 for a B-action over the plan's samples.
///
/// B1 is checked exactly at the origin and as exact symmetry over all sample
/// pairs. B2 is the monotonicity condition — componentwise dominance
/// (s<u ∧ t≤v) or (s≤u ∧ t<v) must force θ(s,t) < θ(u,v) — refuted over
/// structured and seeded random quadruples. B3 locates, for sampled image
/// values r and a grid of s in [0,r], some t in [0,r] with θ(t,s)=r by
/// scan-and-bisect; failure to bracket is a violation. B4 requires
/// θ(s,0) ≤ s on all grid s > 0.
pub fn check_b_action(action: &BAction, plan: &SamplePlan) -> AxiomReport {
    plan.validate().expect("valid sample plan");
    let axis = plan.axis_samples();
    let grid = plan.grid_samples();
    let coarse = plan.coarse_grid();

    // B1: θ(0,0) = 0 and symmetry, both exact.
    let mut b1 = AxiomSweep::new();
    let origin = action.eval_raw(0.0, 0.0);
    b1.observe(-origin.abs(), origin.abs() > EPS_SYM, || {
        Witness::scalars(&[("s", 0.0), ("t", 0.0)], origin, 0.0)
    });
    for i in 0..axis.len() {
        for j in i..axis.len() {
            let (s, t) = (axis[i], axis[j]);
            let dev = (action.eval_raw(s, t) - action.eval_raw(t, s)).abs();
            b1.observe(-dev, dev > EPS_SYM, || Witness::scalars(&[("s", s), ("t", t)], dev, 0.0));
        }
    }

    // B2: refutation over quadruples. Structured quadruples sweep the coarse
    // grid with one shared coordinate (boundary cases included); random
    // quadruples draw from the full sample set.
    let mut b2 = AxiomSweep::new();
    let consider = |s: f64, t: f64, u: f64, v: f64, sweep: &mut AxiomSweep| {
        let premise = (s < u && t <= v) || (s <= u && t < v);
        if !premise {
            return;
        }
        let margin = action.eval_raw(u, v) - action.eval_raw(s, t);
        sweep.observe(margin, margin < EPS_STRICT, || {
            Witness::scalars(&[("s", s), ("t", t), ("u", u), ("v", v)], margin, EPS_STRICT)
        });
    };
    for &s in &coarse {
        for &t in &coarse {
            for &v in &coarse {
                if t < v {
                    consider(s, t, s, v, &mut b2);
                }
            }
        }
    }
    let mut rng = plan.rng(1);
    for _ in 0..plan.random_count * 10 {
        let mut pick = || axis[rng.random_range(0..axis.len())];
        let (s, t, u, v) = (pick(), pick(), pick(), pick());
        consider(s, t, u, v, &mut b2);
    }

    // B3: solvability of θ(t, s) = r.
    let mut b3 = AxiomSweep::new();
    let mut image: Vec<f64> = coarse
        .iter()
        .flat_map(|&a| coarse.iter().map(move |&b| action.eval_raw(a, b)))
        .filter(|r| r.is_finite() && *r > EPS_TOL)
        .collect();
    image.sort_by(|a, b| a.partial_cmp(b).unwrap());
    image.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    let image = even_subsample(image, 48);
    let s_steps = 11;
    for &r in &image {
        for si in 0..s_steps {
            let s = r * si as f64 / (s_steps - 1) as f64;
            match locate_b3_root(action, s, r, 101) {
                RootSearch::Found { residual } => {
                    b3.observe(-residual, false, || unreachable!());
                }
                RootSearch::NoBracket { closest } => {
                    let gap = (closest - r).abs();
                    b3.observe(-gap, true, || Witness::scalars(&[("r", r), ("s", s)], closest, r));
                }
            }
        }
    }

    // B4: θ(s, 0) ≤ s for grid s > 0.
    let mut b4 = AxiomSweep::new();
    for &s in grid.iter().filter(|&&s| s > 0.0) {
        let v = action.eval_raw(s, 0.0);
        let margin = s - v;
        b4.observe(margin, margin < -EPS_TOL, || Witness::scalars(&[("s", s)], v, s));
    }

    AxiomReport {
        checks: vec![
            b1.finish(AxiomId::B1),
            b2.finish(AxiomId::B2),
            b3.finish(AxiomId::B3),
            b4.finish(AxiomId::B4),
        ],
    }
}

fn point_witness(space: &ThetaMetricSpace, pts: &[(&str, Point)], observed: f64, bound: f64) -> Witness {
    let _ = space;
    Witness {
        bindings: pts.iter().map(|&(n, p)| (n.to_string(), WitnessValue::Point(p))).collect(),
        observed,
        bound,
    }
}

/// Check θ1–θ3. Finite domains are enumerated exhaustively (the plan only
/// contributes to interval sampling); interval domains use the plan's point
/// grid for pairs and a decimated grid plus seeded random coordinates for
/// triples.
pub fn check_theta_metric(space: &ThetaMetricSpace, plan: &SamplePlan) -> AxiomReport {
    plan.validate().expect("valid sample plan");
    let finite = space.domain().is_finite();
    let pts = if finite {
        space.sample_points(0, &[])
    } else {
        space.sample_points(plan.interval_points, &[])
    };

    // θ1: zero exactly on the diagonal, strictly positive off it.
    let mut t1 = AxiomSweep::new();
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            let d = space.distance_raw(x, y);
            if i == j {
                t1.observe(-d.abs(), d.abs() > EPS_TOL, || {
                    point_witness(space, &[("x", *x), ("y", *y)], d, 0.0)
                });
            } else {
                t1.observe(d, d <= EPS_STRICT, || {
                    point_witness(space, &[("x", *x), ("y", *y)], d, EPS_STRICT)
                });
            }
        }
    }

    // θ2: exact symmetry over unordered pairs.
    let mut t2 = AxiomSweep::new();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let dev = (space.distance_raw(&pts[i], &pts[j]) - space.distance_raw(&pts[j], &pts[i])).abs();
            t2.observe(-dev, dev > EPS_SYM, || {
                point_witness(space, &[("x", pts[i]), ("y", pts[j])], dev, 0.0)
            });
        }
    }

    // θ3: d(x,y) ≤ θ(d(x,z), d(z,y)) over triples.
    let mut t3 = AxiomSweep::new();
    let triple = |x: &Point, y: &Point, z: &Point, sweep: &mut AxiomSweep| {
        let dxy = space.distance_raw(x, y);
        let via = space.action().eval_raw(space.distance_raw(x, z), space.distance_raw(z, y));
        let margin = via - dxy;
        sweep.observe(margin, margin < -EPS_TOL, || {
            point_witness(space, &[("x", *x), ("y", *y), ("z", *z)], dxy, via)
        });
    };
    if finite {
        for x in &pts {
            for y in &pts {
                for z in &pts {
                    triple(x, y, z, &mut t3);
                }
            }
        }
    } else {
        let stride = pts.len().div_ceil(26).max(1);
        let axis: Vec<Point> = pts.iter().copied().step_by(stride).collect();
        for x in &axis {
            for y in &axis {
                for z in &axis {
                    triple(x, y, z, &mut t3);
                }
            }
        }
        if let crate::space::PointDomain::Interval { lo, hi } = *space.domain() {
            let mut rng = plan.rng(2);
            for _ in 0..plan.random_count {
                let mut draw = || Point::Coord(lo + (hi - lo) * rng.random_range(0.0..=1.0));
                let (x, y, z) = (draw(), draw(), draw());
                triple(&x, &y, &z, &mut t3);
            }
        }
    }

    AxiomReport {
        checks: vec![
            t1.finish(AxiomId::Theta1),
            t2.finish(AxiomId::Theta2),
            t3.finish(AxiomId::Theta3),
        ],
    }
}

/// Equal-limit sequence families for the ζ3 check: t_n = L(1 + α/n),
/// s_n = L(1 + β/n) with α, β drawn from `coefficients`, evaluated on the
/// tail n ∈ [tail_start, tail_start + tail_len].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub limits: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub tail_start: usize,
    pub tail_len: usize,
}

impl Default for SequencePlan {
    fn default() -> Self {
        SequencePlan {
            limits: vec![0.5, 1.0, 5.0],
            coefficients: vec![-1.0, 0.0, 1.0],
            tail_start: 100,
            tail_len: 100,
        }
    }
}

impl SequencePlan {
    pub fn validate(&self) -> Result<()> {
        if self.limits.is_empty() || self.limits.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::InvalidPlan("sequence limits must be positive reals".into()));
        }
        if self.tail_start < 2 || self.tail_len == 0 {
            return Err(Error::InvalidPlan("sequence tail must start at n ≥ 2 and be non-empty".into()));
        }
        if self.coefficients.is_empty()
            || self.coefficients.iter().any(|c| !c.is_finite() || c.abs() >= self.tail_start as f64)
        {
            return Err(Error::InvalidPlan("approach coefficients must satisfy |c| < tail start".into()));
        }
        Ok(())
    }
}

/// Suffix maxima of ζ(t_n, s_n) along one approach family: entry k is the
/// maximum over n ∈ [tail_start + k, tail_start + tail_len]. Non-increasing
/// by construction, mirroring the nested-tail suprema the limsup argument
/// manipulates.
pub fn zeta3_tail_maxima(
    zeta: &SimulationFunction,
    limit: f64,
    alpha: f64,
    beta: f64,
    seq: &SequencePlan,
) -> Vec<f64> {
    let vals: Vec<f64> = (seq.tail_start..=seq.tail_start + seq.tail_len)
        .map(|n| {
            let n = n as f64;
            zeta.eval(limit * (1.0 + alpha / n), limit * (1.0 + beta / n))
        })
        .collect();
    let mut suffix = vals;
    for k in (0..suffix.len().saturating_sub(1)).rev() {
        suffix[k] = suffix[k].max(suffix[k + 1]);
    }
    suffix
}

/// Check ζ1–ζ3 for a simulation function.
///
/// ζ1 is exact at the origin. ζ2 requires ζ(t,s) ≤ s − t − εstrict on all
/// grid pairs s, t > 0. ζ3 is approximated on the plan's equal-limit
/// families: the tail maximum of ζ(t_n, s_n) must stay ≤ −εstrict.
pub fn check_simulation(zeta: &SimulationFunction, plan: &SamplePlan, seq: &SequencePlan) -> AxiomReport {
    plan.validate().expect("valid sample plan");
    seq.validate().expect("valid sequence plan");
    let grid = plan.grid_samples();

    let mut z1 = AxiomSweep::new();
    let origin = zeta.eval(0.0, 0.0);
    z1.observe(-origin.abs(), origin != 0.0, || {
        Witness::scalars(&[("t", 0.0), ("s", 0.0)], origin, 0.0)
    });

    let mut z2 = AxiomSweep::new();
    for &s in grid.iter().filter(|&&s| s > 0.0) {
        for &t in grid.iter().filter(|&&t| t > 0.0) {
            let v = zeta.eval(t, s);
            let margin = s - t - v;
            z2.observe(margin, margin < EPS_STRICT, || {
                Witness::scalars(&[("t", t), ("s", s)], v, s - t - EPS_STRICT)
            });
        }
    }

    let mut z3 = AxiomSweep::new();
    for &limit in &seq.limits {
        for &alpha in &seq.coefficients {
            for &beta in &seq.coefficients {
                let suffix = zeta3_tail_maxima(zeta, limit, alpha, beta, seq);
                let tail_max = suffix[0];
                // recover the witnessing n for reporting
                let argmax = (seq.tail_start..=seq.tail_start + seq.tail_len)
                    .map(|n| {
                        let nf = n as f64;
                        (n, zeta.eval(limit * (1.0 + alpha / nf), limit * (1.0 + beta / nf)))
                    })
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                z3.observe(-tail_max, tail_max > -EPS_STRICT, || {
                    let nf = argmax.0 as f64;
                    Witness::scalars(
                        &[
                            ("limit", limit),
                            ("alpha", alpha),
                            ("beta", beta),
                            ("n", nf),
                            ("t_n", limit * (1.0 + alpha / nf)),
                            ("s_n", limit * (1.0 + beta / nf)),
                        ],
                        argmax.1,
                        -EPS_STRICT,
                    )
                });
            }
        }
    }

    AxiomReport {
        checks: vec![
            z1.finish(AxiomId::Zeta1),
            z2.finish(AxiomId::Zeta2),
            z3.finish(AxiomId::Zeta3),
        ],
    }
}
