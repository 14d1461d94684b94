//! Point domains, B-actions and θ-metric spaces.
//!
//! A θ-metric space replaces the `+` of the ordinary triangle inequality by a
//! B-action θ: the axiom reads `d(x,y) ≤ θ(d(x,z), d(z,y))`. Domains are
//! either finite label sets with an explicit symmetric distance table or 1-D
//! real intervals with the Euclidean distance `|x − y|`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack for non-strict real comparisons `a ≤ b` in axiom and margin checks.
pub const EPS_TOL: f64 = 1e-9;
/// Strict inequalities `a < b` are tested as `a ≤ b − EPS_STRICT`.
pub const EPS_STRICT: f64 = 1e-12;
/// Symmetry of catalog actions and distances is checked exactly.
pub const EPS_SYM: f64 = 0.0;

/// The carrier set of a θ-metric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PointDomain {
    /// A finite set of distinct labels.
    Finite { labels: Vec<String> },
    /// A closed real interval `[lo, hi]` with `lo < hi`.
    Interval { lo: f64, hi: f64 },
}

impl PointDomain {
    pub fn finite<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidDomain("finite domain needs at least one label".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidDomain("empty label".into()));
            }
            if labels[..i].contains(a) {
                return Err(Error::InvalidDomain(format!("duplicate label `{a}`")));
            }
        }
        Ok(PointDomain::Finite { labels })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidDomain(format!("interval bounds must be finite, got [{lo}, {hi}]")));
        }
        if lo >= hi {
            return Err(Error::InvalidDomain(format!("interval needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(PointDomain::Interval { lo, hi })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (PointDomain::Finite { labels }, Point::Label(i)) => *i < labels.len(),
            (PointDomain::Interval { lo, hi }, Point::Coord(c)) => *lo <= *c && *c <= *hi,
            _ => false,
        }
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        match self {
            PointDomain::Finite { labels } => labels.iter().position(|l| l == label),
            PointDomain::Interval { .. } => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            PointDomain::Finite { labels } => Some(labels),
            PointDomain::Interval { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PointDomain::Finite { .. })
    }

    /// Deterministic sample of domain points: all labels for finite domains,
    /// `n` equispaced coordinates (plus `extra` coordinates, deduplicated and
    /// sorted) for intervals.
    pub fn sample_points(&self, n: usize, extra: &[f64]) -> Vec<Point> {
        match self {
            PointDomain::Finite { labels } => (0..labels.len()).map(Point::Label).collect(),
            PointDomain::Interval { lo, hi } => {
                let n = n.max(2);
                let mut coords: Vec<f64> = (0..n)
                    .map(|i| lo + (hi - lo) * (i as f64) / ((n - 1) as f64))
                    .collect();
                for &e in extra {
                    if *lo <= e && e <= *hi {
                        coords.push(e);
                    }
                }
                coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
                coords.dedup();
                coords.into_iter().map(Point::Coord).collect()
            }
        }
    }
}

impl fmt::Display for PointDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointDomain::Finite { labels } => write!(f, "finite{{{}}}", labels.join(",")),
            PointDomain::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// An element of a domain: a label index for finite domains, a coordinate for
/// interval domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Label(usize),
    Coord(f64),
}

impl Point {
    pub fn coord(c: f64) -> Self {
        Point::Coord(c)
    }

    pub fn label(i: usize) -> Self {
        Point::Label(i)
    }

    pub fn as_coord(&self) -> Option<f64> {
        match self {
            Point::Coord(c) => Some(*c),
            Point::Label(_) => None,
        }
    }

    pub fn as_label(&self) -> Option<usize> {
        match self {
            Point::Label(i) => Some(*i),
            Point::Coord(_) => None,
        }
    }
}

type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A continuous symmetric binary operation on `[0,∞)` standing in for `+` in
/// the triangle inequality. Catalog members are built by
/// [`crate::catalog::make_b_action`]; arbitrary operations (e.g. negative
/// controls for the axiom checks) can be wrapped with [`BAction::from_fn`].
#[derive(Clone)]
pub struct BAction {
    name: String,
    params: Vec<f64>,
    eval: BinaryFn,
}

impl BAction {
    pub fn from_fn<F>(name: impl Into<String>, params: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        BAction { name: name.into(), params, eval: Arc::new(f) }
    }

    /// Evaluate θ(s, t). Arguments must be finite and nonnegative.
    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        if !(s.is_finite() && t.is_finite() && s >= 0.0 && t >= 0.0) {
            return Err(Error::NegativeInput { s, t });
        }
        Ok((self.eval)(s, t))
    }

    /// Evaluation without the argument check, for internal sweeps over
    /// nonnegative grids and distances.
    pub(crate) fn eval_raw(&self, s: f64, t: f64) -> f64 {
        (self.eval)(s, t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

impl fmt::Debug for BAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BAction")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

/// Full symmetric distance table for a finite domain. Zero diagonal and
/// positive off-diagonal entries are construction invariants, which settles
/// θ1/θ2 for table-backed spaces up front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTable {
    n: usize,
    cells: Vec<f64>,
}

impl DistanceTable {
    /// Build from unordered off-diagonal entries `(i, j, d)`. Every pair must
    /// be covered exactly once (either orientation); repeated entries must
    /// agree.
    pub fn from_pairs(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("table needs at least one point".into()));
        }
        let mut cells = vec![0.0; n * n];
        let mut set = vec![false; n * n];
        for &(i, j, d) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidTable(format!("index ({i}, {j}) out of range for {n} points")));
            }
            if i == j {
                return Err(Error::InvalidTable(format!("diagonal entry ({i}, {i}) is fixed at zero")));
            }
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::InvalidTable(format!("distance for ({i}, {j}) must be finite and positive, got {d}")));
            }
            if set[i * n + j] && cells[i * n + j] != d {
                return Err(Error::InvalidTable(format!(
                    "conflicting entries for ({i}, {j}): {} vs {d}",
                    cells[i * n + j]
                )));
            }
            cells[i * n + j] = d;
            cells[j * n + i] = d;
            set[i * n + j] = true;
            set[j * n + i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !set[i * n + j] {
                    return Err(Error::InvalidTable(format!("missing entry for pair ({i}, {j})")));
                }
            }
        }
        Ok(DistanceTable { n, cells })
    }

    /// Build from a full matrix, validating symmetry, zero diagonal and
    /// positive off-diagonal entries.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTable("matrix must be square and non-empty".into()));
        }
        let mut cells = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = rows[i][j];
                if i == j {
                    if d != 0.0 {
                        return Err(Error::InvalidTable(format!("diagonal entry ({i}, {i}) must be zero, got {d}")));
                    }
                } else {
                    if !d.is_finite() || d <= 0.0 {
                        return Err(Error::InvalidTable(format!("off-diagonal entry ({i}, {j}) must be positive, got {d}")));
                    }
                    if rows[j][i] != d {
                        return Err(Error::InvalidTable(format!("asymmetric entries at ({i}, {j})")));
                    }
                }
                cells[i * n + j] = d;
            }
        }
        Ok(DistanceTable { n, cells })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.n + j]
    }
}

/// Distance evaluation strategy paired with a domain kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DistanceFn {
    /// `|x − y|` on interval domains.
    Euclid,
    /// Table lookup on finite domains.
    Table(DistanceTable),
}

/// A domain, a distance and the B-action its triangle inequality refers to.
#[derive(Debug, Clone)]
pub struct ThetaMetricSpace {
    domain: PointDomain,
    dist: DistanceFn,
    action: BAction,
}

impl ThetaMetricSpace {
    pub fn new(domain: PointDomain, dist: DistanceFn, action: BAction) -> Result<Self> {
        match (&domain, &dist) {
            (PointDomain::Interval { .. }, DistanceFn::Euclid) => {}
            (PointDomain::Finite { labels }, DistanceFn::Table(t)) => {
                if t.len() != labels.len() {
                    return Err(Error::InvalidTable(format!(
                        "table covers {} points but the domain has {} labels",
                        t.len(),
                        labels.len()
                    )));
                }
            }
            (PointDomain::Finite { .. }, DistanceFn::Euclid) => {
                return Err(Error::InvalidDomain("finite domains need a distance table".into()));
            }
            (PointDomain::Interval { .. }, DistanceFn::Table(_)) => {
                return Err(Error::InvalidDomain("interval domains use the closed-form distance".into()));
            }
        }
        Ok(ThetaMetricSpace { domain, dist, action })
    }

    /// Interval domain with the Euclidean distance.
    pub fn interval(lo: f64, hi: f64, action: BAction) -> Result<Self> {
        Self::new(PointDomain::interval(lo, hi)?, DistanceFn::Euclid, action)
    }

    /// Finite domain backed by a distance table.
    pub fn finite<S: Into<String>>(labels: Vec<S>, table: DistanceTable, action: BAction) -> Result<Self> {
        Self::new(PointDomain::finite(labels)?, DistanceFn::Table(table), action)
    }

    pub fn domain(&self) -> &PointDomain {
        &self.domain
    }

    pub fn action(&self) -> &BAction {
        &self.action
    }

    pub fn distance_fn(&self) -> &DistanceFn {
        &self.dist
    }

    pub(crate) fn require_member(&self, p: &Point) -> Result<()> {
        if self.domain.contains(p) {
            Ok(())
        } else {
            Err(Error::DomainMismatch { point: self.format_point(p), domain: self.domain.to_string() })
        }
    }

    /// d_θ(x, y). Errors if either point does not belong to the domain.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.require_member(x)?;
        self.require_member(y)?;
        Ok(self.distance_raw(x, y))
    }

    /// Distance for points already known to belong to the domain.
    pub(crate) fn distance_raw(&self, x: &Point, y: &Point) -> f64 {
        match (&self.dist, x, y) {
            (DistanceFn::Euclid, Point::Coord(a), Point::Coord(b)) => (a - b).abs(),
            (DistanceFn::Table(t), Point::Label(i), Point::Label(j)) => t.get(*i, *j),
            _ => panic!("point kind does not match the space's domain"),
        }
    }

    /// Render a point for reports and error messages.
    pub fn format_point(&self, p: &Point) -> String {
        match (p, &self.domain) {
            (Point::Label(i), PointDomain::Finite { labels }) if *i < labels.len() => labels[*i].clone(),
            (Point::Label(i), _) => format!("#{i}"),
            (Point::Coord(c), _) => format!("{c}"),
        }
    }

    /// Domain sample used by margin sweeps: `n` grid points plus injected
    /// coordinates for intervals, every label for finite domains.
    pub fn sample_points(&self, n: usize, extra: &[f64]) -> Vec<Point> {
        self.domain.sample_points(n, extra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid_action() -> BAction {
        BAction::from_fn("euclid", vec![], |s, t| (s * s + t * t).sqrt())
    }

    fn triangle_space() -> ThetaMetricSpace {
        let table = DistanceTable::from_pairs(3, &[(0, 1, 5.0), (1, 2, 12.0), (0, 2, 13.0)]).unwrap();
        ThetaMetricSpace::finite(vec!["a", "b", "c"], table, euclid_action()).unwrap()
    }

    #[test]
    fn finite_domain_rejects_duplicates_and_empty() {
        assert!(PointDomain::finite(vec!["a", "a"]).is_err());
        assert!(PointDomain::finite(Vec::<String>::new()).is_err());
        assert!(PointDomain::finite(vec!["a", "b"]).is_ok());
    }

    #[test]
    fn interval_domain_validates_bounds() {
        assert!(PointDomain::interval(0.0, 1.0).is_ok());
        assert!(PointDomain::interval(1.0, 1.0).is_err());
        assert!(PointDomain::interval(2.0, 1.0).is_err());
        assert!(PointDomain::interval(0.0, f64::INFINITY).is_err());
        assert!(PointDomain::interval(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn table_lookup_matches_the_three_point_example() {
        let space = triangle_space();
        let (a, b, c) = (Point::label(0), Point::label(1), Point::label(2));
        assert_eq!(space.distance(&a, &b).unwrap(), 5.0);
        assert_eq!(space.distance(&b, &c).unwrap(), 12.0);
        assert_eq!(space.distance(&a, &c).unwrap(), 13.0);
        assert_eq!(space.distance(&b, &a).unwrap(), 5.0);
        assert_eq!(space.distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn interval_distance_is_absolute_difference() {
        let space = ThetaMetricSpace::interval(0.0, 1.0, euclid_action()).unwrap();
        let d = space.distance(&Point::coord(0.25), &Point::coord(0.75)).unwrap();
        assert_eq!(d, 0.5);
        assert_eq!(space.distance(&Point::coord(0.3), &Point::coord(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn distance_rejects_points_outside_the_domain() {
        let space = ThetaMetricSpace::interval(0.0, 1.0, euclid_action()).unwrap();
        let err = space.distance(&Point::coord(1.5), &Point::coord(0.5)).unwrap_err();
        assert!(matches!(err, Error::DomainMismatch { .. }));
        assert!(space.distance(&Point::label(0), &Point::coord(0.5)).is_err());

        let finite = triangle_space();
        assert!(finite.distance(&Point::label(3), &Point::label(0)).is_err());
        assert!(finite.distance(&Point::coord(0.0), &Point::label(0)).is_err());
    }

    #[test]
    fn table_construction_catches_bad_input() {
        // missing pair
        assert!(DistanceTable::from_pairs(3, &[(0, 1, 5.0), (1, 2, 12.0)]).is_err());
        // conflicting duplicate
        assert!(DistanceTable::from_pairs(2, &[(0, 1, 5.0), (1, 0, 6.0)]).is_err());
        // nonpositive entry
        assert!(DistanceTable::from_pairs(2, &[(0, 1, 0.0)]).is_err());
        // diagonal entry
        assert!(DistanceTable::from_pairs(2, &[(0, 0, 1.0), (0, 1, 1.0)]).is_err());
        // agreeing duplicate is fine
        assert!(DistanceTable::from_pairs(2, &[(0, 1, 5.0), (1, 0, 5.0)]).is_ok());

        assert!(DistanceTable::from_matrix(&[vec![0.0, 5.0], vec![4.0, 0.0]]).is_err());
        assert!(DistanceTable::from_matrix(&[vec![1.0, 5.0], vec![5.0, 0.0]]).is_err());
        assert!(DistanceTable::from_matrix(&[vec![0.0, 5.0], vec![5.0, 0.0]]).is_ok());
    }

    #[test]
    fn action_eval_checks_its_arguments() {
        let act = euclid_action();
        assert_eq!(act.eval(5.0, 12.0).unwrap(), 13.0);
        assert_eq!(act.eval(0.0, 0.0).unwrap(), 0.0);
        assert!(matches!(act.eval(-1.0, 0.0), Err(Error::NegativeInput { .. })));
        assert!(act.eval(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn space_rejects_mismatched_domain_and_distance() {
        let table = DistanceTable::from_pairs(2, &[(0, 1, 1.0)]).unwrap();
        assert!(ThetaMetricSpace::new(PointDomain::interval(0.0, 1.0).unwrap(), DistanceFn::Table(table.clone()), euclid_action()).is_err());
        assert!(ThetaMetricSpace::new(PointDomain::finite(vec!["a", "b"]).unwrap(), DistanceFn::Euclid, euclid_action()).is_err());
        let table3 = DistanceTable::from_pairs(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(ThetaMetricSpace::new(PointDomain::finite(vec!["a", "b"]).unwrap(), DistanceFn::Table(table3), euclid_action()).is_err());
    }

    #[test]
    fn distance_is_deterministic() {
        let space = ThetaMetricSpace::interval(0.0, 1.0, euclid_action()).unwrap();
        let x = Point::coord(0.123456789);
        let y = Point::coord(0.987654321);
        let d1 = space.distance(&x, &y).unwrap();
        let d2 = space.distance(&x, &y).unwrap();
        assert_eq!(d1.to_bits(), d2.to_bits());
    }

    #[test]
    fn interval_sampling_injects_extras_and_dedups() {
        let domain = PointDomain::interval(0.0, 1.0).unwrap();
        let pts = domain.sample_points(11, &[0.5, 0.55, 2.0]);
        // 0.5 is already on the grid, 2.0 is out of range
        assert_eq!(pts.len(), 12);
        assert!(pts.contains(&Point::coord(0.55)));
        assert!(!pts.contains(&Point::coord(2.0)));
    }

    #[test]
    fn shared_types_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<ThetaMetricSpace>();
        check::<BAction>();
        check::<PointDomain>();
        check::<Point>();
    }
}
