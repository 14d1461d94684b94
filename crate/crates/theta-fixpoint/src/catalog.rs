//! Closed-form catalogs of simulation functions, B-actions and self-maps.
//!
//! Every member is addressed by a kind identifier plus a real parameter list,
//! which is also the config-file contract of the CLI harness. Nothing here
//! parses user expressions; evaluation stays total and auditable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{BAction, Point, PointDomain};

type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type UnaryFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn param_err(kind: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { kind: kind.to_string(), reason: reason.into() }
}

fn expect_params(kind: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(param_err(kind, format!("expected {n} parameter(s), got {}", params.len())));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(param_err(kind, "parameters must be finite"));
    }
    Ok(())
}

/// The auxiliary function ζ(t, s) driving a contraction condition. The first
/// argument receives the image distance d(Tx, Ty), the second the comparison
/// quantity (d(x, y) or M(x, y)).
#[derive(Clone)]
pub struct SimulationFunction {
    name: String,
    params: Vec<f64>,
    eval: BinaryFn,
}

impl SimulationFunction {
    pub fn from_fn<F>(name: impl Into<String>, params: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        SimulationFunction { name: name.into(), params, eval: Arc::new(f) }
    }

    /// ζ(t, s).
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        (self.eval)(t, s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

impl fmt::Debug for SimulationFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimulationFunction")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

/// Unary helper `[0,∞) → [0,∞)` used by the η- and φ-flavoured simulation
/// functions. η-kinds satisfy η(t) < t for t > 0 and η(0) = 0; φ-kinds vanish
/// exactly at 0.
#[derive(Clone)]
pub struct AuxFunction {
    name: String,
    eval: UnaryFn,
}

impl AuxFunction {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for AuxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AuxFunction").field("name", &self.name).finish()
    }
}

/// Sub-catalog behind the `eta-*` and `phi-*` simulation kinds.
pub fn make_aux(kind: &str) -> Result<AuxFunction> {
    let eval: UnaryFn = match kind {
        "half" => Arc::new(|t: f64| t / 2.0),
        "ratio" => Arc::new(|t: f64| t / (1.0 + t)),
        "quad" => Arc::new(|t: f64| t * t / (1.0 + t)),
        _ => return Err(Error::UnknownKind { what: "aux function", kind: kind.to_string() }),
    };
    Ok(AuxFunction { name: kind.to_string(), eval })
}

/// Build a catalog simulation function.
///
/// Kinds: `linear` (λs − t, one parameter 0 ≤ λ < 1), `rational`
/// (s/(s+1) − t), `eta-half`/`eta-ratio` (η(s) − t) and `phi-half`/`phi-quad`
/// (s − φ(s) − t).
pub fn make_simulation(kind: &str, params: &[f64]) -> Result<SimulationFunction> {
    match kind {
        "linear" => {
            expect_params(kind, params, 1)?;
            let lambda = params[0];
            if !(0.0..1.0).contains(&lambda) {
                return Err(param_err(kind, format!("lambda must lie in [0, 1), got {lambda}")));
            }
            Ok(SimulationFunction::from_fn("linear", vec![lambda], move |t, s| lambda * s - t))
        }
        "rational" => {
            expect_params(kind, params, 0)?;
            Ok(SimulationFunction::from_fn("rational", vec![], |t, s| s / (s + 1.0) - t))
        }
        "eta-half" | "eta-ratio" => {
            expect_params(kind, params, 0)?;
            let aux = make_aux(kind.trim_start_matches("eta-"))?;
            Ok(SimulationFunction::from_fn(kind, vec![], move |t, s| aux.eval(s) - t))
        }
        "phi-half" | "phi-quad" => {
            expect_params(kind, params, 0)?;
            let aux = make_aux(kind.trim_start_matches("phi-"))?;
            Ok(SimulationFunction::from_fn(kind, vec![], move |t, s| s - aux.eval(s) - t))
        }
        _ => Err(Error::UnknownKind { what: "simulation function", kind: kind.to_string() }),
    }
}

/// Build a catalog B-action. Kinds: `sum`, `product-sum` (s+t+st), `euclid`
/// (√(s²+t²)), `rational` (st/(1+st)) and `sqrt-sum` (s+t+√(st)). None of
/// them is parameterized.
pub fn make_b_action(kind: &str, params: &[f64]) -> Result<BAction> {
    expect_params(kind, params, 0)?;
    let eval: fn(f64, f64) -> f64 = match kind {
        "sum" => |s, t| s + t,
        "product-sum" => |s, t| s + t + s * t,
        "euclid" => |s, t| (s * s + t * t).sqrt(),
        "rational" => |s, t| s * t / (1.0 + s * t),
        "sqrt-sum" => |s, t| s + t + (s * t).sqrt(),
        _ => return Err(Error::UnknownKind { what: "B-action", kind: kind.to_string() }),
    };
    Ok(BAction::from_fn(kind, vec![], eval))
}

/// Names of all catalog B-actions, in catalog order.
pub const B_ACTION_KINDS: [&str; 5] = ["sum", "product-sum", "euclid", "rational", "sqrt-sum"];

/// Names of the parameterless catalog simulation functions. `linear` is
/// excluded since it needs a λ.
pub const SIMULATION_KINDS_NO_PARAMS: [&str; 5] =
    ["rational", "eta-half", "eta-ratio", "phi-half", "phi-quad"];

#[derive(Clone)]
enum MapRule {
    Coord(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Table(Vec<usize>),
}

/// A self-map T of a domain. Interval maps are closed-form; finite maps store
/// an explicit image table.
#[derive(Clone)]
pub struct SelfMap {
    name: String,
    params: Vec<f64>,
    domain: PointDomain,
    rule: MapRule,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfMap")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SelfMap {
    /// T(x). Errors if the point does not belong to the map's domain.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        if !self.domain.contains(p) {
            return Err(Error::DomainMismatch {
                point: format!("{p:?}"),
                domain: self.domain.to_string(),
            });
        }
        Ok(match (&self.rule, p) {
            (MapRule::Coord(f), Point::Coord(c)) => Point::Coord(f(*c)),
            (MapRule::Table(images), Point::Label(i)) => Point::Label(images[*i]),
            _ => unreachable!("containment check pins the point kind"),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn domain(&self) -> &PointDomain {
        &self.domain
    }

    /// Discontinuity coordinates that margin sweeps must sample.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Explicit image table on a finite domain: label `i` maps to
    /// `images[i]`.
    pub fn finite_table(domain: PointDomain, images: Vec<usize>) -> Result<Self> {
        let labels = domain
            .labels()
            .ok_or_else(|| param_err("finite-table", "domain must be finite"))?;
        if images.len() != labels.len() {
            return Err(param_err(
                "finite-table",
                format!("expected {} image entries, got {}", labels.len(), images.len()),
            ));
        }
        if let Some(bad) = images.iter().find(|&&i| i >= labels.len()) {
            return Err(param_err("finite-table", format!("image index {bad} out of range")));
        }
        Ok(SelfMap {
            name: "finite-table".into(),
            params: images.iter().map(|&i| i as f64).collect(),
            domain,
            rule: MapRule::Table(images),
            breakpoints: vec![],
        })
    }
}

fn require_unit_interval(kind: &str, domain: &PointDomain) -> Result<(f64, f64)> {
    match domain {
        PointDomain::Interval { lo, hi } if *lo == 0.0 && *hi == 1.0 => Ok((*lo, *hi)),
        _ => Err(param_err(kind, format!("domain must be the interval [0, 1], got {domain}"))),
    }
}

/// Build a catalog self-map on the given domain.
///
/// Kinds: `affine` (x/a + b with a > 1 and b + 1/a < 1, on [0,1]),
/// `reciprocal` (1/(1+x) on [0,1]), `two-piece` (constant c₁ on
/// [lo, split), c₂ on [split, hi]; params `[c1, c2, split]`), `finite-table`
/// (params are image indices) and `identity`.
pub fn make_self_map(kind: &str, params: &[f64], domain: &PointDomain) -> Result<SelfMap> {
    match kind {
        "affine" => {
            expect_params(kind, params, 2)?;
            require_unit_interval(kind, domain)?;
            let (a, b) = (params[0], params[1]);
            if a <= 1.0 {
                return Err(param_err(kind, format!("a must exceed 1, got {a}")));
            }
            if b < 0.0 {
                return Err(param_err(kind, format!("b must be nonnegative, got {b}")));
            }
            if b + 1.0 / a >= 1.0 {
                // otherwise the image x/a + b leaves [0, 1] at x = 1
                return Err(param_err(kind, format!("b + 1/a must stay below 1, got {}", b + 1.0 / a)));
            }
            Ok(SelfMap {
                name: kind.into(),
                params: vec![a, b],
                domain: domain.clone(),
                rule: MapRule::Coord(Arc::new(move |x| x / a + b)),
                breakpoints: vec![],
            })
        }
        "reciprocal" => {
            expect_params(kind, params, 0)?;
            require_unit_interval(kind, domain)?;
            Ok(SelfMap {
                name: kind.into(),
                params: vec![],
                domain: domain.clone(),
                rule: MapRule::Coord(Arc::new(|x| 1.0 / (1.0 + x))),
                breakpoints: vec![],
            })
        }
        "two-piece" => {
            expect_params(kind, params, 3)?;
            let (c1, c2, split) = (params[0], params[1], params[2]);
            let (lo, hi) = match domain {
                PointDomain::Interval { lo, hi } => (*lo, *hi),
                _ => return Err(param_err(kind, "domain must be an interval")),
            };
            for (name, c) in [("c1", c1), ("c2", c2)] {
                if c < lo || c > hi {
                    return Err(param_err(kind, format!("{name} = {c} lies outside [{lo}, {hi}]")));
                }
            }
            if split <= lo || split > hi {
                return Err(param_err(kind, format!("split must lie in ({lo}, {hi}], got {split}")));
            }
            Ok(SelfMap {
                name: kind.into(),
                params: vec![c1, c2, split],
                domain: domain.clone(),
                rule: MapRule::Coord(Arc::new(move |x| if x < split { c1 } else { c2 })),
                breakpoints: vec![split],
            })
        }
        "identity" => {
            expect_params(kind, params, 0)?;
            let rule = match domain {
                PointDomain::Interval { .. } => MapRule::Coord(Arc::new(|x| x)),
                PointDomain::Finite { labels } => MapRule::Table((0..labels.len()).collect()),
            };
            Ok(SelfMap {
                name: kind.into(),
                params: vec![],
                domain: domain.clone(),
                rule,
                breakpoints: vec![],
            })
        }
        "finite-table" => {
            // params carry the image indices; label resolution happens upstream
            let images: Vec<usize> = params
                .iter()
                .map(|&p| {
                    if p.fract() == 0.0 && p >= 0.0 {
                        Ok(p as usize)
                    } else {
                        Err(param_err(kind, format!("image indices must be nonnegative integers, got {p}")))
                    }
                })
                .collect::<Result<_>>()?;
            SelfMap::finite_table(domain.clone(), images)
        }
        _ => Err(Error::UnknownKind { what: "self-map", kind: kind.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_simulation_matches_its_closed_form() {
        let zeta = make_simulation("linear", &[0.5]).unwrap();
        assert_eq!(zeta.eval(1.0, 4.0), 1.0); // 0.5·4 − 1
        let seven_eighths = make_simulation("linear", &[7.0 / 8.0]).unwrap();
        assert_eq!(seven_eighths.eval(0.0, 8.0), 7.0);
    }

    #[test]
    fn rational_simulation_vanishes_at_the_origin() {
        let zeta = make_simulation("rational", &[]).unwrap();
        assert_eq!(zeta.eval(0.0, 0.0), 0.0);
        assert_eq!(zeta.eval(1.0, 1.0), 0.5 - 1.0);
    }

    #[test]
    fn linear_lambda_is_validated() {
        assert!(make_simulation("linear", &[1.0]).is_err());
        assert!(make_simulation("linear", &[-0.1]).is_err());
        assert!(make_simulation("linear", &[]).is_err());
        assert!(make_simulation("linear", &[0.5, 0.5]).is_err());
        assert!(make_simulation("linear", &[0.0]).is_ok());
    }

    #[test]
    fn unknown_kinds_are_rejected() {
        assert!(matches!(make_simulation("cubic", &[]), Err(Error::UnknownKind { .. })));
        assert!(matches!(make_b_action("max", &[]), Err(Error::UnknownKind { .. })));
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        assert!(matches!(make_self_map("spiral", &[], &dom), Err(Error::UnknownKind { .. })));
    }

    #[test]
    fn aux_catalog_satisfies_its_side_conditions() {
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.1).collect();
        for kind in ["half", "ratio"] {
            let eta = make_aux(kind).unwrap();
            assert_eq!(eta.eval(0.0), 0.0);
            for &t in &grid {
                assert!(eta.eval(t) < t, "eta {kind} at {t}");
            }
        }
        for kind in ["half", "quad"] {
            let phi = make_aux(kind).unwrap();
            assert_eq!(phi.eval(0.0), 0.0);
            for &t in &grid {
                assert!(phi.eval(t) > 0.0, "phi {kind} at {t}");
            }
        }
    }

    #[test]
    fn b_action_closed_forms() {
        assert_eq!(make_b_action("sum", &[]).unwrap().eval(2.0, 3.0).unwrap(), 5.0);
        assert_eq!(make_b_action("product-sum", &[]).unwrap().eval(0.5, 0.0).unwrap(), 0.5);
        assert_eq!(make_b_action("product-sum", &[]).unwrap().eval(1.0, 1.0).unwrap(), 3.0);
        assert_eq!(make_b_action("euclid", &[]).unwrap().eval(3.0, 4.0).unwrap(), 5.0);
        assert_eq!(make_b_action("euclid", &[]).unwrap().eval(5.0, 12.0).unwrap(), 13.0);
        assert_eq!(make_b_action("sqrt-sum", &[]).unwrap().eval(4.0, 9.0).unwrap(), 19.0);
        assert!(make_b_action("sum", &[1.0]).is_err());
    }

    #[test]
    fn affine_map_hits_its_fixed_point() {
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        let map = make_self_map("affine", &[2.0, 0.25], &dom).unwrap();
        // ab/(a−1) = 0.5 is fixed
        assert_eq!(map.apply(&Point::coord(0.5)).unwrap(), Point::coord(0.5));
        assert_eq!(map.apply(&Point::coord(0.0)).unwrap(), Point::coord(0.25));
    }

    #[test]
    fn affine_parameters_are_validated() {
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        assert!(make_self_map("affine", &[2.0, 0.6], &dom).is_err()); // b + 1/a = 1.1
        assert!(make_self_map("affine", &[1.0, 0.25], &dom).is_err());
        assert!(make_self_map("affine", &[2.0, -0.1], &dom).is_err());
        let wide = PointDomain::interval(0.0, 2.0).unwrap();
        assert!(make_self_map("affine", &[2.0, 0.25], &wide).is_err());
    }

    #[test]
    fn reciprocal_map_examples() {
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        let map = make_self_map("reciprocal", &[], &dom).unwrap();
        assert_eq!(map.apply(&Point::coord(0.0)).unwrap(), Point::coord(1.0));
        assert_eq!(map.apply(&Point::coord(1.0)).unwrap(), Point::coord(0.5));
    }

    #[test]
    fn two_piece_map_uses_the_right_branch() {
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        let map = make_self_map("two-piece", &[2.0 / 9.0, 1.0 / 9.0, 0.5], &dom).unwrap();
        assert_eq!(map.apply(&Point::coord(0.7)).unwrap(), Point::coord(1.0 / 9.0));
        assert_eq!(map.apply(&Point::coord(0.3)).unwrap(), Point::coord(2.0 / 9.0));
        // the split itself belongs to the upper piece
        assert_eq!(map.apply(&Point::coord(0.5)).unwrap(), Point::coord(1.0 / 9.0));
        assert_eq!(map.breakpoints(), &[0.5]);
    }

    #[test]
    fn finite_table_map_validation() {
        let dom = PointDomain::finite(vec!["a", "b", "c"]).unwrap();
        let map = SelfMap::finite_table(dom.clone(), vec![1, 2, 0]).unwrap();
        assert_eq!(map.apply(&Point::label(0)).unwrap(), Point::label(1));
        assert!(SelfMap::finite_table(dom.clone(), vec![1, 2]).is_err());
        assert!(SelfMap::finite_table(dom.clone(), vec![1, 2, 3]).is_err());
        assert!(make_self_map("finite-table", &[1.0, 2.0, 0.0], &dom).is_ok());
        assert!(make_self_map("finite-table", &[0.5, 2.0, 0.0], &dom).is_err());
    }

    #[test]
    fn identity_map_on_both_domain_kinds() {
        let interval = PointDomain::interval(0.0, 1.0).unwrap();
        let id = make_self_map("identity", &[], &interval).unwrap();
        assert_eq!(id.apply(&Point::coord(0.37)).unwrap(), Point::coord(0.37));

        let finite = PointDomain::finite(vec!["a", "b"]).unwrap();
        let id = make_self_map("identity", &[], &finite).unwrap();
        assert_eq!(id.apply(&Point::label(1)).unwrap(), Point::label(1));
    }

    #[test]
    fn apply_rejects_points_outside_the_domain() {
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        let map = make_self_map("reciprocal", &[], &dom).unwrap();
        assert!(map.apply(&Point::coord(1.5)).is_err());
        assert!(map.apply(&Point::label(0)).is_err());
    }

    #[test]
    fn catalog_maps_send_the_domain_into_itself() {
        // 1000 grid points per map, per the catalog contract
        let dom = PointDomain::interval(0.0, 1.0).unwrap();
        let maps = [
            make_self_map("affine", &[2.0, 0.25], &dom).unwrap(),
            make_self_map("reciprocal", &[], &dom).unwrap(),
            make_self_map("two-piece", &[2.0 / 9.0, 1.0 / 9.0, 0.5], &dom).unwrap(),
            make_self_map("two-piece", &[1.0 / 7.0, 2.0 / 7.0, 0.5], &dom).unwrap(),
            make_self_map("identity", &[], &dom).unwrap(),
        ];
        for map in &maps {
            for p in dom.sample_points(1000, &[]) {
                let image = map.apply(&p).unwrap();
                assert!(dom.contains(&image), "{} left the domain at {p:?}", map.name());
            }
        }
    }
}
