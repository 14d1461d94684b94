//! Experiment configs: a flat, sectioned key-value text format.
//!
//! ```text
//! # full pipeline on the unit interval
//! mode = full
//!
//! [space]
//! domain = interval 0 1
//! distance = euclid
//! action = product-sum
//!
//! [map]
//! kind = affine
//! params = 2 1/4
//!
//! [zeta]
//! kind = linear
//! params = 0.6
//!
//! [plan]
//! seed = 42
//!
//! [solve]
//! tol = 1e-9
//! max-iter = 10000
//! starts = 0 0.5 1
//! ```
//!
//! Finite domains replace `distance` with repeated `table = <a> <b> <dist>`
//! entries. Real values accept `p/q` fractions so constants like 2/9 resolve
//! to the nearest double of the true rational. Unknown sections or keys are
//! rejected with their line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use theta_fixpoint::{
    make_b_action, make_self_map, make_simulation, DistanceFn, DistanceTable, Point, PointDomain,
    SamplePlan, SelfMap, SequencePlan, SimulationFunction, ThetaMetricSpace, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Incomplete(String),
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError::Line { line, message: message.into() }
    }
}

type CfgResult<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    VerifyAxioms,
    CertifyZ,
    CertifyModifiedZ,
    Solve,
    Full,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::VerifyAxioms => "verify-axioms",
            Mode::CertifyZ => "certify-z",
            Mode::CertifyModifiedZ => "certify-modified-z",
            Mode::Solve => "solve",
            Mode::Full => "full",
        }
    }

    fn parse(s: &str) -> Option<Mode> {
        match s {
            "verify-axioms" => Some(Mode::VerifyAxioms),
            "certify-z" => Some(Mode::CertifyZ),
            "certify-modified-z" => Some(Mode::CertifyModifiedZ),
            "solve" => Some(Mode::Solve),
            "full" => Some(Mode::Full),
            _ => None,
        }
    }

    /// Modes that run the plain or modified margin sweep.
    pub fn certifies_z(&self) -> bool {
        matches!(self, Mode::CertifyZ | Mode::Full)
    }

    pub fn certifies_modified(&self) -> bool {
        matches!(self, Mode::CertifyModifiedZ | Mode::Full)
    }

    pub fn solves(&self) -> bool {
        matches!(self, Mode::Solve | Mode::Full)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainEcho {
    Interval { lo: f64, hi: f64 },
    Finite { labels: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindEcho {
    pub kind: String,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEcho {
    pub kind: String,
    pub params: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub images: Option<Vec<String>>,
}

/// The pure-data description of an experiment. This is what reports echo,
/// what `to_config_string` emits, and what the round-trip guarantee covers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentEcho {
    pub mode: Mode,
    pub domain: DomainEcho,
    pub action: KindEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<(String, String, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub map: Option<MapEcho>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zeta: Option<KindEcho>,
    pub plan: SamplePlan,
    pub tol: f64,
    pub max_iter: usize,
    pub starts: Vec<String>,
}

/// A fully resolved experiment: the echo plus the live objects built from
/// the catalogs.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub echo: ExperimentEcho,
    pub space: ThetaMetricSpace,
    pub map: Option<SelfMap>,
    pub zeta: Option<SimulationFunction>,
    pub seq: SequencePlan,
    pub starts: Vec<Point>,
}

impl Experiment {
    pub fn set_mode(&mut self, mode: Mode) {
        self.echo.mode = mode;
    }

    pub fn override_seed(&mut self, seed: u64) {
        self.echo.plan.seed = seed;
    }

    pub fn override_tol(&mut self, tol: f64) {
        self.echo.tol = tol;
    }

    pub fn override_max_iter(&mut self, max_iter: usize) {
        self.echo.max_iter = max_iter;
    }
}

/// Accepts plain decimals, scientific notation and `p/q` fractions.
fn parse_real(tok: &str) -> Option<f64> {
    let v = if let Some((p, q)) = tok.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        p / q
    } else {
        tok.parse().ok()?
    };
    v.is_finite().then_some(v)
}

fn parse_reals(line: usize, key: &str, value: &str) -> CfgResult<Vec<f64>> {
    value
        .split_whitespace()
        .map(|tok| {
            parse_real(tok).ok_or_else(|| ConfigError::at(line, format!("`{key}` expects real values, got `{tok}`")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Top,
    Space,
    Map,
    Zeta,
    Plan,
    Solve,
}

const SECTION_KEYS: &[(Section, &[&str])] = &[
    (Section::Top, &["mode"]),
    (Section::Space, &["domain", "distance", "action", "table"]),
    (Section::Map, &["kind", "params", "images"]),
    (Section::Zeta, &["kind", "params"]),
    (Section::Plan, &["grid-step", "grid-max", "random-samples", "seed", "interval-points"]),
    (Section::Solve, &["tol", "max-iter", "starts"]),
];

struct RawConfig {
    // one value per (section, key), with the defining line
    values: BTreeMap<(Section, String), (String, usize)>,
    tables: Vec<(String, usize)>,
    seen_sections: Vec<Section>,
}

fn parse_raw(text: &str) -> CfgResult<RawConfig> {
    let mut raw = RawConfig { values: BTreeMap::new(), tables: Vec::new(), seen_sections: vec![] };
    let mut section = Section::Top;
    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = line_text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?
                .trim();
            section = match name {
                "space" => Section::Space,
                "map" => Section::Map,
                "zeta" => Section::Zeta,
                "plan" => Section::Plan,
                "solve" => Section::Solve,
                _ => return Err(ConfigError::at(line, format!("unknown section `[{name}]`"))),
            };
            raw.seen_sections.push(section);
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let allowed = SECTION_KEYS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap();
        if !allowed.contains(&key) {
            return Err(ConfigError::at(line, format!("unknown key `{key}`")));
        }
        if section == Section::Space && key == "table" {
            raw.tables.push((value.to_string(), line));
            continue;
        }
        if raw.values.insert((section, key.to_string()), (value.to_string(), line)).is_some() {
            return Err(ConfigError::at(line, format!("duplicate key `{key}`")));
        }
    }
    Ok(raw)
}

impl RawConfig {
    fn take(&mut self, section: Section, key: &str) -> Option<(String, usize)> {
        self.values.remove(&(section, key.to_string()))
    }
}

/// Parse and resolve a config document into an [`Experiment`].
pub fn parse_experiment(text: &str) -> CfgResult<Experiment> {
    let mut raw = parse_raw(text)?;

    let mode = match raw.take(Section::Top, "mode") {
        Some((v, line)) => Mode::parse(&v).ok_or_else(|| ConfigError::at(line, format!("unknown mode `{v}`")))?,
        None => Mode::Full,
    };

    // [space]
    let (domain_value, domain_line) = raw
        .take(Section::Space, "domain")
        .ok_or_else(|| ConfigError::Incomplete("missing [space] domain".into()))?;
    let mut toks = domain_value.split_whitespace();
    let domain_kind = toks.next().unwrap_or_default();
    let (domain, domain_echo) = match domain_kind {
        "interval" => {
            let rest: Vec<&str> = toks.collect();
            if rest.len() != 2 {
                return Err(ConfigError::at(domain_line, "interval domains need `domain = interval <lo> <hi>`"));
            }
            let lo = parse_real(rest[0])
                .ok_or_else(|| ConfigError::at(domain_line, format!("bad interval bound `{}`", rest[0])))?;
            let hi = parse_real(rest[1])
                .ok_or_else(|| ConfigError::at(domain_line, format!("bad interval bound `{}`", rest[1])))?;
            let domain = PointDomain::interval(lo, hi)
                .map_err(|e| ConfigError::at(domain_line, e.to_string()))?;
            (domain, DomainEcho::Interval { lo, hi })
        }
        "finite" => {
            let labels: Vec<String> = toks.map(str::to_string).collect();
            let domain = PointDomain::finite(labels.clone())
                .map_err(|e| ConfigError::at(domain_line, e.to_string()))?;
            (domain, DomainEcho::Finite { labels })
        }
        other => {
            return Err(ConfigError::at(domain_line, format!("unknown domain kind `{other}`")));
        }
    };

    if let Some((v, line)) = raw.take(Section::Space, "distance") {
        if v != "euclid" {
            return Err(ConfigError::at(line, format!("unknown distance `{v}`")));
        }
        if domain.is_finite() {
            return Err(ConfigError::at(line, "finite domains take `table` entries, not a closed-form distance"));
        }
    }

    let (action_value, action_line) = raw
        .take(Section::Space, "action")
        .ok_or_else(|| ConfigError::Incomplete("missing [space] action".into()))?;
    let mut toks = action_value.split_whitespace();
    let action_kind = toks.next().unwrap_or_default().to_string();
    let action_params = parse_reals(action_line, "action", &toks.collect::<Vec<_>>().join(" "))?;
    let action = make_b_action(&action_kind, &action_params)
        .map_err(|e| ConfigError::at(action_line, e.to_string()))?;

    // distance table
    let mut table_echo: Vec<(String, String, f64)> = Vec::new();
    let mut table_pairs: Vec<(usize, usize, f64)> = Vec::new();
    let first_table_line = raw.tables.first().map(|(_, l)| *l);
    for (entry, line) in std::mem::take(&mut raw.tables) {
        if !domain.is_finite() {
            return Err(ConfigError::at(line, "table entries only apply to finite domains"));
        }
        let toks: Vec<&str> = entry.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ConfigError::at(line, "table entries read `table = <a> <b> <distance>`"));
        }
        let i = domain
            .label_index(toks[0])
            .ok_or_else(|| ConfigError::at(line, format!("unknown label `{}`", toks[0])))?;
        let j = domain
            .label_index(toks[1])
            .ok_or_else(|| ConfigError::at(line, format!("unknown label `{}`", toks[1])))?;
        let d = parse_real(toks[2])
            .ok_or_else(|| ConfigError::at(line, format!("bad distance `{}`", toks[2])))?;
        table_echo.push((toks[0].to_string(), toks[1].to_string(), d));
        table_pairs.push((i, j, d));
    }

    let space = if domain.is_finite() {
        let n = domain.labels().unwrap().len();
        let table = DistanceTable::from_pairs(n, &table_pairs)
            .map_err(|e| ConfigError::at(first_table_line.unwrap_or(domain_line), e.to_string()))?;
        ThetaMetricSpace::new(domain.clone(), DistanceFn::Table(table), action)
            .map_err(|e| ConfigError::at(domain_line, e.to_string()))?
    } else {
        ThetaMetricSpace::new(domain.clone(), DistanceFn::Euclid, action)
            .map_err(|e| ConfigError::at(domain_line, e.to_string()))?
    };

    // [map]
    let map_kind = raw.take(Section::Map, "kind");
    let map_params = raw.take(Section::Map, "params");
    let map_images = raw.take(Section::Map, "images");
    let (map, map_echo) = if let Some((kind, kind_line)) = map_kind {
        let params = match &map_params {
            Some((v, line)) => parse_reals(*line, "params", v)?,
            None => vec![],
        };
        let images: Option<Vec<String>> = match &map_images {
            Some((v, line)) => {
                if kind != "finite-table" {
                    return Err(ConfigError::at(*line, "`images` only applies to finite-table maps"));
                }
                Some(v.split_whitespace().map(str::to_string).collect())
            }
            None => None,
        };
        let resolved_params = if let Some(images) = &images {
            if !params.is_empty() {
                return Err(ConfigError::at(kind_line, "finite-table maps take `images`, not `params`"));
            }
            images
                .iter()
                .map(|label| {
                    domain
                        .label_index(label)
                        .map(|i| i as f64)
                        .ok_or_else(|| ConfigError::at(map_images.as_ref().unwrap().1, format!("unknown label `{label}`")))
                })
                .collect::<CfgResult<Vec<f64>>>()?
        } else {
            params.clone()
        };
        let map = make_self_map(&kind, &resolved_params, &domain)
            .map_err(|e| ConfigError::at(kind_line, e.to_string()))?;
        (Some(map), Some(MapEcho { kind, params, images }))
    } else {
        if map_params.is_some() || map_images.is_some() {
            let line = map_params.map(|(_, l)| l).or(map_images.map(|(_, l)| l)).unwrap();
            return Err(ConfigError::at(line, "[map] needs a `kind`"));
        }
        (None, None)
    };

    // [zeta]
    let zeta_kind = raw.take(Section::Zeta, "kind");
    let zeta_params = raw.take(Section::Zeta, "params");
    let (zeta, zeta_echo) = if let Some((kind, kind_line)) = zeta_kind {
        let params = match &zeta_params {
            Some((v, line)) => parse_reals(*line, "params", v)?,
            None => vec![],
        };
        let zeta = make_simulation(&kind, &params)
            .map_err(|e| ConfigError::at(kind_line, e.to_string()))?;
        (Some(zeta), Some(KindEcho { kind, params }))
    } else {
        if let Some((_, line)) = zeta_params {
            return Err(ConfigError::at(line, "[zeta] needs a `kind`"));
        }
        (None, None)
    };

    // [plan]
    let mut plan = SamplePlan::default();
    if let Some((v, line)) = raw.take(Section::Plan, "grid-step") {
        plan.grid_step = parse_real(&v).ok_or_else(|| ConfigError::at(line, format!("bad grid-step `{v}`")))?;
    }
    if let Some((v, line)) = raw.take(Section::Plan, "grid-max") {
        plan.grid_max = parse_real(&v).ok_or_else(|| ConfigError::at(line, format!("bad grid-max `{v}`")))?;
    }
    let mut plan_line = None;
    if let Some((v, line)) = raw.take(Section::Plan, "random-samples") {
        plan.random_count = v.parse().map_err(|_| ConfigError::at(line, format!("bad random-samples `{v}`")))?;
        plan_line = Some(line);
    }
    if let Some((v, line)) = raw.take(Section::Plan, "seed") {
        plan.seed = v.parse().map_err(|_| ConfigError::at(line, format!("bad seed `{v}`")))?;
        plan_line = Some(line);
    }
    if let Some((v, line)) = raw.take(Section::Plan, "interval-points") {
        plan.interval_points =
            v.parse().map_err(|_| ConfigError::at(line, format!("bad interval-points `{v}`")))?;
        plan_line = Some(line);
    }
    plan.validate().map_err(|e| match plan_line {
        Some(line) => ConfigError::at(line, e.to_string()),
        None => ConfigError::Incomplete(e.to_string()),
    })?;

    // [solve]
    let tol = match raw.take(Section::Solve, "tol") {
        Some((v, line)) => {
            let t = parse_real(&v).ok_or_else(|| ConfigError::at(line, format!("bad tol `{v}`")))?;
            if t <= 0.0 {
                return Err(ConfigError::at(line, "tol must be positive"));
            }
            t
        }
        None => DEFAULT_TOL,
    };
    let max_iter = match raw.take(Section::Solve, "max-iter") {
        Some((v, line)) => {
            let n: usize = v.parse().map_err(|_| ConfigError::at(line, format!("bad max-iter `{v}`")))?;
            if n == 0 {
                return Err(ConfigError::at(line, "max-iter must be positive"));
            }
            n
        }
        None => DEFAULT_MAX_ITER,
    };
    let (start_tokens, starts) = match raw.take(Section::Solve, "starts") {
        Some((v, line)) => {
            let mut tokens = Vec::new();
            let mut points = Vec::new();
            for tok in v.split_whitespace() {
                let point = match &domain {
                    PointDomain::Finite { .. } => domain
                        .label_index(tok)
                        .map(Point::label)
                        .ok_or_else(|| ConfigError::at(line, format!("unknown start label `{tok}`")))?,
                    PointDomain::Interval { .. } => {
                        let c = parse_real(tok)
                            .ok_or_else(|| ConfigError::at(line, format!("bad start coordinate `{tok}`")))?;
                        let p = Point::coord(c);
                        if !domain.contains(&p) {
                            return Err(ConfigError::at(line, format!("start {c} lies outside the domain")));
                        }
                        p
                    }
                };
                // canonical token: labels verbatim, coordinates re-rendered
                tokens.push(match point {
                    Point::Coord(c) => format!("{c}"),
                    Point::Label(_) => tok.to_string(),
                });
                points.push(point);
            }
            (tokens, points)
        }
        None => (vec![], vec![]),
    };

    let echo = ExperimentEcho {
        mode,
        domain: domain_echo,
        action: KindEcho { kind: action_kind, params: action_params },
        table: (!table_echo.is_empty()).then_some(table_echo),
        map: map_echo,
        zeta: zeta_echo,
        plan,
        tol,
        max_iter,
        starts: start_tokens,
    };
    Ok(Experiment { echo, space, map, zeta, seq: SequencePlan::default(), starts })
}

impl ExperimentEcho {
    /// Render back to config text. `parse_experiment` on the output
    /// reproduces this echo exactly.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode = {}", self.mode.as_str());
        let _ = writeln!(out, "\n[space]");
        match &self.domain {
            DomainEcho::Interval { lo, hi } => {
                let _ = writeln!(out, "domain = interval {lo} {hi}");
                let _ = writeln!(out, "distance = euclid");
            }
            DomainEcho::Finite { labels } => {
                let _ = writeln!(out, "domain = finite {}", labels.join(" "));
            }
        }
        let _ = write!(out, "action = {}", self.action.kind);
        for p in &self.action.params {
            let _ = write!(out, " {p}");
        }
        let _ = writeln!(out);
        if let Some(table) = &self.table {
            for (a, b, d) in table {
                let _ = writeln!(out, "table = {a} {b} {d}");
            }
        }
        if let Some(map) = &self.map {
            let _ = writeln!(out, "\n[map]");
            let _ = writeln!(out, "kind = {}", map.kind);
            if !map.params.is_empty() {
                let _ = writeln!(
                    out,
                    "params = {}",
                    map.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
                );
            }
            if let Some(images) = &map.images {
                let _ = writeln!(out, "images = {}", images.join(" "));
            }
        }
        if let Some(zeta) = &self.zeta {
            let _ = writeln!(out, "\n[zeta]");
            let _ = writeln!(out, "kind = {}", zeta.kind);
            if !zeta.params.is_empty() {
                let _ = writeln!(
                    out,
                    "params = {}",
                    zeta.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
                );
            }
        }
        let _ = writeln!(out, "\n[plan]");
        let _ = writeln!(out, "grid-step = {}", self.plan.grid_step);
        let _ = writeln!(out, "grid-max = {}", self.plan.grid_max);
        let _ = writeln!(out, "random-samples = {}", self.plan.random_count);
        let _ = writeln!(out, "seed = {}", self.plan.seed);
        let _ = writeln!(out, "interval-points = {}", self.plan.interval_points);
        let _ = writeln!(out, "\n[solve]");
        let _ = writeln!(out, "tol = {}", self.tol);
        let _ = writeln!(out, "max-iter = {}", self.max_iter);
        if !self.starts.is_empty() {
            let _ = writeln!(out, "starts = {}", self.starts.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AFFINE: &str = "\
mode = full

[space]
domain = interval 0 1
distance = euclid
action = product-sum

[map]
kind = affine
params = 2 1/4

[zeta]
kind = linear
params = 0.6

[solve]
starts = 0 0.5 1
";

    #[test]
    fn parses_the_affine_experiment() {
        let exp = parse_experiment(AFFINE).unwrap();
        assert_eq!(exp.echo.mode, Mode::Full);
        assert_eq!(exp.echo.map.as_ref().unwrap().params, vec![2.0, 0.25]);
        assert_eq!(exp.echo.zeta.as_ref().unwrap().params, vec![0.6]);
        assert_eq!(exp.starts.len(), 3);
        assert_eq!(exp.echo.tol, DEFAULT_TOL);
        assert_eq!(exp.echo.max_iter, DEFAULT_MAX_ITER);
    }

    #[test]
    fn parses_a_finite_table_config() {
        let text = "\
mode = verify-axioms

[space]
domain = finite a b c
action = euclid
table = a b 5
table = b c 12
table = a c 13
";
        let exp = parse_experiment(text).unwrap();
        assert!(exp.space.domain().is_finite());
        assert_eq!(
            exp.space.distance(&Point::label(0), &Point::label(2)).unwrap(),
            13.0
        );
        assert_eq!(exp.echo.table.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_affine_parameters_with_the_kind_line() {
        let text = AFFINE.replace("params = 2 1/4", "params = 2 0.6");
        let err = parse_experiment(&text).unwrap_err();
        match err {
            ConfigError::Line { line, message } => {
                assert_eq!(line, 9); // the `kind = affine` line
                assert!(message.contains("b + 1/a"), "{message}");
            }
            other => panic!("expected a line error, got {other}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_with_line_numbers() {
        let text = AFFINE.replace("distance = euclid", "metric = euclid");
        match parse_experiment(&text).unwrap_err() {
            ConfigError::Line { line, message } => {
                assert_eq!(line, 5);
                assert!(message.contains("metric"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn rejects_duplicate_keys_and_unknown_sections() {
        let dup = format!("{AFFINE}\n[zeta]\nkind = rational\n");
        assert!(parse_experiment(&dup).is_err());
        let bad_section = format!("{AFFINE}\n[extras]\nfoo = 1\n");
        assert!(parse_experiment(&bad_section).is_err());
    }

    #[test]
    fn fractions_resolve_to_the_nearest_double() {
        let text = AFFINE
            .replace("kind = affine", "kind = two-piece")
            .replace("params = 2 1/4", "params = 2/9 1/9 1/2");
        let exp = parse_experiment(&text).unwrap();
        assert_eq!(exp.echo.map.as_ref().unwrap().params, vec![2.0 / 9.0, 1.0 / 9.0, 0.5]);
    }

    #[test]
    fn starts_are_validated_against_the_domain() {
        let out_of_range = AFFINE.replace("starts = 0 0.5 1", "starts = 0 2");
        assert!(parse_experiment(&out_of_range).is_err());
        let as_labels = AFFINE.replace("starts = 0 0.5 1", "starts = a");
        assert!(parse_experiment(&as_labels).is_err());
    }

    #[test]
    fn round_trips_through_the_emitter() {
        for text in [
            AFFINE.to_string(),
            "mode = verify-axioms\n[space]\ndomain = finite a b c\naction = euclid\ntable = a b 5\ntable = b c 12\ntable = a c 13\n".to_string(),
            AFFINE.replace("params = 2 1/4", "params = 2 2/7"),
        ] {
            let echo = parse_experiment(&text).unwrap().echo;
            let emitted = echo.to_config_string();
            let back = parse_experiment(&emitted).unwrap().echo;
            assert_eq!(echo, back, "emitted:\n{emitted}");
        }
    }

    #[test]
    fn plan_overrides_apply() {
        let text = format!("{AFFINE}\n[plan]\ngrid-step = 0.5\nseed = 7\ninterval-points = 21\n");
        let exp = parse_experiment(&text).unwrap();
        assert_eq!(exp.echo.plan.grid_step, 0.5);
        assert_eq!(exp.echo.plan.seed, 7);
        assert_eq!(exp.echo.plan.interval_points, 21);
        // untouched fields keep their defaults
        assert_eq!(exp.echo.plan.random_count, 200);
    }

    #[test]
    fn finite_map_images_resolve_labels() {
        let text = "\
[space]
domain = finite a b c
action = sum
table = a b 1
table = b c 1
table = a c 1

[map]
kind = finite-table
images = b c a
";
        let exp = parse_experiment(text).unwrap();
        let map = exp.map.unwrap();
        assert_eq!(map.apply(&Point::label(0)).unwrap(), Point::label(1));
        assert_eq!(map.apply(&Point::label(2)).unwrap(), Point::label(0));
    }
}
