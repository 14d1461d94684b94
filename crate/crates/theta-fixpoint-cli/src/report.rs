//! Machine- and human-readable run reports, plus the iterate-trace CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use theta_fixpoint::{
    AxiomReport, FixedPointResult, MarginReport, Point, RegularityReport, SolveStatus,
    ThetaMetricSpace, UniquenessReport,
};

use crate::config::ExperimentEcho;

/// Bumped whenever the report layout changes; golden consumers pin on it.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomSection {
    pub b_action: AxiomReport,
    pub theta_metric: AxiomReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub simulation: Option<AxiomReport>,
}

impl AxiomSection {
    pub fn all_hold(&self) -> bool {
        self.b_action.all_hold()
            && self.theta_metric.all_hold()
            && self.simulation.as_ref().is_none_or(AxiomReport::all_hold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveEntry {
    pub start: Point,
    pub result: FixedPointResult,
    /// Step-decay diagnostics; absent when the trace is too short to judge.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub regularity: Option<RegularityReport>,
    /// Finite-horizon Cauchy estimates Ĉ_n along the trace.
    pub cauchy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSection {
    pub tol: f64,
    pub max_iter: usize,
    pub entries: Vec<SolveEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uniqueness: Option<UniquenessReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub experiment: ExperimentEcho,
    pub axioms: AxiomSection,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z_margin: Option<MarginReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modified_z_margin: Option<MarginReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub contractivity: Option<MarginReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solve: Option<SolveSection>,
    pub wall_ms: f64,
}

impl RunReport {
    /// True when every requested verdict came back holds / nonnegative /
    /// converged (and unique, when probed). Drives the process exit status.
    pub fn all_green(&self) -> bool {
        self.axioms.all_hold()
            && self.z_margin.as_ref().is_none_or(MarginReport::nonnegative)
            && self.modified_z_margin.as_ref().is_none_or(MarginReport::nonnegative)
            && self.contractivity.as_ref().is_none_or(MarginReport::nonnegative)
            && self.solve.as_ref().is_none_or(|s| {
                s.entries.iter().all(|e| e.result.converged())
                    && s.uniqueness.as_ref().is_none_or(|u| u.unique)
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Human,
}

fn fmt_point(echo: &ExperimentEcho, p: &Point) -> String {
    match (p, &echo.domain) {
        (Point::Label(i), crate::config::DomainEcho::Finite { labels }) if *i < labels.len() => {
            labels[*i].clone()
        }
        (Point::Label(i), _) => format!("#{i}"),
        (Point::Coord(c), _) => format!("{c}"),
    }
}

fn fmt_margin(out: &mut String, name: &str, report: &MarginReport, echo: &ExperimentEcho) {
    let verdict = if report.nonnegative() { "nonnegative-on-samples" } else { "violated" };
    let _ = write!(out, "  {name}: {verdict}  min {:.6e} over {} pairs", report.min_margin, report.pair_count);
    if let Some((x, y)) = &report.argmin {
        let _ = write!(out, "  at ({}, {})", fmt_point(echo, x), fmt_point(echo, y));
    }
    if report.clamped {
        let _ = write!(out, "  [clamped]");
    }
    let _ = writeln!(out);
}

fn fmt_axioms(out: &mut String, name: &str, report: &AxiomReport) {
    let _ = write!(out, "  {name}:");
    for check in &report.checks {
        let mark = if check.holds() { "ok" } else { "VIOLATED" };
        let _ = write!(out, "  {} {}", check.axiom, mark);
    }
    let _ = writeln!(out);
    for check in &report.checks {
        if let Some(w) = &check.witness {
            let bindings: Vec<String> = w
                .bindings
                .iter()
                .map(|(n, v)| match v {
                    theta_fixpoint::WitnessValue::Scalar(s) => format!("{n}={s}"),
                    theta_fixpoint::WitnessValue::Point(p) => format!("{n}={p:?}"),
                })
                .collect();
            let _ = writeln!(
                out,
                "    {} witness: {}  observed {} vs bound {}",
                check.axiom,
                bindings.join(", "),
                w.observed,
                w.bound
            );
        }
    }
}

fn human(report: &RunReport) -> String {
    let echo = &report.experiment;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "theta-fixpoint run (schema {}, tool {}), mode {}",
        report.schema_version,
        report.tool_version,
        echo.mode.as_str()
    );
    let domain = match &echo.domain {
        crate::config::DomainEcho::Interval { lo, hi } => format!("interval [{lo}, {hi}]"),
        crate::config::DomainEcho::Finite { labels } => format!("finite {{{}}}", labels.join(", ")),
    };
    let _ = writeln!(out, "space: {domain}, action {}", echo.action.kind);
    if let Some(map) = &echo.map {
        let _ = writeln!(out, "map: {} {:?}", map.kind, map.params);
    }
    if let Some(zeta) = &echo.zeta {
        let _ = writeln!(out, "zeta: {} {:?}", zeta.kind, zeta.params);
    }
    let _ = writeln!(out, "axioms:");
    fmt_axioms(&mut out, &format!("B-action {}", echo.action.kind), &report.axioms.b_action);
    fmt_axioms(&mut out, "theta-metric", &report.axioms.theta_metric);
    if let Some(sim) = &report.axioms.simulation {
        fmt_axioms(&mut out, "simulation", sim);
    }
    if report.z_margin.is_some() || report.modified_z_margin.is_some() || report.contractivity.is_some() {
        let _ = writeln!(out, "margins:");
        if let Some(m) = &report.z_margin {
            fmt_margin(&mut out, "z-margin", m, echo);
        }
        if let Some(m) = &report.modified_z_margin {
            fmt_margin(&mut out, "modified-z-margin", m, echo);
        }
        if let Some(m) = &report.contractivity {
            fmt_margin(&mut out, "contractivity", m, echo);
        }
    }
    if let Some(solve) = &report.solve {
        let _ = writeln!(out, "solve (tol {}, max-iter {}):", solve.tol, solve.max_iter);
        for entry in &solve.entries {
            let status = match entry.result.status {
                SolveStatus::Converged => "converged",
                SolveStatus::ExactFixedPoint => "exact-fixed-point",
                SolveStatus::MaxIterations => "max-iterations",
            };
            let _ = writeln!(
                out,
                "  from {}: {status} at {} after {} steps, residual {:.3e}",
                fmt_point(echo, &entry.start),
                fmt_point(echo, &entry.result.candidate),
                entry.result.iterations,
                entry.result.residual
            );
        }
        if let Some(u) = &solve.uniqueness {
            let _ = writeln!(
                out,
                "  uniqueness: {} (max pairwise {:.3e}, all converged {})",
                if u.unique { "unique" } else { "NOT unique" },
                u.max_pairwise,
                u.all_converged
            );
        }
    }
    let _ = writeln!(out, "wall: {:.1} ms, verdicts {}", report.wall_ms, if report.all_green() { "green" } else { "RED" });
    out
}

/// Render a report. JSON output is stable-key-ordered (struct order) and
/// schema-versioned; the human format is a compact console summary.
pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        ReportFormat::Human => human(report),
    }
}

/// Iterate trace as CSV: `n, x_n, d_n`, one row per iterate; the final row
/// has no step. A start that is already fixed yields the header plus a
/// single row.
pub fn emit_trace_csv(result: &FixedPointResult, space: &ThetaMetricSpace) -> String {
    let mut out = String::from("n,x_n,d_n\n");
    let steps = result.trace.steps();
    for (n, p) in result.trace.iterates().iter().enumerate() {
        let d = steps.get(n).map(|d| format!("{d}")).unwrap_or_default();
        let _ = writeln!(out, "{n},{},{d}", space.format_point(p));
    }
    out
}
