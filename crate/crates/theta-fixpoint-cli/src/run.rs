//! Mode pipelines over a resolved experiment.

use std::time::Instant;

use thiserror::Error;

use theta_fixpoint::{
    asymptotic_regularity, cauchy_diagnostic, check_b_action, check_simulation,
    check_theta_metric, contractivity_check, modified_z_margin, picard_iterate,
    uniqueness_from_results, z_margin, FixedPointResult,
};

use crate::config::Experiment;
use crate::report::{AxiomSection, RunReport, SolveEntry, SolveSection, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("mode {mode} needs {what}")]
    Missing { mode: &'static str, what: &'static str },
    #[error(transparent)]
    Lib(#[from] theta_fixpoint::Error),
}

/// Run the experiment's mode pipeline and assemble the report.
///
/// Every mode checks the axioms of the configured action, space and (when
/// present) ζ. `certify-z` adds the plain margin plus the contractivity
/// consequence, `certify-modified-z` the modified margin, `solve` the Picard
/// runs with their diagnostics; `full` does all of it.
pub fn run_experiment(exp: &Experiment) -> Result<RunReport, RunError> {
    let started = Instant::now();
    let mode = exp.echo.mode;
    let plan = &exp.echo.plan;
    let space = &exp.space;

    let map = exp.map.as_ref();
    let zeta = exp.zeta.as_ref();
    if (mode.certifies_z() || mode.certifies_modified()) && map.is_none() {
        return Err(RunError::Missing { mode: mode.as_str(), what: "a [map] section" });
    }
    if (mode.certifies_z() || mode.certifies_modified()) && zeta.is_none() {
        return Err(RunError::Missing { mode: mode.as_str(), what: "a [zeta] section" });
    }
    if mode.solves() {
        if map.is_none() {
            return Err(RunError::Missing { mode: mode.as_str(), what: "a [map] section" });
        }
        if exp.starts.is_empty() {
            return Err(RunError::Missing { mode: mode.as_str(), what: "start points" });
        }
    }

    let axioms = AxiomSection {
        b_action: check_b_action(space.action(), plan),
        theta_metric: check_theta_metric(space, plan),
        simulation: zeta.map(|z| check_simulation(z, plan, &exp.seq)),
    };

    let z = if mode.certifies_z() {
        Some(z_margin(space, map.unwrap(), zeta.unwrap(), plan)?)
    } else {
        None
    };
    let modified = if mode.certifies_modified() {
        Some(modified_z_margin(space, map.unwrap(), zeta.unwrap(), plan)?)
    } else {
        None
    };
    let contractivity = if mode.certifies_z() {
        Some(contractivity_check(space, map.unwrap(), plan)?)
    } else {
        None
    };

    let solve = if mode.solves() {
        let map = map.unwrap();
        let results: Vec<FixedPointResult> = exp
            .starts
            .iter()
            .map(|x0| picard_iterate(space, map, x0, exp.echo.tol, exp.echo.max_iter))
            .collect::<theta_fixpoint::Result<_>>()?;
        let uniqueness = if results.len() >= 2 {
            Some(uniqueness_from_results(space, &results, exp.echo.tol)?)
        } else {
            None
        };
        let entries = exp
            .starts
            .iter()
            .zip(results)
            .map(|(start, result)| {
                let regularity = asymptotic_regularity(&result.trace, exp.echo.tol).ok();
                let cauchy = cauchy_diagnostic(&result.trace, space);
                SolveEntry { start: *start, result, regularity, cauchy }
            })
            .collect();
        Some(SolveSection { tol: exp.echo.tol, max_iter: exp.echo.max_iter, entries, uniqueness })
    } else {
        None
    };

    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: exp.echo.clone(),
        axioms,
        z_margin: z,
        modified_z_margin: modified,
        contractivity,
        solve,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}
