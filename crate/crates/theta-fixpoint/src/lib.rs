//! Fixed points of contractive self-maps on θ-metric spaces.
//!
//! A θ-metric space generalizes a metric space by routing the triangle
//! inequality through a B-action θ — a continuous symmetric operation on
//! `[0,∞)` with `d(x,y) ≤ θ(d(x,z), d(z,y))`. A self-map T certifies as a
//! Z-contraction through a simulation function ζ when
//! `ζ(d(Tx,Ty), d(x,y)) ≥ 0` everywhere; the modified variant compares
//! against `M(x,y) = max{d(x,y), d(x,Tx), d(y,Ty)}` instead. Either
//! certificate forces a unique fixed point reached by Picard iteration from
//! any start.
//!
//! The crate provides:
//!
//! * [`space`] — point domains (finite label sets, real intervals),
//!   B-actions and θ-metric spaces with construction-time table validation;
//! * [`catalog`] — closed-form simulation functions, B-actions and self-maps
//!   addressed by kind identifier plus parameters;
//! * [`verify`] — finite-sample checks of the defining axioms (B1–B4,
//!   θ1–θ3, ζ1–ζ3) with violation witnesses;
//! * [`contraction`] — sampled (modified) Z-contraction margins and the
//!   contractivity consequence;
//! * [`picard`] — the iteration itself plus asymptotic-regularity, Cauchy
//!   and uniqueness diagnostics.
//!
//! Everything is immutable after construction, deterministic given a
//! [`sample::SamplePlan`], and safe to share across threads.

pub mod catalog;
pub mod contraction;
pub mod error;
pub mod picard;
pub mod sample;
pub mod space;
pub mod verify;

pub use catalog::{
    make_aux, make_b_action, make_self_map, make_simulation, AuxFunction, SelfMap,
    SimulationFunction, B_ACTION_KINDS, SIMULATION_KINDS_NO_PARAMS,
};
pub use contraction::{
    contractivity_check, m_value, modified_z_margin, z_margin, MarginReport, MarginVerdict,
};
pub use error::{Error, Result};
pub use picard::{
    asymptotic_regularity, cauchy_diagnostic, picard_iterate, uniqueness_from_results,
    uniqueness_probe, FixedPointResult, PicardTrace, RegularityReport, SolveStatus,
    UniquenessReport, DEFAULT_MAX_ITER, DEFAULT_TOL, UNIQUENESS_FACTOR,
};
pub use sample::SamplePlan;
pub use space::{
    BAction, DistanceFn, DistanceTable, Point, PointDomain, ThetaMetricSpace, EPS_STRICT, EPS_TOL,
};
pub use verify::{
    check_b_action, check_simulation, check_theta_metric, zeta3_tail_maxima, AxiomCheck, AxiomId,
    AxiomReport, SequencePlan, Verdict, Witness, WitnessValue,
};
