//! Jammer localization for wireless sensor fields.
//!
//! Sensors within the jamming disc of radius `R_J` that can still reach the
//! outside (the band `[R_J - r_n, R_J]`) report their position and sensed
//! jamming power. Three localizers turn those boundary observations into a
//! jammer position estimate:
//!
//! * [`centroid_localize`]: mean boundary position,
//! * [`cj_localize`]: center of the minimum enclosing circle,
//! * [`gjl_localize`]: intersection of two power-compensated chord
//!   perpendiculars.
//!
//! [`experiment`] runs seeded Monte Carlo comparisons of the three over random
//! fields with log-normal shadowing.

// `!(x > 0.0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod localizers;
pub mod network;
pub mod propagation;
pub mod report;
pub mod seed;

pub use error::{Error, Result};
pub use experiment::{
    run_experiment, run_experiment_with, run_trial, simulate_trial, sweep, sweep_with,
    EstimatorSummary, Execution, ExperimentResult, ScenarioConfig, SummaryStats, SweepAxis,
    SweepRow, SweepValue, TrialRecord, TrialSnapshot, TrialStatus,
};
pub use geometry::{
    convex_hull, distance, line_intersection, min_enclosing_circle, perpendicular_at,
    perpendicular_bisector, Circle, Line, Point2D, Segment,
};
pub use localizers::{
    centroid_localize, cj_localize, compensation_delta, gjl_localize, localization_error,
    localize, select_chords, ChordCompensation, CompensationMode, Diagnostics, Estimator,
    LocalizationEstimate, Method, Outcome,
};
pub use network::{
    classify_nodes, generate_field, observe_boundary, BoundaryObservation, FieldConfig, Jammer,
    Node, NodeClass, NodeId, PlacementPolicy,
};
pub use propagation::{path_loss_power, received_power, PowerSample, RadioParams};
