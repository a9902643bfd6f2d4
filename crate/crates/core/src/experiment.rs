//! Seeded Monte Carlo harness.
//!
//! Trial `i` of a scenario draws everything (node layout, jammer position,
//! shadowing) from streams keyed by [`trial_seed`]`(master_seed, i)`, so a
//! trial's outcome does not depend on how many trials run or in what order.
//! `field.placement_seed` in a [`ScenarioConfig`] is replaced per trial.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::localizers::{
    localize, localization_error, CompensationMode, Estimator, Method, Outcome,
    DEFAULT_MIN_ANGLE_DEG,
};
use crate::network::{
    classify_nodes, generate_field, observe_boundary, place_jammer, BoundaryObservation,
    FieldConfig, Jammer, Node, NodeClass, NodeId, PlacementPolicy,
};
use crate::propagation::RadioParams;
use crate::seed::{stream_rng, stream_seed, trial_seed, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub field: FieldConfig,
    pub radio: RadioParams,
    pub jammer_radius: f64,
    pub placement_policy: PlacementPolicy,
    pub methods: Vec<Method>,
    pub gjl_mode: CompensationMode,
    pub min_angle_deg: f64,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            field: FieldConfig::default(),
            radio: RadioParams::default(),
            jammer_radius: 30.0,
            placement_policy: PlacementPolicy::Center,
            methods: vec![Method::Cl, Method::Cj, Method::Gjl],
            gjl_mode: CompensationMode::PaperEq8,
            min_angle_deg: DEFAULT_MIN_ANGLE_DEG,
            trials: 500,
            master_seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.radio.validate()?;
        if !(self.jammer_radius > self.radio.node_comm_range) || !self.jammer_radius.is_finite() {
            return Err(Error::config(format!(
                "jammer_radius {} must exceed node_comm_range {}",
                self.jammer_radius, self.radio.node_comm_range
            )));
        }
        if let PlacementPolicy::Fixed(p) = self.placement_policy {
            if !p.is_finite() {
                return Err(Error::NonFinitePoint { x: p.x, y: p.y });
            }
        }
        if self.methods.is_empty() {
            return Err(Error::config("at least one method is required"));
        }
        if !(0.0..=90.0).contains(&self.min_angle_deg) {
            return Err(Error::config(format!(
                "min_angle_deg must lie in [0, 90], got {}",
                self.min_angle_deg
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        Ok(())
    }

    /// Enabled estimators in CL, CJ, GJL order.
    pub fn estimators(&self) -> Vec<Estimator> {
        let mut methods = self.methods.clone();
        methods.sort();
        methods.dedup();
        methods
            .into_iter()
            .map(|m| match m {
                Method::Cl => Estimator::Cl,
                Method::Cj => Estimator::Cj,
                Method::Gjl => Estimator::Gjl(self.gjl_mode),
            })
            .collect()
    }
}

/// Everything one trial produced, for snapshot export.
#[derive(Debug, Clone)]
pub struct TrialSnapshot {
    pub trial_index: u64,
    pub seed: u64,
    pub jammer: Jammer,
    pub nodes: Vec<Node>,
    pub classes: BTreeMap<NodeId, NodeClass>,
    pub observations: Vec<BoundaryObservation>,
    /// `None` when the estimator could not run (no boundary nodes).
    pub outcomes: Vec<(Estimator, Option<Outcome>)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialStatus {
    Clean { estimate: Point2D, error: f64 },
    /// GJL could not resolve two chords; CJ's estimate stands in.
    Fallback { estimate: Point2D, error: f64 },
    Failure,
}

impl TrialStatus {
    pub fn error(&self) -> Option<f64> {
        match self {
            TrialStatus::Clean { error, .. } | TrialStatus::Fallback { error, .. } => Some(*error),
            TrialStatus::Failure => None,
        }
    }

    pub fn estimate(&self) -> Option<Point2D> {
        match self {
            TrialStatus::Clean { estimate, .. } | TrialStatus::Fallback { estimate, .. } => {
                Some(*estimate)
            }
            TrialStatus::Failure => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TrialStatus::Clean { .. } => "clean",
            TrialStatus::Fallback { .. } => "fallback",
            TrialStatus::Failure => "failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub jammer_truth: Point2D,
    pub boundary_count: usize,
    pub results: Vec<(Estimator, TrialStatus)>,
}

impl TrialSnapshot {
    pub fn record(&self) -> TrialRecord {
        let truth = self.jammer.position;
        let results = self
            .outcomes
            .iter()
            .map(|(est, outcome)| {
                let status = match outcome {
                    None => TrialStatus::Failure,
                    Some(o) => {
                        let estimate = o.estimate.position;
                        let error = localization_error(&o.estimate, truth);
                        if o.fallback.is_some() {
                            TrialStatus::Fallback { estimate, error }
                        } else {
                            TrialStatus::Clean { estimate, error }
                        }
                    }
                };
                (*est, status)
            })
            .collect();
        TrialRecord {
            trial_index: self.trial_index,
            jammer_truth: truth,
            boundary_count: self.observations.len(),
            results,
        }
    }
}

/// Generates, classifies, observes and localizes trial `trial_index`.
pub fn simulate_trial(
    config: &ScenarioConfig,
    estimators: &[Estimator],
    trial_index: u64,
) -> Result<TrialSnapshot> {
    config.validate()?;
    let seed = trial_seed(config.master_seed, trial_index);
    let field = FieldConfig {
        placement_seed: stream_seed(seed, Stream::Placement),
        ..config.field
    };
    let nodes = generate_field(&field)?;
    let position = place_jammer(
        &config.placement_policy,
        field.width,
        field.height,
        &mut stream_rng(seed, Stream::Jammer),
    );
    let jammer = Jammer::new(position, config.jammer_radius, config.radio)?;
    let classes = classify_nodes(&nodes, &jammer);
    let observations = observe_boundary(&nodes, &jammer, &mut stream_rng(seed, Stream::Shadowing));
    let outcomes = estimators
        .iter()
        .map(|est| {
            let outcome = if observations.is_empty() {
                None
            } else {
                localize(*est, &observations, config.min_angle_deg).ok()
            };
            (*est, outcome)
        })
        .collect();
    Ok(TrialSnapshot {
        trial_index,
        seed,
        jammer,
        nodes,
        classes,
        observations,
        outcomes,
    })
}

/// One trial with the config's own estimators.
pub fn run_trial(config: &ScenarioConfig, trial_index: u64) -> Result<TrialRecord> {
    Ok(simulate_trial(config, &config.estimators(), trial_index)?.record())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSummary {
    pub estimator: Estimator,
    pub trials: usize,
    pub clean: usize,
    pub fallbacks: usize,
    pub failures: usize,
    /// Statistics over non-failed trials; `None` when every trial failed.
    pub mean_error: Option<f64>,
    /// Sample standard deviation (n - 1 denominator; 0 for a single trial).
    pub std_error: Option<f64>,
    pub median_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryStats {
    pub rows: Vec<EstimatorSummary>,
}

impl SummaryStats {
    pub fn from_records(estimators: &[Estimator], records: &[TrialRecord]) -> Self {
        let rows = estimators
            .iter()
            .map(|est| summarize(*est, records))
            .collect();
        SummaryStats { rows }
    }

    pub fn get(&self, estimator: Estimator) -> Option<&EstimatorSummary> {
        self.rows.iter().find(|r| r.estimator == estimator)
    }
}

fn summarize(estimator: Estimator, records: &[TrialRecord]) -> EstimatorSummary {
    let mut errors = Vec::with_capacity(records.len());
    let (mut clean, mut fallbacks, mut failures) = (0, 0, 0);
    for record in records {
        let Some((_, status)) = record.results.iter().find(|(e, _)| *e == estimator) else {
            continue;
        };
        match status {
            TrialStatus::Clean { error, .. } => {
                clean += 1;
                errors.push(*error);
            }
            TrialStatus::Fallback { error, .. } => {
                fallbacks += 1;
                errors.push(*error);
            }
            TrialStatus::Failure => failures += 1,
        }
    }
    let (mean_error, std_error, median_error) = if errors.is_empty() {
        (None, None, None)
    } else {
        let n = errors.len() as f64;
        let mean = errors.iter().sum::<f64>() / n;
        let std = if errors.len() > 1 {
            (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        errors.sort_by(f64::total_cmp);
        let mid = errors.len() / 2;
        let median = if errors.len() % 2 == 1 {
            errors[mid]
        } else {
            (errors[mid - 1] + errors[mid]) / 2.0
        };
        (Some(mean), Some(std), Some(median))
    };
    EstimatorSummary {
        estimator,
        trials: clean + fallbacks + failures,
        clean,
        fallbacks,
        failures,
        mean_error,
        std_error,
        median_error,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub summary: SummaryStats,
}

/// Runs `config.trials` trials of `estimators`, ordered by trial index.
pub fn run_experiment_with(
    config: &ScenarioConfig,
    estimators: &[Estimator],
    execution: Execution,
) -> Result<ExperimentResult> {
    config.validate()?;
    let trial = |i: usize| simulate_trial(config, estimators, i as u64).map(|s| s.record());
    let records: Vec<TrialRecord> = match execution {
        Execution::Serial => (0..config.trials).map(trial).collect::<Result<_>>()?,
        Execution::Parallel => (0..config.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<_>>()?,
    };
    let summary = SummaryStats::from_records(estimators, &records);
    Ok(ExperimentResult { records, summary })
}

pub fn run_experiment(config: &ScenarioConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, &config.estimators(), Execution::Parallel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Density,
    Region,
    Radius,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Density => "density",
            SweepAxis::Region => "region",
            SweepAxis::Radius => "radius",
        }
    }

    /// Parses one sweep value for this axis.
    pub fn parse_value(&self, s: &str) -> Result<SweepValue> {
        let s = s.trim();
        match self {
            SweepAxis::Density => s
                .parse::<usize>()
                .map(SweepValue::Density)
                .map_err(|_| Error::config(format!("invalid node count {s:?}"))),
            SweepAxis::Region => s.parse::<PlacementPolicy>().map(SweepValue::Region),
            SweepAxis::Radius => s
                .parse::<f64>()
                .map(SweepValue::Radius)
                .map_err(|_| Error::config(format!("invalid radius {s:?}"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(SweepAxis::Density),
            "region" => Ok(SweepAxis::Region),
            "radius" => Ok(SweepAxis::Radius),
            _ => Err(Error::config(format!(
                "unknown sweep axis {s:?} (expected density, region or radius)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepValue {
    Density(usize),
    Region(PlacementPolicy),
    Radius(f64),
}

impl SweepValue {
    pub fn axis(&self) -> SweepAxis {
        match self {
            SweepValue::Density(_) => SweepAxis::Density,
            SweepValue::Region(_) => SweepAxis::Region,
            SweepValue::Radius(_) => SweepAxis::Radius,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SweepValue::Density(n) => n.to_string(),
            SweepValue::Region(p) => p.name(),
            SweepValue::Radius(r) => format!("{r:.6}"),
        }
    }

    /// `base` with this value substituted.
    pub fn apply(&self, base: &ScenarioConfig) -> ScenarioConfig {
        let mut config = base.clone();
        match *self {
            SweepValue::Density(n) => config.field.node_count = n,
            SweepValue::Region(p) => config.placement_policy = p,
            SweepValue::Radius(r) => config.jammer_radius = r,
        }
        config
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: SweepValue,
    pub summary: EstimatorSummary,
}

/// One experiment per value with everything else held fixed.
pub fn sweep(base: &ScenarioConfig, axis: SweepAxis, values: &[SweepValue]) -> Result<Vec<SweepRow>> {
    sweep_with(base, axis, values, &base.estimators(), Execution::Parallel)
}

pub fn sweep_with(
    base: &ScenarioConfig,
    axis: SweepAxis,
    values: &[SweepValue],
    estimators: &[Estimator],
    execution: Execution,
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::config("sweep needs at least one value"));
    }
    if let Some(v) = values.iter().find(|v| v.axis() != axis) {
        return Err(Error::config(format!(
            "value {} does not belong to the {axis} axis",
            v.label()
        )));
    }
    let configs: Vec<ScenarioConfig> = values.iter().map(|v| v.apply(base)).collect();
    for c in &configs {
        c.validate()?;
    }
    let mut rows = Vec::with_capacity(values.len() * estimators.len());
    for (value, config) in values.iter().zip(&configs) {
        let result = run_experiment_with(config, estimators, execution)?;
        rows.extend(result.summary.rows.into_iter().map(|summary| SweepRow {
            axis,
            value: *value,
            summary,
        }));
    }
    Ok(rows)
}
