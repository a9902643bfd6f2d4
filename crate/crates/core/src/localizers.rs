//! Jammer localizers over boundary observations.
//!
//! * **CL**: centroid of the boundary positions.
//! * **CJ**: center of the minimum enclosing circle of the boundary positions.
//! * **GJL**: take the longest boundary chord and the longest transverse one,
//!   shift each chord's perpendicular toward the endpoint that senses more
//!   power by an offset derived from the power difference, and intersect the
//!   two shifted perpendiculars.
//!
//! CL and CJ ignore received powers. GJL only looks at power *differences*
//! between chord endpoints, with path loss exponent 2 baked into the
//! amplitude ratio `k = 10^((P2 - P1) / 20)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, distance, line_intersection, min_enclosing_circle, perpendicular_at, Circle,
    Line, Point2D, Segment,
};
use crate::network::BoundaryObservation;

/// Default minimum angle between the two GJL chords, degrees.
pub const DEFAULT_MIN_ANGLE_DEG: f64 = 15.0;

/// Power differences are resolved to this many steps per dB before use.
///
/// Sensed power is only meaningful to far coarser precision, and working on
/// a grid makes GJL independent of the absolute power level down to the last
/// bit: shifting every reading by a constant perturbs differences by a few
/// ulps, which the rounding absorbs.
pub const POWER_STEPS_PER_DB: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "CL")]
    Cl,
    #[serde(rename = "CJ")]
    Cj,
    #[serde(rename = "GJL")]
    Gjl,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Cl => "CL",
            Method::Cj => "CJ",
            Method::Gjl => "GJL",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CL" => Ok(Method::Cl),
            "CJ" => Ok(Method::Cj),
            "GJL" => Ok(Method::Gjl),
            _ => Err(Error::config(format!("unknown method {s:?}"))),
        }
    }
}

/// How GJL turns a power difference into a perpendicular offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CompensationMode {
    /// `delta_l = k * d12 / (2 + k)`, the closed form as published.
    /// Note it gives `d12 / 3` for equal powers.
    #[serde(rename = "paper")]
    PaperEq8,
    /// `delta_l = (k - 1) * d12 / (k + 1)`: the offset that puts the
    /// perpendicular through the jammer when the chord passes through it.
    #[serde(rename = "geometric")]
    GeometricD0,
}

impl CompensationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompensationMode::PaperEq8 => "paper",
            CompensationMode::GeometricD0 => "geometric",
        }
    }
}

impl fmt::Display for CompensationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CompensationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CompensationMode::PaperEq8),
            "geometric" => Ok(CompensationMode::GeometricD0),
            _ => Err(Error::config(format!(
                "unknown GJL mode {s:?} (expected paper or geometric)"
            ))),
        }
    }
}

/// One compensated GJL chord. `low` senses less power than `high`
/// (ties: lower node id is `low`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordCompensation {
    pub low: BoundaryObservation,
    pub high: BoundaryObservation,
    pub d12: f64,
    pub k: f64,
    pub delta_l: f64,
    /// Position of the perpendicular's foot as a fraction of the chord,
    /// measured from `high` toward `low`.
    pub t: f64,
    pub compensated_line: Line,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GjlDiagnostics {
    pub mode: CompensationMode,
    pub chords: [ChordCompensation; 2],
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Diagnostics {
    Centroid { count: usize },
    CoveringCircle { circle: Circle, hull_vertices: usize },
    Gjl(GjlDiagnostics),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationEstimate {
    pub position: Point2D,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// Arithmetic mean of the observation positions.
pub fn centroid_localize(observations: &[BoundaryObservation]) -> Result<LocalizationEstimate> {
    if observations.is_empty() {
        return Err(Error::NoBoundaryNodes);
    }
    let n = observations.len() as f64;
    let (sx, sy) = observations
        .iter()
        .fold((0.0, 0.0), |(sx, sy), o| (sx + o.position.x, sy + o.position.y));
    Ok(LocalizationEstimate {
        position: Point2D::new(sx / n, sy / n),
        method: Method::Cl,
        diagnostics: Diagnostics::Centroid {
            count: observations.len(),
        },
    })
}

/// Center of the minimum enclosing circle of the observation positions,
/// computed over their convex hull.
pub fn cj_localize(observations: &[BoundaryObservation]) -> Result<LocalizationEstimate> {
    if observations.is_empty() {
        return Err(Error::NoBoundaryNodes);
    }
    let positions: Vec<Point2D> = observations.iter().map(|o| o.position).collect();
    let hull = convex_hull(&positions)?;
    let circle = min_enclosing_circle(&hull)?;
    Ok(LocalizationEstimate {
        position: circle.center,
        method: Method::Cj,
        diagnostics: Diagnostics::CoveringCircle {
            circle,
            hull_vertices: hull.len(),
        },
    })
}

/// A pair of observations, stored with the lower node id first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub first: BoundaryObservation,
    pub second: BoundaryObservation,
}

impl Chord {
    pub fn segment(&self) -> Result<Segment> {
        Segment::new(self.first.position, self.second.position)
    }

    pub fn length(&self) -> f64 {
        distance(self.first.position, self.second.position)
    }

    fn ids(&self) -> (u32, u32) {
        (self.first.node_id, self.second.node_id)
    }

    fn vector(&self) -> (f64, f64) {
        (
            self.second.position.x - self.first.position.x,
            self.second.position.y - self.first.position.y,
        )
    }
}

fn validate_min_angle(min_angle_deg: f64) -> Result<()> {
    if (0.0..=90.0).contains(&min_angle_deg) {
        Ok(())
    } else {
        Err(Error::config(format!(
            "min_angle_deg must lie in [0, 90], got {min_angle_deg}"
        )))
    }
}

/// Picks the two GJL chords.
///
/// The first chord is the farthest pair of boundary positions. The second is
/// the longest other pair whose direction differs from the first by at least
/// `min_angle_deg`; it may share one endpoint with the first. Equal lengths
/// are broken by the smaller `(id, id)` pair. Observations repeating an
/// earlier position are ignored.
pub fn select_chords(
    observations: &[BoundaryObservation],
    min_angle_deg: f64,
) -> Result<(Chord, Chord)> {
    validate_min_angle(min_angle_deg)?;
    let mut distinct: Vec<BoundaryObservation> = observations.to_vec();
    distinct.sort_by(|a, b| {
        a.position
            .lex_cmp(&b.position)
            .then(a.node_id.cmp(&b.node_id))
    });
    distinct.dedup_by(|later, earlier| later.position == earlier.position);
    if distinct.len() < 3 {
        return Err(Error::InsufficientBoundaryNodes {
            distinct: distinct.len(),
        });
    }
    distinct.sort_by_key(|o| o.node_id);

    let mut pairs: Vec<(f64, Chord)> = Vec::with_capacity(distinct.len() * (distinct.len() - 1) / 2);
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            let (dx, dy) = (b.position.x - a.position.x, b.position.y - a.position.y);
            pairs.push((
                dx * dx + dy * dy,
                Chord {
                    first: *a,
                    second: *b,
                },
            ));
        }
    }
    pairs.sort_by(|(la, ca), (lb, cb)| lb.total_cmp(la).then(ca.ids().cmp(&cb.ids())));

    let longest = pairs[0].1;
    let (ux, uy) = longest.vector();
    let min_sin = min_angle_deg.to_radians().sin();
    let transverse = pairs[1..].iter().map(|(_, c)| *c).find(|c| {
        let (vx, vy) = c.vector();
        let sin = (ux * vy - uy * vx).abs() / (ux.hypot(uy) * vx.hypot(vy));
        sin >= min_sin
    });
    match transverse {
        Some(second) => Ok((longest, second)),
        None => Err(Error::NoTransverseChord { min_angle_deg }),
    }
}

/// `P2 - P1` in dB, rounded to the [`POWER_STEPS_PER_DB`] grid.
pub fn power_difference(p1: f64, p2: f64) -> f64 {
    ((p2 - p1) * POWER_STEPS_PER_DB).round() / POWER_STEPS_PER_DB
}

/// Amplitude ratio `k = 10^((P2 - P1) / 20)`.
pub fn power_ratio(p1: f64, p2: f64) -> f64 {
    10f64.powf(power_difference(p1, p2) / 20.0)
}

/// Offset between the two foot distances, `delta_l = l1 - l2`, for a chord of
/// length `d12` whose endpoints sense `p1 <= p2` dBm.
pub fn compensation_delta(p1: f64, p2: f64, d12: f64, mode: CompensationMode) -> Result<f64> {
    if !(d12 > 0.0) || !d12.is_finite() {
        return Err(Error::DegenerateSegment);
    }
    Ok(delta_from_ratio(power_ratio(p1, p2), d12, mode))
}

fn delta_from_ratio(k: f64, d12: f64, mode: CompensationMode) -> f64 {
    if k.is_infinite() {
        return d12;
    }
    match mode {
        CompensationMode::PaperEq8 => k * d12 / (2.0 + k),
        CompensationMode::GeometricD0 => (k - 1.0) * d12 / (k + 1.0),
    }
}

fn compensate(chord: &Chord, mode: CompensationMode) -> Result<ChordCompensation> {
    let (a, b) = (chord.first, chord.second);
    let (low, high) = if power_difference(a.received_power, b.received_power) >= 0.0 {
        (a, b)
    } else {
        (b, a)
    };
    let d12 = distance(low.position, high.position);
    let k = power_ratio(low.received_power, high.received_power);
    let delta_l = compensation_delta(low.received_power, high.received_power, d12, mode)?;
    let t = (d12 - delta_l) / (2.0 * d12);
    let compensated_line = perpendicular_at(&Segment::new(high.position, low.position)?, t)?;
    Ok(ChordCompensation {
        low,
        high,
        d12,
        k,
        delta_l,
        t,
        compensated_line,
    })
}

/// Geometric jammer localization.
///
/// Fails with `InsufficientBoundaryNodes`, `NoTransverseChord` or
/// `NearParallelLines` when the chords do not pin down a point; see
/// [`localize`] for the CJ fallback.
pub fn gjl_localize(
    observations: &[BoundaryObservation],
    mode: CompensationMode,
    min_angle_deg: f64,
) -> Result<LocalizationEstimate> {
    if observations.is_empty() {
        return Err(Error::NoBoundaryNodes);
    }
    let (c1, c2) = select_chords(observations, min_angle_deg)?;
    let chords = [compensate(&c1, mode)?, compensate(&c2, mode)?];
    let position = line_intersection(&chords[0].compensated_line, &chords[1].compensated_line)?;
    Ok(LocalizationEstimate {
        position,
        method: Method::Gjl,
        diagnostics: Diagnostics::Gjl(GjlDiagnostics { mode, chords }),
    })
}

/// Euclidean distance between an estimate and the true jammer position.
pub fn localization_error(estimate: &LocalizationEstimate, truth: Point2D) -> f64 {
    distance(estimate.position, truth)
}

/// A localizer as run by the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Cl,
    Cj,
    Gjl(CompensationMode),
}

impl Estimator {
    pub fn method(&self) -> Method {
        match self {
            Estimator::Cl => Method::Cl,
            Estimator::Cj => Method::Cj,
            Estimator::Gjl(_) => Method::Gjl,
        }
    }

    pub fn mode(&self) -> Option<CompensationMode> {
        match self {
            Estimator::Gjl(mode) => Some(*mode),
            _ => None,
        }
    }

    /// `mode` column value in CSV output; `none` for CL and CJ.
    pub fn mode_label(&self) -> &'static str {
        self.mode().map_or("none", |m| m.as_str())
    }

    pub fn label(&self) -> String {
        match self {
            Estimator::Gjl(mode) => format!("GJL({mode})"),
            other => other.method().to_string(),
        }
    }
}

/// Estimate plus the GJL error that triggered a CJ fallback, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub estimate: LocalizationEstimate,
    pub fallback: Option<Error>,
}

/// Runs `estimator`, answering GJL's typed failures with CJ. Total for any
/// non-empty observation list.
pub fn localize(
    estimator: Estimator,
    observations: &[BoundaryObservation],
    min_angle_deg: f64,
) -> Result<Outcome> {
    match estimator {
        Estimator::Cl => centroid_localize(observations).map(|estimate| Outcome {
            estimate,
            fallback: None,
        }),
        Estimator::Cj => cj_localize(observations).map(|estimate| Outcome {
            estimate,
            fallback: None,
        }),
        Estimator::Gjl(mode) => match gjl_localize(observations, mode, min_angle_deg) {
            Ok(estimate) => Ok(Outcome {
                estimate,
                fallback: None,
            }),
            Err(e) if e.is_gjl_fallback() => Ok(Outcome {
                estimate: cj_localize(observations)?,
                fallback: Some(e),
            }),
            Err(e) => Err(e),
        },
    }
}
