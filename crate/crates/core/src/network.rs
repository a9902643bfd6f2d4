//! Sensor field generation, jammer placement and distance-based node
//! classification.
//!
//! A node at distance `d` from the jammer is
//! * `Jammed` when `d < R_J - r_n`,
//! * `Boundary` when `R_J - r_n <= d <= R_J`,
//! * `Unaffected` when `d > R_J`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Point2D};
use crate::propagation::{received_power, RadioParams, MIN_DISTANCE};

pub type NodeId = u32;

/// Side of the square region used by the `center` and `corner` policies, m.
pub const REGION_SIDE: f64 = 20.0;
/// Depth of the band used by the `edge` policy, m.
pub const EDGE_BAND_DEPTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub position: Point2D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jammer {
    pub position: Point2D,
    pub radius: f64,
    pub radio: RadioParams,
}

impl Jammer {
    pub fn new(position: Point2D, radius: f64, radio: RadioParams) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::NonFinitePoint {
                x: position.x,
                y: position.y,
            });
        }
        radio.validate()?;
        if !(radius > radio.node_comm_range) || !radius.is_finite() {
            return Err(Error::config(format!(
                "jamming radius {radius} must exceed the node range {}",
                radio.node_comm_range
            )));
        }
        Ok(Self {
            position,
            radius,
            radio,
        })
    }

    /// Inner radius of the boundary band, `R_J - r_n`.
    pub fn inner_radius(&self) -> f64 {
        self.radius - self.radio.node_comm_range
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    Unaffected,
    Boundary,
    Jammed,
}

impl NodeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeClass::Unaffected => "unaffected",
            NodeClass::Boundary => "boundary",
            NodeClass::Jammed => "jammed",
        }
    }
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unaffected" => Ok(NodeClass::Unaffected),
            "boundary" => Ok(NodeClass::Boundary),
            "jammed" => Ok(NodeClass::Jammed),
            other => Err(Error::config(format!("unknown node class {other:?}"))),
        }
    }
}

/// A boundary node's position and the jamming power it senses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryObservation {
    pub node_id: NodeId,
    pub position: Point2D,
    /// dBm
    pub received_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub width: f64,
    pub height: f64,
    pub node_count: usize,
    #[serde(default)]
    pub placement_seed: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            width: 100.0,
            height: 100.0,
            node_count: 100,
            placement_seed: 0,
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite())
            || !(self.height > 0.0 && self.height.is_finite())
        {
            return Err(Error::config(format!(
                "field must have positive finite size, got {} x {}",
                self.width, self.height
            )));
        }
        if self.node_count == 0 {
            return Err(Error::config("node_count must be at least 1"));
        }
        if self.node_count > NodeId::MAX as usize {
            return Err(Error::config("node_count does not fit a node id"));
        }
        Ok(())
    }
}

/// Where the jammer is dropped in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementPolicy {
    /// Uniform in the central `REGION_SIDE` square.
    Center,
    /// Uniform in a band `EDGE_BAND_DEPTH` deep along the bottom side (`y = 0`).
    Edge,
    /// Uniform in the `REGION_SIDE` square at the origin corner.
    Corner,
    Fixed(Point2D),
}

impl PlacementPolicy {
    pub fn name(&self) -> String {
        match self {
            PlacementPolicy::Center => "center".into(),
            PlacementPolicy::Edge => "edge".into(),
            PlacementPolicy::Corner => "corner".into(),
            PlacementPolicy::Fixed(p) => format!("fixed({:.6};{:.6})", p.x, p.y),
        }
    }
}

impl FromStr for PlacementPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "center" => Ok(PlacementPolicy::Center),
            "edge" => Ok(PlacementPolicy::Edge),
            "corner" => Ok(PlacementPolicy::Corner),
            other => Err(Error::config(format!(
                "unknown region {other:?} (expected center, edge or corner)"
            ))),
        }
    }
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Draws a jammer position for `policy` inside a `width x height` field.
/// Regions larger than the field are clipped to it.
pub fn place_jammer<R: Rng + ?Sized>(
    policy: &PlacementPolicy,
    width: f64,
    height: f64,
    rng: &mut R,
) -> Point2D {
    let half = REGION_SIDE / 2.0;
    match policy {
        PlacementPolicy::Center => {
            let (cx, cy) = (width / 2.0, height / 2.0);
            let x = uniform_in(rng, (cx - half).max(0.0), (cx + half).min(width));
            let y = uniform_in(rng, (cy - half).max(0.0), (cy + half).min(height));
            Point2D::new(x, y)
        }
        PlacementPolicy::Edge => {
            let x = uniform_in(rng, 0.0, width);
            let y = uniform_in(rng, 0.0, EDGE_BAND_DEPTH.min(height));
            Point2D::new(x, y)
        }
        PlacementPolicy::Corner => {
            let x = uniform_in(rng, 0.0, REGION_SIDE.min(width));
            let y = uniform_in(rng, 0.0, REGION_SIDE.min(height));
            Point2D::new(x, y)
        }
        PlacementPolicy::Fixed(p) => *p,
    }
}

/// `node_count` nodes i.i.d. uniform over `[0, width) x [0, height)`, ids `0..n`.
pub fn generate_field(config: &FieldConfig) -> Result<Vec<Node>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.placement_seed);
    Ok((0..config.node_count)
        .map(|i| Node {
            id: i as NodeId,
            position: Point2D::new(
                rng.gen_range(0.0..config.width),
                rng.gen_range(0.0..config.height),
            ),
        })
        .collect())
}

/// Class of a node at distance `d` from `jammer`.
pub fn classify_distance(d: f64, jammer: &Jammer) -> NodeClass {
    if d < MIN_DISTANCE || d < jammer.inner_radius() {
        NodeClass::Jammed
    } else if d <= jammer.radius {
        NodeClass::Boundary
    } else {
        NodeClass::Unaffected
    }
}

pub fn classify_node(node: &Node, jammer: &Jammer) -> NodeClass {
    classify_distance(distance(node.position, jammer.position), jammer)
}

pub fn classify_nodes(nodes: &[Node], jammer: &Jammer) -> BTreeMap<NodeId, NodeClass> {
    nodes
        .iter()
        .map(|n| (n.id, classify_node(n, jammer)))
        .collect()
}

/// One observation per boundary node, in input order. Each draws its
/// shadowing term from `rng`.
pub fn observe_boundary<R: Rng + ?Sized>(
    nodes: &[Node],
    jammer: &Jammer,
    rng: &mut R,
) -> Vec<BoundaryObservation> {
    nodes
        .iter()
        .filter_map(|n| {
            let d = distance(n.position, jammer.position);
            if classify_distance(d, jammer) != NodeClass::Boundary {
                return None;
            }
            let sample = received_power(&jammer.radio, d, rng)
                .expect("boundary nodes sit beyond the propagation floor");
            Some(BoundaryObservation {
                node_id: n.id,
                position: n.position,
                received_power: sample.received,
            })
        })
        .collect()
}
