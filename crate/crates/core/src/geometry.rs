//! Planar primitives used by the localizers: distances, convex hull, minimum
//! enclosing circle, perpendicular lines and line intersection.
//!
//! Coordinates are meters. Fields are O(100) m, so a fixed absolute tolerance
//! of [`TOLERANCE`] leaves plenty of headroom in double precision.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::mix64;

/// Containment and intersection tolerance, meters.
pub const TOLERANCE: f64 = 1e-9;

/// Lines whose unit normals satisfy `|sin angle| < PARALLEL_SIN` do not intersect.
pub const PARALLEL_SIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        distance(*self, *other)
    }

    /// Point at `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point2D, t: f64) -> Point2D {
        Point2D::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    fn sub(&self, other: &Point2D) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    /// Lexicographic total order on (x, y).
    pub fn lex_cmp(&self, other: &Point2D) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl From<(f64, f64)> for Point2D {
    fn from((x, y): (f64, f64)) -> Self {
        Point2D::new(x, y)
    }
}

/// Euclidean distance.
pub fn distance(p: Point2D, q: Point2D) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Cross product of `(a - o)` and `(b - o)`; positive when `o, a, b` turn left.
pub fn cross(o: Point2D, a: Point2D, b: Point2D) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point2D,
    b: Point2D,
}

impl Segment {
    pub fn new(a: Point2D, b: Point2D) -> Result<Self> {
        for p in [a, b] {
            if !p.is_finite() {
                return Err(Error::NonFinitePoint { x: p.x, y: p.y });
            }
        }
        if distance(a, b) <= 0.0 {
            return Err(Error::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> Point2D {
        self.a
    }

    pub fn b(&self) -> Point2D {
        self.b
    }

    pub fn length(&self) -> f64 {
        distance(self.a, self.b)
    }

    pub fn midpoint(&self) -> Point2D {
        self.a.lerp(&self.b, 0.5)
    }

    /// Unit direction from `a` to `b`.
    pub fn direction(&self) -> (f64, f64) {
        let (dx, dy) = self.b.sub(&self.a);
        let len = dx.hypot(dy);
        (dx / len, dy / len)
    }
}

/// Line `alpha * x + beta * y + gamma = 0`, stored with `alpha^2 + beta^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl Line {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let norm = alpha.hypot(beta);
        if !(norm > 0.0) || !norm.is_finite() || !gamma.is_finite() {
            return Err(Error::DegenerateLine { alpha, beta });
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
            gamma: gamma / norm,
        })
    }

    /// Line through `point` with the given normal vector.
    pub fn through_with_normal(point: Point2D, normal: (f64, f64)) -> Result<Self> {
        Line::new(normal.0, normal.1, -(normal.0 * point.x + normal.1 * point.y))
    }

    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.alpha, self.beta, self.gamma)
    }

    /// Unit direction vector along the line.
    pub fn direction(&self) -> (f64, f64) {
        (-self.beta, self.alpha)
    }

    /// Signed distance of `p` from the line.
    pub fn signed_distance(&self, p: Point2D) -> f64 {
        self.alpha * p.x + self.beta * p.y + self.gamma
    }

    /// Foot of the perpendicular from the origin, i.e. some point on the line.
    pub fn anchor(&self) -> Point2D {
        Point2D::new(-self.gamma * self.alpha, -self.gamma * self.beta)
    }

    /// Point at signed arc length `s` from [`Line::anchor`].
    pub fn point_at(&self, s: f64) -> Point2D {
        let (dx, dy) = self.direction();
        let o = self.anchor();
        Point2D::new(o.x + s * dx, o.y + s * dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Self { center, radius }
    }

    pub fn contains(&self, p: Point2D, tolerance: f64) -> bool {
        distance(self.center, p) <= self.radius + tolerance
    }

    fn from_diameter(a: Point2D, b: Point2D) -> Circle {
        let center = a.lerp(&b, 0.5);
        let radius = distance(center, a).max(distance(center, b));
        Circle { center, radius }
    }

    /// Circumscribed circle, or `None` when the three points are collinear.
    fn circumscribed(a: Point2D, b: Point2D, c: Point2D) -> Option<Circle> {
        let (bx, by) = b.sub(&a);
        let (cx, cy) = c.sub(&a);
        let det = 2.0 * (bx * cy - by * cx);
        let scale = bx.hypot(by) * cx.hypot(cy);
        if det.abs() <= 1e-14 * scale || det == 0.0 {
            return None;
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / det;
        let uy = (bx * c2 - cx * b2) / det;
        let center = Point2D::new(a.x + ux, a.y + uy);
        let radius = distance(center, a)
            .max(distance(center, b))
            .max(distance(center, c));
        Some(Circle { center, radius })
    }

    /// Smallest circle with all three points on or inside it.
    fn from_three(a: Point2D, b: Point2D, c: Point2D) -> Circle {
        match Circle::circumscribed(a, b, c) {
            Some(circle) => circle,
            None => {
                // collinear: the farthest pair spans the set
                let candidates = [(a, b), (a, c), (b, c)];
                let (p, q) = candidates
                    .into_iter()
                    .max_by(|l, r| distance(l.0, l.1).total_cmp(&distance(r.0, r.1)))
                    .expect("three candidates");
                Circle::from_diameter(p, q)
            }
        }
    }
}

fn check_finite(points: &[Point2D]) -> Result<()> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(Error::NonFinitePoint { x: p.x, y: p.y }),
        None => Ok(()),
    }
}

/// Sorted, deduplicated copy of `points`.
fn canonical(points: &[Point2D]) -> Vec<Point2D> {
    let mut pts = points.to_vec();
    pts.sort_by(Point2D::lex_cmp);
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    pts
}

/// Convex hull by Andrew's monotone chain.
///
/// Vertices come back counter-clockwise starting from the lexicographically
/// smallest point, with duplicates and collinear edge points removed. A
/// collinear input degenerates to its two extreme points.
pub fn convex_hull(points: &[Point2D]) -> Result<Vec<Point2D>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_finite(points)?;
    let pts = canonical(points);
    if pts.len() < 3 {
        return Ok(pts);
    }

    let mut hull: Vec<Point2D> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Ok(hull)
}

/// Minimum enclosing circle (Welzl, iterative randomized incremental form).
///
/// Input order does not matter: points are sorted and deduplicated, then
/// shuffled with a seed hashed from the sorted coordinates, so the result is a
/// pure function of the point set.
pub fn min_enclosing_circle(points: &[Point2D]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_finite(points)?;
    let mut pts = canonical(points);

    let seed = pts.iter().fold(0x6a09_e667_f3bc_c908_u64, |acc, p| {
        mix64(mix64(acc ^ p.x.to_bits()) ^ p.y.to_bits())
    });
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let outside = |c: &Circle, p: Point2D| distance(c.center, p) > c.radius * (1.0 + 1e-14);

    let mut circle = Circle::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if !outside(&circle, pts[i]) {
            continue;
        }
        circle = Circle::new(pts[i], 0.0);
        for j in 0..i {
            if !outside(&circle, pts[j]) {
                continue;
            }
            circle = Circle::from_diameter(pts[i], pts[j]);
            for k in 0..j {
                if outside(&circle, pts[k]) {
                    circle = Circle::from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Ok(circle)
}

/// Line orthogonal to `s` through `s.a + t * (s.b - s.a)`.
pub fn perpendicular_at(s: &Segment, t: f64) -> Result<Line> {
    if !t.is_finite() {
        return Err(Error::config(format!("perpendicular offset {t} is not finite")));
    }
    let (dx, dy) = s.b.sub(&s.a);
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::DegenerateSegment);
    }
    Line::through_with_normal(s.a.lerp(&s.b, t), (dx, dy))
}

/// Perpendicular bisector of `s`.
pub fn perpendicular_bisector(s: &Segment) -> Result<Line> {
    perpendicular_at(s, 0.5)
}

/// Unique intersection of two lines.
pub fn line_intersection(l1: &Line, l2: &Line) -> Result<Point2D> {
    let det = l1.alpha * l2.beta - l2.alpha * l1.beta;
    if !(det.abs() >= PARALLEL_SIN) {
        return Err(Error::NearParallelLines { sin_angle: det.abs() });
    }
    let x = (l1.beta * l2.gamma - l2.beta * l1.gamma) / det;
    let y = (l2.alpha * l1.gamma - l1.alpha * l2.gamma) / det;
    Ok(Point2D::new(x, y))
}
