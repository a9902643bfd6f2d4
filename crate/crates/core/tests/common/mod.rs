//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use jamloc::{BoundaryObservation, NodeClass, Point2D};

pub fn euclid(a: Point2D, b: Point2D) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

pub fn mean_position(points: &[Point2D]) -> Point2D {
    let n = points.len() as f64;
    Point2D::new(
        points.iter().map(|p| p.x).sum::<f64>() / n,
        points.iter().map(|p| p.y).sum::<f64>() / n,
    )
}

/// Smallest circle among all pair-diameter and triple-circumscribed
/// candidates that covers every point.
pub fn brute_force_mec(pts: &[Point2D]) -> (Point2D, f64) {
    if pts.len() == 1 {
        return (pts[0], 0.0);
    }
    let mut candidates = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let c = Point2D::new((pts[i].x + pts[j].x) / 2.0, (pts[i].y + pts[j].y) / 2.0);
            candidates.push((c, euclid(c, pts[i]).max(euclid(c, pts[j]))));
            for k in j + 1..pts.len() {
                if let Some(c) = circumcenter(pts[i], pts[j], pts[k]) {
                    let r = euclid(c, pts[i]).max(euclid(c, pts[j])).max(euclid(c, pts[k]));
                    candidates.push((c, r));
                }
            }
        }
    }
    candidates
        .into_iter()
        .filter(|&(c, r)| pts.iter().all(|&q| euclid(c, q) <= r * (1.0 + 1e-12) + 1e-12))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("the diameter of the farthest pair covers the set")
}

/// Cramer's rule on the two bisector equations.
fn circumcenter(a: Point2D, b: Point2D, c: Point2D) -> Option<Point2D> {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let det = 2.0 * (bx * cy - by * cx);
    if det.abs() < 1e-12 {
        return None;
    }
    let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
    Some(Point2D::new(
        a.x + (cy * b2 - by * c2) / det,
        a.y + (bx * c2 - cx * b2) / det,
    ))
}

/// Class by distance: jammed strictly inside `radius - range` (or within
/// 1 cm), boundary on the closed band, unaffected beyond `radius`.
pub fn expected_class(d: f64, radius: f64, range: f64) -> NodeClass {
    if d < 0.01 || d < radius - range {
        NodeClass::Jammed
    } else if d <= radius {
        NodeClass::Boundary
    } else {
        NodeClass::Unaffected
    }
}

/// Rotation by `theta` about the origin followed by translation.
#[derive(Debug, Clone, Copy)]
pub struct RigidMotion {
    pub theta: f64,
    pub dx: f64,
    pub dy: f64,
}

impl RigidMotion {
    pub fn apply(&self, p: Point2D) -> Point2D {
        let (s, c) = self.theta.sin_cos();
        Point2D::new(c * p.x - s * p.y + self.dx, s * p.x + c * p.y + self.dy)
    }

    pub fn apply_all(&self, obs: &[BoundaryObservation]) -> Vec<BoundaryObservation> {
        obs.iter()
            .map(|o| BoundaryObservation {
                position: self.apply(o.position),
                ..*o
            })
            .collect()
    }
}
