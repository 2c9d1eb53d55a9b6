use super::{orient2d, GeomError, OrientedPolygon, Point2};

/// Signed side of `p` relative to the directed line `a → b`, evaluated with
/// the line endpoints in a fixed order so reversing the line flips the sign
/// exactly.
fn side(a: Point2, b: Point2, p: Point2) -> f64 {
    if (a.x, a.y) <= (b.x, b.y) {
        orient2d(a, b, p)
    } else {
        -orient2d(b, a, p)
    }
}

/// Crossing of segment `p q` with a line, given the sides `dp`, `dq` of its
/// endpoints. The endpoints are ordered first so both sides of a shared edge
/// produce the same point.
fn line_crossing(p: Point2, q: Point2, dp: f64, dq: f64) -> Point2 {
    let (p, q, dp, dq) = if (p.x, p.y) <= (q.x, q.y) {
        (p, q, dp, dq)
    } else {
        (q, p, dq, dp)
    };
    p.lerp(q, dp / (dp - dq))
}

/// Keep the part of `subject` to the left of the directed line `a → b`.
///
/// Works for self-intersecting loops too: the winding-number integral of
/// the output equals that of the input restricted to the half-plane.
fn clip_halfplane(subject: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let n = subject.len();
    let sides: Vec<f64> = subject.iter().map(|&p| side(a, b, p)).collect();
    let mut out = Vec::with_capacity(n + 2);
    for k in 0..n {
        let next = (k + 1) % n;
        let cur_in = sides[k] >= 0.0;
        let next_in = sides[next] >= 0.0;
        if cur_in {
            out.push(subject[k]);
        }
        if cur_in != next_in {
            out.push(line_crossing(subject[k], subject[next], sides[k], sides[next]));
        }
    }
    out
}

/// Sutherland–Hodgman clip of convex counterclockwise `p` against convex
/// counterclockwise `q`. Returns `p ∩ q` (possibly empty).
pub fn clip_convex(p: &OrientedPolygon, q: &OrientedPolygon) -> Result<OrientedPolygon, GeomError> {
    if p.vertices.iter().chain(&q.vertices).any(|v| !v.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    if !p.is_convex_ccw() || !q.is_convex_ccw() {
        return Err(GeomError::NonConvexInput);
    }
    let mut out = p.vertices.clone();
    let m = q.len();
    for k in 0..m {
        if out.is_empty() {
            break;
        }
        out = clip_halfplane(&out, q.vertices[k], q.vertices[(k + 1) % m]);
    }
    Ok(OrientedPolygon::new(out))
}

/// Restrict an arbitrary loop to a counterclockwise triangle. The signed
/// area of the result is `∫_triangle winding(loop)`.
pub fn clip_to_triangle(subject: &OrientedPolygon, tri: [Point2; 3]) -> OrientedPolygon {
    let mut out = subject.vertices.clone();
    for k in 0..3 {
        if out.is_empty() {
            break;
        }
        out = clip_halfplane(&out, tri[k], tri[(k + 1) % 3]);
    }
    OrientedPolygon::new(out)
}

/// Split a simple counterclockwise quadrilateral along an interior diagonal.
pub(crate) fn triangulate_quad(q: [Point2; 4]) -> [[Point2; 3]; 2] {
    // diagonal 0-2 is interior iff 1 and 3 lie on opposite sides of it
    let s1 = orient2d(q[0], q[2], q[1]);
    let s3 = orient2d(q[0], q[2], q[3]);
    if s1 < 0.0 && s3 > 0.0 {
        [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
    } else {
        [[q[1], q[2], q[3]], [q[1], q[3], q[0]]]
    }
}
