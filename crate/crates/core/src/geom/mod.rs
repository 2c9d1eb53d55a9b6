//! Planar primitives: points, segments, oriented polygons and their signed
//! areas, segment intersection, vertex-to-cell assignment and convex clipping.

mod assign;
mod clip;
mod index;
mod intersect;

pub use assign::{assign_vertex, Assignment, Quadrant};
pub(crate) use clip::triangulate_quad;
pub use clip::{clip_convex, clip_to_triangle};
pub use index::SegmentIndex;
pub use intersect::{segment_intersection, EndpointFlags, Intersection};

use thiserror::Error;

/// Length tolerance for every on-edge / endpoint-coincidence decision.
///
/// Domains are normalised to unit size, so this sits far above rounding noise
/// and far below the smallest cell width used in practice.
pub const EPS_GEOM: f64 = 1e-12;

/// Areas at or below this magnitude are treated as degenerate (zero).
pub const EPS_AREA: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("polygon is not convex and counterclockwise")]
    NonConvexInput,
    #[error("point ({x}, {y}) lies outside the four cells around vertex ({i}, {j})")]
    OutsidePatch { x: f64, y: f64, i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }

    /// Mirror across the diagonal `x = y`.
    pub fn swapped(self) -> Point2 {
        Point2::new(self.y, self.x)
    }

    pub fn approx_eq(self, o: Point2, tol: f64) -> bool {
        (self.x - o.x).abs() <= tol && (self.y - o.y).abs() <= tol
    }
}

impl std::fmt::Display for Point2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;

    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

/// Twice the signed area of triangle `a b c`; positive when counterclockwise.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Distance from `p` to the closed segment `a b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn reversed(self) -> Segment {
        Segment::new(self.b, self.a)
    }

    pub fn length(self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn at(self, t: f64) -> Point2 {
        self.a.lerp(self.b, t)
    }

    pub fn swapped(self) -> Segment {
        Segment::new(self.a.swapped(), self.b.swapped())
    }
}

/// Correctly rounded sum of `values` (Shewchuk's exact partials).
///
/// The result depends only on the multiset of inputs, so negating every input
/// negates the result exactly.
pub fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut used = 0;
        for k in 0..partials.len() {
            let mut y = partials[k];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[used] = lo;
                used += 1;
            }
            x = hi;
        }
        partials.truncate(used);
        partials.push(x);
    }

    let Some(mut k) = partials.len().checked_sub(1) else {
        return 0.0;
    };
    let mut hi = partials[k];
    let mut lo = 0.0;
    while k > 0 {
        k -= 1;
        let x = hi;
        let y = partials[k];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    // round-half-even correction across the remaining partials
    if k > 0 && ((lo < 0.0 && partials[k - 1] < 0.0) || (lo > 0.0 && partials[k - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// An ordered vertex loop. The closing edge from the last vertex back to the
/// first is implicit; orientation is given by traversal order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrientedPolygon {
    pub vertices: Vec<Point2>,
}

impl OrientedPolygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.vertices.iter().map(|p| p.swapped()).collect())
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| Segment::new(self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// Shoelace signed area, `½ Σ (x_k y_{k+1} − y_k x_{k+1})`.
    ///
    /// Counterclockwise loops are positive. Repeated or collinear vertices
    /// need no special handling: a collapsed loop simply sums to zero.
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let terms = (0..n).map(|k| {
            let p = self.vertices[k];
            let q = self.vertices[(k + 1) % n];
            p.x * q.y - p.y * q.x
        });
        0.5 * exact_sum(terms)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Vertex average (not the area centroid).
    pub fn vertex_mean(&self) -> Point2 {
        let n = self.vertices.len().max(1) as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point2::new(sx / n, sy / n)
    }

    /// Convex and counterclockwise, with collinear vertices tolerated.
    pub fn is_convex_ccw(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.signed_area() <= 0.0 {
            return false;
        }
        (0..n).all(|k| {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % n];
            let c = self.vertices[(k + 2) % n];
            let scale = (b - a).norm().max((c - b).norm());
            orient2d(a, b, c) >= -EPS_GEOM * scale
        })
    }

    /// Nonzero winding number of `p`; points on the boundary are unreliable.
    pub fn winding_number(&self, p: Point2) -> i32 {
        let mut wn = 0;
        for e in self.edges() {
            if e.a.y <= p.y {
                if e.b.y > p.y && orient2d(e.a, e.b, p) > 0.0 {
                    wn += 1;
                }
            } else if e.b.y <= p.y && orient2d(e.a, e.b, p) < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Inside or within `EPS_GEOM` of the boundary.
    pub fn contains_closed(&self, p: Point2) -> bool {
        self.edges().any(|e| point_segment_distance(p, e.a, e.b) <= EPS_GEOM) || self.winding_number(p) != 0
    }

    /// A point strictly inside the region of nonzero winding, chosen at the
    /// middle of the widest interior interval along a horizontal scanline
    /// placed in the largest vertical gap between vertices.
    pub fn interior_point(&self) -> Option<Point2> {
        let mut ys: Vec<f64> = self.vertices.iter().map(|p| p.y).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let (lo, hi) = ys
            .windows(2)
            .map(|w| (w[0], w[1]))
            .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))?;
        let y0 = 0.5 * (lo + hi);

        let mut crossings: Vec<(f64, i32)> = self
            .edges()
            .filter(|e| (e.a.y < y0) != (e.b.y < y0))
            .map(|e| {
                let x = e.a.x + (y0 - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
                (x, if e.b.y > e.a.y { 1 } else { -1 })
            })
            .collect();
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut winding = 0;
        let mut best: Option<(f64, f64)> = None;
        for w in crossings.windows(2) {
            winding += w[0].1;
            let width = w[1].0 - w[0].0;
            if winding != 0 && best.is_none_or(|(_, bw)| width > bw) {
                best = Some((0.5 * (w[0].0 + w[1].0), width));
            }
        }
        best.filter(|&(_, w)| w > 0.0).map(|(x, _)| Point2::new(x, y0))
    }
}

impl From<Vec<Point2>> for OrientedPolygon {
    fn from(v: Vec<Point2>) -> Self {
        Self::new(v)
    }
}

/// Shoelace area of an arbitrary vertex loop. Fails on non-finite input.
pub fn signed_area(poly: &OrientedPolygon) -> Result<f64, GeomError> {
    if poly.vertices.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    Ok(poly.signed_area())
}
