use super::{point_segment_distance, GeomError, Point2, Segment, EPS_GEOM};

/// Which segment endpoints the contact point coincides with (within
/// [`EPS_GEOM`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EndpointFlags {
    pub first_start: bool,
    pub first_end: bool,
    pub second_start: bool,
    pub second_end: bool,
}

impl EndpointFlags {
    pub fn on_first(self) -> bool {
        self.first_start || self.first_end
    }

    pub fn on_second(self) -> bool {
        self.second_start || self.second_end
    }

    pub fn any(self) -> bool {
        self.on_first() || self.on_second()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    Empty,
    /// Single contact; `t` and `u` are the parameters along the first and
    /// second segment.
    Point {
        point: Point2,
        t: f64,
        u: f64,
        endpoints: EndpointFlags,
    },
    /// The segments share a sub-segment of positive length, given in the
    /// direction of the first segment.
    Overlap(Segment),
}

impl Intersection {
    pub fn is_empty(&self) -> bool {
        matches!(self, Intersection::Empty)
    }

    /// Transversal crossing strictly inside both segments.
    pub fn is_proper(&self) -> bool {
        matches!(self, Intersection::Point { endpoints, .. } if !endpoints.any())
    }
}

/// Intersect two closed segments.
///
/// Parallel segments are detected when the sine of the angle between them is
/// at most `EPS_GEOM`; they are collinear when the offset is within
/// `EPS_GEOM`. Contact points near an endpoint snap to that endpoint exactly,
/// so that shared vertices keep bit-identical coordinates downstream.
pub fn segment_intersection(s1: Segment, s2: Segment) -> Result<Intersection, GeomError> {
    if !(s1.a.is_finite() && s1.b.is_finite() && s2.a.is_finite() && s2.b.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let r = s1.b - s1.a;
    let s = s2.b - s2.a;
    let len1 = r.norm();
    let len2 = s.norm();

    if len1 <= EPS_GEOM || len2 <= EPS_GEOM {
        return Ok(degenerate_contact(s1, s2, len1));
    }

    let qp = s2.a - s1.a;
    let denom = r.cross(s);
    let teps = EPS_GEOM / len1;
    let ueps = EPS_GEOM / len2;

    if denom.abs() <= EPS_GEOM * len1 * len2 {
        if qp.cross(r).abs() / len1 > EPS_GEOM {
            return Ok(Intersection::Empty);
        }
        return Ok(collinear_overlap(s1, s2, len1, teps));
    }

    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if t < -teps || t > 1.0 + teps || u < -ueps || u > 1.0 + ueps {
        return Ok(Intersection::Empty);
    }
    let endpoints = EndpointFlags {
        first_start: t <= teps,
        first_end: t >= 1.0 - teps,
        second_start: u <= ueps,
        second_end: u >= 1.0 - ueps,
    };
    let t = t.clamp(0.0, 1.0);
    let u = u.clamp(0.0, 1.0);
    let point = if endpoints.first_start {
        s1.a
    } else if endpoints.first_end {
        s1.b
    } else if endpoints.second_start {
        s2.a
    } else if endpoints.second_end {
        s2.b
    } else {
        s1.at(t)
    };
    Ok(Intersection::Point { point, t, u, endpoints })
}

fn param_on(s: Segment, p: Point2) -> f64 {
    let r = s.b - s.a;
    let len2 = r.dot(r);
    if len2 == 0.0 {
        0.0
    } else {
        ((p - s.a).dot(r) / len2).clamp(0.0, 1.0)
    }
}

fn flags_for(s1: Segment, s2: Segment, p: Point2) -> EndpointFlags {
    EndpointFlags {
        first_start: p.dist(s1.a) <= EPS_GEOM,
        first_end: p.dist(s1.b) <= EPS_GEOM,
        second_start: p.dist(s2.a) <= EPS_GEOM,
        second_end: p.dist(s2.b) <= EPS_GEOM,
    }
}

fn degenerate_contact(s1: Segment, s2: Segment, len1: f64) -> Intersection {
    // at least one segment is (numerically) a point
    let (p, other) = if len1 <= EPS_GEOM { (s1.a, s2) } else { (s2.a, s1) };
    if point_segment_distance(p, other.a, other.b) > EPS_GEOM {
        return Intersection::Empty;
    }
    Intersection::Point {
        point: p,
        t: param_on(s1, p),
        u: param_on(s2, p),
        endpoints: flags_for(s1, s2, p),
    }
}

fn collinear_overlap(s1: Segment, s2: Segment, len1: f64, teps: f64) -> Intersection {
    let r = s1.b - s1.a;
    let l2 = len1 * len1;
    let p0 = (s2.a - s1.a).dot(r) / l2;
    let p1 = (s2.b - s1.a).dot(r) / l2;
    let lo = p0.min(p1).max(0.0);
    let hi = p0.max(p1).min(1.0);
    if hi < lo - teps {
        return Intersection::Empty;
    }
    // snap interval ends onto actual endpoints so both segments agree
    let pick = |param: f64| -> Point2 {
        if param <= teps {
            s1.a
        } else if param >= 1.0 - teps {
            s1.b
        } else if (param - p0).abs() <= teps {
            s2.a
        } else if (param - p1).abs() <= teps {
            s2.b
        } else {
            s1.at(param)
        }
    };
    if hi - lo <= teps {
        let p = pick(0.5 * (lo + hi));
        return Intersection::Point {
            point: p,
            t: param_on(s1, p),
            u: param_on(s2, p),
            endpoints: flags_for(s1, s2, p),
        };
    }
    Intersection::Overlap(Segment::new(pick(lo), pick(hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point2::new(ax, ay), Point2::new(bx, by))
    }

    #[test]
    fn symmetric_cross() {
        let r = segment_intersection(seg(0., 0., 1., 1.), seg(0., 1., 1., 0.)).unwrap();
        match r {
            Intersection::Point { point, t, u, endpoints } => {
                assert_eq!(point, Point2::new(0.5, 0.5));
                assert_eq!((t, u), (0.5, 0.5));
                assert!(!endpoints.any());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_disjoint() {
        let r = segment_intersection(seg(0., 0., 1., 0.), seg(0., 1., 1., 1.)).unwrap();
        assert_eq!(r, Intersection::Empty);
    }

    #[test]
    fn collinear_overlap_reported() {
        let r = segment_intersection(seg(0., 0., 1., 0.), seg(0.5, 0., 2., 0.)).unwrap();
        assert_eq!(r, Intersection::Overlap(seg(0.5, 0., 1., 0.)));
    }

    #[test]
    fn collinear_touching_is_a_point() {
        let r = segment_intersection(seg(0., 0., 1., 0.), seg(1., 0., 2., 0.)).unwrap();
        match r {
            Intersection::Point { point, endpoints, .. } => {
                assert_eq!(point, Point2::new(1.0, 0.0));
                assert!(endpoints.first_end && endpoints.second_start);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn t_junction_snaps_to_endpoint() {
        let r = segment_intersection(seg(0., 0., 1., 0.), seg(0.3, 0., 0.3, 1.)).unwrap();
        match r {
            Intersection::Point { point, endpoints, .. } => {
                assert_eq!(point, Point2::new(0.3, 0.0));
                assert!(endpoints.second_start && !endpoints.on_first());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_length_segments() {
        let p = seg(0.5, 0.0, 0.5, 0.0);
        assert!(!segment_intersection(p, seg(0., 0., 1., 0.)).unwrap().is_empty());
        assert!(segment_intersection(p, seg(0., 1., 1., 1.)).unwrap().is_empty());
    }

    #[test]
    fn nan_rejected() {
        assert_eq!(
            segment_intersection(seg(0., f64::NAN, 1., 0.), seg(0., 1., 1., 1.)),
            Err(GeomError::NonFinite)
        );
    }
}
